#!/usr/bin/env python3
"""Guided tour of the toolkit, start to finish, in a scratch directory.

Creates a blank card from the packaged canonical template, fills a few
answers (including an honest "unknown" with a rationale), lints it, renders
it to Markdown, forks the template, and finishes with index, search, and
diff. Every step shells through the same entry points as the ``datacard``
command, so the transcript doubles as CLI documentation.
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import sys
import tempfile
from collections import Counter
from pathlib import Path

from datacardkit.cli import main as datacard


def step(title: str) -> None:
    print(f"\n=== {title} " + "=" * max(0, 60 - len(title)))


def run(*argv: str) -> int:
    print(f"$ datacard {' '.join(argv)}")
    code = datacard(list(argv))
    print(f"(exit {code})")
    return code


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--workdir", help="use this directory instead of a temp one")
    args = parser.parse_args()
    work = Path(args.workdir) if args.workdir else Path(tempfile.mkdtemp(prefix="datacard-demo-"))
    work.mkdir(parents=True, exist_ok=True)
    print(f"working in {work}")

    step("1. blank card from the canonical template")
    card_path = work / "survey.dcc.json"
    code = run("new", "data-card-canonical",
               "--id", "street-survey",
               "--title", "Street-Level Imagery Survey",
               "--author", "Field Data Team:producer",
               "--tag", "vision",
               "--created", "2022-06-01T09:00:00Z",
               "-o", str(card_path))
    if code:
        return code

    step("2. answer a few blocks (one honestly unknown)")
    obj = json.loads(card_path.read_text())
    obj["answers"]["publishers"] = {
        "status": "answered",
        "value": "Municipal open-data portal, imagery division",
    }
    obj["answers"]["descriptive-statistics"] = {"status": "answered", "value": 48210}
    obj["answers"]["collection-process"] = {
        "status": "answered",
        "value": "Vehicle-mounted cameras on fixed routes, one frame per 10 m",
    }
    obj["answers"]["adjudication-policies"] = {
        "status": "unknown",
        "rationale": "The labeling vendor dissolved; their escalation "
                     "playbook was never delivered to us.",
    }
    card_path.write_text(json.dumps(obj, indent=2, ensure_ascii=False))
    print("filled publishers, descriptive-statistics, collection-process;")
    print("marked adjudication-policies unknown with a rationale")

    step("3. lint (pending blocks warn, nothing errors)")
    print(f"$ datacard lint {card_path}")
    captured = io.StringIO()
    with contextlib.redirect_stderr(captured):
        code = datacard(["lint", str(card_path)])
    lines = captured.getvalue().splitlines()
    by_rule = Counter(line.split("]")[0].split("[")[-1] for line in lines)
    print(f"(exit {code}; a fresh card is mostly pending)")
    for rule, count in sorted(by_rule.items()):
        print(f"  {count:3d}x {rule}")
    for line in lines[:2]:
        print(f"  e.g. {line.split(':', 1)[1].strip()}")

    step("4. render to Markdown")
    md_path = work / "survey.md"
    run("render", str(card_path), "-o", str(md_path))
    text = md_path.read_text().splitlines()
    print("\n".join(text[:12]))
    print(f"... ({len(text)} lines total in {md_path})")

    step("5. fork the template for a stricter program")
    fork_path = work / "street-survey-fork.dct.json"
    run("derive", "--parent", "data-card-canonical",
        "--id", "street-survey-fork", "--title", "Street Survey Fork",
        "--suppress", "descriptive-statistics=Counts live in the registry, not the card",
        "--override-guidance", "publishers=Name the municipal office, not the portal brand.",
        "-o", str(fork_path))

    step("6. index and search the scratch directory")
    run("index", str(work))
    run("search", str(work), "--tag", "vision")

    step("7. revise an answer and diff the two versions")
    revised_path = work / "survey-v2.dcc.json"
    obj["answers"]["descriptive-statistics"]["value"] = 51877
    obj["updated"] = "2022-07-01T09:00:00Z"
    revised_path.write_text(json.dumps(obj, indent=2, ensure_ascii=False))
    run("diff", str(card_path), str(revised_path))

    step("done")
    print(f"artifacts kept in {work}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
