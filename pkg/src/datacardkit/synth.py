"""Seeded synthetic templates and cards for tests and demos.

Everything flows from one ``random.Random`` so corpora are reproducible from
a seed. Generated artifacts honor the parse-time invariants (valid slugs,
typed values, rationales where required) but are otherwise unconstrained,
which is the point: round-trip and oracle tests should not depend on
hand-picked friendly inputs.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .model import (
    Answer,
    AnswerSpec,
    Author,
    Block,
    Card,
    Choice,
    Gate,
    Provenance,
    Row,
    Section,
    Template,
)
from .taxonomy import (
    CANONICAL_THEMES,
    AnswerKind,
    AnswerStatus,
    AutomationPolicy,
    Interrogative,
    ScopeLevel,
)

_WORDS = (
    "amber", "basalt", "cedar", "delta", "ember", "fjord", "garnet", "harbor",
    "indigo", "juniper", "krill", "lagoon", "meadow", "nectar", "onyx",
    "prairie", "quartz", "reef", "sierra", "tundra", "umber", "vertex",
    "willow", "xenon", "yarrow", "zephyr",
)

_ROLES = ("producer", "steward", "analyst", "curator", "publisher")

_TAGS = ("vision", "text", "audio", "tabular", "multimodal", "internal",
         "benchmark", "survey", "scraped", "annotated")

_EPOCH = datetime(2021, 1, 1, tzinfo=timezone.utc)


def _slug(rng: random.Random, prefix: str = "") -> str:
    body = "-".join(rng.sample(_WORDS, rng.randint(1, 2)))
    return f"{prefix}{body}-{rng.randrange(10_000)}"


def _text(rng: random.Random, words: int) -> str:
    return " ".join(rng.choice(_WORDS) for _ in range(words)).capitalize() + "."


def _timestamp(rng: random.Random) -> datetime:
    ts = _EPOCH + timedelta(seconds=rng.randrange(4 * 365 * 24 * 3600))
    if rng.random() < 0.3:
        ts += timedelta(microseconds=rng.randrange(1_000_000))
    return ts


def _answer_spec(rng: random.Random) -> AnswerSpec:
    kind = rng.choice(list(AnswerKind))
    if kind in (AnswerKind.SINGLE_CHOICE, AnswerKind.MULTI_CHOICE):
        n = rng.randint(2, 5)
        values = rng.sample(_WORDS, n)
        return AnswerSpec(kind=kind, choices=tuple(
            Choice(value=v, display=v.capitalize()) for v in values))
    if kind is AnswerKind.TABLE:
        cols = tuple(w.capitalize() for w in rng.sample(_WORDS, rng.randint(1, 3)))
        return AnswerSpec(kind=kind, columns=cols)
    if kind is AnswerKind.NUMBER and rng.random() < 0.5:
        return AnswerSpec(kind=kind, units=rng.choice(("rows", "items", "GiB", "%")))
    return AnswerSpec(kind=kind)


def random_template(rng: random.Random, index: int = 0) -> Template:
    """Structurally valid template with varied shapes, kinds, and gates."""
    template_id = f"synth-template-{index:04d}"
    theme_pool = list(CANONICAL_THEMES)
    sections = []
    block_counter = 0
    for s in range(rng.randint(1, 4)):
        rows = []
        for r in range(rng.randint(1, 3)):
            scopes = sorted(
                (rng.choice(list(ScopeLevel)) for _ in range(rng.randint(1, 4))),
                key=lambda lvl: lvl.rank,
            )
            blocks = []
            for scope in scopes:
                block_counter += 1
                spec = _answer_spec(rng)
                gate = None
                # Gates point at an earlier telescope choice block in this row.
                if blocks and rng.random() < 0.25:
                    sources = [b for b in blocks
                               if b.scope is ScopeLevel.TELESCOPE
                               and b.answer_spec.choices]
                    if sources:
                        source = rng.choice(sources)
                        if source.answer_spec.kind is AnswerKind.SINGLE_CHOICE:
                            predicate = rng.choice(("equals", "answered"))
                        else:
                            predicate = rng.choice(("includes", "answered"))
                        value = None
                        if predicate != "answered":
                            value = rng.choice(source.answer_spec.choice_values())
                        gate = Gate(source_block=source.id, predicate=predicate, value=value)
                automation = AutomationPolicy.MANUAL_ONLY
                if scope is not ScopeLevel.MICROSCOPE and rng.random() < 0.2:
                    automation = AutomationPolicy.AUTOMATABLE
                blocks.append(Block(
                    id=f"blk-{index:04d}-{block_counter:03d}",
                    title=f"Block {block_counter} {rng.choice(_WORDS).capitalize()}",
                    question=_text(rng, rng.randint(4, 9)),
                    guidance=_text(rng, 6) if rng.random() < 0.4 else None,
                    scope=scope,
                    theme=rng.choice(theme_pool),
                    interrogative=(rng.choice(list(Interrogative))
                                   if rng.random() < 0.7 else None),
                    answer_spec=spec,
                    gate=gate,
                    automation_policy=automation,
                ))
            rows.append(Row(id=f"row-{index:04d}-{s}-{r}", blocks=tuple(blocks)))
        sections.append(Section(
            id=f"sec-{index:04d}-{s}",
            title=f"Section {s} {_text(rng, 2)}",
            rows=tuple(rows),
        ))
    return Template(
        id=template_id,
        version=1,
        title=f"Synthetic template {index}",
        sections=tuple(sections),
    )


def _random_value(rng: random.Random, spec: AnswerSpec):
    kind = spec.kind
    if kind in (AnswerKind.SHORT_TEXT, AnswerKind.MEDIA_REF):
        return _text(rng, rng.randint(2, 5))
    if kind is AnswerKind.LONG_TEXT:
        return _text(rng, rng.randint(8, 25))
    if kind is AnswerKind.CODE:
        return f"SELECT {rng.choice(_WORDS)} FROM {rng.choice(_WORDS)};"
    if kind is AnswerKind.SINGLE_CHOICE:
        return rng.choice(spec.choice_values())
    if kind is AnswerKind.MULTI_CHOICE:
        values = list(spec.choice_values())
        return rng.sample(values, rng.randint(1, len(values)))
    if kind is AnswerKind.NUMBER:
        roll = rng.random()
        if roll < 0.2:
            # Past the float-lossless line, to exercise string serialization.
            return rng.randrange(2**53 + 1, 2**60)
        if roll < 0.5:
            return round(rng.uniform(0, 10_000), 3)
        return rng.randrange(0, 1_000_000)
    if kind is AnswerKind.KEY_VALUE:
        return [{"key": f"{w}-{i}", "value": _text(rng, 2)}
                for i, w in enumerate(rng.sample(_WORDS, rng.randint(1, 4)))]
    if kind is AnswerKind.TABLE:
        return [[_text(rng, 1) for _ in spec.columns]
                for _ in range(rng.randint(0, 3))]
    if kind is AnswerKind.TAG_LIST:
        return rng.sample(_TAGS, rng.randint(1, 4))
    if kind is AnswerKind.LINK_LIST:
        out = []
        for i in range(rng.randint(1, 3)):
            item = {"url": f"https://example.org/{rng.choice(_WORDS)}/{i}"}
            if rng.random() < 0.5:
                item["label"] = _text(rng, 2)
            out.append(item)
        return out
    raise AssertionError(kind)


def _random_answer(rng: random.Random, spec: AnswerSpec) -> Answer | None:
    roll = rng.random()
    provenance = Provenance()
    if rng.random() < 0.1:
        provenance = Provenance(kind="automated", tool="synth-filler", tool_version="1.0")
    if roll < 0.6:
        return Answer(status=AnswerStatus.ANSWERED,
                      value=_random_value(rng, spec), provenance=provenance)
    if roll < 0.7:
        return Answer(status=AnswerStatus.UNKNOWN, rationale=_text(rng, 6))
    if roll < 0.75:
        return Answer(status=AnswerStatus.WITHHELD, rationale=_text(rng, 6))
    if roll < 0.85:
        return Answer(status=AnswerStatus.NOT_APPLICABLE, rationale=_text(rng, 5))
    return None  # pending stays implicit


def random_card(rng: random.Random, template: Template, card_id: str | None = None) -> Card:
    """Fill a template with a realistic mix of statuses; always parseable."""
    answers: dict[str, Answer] = {}
    for block in template.blocks():
        answer = _random_answer(rng, block.answer_spec)
        if answer is not None:
            answers[block.id] = answer
    created = _timestamp(rng)
    return Card(
        id=card_id or _slug(rng, "card-"),
        template_id=template.id,
        template_version=template.version,
        dataset_title=f"Dataset {_text(rng, 2)}",
        authors=tuple(Author(name=f"Author {rng.choice(_WORDS).capitalize()}",
                             role=rng.choice(_ROLES))
                      for _ in range(rng.randint(0, 3))),
        audience_tags=tuple(rng.sample(_TAGS, rng.randint(0, 4))),
        created=created,
        updated=created + timedelta(seconds=rng.randrange(0, 10_000_000)),
        answers=answers,
    )


# ---------------------------------------------------------------------------
# Single mutations, for diff oracles
# ---------------------------------------------------------------------------


def _with_answers(card: Card, answers: dict[str, Answer]) -> Card:
    return Card(
        id=card.id, template_id=card.template_id,
        template_version=card.template_version,
        dataset_title=card.dataset_title, authors=card.authors,
        audience_tags=card.audience_tags, created=card.created,
        updated=card.updated, answers=answers,
    )


def mutate_card(rng: random.Random, card: Card,
                template: Template) -> tuple[Card, str, str]:
    """Apply exactly one visible change; returns (card, change kind, subject).

    Change kinds match the diff vocabulary: answer-changed, status-changed,
    or metadata-changed with the subject naming the block or metadata field.
    """
    moves = []
    answered = [bid for bid, a in card.answers.items()
                if a.status is AnswerStatus.ANSWERED]
    mutable = [bid for bid in answered
               if not (template.block_map()[bid].answer_spec.kind is AnswerKind.SINGLE_CHOICE
                       and len(template.block_map()[bid].answer_spec.choices) < 2)]
    if mutable:
        moves.append("answer")
    if card.answers:
        moves.append("status")
    moves.extend(["title", "updated", "tags"])
    move = rng.choice(moves)

    if move == "answer":
        bid = rng.choice(sorted(mutable))
        block = template.block_map()[bid]
        old = card.answers[bid]
        new_value = _random_value(rng, block.answer_spec)
        while new_value == old.value:
            new_value = _random_value(rng, block.answer_spec)
        answers = dict(card.answers)
        answers[bid] = Answer(status=AnswerStatus.ANSWERED, value=new_value,
                              provenance=old.provenance, rationale=old.rationale)
        return _with_answers(card, answers), "answer-changed", bid

    if move == "status":
        bid = rng.choice(sorted(card.answers))
        old = card.answers[bid]
        answers = dict(card.answers)
        if old.status is AnswerStatus.ANSWERED and rng.random() < 0.4:
            del answers[bid]  # answered -> pending, by dropping the record
        elif old.status is AnswerStatus.ANSWERED:
            answers[bid] = Answer(status=AnswerStatus.UNKNOWN, rationale=_text(rng, 5))
        else:
            block = template.block_map()[bid]
            answers[bid] = Answer(status=AnswerStatus.ANSWERED,
                                  value=_random_value(rng, block.answer_spec))
        return _with_answers(card, answers), "status-changed", bid

    if move == "title":
        mutated = _with_answers(card, dict(card.answers))
        object.__setattr__(mutated, "dataset_title", card.dataset_title + " (revised)")
        return mutated, "metadata-changed", "dataset_title"
    if move == "updated":
        mutated = _with_answers(card, dict(card.answers))
        object.__setattr__(mutated, "updated", card.updated + timedelta(hours=1))
        return mutated, "metadata-changed", "updated"
    mutated = _with_answers(card, dict(card.answers))
    new_tag = next(t for t in _TAGS if t not in card.audience_tags)
    object.__setattr__(mutated, "audience_tags", card.audience_tags + (new_tag,))
    return mutated, "metadata-changed", "audience_tags"
