import random
from pathlib import Path

import pytest

from datacardkit.assets import canonical_template
from datacardkit.assets import cards_dir as _cards_dir
from datacardkit.derivation import TemplateStore, resolve
from datacardkit.serialization import parse_card, parse_template


def cards_dir() -> Path:
    return Path(_cards_dir())


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


@pytest.fixture(scope="session")
def canonical():
    return canonical_template()


@pytest.fixture(scope="session")
def corpus_store(canonical):
    store = TemplateStore([canonical])
    store.add(parse_template(_read(cards_dir() / "cv-fairness-extended.dct.json")))
    return store


@pytest.fixture(scope="session")
def cv_template(corpus_store):
    return resolve(corpus_store.get("cv-fairness-extended", 1), corpus_store)


@pytest.fixture(scope="session")
def cv_card(cv_template):
    return parse_card(_read(cards_dir() / "cv-people-boxes.dcc.json"), cv_template)


@pytest.fixture(scope="session")
def translation_card(canonical):
    return parse_card(_read(cards_dir() / "translation-bios.dcc.json"), canonical)


@pytest.fixture(scope="session")
def corpus_cards(cv_card, cv_template, translation_card, canonical):
    """(card, resolved template) pairs for every shipped card."""
    return [(cv_card, cv_template), (translation_card, canonical)]


@pytest.fixture
def rng():
    return random.Random(20220411)


# Verdict lines recorded by test_acceptance.py; echoed after the test
# summary so they survive output capture on passing runs.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
