"""Rendering: determinism, structural oracles, status strings, escaping."""

import random
from datetime import datetime, timezone

import pytest

from datacardkit.diagnostics import Diagnostic, Severity
from datacardkit.errors import BindError
from datacardkit.model import (
    Answer,
    AnswerSpec,
    Block,
    Card,
    Row,
    Section,
    Template,
)
from datacardkit.render import PENDING_MARK, render, telescope_tags
from datacardkit.synth import random_card, random_template
from datacardkit.taxonomy import AnswerKind, AnswerStatus, ScopeLevel

TS = datetime(2022, 1, 1, tzinfo=timezone.utc)


def _mini(answer_value="plain text"):
    template = Template(
        id="t", version=1, title="T",
        sections=(Section(id="s", title="S", rows=(
            Row(id="r", blocks=(Block(
                id="only", title="Only", question="What?",
                scope=ScopeLevel.TELESCOPE, theme="theme.publishers",
                answer_spec=AnswerSpec(kind=AnswerKind.SHORT_TEXT),
            ),)),
        )),),
    )
    card = Card(
        id="c", template_id="t", template_version=1, dataset_title="Mini",
        authors=(), audience_tags=(), created=TS, updated=TS,
        answers={"only": Answer(status=AnswerStatus.ANSWERED, value=answer_value)},
    )
    return card, template


class TestDeterminism:
    @pytest.mark.parametrize("format", ["markdown", "html"])
    def test_corpus_renders_byte_identical_twice(self, corpus_cards, format):
        for card, template in corpus_cards:
            first = render(card, template, format)
            second = render(card, template, format)
            assert first == second

    @pytest.mark.parametrize("format", ["markdown", "html"])
    def test_synthetic_corpus_is_deterministic(self, rng, format):
        for _ in range(15):
            template = random_template(rng)
            card = random_card(rng, template)
            assert render(card, template, format) == render(card, template, format)


class TestStructureOracles:
    def test_markdown_anchor_per_block(self, corpus_cards):
        for card, template in corpus_cards:
            text = render(card, template, "markdown").decode()
            block_ids = [b.id for b in template.blocks()]
            assert text.count('<a id="') == len(block_ids)
            for bid in block_ids:
                assert f'<a id="{bid}"></a>' in text

    def test_markdown_heading_depth_tracks_scope(self, cv_card, cv_template):
        text = render(cv_card, cv_template, "markdown").decode()
        lines = text.splitlines()
        by_scope = {ScopeLevel.TELESCOPE: 0, ScopeLevel.PERISCOPE: 0,
                    ScopeLevel.MICROSCOPE: 0}
        for block in cv_template.blocks():
            by_scope[block.scope] += 1
        assert sum(1 for l in lines if l.startswith("### ")) == by_scope[ScopeLevel.TELESCOPE]
        assert sum(1 for l in lines if l.startswith("#### ")) == by_scope[ScopeLevel.PERISCOPE]
        assert sum(1 for l in lines if l.startswith("##### ")) == by_scope[ScopeLevel.MICROSCOPE]

    def test_html_folds_deeper_scopes(self, rng):
        for _ in range(10):
            template = random_template(rng)
            card = random_card(rng, template)
            text = render(card, template, "html").decode()
            folded = sum(1 for b in template.blocks()
                         if b.scope is not ScopeLevel.TELESCOPE)
            visible = sum(1 for b in template.blocks()
                          if b.scope is ScopeLevel.TELESCOPE)
            assert text.count("<details") == folded
            assert text.count('class="block telescope"') == visible

    def test_html_contains_no_scripts(self, corpus_cards):
        for card, template in corpus_cards:
            text = render(card, template, "html").decode()
            assert "<script" not in text

    def test_every_question_appears(self, translation_card, canonical):
        text = render(translation_card, canonical, "markdown").decode()
        for block in canonical.blocks():
            assert block.question in text


class TestTelescopeTags:
    def test_tags_come_from_answered_telescopes_only(self, rng):
        for _ in range(10):
            template = random_template(rng)
            card = random_card(rng, template)
            tags = telescope_tags(card, template)
            assert tags == sorted(set(tags))
            choice_pool = set()
            for block in template.blocks():
                if block.scope is ScopeLevel.TELESCOPE:
                    choice_pool.update(block.answer_spec.choice_values())
                    answer = card.answer_for(block.id)
                    if (answer.status is AnswerStatus.ANSWERED
                            and block.answer_spec.kind is AnswerKind.TAG_LIST):
                        choice_pool.update(v.strip().lower() for v in answer.value)
            assert set(tags) <= choice_pool

    def test_cv_card_tag_header(self, cv_card, cv_template):
        text = render(cv_card, cv_template, "markdown").decode()
        tags = telescope_tags(cv_card, cv_template)
        assert "restricted" in tags
        header_line = next(l for l in text.splitlines() if l.startswith("**Tags:**"))
        for tag in tags:
            assert f"`{tag}`" in header_line


class TestStatusStrings:
    def test_unknown_renders_rationale_inline(self, cv_card, cv_template):
        text = render(cv_card, cv_template, "markdown").decode()
        assert "Unknown — The written criteria annotators used" in text

    def test_withheld_renders_rationale_inline(self, translation_card, canonical):
        text = render(translation_card, canonical, "markdown").decode()
        assert "Withheld — Team budget figures are proprietary" in text

    def test_gated_not_applicable_is_plain(self, translation_card, canonical):
        text = render(translation_card, canonical, "markdown").decode()
        assert "\nNot applicable\n" in text

    def test_pending_marker(self):
        card, template = _mini()
        blank = Card(
            id="c", template_id="t", template_version=1, dataset_title="Mini",
            authors=(), audience_tags=(), created=TS, updated=TS, answers={},
        )
        for format in ("markdown", "html"):
            assert PENDING_MARK in render(blank, template, format).decode()

    def test_number_renders_units(self, cv_card, cv_template):
        text = render(cv_card, cv_template, "markdown").decode()
        assert "100000 boxes" in text


class TestEscaping:
    def test_html_escapes_answer_content(self):
        card, template = _mini('<script>alert("x")</script> & more')
        text = render(card, template, "html").decode()
        assert "<script>" not in text
        assert "&lt;script&gt;" in text and "&amp; more" in text

    def test_markdown_passes_content_through(self):
        card, template = _mini("value with *asterisks*")
        assert "value with *asterisks*" in render(card, template, "markdown").decode()


class TestAnnotations:
    def test_badges_appear_next_to_blocks(self):
        card, template = _mini()
        diag = Diagnostic(rule="STAT-001", severity=Severity.ERROR,
                          path="s/r/only", message="placeholder, not an answer")
        md = render(card, template, "markdown", annotations=[diag]).decode()
        assert "> error[STAT-001]: placeholder, not an answer" in md
        html = render(card, template, "html", annotations=[diag]).decode()
        assert "error[STAT-001]" in html

    def test_no_annotations_no_badges(self):
        card, template = _mini()
        assert "badge" not in render(card, template, "markdown").decode()


class TestErrors:
    def test_unknown_format_rejected(self):
        card, template = _mini()
        with pytest.raises(ValueError, match="format"):
            render(card, template, "pdf")

    def test_template_mismatch_rejected(self, cv_card, canonical):
        with pytest.raises(BindError):
            render(cv_card, canonical)

    def test_unknown_answer_key_rejected(self):
        card, template = _mini()
        bad = Card(
            id="c", template_id="t", template_version=1, dataset_title="Mini",
            authors=(), audience_tags=(), created=TS, updated=TS,
            answers={"ghost": Answer(status=AnswerStatus.ANSWERED, value="x")},
        )
        with pytest.raises(BindError, match="ghost"):
            render(bad, template)


class TestTotality:
    def test_all_kinds_render_without_error(self, rng):
        # synthetic templates exercise every answer kind and status
        for _ in range(25):
            template = random_template(rng)
            card = random_card(rng, template)
            for format in ("markdown", "html"):
                out = render(card, template, format)
                assert out.decode("utf-8")
