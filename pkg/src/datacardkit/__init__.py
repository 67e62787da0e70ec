"""datacardkit: machine-readable, checkable dataset documentation.

Data cards are structured documents answering a template of questions about
a dataset at three zoom levels (telescope, periscope, microscope), with
explicit statuses for what is unknown, withheld, or not applicable. The
toolkit covers the full life of a card: template derivation and
reconciliation, strict canonical serialization, lifecycle (OFTEn) coverage,
linting, rubric reviews, deterministic rendering, and a searchable local
registry.
"""

from .derivation import TemplateStore, derive, reconcile, resolve
from .diagnostics import Diagnostic, Severity
from .lint import LintConfig, lint_card, lint_comparability, lint_template
from .model import (
    Answer,
    AnswerSpec,
    Author,
    Block,
    Card,
    Choice,
    CustomTheme,
    Gate,
    Lineage,
    Override,
    Provenance,
    Row,
    Section,
    Suppression,
    Template,
    validate_structural,
)
from .often import (
    ApplicabilityMask,
    OftenMatrix,
    coverage,
    generate_scaffold,
    theme_stage_map,
)
from .registry import ChangeSet, Index, build_index, diff, search
from .render import render
from .review import (
    AggregateReport,
    Dimension,
    Rating,
    ReviewRecord,
    aggregate,
    validate_review,
)
from .serialization import card_digest, parse_card, parse_template, serialize
from .taxonomy import (
    AnswerKind,
    AnswerStatus,
    AutomationPolicy,
    Interrogative,
    OftenStage,
    ScopeLevel,
    canonical_theme_set,
)

__version__ = "1.0.0"

__all__ = [
    "Answer", "AnswerKind", "AnswerSpec", "AnswerStatus", "AggregateReport",
    "ApplicabilityMask", "Author", "AutomationPolicy", "Block", "Card",
    "ChangeSet", "Choice", "CustomTheme", "Diagnostic", "Dimension", "Gate",
    "Index", "Interrogative", "Lineage", "LintConfig", "OftenMatrix",
    "OftenStage", "Override", "Provenance", "Rating", "ReviewRecord", "Row",
    "ScopeLevel", "Section", "Severity", "Suppression", "Template",
    "TemplateStore", "aggregate", "build_index", "canonical_theme_set",
    "card_digest", "coverage", "derive", "diff", "generate_scaffold",
    "lint_card", "lint_comparability", "lint_template", "parse_card",
    "parse_template", "reconcile", "render", "resolve", "search",
    "serialize", "theme_stage_map", "validate_review", "validate_structural",
]
