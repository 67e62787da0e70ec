"""Access to the packaged canonical template and example corpus."""

from __future__ import annotations

from importlib import resources

from .model import Template
from .serialization import parse_template

CANONICAL_TEMPLATE_FILE = "canonical.dct.json"


def data_dir() -> str:
    """Filesystem path of the packaged data directory (templates + cards)."""
    return str(resources.files("datacardkit") / "data")


def cards_dir() -> str:
    return str(resources.files("datacardkit") / "data" / "cards")


def canonical_template_bytes() -> bytes:
    return (resources.files("datacardkit") / "data" / CANONICAL_TEMPLATE_FILE).read_bytes()


def canonical_template() -> Template:
    """The shipped general-purpose template covering all 31 themes."""
    return parse_template(canonical_template_bytes())
