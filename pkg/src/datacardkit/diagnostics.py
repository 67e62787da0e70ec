"""Diagnostic records emitted by validation and lint passes."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Diagnostic:
    """One finding: a rule id from the published catalog, a location, and a message.

    ``path`` is a ``/``-joined chain of section/row/block ids; the empty string
    addresses the document root.
    """

    rule: str
    severity: Severity
    path: str
    message: str
    hint: str | None = None

    def sort_key(self) -> tuple[str, str]:
        return (self.path, self.rule)

    def format(self, prefix: str = "") -> str:
        where = self.path or "/"
        text = f"{self.severity.value}[{self.rule}] {prefix}{where}: {self.message}"
        if self.hint:
            text += f" ({self.hint})"
        return text

    def with_path_prefix(self, prefix: str) -> "Diagnostic":
        return Diagnostic(self.rule, self.severity, f"{prefix}{self.path}",
                          self.message, self.hint)


def sort_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Deterministic order: by (path, rule id)."""
    return sorted(diags, key=Diagnostic.sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diags)


@dataclass
class DiagnosticCollector:
    """Accumulates findings during a single pass."""

    found: list[Diagnostic] = field(default_factory=list)

    def add(self, rule: str, severity: Severity, path: str, message: str,
            hint: str | None = None) -> None:
        self.found.append(Diagnostic(rule, severity, path, message, hint))

    def sorted(self) -> list[Diagnostic]:
        return sort_diagnostics(self.found)
