from dataclasses import dataclass, field
from typing import Any, List, Optional, Tuple


@dataclass
class ValidationReport:
    """Outcome of validating a data system, program or environment."""

    subject: str
    violations: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str):
        self.violations.append(message)

    def extend(self, other: 'ValidationReport'):
        self.violations.extend(other.violations)


@dataclass
class CommandReport:
    """Standardized container for the outcome of one workbench command."""

    command: str
    verdict: bool = True
    summary: Optional[str] = None
    rows: List[Tuple[str, str]] = field(default_factory=list)
    headers: Tuple[str, str] = ('key', 'value')
    payload: Optional[Any] = None
    is_error: bool = False

    def add_row(self, key: str, value: Any):
        self.rows.append((str(key), str(value)))

    def mark_as_failed(self, description: str):
        """Mark report as a negative verdict with description."""
        self.verdict = False
        self.summary = description

    def mark_as_error(self, error_desc: str):
        """Mark report as an internal error with description."""
        self.verdict = False
        self.is_error = True
        self.summary = f"Error: {error_desc}"

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict else 1
