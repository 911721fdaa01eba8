"""Exceptions for misuse of the workbench.

Domain verdicts (violations, stalls, rejected proofs) are returned as data;
these exceptions signal inputs an operation cannot meaningfully process.
"""

from typing import Optional


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class UnknownIdentifierError(WorkbenchError):
    def __init__(self, name: str, kind: str = 'identifier'):
        super().__init__(f'unknown {kind} {name!r}')
        self.name = name
        self.kind = kind


class WorkspaceParseError(WorkbenchError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        where = f' at line {line}, column {column}' if line is not None else ''
        super().__init__(f'{message}{where}')
        self.line = line
        self.column = column


class SchemaError(WorkbenchError):
    """A corecurrence schema is malformed or refers to undefined components."""


class NormalizationLimitError(WorkbenchError):
    """Detour elimination exceeded its configured reduction limit."""


class NotStronglyPositiveError(WorkbenchError):
    """A formula outside the ∧/∨/∃ fragment reached realizability checking."""


class SubProofMissingError(WorkbenchError):
    """Proof generation needs a derivation for a component nobody supplied."""


class ExtractionError(WorkbenchError):
    """A derivation uses a rule extraction does not support."""
