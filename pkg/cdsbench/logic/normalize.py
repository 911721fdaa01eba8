"""Detour elimination and the strong-positivity scan of normal derivations."""

from dataclasses import dataclass
from typing import Optional

from ..config import config
from ..errors import NormalizationLimitError
from ..log_config import setup_logging
from . import derivation as rules
from .derivation import Derivation, Path, substitute_assumption, substitute_variable
from .formulas import Formula, is_strongly_positive

logger = setup_logging()

# elimination rule -> matching introduction for its major premise
_DETOURS = {
    rules.AND_ELIM: rules.AND_INTRO,
    rules.IMP_ELIM: rules.IMP_INTRO,
    rules.OR_ELIM: rules.OR_INTRO,
    rules.EXISTS_ELIM: rules.EXISTS_INTRO,
    rules.FORALL_ELIM: rules.FORALL_INTRO,
}


def is_detour(d: Derivation) -> bool:
    intro = _DETOURS.get(d.rule)
    return intro is not None and bool(d.premises) and d.premises[0].rule == intro


def find_detour(d: Derivation) -> Optional[Path]:
    for path, current in d.nodes():
        if is_detour(current):
            return path
    return None


def _contract(d: Derivation) -> Derivation:
    major = d.premises[0]
    if d.rule == rules.AND_ELIM:
        return major.premises[d.attribute('index')]
    if d.rule == rules.IMP_ELIM:
        return substitute_assumption(major.premises[0], major.attribute('discharge'), d.premises[1])
    if d.rule == rules.OR_ELIM:
        index = major.attribute('index')
        return substitute_assumption(d.premises[1 + index], d.attribute(f'discharge{index}'), major.premises[0])
    if d.rule == rules.EXISTS_ELIM:
        minor = substitute_variable(d.premises[1], d.attribute('eigen'), major.attribute('witness'))
        return substitute_assumption(minor, d.attribute('discharge'), major.premises[0])
    # forall-elim of forall-intro
    return substitute_variable(major.premises[0], major.attribute('eigen'), d.attribute('witness'))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.steps = 0

    def spend(self):
        self.steps += 1
        if self.steps > self.limit:
            raise NormalizationLimitError(f'normalization exceeded {self.limit} reductions')


def _normalize(d: Derivation, budget: _Budget) -> Derivation:
    premises = tuple(_normalize(p, budget) for p in d.premises)
    if premises != d.premises:
        d = d.with_premises(premises)
    while is_detour(d):
        budget.spend()
        d = _contract(d)
        if d.premises:
            d = d.with_premises(tuple(_normalize(p, budget) for p in d.premises))
    return d


def normalize(d: Derivation, limit: Optional[int] = None) -> Derivation:
    """Contract every introduction that feeds the matching elimination."""
    budget = _Budget(limit or config.kernel.normalize_step_limit)
    result = _normalize(d, budget)
    logger.debug(f'Normalized derivation of size {d.size} to size {result.size} in {budget.steps} steps')
    return result


@dataclass(frozen=True)
class SpScan:
    ok: bool
    path: Optional[Path] = None
    formula: Optional[Formula] = None
    rule: Optional[str] = None


def assert_sp_proof(d: Derivation) -> SpScan:
    """First node, in pre-order, whose formula is not strongly positive."""
    for path, current in d.nodes():
        if not is_strongly_positive(current.conclusion):
            return SpScan(False, path, current.conclusion, current.rule)
    return SpScan(True)
