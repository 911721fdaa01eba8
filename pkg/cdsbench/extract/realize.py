"""Finite-depth realizability: does a stream realize a strongly positive formula?"""

from dataclasses import dataclass
from typing import Dict, Mapping, Optional, Tuple

from ..config import config
from ..errors import NotStronglyPositiveError
from ..evaluation import DIFFERS, STALLED, DiagramEnv, EvalSession, Stall, StallReason
from ..log_config import setup_logging
from ..logic.formulas import (
    Atom,
    Conjunction,
    Disjunction,
    Equality,
    Exists,
    Formula,
    is_strongly_positive,
    render_formula,
    substitute_formula,
)
from ..program import Program
from ..terms import Term, Var, render_term, substitute
from .streams import StreamSignature, split_term, stream_signature, with_split_library

logger = setup_logging()

HOLDS = 'holds-up-to-depth'
FAILS = 'fails'


@dataclass(frozen=True)
class RealizeResult:
    verdict: str
    depth: int
    path: Tuple[str, ...] = ()
    detail: str = ''
    reason: Optional[StallReason] = None

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS

    def __str__(self) -> str:
        if self.verdict == HOLDS:
            return f'{HOLDS}({self.depth})'
        where = '/'.join(self.path) or 'root'
        if self.verdict == FAILS:
            return f'{FAILS}({where}: {self.detail})'
        return f'{STALLED}({where}, {self.reason})'


@dataclass(frozen=True)
class RealizabilityJudgment:
    program: Program
    env: DiagramEnv
    realizer: Term
    formula: Formula
    depth: int
    eta: Tuple[Tuple[str, Term], ...] = ()


def infer_sorts(formula: Formula, signature: StreamSignature, sorts: Optional[Dict[str, str]] = None) -> Dict[str, str]:
    """Variables occurring in B-atoms, in head position of cons, or equated with booleans are B."""
    sorts = dict(sorts or {})
    if isinstance(formula, Atom):
        if formula.predicate == signature.head and isinstance(formula.term, Var):
            sorts[formula.term.name] = signature.head
        _head_positions(formula.term, signature, sorts)
    elif isinstance(formula, Equality):
        for side, other in ((formula.left, formula.right), (formula.right, formula.left)):
            if isinstance(side, Var) and signature.term_sort(other, sorts) == signature.head:
                sorts[side.name] = signature.head
            _head_positions(side, signature, sorts)
    elif isinstance(formula, Exists):
        sorts = infer_sorts(formula.body, signature, sorts)
    elif isinstance(formula, (Conjunction, Disjunction)):
        sorts = infer_sorts(formula.left, signature, sorts)
        sorts = infer_sorts(formula.right, signature, sorts)
    return sorts


def _head_positions(term: Term, signature: StreamSignature, sorts: Dict[str, str]):
    if isinstance(term, Var):
        return
    if term.name == signature.constructor and isinstance(term.args[0], Var):
        sorts[term.args[0].name] = signature.head
    for arg in term.args:
        _head_positions(arg, signature, sorts)


class _Checker:
    def __init__(self, session: EvalSession, signature: StreamSignature, depth: int):
        self.session = session
        self.signature = signature
        self.depth = depth

    def _compare(self, left: Term, right: Term, path: Tuple[str, ...]) -> Optional[RealizeResult]:
        outcome = self.session.compare(left, right, self.depth)
        if outcome.verdict == DIFFERS:
            return RealizeResult(FAILS, self.depth, path, f'{render_term(left)} differs from {render_term(right)} '
                                                         f'at {list(outcome.path)}')
        if outcome.verdict == STALLED:
            return RealizeResult(STALLED, self.depth, path, reason=outcome.reason)
        return None

    def check(self, sigma: Term, formula: Formula, path: Tuple[str, ...]) -> Optional[RealizeResult]:
        signature = self.signature
        if isinstance(formula, Atom):
            if formula.predicate == signature.head:
                return self._compare(signature.head_of(sigma), formula.term, path)
            return self._compare(sigma, formula.term, path)
        if isinstance(formula, Equality):
            sorts = infer_sorts(formula, signature)
            carrier = sigma
            if signature.term_sort(formula.left, sorts) == signature.head:
                carrier = signature.head_of(sigma)
            return self._compare(carrier, formula.left, path) or self._compare(carrier, formula.right, path)
        if isinstance(formula, Conjunction):
            return (self.check(split_term(sigma, 0), formula.left, path + ('&0',))
                    or self.check(split_term(sigma, 1), formula.right, path + ('&1',)))
        if isinstance(formula, Disjunction):
            selector = self.session.head(self.session.cell(signature.head_of(sigma)))
            if isinstance(selector, Stall):
                return RealizeResult(STALLED, self.depth, path, reason=selector.reason)
            if selector.constructor == signature.false:
                return self.check(signature.tail_of(sigma), formula.left, path + ('|0',))
            if selector.constructor == signature.true:
                return self.check(signature.tail_of(sigma), formula.right, path + ('|1',))
            return RealizeResult(FAILS, self.depth, path, f'selector bit is {selector.constructor}')
        # Existential: σ_0 carries the witness, σ_1 the body
        witness = split_term(sigma, 0)
        sorts = infer_sorts(formula.body, signature)
        if sorts.get(formula.var) == signature.head:
            witness = signature.head_of(witness)
        body = substitute_formula(formula.body, {formula.var: witness})
        return self.check(split_term(sigma, 1), body, path + (f'∃{formula.var}',))


def realizes(judgment: RealizabilityJudgment) -> RealizeResult:
    """Check every clause of `realizer ⊩ formula` down to the judgment's depth."""
    if not is_strongly_positive(judgment.formula):
        raise NotStronglyPositiveError(f'{render_formula(judgment.formula)} is not strongly positive')
    signature = stream_signature(judgment.program.system)
    session = EvalSession(with_split_library(judgment.program), judgment.env, config.roundtrip.budget)
    eta: Mapping[str, Term] = dict(judgment.eta)
    formula = substitute_formula(judgment.formula, eta)
    realizer = substitute(judgment.realizer, eta)
    outcome = _Checker(session, signature, judgment.depth).check(realizer, formula, ())
    if outcome is None:
        return RealizeResult(HOLDS, judgment.depth)
    logger.debug(f'Realizer {render_term(realizer)} for {render_formula(formula)}: {outcome}')
    return outcome


def check_realizer(program: Program, env: DiagramEnv, realizer: Term, formula: Formula, depth: int,
                   eta: Optional[Mapping[str, Term]] = None) -> RealizeResult:
    return realizes(RealizabilityJudgment(program, env, realizer, formula, depth, tuple((eta or {}).items())))
