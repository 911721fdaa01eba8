"""Observation-driven evaluation of program-terms over diagram environments.

Terms are evaluated by lazy graph reduction: every subterm lives in a cell
that is overwritten with its head-normal form once forced, so shared
subterms and cyclic environment entries are reduced at most once per
session.
"""

import sys
from contextlib import contextmanager
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Tuple, Union

from .config import config
from .data_system import DataSystem
from .log_config import setup_logging
from .models import ValidationReport
from .program import Program, Rule
from .terms import CONS, Con, Fn, RegularCoterm, Term, Var, render_term, substitute

logger = setup_logging()

# Forcing nests once per pending argument; observed streams at depth 64 need a few thousand frames
STACK_HEADROOM = 10_000

NO_MATCH = 'no-matching-equation'
BUDGET_EXHAUSTED = 'budget-exhausted'

EQUAL = 'equal-up-to-depth'
DIFFERS = 'differs'
STALLED = 'stalled'


@dataclass(frozen=True)
class StallReason:
    kind: str
    steps: Optional[int] = None

    def __str__(self) -> str:
        if self.kind == NO_MATCH:
            return 'no-match'
        return f'budget@{self.steps}'


@dataclass(frozen=True)
class Generator:
    """An environment entry computed by a program applied to other entries."""

    program: Program
    arguments: Tuple[str, ...] = ()
    principal: Optional[str] = None

    @property
    def term(self) -> Fn:
        return Fn(self.principal or self.program.principal, tuple(Fn(a, ()) for a in self.arguments))


Binding = Union[RegularCoterm, Generator]


@dataclass(frozen=True)
class DiagramEnv:
    name: str
    bindings: Tuple[Tuple[str, Binding], ...] = ()
    system: str = ''

    @classmethod
    def of(cls, name: str, bindings: Mapping[str, Binding], system: str = '') -> 'DiagramEnv':
        return cls(name, tuple(bindings.items()), system)

    @classmethod
    def empty(cls) -> 'DiagramEnv':
        return cls('empty')

    @cached_property
    def lookup(self) -> Dict[str, Binding]:
        return dict(self.bindings)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(name for name, _ in self.bindings)

    def extend(self, bindings: Mapping[str, Binding]) -> 'DiagramEnv':
        merged = dict(self.bindings)
        merged.update(bindings)
        return DiagramEnv.of(self.name, merged, self.system)


def validate_env(env: DiagramEnv, program: Program, ds: DataSystem) -> ValidationReport:
    report = ValidationReport(f'env {env.name}')
    seen = set()
    for name, binding in env.bindings:
        if name in seen:
            report.add(f'duplicate binding {name}')
        seen.add(name)
        if name in program.functions or ds.has_constructor(name) or ds.is_standard(name):
            report.add(f'binding {name} clashes with a function or constructor name')
        if isinstance(binding, RegularCoterm):
            for node in binding.nodes:
                if not ds.has_constructor(node.constructor):
                    report.add(f'unknown constructor {node.constructor} in binding {name}')
                elif ds.constructor(node.constructor).arity != len(node.children):
                    report.add(f'node {node.constructor} of binding {name} has {len(node.children)} children')
        else:
            for argument in binding.arguments:
                if argument not in env.lookup:
                    report.add(f'generator {name} refers to unknown binding {argument}')
    return report


@dataclass(frozen=True)
class ApproxNode:
    constructor: str
    children: Tuple['Approximation', ...] = ()


@dataclass(frozen=True)
class Cut:
    depth: int


@dataclass(frozen=True)
class Stall:
    term: Term
    reason: StallReason


Approximation = Union[ApproxNode, Cut, Stall]


def render_approximation(approx: Approximation) -> str:
    if isinstance(approx, Cut):
        return f'<cut@{approx.depth}>'
    if isinstance(approx, Stall):
        return f'<stall:{approx.reason}>'
    if approx.constructor == CONS and len(approx.children) == 2:
        head, tail = approx.children
        left = render_approximation(head)
        if isinstance(head, ApproxNode) and head.children:
            left = f'({left})'
        return f'{left}:{render_approximation(tail)}'
    if not approx.children:
        return approx.constructor
    inner = ', '.join(render_approximation(child) for child in approx.children)
    return f'{approx.constructor}({inner})'


def restrict(approx: Approximation, depth: int, level: int = 0) -> Approximation:
    """The approximation a shallower observation at `depth` would produce."""
    if not isinstance(approx, ApproxNode) or not approx.children:
        return approx
    if level >= depth:
        return Cut(depth)
    return ApproxNode(approx.constructor, tuple(restrict(c, depth, level + 1) for c in approx.children))


def approximation_term(approx: Approximation) -> Optional[Term]:
    """The data-term an approximation denotes when it has no cut or stall."""
    if not isinstance(approx, ApproxNode):
        return None
    children = []
    for child in approx.children:
        term = approximation_term(child)
        if term is None:
            return None
        children.append(term)
    return Con(approx.constructor, tuple(children))


def stream_bits(approx: Approximation) -> List[str]:
    """Heads of the leading fully observed cons cells."""
    bits = []
    while isinstance(approx, ApproxNode) and approx.constructor == CONS and len(approx.children) == 2:
        head, approx = approx.children
        if not isinstance(head, ApproxNode) or head.children:
            break
        bits.append(head.constructor)
    return bits


@dataclass(frozen=True)
class BisimResult:
    verdict: str
    depth: int
    path: Tuple[int, ...] = ()
    reason: Optional[StallReason] = None

    @property
    def equal(self) -> bool:
        return self.verdict == EQUAL

    def __str__(self) -> str:
        if self.verdict == EQUAL:
            return f'{EQUAL}({self.depth})'
        path = '[' + ', '.join(str(i) for i in self.path) + ']'
        if self.verdict == DIFFERS:
            return f'{DIFFERS}({path})'
        return f'{STALLED}({path}, {self.reason})'


@contextmanager
def _stack_headroom():
    previous = sys.getrecursionlimit()
    sys.setrecursionlimit(max(previous, STACK_HEADROOM))
    try:
        yield
    finally:
        sys.setrecursionlimit(previous)


class _Stuck(Exception):
    def __init__(self, term: Term):
        super().__init__(render_term(term))
        self.term = term


class _OutOfBudget(Exception):
    pass


class Cell:
    """A node of the evaluation graph: pending term, head-normal form, or forward pointer."""

    __slots__ = ('constructor', 'children', 'term', 'scope', 'rules', 'arguments', 'forward', 'stuck')

    def __init__(self, term: Optional[Term] = None, scope: Optional[Dict[str, 'Cell']] = None,
                 rules: Optional[Mapping[str, Tuple[Rule, ...]]] = None):
        self.constructor: Optional[str] = None
        self.children: List['Cell'] = []
        self.term = term
        self.scope = scope or {}
        self.rules = rules
        self.arguments: Optional[List['Cell']] = None
        self.forward: Optional['Cell'] = None
        self.stuck: Optional[Term] = None

    def resolve(self) -> 'Cell':
        cell = self
        while cell.forward is not None:
            cell = cell.forward
        return cell

    def settle(self, constructor: str, children: List['Cell']):
        self.constructor = constructor
        self.children = children
        self.term = None
        self.scope = {}
        self.arguments = None


class EvalSession:
    """Single-threaded evaluation state for one program and environment."""

    def __init__(self, program: Program, env: Optional[DiagramEnv] = None, budget: Optional[int] = None):
        self.program = program
        self.env = env or DiagramEnv.empty()
        self.budget = budget or config.eval.budget
        self._globals: Dict[str, Cell] = {}
        self._steps = 0

    def cell(self, term: Term, scope: Optional[Dict[str, Cell]] = None) -> Cell:
        return self._alloc(term, scope or {}, self.program.rules)

    def _alloc(self, term: Term, scope: Dict[str, Cell], rules) -> Cell:
        if isinstance(term, Var) and term.name in scope:
            return scope[term.name]
        return Cell(term, scope, rules)

    def _binding_cell(self, name: str) -> Optional[Cell]:
        if name in self._globals:
            return self._globals[name]
        binding = self.env.lookup.get(name)
        if binding is None:
            return None
        if isinstance(binding, RegularCoterm):
            cells = [Cell() for _ in binding.nodes]
            for cell, node in zip(cells, binding.nodes):
                cell.settle(node.constructor, [cells[child] for child in node.children])
            self._globals[name] = cells[binding.entry]
        else:
            self._globals[name] = Cell(binding.term, {}, binding.program.rules)
        return self._globals[name]

    def _tick(self):
        self._steps += 1
        if self._steps > self.budget:
            raise _OutOfBudget()

    def _whnf(self, cell: Cell) -> Cell:
        while True:
            cell = cell.resolve()
            if cell.constructor is not None:
                return cell
            if cell.stuck is not None:
                raise _Stuck(cell.stuck)
            term = cell.term
            if isinstance(term, Var):
                target = cell.scope.get(term.name)
                if target is None:
                    cell.stuck = term
                    raise _Stuck(term)
                cell.forward = target
                continue
            if isinstance(term, Con):
                cell.settle(term.name, [self._alloc(arg, cell.scope, cell.rules) for arg in term.args])
                return cell

            rules = cell.rules.get(term.name)
            if rules is None and not term.args:
                target = self._binding_cell(term.name)
                if target is not None:
                    self._tick()
                    cell.forward = target
                    continue
            if not rules:
                cell.stuck = self.read_back(cell, 3)
                raise _Stuck(cell.stuck)

            if cell.arguments is None:
                cell.arguments = [self._alloc(arg, cell.scope, cell.rules) for arg in term.args]
            arguments = cell.arguments
            for rule in rules:
                bindings: Dict[str, Cell] = {}
                if all(self._match(p, a, bindings) for p, a in zip(rule.patterns, arguments)):
                    self._tick()
                    cell.term = rule.rhs
                    cell.scope = bindings
                    cell.arguments = None
                    break
            else:
                cell.stuck = Fn(term.name, tuple(self.read_back(a, 3) for a in arguments))
                raise _Stuck(cell.stuck)

    def _match(self, pattern: Term, cell: Cell, bindings: Dict[str, Cell]) -> bool:
        if isinstance(pattern, Var):
            bindings[pattern.name] = cell
            return True
        whnf = self._whnf(cell)
        if whnf.constructor != pattern.name or len(whnf.children) != len(pattern.args):
            return False
        return all(self._match(p, c, bindings) for p, c in zip(pattern.args, whnf.children))

    def head(self, cell: Cell) -> Union[Cell, Stall]:
        """Head-normalize within a fresh step budget."""
        self._steps = 0
        try:
            with _stack_headroom():
                return self._whnf(cell)
        except _Stuck as stuck:
            return Stall(stuck.term, StallReason(NO_MATCH))
        except (_OutOfBudget, RecursionError):
            logger.debug(f'Step budget {self.budget} exhausted in session for {self.program.name}')
            return Stall(self.read_back(cell, 3), StallReason(BUDGET_EXHAUSTED, self.budget))

    def read_back(self, cell: Cell, depth: int) -> Term:
        """The current (partially evaluated) term of a cell, cut off at `depth`."""
        cell = cell.resolve()
        if depth <= 0:
            return Var('…')
        if cell.constructor is not None:
            return Con(cell.constructor, tuple(self.read_back(c, depth - 1) for c in cell.children))
        if cell.stuck is not None:
            return cell.stuck
        term = cell.term
        if cell.arguments is not None and isinstance(term, Fn):
            return Fn(term.name, tuple(self.read_back(a, depth - 1) for a in cell.arguments))
        mapping = {name: self.read_back(c, depth - 1) for name, c in cell.scope.items()}
        return substitute(term, mapping)

    def observe(self, term: Term, depth: int) -> Approximation:
        """Breadth-first unfolding of `term` down to `depth`."""
        root = self.cell(term)
        results: Dict[Tuple[int, ...], Union[Approximation, Tuple[str, int]]] = {}
        level = [((), root)]
        for current in range(depth + 1):
            upcoming = []
            for path, cell in level:
                outcome = self.head(cell)
                if isinstance(outcome, Stall):
                    results[path] = outcome
                elif not outcome.children:
                    results[path] = ApproxNode(outcome.constructor)
                elif current == depth:
                    results[path] = Cut(depth)
                else:
                    results[path] = (outcome.constructor, len(outcome.children))
                    upcoming.extend((path + (i,), child) for i, child in enumerate(outcome.children))
            level = upcoming

        def assemble(path: Tuple[int, ...]) -> Approximation:
            entry = results[path]
            if isinstance(entry, tuple):
                name, arity = entry
                return ApproxNode(name, tuple(assemble(path + (i,)) for i in range(arity)))
            return entry

        return assemble(())

    def compare(self, t1: Term, t2: Term, depth: int) -> BisimResult:
        """Head-constructor agreement of t1 and t2 under every deep destructor up to `depth`."""
        level = [((), self.cell(t1), self.cell(t2))]
        seen = set()
        for current in range(depth + 1):
            upcoming = []
            for path, left, right in level:
                left = self.head(left)
                if isinstance(left, Stall):
                    return BisimResult(STALLED, depth, path, left.reason)
                right = self.head(right)
                if isinstance(right, Stall):
                    return BisimResult(STALLED, depth, path, right.reason)
                key = (id(left), id(right))
                if key in seen:
                    continue
                seen.add(key)
                if left.constructor != right.constructor or len(left.children) != len(right.children):
                    return BisimResult(DIFFERS, depth, path)
                if current < depth:
                    upcoming.extend(
                        (path + (i,), a, b)
                        for i, (a, b) in enumerate(zip(left.children, right.children), start=1)
                    )
            level = upcoming
        return BisimResult(EQUAL, depth)


def observe(program: Program, env: Optional[DiagramEnv], term: Term,
            depth: Optional[int] = None, budget: Optional[int] = None) -> Approximation:
    depth = config.eval.depth if depth is None else depth
    return EvalSession(program, env, budget).observe(term, depth)


def derives_omega(program: Program, env: Optional[DiagramEnv], t1: Term, t2: Term,
                  depth: Optional[int] = None, budget: Optional[int] = None) -> BisimResult:
    """Whether t1 and t2 agree on the head constructor under every deep destructor of length <= depth.

    A difference is reported at the destructor path, 1-based, leading from
    the roots to the first pair of subterms whose head constructors differ.
    `[]` means the roots themselves differ; `0:v_b` against `1:v_a` differs
    at `[1]`, the heads.
    """
    depth = config.eval.depth if depth is None else depth
    return EvalSession(program, env, budget).compare(t1, t2, depth)


def bisim_depth(program: Program, env: Optional[DiagramEnv], t1: Term, t2: Term,
                depth: Optional[int] = None) -> BisimResult:
    return derives_omega(program, env, t1, t2, depth, config.eval.budget)


def normal_form(program: Program, term: Term, env: Optional[DiagramEnv] = None,
                depth: int = 64, budget: Optional[int] = None) -> Optional[Term]:
    """The data-term `term` evaluates to, when that is finite and shallower than `depth`."""
    return approximation_term(observe(program, env, term, depth, budget))
