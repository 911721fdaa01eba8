"""Constructor vocabularies, data systems and membership in the canonical model."""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

from .errors import UnknownIdentifierError
from .log_config import setup_logging
from .models import ValidationReport
from .terms import CONS, Con, Fn, RegularCoterm, Term, Var

logger = setup_logging()

INDUCTIVE = 'inductive'
COINDUCTIVE = 'coinductive'
PREDICATE_KINDS = (INDUCTIVE, COINDUCTIVE)
DISCRIMINATOR = 'delta'


class Membership(str, Enum):
    YES = 'yes'
    NO = 'no'
    UP_TO_DEPTH = 'yes-up-to-depth'


class SyntacticClass(str, Enum):
    DATA = 'data'
    BASE = 'base'
    PROGRAM = 'program'


_RANK = {Membership.NO: 0, Membership.UP_TO_DEPTH: 1, Membership.YES: 2}


@dataclass(frozen=True)
class Constructor:
    name: str
    arity: int


@dataclass(frozen=True)
class DataPredicate:
    name: str
    kind: str
    index: int

    @property
    def inductive(self) -> bool:
        return self.kind == INDUCTIVE


@dataclass(frozen=True)
class ConstructorType:
    """c : E_1 × … × E_r → E_0"""

    constructor: Constructor
    arguments: Tuple[DataPredicate, ...]
    result: DataPredicate

    def __str__(self) -> str:
        if not self.arguments:
            return f'{self.constructor.name} : {self.result.name}'
        domain = ' * '.join(p.name for p in self.arguments)
        return f'{self.constructor.name} : {domain} -> {self.result.name}'


@dataclass(frozen=True)
class DataSystem:
    name: str
    vocabulary: Tuple[Constructor, ...]
    predicates: Tuple[DataPredicate, ...]
    types: Tuple[ConstructorType, ...]
    destructor_names: Tuple[str, ...] = ()

    def has_constructor(self, name: str) -> bool:
        return any(c.name == name for c in self.vocabulary)

    def constructor(self, name: str) -> Constructor:
        for candidate in self.vocabulary:
            if candidate.name == name:
                return candidate
        raise UnknownIdentifierError(name, 'constructor')

    def predicate(self, name: str) -> DataPredicate:
        for candidate in self.predicates:
            if candidate.name == name:
                return candidate
        raise UnknownIdentifierError(name, 'data predicate')

    def has_predicate(self, name: str) -> bool:
        return any(p.name == name for p in self.predicates)

    def types_for(self, predicate: Union[str, DataPredicate]) -> List[ConstructorType]:
        """The constructor types whose result is `predicate` (its set C_n), in declaration order."""
        name = predicate if isinstance(predicate, str) else predicate.name
        return [t for t in self.types if t.result.name == name]

    def types_of(self, constructor: str, result: Optional[str] = None) -> List[ConstructorType]:
        return [
            t for t in self.types
            if t.constructor.name == constructor and (result is None or t.result.name == result)
        ]

    @property
    def max_arity(self) -> int:
        """m, the number of destructors; at least one so nullary vocabularies keep an identity projection."""
        return max([c.arity for c in self.vocabulary] + [1])

    def destructor_name(self, index: int) -> str:
        if not 1 <= index <= self.max_arity:
            raise UnknownIdentifierError(f'pi{index}', 'destructor')
        if index <= len(self.destructor_names):
            return self.destructor_names[index - 1]
        return f'pi{index}'

    def destructor_index(self, name: str) -> Optional[int]:
        for index in range(1, self.max_arity + 1):
            if self.destructor_name(index) == name:
                return index
        return None

    @cached_property
    def standard_names(self) -> FrozenSet[str]:
        names = {self.destructor_name(i) for i in range(1, self.max_arity + 1)}
        names.add(DISCRIMINATOR)
        return frozenset(names)

    def is_standard(self, name: str) -> bool:
        return name in self.standard_names

    def standard_arity(self, name: str) -> int:
        if name == DISCRIMINATOR:
            return len(self.vocabulary) + 1
        return 1

    @property
    def stream_constructor(self) -> Optional[Constructor]:
        """The unique non-constant constructor, when the vocabulary has exactly one."""
        candidates = [c for c in self.vocabulary if c.arity > 0]
        return candidates[0] if len(candidates) == 1 else None


def build_system(
    name: str,
    constructors: Sequence[Tuple[str, int]],
    predicates: Sequence[Tuple[str, str]],
    types: Sequence[Tuple[str, Sequence[str], str]],
    destructors: Sequence[str] = (),
) -> DataSystem:
    """Assemble a DataSystem from plain names; predicate indices follow list order."""
    vocabulary = tuple(Constructor(c, arity) for c, arity in constructors)
    preds = tuple(DataPredicate(p, kind, index) for index, (p, kind) in enumerate(predicates, start=1))
    by_name: Dict[str, DataPredicate] = {p.name: p for p in preds}
    by_constructor: Dict[str, Constructor] = {c.name: c for c in vocabulary}
    typed = []
    for cname, args, result in types:
        constructor = by_constructor.get(cname, Constructor(cname, len(args)))
        for pname in list(args) + [result]:
            if pname not in by_name:
                raise UnknownIdentifierError(pname, 'data predicate')
        typed.append(ConstructorType(constructor, tuple(by_name[a] for a in args), by_name[result]))
    return DataSystem(name, vocabulary, preds, tuple(typed), tuple(destructors))


def validate_system(ds: DataSystem) -> ValidationReport:
    report = ValidationReport(f'system {ds.name}')

    seen = set()
    for constructor in ds.vocabulary:
        if constructor.name in seen:
            report.add(f'duplicate constructor {constructor.name}')
        seen.add(constructor.name)
        if constructor.arity < 0:
            report.add(f'constructor {constructor.name} has negative arity')
        if constructor.name == DISCRIMINATOR:
            report.add(f'constructor name {constructor.name} is reserved for the discriminator')

    seen = set()
    for position, predicate in enumerate(ds.predicates, start=1):
        if predicate.name in seen:
            report.add(f'duplicate predicate {predicate.name}')
        seen.add(predicate.name)
        if predicate.kind not in PREDICATE_KINDS:
            report.add(f'predicate {predicate.name} has unknown kind {predicate.kind}')
        if predicate.index != position:
            report.add(f'predicate {predicate.name} has index {predicate.index}, expected {position}')

    declared = {p.name: p for p in ds.predicates}
    for ctype in ds.types:
        constructor = ctype.constructor
        if constructor not in ds.vocabulary:
            if ds.has_constructor(constructor.name):
                report.add(f'arity mismatch in type {ctype}')
            else:
                report.add(f'unknown constructor {constructor.name} in type {ctype}')
        if len(ctype.arguments) != constructor.arity:
            report.add(f'arity mismatch in type {ctype}')
        for predicate in list(ctype.arguments) + [ctype.result]:
            if declared.get(predicate.name) != predicate:
                report.add(f'unknown predicate {predicate.name} in type {ctype}')
        for argument in ctype.arguments:
            if argument.index > ctype.result.index:
                report.add(f'argument after result in type {ctype}: {argument.name} comes after {ctype.result.name}')

    for constructor in ds.vocabulary:
        if not ds.types_of(constructor.name):
            report.add(f'constructor {constructor.name} has no type')

    if len(ds.destructor_names) > ds.max_arity:
        report.add(f'{len(ds.destructor_names)} destructor names for {ds.max_arity} destructors')
    if len(set(ds.destructor_names)) != len(ds.destructor_names):
        report.add('duplicate destructor names')
    for name in ds.destructor_names:
        if ds.has_constructor(name) or name == DISCRIMINATOR:
            report.add(f'destructor name {name} clashes with a constructor or the discriminator')

    for predicate in ds.predicates:
        if not ds.types_for(predicate):
            # Legal: the canonical interpretation is then empty
            logger.debug(f'Predicate {predicate.name} of {ds.name} has no constructors')

    if report.ok:
        logger.debug(f'System {ds.name} validated')
    return report


def syntactic_class(
    term: Term, ds: DataSystem, functions: Optional[Iterable[str]] = None
) -> SyntacticClass:
    """Smallest of data ⊂ base ⊂ program containing `term`.

    When `functions` is given, function symbols outside it (and the standard
    functions) are reported as unknown.
    """
    known = None if functions is None else set(functions)
    has_variable = False
    has_function = False
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            has_variable = True
            continue
        if isinstance(node, Con):
            constructor = ds.constructor(node.name)
            if constructor.arity != len(node.args):
                raise UnknownIdentifierError(f'{node.name}/{len(node.args)}', 'constructor')
        else:
            has_function = True
            if known is not None and node.name not in known and not ds.is_standard(node.name):
                raise UnknownIdentifierError(node.name, 'function')
        stack.extend(node.args)
    if has_function:
        return SyntacticClass.PROGRAM
    if has_variable:
        return SyntacticClass.BASE
    return SyntacticClass.DATA


def canonical_member(
    ds: DataSystem, predicate: Union[str, DataPredicate], value: RegularCoterm, depth: int
) -> Membership:
    """Membership of a regular coterm in the canonical interpretation of a predicate.

    Inductive predicates are decided exactly: a cycle staying inside one
    inductive predicate is an infinite descent and fails. Coinductive
    predicates are checked along every path down to `depth`.
    """
    pred = ds.predicate(predicate) if isinstance(predicate, str) else predicate
    verdict, _ = _MembershipCheck(ds, value).member(pred, value.entry, depth, None, frozenset())
    return verdict


class _MembershipCheck:
    """One membership query over a coterm.

    Verdicts are memoised per (predicate, node, remaining depth). A verdict
    that was cut short by a node already on the current inductive chain
    depends on that chain and is not memoised.
    """

    def __init__(self, ds: DataSystem, value: RegularCoterm):
        self.ds = ds
        self.value = value
        self.memo: Dict[Tuple[str, int, int], Membership] = {}

    def member(
        self,
        pred: DataPredicate,
        index: int,
        depth: int,
        parent: Optional[str],
        run: FrozenSet[int],
    ) -> Tuple[Membership, FrozenSet[int]]:
        if pred.inductive:
            if parent != pred.name:
                run = frozenset()
            if index in run:
                return Membership.NO, frozenset({index})
        elif depth <= 0:
            return Membership.UP_TO_DEPTH, frozenset()

        key = (pred.name, index, depth)
        if key in self.memo:
            return self.memo[key], frozenset()

        verdict, cuts = self._expand(pred, index, depth, run | {index} if pred.inductive else run)
        cuts = cuts - {index}
        if not cuts:
            self.memo[key] = verdict
        return verdict, cuts

    def _expand(
        self, pred: DataPredicate, index: int, depth: int, run: FrozenSet[int]
    ) -> Tuple[Membership, FrozenSet[int]]:
        node = self.value.node(index)
        ceiling = Membership.YES if pred.inductive else Membership.UP_TO_DEPTH
        best = Membership.NO
        cuts: FrozenSet[int] = frozenset()
        for ctype in self.ds.types_of(node.constructor, result=pred.name):
            if len(ctype.arguments) != len(node.children):
                continue
            worst = ceiling
            for argument, child in zip(ctype.arguments, node.children):
                verdict, child_cuts = self.member(argument, child, depth - 1, pred.name, run)
                cuts |= child_cuts
                if _RANK[verdict] < _RANK[worst]:
                    worst = verdict
                if worst is Membership.NO:
                    break
            if _RANK[worst] > _RANK[best]:
                best = worst
            if best is ceiling:
                break
        return best, cuts


def stream_system() -> DataSystem:
    """Boolean streams: B inductive over 0 and 1, S coinductive over cons."""
    return build_system(
        'STREAMS',
        constructors=[('0', 0), ('1', 0), (CONS, 2)],
        predicates=[('B', INDUCTIVE), ('S', COINDUCTIVE)],
        types=[('0', [], 'B'), ('1', [], 'B'), (CONS, ['B', 'S'], 'S')],
        destructors=['hd', 'tl'],
    )


def naturals_system() -> DataSystem:
    return build_system(
        'NAT',
        constructors=[('0', 0), ('s', 1)],
        predicates=[('N', INDUCTIVE)],
        types=[('0', [], 'N'), ('s', ['N'], 'N')],
    )


def example_system() -> DataSystem:
    """Booleans, naturals, s/t-words, streams of naturals and lists of such streams."""
    return build_system(
        'EXAMPLE',
        constructors=[('0', 0), ('1', 0), ('[]', 0), ('s', 1), ('t', 1), ('c', 2)],
        predicates=[
            ('B', INDUCTIVE),
            ('N', INDUCTIVE),
            ('J', COINDUCTIVE),
            ('S', COINDUCTIVE),
            ('L', INDUCTIVE),
        ],
        types=[
            ('0', [], 'B'),
            ('0', [], 'N'),
            ('1', [], 'B'),
            ('[]', [], 'L'),
            ('s', ['N'], 'N'),
            ('s', ['J'], 'J'),
            ('t', ['J'], 'J'),
            ('c', ['N', 'S'], 'S'),
            ('c', ['S', 'L'], 'L'),
        ],
    )
