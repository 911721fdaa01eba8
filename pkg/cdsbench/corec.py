"""Primitive corecurrence: recognizing it in programs and compiling schemas back to equations."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple, Union

from .data_system import COINDUCTIVE, DISCRIMINATOR, DataSystem
from .errors import SchemaError
from .log_config import setup_logging
from .program import Equation, Program, validate_program
from .terms import Con, Fn, Term, Var, function_names, render_term

logger = setup_logging()


@dataclass(frozen=True)
class Projection:
    """The index-th parameter of the enclosing function (0-based)."""

    index: int


@dataclass(frozen=True)
class ConstructorComponent:
    name: str


@dataclass(frozen=True)
class DestructorComponent:
    index: int


@dataclass(frozen=True)
class DiscriminatorComponent:
    pass


@dataclass(frozen=True)
class DefinedComponent:
    """A function defined earlier in declaration order."""

    name: str


@dataclass(frozen=True)
class Composition:
    outer: 'Component'
    inners: Tuple['Component', ...]


Component = Union[
    Projection, ConstructorComponent, DestructorComponent, DiscriminatorComponent, DefinedComponent, Composition
]


@dataclass(frozen=True)
class CorecCall:
    """f_ℓ(g_1(x⃗) … g_k(x⃗)), the only place a group function may be called."""

    successor: str
    arguments: Tuple[Component, ...]


Field = Union[Component, CorecCall]


@dataclass(frozen=True)
class CorecBranch:
    constructor: str
    fields: Tuple[Field, ...]


@dataclass(frozen=True)
class CorecClause:
    """One function of a schema.

    Destructor form has no selector and a single branch on the stream
    constructor; cocase form has a selector and one branch per constructor
    of the vocabulary; explicit compositions carry a body instead.
    """

    name: str
    params: Tuple[str, ...]
    selector: Optional[Component] = None
    branches: Tuple[CorecBranch, ...] = ()
    body: Optional[Component] = None

    @property
    def explicit(self) -> bool:
        return self.body is not None

    @property
    def calls(self) -> Tuple[CorecCall, ...]:
        return tuple(f for branch in self.branches for f in branch.fields if isinstance(f, CorecCall))


@dataclass(frozen=True)
class CorecSchema:
    name: str
    functions: Tuple[CorecClause, ...]
    principal: str
    prelude: Tuple[Equation, ...] = ()

    @property
    def form(self) -> str:
        if any(clause.selector is not None for clause in self.functions):
            return 'cocase'
        return 'destructor'

    def clause(self, name: str) -> CorecClause:
        for clause in self.functions:
            if clause.name == name:
                return clause
        raise SchemaError(f'schema {self.name} has no function {name}')


@dataclass(frozen=True)
class ProductivityVerdict:
    accepted: bool
    schema: Optional[CorecSchema] = None
    reason: Optional[str] = None
    equation: Optional[Equation] = None
    slots: Tuple[Tuple[str, str], ...] = ()

    def __str__(self) -> str:
        if self.accepted:
            return 'primitive-corecursive'
        return f'rejected({self.reason})'


def _evaluate(component: Component, args: Tuple[Term, ...], ds: DataSystem) -> Term:
    if isinstance(component, Projection):
        if component.index >= len(args):
            raise SchemaError(f'projection {component.index} out of range for {len(args)} parameters')
        return args[component.index]
    if isinstance(component, Composition):
        values = tuple(_evaluate(inner, args, ds) for inner in component.inners)
        return _apply(component.outer, values, ds)
    return _apply(component, args, ds)


def _apply(head: Component, args: Tuple[Term, ...], ds: DataSystem) -> Term:
    if isinstance(head, ConstructorComponent):
        return Con(head.name, args)
    if isinstance(head, DestructorComponent):
        return Fn(ds.destructor_name(head.index), args)
    if isinstance(head, DiscriminatorComponent):
        return Fn(DISCRIMINATOR, args)
    if isinstance(head, DefinedComponent):
        return Fn(head.name, args)
    return _evaluate(head, args, ds)


def component_to_term(component: Component, params: Sequence[str], ds: DataSystem) -> Term:
    return _evaluate(component, tuple(Var(p) for p in params), ds)


def term_to_component(term: Term, params: Sequence[str], ds: DataSystem,
                      forbidden: FrozenSet[str] = frozenset()) -> Component:
    if isinstance(term, Var):
        if term.name not in params:
            raise SchemaError(f'variable {term.name} is not a parameter')
        return Projection(list(params).index(term.name))
    inners = tuple(term_to_component(arg, params, ds, forbidden) for arg in term.args)
    if isinstance(term, Con):
        return Composition(ConstructorComponent(term.name), inners)
    if term.name in forbidden:
        raise SchemaError(f'{term.name} cannot be used as a component')
    if term.name == DISCRIMINATOR:
        return Composition(DiscriminatorComponent(), inners)
    index = ds.destructor_index(term.name)
    if index is not None:
        return Composition(DestructorComponent(index), inners)
    return Composition(DefinedComponent(term.name), inners)


def field_to_term(field: Field, params: Sequence[str], ds: DataSystem) -> Term:
    if isinstance(field, CorecCall):
        return Fn(field.successor, tuple(component_to_term(a, params, ds) for a in field.arguments))
    return component_to_term(field, params, ds)


def clause_equations(clause: CorecClause, ds: DataSystem) -> Tuple[Equation, ...]:
    patterns = tuple(Var(p) for p in clause.params)
    if clause.explicit:
        return (Equation(clause.name, patterns, component_to_term(clause.body, clause.params, ds)),)
    if clause.selector is None:
        (branch,) = clause.branches
        return tuple(
            Equation(clause.name, patterns, field_to_term(f, clause.params, ds), observer=ds.destructor_name(i))
            for i, f in enumerate(branch.fields, start=1)
        )
    cases = tuple(
        Con(b.constructor, tuple(field_to_term(f, clause.params, ds) for f in b.fields)) for b in clause.branches
    )
    rhs = Fn(DISCRIMINATOR, (component_to_term(clause.selector, clause.params, ds),) + cases)
    return (Equation(clause.name, patterns, rhs),)


def describe_clause(clause: CorecClause, ds: DataSystem) -> List[Tuple[str, str]]:
    """Report lines naming the schema slot each part of a clause fills."""
    if clause.explicit:
        return [(clause.name, f'explicit = {render_term(component_to_term(clause.body, clause.params, ds))}')]
    rows = []
    if clause.selector is not None:
        rows.append((clause.name, f'h = {render_term(component_to_term(clause.selector, clause.params, ds))}'))
    for branch in clause.branches:
        for position, f in enumerate(branch.fields, start=1):
            label = ds.destructor_name(position) if clause.selector is None else f'{branch.constructor}.{position}'
            text = render_term(field_to_term(f, clause.params, ds))
            if isinstance(f, CorecCall):
                rows.append((clause.name, f'{label}: ℓ = {f.successor}, g = {text}'))
            else:
                rows.append((clause.name, f'{label}: {text}'))
    return rows


class _Rejection(Exception):
    def __init__(self, reason: str, equation: Optional[Equation] = None):
        super().__init__(reason)
        self.reason = reason
        self.equation = equation


def _calls(program: Program, function: str) -> Set[str]:
    defined = set(program.functions)
    found: Set[str] = set()
    for equation in program.equations_for(function):
        found |= function_names(equation.rhs) & defined
    return found


def _strongly_connected(order: Sequence[str], edges: Dict[str, Set[str]]) -> Dict[str, FrozenSet[str]]:
    """Tarjan's algorithm; maps every function to its component."""
    index: Dict[str, int] = {}
    lowlink: Dict[str, int] = {}
    stack: List[str] = []
    on_stack: Set[str] = set()
    result: Dict[str, FrozenSet[str]] = {}

    def visit(node: str):
        index[node] = lowlink[node] = len(index)
        stack.append(node)
        on_stack.add(node)
        for successor in sorted(edges.get(node, ())):
            if successor not in index:
                visit(successor)
                lowlink[node] = min(lowlink[node], lowlink[successor])
            elif successor in on_stack:
                lowlink[node] = min(lowlink[node], index[successor])
        if lowlink[node] == index[node]:
            members = set()
            while True:
                member = stack.pop()
                on_stack.discard(member)
                members.add(member)
                if member == node:
                    break
            group = frozenset(members)
            for member in members:
                result[member] = group

    for node in order:
        if node not in index:
            visit(node)
    return result


def _coinductive_positions(constructor: str, ds: DataSystem) -> Set[int]:
    positions = set()
    for ctype in ds.types_of(constructor):
        for position, argument in enumerate(ctype.arguments):
            if argument.kind == COINDUCTIVE:
                positions.add(position)
    return positions


def _guard(term: Term, group: FrozenSet[str]) -> Optional[Tuple[str, str]]:
    """First group call nested under another symbol, with that symbol."""
    if isinstance(term, Var):
        return None
    for arg in term.args:
        if isinstance(arg, Fn) and arg.name in group:
            return arg.name, term.name
        found = _guard(arg, group)
        if found:
            return found
    return None


def _field(term: Term, position: int, coinductive: Set[int], label: str, params: Tuple[str, ...],
           group: FrozenSet[str], ds: DataSystem, equation: Equation) -> Field:
    occurring = function_names(term) & group
    if not occurring:
        if position in coinductive:
            raise _Rejection(f'{label} of {equation.function} is not a corecursive call', equation)
        return term_to_component(term, params, ds)
    if position not in coinductive:
        raise _Rejection(f'recursive occurrence of {sorted(occurring)[0]} in {label}', equation)
    if isinstance(term, Fn) and term.name in group:
        nested = _guard(term, group)
        if nested is None:
            arguments = tuple(term_to_component(arg, params, ds) for arg in term.args)
            return CorecCall(term.name, arguments)
        name, context = nested
    else:
        name, context = _guard(term, group) or (sorted(occurring)[0], term.name)
    raise _Rejection(f'recursive occurrence of {name} under {context} in {label}', equation)


def _explicit_clause(program: Program, function: str, ds: DataSystem) -> CorecClause:
    equations = program.equations_for(function)
    if program.is_observer_defined(function):
        combined = program.combined_rule(function)
        if combined is None:
            raise _Rejection(f'observer equations of {function} do not form a complete family', equations[0])
        params = tuple(p.name for p in combined.patterns)
        fields = tuple(term_to_component(arg, params, ds) for arg in combined.rhs.args)
        return CorecClause(function, params, None, (CorecBranch(combined.rhs.name, fields),))
    (first, *rest) = equations
    if rest or not all(isinstance(p, Var) for p in first.patterns):
        raise _Rejection(f'pattern-matching definition of {function} is not a composition of components', first)
    params = tuple(p.name for p in first.patterns)
    return CorecClause(function, params, body=term_to_component(first.rhs, params, ds))


def _recursive_clause(program: Program, function: str, group: FrozenSet[str], ds: DataSystem) -> CorecClause:
    equations = program.equations_for(function)
    stream = ds.stream_constructor

    if program.is_observer_defined(function):
        combined = program.combined_rule(function)
        if combined is None:
            raise _Rejection(f'observer equations of {function} do not form a complete family', equations[0])
        return _destructor_clause(function, combined.patterns, combined.rhs, group, ds, equations)

    (first, *rest) = equations
    if rest or not all(isinstance(p, Var) for p in first.patterns):
        raise _Rejection(f'pattern-matching definition of {function} is not in corecurrence form', first)
    rhs = first.rhs
    if stream is not None and isinstance(rhs, Con) and rhs.name == stream.name:
        return _destructor_clause(function, first.patterns, rhs, group, ds, equations)
    if isinstance(rhs, Fn) and rhs.name == DISCRIMINATOR and len(rhs.args) == len(ds.vocabulary) + 1:
        params = tuple(p.name for p in first.patterns)
        selector_term, *cases = rhs.args
        if function_names(selector_term) & group:
            raise _Rejection(f'recursive occurrence in the selector of {function}', first)
        branches = []
        for constructor, case in zip(ds.vocabulary, cases):
            if not isinstance(case, Con) or case.name != constructor.name:
                raise _Rejection(
                    f'cocase branch for {constructor.name} in {function} is {render_term(case)}, '
                    f'not a {constructor.name} cell', first
                )
            coinductive = _coinductive_positions(constructor.name, ds)
            fields = tuple(
                _field(arg, position, coinductive, f'{constructor.name}.{position + 1}', params, group, ds, first)
                for position, arg in enumerate(case.args)
            )
            branches.append(CorecBranch(constructor.name, fields))
        return CorecClause(function, params, term_to_component(selector_term, params, ds), tuple(branches))
    raise _Rejection(f'recursive definition of {function} is neither in destructor form nor in cocase form', first)


def _destructor_clause(function: str, patterns: Tuple[Term, ...], rhs: Con, group: FrozenSet[str],
                       ds: DataSystem, equations: Sequence[Equation]) -> CorecClause:
    params = tuple(p.name for p in patterns)
    coinductive = _coinductive_positions(rhs.name, ds)
    fields = []
    for position, arg in enumerate(rhs.args):
        label = ds.destructor_name(position + 1)
        source = next((e for e in equations if e.observer == label), equations[0])
        fields.append(_field(arg, position, coinductive, label, params, group, ds, source))
    return CorecClause(function, params, None, (CorecBranch(rhs.name, tuple(fields)),))


def check_primitive_corecursive(program: Program, ds: Optional[DataSystem] = None) -> ProductivityVerdict:
    """Accept programs built from components by composition and corecurrence, in declaration order."""
    ds = ds or program.system
    report = validate_program(program, ds)
    if not report.ok:
        return ProductivityVerdict(False, reason=f'program does not validate: {report.violations[0]}')
    if program.principal not in program.functions:
        return ProductivityVerdict(False, reason=f'principal {program.principal} is not a defined function')

    order = program.functions
    position = {f: i for i, f in enumerate(order)}
    calls = {f: _calls(program, f) for f in order}
    groups = _strongly_connected(order, calls)

    clauses: Dict[str, CorecClause] = {}
    try:
        for function in order:
            group = groups[function]
            for callee in sorted(calls[function] - group, key=position.get):
                if position[callee] > position[function]:
                    offending = next(
                        e for e in program.equations_for(function) if callee in function_names(e.rhs)
                    )
                    raise _Rejection(f'forward reference to {callee} in the definition of {function}', offending)
            if len(group) > 1 or function in calls[function]:
                clauses[function] = _recursive_clause(program, function, group, ds)
            else:
                clauses[function] = _explicit_clause(program, function, ds)
    except _Rejection as rejection:
        logger.info(f'Program {program.name} rejected: {rejection.reason}')
        return ProductivityVerdict(False, reason=rejection.reason, equation=rejection.equation)

    principal_group = groups[program.principal]
    schema = CorecSchema(
        name=program.name,
        functions=tuple(clauses[f] for f in order if f in principal_group),
        principal=program.principal,
        prelude=tuple(e for e in program.defined_equations if e.function not in principal_group),
    )
    slots = tuple(row for f in order for row in describe_clause(clauses[f], ds))
    logger.info(f'Program {program.name} is primitive corecursive ({len(schema.functions)} in principal group)')
    return ProductivityVerdict(True, schema=schema, slots=slots)


def _referenced(component: Field) -> Set[str]:
    if isinstance(component, CorecCall):
        names = {component.successor}
        for argument in component.arguments:
            names |= _referenced(argument)
        return names
    if isinstance(component, DefinedComponent):
        return {component.name}
    if isinstance(component, Composition):
        names = _referenced(component.outer)
        for inner in component.inners:
            names |= _referenced(inner)
        return names
    return set()


def compile_schema(schema: CorecSchema, ds: DataSystem) -> Program:
    """Equations for a schema: its prelude, then cocase or destructor equations per function."""
    defined = {e.function for e in schema.prelude} | {c.name for c in schema.functions}
    equations: List[Equation] = list(schema.prelude)
    for clause in schema.functions:
        parts: List[Field] = [p for p in (clause.body, clause.selector) if p is not None]
        parts.extend(f for branch in clause.branches for f in branch.fields)
        for part in parts:
            for name in sorted(_referenced(part) - defined):
                raise SchemaError(f'{clause.name} refers to undefined component {name}')
        equations.extend(clause_equations(clause, ds))

    program = Program.build(schema.name, equations, ds, schema.principal)
    report = validate_program(program, ds)
    if not report.ok:
        raise SchemaError(f'compiled schema {schema.name} does not validate: {report.violations[0]}')
    return program
