"""Equational programs: equations, unification, compatibility and standard functions."""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .data_system import DISCRIMINATOR, DataSystem
from .log_config import setup_logging
from .models import ValidationReport
from .terms import Con, Fn, Term, Var, render_term, substitute, variable_occurrences, variables

logger = setup_logging()

Substitution = Dict[str, Term]


@dataclass(frozen=True)
class Equation:
    """f(p_1 … p_k) = rhs, or the observer form π(f(p_1 … p_k)) = rhs."""

    function: str
    patterns: Tuple[Term, ...]
    rhs: Term
    observer: Optional[str] = None

    @property
    def call(self) -> Fn:
        return Fn(self.function, self.patterns)

    @property
    def lhs(self) -> Fn:
        if self.observer is None:
            return self.call
        return Fn(self.observer, (self.call,))

    @property
    def arity(self) -> int:
        return len(self.patterns)

    def __str__(self) -> str:
        return f'{render_term(self.lhs)} = {render_term(self.rhs)}'


@dataclass(frozen=True)
class Rule:
    """A directed rewrite rule f(patterns) → rhs as used by evaluation and rewriting."""

    function: str
    patterns: Tuple[Term, ...]
    rhs: Term

    @property
    def lhs(self) -> Fn:
        return Fn(self.function, self.patterns)


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    witness: Optional[Substitution] = None


def render_substitution(substitution: Mapping[str, Term]) -> str:
    body = ', '.join(f'{name} ↦ {render_term(term)}' for name, term in sorted(substitution.items()))
    return '{' + body + '}'


def unify(t1: Term, t2: Term) -> Optional[Substitution]:
    """Most general unifier with occurs-check, or None when none exists."""
    unifier: Substitution = {}
    equations: List[Tuple[Term, Term]] = [(t1, t2)]

    while equations:
        lhs, rhs = equations.pop()

        if lhs == rhs:
            continue

        if not isinstance(lhs, Var):
            if not isinstance(rhs, Var):
                if type(lhs) is type(rhs) and lhs.name == rhs.name and len(lhs.args) == len(rhs.args):
                    equations.extend(zip(lhs.args, rhs.args))
                    continue
                return None
            lhs, rhs = rhs, lhs

        if lhs.name in variables(rhs):
            return None

        step = {lhs.name: rhs}
        equations = [(substitute(l, step), substitute(r, step)) for l, r in equations]
        for name, term in unifier.items():
            unifier[name] = substitute(term, step)
        unifier.update(step)

    return unifier


def match(pattern: Term, term: Term, bindings: Optional[Substitution] = None) -> Optional[Substitution]:
    """One-way matching of a linear or non-linear pattern against a term."""
    bindings = dict(bindings or {})
    stack = [(pattern, term)]
    while stack:
        p, t = stack.pop()
        if isinstance(p, Var):
            bound = bindings.get(p.name)
            if bound is None:
                bindings[p.name] = t
            elif bound != t:
                return None
            continue
        if isinstance(t, Var) or type(p) is not type(t) or p.name != t.name or len(p.args) != len(t.args):
            return None
        stack.extend(zip(p.args, t.args))
    return bindings


def _rename_apart(equation: Equation, taken: Iterable[str]) -> Equation:
    taken = set(taken)
    mapping: Dict[str, Term] = {}
    for name in sorted(variables(equation.lhs) | variables(equation.rhs)):
        if name in taken:
            fresh = name
            while fresh in taken or fresh in mapping:
                fresh = fresh + "'"
            mapping[name] = Var(fresh)
    if not mapping:
        return equation
    return Equation(
        equation.function,
        tuple(substitute(p, mapping) for p in equation.patterns),
        substitute(equation.rhs, mapping),
        equation.observer,
    )


def check_compatibility(e1: Equation, e2: Equation) -> Compatibility:
    """Equations are compatible when their definiendums do not unify."""
    renamed = _rename_apart(e2, variables(e1.lhs))
    witness = unify(e1.lhs, renamed.lhs)
    if witness is None:
        return Compatibility(True)
    return Compatibility(False, witness)


def standard_functions(ds: DataSystem) -> Tuple[Equation, ...]:
    """Destructor and discriminator equations for the system's vocabulary."""
    equations: List[Equation] = []
    for index in range(1, ds.max_arity + 1):
        destructor = ds.destructor_name(index)
        for constructor in ds.vocabulary:
            xs = tuple(Var(f'x{i}') for i in range(1, constructor.arity + 1))
            pattern = Con(constructor.name, xs)
            rhs = xs[index - 1] if index <= constructor.arity else pattern
            equations.append(Equation(destructor, (pattern,), rhs))
    ys = tuple(Var(f'y{i}') for i in range(1, len(ds.vocabulary) + 1))
    for position, constructor in enumerate(ds.vocabulary):
        xs = tuple(Var(f'x{i}') for i in range(1, constructor.arity + 1))
        equations.append(Equation(DISCRIMINATOR, (Con(constructor.name, xs),) + ys, ys[position]))
    return tuple(equations)


@dataclass(frozen=True)
class DeepDestructor:
    """A composition of destructors; path[0] is applied first."""

    path: Tuple[int, ...]
    names: Tuple[str, ...]

    def apply(self, term: Term) -> Term:
        for name in self.names:
            term = Fn(name, (term,))
        return term


def deep_destructor(path: Sequence[int], ds: DataSystem) -> DeepDestructor:
    names = tuple(ds.destructor_name(index) for index in path)
    return DeepDestructor(tuple(path), names)


@dataclass(frozen=True)
class Program:
    name: str
    system: DataSystem
    equations: Tuple[Equation, ...]
    principal: str
    arity: int

    @classmethod
    def build(
        cls,
        name: str,
        equations: Sequence[Equation],
        system: DataSystem,
        principal: Optional[str] = None,
    ) -> 'Program':
        """Program from user equations; the standard functions of `system` are appended."""
        body = list(equations)
        for standard in standard_functions(system):
            if standard not in body:
                body.append(standard)
        defined = [e.function for e in equations if not system.is_standard(e.function)]
        principal = principal or (defined[0] if defined else DISCRIMINATOR)
        arity = next((e.arity for e in equations if e.function == principal), 0)
        return cls(name, system, tuple(body), principal, arity)

    @cached_property
    def defined_equations(self) -> Tuple[Equation, ...]:
        return tuple(e for e in self.equations if not self.system.is_standard(e.function))

    @cached_property
    def functions(self) -> Tuple[str, ...]:
        """Defined function names in order of first declaration."""
        ordered: Dict[str, None] = {}
        for equation in self.defined_equations:
            ordered.setdefault(equation.function, None)
        return tuple(ordered)

    def equations_for(self, function: str) -> Tuple[Equation, ...]:
        return tuple(e for e in self.equations if e.function == function)

    def arity_of(self, function: str) -> Optional[int]:
        if function in self.functions:
            return self.equations_for(function)[0].arity
        if self.system.is_standard(function):
            return self.system.standard_arity(function)
        return None

    def is_observer_defined(self, function: str) -> bool:
        return any(e.observer for e in self.equations_for(function))

    def combined_rule(self, function: str) -> Optional[Rule]:
        """f(x⃗) → c(e_1 … e_r) assembled from a complete observer family for f."""
        family = [e for e in self.equations_for(function) if e.observer]
        constructor = self.system.stream_constructor
        if not family or constructor is None or len(family) != len(self.equations_for(function)):
            return None
        first = family[0]
        if not all(isinstance(p, Var) for p in first.patterns):
            return None
        fields: Dict[int, Term] = {}
        for equation in family:
            index = self.system.destructor_index(equation.observer)
            if index is None or index in fields or equation.arity != first.arity:
                return None
            if not all(isinstance(p, Var) for p in equation.patterns):
                return None
            renaming = {p.name: q for p, q in zip(equation.patterns, first.patterns)}
            fields[index] = substitute(equation.rhs, renaming)
        if sorted(fields) != list(range(1, constructor.arity + 1)):
            return None
        rhs = Con(constructor.name, tuple(fields[i] for i in range(1, constructor.arity + 1)))
        return Rule(function, first.patterns, rhs)

    @cached_property
    def rules(self) -> Dict[str, Tuple[Rule, ...]]:
        """Rewrite rules per function symbol, observer families combined."""
        table: Dict[str, List[Rule]] = {}
        for equation in self.equations:
            if equation.observer:
                continue
            table.setdefault(equation.function, []).append(
                Rule(equation.function, equation.patterns, equation.rhs)
            )
        for function in self.functions:
            combined = self.combined_rule(function)
            if combined is not None:
                table[function] = [combined]
        return {name: tuple(rules) for name, rules in table.items()}

    def rewrite_candidates(self, function: str) -> Tuple[Tuple[Term, Term], ...]:
        """Every (lhs, rhs) pair a proof may rewrite with under the name `function`."""
        pairs = [(e.lhs, e.rhs) for e in self.equations_for(function)]
        combined = self.combined_rule(function)
        if combined is not None:
            pairs.append((combined.lhs, combined.rhs))
        return tuple(pairs)

    def with_equations(self, equations: Sequence[Equation], name: Optional[str] = None,
                       principal: Optional[str] = None) -> 'Program':
        """A program whose body extends this one's defined equations."""
        body = list(self.defined_equations)
        for equation in equations:
            if equation not in body:
                body.append(equation)
        return Program.build(name or self.name, body, self.system, principal or self.principal)


def _constructor_violations(term: Term, ds: DataSystem, where: str) -> List[str]:
    found = []
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            continue
        if isinstance(node, Con):
            if not ds.has_constructor(node.name):
                found.append(f'unknown constructor {node.name} in {where}')
            elif ds.constructor(node.name).arity != len(node.args):
                found.append(
                    f'constructor {node.name} expects {ds.constructor(node.name).arity} '
                    f'arguments in {where}'
                )
        stack.extend(node.args)
    return found


def validate_program(program: Program, ds: DataSystem) -> ValidationReport:
    report = ValidationReport(f'program {program.name}')
    defined = set(program.functions)

    for function in program.functions:
        if ds.has_constructor(function) or ds.is_standard(function):
            report.add(f'function name {function} clashes with a constructor or standard function')
        arities = {e.arity for e in program.equations_for(function)}
        if len(arities) > 1:
            report.add(f'function {function} is defined with several arities {sorted(arities)}')
        kinds = {e.observer is not None for e in program.equations_for(function)}
        if len(kinds) > 1:
            report.add(f'function {function} mixes observer and ordinary equations')

    for equation in program.defined_equations:
        where = f'equation {equation}'
        for pattern in equation.patterns:
            if any(isinstance(node, Fn) for node in _nodes(pattern)):
                report.add(f'pattern {render_term(pattern)} contains a function symbol in {where}')
            for message in _constructor_violations(pattern, ds, where):
                report.add(message)
        occurrences = [name for p in equation.patterns for name in variable_occurrences(p)]
        repeated = sorted({name for name in occurrences if occurrences.count(name) > 1})
        if repeated:
            report.add(f'non-linear pattern (repeated {", ".join(repeated)}) in {where}')
        for name in sorted(variables(equation.rhs) - set(occurrences)):
            report.add(f'variable {name} of the right-hand side does not occur in the definiendum of {where}')
        for message in _constructor_violations(equation.rhs, ds, where):
            report.add(message)
        for node in _nodes(equation.rhs):
            if not isinstance(node, Fn):
                continue
            if node.name not in defined and not ds.is_standard(node.name):
                report.add(f'unknown function {node.name} in {where}')
                continue
            expected = program.arity_of(node.name)
            if expected is not None and expected != len(node.args):
                report.add(f'{node.name} applied to {len(node.args)} arguments, expects {expected}, in {where}')
        if equation.observer is not None:
            if ds.destructor_index(equation.observer) is None:
                report.add(f'{equation.observer} is not a destructor in {where}')
            if ds.stream_constructor is None:
                report.add(f'observer equations need a single non-constant constructor, in {where}')
            if not all(isinstance(p, Var) for p in equation.patterns):
                report.add(f'observer equation patterns must be variables in {where}')

    for function in program.functions:
        if program.is_observer_defined(function) and ds.stream_constructor is not None:
            if program.combined_rule(function) is None:
                report.add(f'observer equations of {function} do not form one complete family')

    equations = program.equations
    for i, first in enumerate(equations):
        for second in equations[i + 1:]:
            verdict = check_compatibility(first, second)
            if not verdict.compatible:
                report.add(
                    f'incompatible equations {first} and {second}: '
                    f'unifier {render_substitution(verdict.witness)}'
                )

    for standard in standard_functions(ds):
        if standard not in equations:
            report.add(f'missing standard equation {standard}')

    if program.principal not in defined and not ds.is_standard(program.principal):
        report.add(f'principal function {program.principal} is not defined')

    if not report.ok:
        logger.info(f'Program {program.name} has {len(report.violations)} violations')
    return report


def _nodes(term: Term):
    stack = [term]
    while stack:
        node = stack.pop()
        yield node
        if not isinstance(node, Var):
            stack.extend(node.args)
