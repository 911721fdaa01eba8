"""Program extraction: realizer terms for strongly positive derivations.

Every node of a derivation is assigned a program-term over the split
library whose value realizes the node's conclusion, given realizers for
its open assumptions. Coinduction nodes become new corecursive functions.
The result is a program whose principal maps the free variables of the
conclusion and the realizers of the open assumptions to a realizer of the
conclusion.
"""

from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple

from ..corec import CorecSchema, check_primitive_corecursive
from ..data_system import DISCRIMINATOR
from ..errors import ExtractionError
from ..log_config import setup_logging
from ..logic import derivation as rules
from ..logic.derivation import Derivation, Path, open_assumptions, term_variables
from ..logic.formulas import Atom, Equality, Exists, Formula, formula_terms, render_formula
from ..logic.normalize import assert_sp_proof
from ..program import Equation, Program
from ..terms import Con, Fn, FreshNames, Term, Var, function_names, render_term, substitute, variable_occurrences
from .realize import infer_sorts
from .streams import (
    SPLIT_EVEN,
    SPLIT_FUNCTIONS,
    SPLIT_MERGE,
    SPLIT_ODD,
    SPLIT_ZEROS,
    StreamSignature,
    pair_term,
    split_equations,
    split_term,
    stream_signature,
    zeros_term,
)

logger = setup_logging()

Realizers = Mapping[str, Term]


def simplify(term: Term, signature: StreamSignature) -> Term:
    """Normalize with the split/merge laws, head and tail of cells, and δ on known constructors."""
    if isinstance(term, Var):
        return term
    args = tuple(simplify(arg, signature) for arg in term.args)
    if isinstance(term, Con):
        return Con(term.name, args)
    return _reduce(Fn(term.name, args), signature)


def _is_delta(term: Term, signature: StreamSignature) -> bool:
    return (isinstance(term, Fn) and term.name == DISCRIMINATOR
            and len(term.args) == len(signature.system.vocabulary) + 1)


def _reduce(term: Fn, signature: StreamSignature) -> Term:
    name = term.name
    if name in (SPLIT_EVEN, SPLIT_ODD, signature.hd, signature.tl) and len(term.args) == 1:
        (inner,) = term.args
        if isinstance(inner, Fn) and inner.name == SPLIT_ZEROS:
            return signature.bit(0) if name == signature.hd else inner
        if isinstance(inner, Fn) and inner.name == SPLIT_MERGE:
            first, second = inner.args
            if name == SPLIT_EVEN:
                return first
            if name == SPLIT_ODD:
                return second
            if name == signature.hd:
                return _reduce(signature.head_of(first), signature)
        if isinstance(inner, Con) and inner.name == signature.constructor:
            if name == signature.hd:
                return inner.args[0]
            if name == signature.tl:
                return inner.args[1]
        if _is_delta(inner, signature):
            scrutinee, *branches = inner.args
            pushed = tuple(_reduce(Fn(name, (branch,)), signature) for branch in branches)
            return Fn(DISCRIMINATOR, (scrutinee,) + pushed)
    if _is_delta(term, signature):
        scrutinee, *branches = term.args
        if isinstance(scrutinee, Con):
            for constructor, branch in zip(signature.system.vocabulary, branches):
                if constructor.name == scrutinee.name:
                    return branch
    return term


@dataclass(frozen=True)
class CertificateEntry:
    """The realizer assigned to one derivation node and its depth-transfer factor."""

    path: Path
    rule: str
    realizer: str
    factor: int

    def __str__(self) -> str:
        where = '.'.join(str(i) for i in self.path) or 'root'
        return f'{where}\t{self.rule}\t{self.realizer}\tdepth/{self.factor}'


@dataclass(frozen=True)
class ExtractionResult:
    program: Program
    schema: CorecSchema
    certificate: Tuple[CertificateEntry, ...]
    parameters: Tuple[str, ...]
    # Realizer parameter → the assumption formula it realizes
    assumptions: Tuple[Tuple[str, Formula], ...] = ()

    @property
    def principal(self) -> str:
        return self.program.principal

    def render_certificate(self) -> str:
        return '\n'.join(str(entry) for entry in self.certificate)


class Extractor:
    """Realizers for one derivation over one program."""

    def __init__(self, program: Program, derivation: Derivation):
        self.program = program
        self.derivation = derivation
        self.ds = program.system
        self.signature = stream_signature(self.ds)
        used = term_variables(derivation) | set(program.functions) | set(SPLIT_FUNCTIONS)
        used |= set(self.ds.standard_names) | {c.name for c in self.ds.vocabulary}
        self.names = FreshNames(used)
        self.sorts: Dict[str, str] = {}
        for _, current in derivation.nodes():
            self.sorts = infer_sorts(current.conclusion, self.signature, self.sorts)
        self.corecursions: List[Equation] = []
        self.certificate: List[CertificateEntry] = []
        self._handlers = {
            rules.ASSUME: self._assume,
            rules.AND_INTRO: self._and_intro,
            rules.AND_ELIM: self._and_elim,
            rules.OR_INTRO: self._or_intro,
            rules.OR_ELIM: self._or_elim,
            rules.EXISTS_INTRO: self._exists_intro,
            rules.EXISTS_ELIM: self._exists_elim,
            rules.DATA_INTRO: self._data_intro,
            rules.DATA_ELIM: self._data_elim,
            rules.INJECTIVITY: self._injectivity,
            rules.SEPARATION: self._separation,
            rules.REFL: self._refl,
            rules.REWRITE: self._rewrite,
            rules.EQ_SUBST: self._eq_subst,
            rules.INDUCTION: self._induction,
            rules.COINDUCTION: self._coinduction,
        }

    # Value encodings

    def encode(self, value: Term, sort: str) -> Term:
        """The canonical realizer of a value: itself for streams, its head otherwise."""
        if sort == self.signature.stream:
            return value
        if sort == self.signature.head:
            return self.signature.cons(value, zeros_term())
        raise ExtractionError(f'no realizer encoding for values of {sort}')

    def decode(self, realizer: Term, sort: str) -> Term:
        if sort == self.signature.stream:
            return realizer
        if sort == self.signature.head:
            return self.signature.head_of(realizer)
        raise ExtractionError(f'no realizer encoding for values of {sort}')

    def sort_of(self, term: Term) -> str:
        return self.signature.term_sort(term, self.sorts)

    def bound_sort(self, formula: Exists) -> str:
        return infer_sorts(formula.body, self.signature).get(formula.var, self.signature.stream)

    # Traversal

    def realize(self, d: Derivation, rho: Realizers, path: Path = (), irrelevant: bool = False,
                splits: int = 0) -> Term:
        """A realizer term for d's conclusion, given realizers `rho` for its open assumptions.

        Equality conclusions under a coinduction are never read by the corecursive
        function built for it and realize as the zero stream.
        """
        if irrelevant and isinstance(d.conclusion, Equality):
            realizer: Term = zeros_term()
        else:
            handler = self._handlers.get(d.rule)
            if handler is None:
                raise ExtractionError(f'rule {d.rule} at {_where(path)} has no computational content here')
            realizer = simplify(handler(d, rho, path, irrelevant, splits), self.signature)
        self.certificate.append(CertificateEntry(path, d.rule, render_term(realizer), 2 ** splits))
        return realizer

    def _premise(self, d: Derivation, index: int, rho: Realizers, path: Path, irrelevant: bool,
                 splits: int) -> Term:
        return self.realize(d.premises[index], rho, path + (index,), irrelevant, splits)

    def _assume(self, d: Derivation, rho: Realizers, path: Path, irrelevant: bool, splits: int) -> Term:
        name = d.attribute('name')
        if name not in rho:
            raise ExtractionError(f'assumption {name} at {_where(path)} has no realizer')
        return rho[name]

    def _and_intro(self, d, rho, path, irrelevant, splits) -> Term:
        left = self._premise(d, 0, rho, path, irrelevant, splits + 1)
        right = self._premise(d, 1, rho, path, irrelevant, splits + 1)
        return pair_term(left, right)

    def _and_elim(self, d, rho, path, irrelevant, splits) -> Term:
        return split_term(self._premise(d, 0, rho, path, irrelevant, splits), d.attribute('index'))

    def _or_intro(self, d, rho, path, irrelevant, splits) -> Term:
        inner = self._premise(d, 0, rho, path, irrelevant, splits)
        return self.signature.cons(self.signature.bit(d.attribute('index')), inner)

    def _or_elim(self, d, rho, path, irrelevant, splits) -> Term:
        major = self._premise(d, 0, rho, path, irrelevant, splits)
        carried = self.signature.tail_of(major)
        left = self._premise(d, 1, {**rho, d.attribute('discharge0'): carried}, path, irrelevant, splits)
        right = self._premise(d, 2, {**rho, d.attribute('discharge1'): carried}, path, irrelevant, splits)
        branches = {self.signature.false: left, self.signature.true: right}
        return self.signature.delta(self.signature.head_of(major), branches, zeros_term())

    def _exists_intro(self, d, rho, path, irrelevant, splits) -> Term:
        witness = self.encode(d.attribute('witness'), self.bound_sort(d.conclusion))
        return pair_term(witness, self._premise(d, 0, rho, path, irrelevant, splits + 1))

    def _exists_elim(self, d, rho, path, irrelevant, splits) -> Term:
        major = self._premise(d, 0, rho, path, irrelevant, splits)
        inner = {**rho, d.attribute('discharge'): split_term(major, 1)}
        minor = self._premise(d, 1, inner, path, irrelevant, splits)
        witness = self.decode(split_term(major, 0), self.bound_sort(d.premises[0].conclusion))
        return substitute(minor, {d.attribute('eigen'): witness})

    def _data_intro(self, d, rho, path, irrelevant, splits) -> Term:
        conclusion: Atom = d.conclusion
        values = tuple(
            self.decode(self._premise(d, i, rho, path, irrelevant, splits), premise.conclusion.predicate)
            for i, premise in enumerate(d.premises)
        )
        return self.encode(Con(conclusion.term.name, values), conclusion.predicate)

    def _data_elim(self, d, rho, path, irrelevant, splits) -> Term:
        premise: Atom = d.premises[0].conclusion
        value = self.decode(self._premise(d, 0, rho, path, irrelevant, splits), premise.predicate)
        component = Fn(self.ds.destructor_name(d.attribute('index')), (value,))
        return self.encode(component, d.conclusion.predicate)

    def _injectivity(self, d, rho, path, irrelevant, splits) -> Term:
        premise: Equality = d.premises[0].conclusion
        value = self.decode(self._premise(d, 0, rho, path, irrelevant, splits), self.sort_of(premise.left))
        component = Fn(self.ds.destructor_name(d.attribute('index')), (value,))
        return self.encode(component, self.sort_of(d.conclusion.left))

    def _separation(self, d, rho, path, irrelevant, splits) -> Term:
        return zeros_term()

    def _refl(self, d, rho, path, irrelevant, splits) -> Term:
        term = d.conclusion.left
        return self.encode(term, self.sort_of(term))

    def _rewrite(self, d, rho, path, irrelevant, splits) -> Term:
        return self._premise(d, 0, rho, path, irrelevant, splits)

    def _eq_subst(self, d, rho, path, irrelevant, splits) -> Term:
        return self._premise(d, 1, rho, path, irrelevant, splits)

    def _induction(self, d, rho, path, irrelevant, splits) -> Term:
        predicate = d.attribute('predicate')
        if predicate != self.signature.head:
            raise ExtractionError(f'induction over {predicate} at {_where(path)} has no realizer')
        major = self._premise(d, 0, rho, path, irrelevant, splits)
        branches = {}
        for index, (ctype, (eigens, _)) in enumerate(zip(self.ds.types_for(predicate), d.attribute('cases')),
                                                     start=1):
            if eigens:
                raise ExtractionError(f'induction case {ctype} at {_where(path)} binds eigenvariables')
            branches[ctype.constructor.name] = self._premise(d, index, rho, path, irrelevant, splits)
        default = next(iter(branches.values()))
        return self.signature.delta(self.signature.head_of(major), branches, default)

    def _coinduction(self, d, rho, path, irrelevant, splits) -> Term:
        """r(p⃗, w) with head and tail read off the decomposition realizer of the right premise."""
        if d.attribute('predicate') != self.signature.stream or len(self.ds.types_for(self.signature.stream)) != 1:
            raise ExtractionError(f'coinduction at {_where(path)} is not over the stream predicate')
        start = self._premise(d, 0, rho, path, True, splits)
        w = self.names.fresh('w')
        step = self._premise(d, 1, {**rho, d.attribute('discharge'): Var(w)}, path, True, splits)

        # Dcm = ∃z0.∃z1. B(z0) ∧ (φ[z1] ∧ x = z0:z1)
        head = simplify(self.signature.head_of(split_term(step, 0)), self.signature)
        rest = step
        for _ in range(3):
            rest = split_term(rest, 1)
        tail = simplify(split_term(rest, 0), self.signature)

        eigen = d.attribute('eigen')
        for part, label in ((head, 'head'), (tail, 'tail')):
            if any(v == eigen for v in variable_occurrences(part)):
                raise ExtractionError(f'{label} realizer at {_where(path)} depends on the eigenvariable {eigen}')

        params = _ordered(variable_occurrences(head) + variable_occurrences(tail), exclude={w})
        name = self.names.fresh('r')
        patterns = tuple(Var(p) for p in params) + (Var(w),)
        recurse = Fn(name, tuple(Var(p) for p in params) + (tail,))
        self.corecursions.append(Equation(name, patterns, head, self.signature.hd))
        self.corecursions.append(Equation(name, patterns, recurse, self.signature.tl))
        logger.debug(f'Coinduction at {_where(path)} extracted as {name}({", ".join(params + [w])})')
        return Fn(name, tuple(Var(p) for p in params) + (start,))

    # Assembly

    def run(self) -> ExtractionResult:
        scan = assert_sp_proof(self.derivation)
        if not scan.ok:
            raise ExtractionError(
                f'{render_formula(scan.formula)} at {_where(scan.path)} is not strongly positive'
            )
        conclusion = self.derivation.conclusion
        opened = open_assumptions(self.derivation)

        occurrences: List[str] = []
        for formula in (conclusion, *opened.values()):
            for term in formula_terms(formula):
                occurrences.extend(variable_occurrences(term))
        term_parameters = _ordered(occurrences)

        rho: Dict[str, Term] = {}
        assumptions = []
        for label, formula in opened.items():
            var = self.names.fresh(label)
            rho[label] = Var(var)
            assumptions.append((var, formula))
        parameters = term_parameters + [var for var, _ in assumptions]

        realizer = self.realize(self.derivation, rho)
        stray = [v for v in variable_occurrences(realizer) if v not in parameters]
        if stray:
            raise ExtractionError(f'realizer depends on unbound variables {sorted(set(stray))}')

        principal = self.names.fresh('f0')
        body = self._support(realizer)
        body.extend(self.corecursions)
        body.append(Equation(principal, tuple(Var(p) for p in parameters), realizer))
        extracted = Program.build(f'{self.program.name}_extracted', body, self.ds, principal)

        verdict = check_primitive_corecursive(extracted)
        if not verdict.accepted:
            raise ExtractionError(f'extracted program is not primitive corecursive: {verdict.reason}')
        certificate = tuple(sorted(self.certificate, key=lambda entry: entry.path))
        logger.info(
            f'Extracted {principal} with {len(self.corecursions) // 2} corecursive functions '
            f'from a derivation of size {self.derivation.size}'
        )
        return ExtractionResult(extracted, verdict.schema, certificate, tuple(parameters), tuple(assumptions))

    def _support(self, realizer: Term) -> List[Equation]:
        """Split equations and the program's functions the realizers call, in declaration order."""
        needed = function_names(realizer)
        for equation in self.corecursions:
            needed |= function_names(equation.rhs)
        pending = [n for n in needed if n in self.program.functions]
        reached = set()
        while pending:
            name = pending.pop()
            if name in reached:
                continue
            reached.add(name)
            for equation in self.program.equations_for(name):
                pending.extend(n for n in function_names(equation.rhs) if n in self.program.functions)
        body = list(split_equations(self.signature))
        body.extend(
            e for e in self.program.defined_equations
            if e.function in reached and e not in body
        )
        return body


def _where(path: Optional[Path]) -> str:
    return '.'.join(str(i) for i in path or ()) or 'root'


def _ordered(names: List[str], exclude=frozenset()) -> List[str]:
    seen: Dict[str, None] = {}
    for name in names:
        if name not in exclude:
            seen.setdefault(name, None)
    return list(seen)


def extract(derivation: Derivation, program: Program) -> ExtractionResult:
    """The primitive corecursive program realized by a normal, strongly positive derivation."""
    return Extractor(program, derivation).run()
