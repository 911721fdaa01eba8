"""Natural-deduction derivations with program rewriting and (co)induction rules."""

from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Set, Tuple

from ..terms import FreshNames, Term, Var, substitute, variables
from .formulas import Formula, all_variables, free_variables, substitute_formula

ASSUME = 'assume'
IMP_INTRO = 'imp-intro'
IMP_ELIM = 'imp-elim'
AND_INTRO = 'and-intro'
AND_ELIM = 'and-elim'
OR_INTRO = 'or-intro'
OR_ELIM = 'or-elim'
EXISTS_INTRO = 'exists-intro'
EXISTS_ELIM = 'exists-elim'
FORALL_INTRO = 'forall-intro'
FORALL_ELIM = 'forall-elim'
DATA_INTRO = 'data-intro'
DATA_ELIM = 'data-elim'
INJECTIVITY = 'injectivity'
SEPARATION = 'separation'
REFL = 'refl'
REWRITE = 'rewrite'
EQ_SUBST = 'eq-subst'
INDUCTION = 'induction'
COINDUCTION = 'coinduction'

RULES = (
    ASSUME, IMP_INTRO, IMP_ELIM, AND_INTRO, AND_ELIM, OR_INTRO, OR_ELIM, EXISTS_INTRO, EXISTS_ELIM,
    FORALL_INTRO, FORALL_ELIM, DATA_INTRO, DATA_ELIM, INJECTIVITY, SEPARATION, REFL, REWRITE, EQ_SUBST,
    INDUCTION, COINDUCTION,
)

# Attribute keys whose values are terms or formulas
TERM_ATTRIBUTES = ('witness',)
FORMULA_ATTRIBUTES = ('formula',)

Path = Tuple[int, ...]


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Formula
    premises: Tuple['Derivation', ...] = ()
    attributes: Tuple[Tuple[str, Any], ...] = ()

    def attribute(self, key: str, default: Any = None) -> Any:
        for name, value in self.attributes:
            if name == key:
                return value
        return default

    def with_attributes(self, **changes) -> 'Derivation':
        merged = [(k, changes.pop(k) if k in changes else v) for k, v in self.attributes]
        merged.extend(changes.items())
        return Derivation(self.rule, self.conclusion, self.premises, tuple(merged))

    def with_premises(self, premises: Sequence['Derivation']) -> 'Derivation':
        return Derivation(self.rule, self.conclusion, tuple(premises), self.attributes)

    def nodes(self, path: Path = ()) -> Iterator[Tuple[Path, 'Derivation']]:
        """Pre-order walk with premise-index paths."""
        yield path, self
        for index, premise in enumerate(self.premises):
            yield from premise.nodes(path + (index,))

    def at(self, path: Sequence[int]) -> 'Derivation':
        node = self
        for index in path:
            node = node.premises[index]
        return node

    @property
    def size(self) -> int:
        return 1 + sum(p.size for p in self.premises)


def node(rule: str, conclusion: Formula, *premises: Derivation, **attributes) -> Derivation:
    return Derivation(rule, conclusion, tuple(premises), tuple(attributes.items()))


def assume(name: str, formula: Formula) -> Derivation:
    return Derivation(ASSUME, formula, (), (('name', name),))


@dataclass(frozen=True)
class Binder:
    """Eigenvariables and assumption names a rule binds in one premise."""

    premise: int
    eigens: Tuple[str, ...]
    discharges: Tuple[str, ...]


def binders(d: Derivation) -> List[Binder]:
    attr = d.attribute
    if d.rule == IMP_INTRO:
        return [Binder(0, (), (attr('discharge'),))]
    if d.rule == OR_ELIM:
        return [Binder(1, (), (attr('discharge0'),)), Binder(2, (), (attr('discharge1'),))]
    if d.rule == EXISTS_ELIM:
        return [Binder(1, (attr('eigen'),), (attr('discharge'),))]
    if d.rule == FORALL_INTRO:
        return [Binder(0, (attr('eigen'),), ())]
    if d.rule == INDUCTION:
        return [
            Binder(index, tuple(eigens), tuple(discharges))
            for index, (eigens, discharges) in enumerate(attr('cases', ()), start=1)
        ]
    if d.rule == COINDUCTION:
        return [Binder(1, (attr('eigen'),), (attr('discharge'),))]
    return []


def _rebind(d: Derivation, binder: Binder, eigens: Dict[str, str], discharges: Dict[str, str]) -> Derivation:
    """Rename the binder's names in the node's attributes."""
    if not eigens and not discharges:
        return d
    if d.rule == INDUCTION:
        cases = list(d.attribute('cases'))
        old_eigens, old_discharges = cases[binder.premise - 1]
        cases[binder.premise - 1] = (
            tuple(eigens.get(e, e) for e in old_eigens),
            tuple(discharges.get(a, a) for a in old_discharges),
        )
        return d.with_attributes(cases=tuple(cases))
    changes = {}
    for key, value in d.attributes:
        if key in ('eigen',) and value in eigens:
            changes[key] = eigens[value]
        if key in ('discharge', 'discharge0', 'discharge1') and value in discharges:
            if d.rule == OR_ELIM and key != f'discharge{binder.premise - 1}':
                continue
            changes[key] = discharges[value]
    return d.with_attributes(**changes)


def open_assumptions(d: Derivation) -> Dict[str, Formula]:
    """Undischarged assumption names with their formulas, in first-use order."""
    if d.rule == ASSUME:
        return {d.attribute('name'): d.conclusion}
    bound = {b.premise: set(b.discharges) for b in binders(d)}
    found: Dict[str, Formula] = {}
    for index, premise in enumerate(d.premises):
        for name, formula in open_assumptions(premise).items():
            if name not in bound.get(index, ()):
                found.setdefault(name, formula)
    return found


def term_variables(d: Derivation) -> Set[str]:
    """Every variable name mentioned anywhere in a derivation."""
    names: Set[str] = set()
    for _, current in d.nodes():
        names |= all_variables(current.conclusion)
        for key, value in current.attributes:
            if key in TERM_ATTRIBUTES:
                names |= variables(value)
            elif key in FORMULA_ATTRIBUTES:
                names |= all_variables(value)
            elif key in ('eigen', 'var'):
                names.add(value)
            elif key == 'cases':
                for eigens, _ in value:
                    names.update(eigens)
    return names


def assumption_names(d: Derivation) -> Set[str]:
    names: Set[str] = set()
    for _, current in d.nodes():
        if current.rule == ASSUME:
            names.add(current.attribute('name'))
        for binder in binders(current):
            names.update(binder.discharges)
    return names


def substitute_variable(d: Derivation, var: str, term: Term) -> Derivation:
    """Replace the free term variable `var` by `term` throughout, renaming eigenvariables it would capture."""
    incoming = variables(term)
    mapping = {var: term}
    conclusion = substitute_formula(d.conclusion, mapping)
    attributes = []
    for key, value in d.attributes:
        if key in TERM_ATTRIBUTES:
            value = substitute(value, mapping)
        attributes.append((key, value))
    updated = Derivation(d.rule, conclusion, d.premises, tuple(attributes))
    updated = _substitute_schema_formula(updated, var, term)

    premises = list(updated.premises)
    for binder in binders(updated):
        if var in binder.eigens:
            continue
        clashes = [e for e in binder.eigens if e in incoming]
        if clashes:
            fresh = FreshNames(term_variables(d) | incoming | {var})
            renaming = {e: fresh.fresh(e) for e in clashes}
            premise = premises[binder.premise]
            for old, new in renaming.items():
                premise = substitute_variable(premise, old, Var(new))
            premises[binder.premise] = premise
            updated = _rebind(updated, binder, renaming, {})
    bound = {b.premise for b in binders(updated) if var in b.eigens}
    premises = [p if i in bound else substitute_variable(p, var, term) for i, p in enumerate(premises)]
    return updated.with_premises(premises)


def _substitute_schema_formula(d: Derivation, var: str, term: Term) -> Derivation:
    """Substitute into a (co)induction formula, which binds its own distinguished variable."""
    formula = d.attribute('formula')
    if formula is None or d.rule not in (INDUCTION, COINDUCTION):
        return d
    distinguished = d.attribute('var')
    if var == distinguished or var not in free_variables(formula):
        return d
    if distinguished in variables(term):
        fresh = FreshNames(all_variables(formula) | variables(term) | {var}).fresh(distinguished)
        formula = substitute_formula(formula, {distinguished: Var(fresh)})
        d = d.with_attributes(var=fresh)
    return d.with_attributes(formula=substitute_formula(formula, {var: term}))


def rename_assumption(d: Derivation, old: str, new: str) -> Derivation:
    return substitute_assumption(d, old, None, rename_to=new)


def substitute_assumption(d: Derivation, name: str, proof: Optional[Derivation],
                          rename_to: Optional[str] = None) -> Derivation:
    """Graft `proof` onto every free use of assumption `name` (or just rename it)."""
    if d.rule == ASSUME:
        if d.attribute('name') != name:
            return d
        if proof is None:
            return d.with_attributes(name=rename_to)
        return proof

    if proof is not None:
        guarded_names = set(open_assumptions(proof))
        guarded_vars = term_variables(proof)
    else:
        guarded_names = {rename_to}
        guarded_vars = set()

    updated = d
    premises = list(d.premises)
    bound_premises = set()
    for binder in binders(d):
        if name in binder.discharges:
            bound_premises.add(binder.premise)
            continue
        premise = premises[binder.premise]
        discharge_clashes = [a for a in binder.discharges if a in guarded_names]
        eigen_clashes = [e for e in binder.eigens if e in guarded_vars]
        if discharge_clashes:
            fresh = FreshNames(assumption_names(d) | guarded_names | {name})
            renaming = {a: fresh.fresh(a) for a in discharge_clashes}
            for old, new in renaming.items():
                premise = rename_assumption(premise, old, new)
            updated = _rebind(updated, binder, {}, renaming)
        if eigen_clashes:
            fresh = FreshNames(term_variables(d) | guarded_vars)
            renaming = {e: fresh.fresh(e) for e in eigen_clashes}
            for old, new in renaming.items():
                premise = substitute_variable(premise, old, Var(new))
            updated = _rebind(updated, binder, renaming, {})
        premises[binder.premise] = premise
    premises = [
        p if i in bound_premises else substitute_assumption(p, name, proof, rename_to)
        for i, p in enumerate(premises)
    ]
    return updated.with_premises(premises)
