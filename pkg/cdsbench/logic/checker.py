"""Proof checking: every node of a derivation against the rules of the intrinsic theory."""

from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

from ..data_system import COINDUCTIVE, INDUCTIVE, DataSystem
from ..errors import WorkbenchError
from ..log_config import setup_logging
from ..program import Program, match
from ..terms import Con, Fn, Term, Var, replace_at, subterm_at, substitute
from . import derivation as rules
from .derivation import Derivation, Path, binders
from .formulas import (
    Atom,
    Conjunction,
    Disjunction,
    Equality,
    Exists,
    Forall,
    Formula,
    Implication,
    alpha_equal,
    atom_term_at,
    free_variables,
    is_strongly_positive,
    render_formula,
    replace_atom_term,
    substitute_formula,
)
from .theory import build_dcm, induction_case

logger = setup_logging()


@dataclass(frozen=True)
class RuleViolation:
    path: Path
    rule: str
    reason: str

    def __str__(self) -> str:
        where = '.'.join(str(i) for i in self.path) or 'root'
        return f'{self.rule} at {where}: {self.reason}'


@dataclass(frozen=True)
class ProofJudgment:
    ok: bool
    assumptions: Tuple[Tuple[str, Formula], ...] = ()
    conclusion: Optional[Formula] = None
    violation: Optional[RuleViolation] = None

    def __str__(self) -> str:
        if not self.ok:
            return f'violation: {self.violation}'
        context = ', '.join(render_formula(f) for _, f in self.assumptions)
        return f'{{{context}}} ⊢ {render_formula(self.conclusion)}'


class _Violation(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


Context = Dict[str, Formula]


class ProofChecker:
    """Checks derivations for one data system and program."""

    def __init__(self, ds: DataSystem, program: Program):
        self.ds = ds
        self.program = program

    def check(self, d: Derivation) -> ProofJudgment:
        try:
            context = self._node(d, ())
        except _NodeFailure as failure:
            logger.info(f'Proof rejected: {failure.violation}')
            return ProofJudgment(False, violation=failure.violation)
        return ProofJudgment(True, tuple(context.items()), d.conclusion)

    def _node(self, d: Derivation, path: Path) -> Context:
        contexts = [self._node(p, path + (i,)) for i, p in enumerate(d.premises)]
        handler = getattr(self, '_' + d.rule.replace('-', '_'), None)
        try:
            if d.rule not in rules.RULES or handler is None:
                raise _Violation(f'unknown rule {d.rule}')
            self._check_atoms(d.conclusion)
            handler(d, contexts)
            return self._combine(d, contexts)
        except _Violation as violation:
            raise _NodeFailure(RuleViolation(path, d.rule, violation.reason))
        except WorkbenchError as error:
            raise _NodeFailure(RuleViolation(path, d.rule, str(error)))
        except (TypeError, ValueError, IndexError) as error:
            raise _NodeFailure(RuleViolation(path, d.rule, f'malformed node: {error}'))

    def _check_atoms(self, formula: Formula):
        if isinstance(formula, Atom):
            if not self.ds.has_predicate(formula.predicate):
                raise _Violation(f'unknown data predicate {formula.predicate}')
        elif isinstance(formula, (Exists, Forall)):
            self._check_atoms(formula.body)
        elif isinstance(formula, (Conjunction, Disjunction)):
            self._check_atoms(formula.left)
            self._check_atoms(formula.right)
        elif isinstance(formula, Implication):
            self._check_atoms(formula.antecedent)
            self._check_atoms(formula.consequent)

    def _combine(self, d: Derivation, contexts: Sequence[Context]) -> Context:
        if d.rule == rules.ASSUME:
            return {d.attribute('name'): d.conclusion}
        bound = {}
        for binder in binders(d):
            bound.setdefault(binder.premise, set()).update(binder.discharges)
        combined: Context = {}
        for index, context in enumerate(contexts):
            for name, formula in context.items():
                if name in bound.get(index, ()):
                    continue
                if name in combined and not alpha_equal(combined[name], formula):
                    raise _Violation(f'assumption {name} is used for two different formulas')
                combined.setdefault(name, formula)
        return combined

    @staticmethod
    def _require(d: Derivation, key: str):
        value = d.attribute(key)
        if value is None:
            raise _Violation(f'missing attribute {key}')
        return value

    @staticmethod
    def _arity(d: Derivation, count: int):
        if len(d.premises) != count:
            raise _Violation(f'expects {count} premises, got {len(d.premises)}')

    @staticmethod
    def _same(expected: Formula, found: Formula, what: str):
        if not alpha_equal(expected, found):
            raise _Violation(f'{what}: expected {render_formula(expected)}, found {render_formula(found)}')

    @staticmethod
    def _discharged(context: Context, name: str, formula: Formula):
        if name in context and not alpha_equal(context[name], formula):
            raise _Violation(
                f'discharged assumption {name} is {render_formula(context[name])}, '
                f'expected {render_formula(formula)}'
            )

    @staticmethod
    def _eigen_free(eigen: str, formulas: Sequence[Formula], what: str):
        for formula in formulas:
            if eigen in free_variables(formula):
                raise _Violation(f'eigenvariable {eigen} occurs free in {what} {render_formula(formula)}')

    # Minimal first-order logic

    def _assume(self, d: Derivation, contexts):
        self._arity(d, 0)
        self._require(d, 'name')

    def _imp_intro(self, d: Derivation, contexts):
        self._arity(d, 1)
        name = self._require(d, 'discharge')
        if not isinstance(d.conclusion, Implication):
            raise _Violation('conclusion is not an implication')
        self._same(d.conclusion.consequent, d.premises[0].conclusion, 'premise')
        self._discharged(contexts[0], name, d.conclusion.antecedent)

    def _imp_elim(self, d: Derivation, contexts):
        self._arity(d, 2)
        major, minor = d.premises
        if not isinstance(major.conclusion, Implication):
            raise _Violation('major premise is not an implication')
        self._same(major.conclusion.antecedent, minor.conclusion, 'minor premise')
        self._same(major.conclusion.consequent, d.conclusion, 'conclusion')

    def _and_intro(self, d: Derivation, contexts):
        self._arity(d, 2)
        if not isinstance(d.conclusion, Conjunction):
            raise _Violation('conclusion is not a conjunction')
        self._same(d.conclusion.left, d.premises[0].conclusion, 'left premise')
        self._same(d.conclusion.right, d.premises[1].conclusion, 'right premise')

    def _and_elim(self, d: Derivation, contexts):
        self._arity(d, 1)
        index = self._require(d, 'index')
        premise = d.premises[0].conclusion
        if not isinstance(premise, Conjunction) or index not in (0, 1):
            raise _Violation('premise is not a conjunction or index is not 0/1')
        self._same((premise.left, premise.right)[index], d.conclusion, 'conclusion')

    def _or_intro(self, d: Derivation, contexts):
        self._arity(d, 1)
        index = self._require(d, 'index')
        if not isinstance(d.conclusion, Disjunction) or index not in (0, 1):
            raise _Violation('conclusion is not a disjunction or index is not 0/1')
        self._same((d.conclusion.left, d.conclusion.right)[index], d.premises[0].conclusion, 'premise')

    def _or_elim(self, d: Derivation, contexts):
        self._arity(d, 3)
        major = d.premises[0].conclusion
        if not isinstance(major, Disjunction):
            raise _Violation('major premise is not a disjunction')
        for index, side in ((1, major.left), (2, major.right)):
            name = self._require(d, f'discharge{index - 1}')
            self._same(d.conclusion, d.premises[index].conclusion, f'case {index - 1}')
            self._discharged(contexts[index], name, side)

    def _exists_intro(self, d: Derivation, contexts):
        self._arity(d, 1)
        witness = self._require(d, 'witness')
        if not isinstance(d.conclusion, Exists):
            raise _Violation('conclusion is not existential')
        expected = substitute_formula(d.conclusion.body, {d.conclusion.var: witness})
        self._same(expected, d.premises[0].conclusion, 'premise')

    def _exists_elim(self, d: Derivation, contexts):
        self._arity(d, 2)
        name = self._require(d, 'discharge')
        eigen = self._require(d, 'eigen')
        major = d.premises[0].conclusion
        if not isinstance(major, Exists):
            raise _Violation('major premise is not existential')
        self._same(d.conclusion, d.premises[1].conclusion, 'minor premise')
        opened = substitute_formula(major.body, {major.var: Var(eigen)})
        self._discharged(contexts[1], name, opened)
        others = [f for n, f in contexts[1].items() if n != name]
        self._eigen_free(eigen, [major, d.conclusion] + others, 'side formula')

    def _forall_intro(self, d: Derivation, contexts):
        self._arity(d, 1)
        eigen = self._require(d, 'eigen')
        if not isinstance(d.conclusion, Forall):
            raise _Violation('conclusion is not universal')
        expected = substitute_formula(d.conclusion.body, {d.conclusion.var: Var(eigen)})
        self._same(expected, d.premises[0].conclusion, 'premise')
        self._eigen_free(eigen, [d.conclusion] + list(contexts[0].values()), 'open assumption')

    def _forall_elim(self, d: Derivation, contexts):
        self._arity(d, 1)
        witness = self._require(d, 'witness')
        premise = d.premises[0].conclusion
        if not isinstance(premise, Forall):
            raise _Violation('premise is not universal')
        self._same(substitute_formula(premise.body, {premise.var: witness}), d.conclusion, 'conclusion')

    # Data rules

    def _data_intro(self, d: Derivation, contexts):
        conclusion = d.conclusion
        if not isinstance(conclusion, Atom) or not isinstance(conclusion.term, Con):
            raise _Violation('conclusion is not a data-atom on a constructor term')
        term = conclusion.term
        for ctype in self.ds.types_of(term.name, result=conclusion.predicate):
            if len(ctype.arguments) != len(term.args) or len(d.premises) != len(term.args):
                continue
            expected = [Atom(a.name, t) for a, t in zip(ctype.arguments, term.args)]
            if all(alpha_equal(e, p.conclusion) for e, p in zip(expected, d.premises)):
                return
        raise _Violation(f'no constructor type of {term.name} into {conclusion.predicate} fits the premises')

    def _data_elim(self, d: Derivation, contexts):
        self._arity(d, 1)
        index = self._require(d, 'index')
        premise = d.premises[0].conclusion
        if not isinstance(premise, Atom):
            raise _Violation('premise is not a data-atom')
        candidates = []
        term = premise.term
        if isinstance(term, Con):
            types = self.ds.types_of(term.name, result=premise.predicate)
            if len(types) == 1 and 1 <= index <= len(term.args):
                candidates.append(Atom(types[0].arguments[index - 1].name, term.args[index - 1]))
        types = self.ds.types_for(premise.predicate)
        if len(types) == 1 and 1 <= index <= len(types[0].arguments):
            destructor = self.ds.destructor_name(index)
            candidates.append(Atom(types[0].arguments[index - 1].name, Fn(destructor, (term,))))
        if not any(alpha_equal(c, d.conclusion) for c in candidates):
            raise _Violation(f'{render_formula(d.conclusion)} is not component {index} of {render_formula(premise)}')

    def _injectivity(self, d: Derivation, contexts):
        self._arity(d, 1)
        index = self._require(d, 'index')
        premise = d.premises[0].conclusion
        if not (isinstance(premise, Equality) and isinstance(premise.left, Con) and isinstance(premise.right, Con)):
            raise _Violation('premise is not an equation between constructor terms')
        left, right = premise.left, premise.right
        if left.name != right.name or not 1 <= index <= len(left.args):
            raise _Violation('premise sides have different constructors or index out of range')
        self._same(Equality(left.args[index - 1], right.args[index - 1]), d.conclusion, 'conclusion')

    def _separation(self, d: Derivation, contexts):
        self._arity(d, 1)
        premise = d.premises[0].conclusion
        if not (isinstance(premise, Equality) and isinstance(premise.left, Con) and isinstance(premise.right, Con)):
            raise _Violation('premise is not an equation between constructor terms')
        if premise.left.name == premise.right.name:
            raise _Violation('premise sides share their constructor')

    def _refl(self, d: Derivation, contexts):
        self._arity(d, 0)
        if not isinstance(d.conclusion, Equality) or d.conclusion.left != d.conclusion.right:
            raise _Violation('conclusion is not an instance of t = t')

    # Equational reasoning

    def _positioned(self, before: Formula, after: Formula, position: Sequence[int]) -> Tuple[Term, Term]:
        located_before = atom_term_at(before, position)
        located_after = atom_term_at(after, position)
        if located_before is None or located_after is None or type(before) is not type(after):
            raise _Violation('position does not address a term of matching atomic formulas')
        if isinstance(before, Atom) and before.predicate != after.predicate:
            raise _Violation('rewriting changed the data predicate')
        (outer_before, inner_path), (outer_after, _) = located_before, located_after
        try:
            old = subterm_at(outer_before, inner_path)
            new = subterm_at(outer_after, inner_path)
        except IndexError as error:
            raise _Violation(str(error))
        if replace_atom_term(before, position, replace_at(outer_before, inner_path, new)) != after:
            raise _Violation('formulas differ outside the rewritten position')
        return old, new

    def _rewrite(self, d: Derivation, contexts):
        self._arity(d, 1)
        function = self._require(d, 'equation')
        direction = self._require(d, 'direction')
        position = tuple(self._require(d, 'position'))
        if direction not in ('lr', 'rl'):
            raise _Violation(f'direction {direction} is not lr or rl')
        old, new = self._positioned(d.premises[0].conclusion, d.conclusion, position)
        source, target = (old, new) if direction == 'lr' else (new, old)
        for lhs, rhs in self.program.rewrite_candidates(function):
            bindings = match(lhs, source)
            if bindings is not None and substitute(rhs, bindings) == target:
                return
        raise _Violation(f'no equation of {function} rewrites the subterm at {list(position)}')

    def _eq_subst(self, d: Derivation, contexts):
        self._arity(d, 2)
        position = tuple(self._require(d, 'position'))
        equation = d.premises[0].conclusion
        if not isinstance(equation, Equality):
            raise _Violation('first premise is not an equation')
        old, new = self._positioned(d.premises[1].conclusion, d.conclusion, position)
        if old != equation.left or new != equation.right:
            raise _Violation('substituted subterms do not match the equation')

    # Induction and coinduction

    def _induction(self, d: Derivation, contexts):
        predicate = self.ds.predicate(self._require(d, 'predicate'))
        var = self._require(d, 'var')
        formula = self._require(d, 'formula')
        cases = self._require(d, 'cases')
        if predicate.kind != INDUCTIVE:
            raise _Violation(f'{predicate.name} is not inductive')
        types = self.ds.types_for(predicate)
        self._arity(d, 1 + len(types))
        if len(cases) != len(types):
            raise _Violation(f'{len(cases)} cases for {len(types)} constructor types')
        major = d.premises[0].conclusion
        if not isinstance(major, Atom) or major.predicate != predicate.name:
            raise _Violation(f'major premise is not a {predicate.name}-atom')
        self._same(substitute_formula(formula, {var: major.term}), d.conclusion, 'conclusion')
        outside = free_variables(formula) - {var}
        for position, (ctype, (eigens, discharges)) in enumerate(zip(types, cases), start=1):
            if len(eigens) != len(ctype.arguments) or len(discharges) != len(ctype.arguments):
                raise _Violation(f'case {ctype} needs {len(ctype.arguments)} eigenvariables and discharges')
            if len(set(eigens)) != len(eigens):
                raise _Violation(f'repeated eigenvariables in case {ctype}')
            hypotheses, goal = induction_case(self.ds, predicate, ctype, formula, var, eigens)
            self._same(goal, d.premises[position].conclusion, f'case {ctype}')
            context = contexts[position]
            for name, hypothesis in zip(discharges, hypotheses):
                self._discharged(context, name, hypothesis)
            others = [f for n, f in context.items() if n not in discharges]
            for eigen in eigens:
                if eigen in outside:
                    raise _Violation(f'eigenvariable {eigen} occurs free in the induction formula')
                self._eigen_free(eigen, others, 'open assumption')

    def _coinduction(self, d: Derivation, contexts):
        predicate = self.ds.predicate(self._require(d, 'predicate'))
        var = self._require(d, 'var')
        formula = self._require(d, 'formula')
        eigen = self._require(d, 'eigen')
        name = self._require(d, 'discharge')
        if predicate.kind != COINDUCTIVE:
            raise _Violation(f'{predicate.name} is not coinductive')
        if not is_strongly_positive(formula):
            raise _Violation('coinduction formula is not strongly positive')
        self._arity(d, 2)
        conclusion = d.conclusion
        if not isinstance(conclusion, Atom) or conclusion.predicate != predicate.name:
            raise _Violation(f'conclusion is not a {predicate.name}-atom')
        self._same(substitute_formula(formula, {var: conclusion.term}), d.premises[0].conclusion, 'first premise')
        if eigen in free_variables(formula) - {var}:
            raise _Violation(f'eigenvariable {eigen} occurs free in the coinduction formula')
        hypothesis = substitute_formula(formula, {var: Var(eigen)})
        dcm = build_dcm(self.ds, predicate, hypothesis, eigen)
        self._same(dcm, d.premises[1].conclusion, 'decomposition premise')
        context = contexts[1]
        self._discharged(context, name, hypothesis)
        others = [f for n, f in context.items() if n != name]
        self._eigen_free(eigen, others, 'open assumption')


class _NodeFailure(Exception):
    def __init__(self, violation: RuleViolation):
        super().__init__(str(violation))
        self.violation = violation


def check_proof(ds: DataSystem, program: Program, d: Derivation) -> ProofJudgment:
    return ProofChecker(ds, program).check(d)
