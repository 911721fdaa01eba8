"""Formulas of the intrinsic theory and their polarity classes."""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, Mapping, Optional, Sequence, Set, Tuple, Union

from ..terms import FreshNames, Term, Var, render_term, substitute, variables


@dataclass(frozen=True)
class Atom:
    """A data-atom D(t)."""

    predicate: str
    term: Term


@dataclass(frozen=True)
class Equality:
    left: Term
    right: Term


@dataclass(frozen=True)
class Conjunction:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Disjunction:
    left: 'Formula'
    right: 'Formula'


@dataclass(frozen=True)
class Implication:
    antecedent: 'Formula'
    consequent: 'Formula'


@dataclass(frozen=True)
class Exists:
    var: str
    body: 'Formula'


@dataclass(frozen=True)
class Forall:
    var: str
    body: 'Formula'


Formula = Union[Atom, Equality, Conjunction, Disjunction, Implication, Exists, Forall]
Binary = (Conjunction, Disjunction, Implication)
Quantifier = (Exists, Forall)


class PolarityClass(str, Enum):
    STRONGLY_POSITIVE = 'strongly-positive'
    POSITIVE = 'positive'
    UNIPOLAR = 'unipolar'
    GENERAL = 'general'


def _parts(formula: Formula) -> Tuple[Formula, Formula]:
    if isinstance(formula, Implication):
        return formula.antecedent, formula.consequent
    return formula.left, formula.right


def _rebuild(formula: Formula, left: Formula, right: Formula) -> Formula:
    return type(formula)(left, right)


def free_variables(formula: Formula) -> Set[str]:
    if isinstance(formula, Atom):
        return variables(formula.term)
    if isinstance(formula, Equality):
        return variables(formula.left) | variables(formula.right)
    if isinstance(formula, Quantifier):
        return free_variables(formula.body) - {formula.var}
    left, right = _parts(formula)
    return free_variables(left) | free_variables(right)


def all_variables(formula: Formula) -> Set[str]:
    """Free and bound variable names."""
    if isinstance(formula, (Atom, Equality)):
        return free_variables(formula)
    if isinstance(formula, Quantifier):
        return all_variables(formula.body) | {formula.var}
    left, right = _parts(formula)
    return all_variables(left) | all_variables(right)


def substitute_formula(formula: Formula, mapping: Mapping[str, Term]) -> Formula:
    """Capture-avoiding substitution of terms for free variables."""
    mapping = {k: v for k, v in mapping.items() if not (isinstance(v, Var) and v.name == k)}
    if not mapping:
        return formula
    if isinstance(formula, Atom):
        return Atom(formula.predicate, substitute(formula.term, mapping))
    if isinstance(formula, Equality):
        return Equality(substitute(formula.left, mapping), substitute(formula.right, mapping))
    if isinstance(formula, Quantifier):
        inner = {k: v for k, v in mapping.items() if k != formula.var}
        relevant = {k: v for k, v in inner.items() if k in free_variables(formula.body)}
        if not relevant:
            return formula
        incoming = set()
        for term in relevant.values():
            incoming |= variables(term)
        var, body = formula.var, formula.body
        if var in incoming:
            fresh = FreshNames(incoming | all_variables(body) | set(relevant)).fresh(var)
            body = substitute_formula(body, {var: Var(fresh)})
            var = fresh
        return type(formula)(var, substitute_formula(body, relevant))
    left, right = _parts(formula)
    return _rebuild(formula, substitute_formula(left, mapping), substitute_formula(right, mapping))


def alpha_equal(first: Formula, second: Formula) -> bool:
    return _alpha(first, second, {}, {}, 0)


def _alpha(a: Formula, b: Formula, left: Dict[str, int], right: Dict[str, int], depth: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Atom):
        return a.predicate == b.predicate and _alpha_term(a.term, b.term, left, right)
    if isinstance(a, Equality):
        return _alpha_term(a.left, b.left, left, right) and _alpha_term(a.right, b.right, left, right)
    if isinstance(a, Quantifier):
        return _alpha(a.body, b.body, {**left, a.var: depth}, {**right, b.var: depth}, depth + 1)
    a1, a2 = _parts(a)
    b1, b2 = _parts(b)
    return _alpha(a1, b1, left, right, depth) and _alpha(a2, b2, left, right, depth)


def _alpha_term(s: Term, t: Term, left: Dict[str, int], right: Dict[str, int]) -> bool:
    if isinstance(s, Var) or isinstance(t, Var):
        if not (isinstance(s, Var) and isinstance(t, Var)):
            return False
        if s.name in left or t.name in right:
            return left.get(s.name) == right.get(t.name)
        return s.name == t.name
    if type(s) is not type(t) or s.name != t.name or len(s.args) != len(t.args):
        return False
    return all(_alpha_term(x, y, left, right) for x, y in zip(s.args, t.args))


def conjoin(parts: Sequence[Formula]) -> Formula:
    """Right-associated conjunction of a non-empty sequence."""
    *init, last = parts
    for part in reversed(init):
        last = Conjunction(part, last)
    return last


def disjoin(parts: Sequence[Formula]) -> Formula:
    *init, last = parts
    for part in reversed(init):
        last = Disjunction(part, last)
    return last


def exists_all(names: Sequence[str], body: Formula) -> Formula:
    for name in reversed(names):
        body = Exists(name, body)
    return body


def disjuncts(formula: Formula, count: int) -> Tuple[Formula, ...]:
    """Split a right-associated disjunction of `count` members."""
    out = []
    for _ in range(count - 1):
        if not isinstance(formula, Disjunction):
            raise ValueError('not a disjunction of the expected width')
        out.append(formula.left)
        formula = formula.right
    out.append(formula)
    return tuple(out)


_PRECEDENCE = {Implication: 1, Disjunction: 2, Conjunction: 3}
_SYMBOL = {Implication: '->', Disjunction: '|', Conjunction: '&'}


def render_formula(formula: Formula) -> str:
    if isinstance(formula, Atom):
        return f'{formula.predicate}({render_term(formula.term)})'
    if isinstance(formula, Equality):
        return f'{render_term(formula.left)} = {render_term(formula.right)}'
    if isinstance(formula, Quantifier):
        keyword = 'exists' if isinstance(formula, Exists) else 'forall'
        return f'{keyword} {formula.var}. {render_formula(formula.body)}'
    left, right = _parts(formula)
    level = _PRECEDENCE[type(formula)]
    left_text = render_formula(left)
    if isinstance(left, Quantifier) or (isinstance(left, Binary) and _PRECEDENCE[type(left)] <= level):
        left_text = f'({left_text})'
    right_text = render_formula(right)
    if isinstance(right, Binary) and _PRECEDENCE[type(right)] < level:
        right_text = f'({right_text})'
    return f'{left_text} {_SYMBOL[type(formula)]} {right_text}'


def polarities(formula: Formula, positive: bool = True) -> Iterator[Tuple[str, bool]]:
    """Data-predicate occurrences with their polarity; implication flips its antecedent."""
    if isinstance(formula, Atom):
        yield formula.predicate, positive
    elif isinstance(formula, Equality):
        return
    elif isinstance(formula, Quantifier):
        yield from polarities(formula.body, positive)
    elif isinstance(formula, Implication):
        yield from polarities(formula.antecedent, not positive)
        yield from polarities(formula.consequent, positive)
    else:
        yield from polarities(formula.left, positive)
        yield from polarities(formula.right, positive)


def uses_connective(formula: Formula, kinds: tuple) -> bool:
    if isinstance(formula, kinds):
        return True
    if isinstance(formula, (Atom, Equality)):
        return False
    if isinstance(formula, Quantifier):
        return uses_connective(formula.body, kinds)
    left, right = _parts(formula)
    return uses_connective(left, kinds) or uses_connective(right, kinds)


def classify_formula(formula: Formula) -> PolarityClass:
    """Tightest of strongly-positive ⊆ positive ⊆ unipolar ⊆ general."""
    if not uses_connective(formula, (Implication, Forall)):
        return PolarityClass.STRONGLY_POSITIVE
    occurrences = list(polarities(formula))
    if all(positive for _, positive in occurrences):
        return PolarityClass.POSITIVE
    signs: Dict[str, Set[bool]] = {}
    for predicate, positive in occurrences:
        signs.setdefault(predicate, set()).add(positive)
    if all(len(found) == 1 for found in signs.values()):
        return PolarityClass.UNIPOLAR
    return PolarityClass.GENERAL


def is_strongly_positive(formula: Formula) -> bool:
    return classify_formula(formula) is PolarityClass.STRONGLY_POSITIVE


def formula_terms(formula: Formula) -> Iterator[Term]:
    if isinstance(formula, Atom):
        yield formula.term
    elif isinstance(formula, Equality):
        yield formula.left
        yield formula.right
    elif isinstance(formula, Quantifier):
        yield from formula_terms(formula.body)
    else:
        left, right = _parts(formula)
        yield from formula_terms(left)
        yield from formula_terms(right)


def atom_term_at(formula: Formula, position: Sequence[int]) -> Optional[Tuple[Term, Tuple[int, ...]]]:
    """The term an atomic position addresses and the path inside it.

    For a data-atom the whole position runs inside its term; for an equality
    the first index picks the side.
    """
    if isinstance(formula, Atom):
        return formula.term, tuple(position)
    if isinstance(formula, Equality) and position and position[0] in (0, 1):
        side = formula.left if position[0] == 0 else formula.right
        return side, tuple(position[1:])
    return None


def replace_atom_term(formula: Formula, position: Sequence[int], new_term: Term) -> Formula:
    """Rebuild an atomic formula after replacing the term addressed by `position`'s side."""
    if isinstance(formula, Atom):
        return Atom(formula.predicate, new_term)
    if position[0] == 0:
        return Equality(new_term, formula.right)
    return Equality(formula.left, new_term)
