"""Closure (Cmp) and decomposition (Dcm) formulas of the intrinsic theory."""

from typing import List, Optional, Sequence, Tuple, Union

from ..data_system import ConstructorType, DataPredicate, DataSystem
from ..errors import WorkbenchError
from ..terms import Con, FreshNames, Var
from .formulas import Atom, Equality, Formula, all_variables, conjoin, disjoin, exists_all, substitute_formula


def instantiate(formula: Formula, var: str, name: str) -> Formula:
    return substitute_formula(formula, {var: Var(name)})


def argument_formula(argument: DataPredicate, predicate: DataPredicate, formula: Formula, var: str,
                     name: str) -> Formula:
    """E_i^φ(z): the invariant for recursive arguments, the plain atom otherwise."""
    if argument.name == predicate.name:
        return instantiate(formula, var, name)
    return Atom(argument.name, Var(name))


def build_dcm(ds: DataSystem, predicate: Union[str, DataPredicate], formula: Formula, x: str,
              var: Optional[str] = None) -> Formula:
    """⋁ over C_n of ∃z⃗. (⋀_i E_iᵠ(z_i)) ∧ x = c(z⃗).

    `formula` is φ with distinguished variable `var` (defaults to `x`).
    """
    pred = ds.predicate(predicate) if isinstance(predicate, str) else predicate
    var = var or x
    types = ds.types_for(pred)
    if not types:
        raise WorkbenchError(f'predicate {pred.name} has no constructors to decompose into')
    taken = all_variables(formula) | {x, var}
    alternatives = []
    for ctype in types:
        fresh = FreshNames(taken)
        names = [fresh.fresh(f'z{i}') for i in range(len(ctype.arguments))]
        parts: List[Formula] = [
            argument_formula(argument, pred, formula, var, name) for argument, name in zip(ctype.arguments, names)
        ]
        parts.append(Equality(Var(x), Con(ctype.constructor.name, tuple(Var(n) for n in names))))
        alternatives.append(exists_all(names, conjoin(parts)))
    return disjoin(alternatives)


def induction_case(ds: DataSystem, predicate: DataPredicate, ctype: ConstructorType, formula: Formula, var: str,
                   eigens: Sequence[str]) -> Tuple[Tuple[Formula, ...], Formula]:
    """Hypotheses E_iᵠ(z_i) and goal φ[c(z⃗)] of one closure premise."""
    hypotheses = tuple(
        argument_formula(argument, predicate, formula, var, name) for argument, name in zip(ctype.arguments, eigens)
    )
    goal = substitute_formula(formula, {var: Con(ctype.constructor.name, tuple(Var(n) for n in eigens))})
    return hypotheses, goal
