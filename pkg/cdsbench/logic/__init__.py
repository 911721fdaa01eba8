from .checker import ProofChecker, ProofJudgment, RuleViolation, check_proof
from .derivation import Derivation, assume, node, open_assumptions
from .formulas import (
    Atom,
    Conjunction,
    Disjunction,
    Equality,
    Exists,
    Forall,
    Formula,
    Implication,
    PolarityClass,
    alpha_equal,
    classify_formula,
    render_formula,
    substitute_formula,
)
from .normalize import SpScan, assert_sp_proof, find_detour, normalize
from .theory import build_dcm

__all__ = [
    'Atom', 'Conjunction', 'Derivation', 'Disjunction', 'Equality', 'Exists', 'Forall', 'Formula',
    'Implication', 'PolarityClass', 'ProofChecker', 'ProofJudgment', 'RuleViolation', 'SpScan',
    'alpha_equal', 'assert_sp_proof', 'assume', 'build_dcm', 'check_proof', 'classify_formula',
    'find_detour', 'node', 'normalize', 'open_assumptions', 'render_formula', 'substitute_formula',
]
