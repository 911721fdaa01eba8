from .parser import ProofEntry, Scope, Workspace, parse_file, parse_formula, parse_term, parse_workspace, proof_scope
from .printer import print_coterm, print_env, print_program, print_proof, print_system, print_workspace
from .sexpr import dump_derivation, load_derivation

__all__ = [
    'ProofEntry', 'Scope', 'Workspace', 'dump_derivation', 'load_derivation', 'parse_file', 'parse_formula',
    'parse_term', 'parse_workspace', 'print_coterm', 'print_env', 'print_program', 'print_proof',
    'print_system', 'print_workspace', 'proof_scope',
]
