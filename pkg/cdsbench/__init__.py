"""Equational programs over inductive and coinductive data systems.

Observational evaluation, productivity checking, a natural-deduction proof
kernel and realizability extraction between corecursive definitions and
coinduction proofs.
"""

__version__ = '0.4.0'
