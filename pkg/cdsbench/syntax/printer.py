"""Workspace to `.cds` text; parsing the output gives back an equal workspace."""

from typing import Dict, List, Set

from ..data_system import DataSystem
from ..evaluation import DiagramEnv, Generator
from ..program import Program
from ..terms import CONS, FreshNames, RegularCoterm
from .parser import ProofEntry, Workspace
from .sexpr import dump_derivation

INDENT = '    '


def _first_appearance(ds: DataSystem) -> List[str]:
    order: Dict[str, None] = {}
    for ctype in ds.types:
        order.setdefault(ctype.constructor.name, None)
    return list(order)


def print_system(ds: DataSystem) -> str:
    lines = [f'system {ds.name} {{']
    for predicate in ds.predicates:
        lines.append(f'{INDENT}{predicate.kind} {predicate.name};')
    for ctype in ds.types:
        lines.append(f'{INDENT}constructor {ctype};')
    if ds.destructor_names:
        lines.append(f"{INDENT}destructors {', '.join(ds.destructor_names)};")
    vocabulary = [c.name for c in ds.vocabulary]
    if vocabulary != _first_appearance(ds):
        lines.append(f"{INDENT}vocabulary {', '.join(vocabulary)};")
    lines.append('}')
    return '\n'.join(lines)


def print_program(program: Program) -> str:
    lines = [f'program {program.name} over {program.system.name} {{', f'{INDENT}principal {program.principal};']
    lines.extend(f'{INDENT}{equation};' for equation in program.defined_equations)
    lines.append('}')
    return '\n'.join(lines)


def print_coterm(coterm: RegularCoterm, avoid: Set[str] = frozenset()) -> str:
    """A self-contained `rec` expression; binders appear only where a cycle closes."""
    names = FreshNames(set(avoid) | {node.constructor for node in coterm.nodes})
    binder: Dict[int, str] = {}
    closed: Set[int] = set()

    def show(index: int, active: Dict[int, str]) -> str:
        if index in active:
            closed.add(index)
            return active[index]
        if index not in binder:
            binder[index] = names.fresh('r')
        node = coterm.node(index)
        inner = {**active, index: binder[index]}
        children = [show(child, inner) for child in node.children]
        if node.constructor == CONS and len(children) == 2:
            head, tail = children
            if head.startswith('rec ') or _is_cons(coterm, node.children[0]):
                head = f'({head})'
            body = f'{head} : {tail}'
        elif children:
            body = f"{node.constructor}({', '.join(children)})"
        else:
            body = node.constructor
        if index in closed:
            closed.discard(index)
            return f'rec {binder[index]}. {body}'
        return body

    return show(coterm.entry, {})


def _is_cons(coterm: RegularCoterm, index: int) -> bool:
    node = coterm.node(index)
    return node.constructor == CONS and len(node.children) == 2


def _print_binding(name: str, binding, avoid: Set[str]) -> str:
    if isinstance(binding, Generator):
        return f"{name} = run {binding.program.name}({', '.join(binding.arguments)});"
    return f'{name} = {print_coterm(binding, avoid)};'


def print_env(env: DiagramEnv) -> str:
    avoid = set(env.names)
    lines = [f'env {env.name} over {env.system} {{']
    lines.extend(INDENT + _print_binding(name, binding, avoid) for name, binding in env.bindings)
    lines.append('}')
    return '\n'.join(lines)


def print_proof(entry: ProofEntry) -> str:
    body = dump_derivation(entry.derivation, len(INDENT))
    return f'proof {entry.name} over {entry.system} using {entry.program} {{\n{INDENT}{body}\n}}'


def print_workspace(workspace: Workspace) -> str:
    blocks = [print_system(ds) for ds in workspace.systems.values()]
    blocks += [print_program(program) for program in workspace.programs.values()]
    blocks += [print_env(env) for env in workspace.envs.values()]
    blocks += [print_proof(entry) for entry in workspace.proofs.values()]
    return '\n\n'.join(blocks) + '\n'
