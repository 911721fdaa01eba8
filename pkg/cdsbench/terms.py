"""Terms over constructors, variables and program-functions, and regular coterms."""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

# Stream cons is written infix as `h : t` in the surface syntax
CONS = 'cons'


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True)
class Con:
    """Constructor application; nullary constructors have empty args."""

    name: str
    args: Tuple['Term', ...] = ()

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True)
class Fn:
    """Program-function application. Diagram identifiers are nullary Fn terms."""

    name: str
    args: Tuple['Term', ...] = ()

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Var, Con, Fn]


def cons(head: Term, tail: Term) -> Con:
    return Con(CONS, (head, tail))


def variables(term: Term) -> Set[str]:
    found: Set[str] = set()
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            found.add(node.name)
        else:
            stack.extend(node.args)
    return found


def variable_occurrences(term: Term) -> List[str]:
    """Variables in left-to-right order, with repetitions."""
    if isinstance(term, Var):
        return [term.name]
    out: List[str] = []
    for arg in term.args:
        out.extend(variable_occurrences(arg))
    return out


def function_names(term: Term) -> Set[str]:
    found: Set[str] = set()
    stack = [term]
    while stack:
        node = stack.pop()
        if isinstance(node, Fn):
            found.add(node.name)
        if not isinstance(node, Var):
            stack.extend(node.args)
    return found


def substitute(term: Term, mapping: Mapping[str, Term]) -> Term:
    if not mapping:
        return term
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    new_args = tuple(substitute(arg, mapping) for arg in term.args)
    if all(new is old for new, old in zip(new_args, term.args)):
        return term
    return type(term)(term.name, new_args)


def subterm_at(term: Term, path: Sequence[int]) -> Term:
    for index in path:
        if isinstance(term, Var) or index >= len(term.args):
            raise IndexError(f'no subterm at position {tuple(path)}')
        term = term.args[index]
    return term


def replace_at(term: Term, path: Sequence[int], new: Term) -> Term:
    if not path:
        return new
    if isinstance(term, Var) or path[0] >= len(term.args):
        raise IndexError(f'no subterm at position {tuple(path)}')
    args = list(term.args)
    args[path[0]] = replace_at(args[path[0]], path[1:], new)
    return type(term)(term.name, tuple(args))


def term_size(term: Term) -> int:
    if isinstance(term, Var):
        return 1
    return 1 + sum(term_size(arg) for arg in term.args)


def render_term(term: Term) -> str:
    if isinstance(term, Var):
        return term.name
    if isinstance(term, Con) and term.name == CONS and len(term.args) == 2:
        head, tail = term.args
        # A cons in head position has no infix reading without parentheses
        if isinstance(head, Con) and head.name == CONS and len(head.args) == 2:
            return f'{CONS}({render_term(head)}, {render_term(tail)})'
        return f'{render_term(head)}:{render_term(tail)}'
    if not term.args:
        # diagram identifiers and 0-ary functions print bare
        return term.name
    return f"{term.name}({', '.join(render_term(arg) for arg in term.args)})"


class FreshNames:
    """Generator of variable names avoiding a growing set of used names."""

    def __init__(self, used: Iterable[str] = ()):
        self.used: Set[str] = set(used)

    def fresh(self, base: str) -> str:
        stem = base.rstrip("'0123456789") or 'v'
        if base not in self.used:
            self.used.add(base)
            return base
        counter = 1
        while f'{stem}{counter}' in self.used:
            counter += 1
        name = f'{stem}{counter}'
        self.used.add(name)
        return name


@dataclass(frozen=True)
class CotermNode:
    constructor: str
    children: Tuple[int, ...] = ()


@dataclass(frozen=True)
class RegularCoterm:
    """A possibly-infinite constructor tree with finitely many distinct subtrees.

    Nodes refer to children by index; back-edges make cycles.
    """

    nodes: Tuple[CotermNode, ...]
    entry: int = 0

    def node(self, index: int) -> CotermNode:
        return self.nodes[index]

    def reachable(self, start: Optional[int] = None) -> List[int]:
        start = self.entry if start is None else start
        seen: Dict[int, None] = {}
        stack = [start]
        while stack:
            index = stack.pop()
            if index in seen:
                continue
            seen[index] = None
            stack.extend(reversed(self.nodes[index].children))
        return list(seen)

    def is_cyclic(self, start: Optional[int] = None) -> bool:
        start = self.entry if start is None else start
        on_path: Set[int] = set()
        done: Set[int] = set()

        def visit(index: int) -> bool:
            if index in on_path:
                return True
            if index in done:
                return False
            on_path.add(index)
            if any(visit(child) for child in self.nodes[index].children):
                return True
            on_path.discard(index)
            done.add(index)
            return False

        return visit(start)

    def at(self, index: int) -> 'RegularCoterm':
        """The same graph entered at another node."""
        return RegularCoterm(self.nodes, index)

    def to_term(self) -> Term:
        """The finite term this coterm denotes; only valid when acyclic."""
        if self.is_cyclic():
            raise ValueError('cyclic coterm has no finite term')
        return self.unfold(len(self.nodes) + 1)

    def unfold(self, depth: int, start: Optional[int] = None) -> Term:
        """Finite approximation; subtrees below `depth` become the variable `…`."""
        index = self.entry if start is None else start
        if depth <= 0 and self.nodes[index].children:
            return Var('…')
        node = self.nodes[index]
        return Con(node.constructor, tuple(self.unfold(depth - 1, child) for child in node.children))

    def stream_prefix(self, length: int) -> List[str]:
        """Heads of the first `length` cons cells, for boolean streams."""
        out: List[str] = []
        index = self.entry
        for _ in range(length):
            node = self.nodes[index]
            if node.constructor != CONS or len(node.children) != 2:
                break
            out.append(self.nodes[node.children[0]].constructor)
            index = node.children[1]
        return out

    @classmethod
    def from_term(cls, term: Term) -> 'RegularCoterm':
        nodes: List[CotermNode] = []

        def build(node: Term) -> int:
            if not isinstance(node, Con):
                raise ValueError(f'coterms contain constructors only, got {render_term(node)}')
            slot = len(nodes)
            nodes.append(CotermNode(node.name))
            children = tuple(build(arg) for arg in node.args)
            nodes[slot] = CotermNode(node.name, children)
            return slot

        build(term)
        return cls(tuple(nodes), 0)

    @classmethod
    def stream(cls, prefix: Sequence[str], cycle: Sequence[str]) -> 'RegularCoterm':
        """The stream prefix·cycle^ω over nullary constructors (cycle non-empty)."""
        if not cycle:
            raise ValueError('a regular stream needs a non-empty cycle')
        cells = list(prefix) + list(cycle)
        leaves = sorted(set(cells))
        leaf_index = {name: position for position, name in enumerate(leaves)}
        nodes: List[CotermNode] = [CotermNode(name) for name in leaves]
        base = len(nodes)
        for position, name in enumerate(cells):
            successor = base + position + 1
            if position == len(cells) - 1:
                successor = base + len(prefix)
            nodes.append(CotermNode(CONS, (leaf_index[name], successor)))
        return cls(tuple(nodes), base)


def _number(labels: Mapping[int, object]) -> Dict[int, int]:
    ranks = {label: rank for rank, label in enumerate(sorted(set(labels.values())))}
    return {index: ranks[label] for index, label in labels.items()}


def minimal_coterm(coterm: RegularCoterm) -> RegularCoterm:
    """The smallest graph for the same infinite tree, numbered in pre-order from its entry.

    Two regular coterms denote the same tree exactly when their minimal forms are equal.
    """
    nodes = coterm.nodes
    reach = coterm.reachable()
    classes = _number({i: (nodes[i].constructor, len(nodes[i].children)) for i in reach})
    while True:
        refined = _number({i: (classes[i], tuple(classes[c] for c in nodes[i].children)) for i in reach})
        if len(set(refined.values())) == len(set(classes.values())):
            break
        classes = refined

    representative: Dict[int, int] = {}
    for index in reach:
        representative.setdefault(classes[index], index)
    numbering: Dict[int, int] = {}
    order: List[int] = []

    def visit(cls: int):
        numbering[cls] = len(order)
        order.append(cls)
        for child in nodes[representative[cls]].children:
            if classes[child] not in numbering:
                visit(classes[child])

    visit(classes[coterm.entry])
    minimal = tuple(
        CotermNode(
            nodes[representative[cls]].constructor,
            tuple(numbering[classes[c]] for c in nodes[representative[cls]].children),
        )
        for cls in order
    )
    return RegularCoterm(minimal, 0)
