"""Parsing `.cds` text into a name-resolved Workspace."""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple, Union

from lark import Transformer, v_args
from lark.exceptions import UnexpectedInput, VisitError

from ..data_system import DataSystem, build_system
from ..errors import UnknownIdentifierError, WorkspaceParseError
from ..evaluation import DiagramEnv, Generator
from ..log_config import setup_logging
from ..logic.derivation import Derivation
from ..logic.formulas import Atom, Conjunction, Disjunction, Equality, Exists, Forall, Formula, Implication
from ..program import Equation, Program
from ..terms import CONS, Con, CotermNode, Fn, RegularCoterm, Term, Var, minimal_coterm
from .grammar import parser
from .sexpr import load_derivation

logger = setup_logging()


@dataclass(frozen=True)
class RawTerm:
    name: str
    args: Optional[Tuple['RawTerm', ...]] = None
    line: Optional[int] = None


@dataclass(frozen=True)
class RawRec:
    var: str
    body: Union['RawRec', RawTerm]


@dataclass(frozen=True)
class ProofEntry:
    name: str
    system: str
    program: str
    derivation: Derivation


@dataclass
class Workspace:
    """Systems, programs, environments and proofs, keyed by name in declaration order."""

    systems: Dict[str, DataSystem] = field(default_factory=dict)
    programs: Dict[str, Program] = field(default_factory=dict)
    envs: Dict[str, DiagramEnv] = field(default_factory=dict)
    proofs: Dict[str, ProofEntry] = field(default_factory=dict)

    def _get(self, table: Mapping, name: str, kind: str):
        if name not in table:
            raise UnknownIdentifierError(name, kind)
        return table[name]

    def system(self, name: str) -> DataSystem:
        return self._get(self.systems, name, 'system')

    def program(self, name: str) -> Program:
        return self._get(self.programs, name, 'program')

    def env(self, name: str) -> DiagramEnv:
        return self._get(self.envs, name, 'env')

    def proof(self, name: str) -> ProofEntry:
        return self._get(self.proofs, name, 'proof')

    def copy(self) -> 'Workspace':
        return Workspace(dict(self.systems), dict(self.programs), dict(self.envs), dict(self.proofs))

    def merge(self, other: 'Workspace') -> 'Workspace':
        merged = self.copy()
        for kind in ('systems', 'programs', 'envs', 'proofs'):
            table = getattr(merged, kind)
            for name, value in getattr(other, kind).items():
                if name in table and table[name] != value:
                    raise WorkspaceParseError(f'duplicate {kind[:-1]} {name}')
                table[name] = value
        return merged


class _ToRaw(Transformer):
    """Parse tree to plain tuples and raw terms; names are resolved afterwards."""

    def __init__(self, text: str):
        super().__init__()
        self.text = text

    def start(self, blocks):
        return list(blocks)

    def name_list(self, names):
        return [str(n) for n in names]

    @v_args(meta=True)
    def system(self, meta, children):
        name, *items = children
        return ('system', str(name), items, meta.line)

    def predicates(self, children):
        kind, names = children
        return ('predicates', str(kind), names)

    def signature(self, names):
        return [str(n) for n in names]

    def constructor(self, children):
        name, signature = children
        return ('constructor', str(name), signature[:-1], signature[-1])

    def destructors(self, children):
        return ('destructors', children[0])

    def vocabulary(self, children):
        return ('vocabulary', children[0])

    @v_args(meta=True)
    def program(self, meta, children):
        name, system, *items = children
        return ('program', str(name), str(system), items, meta.line)

    def principal(self, children):
        return ('principal', str(children[0]))

    @v_args(meta=True)
    def equation(self, meta, children):
        lhs, rhs = children
        return ('equation', lhs, rhs, meta.line)

    @v_args(meta=True)
    def env(self, meta, children):
        name, system, *bindings = children
        return ('env', str(name), str(system), bindings, meta.line)

    def coterm_binding(self, children):
        name, value = children
        return ('coterm', str(name), value)

    def run_binding(self, children):
        name, program, arguments = children
        return ('run', str(name), str(program), arguments or [])

    @v_args(meta=True)
    def sexp(self, meta, children):
        return (meta.start_pos, meta.end_pos)

    @v_args(meta=True)
    def proof(self, meta, children):
        name, system, program, (start, end) = children
        return ('proof', str(name), str(system), str(program), self.text[start:end], meta.line)

    @v_args(meta=True)
    def cons(self, meta, children):
        head, tail = children
        return RawTerm(CONS, (head, tail), meta.line)

    @v_args(meta=True)
    def call(self, meta, children):
        name, *args = children
        return RawTerm(str(name), tuple(args), meta.line)

    @v_args(meta=True)
    def bare(self, meta, children):
        return RawTerm(str(children[0]), None, meta.line)

    def rec(self, children):
        var, body = children
        return RawRec(str(var), body)

    def quantified(self, children):
        quantifier, var, body = children
        return ('quantified', str(quantifier), str(var), body)

    def imp(self, children):
        return ('imp',) + tuple(children)

    def disj(self, children):
        return ('disj',) + tuple(children)

    def conj(self, children):
        return ('conj',) + tuple(children)

    def equality(self, children):
        return ('equality',) + tuple(children)

    def atom(self, children):
        return ('atom', children[0])


def _parse(text: str, start: str):
    try:
        tree = parser.parse(text, start=start)
        return _ToRaw(text).transform(tree)
    except UnexpectedInput as error:
        line = getattr(error, 'line', None)
        column = getattr(error, 'column', None)
        if line is not None and line < 0:
            line = column = None
        raise WorkspaceParseError(f'syntax error near {_excerpt(error, text)}', line, column)
    except VisitError as error:
        raise WorkspaceParseError(f'cannot build syntax tree: {error.orig_exc}')


def _excerpt(error: UnexpectedInput, text: str) -> str:
    try:
        return repr(error.get_context(text, span=20).splitlines()[0].strip())
    except Exception:
        return 'end of input'


class Scope:
    """How bare and applied names resolve inside one block."""

    def __init__(self, ds: DataSystem, functions: Iterable[str] = (), identifiers: Iterable[str] = (),
                 strict: bool = False):
        self.ds = ds
        self.functions: Set[str] = set(functions) | set(ds.standard_names)
        self.identifiers: Set[str] = set(identifiers)
        self.strict = strict

    def term(self, raw: RawTerm) -> Term:
        args = tuple(self.term(a) for a in raw.args) if raw.args is not None else ()
        if self.ds.has_constructor(raw.name):
            expected = self.ds.constructor(raw.name).arity
            if expected != len(args):
                raise WorkspaceParseError(
                    f'constructor {raw.name} expects {expected} arguments, got {len(args)}', raw.line
                )
            return Con(raw.name, args)
        if raw.name in self.functions or raw.name in self.identifiers:
            return Fn(raw.name, args)
        if raw.args is None:
            return Var(raw.name)
        if raw.name == CONS:
            raise WorkspaceParseError(f'system {self.ds.name} has no {CONS} constructor for ":"', raw.line)
        raise WorkspaceParseError(f'unknown constructor or function {raw.name}', raw.line)

    def formula(self, raw) -> Formula:
        tag = raw[0]
        if tag == 'quantified':
            _, quantifier, var, body = raw
            kind = Exists if quantifier == 'exists' else Forall
            return kind(var, self.formula(body))
        if tag == 'imp':
            return Implication(self.formula(raw[1]), self.formula(raw[2]))
        if tag == 'disj':
            return Disjunction(self.formula(raw[1]), self.formula(raw[2]))
        if tag == 'conj':
            return Conjunction(self.formula(raw[1]), self.formula(raw[2]))
        if tag == 'equality':
            return Equality(self.term(raw[1]), self.term(raw[2]))
        atom: RawTerm = raw[1]
        if atom.args is None or len(atom.args) != 1 or not self.ds.has_predicate(atom.name):
            raise WorkspaceParseError(f'expected a data-atom P(t) with a predicate of {self.ds.name}', atom.line)
        return Atom(atom.name, self.term(atom.args[0]))


def parse_term(text: str, scope: Scope) -> Term:
    return scope.term(_parse(text, 'term'))


def parse_formula(text: str, scope: Scope) -> Formula:
    return scope.formula(_parse(text, 'formula'))


def _build_system(name: str, items: List[tuple], line: int) -> DataSystem:
    predicates: List[Tuple[str, str]] = []
    types: List[Tuple[str, List[str], str]] = []
    destructors: List[str] = []
    vocabulary: Optional[List[str]] = None
    for item in items:
        if item[0] == 'predicates':
            predicates.extend((p, item[1]) for p in item[2])
        elif item[0] == 'constructor':
            types.append((item[1], item[2], item[3]))
        elif item[0] == 'destructors':
            destructors.extend(item[1])
        else:
            vocabulary = item[1]

    arities: Dict[str, int] = {}
    for constructor, arguments, _ in types:
        if arities.setdefault(constructor, len(arguments)) != len(arguments):
            raise WorkspaceParseError(f'constructor {constructor} is declared with different arities', line)
    order = vocabulary if vocabulary is not None else list(arities)
    missing = [c for c in order if c not in arities]
    if missing or set(order) != set(arities):
        raise WorkspaceParseError(f'vocabulary of {name} does not match its constructor declarations', line)
    try:
        return build_system(name, [(c, arities[c]) for c in order], predicates, types, destructors)
    except UnknownIdentifierError as error:
        raise WorkspaceParseError(f'{error} in system {name}', line)


def _equation_head(raw: RawTerm, ds: DataSystem) -> Tuple[str, Optional[str], RawTerm]:
    """(function, observer, call) of an equation's left-hand side."""
    if ds.destructor_index(raw.name) is not None and raw.args is not None and len(raw.args) == 1:
        inner = raw.args[0]
        if not ds.has_constructor(inner.name):
            return inner.name, raw.name, inner
    return raw.name, None, raw


def _build_program(name: str, system: DataSystem, items: List[tuple], line: int) -> Program:
    principal = None
    heads = []
    for item in items:
        if item[0] == 'principal':
            principal = item[1]
        else:
            _, lhs, rhs, eq_line = item
            function, observer, call = _equation_head(lhs, system)
            if system.has_constructor(function) or (system.is_standard(function) and observer is None):
                raise WorkspaceParseError(f'equation defines {function}, which is not a program function', eq_line)
            heads.append((function, observer, call, rhs))
    scope = Scope(system, functions={h[0] for h in heads})
    equations = []
    for function, observer, call, rhs in heads:
        patterns = tuple(scope.term(arg) for arg in (call.args or ()))
        equations.append(Equation(function, patterns, scope.term(rhs), observer))
    return Program.build(name, equations, system, principal)


def _build_env(name: str, system: DataSystem, bindings: List[tuple], programs: Mapping[str, Program],
               line: int) -> DiagramEnv:
    names = [b[1] for b in bindings]
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise WorkspaceParseError(f'duplicate binding {duplicates[0]} in env {name}', line)
    coterm_names = {b[1] for b in bindings if b[0] == 'coterm'}

    nodes: List[Optional[Tuple[str, List[object]]]] = []
    aliases: Dict[object, object] = {}

    def compile_coterm(raw, scope: Dict[str, object]) -> object:
        if isinstance(raw, RawRec):
            key = ('rec', len(aliases))
            aliases[key] = None
            target = compile_coterm(raw.body, {**scope, raw.var: key})
            aliases[key] = target
            return key
        if raw.args is None and raw.name in scope:
            return scope[raw.name]
        if raw.args is None and raw.name in coterm_names:
            return ('binding', raw.name)
        if not system.has_constructor(raw.name):
            raise WorkspaceParseError(f'unknown name {raw.name} in env {name}', raw.line)
        arity = system.constructor(raw.name).arity
        args = raw.args or ()
        if arity != len(args):
            raise WorkspaceParseError(f'constructor {raw.name} expects {arity} arguments, got {len(args)}', raw.line)
        slot = len(nodes)
        nodes.append(None)
        nodes[slot] = (raw.name, [compile_coterm(a, scope) for a in args])
        return slot

    roots: Dict[str, object] = {}
    for binding in bindings:
        if binding[0] == 'coterm':
            roots[binding[1]] = compile_coterm(binding[2], {})
            aliases[('binding', binding[1])] = roots[binding[1]]

    def resolve(ref: object) -> int:
        seen = set()
        while not isinstance(ref, int):
            if ref in seen or aliases.get(ref) is None:
                raise WorkspaceParseError(f'unguarded cycle in env {name}', line)
            seen.add(ref)
            ref = aliases[ref]
        return ref

    graph = tuple(CotermNode(c, tuple(resolve(child) for child in children)) for c, children in nodes)
    values: Dict[str, Union[RegularCoterm, Generator]] = {}
    for binding in bindings:
        if binding[0] == 'coterm':
            values[binding[1]] = minimal_coterm(RegularCoterm(graph, resolve(roots[binding[1]])))
        else:
            _, binding_name, program_name, arguments = binding
            if program_name not in programs:
                raise WorkspaceParseError(f'unknown program {program_name} in env {name}', line)
            for argument in arguments:
                if argument not in names:
                    raise WorkspaceParseError(f'unknown binding {argument} in env {name}', line)
            values[binding_name] = Generator(programs[program_name], tuple(arguments))
    return DiagramEnv.of(name, values, system.name)


def proof_scope(system: DataSystem, program: Program) -> Scope:
    return Scope(system, functions=program.functions)


def parse_workspace(text: str, base: Optional[Workspace] = None) -> Workspace:
    """Parse and name-resolve every block; `base` supplies names declared elsewhere."""
    blocks = _parse(text, 'start')
    workspace = base.copy() if base is not None else Workspace()
    declared: Set[Tuple[str, str]] = set()

    def claim(kind: str, name: str, line: Optional[int]):
        if (kind, name) in declared:
            raise WorkspaceParseError(f'duplicate {kind} {name}', line)
        declared.add((kind, name))

    def lookup_system(name: str, line: Optional[int]) -> DataSystem:
        if name not in workspace.systems:
            raise WorkspaceParseError(f'unknown system {name}', line)
        return workspace.systems[name]

    for block in (b for b in blocks if b[0] == 'system'):
        _, name, items, line = block
        claim('system', name, line)
        workspace.systems[name] = _build_system(name, items, line)
    for block in (b for b in blocks if b[0] == 'program'):
        _, name, system, items, line = block
        claim('program', name, line)
        workspace.programs[name] = _build_program(name, lookup_system(system, line), items, line)
    for block in (b for b in blocks if b[0] == 'env'):
        _, name, system, bindings, line = block
        claim('env', name, line)
        workspace.envs[name] = _build_env(name, lookup_system(system, line), bindings, workspace.programs, line)
    for block in (b for b in blocks if b[0] == 'proof'):
        _, name, system_name, program_name, body, line = block
        claim('proof', name, line)
        system = lookup_system(system_name, line)
        if program_name not in workspace.programs:
            raise WorkspaceParseError(f'unknown program {program_name}', line)
        scope = proof_scope(system, workspace.programs[program_name])
        derivation = load_derivation(
            body, lambda t: parse_term(t, scope), lambda f: parse_formula(f, scope)
        )
        workspace.proofs[name] = ProofEntry(name, system_name, program_name, derivation)

    logger.debug(
        f'Parsed {len(declared)} blocks: {len(workspace.systems)} systems, {len(workspace.programs)} programs, '
        f'{len(workspace.envs)} envs, {len(workspace.proofs)} proofs'
    )
    return workspace


def parse_file(path: str, base: Optional[Workspace] = None) -> Workspace:
    with open(path, encoding='utf-8') as handle:
        return parse_workspace(handle.read(), base)


__all__ = ['ProofEntry', 'RawTerm', 'Scope', 'Workspace', 'parse_file', 'parse_formula',
           'parse_term', 'parse_workspace', 'proof_scope']
