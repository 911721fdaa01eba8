import pytest

from cdsbench.errors import UnknownIdentifierError, WorkspaceParseError
from cdsbench.evaluation import Generator
from cdsbench.logic import Equality, assume, node
from cdsbench.logic.formulas import Atom
from cdsbench.syntax import (
    Scope,
    dump_derivation,
    load_derivation,
    parse_formula,
    parse_term,
    parse_workspace,
    print_coterm,
    print_env,
    print_workspace,
)
from cdsbench.terms import Con, Fn, Var


def _loaders(streams):
    scope = Scope(streams)
    return (lambda text: parse_term(text, scope)), (lambda text: parse_formula(text, scope))


def test_printed_library_parses_back(workspace):
    reparsed = parse_workspace(print_workspace(workspace))
    assert reparsed.systems == workspace.systems
    assert reparsed.programs == workspace.programs
    for name, env in workspace.envs.items():
        for binding, value in env.bindings:
            again = reparsed.env(name).lookup[binding]
            assert again.stream_prefix(12) == value.stream_prefix(12)


def test_cyclic_bindings_print_with_one_binder(alternating):
    assert print_coterm(alternating.lookup['a']) == 'rec r. 0 : 1 : r'
    assert alternating.lookup['a_late'].stream_prefix(8) == ['0', '1', '0', '0', '0', '1', '0', '1']


def test_mutually_recursive_bindings(flip_env):
    assert flip_env.lookup['v_a'].stream_prefix(4) == ['0', '1', '0', '1']
    assert flip_env.lookup['v_b'].stream_prefix(4) == ['1', '0', '1', '0']


def test_run_bindings(workspace):
    source = 'env g over STREAMS {\n    u = 0 : u;\n    w = run flip(u);\n}'
    env = parse_workspace(source, workspace).env('g')
    generator = env.lookup['w']
    assert isinstance(generator, Generator)
    assert generator.program.name == 'flip'
    assert generator.arguments == ('u',)
    assert 'w = run flip(u);' in print_env(env)


@pytest.mark.parametrize('source, message', [
    ('program p over STREAMS { principal }', 'syntax error near'),
    ('program p over NOPE { principal p; p = 0; }', 'unknown system NOPE'),
    ('env e over STREAMS { u = w; w = u; }', 'unguarded cycle in env e'),
    ('env e over STREAMS { u = 0 : u; u = 1 : u; }', 'duplicate binding u in env e'),
    ('env e over STREAMS { u = run nope(u); }', 'unknown program nope in env e'),
    ('program p over STREAMS { principal p; delta(x, y, z, w) = x; }', 'equation defines delta'),
    ('system T { inductive T; constructor c : T; constructor c : T -> T; }', 'different arities'),
])
def test_parse_errors(workspace, source, message):
    with pytest.raises(WorkspaceParseError, match=message):
        parse_workspace(source, workspace)


def test_duplicate_blocks_are_rejected(workspace):
    block = 'program p over STREAMS { principal p; p = 0 : p; }\n'
    with pytest.raises(WorkspaceParseError, match='duplicate program p'):
        parse_workspace(block + block, workspace)


def test_unknown_names_in_a_workspace(workspace):
    with pytest.raises(UnknownIdentifierError, match="unknown env 'nope'"):
        workspace.env('nope')


def test_terms_resolve_through_the_scope(streams):
    scope = Scope(streams, functions={'flip'}, identifiers={'v_a'})
    assert parse_term('flip(v_a)', scope) == Fn('flip', (Fn('v_a', ()),))
    assert parse_term('0 : x', scope) == Con('cons', (Con('0'), Var('x')))
    with pytest.raises(WorkspaceParseError, match='unknown constructor or function g'):
        parse_term('g(x)', scope)


def test_formulas_need_known_predicates(streams):
    assert parse_formula('S(x)', Scope(streams)) == Atom('S', Var('x'))
    with pytest.raises(WorkspaceParseError, match='expected a data-atom'):
        parse_formula('Q(x)', Scope(streams))


def test_derivations_as_s_expressions(streams):
    leaf = assume('a', Atom('B', Var('x')))
    assert dump_derivation(leaf) == '(assume "B(x)" (:name "a"))'
    proof = node(
        'and-elim', Atom('B', Var('x')),
        node('and-intro', parse_formula('B(x) & B(x)', Scope(streams)), leaf, leaf),
        index=0,
    )
    assert load_derivation(dump_derivation(proof), *_loaders(streams)) == proof


def test_proof_blocks(workspace):
    source = 'proof refl_x over STREAMS using flip { (refl "x = x" ()) }'
    entry = parse_workspace(source, workspace).proof('refl_x')
    assert entry.program == 'flip'
    assert entry.derivation == node('refl', Equality(Var('x'), Var('x')))


def test_malformed_proof_nodes(workspace):
    source = 'proof bad over STREAMS using flip { (refl "x = x") }'
    with pytest.raises(WorkspaceParseError, match='needs a rule, a conclusion and attributes'):
        parse_workspace(source, workspace)
