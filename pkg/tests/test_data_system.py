import random

import pytest

from cdsbench.data_system import (
    COINDUCTIVE,
    INDUCTIVE,
    Membership,
    SyntacticClass,
    build_system,
    canonical_member,
    example_system,
    naturals_system,
    stream_system,
    syntactic_class,
    validate_system,
)
from cdsbench.errors import UnknownIdentifierError
from cdsbench.extract import random_regular_stream
from cdsbench.terms import Con, CotermNode, Fn, RegularCoterm, Var, minimal_coterm


@pytest.mark.parametrize('factory', [stream_system, naturals_system, example_system])
def test_stock_systems_validate(factory):
    report = validate_system(factory())
    assert report.ok, report.violations


def test_argument_after_result_is_a_violation():
    ds = build_system(
        'BAD',
        constructors=[('0', 0), ('c', 1)],
        predicates=[('B', INDUCTIVE), ('S', COINDUCTIVE)],
        types=[('0', [], 'B'), ('c', ['S'], 'B')],
    )
    report = validate_system(ds)
    assert not report.ok
    assert any('argument after result' in v for v in report.violations)


def test_type_for_undeclared_constructor_is_reported():
    ds = build_system(
        'BAD',
        constructors=[('0', 0)],
        predicates=[('N', INDUCTIVE)],
        types=[('0', [], 'N'), ('s', ['N'], 'N')],
    )
    assert any('unknown constructor s' in v for v in validate_system(ds).violations)


def test_unknown_predicate_in_type_raises():
    with pytest.raises(UnknownIdentifierError):
        build_system('BAD', [('0', 0)], [('N', INDUCTIVE)], [('0', [], 'M')])


def test_constructor_sets_and_destructor_names():
    ds = example_system()
    assert [str(t) for t in ds.types_for('S')] == ['c : N * S -> S']
    assert {t.constructor.name for t in ds.types_for('N')} == {'0', 's'}
    assert ds.max_arity == 2
    assert ds.destructor_name(1) == 'pi1'
    assert stream_system().destructor_name(2) == 'tl'
    assert stream_system().destructor_index('hd') == 1


def test_stream_constructor_is_the_single_non_constant():
    assert stream_system().stream_constructor.name == 'cons'
    assert naturals_system().stream_constructor.name == 's'
    assert example_system().stream_constructor is None


def test_syntactic_classes():
    ds = stream_system()
    data = Con('cons', (Con('0'), Con('cons', (Con('1'), Con('0')))))
    assert syntactic_class(data, ds) is SyntacticClass.DATA
    assert syntactic_class(Con('cons', (Con('0'), Var('x'))), ds) is SyntacticClass.BASE
    assert syntactic_class(Fn('hd', (Var('x'),)), ds) is SyntacticClass.PROGRAM


def test_syntactic_class_rejects_unknown_functions():
    with pytest.raises(UnknownIdentifierError):
        syntactic_class(Fn('g', (Var('x'),)), stream_system(), functions=['flip'])


def test_finite_naturals_are_members():
    value = RegularCoterm.from_term(Con('s', (Con('s', (Con('0'),)),)))
    assert canonical_member(naturals_system(), 'N', value, 4) is Membership.YES


def test_cyclic_value_is_not_an_inductive_member():
    tower = RegularCoterm((CotermNode('s', (0,)),), 0)
    assert canonical_member(naturals_system(), 'N', tower, 50) is Membership.NO


def test_streams_are_members_up_to_depth():
    ds = stream_system()
    value = RegularCoterm.stream(['1'], ['0', '1'])
    assert canonical_member(ds, 'S', value, 10) is Membership.UP_TO_DEPTH
    assert canonical_member(ds, 'B', value, 10) is Membership.NO


def test_head_must_be_boolean_inside_a_stream():
    ds = stream_system()
    # cons(cons(0, …), …) puts a stream where a boolean belongs
    nodes = (CotermNode('cons', (1, 0)), CotermNode('cons', (2, 1)), CotermNode('0'))
    assert canonical_member(ds, 'S', RegularCoterm(nodes, 0), 6) is Membership.NO


def test_example_system_mixes_inductive_and_coinductive_arguments():
    ds = example_system()
    # c(0, c(0, …)) is a stream of naturals; c(stream, []) a one-element list of streams
    stream = RegularCoterm((CotermNode('c', (1, 0)), CotermNode('0')), 0)
    assert canonical_member(ds, 'S', stream, 8) is Membership.UP_TO_DEPTH
    listed = RegularCoterm((CotermNode('c', (1, 3)), CotermNode('c', (2, 1)), CotermNode('0'),
                            CotermNode('[]')), 0)
    assert canonical_member(ds, 'L', listed, 8) is Membership.UP_TO_DEPTH


def _trees():
    return build_system(
        'TREES',
        constructors=[('leaf', 0), ('node', 2), ('fork', 2)],
        predicates=[('T', INDUCTIVE), ('C', COINDUCTIVE)],
        types=[('leaf', [], 'T'), ('node', ['T', 'T'], 'T'), ('fork', ['C', 'C'], 'C')],
    )


def _shared_dag(levels, bottom):
    # level k points twice at level k + 1: 2**levels paths over levels + 1 nodes
    nodes = tuple(CotermNode('node', (k + 1, k + 1)) for k in range(levels))
    return RegularCoterm(nodes + (bottom,), 0)


def test_shared_subtrees_are_checked_once():
    value = _shared_dag(40, CotermNode('leaf'))
    assert canonical_member(_trees(), 'T', value, 8) is Membership.YES


def test_shared_subtrees_closing_a_cycle_are_not_inductive():
    value = _shared_dag(40, CotermNode('node', (0, 0)))
    assert canonical_member(_trees(), 'T', value, 8) is Membership.NO


def test_self_looping_fork_is_checked_to_a_large_depth():
    value = RegularCoterm((CotermNode('fork', (0, 0)),), 0)
    assert canonical_member(_trees(), 'C', value, 200) is Membership.UP_TO_DEPTH


def test_random_streams_keep_their_verdict_after_minimising():
    ds = stream_system()
    rng = random.Random(13)
    for _ in range(100):
        value = random_regular_stream(rng, ds)
        depth = rng.randint(1, 32)
        assert canonical_member(ds, 'S', value, depth) is Membership.UP_TO_DEPTH
        assert canonical_member(ds, 'B', value, depth) is Membership.NO
        assert canonical_member(ds, 'S', minimal_coterm(value), depth) is Membership.UP_TO_DEPTH


@pytest.mark.parametrize('height', [0, 1, 7, 64, 200])
def test_every_numeral_is_a_natural(height):
    term = Con('0')
    for _ in range(height):
        term = Con('s', (term,))
    assert canonical_member(naturals_system(), 'N', RegularCoterm.from_term(term), 1) is Membership.YES
