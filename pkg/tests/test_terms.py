from cdsbench.terms import (
    Con,
    CotermNode,
    Fn,
    FreshNames,
    RegularCoterm,
    Var,
    cons,
    minimal_coterm,
    render_term,
    replace_at,
    subterm_at,
    substitute,
    variable_occurrences,
)


def test_render_uses_infix_cons():
    term = cons(Con('1'), Fn('flip', (Fn('tl', (Var('x'),)),)))
    assert render_term(term) == '1:flip(tl(x))'
    assert render_term(Fn('zeros', ())) == 'zeros'


def test_nested_cons_in_head_position_is_prefix():
    inner = cons(Con('0'), Var('y'))
    assert render_term(cons(inner, Var('z'))) == 'cons(0:y, z)'


def test_substitute_and_positions():
    term = Fn('merge', (Var('x'), Fn('tl', (Var('x'),))))
    replaced = substitute(term, {'x': Var('y')})
    assert replaced == Fn('merge', (Var('y'), Fn('tl', (Var('y'),))))
    assert subterm_at(term, (1, 0)) == Var('x')
    assert replace_at(term, (1,), Var('z')) == Fn('merge', (Var('x'), Var('z')))
    assert variable_occurrences(term) == ['x', 'x']


def test_fresh_names_avoid_used_ones():
    names = FreshNames({'x', 'x1'})
    assert names.fresh('y') == 'y'
    assert names.fresh('x') == 'x2'
    assert names.fresh('x') == 'x3'


def test_stream_coterm_prefix():
    value = RegularCoterm.stream(['1', '1'], ['0', '1'])
    assert value.stream_prefix(7) == ['1', '1', '0', '1', '0', '1', '0']
    assert value.is_cyclic()


def test_finite_coterm_round_trips_through_terms():
    term = Con('s', (Con('s', (Con('0'),)),))
    value = RegularCoterm.from_term(term)
    assert not value.is_cyclic()
    assert value.to_term() == term


def test_minimal_form_identifies_equal_infinite_trees():
    unrolled = RegularCoterm.stream(['0', '1'], ['0', '1'])
    rolled = RegularCoterm.stream([], ['0', '1'])
    assert minimal_coterm(unrolled) == minimal_coterm(rolled)
    assert len(minimal_coterm(unrolled).nodes) == 4


def test_minimal_form_separates_different_trees():
    first = RegularCoterm.stream(['0'], ['1'])
    second = RegularCoterm.stream([], ['1'])
    assert minimal_coterm(first) != minimal_coterm(second)


def test_unfold_cuts_below_depth():
    tower = RegularCoterm((CotermNode('s', (0,)),), 0)
    assert render_term(tower.unfold(2)) == 's(s(…))'
