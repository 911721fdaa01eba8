import random

import pytest

from cdsbench.errors import WorkspaceParseError
from cdsbench.program import (
    Equation,
    Program,
    check_compatibility,
    deep_destructor,
    match,
    render_substitution,
    standard_functions,
    unify,
    validate_program,
)
from cdsbench.syntax import parse_workspace
from cdsbench.terms import Con, Fn, Var, substitute, variables


def _program(workspace, body: str, name: str = 'p'):
    source = f'program {name} over STREAMS {{\n{body}\n}}'
    return parse_workspace(source, workspace).program(name)


def test_unify_and_match():
    x, y = Var('x'), Var('y')
    assert unify(Fn('f', (x, Con('0'))), Fn('f', (Con('1'), y))) == {'x': Con('1'), 'y': Con('0')}
    assert unify(x, Fn('f', (x,))) is None
    assert unify(Con('0'), Con('1')) is None
    assert match(Fn('f', (x, x)), Fn('f', (Con('0'), Con('0')))) == {'x': Con('0')}
    assert match(Fn('f', (x, x)), Fn('f', (Con('0'), Con('1')))) is None


def test_overlapping_definiendums_are_incompatible():
    general = Equation('g', (Var('x'),), Con('0'))
    special = Equation('g', (Con('1'),), Con('1'))
    verdict = check_compatibility(general, special)
    assert not verdict.compatible
    assert render_substitution(verdict.witness) == '{x ↦ 1}'


def test_disjoint_patterns_are_compatible(workspace):
    program = workspace.program('pattern_flip')
    first, second = program.defined_equations
    assert check_compatibility(first, second).compatible


def test_standard_functions_cover_every_constructor(streams):
    equations = standard_functions(streams)
    # two destructors and the discriminator, one equation per constructor each
    assert len(equations) == 9
    assert Equation('hd', (Con('0'),), Con('0')) in equations
    assert Equation('tl', (Con('cons', (Var('x1'), Var('x2'))),), Var('x2')) in equations


@pytest.mark.parametrize('name', ['flip', 'merge', 'alternate', 'pattern_flip', 'b', 'morse_thue', 'splits'])
def test_library_programs_validate(workspace, name):
    program = workspace.program(name)
    report = validate_program(program, program.system)
    assert report.ok, report.violations


def test_incompatible_program_is_reported(workspace):
    program = _program(workspace, 'g(x) = 0;\ng(1) = 1;')
    report = validate_program(program, program.system)
    assert any('incompatible equations' in v and '{x ↦ 1}' in v for v in report.violations)


def test_non_linear_pattern_and_stray_variable(workspace):
    program = _program(workspace, 'g(x, x) = y;')
    violations = validate_program(program, program.system).violations
    assert any('non-linear pattern (repeated x)' in v for v in violations)
    assert any('variable y of the right-hand side' in v for v in violations)


def test_incomplete_observer_family(workspace):
    program = _program(workspace, 'hd(g(x)) = hd(x);')
    violations = validate_program(program, program.system).violations
    assert any('do not form one complete family' in v for v in violations)


def test_mixed_observer_and_ordinary_equations(workspace):
    program = _program(workspace, 'hd(g(x)) = hd(x);\ntl(g(x)) = g(x);\ng(0 : x) = x;')
    violations = validate_program(program, program.system).violations
    assert any('mixes observer and ordinary equations' in v for v in violations)


def test_unknown_constructor_in_pattern_is_a_parse_error(workspace):
    with pytest.raises(WorkspaceParseError, match='unknown constructor or function c'):
        _program(workspace, 'g(c(x)) = x;')
    with pytest.raises(WorkspaceParseError, match='expects 2 arguments'):
        _program(workspace, 'g(cons(x)) = x;')


def test_observer_family_combines_into_one_rule(workspace):
    program = workspace.program('flip')
    rule = program.combined_rule('flip')
    assert rule.patterns == (Var('x'),)
    assert rule.rhs.name == 'cons'
    assert rule.rhs.args[1] == Fn('flip', (Fn('tl', (Var('x'),)),))
    assert program.rules['flip'] == (rule,)


def test_deep_destructor_applies_first_index_first(streams):
    dd = deep_destructor((2, 2, 1), streams)
    assert dd.names == ('tl', 'tl', 'hd')
    assert dd.apply(Var('s')) == Fn('hd', (Fn('tl', (Fn('tl', (Var('s'),)),)),))


def test_build_appends_standard_functions_once(streams):
    equation = Equation('g', (Var('x'),), Var('x'))
    program = Program.build('p', [equation], streams)
    assert program.principal == 'g'
    assert program.arity == 1
    assert program.functions == ('g',)
    assert len(program.equations) == 1 + len(standard_functions(streams))


def _random_term(rng, names, height: int):
    if height == 0 or rng.random() < 0.3:
        return Var(rng.choice(names)) if rng.random() < 0.6 else Con(rng.choice(['0', '1']))
    if rng.random() < 0.5:
        return Con('cons', (_random_term(rng, names, height - 1), _random_term(rng, names, height - 1)))
    return Fn('flip', (_random_term(rng, names, height - 1),))


def test_unifiers_equate_both_sides():
    rng = random.Random(5)
    solved = 0
    for _ in range(300):
        t1 = _random_term(rng, ['x', 'y', 'z'], 4)
        t2 = _random_term(rng, ['x', 'y', 'z'], 4)
        unifier = unify(t1, t2)
        if unifier is not None:
            solved += 1
            assert substitute(t1, unifier) == substitute(t2, unifier)
            assert all(not set(unifier) & variables(term) for term in unifier.values())
    assert solved > 0


def test_terms_unify_with_their_instances():
    rng = random.Random(6)
    for _ in range(200):
        term = _random_term(rng, ['x', 'y', 'z'], 4)
        instance = substitute(term, {name: _random_term(rng, ['u', 'v'], 2) for name in 'xyz'})
        unifier = unify(term, instance)
        assert unifier is not None
        assert substitute(term, unifier) == substitute(instance, unifier)
        assert unify(term, term) == {}
