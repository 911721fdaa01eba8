import random
import sys

import pytest

from cdsbench.evaluation import (
    DiagramEnv,
    EvalSession,
    Generator,
    derives_omega,
    normal_form,
    observe,
    render_approximation,
    restrict,
    stream_bits,
    validate_env,
)
from cdsbench.extract import random_regular_stream
from cdsbench.terms import Con, Fn, RegularCoterm


def _ident(name: str) -> Fn:
    return Fn(name, ())


def _nat(n: int):
    term = Con('0')
    for _ in range(n):
        term = Con('s', (term,))
    return term


def test_flip_observed_to_depth_four(workspace, flip_env):
    approx = observe(workspace.program('flip'), flip_env, Fn('flip', (_ident('v_a'),)), 4)
    assert render_approximation(approx) == '1:0:1:0:<cut@4>'


def test_flip_of_v_a_is_v_b(workspace, flip_env):
    outcome = derives_omega(workspace.program('flip'), flip_env, Fn('flip', (_ident('v_a'),)), _ident('v_b'), 20)
    assert outcome.equal
    assert str(outcome) == 'equal-up-to-depth(20)'


def test_flip_of_v_a_differs_from_v_a_at_the_head(workspace, flip_env):
    outcome = derives_omega(workspace.program('flip'), flip_env, Fn('flip', (_ident('v_a'),)), _ident('v_a'), 20)
    assert not outcome.equal
    assert str(outcome) == 'differs([1])'


def test_difference_paths_start_at_the_roots(workspace, flip_env):
    program = workspace.program('flip')
    assert str(derives_omega(program, flip_env, _ident('v_a'), _ident('v_b'), 0)) == 'equal-up-to-depth(0)'
    assert str(derives_omega(program, flip_env, _ident('v_a'), _ident('v_b'), 1)) == 'differs([1])'
    assert str(derives_omega(program, flip_env, _ident('v_a'), Con('0'), 1)) == 'differs([])'


def test_deep_observation_restores_the_recursion_limit(workspace, flip_env):
    limit = sys.getrecursionlimit()
    approx = observe(workspace.program('flip'), flip_env, Fn('flip', (_ident('v_a'),)), 64)
    assert stream_bits(approx) == ['1', '0'] * 32
    assert sys.getrecursionlimit() == limit


def test_divergence_exhausts_the_budget(workspace):
    program = workspace.program('divergence')
    approx = EvalSession(program, budget=200).observe(Fn('f', (_nat(2),)), 4)
    assert render_approximation(approx) == '<stall:budget@200>'


def test_missing_equation_stalls(workspace):
    program = workspace.program('divergence')
    assert render_approximation(observe(program, None, Fn('f', (_nat(1),)), 4)) == '<stall:no-match>'
    assert normal_form(program, Fn('f', (_nat(0),))) == Con('0')


def test_ind_unfolds_an_infinite_tower(workspace):
    approx = observe(workspace.program('ind'), None, Fn('ind', ()), 3)
    assert render_approximation(approx) == 's(s(s(<cut@3>)))'


def test_b_is_productive_on_equal_streams(workspace, alternating):
    approx = observe(workspace.program('b'), alternating, Fn('b', (_ident('a'), _ident('a'))), 6)
    assert render_approximation(approx) == '0:1:0:1:0:1:<cut@6>'


def test_b_stalls_where_its_arguments_disagree(workspace, alternating):
    approx = observe(workspace.program('b'), alternating, Fn('b', (_ident('a'), _ident('a_late'))), 8)
    assert render_approximation(approx) == '0:1:0:<stall:no-match>'


@pytest.mark.parametrize('depth', range(32))
def test_shallower_observations_are_restrictions(workspace, alternating, depth):
    program = workspace.program('b')
    term = Fn('b', (_ident('a'), _ident('a_late')))
    deep = observe(program, alternating, term, 31)
    shallow = observe(program, alternating, term, depth)
    assert render_approximation(restrict(deep, depth)) == render_approximation(shallow)


@pytest.mark.parametrize('depth', range(32))
def test_flip_observations_are_consistent(workspace, flip_env, depth):
    program = workspace.program('flip')
    term = Fn('flip', (Fn('flip', (_ident('v_b'),)),))
    deep = observe(program, flip_env, term, 31)
    assert restrict(deep, depth) == observe(program, flip_env, term, depth)


def test_generator_bindings_run_programs(workspace, flip_env):
    flip = workspace.program('flip')
    env = flip_env.extend({'w': Generator(flip, ('v_a',))})
    approx = observe(flip, env, _ident('w'), 6)
    assert stream_bits(approx) == ['1', '0', '1', '0', '1', '0']


def test_env_validation_flags_clashes(workspace, streams):
    env = DiagramEnv.of('bad', {
        'flip': RegularCoterm.stream([], ['0']),
        'u': Generator(workspace.program('flip'), ('missing',)),
    }, 'STREAMS')
    violations = validate_env(env, workspace.program('flip'), streams).violations
    assert any('binding flip clashes' in v for v in violations)
    assert any('unknown binding missing' in v for v in violations)


def test_library_envs_validate(workspace, streams, flip_env, alternating):
    for env in (flip_env, alternating):
        assert validate_env(env, workspace.program('b'), streams).ok


def test_divergence_uses_the_default_budget(workspace):
    approx = observe(workspace.program('divergence'), None, Fn('f', (_nat(2),)), 4)
    assert render_approximation(approx) == '<stall:budget@10000>'


def test_b_of_equal_streams_is_its_argument(workspace, alternating):
    outcome = derives_omega(workspace.program('b'), alternating, Fn('b', (_ident('a'), _ident('a'))), _ident('a'), 32)
    assert str(outcome) == 'equal-up-to-depth(32)'


def test_reobserving_in_a_reused_session_is_deterministic(workspace, streams):
    program = workspace.program('zipxor')
    rng = random.Random(17)
    for trial in range(20):
        env = DiagramEnv.of(f'det-{trial}', {
            's': random_regular_stream(rng, streams),
            't': random_regular_stream(rng, streams),
        }, 'STREAMS')
        term = Fn('xor', (_ident('s'), _ident('t')))
        session = EvalSession(program, env)
        first = render_approximation(session.observe(term, 32))
        assert render_approximation(session.observe(term, 32)) == first
        assert render_approximation(observe(program, env, term, 32)) == first


def test_odd_is_even_after_one_tail(workspace, streams):
    program = workspace.program('even').with_equations(
        workspace.program('odd').defined_equations, name='even_and_odd'
    )
    rng = random.Random(19)
    s = _ident('s')
    for trial in range(25):
        env = DiagramEnv.of(f'odd-{trial}', {'s': random_regular_stream(rng, streams)}, 'STREAMS')
        result = derives_omega(program, env, Fn('odd', (s,)), Fn('even', (Fn('tl', (s,)),)), 64)
        assert result.equal, str(result)
