import random

import pytest

from cdsbench.errors import NormalizationLimitError
from cdsbench.logic import (
    Atom,
    Conjunction,
    Disjunction,
    Equality,
    Exists,
    Implication,
    PolarityClass,
    alpha_equal,
    assert_sp_proof,
    assume,
    build_dcm,
    check_proof,
    classify_formula,
    find_detour,
    node,
    normalize,
    open_assumptions,
    render_formula,
    substitute_formula,
)
from cdsbench.logic.formulas import polarities
from cdsbench.syntax import Scope, parse_formula
from cdsbench.terms import Con, Var


def _formula(streams, text: str):
    return parse_formula(text, Scope(streams))


def _b(name: str = 'x') -> Atom:
    return Atom('B', Var(name))


def _detour():
    """(B(x) -> B(x)) applied to an assumption of B(x)."""
    identity = node('imp-intro', Implication(_b(), _b()), assume('a', _b()), discharge='a')
    return node('imp-elim', _b(), identity, assume('b', _b()))


@pytest.mark.parametrize('text, expected', [
    ('exists x. B(x) & S(x)', PolarityClass.STRONGLY_POSITIVE),
    ('x = y | S(x)', PolarityClass.STRONGLY_POSITIVE),
    ('forall x. S(x)', PolarityClass.POSITIVE),
    ('B(x) -> S(y)', PolarityClass.UNIPOLAR),
    ('S(x) -> S(y)', PolarityClass.GENERAL),
])
def test_polarity_classes(streams, text, expected):
    assert classify_formula(_formula(streams, text)) is expected


def test_formulas_render_as_they_parse(streams):
    for text in ('B(x) -> S(y)', 'exists x. B(x) & S(x)', '(B(x) -> B(y)) -> S(z)', 'x = 0:y'):
        assert render_formula(_formula(streams, text)) == text


def test_substitution_avoids_capture():
    formula = Exists('y', Equality(Var('x'), Var('y')))
    substituted = substitute_formula(formula, {'x': Var('y')})
    assert substituted.var != 'y'
    assert alpha_equal(substituted, Exists('z', Equality(Var('y'), Var('z'))))


def test_stream_decomposition(streams):
    dcm = build_dcm(streams, 'S', Atom('S', Var('x')), 'x')
    assert render_formula(dcm) == 'exists z0. exists z1. B(z0) & S(z1) & x = z0:z1'


def test_natural_decomposition(naturals):
    dcm = build_dcm(naturals, 'N', Atom('N', Var('x')), 'x')
    assert render_formula(dcm) == 'x = 0 | exists z0. N(z0) & x = s(z0)'


def test_checked_assumption_stays_open(streams, workspace):
    judgment = check_proof(streams, workspace.program('flip'), assume('a', _b()))
    assert judgment.ok
    assert str(judgment) == '{B(x)} ⊢ B(x)'


def test_implication_discharges_its_assumption(streams, workspace):
    proof = node('imp-intro', Implication(_b(), _b()), assume('a', _b()), discharge='a')
    judgment = check_proof(streams, workspace.program('flip'), proof)
    assert judgment.ok
    assert judgment.assumptions == ()


def test_data_introduction(streams, workspace):
    stream = Con('cons', (Con('0'), Var('y')))
    head = node('data-intro', Atom('B', Con('0')))
    proof = node('data-intro', Atom('S', stream), head, assume('s', Atom('S', Var('y'))))
    assert check_proof(streams, workspace.program('flip'), proof).ok


def test_violations_name_rule_and_position(streams, workspace):
    proof = node('and-intro', Conjunction(_b(), _b('y')), assume('a', _b()), assume('b', _b()))
    judgment = check_proof(streams, workspace.program('flip'), proof)
    assert not judgment.ok
    assert str(judgment.violation) == 'and-intro at root: right premise: expected B(y), found B(x)'


def test_unknown_rules_are_violations(streams, workspace):
    proof = node('and-intro', Conjunction(_b(), _b()), assume('a', _b()), node('magic', _b()))
    judgment = check_proof(streams, workspace.program('flip'), proof)
    assert judgment.violation.path == (1,)
    assert judgment.violation.reason == 'unknown rule magic'


def test_refl_needs_identical_sides(streams, workspace):
    program = workspace.program('flip')
    assert check_proof(streams, program, node('refl', Equality(Var('x'), Var('x')))).ok
    assert not check_proof(streams, program, node('refl', Equality(Var('x'), Var('y')))).ok


def test_detour_is_normalized_away(streams, workspace):
    proof = _detour()
    assert check_proof(streams, workspace.program('flip'), proof).ok
    assert find_detour(proof) == ()
    normal = normalize(proof)
    assert normal == assume('b', _b())
    assert find_detour(normal) is None
    assert open_assumptions(proof) == open_assumptions(normal) == {'b': _b()}


def test_strong_positivity_scan(streams):
    scan = assert_sp_proof(_detour())
    assert not scan.ok
    assert scan.path == (0,)
    assert scan.rule == 'imp-intro'
    assert assert_sp_proof(normalize(_detour())).ok


def test_normalization_limit():
    proof = node('and-elim', _b(), node('and-intro', Conjunction(_b(), _b()), _detour(), assume('c', _b())), index=0)
    assert normalize(proof) == assume('b', _b())
    with pytest.raises(NormalizationLimitError):
        normalize(proof, limit=1)


def _degenerate_coinduction(*premises):
    """Coinduction into S(v) with the invariant x = x."""
    return node(
        'coinduction', Atom('S', Var('v')), node('refl', Equality(Var('v'), Var('v'))), *premises,
        predicate='S', var='x', formula=Equality(Var('x'), Var('x')), eigen='y', discharge='h',
    )


def test_coinduction_needs_its_decomposition_premise(streams, workspace):
    judgment = check_proof(streams, workspace.program('flip'), _degenerate_coinduction())
    assert not judgment.ok
    assert judgment.violation.reason == 'expects 2 premises, got 1'


def test_fabricated_decomposition_is_not_a_proof(streams, workspace):
    program = workspace.program('flip')
    dcm = build_dcm(streams, 'S', Equality(Var('y'), Var('y')), 'y')
    judgment = check_proof(streams, program, _degenerate_coinduction(assume('d', dcm)))
    assert not judgment.ok
    assert judgment.violation.reason.startswith('eigenvariable y occurs free in open assumption')

    wrong = build_dcm(streams, 'S', Atom('S', Var('y')), 'y')
    judgment = check_proof(streams, program, _degenerate_coinduction(assume('d', wrong)))
    assert not judgment.ok
    assert judgment.violation.reason.startswith('decomposition premise')


_RANK = list(PolarityClass)


def _random_formula(rng, height: int):
    if height == 0 or rng.random() < 0.25:
        if rng.random() < 0.2:
            return Equality(Var('x'), Var('y'))
        return Atom(rng.choice(['B', 'S']), Var(rng.choice(['x', 'y'])))
    kind = rng.choice([Conjunction, Disjunction, Implication])
    return kind(_random_formula(rng, height - 1), _random_formula(rng, height - 1))


def test_conjunction_never_tightens_the_class():
    rng = random.Random(9)
    for _ in range(300):
        f, g = _random_formula(rng, 3), _random_formula(rng, 3)
        joined = _RANK.index(classify_formula(Conjunction(f, g)))
        assert joined >= max(_RANK.index(classify_formula(f)), _RANK.index(classify_formula(g)))
        assert classify_formula(Conjunction(f, f)) is classify_formula(f)


def test_self_implication_over_an_atom_is_general():
    rng = random.Random(10)
    for _ in range(200):
        f = _random_formula(rng, 3)
        if any(True for _ in polarities(f)):
            assert classify_formula(Implication(f, f)) is PolarityClass.GENERAL
