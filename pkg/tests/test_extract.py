import random

import pytest

from cdsbench.corec import compile_schema
from cdsbench.errors import ExtractionError, NotStronglyPositiveError
from cdsbench.evaluation import DiagramEnv, EvalSession, Generator, observe, stream_bits
from cdsbench.extract import (
    FAILS,
    check_realizer,
    even_term,
    extract,
    merge_term,
    odd_term,
    pair_term,
    prove_corec,
    random_regular_stream,
    simplify,
    split_equations,
    split_position,
    split_term,
    stream_signature,
    zeros_term,
)
from cdsbench.library import library_entry, split_library
from cdsbench.logic import Atom, Implication, assume, check_proof, node, normalize, open_assumptions
from cdsbench.syntax import Scope, parse_formula
from cdsbench.terms import Con, Fn, Var


def _ident(name: str) -> Fn:
    return Fn(name, ())


def _formula(streams, text: str):
    return parse_formula(text, Scope(streams, identifiers={'v_a', 'v_b'}))


def _flip_proof(streams):
    schema = library_entry('flip').schema
    return schema, prove_corec(schema, streams)


def test_split_library_matches_generated_equations():
    program = split_library()
    assert split_equations(stream_signature(program.system)) == program.defined_equations


def test_stream_signature_needs_a_binary_stream_constructor(streams, naturals):
    signature = stream_signature(streams)
    assert (signature.constructor, signature.head, signature.stream) == ('cons', 'B', 'S')
    assert (signature.false, signature.true) == ('0', '1')
    with pytest.raises(ExtractionError, match='no binary stream constructor'):
        stream_signature(naturals)


@pytest.mark.acceptance
def test_split_and_merge_laws_on_random_streams(streams):
    program = split_library()
    rng = random.Random(7)
    s, t = _ident('s'), _ident('t')
    for trial in range(200):
        env = DiagramEnv.of(f'laws-{trial}', {
            's': random_regular_stream(rng, streams),
            't': random_regular_stream(rng, streams),
        }, 'STREAMS')
        session = EvalSession(program, env)
        assert session.compare(merge_term(even_term(s), odd_term(s)), s, 64).equal
        assert session.compare(even_term(merge_term(s, t)), s, 64).equal
        assert session.compare(odd_term(merge_term(s, t)), t, 64).equal


@pytest.mark.parametrize('index', [0, 1, 2, 3])
def test_split_positions(streams, index):
    coterm = random_regular_stream(random.Random(index), streams)
    env = DiagramEnv.of('source', {'s': coterm}, 'STREAMS')
    start, stride = split_position(index)
    bits = stream_bits(observe(split_library(), env, split_term(_ident('s'), index), 6))
    source = coterm.stream_prefix(start + stride * 6)
    assert bits == [source[start + stride * k] for k in range(6)]


def test_simplify_applies_split_laws(streams):
    signature = stream_signature(streams)
    a, b = Var('a'), Var('b')
    assert simplify(split_term(pair_term(a, b), 0), signature) == a
    assert simplify(split_term(pair_term(a, b), 1), signature) == b
    assert simplify(signature.head_of(zeros_term()), signature) == Con('0')
    assert simplify(signature.head_of(signature.cons(Con('1'), a)), signature) == Con('1')


def test_simplify_selects_delta_branches(streams):
    signature = stream_signature(streams)
    term = signature.delta(Con('1'), {'0': Var('p'), '1': Var('q')}, Var('r'))
    assert simplify(term, signature) == Var('q')


def test_conjunction_realizer(workspace, streams, flip_env):
    flip = workspace.program('flip')
    formula = _formula(streams, 'B(0) & S(v_a)')
    good = pair_term(Con('cons', (Con('0'), zeros_term())), _ident('v_a'))
    assert check_realizer(flip, flip_env, good, formula, 12).holds
    bad = pair_term(Con('cons', (Con('1'), zeros_term())), _ident('v_a'))
    result = check_realizer(flip, flip_env, bad, formula, 12)
    assert result.verdict == FAILS
    assert result.path == ('&0',)


def test_disjunction_realizer_selects_by_head(workspace, streams, flip_env):
    flip = workspace.program('flip')
    formula = _formula(streams, 'B(0) | S(v_a)')
    left = Con('cons', (Con('0'), Con('cons', (Con('0'), zeros_term()))))
    assert check_realizer(flip, flip_env, left, formula, 12).holds
    assert check_realizer(flip, flip_env, Con('cons', (Con('1'), _ident('v_a'))), formula, 12).holds
    wrong = check_realizer(flip, flip_env, Con('cons', (Con('1'), _ident('v_b'))), formula, 12)
    assert wrong.path == ('|1',)


def test_existential_realizer(workspace, streams, flip_env):
    formula = _formula(streams, 'exists y. S(y)')
    realizer = pair_term(_ident('v_b'), _ident('v_b'))
    assert check_realizer(workspace.program('flip'), flip_env, realizer, formula, 12).holds


def test_implications_have_no_stream_realizers(workspace, streams, flip_env):
    with pytest.raises(NotStronglyPositiveError):
        check_realizer(workspace.program('flip'), flip_env, _ident('v_a'), _formula(streams, 'B(0) -> S(v_a)'), 4)


def test_generated_coinduction_proof_checks(workspace, streams):
    schema, proof = _flip_proof(streams)
    assert proof.conclusion == Atom('S', Fn('flip', (Var('x'),)))
    assert open_assumptions(proof) == {'s_x': Atom('S', Var('x'))}
    assert check_proof(streams, workspace.program('flip'), proof).ok
    assert check_proof(streams, workspace.program('flip'), normalize(proof)).ok


def test_proofs_for_groups_and_helpers(workspace, streams):
    for name in ('alternate', 'merge', 'zipxor'):
        schema = library_entry(name).schema
        proof = prove_corec(schema, streams)
        assert check_proof(streams, compile_schema(schema, streams), proof).ok


def test_flip_extraction(streams, flip_env):
    schema, proof = _flip_proof(streams)
    result = extract(normalize(proof), compile_schema(schema, streams))
    assert result.parameters == ('x', 's_x')
    assert result.principal == 'f0'
    assert result.program.name == 'flip_extracted'
    assert result.certificate[0].path == ()
    assert result.certificate[0].factor == 1

    env = flip_env.extend({'w': Generator(result.program, ('v_a', 'v_a'))})
    bits = stream_bits(observe(result.program, env, _ident('w'), 6))
    assert bits == ['1', '0', '1', '0', '1', '0']


def test_extraction_refuses_implications(workspace):
    b = Atom('B', Var('x'))
    proof = node('imp-intro', Implication(b, b), assume('a', b), discharge='a')
    with pytest.raises(ExtractionError, match='is not strongly positive'):
        extract(proof, workspace.program('flip'))
