import pytest
from click.testing import CliRunner

from cdsbench.cli import cli
from cdsbench.commands import run_command
from cdsbench.errors import UnknownIdentifierError
from cdsbench.extract import prove_corec
from cdsbench.library import library_entry
from cdsbench.syntax import ProofEntry, parse_file, print_proof


def _invoke(*args):
    return CliRunner().invoke(cli, ['--format', 'tagged', *args])


def _lines(result):
    return result.output.splitlines()


def test_eval_reports_the_approximation():
    result = _invoke('eval', 'flip(v_a)', '--env', 'flip_example', '--depth', '4')
    assert result.exit_code == 0
    assert 'summary\t1:0:1:0:<cut@4>' in _lines(result)
    assert 'program\tflip' in _lines(result)


def test_eval_stall_is_a_negative_verdict():
    result = _invoke('eval', 'b(a, a_late)', '--env', 'alternating', '--depth', '6')
    assert result.exit_code == 1
    assert 'summary\t0:1:0:<stall:no-match>' in _lines(result)


def test_bisim_exit_status_follows_the_verdict():
    equal = _invoke('bisim', 'flip(v_a)', 'v_b', '--env', 'flip_example', '--depth', '10')
    assert equal.exit_code == 0
    assert 'summary\tequal-up-to-depth(10)' in _lines(equal)
    differs = _invoke('bisim', 'flip(v_a)', 'v_a', '--env', 'flip_example', '--depth', '10')
    assert differs.exit_code == 1
    assert 'summary\tdiffers([1])' in _lines(differs)


def test_productive():
    assert _invoke('productive', 'flip').exit_code == 0
    rejected = _invoke('productive', 'morse_thue')
    assert rejected.exit_code == 1
    assert 'reason\trecursive occurrence of mt under merge in tl' in _lines(rejected)


def test_check_accepts_the_library():
    result = _invoke('check')
    assert result.exit_code == 0
    assert 'verdict\tpositive' in _lines(result)


def test_classify():
    result = _invoke('classify', 'S(x) -> S(y)')
    assert 'summary\tgeneral' in _lines(result)


def test_unknown_names_are_errors():
    result = CliRunner().invoke(cli, ['productive', 'nope'])
    assert result.exit_code == 1
    assert "Error: unknown program 'nope'" in result.output


def test_prove_corec_prints_a_proof_block():
    result = _invoke('prove-corec', 'flip')
    assert result.exit_code == 0
    assert 'payload\tproof flip_corec over STREAMS using flip {' in _lines(result)


def test_check_proof_from_a_workspace_file(tmp_path):
    path = tmp_path / 'refl.cds'
    path.write_text('proof refl_x over STREAMS using flip { (refl "x = x" ()) }\n')
    result = _invoke('-w', str(path), 'check-proof', 'refl_x')
    assert result.exit_code == 0
    assert 'summary\tok: {} ⊢ x = x' in _lines(result)


def test_symbol_attributes_load_from_a_workspace_file(tmp_path):
    path = tmp_path / 'identity.cds'
    path.write_text(
        'proof b_identity over STREAMS using flip {\n'
        '    (imp-intro "B(x) -> B(x)" (:discharge a)\n'
        '        (assume "B(x)" (:name a)))\n'
        '}\n'
    )
    result = _invoke('-w', str(path), 'check-proof', 'b_identity')
    assert result.exit_code == 0
    assert 'summary\tok: {} ⊢ B(x) -> B(x)' in _lines(result)


def test_bad_workspace_files_are_reported(tmp_path):
    path = tmp_path / 'broken.cds'
    path.write_text('program p over NOPE { principal p; }\n')
    result = _invoke('-w', str(path), 'check')
    assert result.exit_code == 1
    assert 'unknown system NOPE' in result.output


def test_extract_writes_a_parsable_program(tmp_path, streams, workspace):
    schema = library_entry('even').schema
    proof = ProofEntry('even_corec', 'STREAMS', 'even', prove_corec(schema, streams))
    source = tmp_path / 'even.cds'
    source.write_text(print_proof(proof) + '\n')
    out = tmp_path / 'even_extracted.cds'

    result = _invoke('-w', str(source), 'extract', 'even_corec', '--out', str(out))
    assert result.exit_code == 0
    assert 'summary\tf0(x, s_x)' in _lines(result)
    assert 'even_extracted' in parse_file(str(out), workspace).programs


def test_normalize_reports_the_scan(tmp_path):
    path = tmp_path / 'refl.cds'
    path.write_text('proof refl_x over STREAMS using flip { (refl "x = x" ()) }\n')
    result = _invoke('-w', str(path), 'normalize', 'refl_x')
    assert result.exit_code == 0
    assert 'strongly-positive\tok' in _lines(result)


def test_roundtrip_command():
    result = _invoke('roundtrip', '--depth', '8', '--inputs', '2')
    assert result.exit_code == 0
    assert 'summary\t9/9 entries pass every stage at depth 8' in _lines(result)


def test_text_format_shows_the_summary():
    result = CliRunner().invoke(cli, ['productive', 'flip'])
    assert result.exit_code == 0
    assert 'primitive-corecursive' in result.output


def test_run_command_rejects_unknown_commands(workspace):
    with pytest.raises(UnknownIdentifierError):
        run_command(workspace, 'frobnicate')
