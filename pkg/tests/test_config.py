import os
import subprocess
import sys
from pathlib import Path

from cdsbench.config import EvalConfig, KernelConfig, RoundtripConfig, _int_from_env

REPO = Path(__file__).resolve().parents[1]


def test_out_of_range_settings_fall_back():
    assert EvalConfig(depth=-1).depth == 16
    assert EvalConfig(budget=0).budget == 10_000
    assert RoundtripConfig(inputs=0).inputs == 10
    assert RoundtripConfig(depth=-3).depth == 64
    assert KernelConfig(normalize_step_limit=0).normalize_step_limit == 10_000


def test_valid_settings_are_kept():
    settings = RoundtripConfig(depth=8, inputs=2, budget=50, seed=1)
    assert (settings.depth, settings.inputs, settings.budget, settings.seed) == (8, 2, 50, 1)


def test_integers_from_the_environment(monkeypatch):
    monkeypatch.setenv('CDS_TEST_DEPTH', '12')
    assert _int_from_env('CDS_TEST_DEPTH', 3) == 12
    monkeypatch.setenv('CDS_TEST_DEPTH', 'deep')
    assert _int_from_env('CDS_TEST_DEPTH', 3) == 3
    monkeypatch.setenv('CDS_TEST_DEPTH', ' ')
    assert _int_from_env('CDS_TEST_DEPTH', 3) == 3
    monkeypatch.delenv('CDS_TEST_DEPTH')
    assert _int_from_env('CDS_TEST_DEPTH', 3) == 3


def test_dotenv_logging_settings_apply_from_the_first_import(tmp_path):
    (tmp_path / '.env').write_text('CDS_LOG_LEVEL=INFO\nCDS_LOG_DIR=logs\n')
    env = {k: v for k, v in os.environ.items() if not k.startswith('CDS_')}
    env['PYTHONPATH'] = str(REPO)
    result = subprocess.run(
        [sys.executable, '-c', 'from cdsbench.cli import main; main(["check"])'],
        cwd=tmp_path, env=env, capture_output=True, text=True,
    )
    assert result.returncode == 0
    assert 'Starting command check' in result.stderr
    assert 'Starting command check' in (tmp_path / 'logs' / 'cdsbench.log').read_text()
