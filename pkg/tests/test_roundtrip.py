import pytest

from cdsbench.extract import STAGES, roundtrip_report
from cdsbench.library import library_entry, stock_library


@pytest.mark.acceptance
def test_stock_library_survives_every_stage():
    report = roundtrip_report(stock_library(), depth=64, inputs=10)
    assert [row.entry for row in report.rows] == [entry.name for entry in stock_library()]
    for row in report.rows:
        assert row.ok, f'{row.entry} failed at {row.failed_stage}: {row.outcomes}'
        assert [outcome.stage for outcome in row.outcomes] == list(STAGES)
    assert report.ok


def test_rejected_programs_stop_at_recognition():
    report = roundtrip_report([library_entry('morse_thue')], depth=4, inputs=1)
    (row,) = report.rows
    assert not report.ok
    assert row.failed_stage == 'recognize'
    assert row.outcomes[0].detail == 'recursive occurrence of mt under merge in tl'
    assert all(row.status(stage) == 'skipped' for stage in STAGES[1:])


def test_roundtrip_is_reproducible_for_a_seed():
    first = roundtrip_report([library_entry('zipxor')], depth=8, inputs=2, seed=3)
    second = roundtrip_report([library_entry('zipxor')], depth=8, inputs=2, seed=3)
    assert first.rows == second.rows
