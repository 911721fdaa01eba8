from cdsbench.models import CommandReport, ValidationReport


def test_command_report_verdicts():
    report = CommandReport('eval')
    assert report.exit_code == 0
    report.add_row('depth', 4)
    assert report.rows == [('depth', '4')]
    report.mark_as_failed('stalled')
    assert (report.verdict, report.summary, report.is_error) == (False, 'stalled', False)
    assert report.exit_code == 1


def test_error_reports_are_prefixed():
    report = CommandReport('check')
    report.mark_as_error("unknown program 'x'")
    assert report.is_error
    assert report.summary == "Error: unknown program 'x'"
    assert report.exit_code == 1


def test_validation_reports_collect_violations():
    report = ValidationReport('program p')
    assert report.ok
    other = ValidationReport('env e', ['unknown binding u'])
    report.extend(other)
    report.add('duplicate binding v')
    assert not report.ok
    assert report.violations == ['unknown binding u', 'duplicate binding v']
