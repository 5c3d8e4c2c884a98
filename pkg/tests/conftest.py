"""Replay the acceptance scorecard after the run summary.

Pytest captures per-test stdout, so the one-line PASS/FAIL verdicts
printed by test_acceptance would otherwise only surface for failures.
"""


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    try:
        from test_acceptance import SCORECARD
    except ImportError:
        return
    if not SCORECARD:
        return
    terminalreporter.section("acceptance scorecard")
    for line in SCORECARD:
        terminalreporter.write_line(line)
