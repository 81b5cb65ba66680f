def pytest_terminal_summary(terminalreporter):
    """Repeat the acceptance verdicts at the end of the run, one line per criterion."""
    from test_acceptance import RESULTS
    from orbitq.checks import CRITERIA, PASS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        report = RESULTS.get(n)
        if report is None:
            verdict = "NOT RUN"
        else:
            verdict = "PASS" if report.status == PASS else "FAIL"
        terminalreporter.write_line(f"{verdict} criterion {n}: {CRITERIA[n]}")
