def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import CRITERIA, EXCLUDED, RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, _ in CRITERIA:
        if number in RESULTS:
            ok, detail = RESULTS[number]
            terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail}")
        else:
            terminalreporter.write_line(f"NOT RUN criterion {number} ({title})")
    terminalreporter.write_line(EXCLUDED)
