"""Prints one PASS/FAIL line per acceptance check after the run."""

ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if report.when == "call":
        ACCEPTANCE[name] = "PASS" if report.passed else "FAIL"
    elif report.failed:
        # setup or teardown blew up before the body could run
        ACCEPTANCE[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(ACCEPTANCE):
        terminalreporter.write_line("%s  %s" % (ACCEPTANCE[name], name))
