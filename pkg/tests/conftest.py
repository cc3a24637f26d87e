"""Shared test wiring: the capability tally printed after the run."""

VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance tally")
        for line in VERDICTS:
            terminalreporter.write_line(line)
