import re

_results = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    key = (int(m.group(1)), m.group(2).replace("_", " "))
    if report.when == "call" or report.outcome != "passed":
        failed = report.outcome == "failed" or _results.get(key) == "FAIL"
        _results[key] = "FAIL" if failed else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for (num, label), verdict in sorted(_results.items()):
        terminalreporter.write_line(f"criterion {num:2d}  {verdict}  {label}")
