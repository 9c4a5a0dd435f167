import re

_CRITERIA = {}
_PATTERN = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)")


def pytest_runtest_logreport(report):
    m = _PATTERN.search(report.nodeid)
    if not m or (report.when != "call" and report.passed):
        return
    n = int(m.group(1))
    entry = _CRITERIA.setdefault(n, {"passed": True, "failed": []})
    if report.failed:
        entry["passed"] = False
        if m.group(2) not in entry["failed"]:
            entry["failed"].append(m.group(2))


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        entry = _CRITERIA[n]
        status = "PASS" if entry["passed"] else "FAIL"
        extra = "" if entry["passed"] else "  (" + ", ".join(entry["failed"]) + ")"
        terminalreporter.write_line(f"criterion {n}: {status}{extra}")
