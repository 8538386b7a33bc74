import re
from collections import OrderedDict

CRITERIA = OrderedDict([
    ("c1", "classification matrix of the five worked examples"),
    ("c2", "direct vs transform-based verdicts (135 cases)"),
    ("c3", "generalized AM-GM-HM chain"),
    ("c4", "Jensen suite for all nine rows"),
    ("c5", "converse Jensen suite"),
    ("c6", "three-point and Schur inequalities"),
    ("c7", "composition table and instances"),
    ("c8", "product rules"),
    ("c9", "parser round trip and byte-identical reports"),
])

_results: dict = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = re.search(r"::test_(c\d)_", report.nodeid)
    if not m:
        return
    failed = report.failed
    passed = report.passed and report.when == "call"
    if report.when == "call" or failed:
        ok, bad = _results.setdefault(m.group(1), [0, []])[0], _results[m.group(1)][1]
        if passed:
            _results[m.group(1)][0] = ok + 1
        elif failed:
            bad.append(report.nodeid.split("::", 1)[1])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key, title in CRITERIA.items():
        if key not in _results:
            continue
        ok, bad = _results[key]
        mark = "PASS" if not bad else "FAIL"
        tr.write_line(f"{mark} {key.upper()} {title}: {ok}/{ok + len(bad)} checks")
        for name in bad:
            tr.write_line(f"     failed: {name}")
