import pytest

from qclogic.logic import TruthTable, parse_truth_table

F_B_TEXT = """vars 3
000 0
001 0
010 1
011 1
100 0
101 1
110 1
111 0
"""

_criteria: dict[int, tuple[str, bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(num, title): acceptance criterion")


@pytest.fixture
def f_b() -> TruthTable:
    return parse_truth_table(F_B_TEXT)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    num, title = mark.args
    ok = rep.passed
    prev = _criteria.get(num)
    if rep.when == "call" or not ok:
        _criteria[num] = (title, ok and (prev is None or prev[1]))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        title, ok = _criteria[num]
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'} - {title}")
