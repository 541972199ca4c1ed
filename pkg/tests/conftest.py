import pytest
from hypothesis import strategies as st

from permsims import Perm

_criteria: dict[int, list[tuple[str, str, str]]] = {}


def perms(min_degree=1, max_degree=9):
    """Hypothesis strategy for perms of a random degree."""
    return st.integers(min_degree, max_degree).flatmap(
        lambda n: st.permutations(range(1, n + 1)).map(Perm)
    )


def perms_of_degree(n):
    return st.permutations(range(1, n + 1)).map(Perm)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or rep.when != "call":
        return
    detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
    status = "PASS" if rep.passed else "FAIL"
    _criteria.setdefault(marker.args[0], []).append((item.name, status, detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        results = _criteria[number]
        status = "PASS" if all(s == "PASS" for _, s, _ in results) else "FAIL"
        details = " | ".join(d for _, _, d in results if d)
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {details}")
