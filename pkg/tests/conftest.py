import pytest

from webmismatch import build_graph


@pytest.fixture
def k4():
    return build_graph(4, [(s, t, 1.0) for s in range(4) for t in range(4) if s != t], weighted=False)


@pytest.fixture
def cycle3():
    return build_graph(3, [(0, 1), (1, 2), (2, 0)], weighted=False)


def complete(n, weighted=False):
    return build_graph(n, [(s, t, 1.0) for s in range(n) for t in range(n) if s != t], weighted=weighted)


# acceptance verdicts, printed as one line per criterion after the run
ACCEPTANCE = {}


def record_verdict(criterion, description, ok, detail=""):
    prev = ACCEPTANCE.get(criterion)
    if prev is not None and not prev[1]:
        return ok  # keep the first failure's detail
    ACCEPTANCE[criterion] = (description, ok, detail)
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        description, ok, detail = ACCEPTANCE[criterion]
        line = f"[{'PASS' if ok else 'FAIL'}] {criterion}: {description}"
        if detail:
            line += f" ({detail})"
        terminalreporter.write_line(line)
