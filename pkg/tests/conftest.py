import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def mat(rows):
    return np.array(rows, dtype=complex)


def unit(n, i):
    e = np.zeros(n, dtype=complex)
    e[i] = 1
    return e


def matrix_unit(n, i, j):
    m = np.zeros((n, n), dtype=complex)
    m[i, j] = 1
    return m


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
    passed = sum(line.startswith("[PASS]") for line in results.values())
    terminalreporter.write_line(f"{passed}/{len(results)} criteria passed")
