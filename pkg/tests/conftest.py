import numpy as np
import pytest
import scipy.linalg

from bhcv.focksim import embed, position

_ACCEPTANCE = []


@pytest.fixture
def acceptance_log():
    """Record one pass/fail line per acceptance criterion."""
    def record(criterion, ok, detail):
        _ACCEPTANCE.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)


def oracle_gate(kind, strength, modes, d, num_modes):
    """Independent gate matrices: Kronecker embedding plus scipy's Pade expm."""
    x = position(d)
    if kind in ("P", "V", "Q"):
        k = {"P": 2, "V": 3, "Q": 4}[kind]
        return scipy.linalg.expm(1j * strength * embed(np.linalg.matrix_power(x, k), modes[0], num_modes))
    if kind == "CZ":
        gen = embed(x, modes[0], num_modes) @ embed(x, modes[1], num_modes)
        return scipy.linalg.expm(1j * strength * gen)
    if kind == "F":
        return embed(scipy.linalg.expm(0.5j * np.pi * np.diag(np.arange(d))), modes[0], num_modes)
    raise ValueError(kind)
