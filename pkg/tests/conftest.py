"""Independent dense oracles shared by the test modules.

These build Paulis from explicit Kronecker products and count +-1 traces
directly, without touching the package's bit-level code paths.
"""

from functools import reduce
from itertools import product

import numpy as np
import pytest

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def dense_pauli(text: str) -> np.ndarray:
    return reduce(np.kron, [_SINGLE[ch] for ch in text])


def pauli_strings(n: int) -> list[str]:
    return ["".join(p) for p in product("IXYZ", repeat=n)]


def brute_unitary_s(U: np.ndarray, tol: float = 1e-8) -> int:
    n = int(np.log2(U.shape[0]))
    paulis = [dense_pauli(s) for s in pauli_strings(n)]
    count = 0
    for pv in paulis:
        conj = U @ pv @ U.conj().T
        for pu in paulis:
            val = np.trace(pu @ conj) / 2**n
            if abs(abs(val) - 1) <= tol:
                count += 1
    return count


def brute_state_s(psi: np.ndarray, tol: float = 1e-8) -> int:
    n = int(np.log2(psi.shape[0]))
    return sum(
        1 for s in pauli_strings(n) if abs(abs(np.vdot(psi, dense_pauli(s) @ psi)) - 1) <= tol
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one summary line per acceptance criterion, echoed after the test run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
