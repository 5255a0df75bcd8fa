"""Named circuits and seeded random circuit generators."""

from __future__ import annotations

import numpy as np

from .circuit import Circuit, Gate, ckz, parse

__all__ = [
    "TOFFOLI_7T",
    "toffoli_7t",
    "ccz_clifford_t",
    "controlled_s",
    "special_family_clifford_t",
    "random_clifford_circuit",
    "random_clifford_t_circuit",
    "random_diagonal_circuit",
    "clifford_t_corpus",
]

# controls 0 and 1, target 2; seven T/T-dagger gates
TOFFOLI_7T = """\
# Toffoli, 7 T gates
qubits 3
h 2
cnot 1 2
tdg 2
cnot 0 2
t 2
cnot 1 2
tdg 2
cnot 0 2
t 1
t 2
h 2
cnot 0 1
t 0
tdg 1
cnot 0 1
"""


def toffoli_7t() -> Circuit:
    return parse(TOFFOLI_7T, name="toffoli_7t")


def _ccz_gates(a: int, b: int, c: int) -> list[Gate]:
    # the Toffoli decomposition with the two Hadamards on the target removed
    return [
        Gate("cnot", (b, c)),
        Gate("tdg", (c,)),
        Gate("cnot", (a, c)),
        Gate("t", (c,)),
        Gate("cnot", (b, c)),
        Gate("tdg", (c,)),
        Gate("cnot", (a, c)),
        Gate("t", (b,)),
        Gate("t", (c,)),
        Gate("cnot", (a, b)),
        Gate("t", (a,)),
        Gate("tdg", (b,)),
        Gate("cnot", (a, b)),
    ]


def ccz_clifford_t(width: int = 3, qubits: tuple[int, int, int] = (0, 1, 2)) -> Circuit:
    return Circuit(width, tuple(_ccz_gates(*qubits)), name="ccz_clifford_t")


def controlled_s(width: int = 2, qubits: tuple[int, int] = (0, 1)) -> Circuit:
    """diag(1, 1, 1, i) from three T-type gates."""
    a, b = qubits
    gates = (Gate("t", (a,)), Gate("t", (b,)), Gate("cnot", (a, b)), Gate("tdg", (b,)), Gate("cnot", (a, b)))
    return Circuit(width, gates, name="controlled_s")


def special_family_clifford_t() -> Circuit:
    """CCZ, H^3, CCZ with both CCZ gates expanded into Clifford+T."""
    hs = [Gate("h", (q,)) for q in range(3)]
    return Circuit(3, tuple(_ccz_gates(0, 1, 2) + hs + _ccz_gates(0, 1, 2)), name="special_family_clifford_t(3)")


_CLIFFORD_1Q = ("h", "s", "sdg", "x", "y", "z")
_CLIFFORD_2Q = ("cnot", "cz", "swap")


def _random_gate(n: int, rng: np.random.Generator, one_qubit: tuple[str, ...], p_two: float) -> Gate:
    if n >= 2 and rng.random() < p_two:
        a, b = rng.choice(n, size=2, replace=False)
        return Gate(str(rng.choice(_CLIFFORD_2Q)), (int(a), int(b)))
    return Gate(str(rng.choice(one_qubit)), (int(rng.integers(n)),))


def random_clifford_circuit(n: int, depth: int, rng: np.random.Generator) -> Circuit:
    gates = tuple(_random_gate(n, rng, _CLIFFORD_1Q, 0.4) for _ in range(depth))
    return Circuit(n, gates, name=f"random_clifford({n},{depth})")


def random_clifford_t_circuit(n: int, depth: int, rng: np.random.Generator, t_fraction: float = 0.3) -> Circuit:
    gates = []
    for _ in range(depth):
        if rng.random() < t_fraction:
            gates.append(Gate(str(rng.choice(("t", "tdg"))), (int(rng.integers(n)),)))
        else:
            gates.append(_random_gate(n, rng, _CLIFFORD_1Q, 0.4))
    return Circuit(n, tuple(gates), name=f"random_clifford_t({n},{depth})")


def random_diagonal_circuit(n: int, rng: np.random.Generator, grid: bool = True) -> Circuit:
    """A single DIAG gate: random 8th roots of unity, or arbitrary phases."""
    from .circuit import diag_from_phases

    if grid:
        phases = np.exp(1j * np.pi / 4 * rng.integers(0, 8, size=2**n))
    else:
        phases = np.exp(2j * np.pi * rng.random(2**n))
    return Circuit(n, (diag_from_phases(phases, range(n)),), name=f"random_diag({n})")


def clifford_t_corpus(seed: int = 0, max_qubits: int = 4, random_per_width: int = 3) -> list[Circuit]:
    """Deterministic Clifford+T circuits used by the soundness and backend checks."""
    rng = np.random.default_rng(seed)
    out = [
        parse("qubits 1\nt 0\n", name="t"),
        parse("qubits 1\nh 0\nt 0\nh 0\nt 0\n", name="tht"),
        parse("qubits 2\nh 0\ncnot 0 1\n", name="bell_prep"),
        controlled_s(),
        toffoli_7t(),
        ccz_clifford_t(),
        special_family_clifford_t(),
    ]
    if max_qubits >= 4:
        out.append(Circuit(4, tuple(Gate("t", (q,)) for q in range(4)), name="t_on_4"))
    for n in range(1, max_qubits + 1):
        for _ in range(random_per_width):
            out.append(random_clifford_t_circuit(n, 6 * n, rng))
    return out


def exact_families(max_n: int = 4) -> list[Circuit]:
    """Non-Clifford+T gate-set circuits whose matrices are still exact (CKZ based)."""
    from .circuit import special_family

    fams = [Circuit(3, (ckz((0, 1, 2)),), name="ccz")]
    fams += [special_family(n) for n in range(3, max_n + 1)]
    return fams
