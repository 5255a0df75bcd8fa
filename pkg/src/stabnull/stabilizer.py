"""Stabilizer-state enumeration and state-versus-unitary comparisons."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .backend import Backend, ExactArray, Matrix, StateVector, basis_state
from .circuit import apply_circuit, build_unitary, embed, Gate
from .corpus import random_clifford_circuit
from .errors import QubitMismatchError, ResourceLimitError
from .nullity import compute_s_state, state_nullities_batch

__all__ = [
    "MAX_ENUM_QUBITS",
    "MAX_STATE_QUBITS",
    "StabilizerStateSet",
    "enumerate_stabilizer_states",
    "expected_stabilizer_count",
    "sample_stabilizer_states",
    "plus_state",
    "max_state_nullity",
    "maximally_entangled",
    "apply_on_last",
    "aux_nullity",
    "padding_monotonicity_check",
]

MAX_ENUM_QUBITS = 4
MAX_STATE_QUBITS = 10
_GRID = 2.0**20


def expected_stabilizer_count(n: int) -> int:
    """2^n prod_{k=1..n} (2^k + 1); used only as a cross-check."""
    return 2**n * math.prod(2**k + 1 for k in range(1, n + 1))


def _canonical_keys(states: np.ndarray) -> tuple[np.ndarray, list[bytes]]:
    """Rotate each row so its first nonzero amplitude is positive real, then round."""
    first = np.argmax(np.abs(states) > 1e-9, axis=1)
    lead = states[np.arange(states.shape[0]), first]
    rotated = states * (np.abs(lead) / lead)[:, None]
    grid = np.rint(np.concatenate([rotated.real, rotated.imag], axis=1) * _GRID).astype(np.int64)
    return rotated, [row.tobytes() for row in grid]


def _generator_matrices(n: int) -> list[np.ndarray]:
    gates = [Gate("h", (q,)) for q in range(n)] + [Gate("s", (q,)) for q in range(n)]
    gates += [Gate("cnot", (a, b)) for a in range(n) for b in range(n) if a != b]
    return [embed(g, n).data for g in gates]


@dataclass(frozen=True, eq=False)
class StabilizerStateSet:
    """All n-qubit stabilizer states, one representative per global phase."""

    n: int
    vectors: np.ndarray = field(repr=False)
    orbit_depth: int = 0

    def __len__(self) -> int:
        return self.vectors.shape[0]

    def state(self, i: int) -> StateVector:
        return StateVector(self.n, self.vectors[i])

    def __iter__(self):
        return (self.state(i) for i in range(len(self)))

    def index_of(self, psi: StateVector) -> int | None:
        _, keys = _canonical_keys(psi.to_numpy()[None, :])
        _, mine = _canonical_keys(self.vectors)
        try:
            return mine.index(keys[0])
        except ValueError:
            return None

    def to_json(self) -> str:
        """JSON array of states, each a list of [re, im] amplitude pairs."""
        return json.dumps([[[float(a.real), float(a.imag)] for a in row] for row in self.vectors])


def enumerate_stabilizer_states(n: int) -> StabilizerStateSet:
    """Breadth-first orbit of |0...0> under H, S and CNOT on every qubit (pair)."""
    if not 1 <= n <= MAX_ENUM_QUBITS:
        raise ResourceLimitError(f"stabilizer enumeration supports 1 <= n <= {MAX_ENUM_QUBITS}")
    gens = _generator_matrices(n)
    start = np.zeros((1, 2**n), dtype=complex)
    start[0, 0] = 1
    found, keys = _canonical_keys(start)
    seen = set(keys)
    collected = [found]
    frontier = found
    depth = 0
    while frontier.shape[0]:
        cands = np.concatenate([frontier @ g.T for g in gens])
        rotated, ckeys = _canonical_keys(cands)
        fresh = []
        for i, key in enumerate(ckeys):
            if key not in seen:
                seen.add(key)
                fresh.append(i)
        frontier = rotated[fresh]
        if frontier.shape[0]:
            collected.append(frontier)
            depth += 1
    return StabilizerStateSet(n, np.concatenate(collected), orbit_depth=depth)


def sample_stabilizer_states(n: int, count: int, rng: np.random.Generator, depth: int | None = None) -> list[StateVector]:
    """Random Clifford circuits applied to |0...0> (float backend)."""
    depth = depth if depth is not None else 4 * n * n + 4
    zero = basis_state(n, 0)
    return [apply_circuit(random_clifford_circuit(n, depth, rng), zero) for _ in range(count)]


def plus_state(n: int, backend: Backend | str = Backend.FLOAT) -> StateVector:
    if Backend(backend) == Backend.EXACT:
        return StateVector(n, ExactArray.from_integers(np.ones(2**n, dtype=np.int64), k=n))
    return StateVector(n, np.full(2**n, 2 ** (-n / 2), dtype=complex))


@dataclass(frozen=True)
class MaxStateNullity:
    max: int
    argmax: int
    state: StateVector = field(repr=False)
    values: np.ndarray = field(repr=False)

    def attained_by(self, index: int) -> bool:
        return int(self.values[index]) == self.max


def max_state_nullity(U: Matrix, states: StabilizerStateSet) -> MaxStateNullity:
    """max over the set of v_s(U|psi>)."""
    if U.n != states.n:
        raise QubitMismatchError(f"unitary has {U.n} qubits, states have {states.n}")
    out = states.vectors @ U.to_numpy().T
    values = state_nullities_batch(out, U.n)
    best = int(np.argmax(values))
    return MaxStateNullity(int(values[best]), best, states.state(best), values)


def maximally_entangled(n: int, backend: Backend | str = Backend.FLOAT) -> StateVector:
    """(1/sqrt(2^n)) sum_x |x>|x> on 2n qubits."""
    if 2 * n > MAX_STATE_QUBITS:
        raise ResourceLimitError(f"{2 * n} qubits exceeds the state cap of {MAX_STATE_QUBITS}")
    dim = 2**n
    vals = np.eye(dim, dtype=np.int64).reshape(-1)
    if Backend(backend) == Backend.EXACT:
        return StateVector(2 * n, ExactArray.from_integers(vals, k=n))
    return StateVector(2 * n, vals / math.sqrt(dim))


def apply_on_last(U: Matrix, psi: StateVector) -> StateVector:
    """(I_{2^d} (x) U)|psi> where ``psi`` has d + n qubits."""
    d = psi.n - U.n
    if d < 0:
        raise QubitMismatchError(f"state has {psi.n} qubits, fewer than the unitary's {U.n}")
    if psi.n > MAX_STATE_QUBITS:
        raise ResourceLimitError(f"{psi.n} qubits exceeds the state cap of {MAX_STATE_QUBITS}")
    amps = psi.amplitudes
    if isinstance(amps, ExactArray) and isinstance(U.data, ExactArray):
        out = amps.reshape(2**d, U.dim) @ U.data.T
        return StateVector(psi.n, out.reshape(-1))
    mat = psi.to_numpy().reshape(2**d, U.dim) @ U.to_numpy().T
    return StateVector(psi.n, mat.reshape(-1))


def aux_nullity(U: Matrix, ancilla_state: StateVector) -> int:
    """v_s((I (x) U)|phi>)."""
    return compute_s_state(apply_on_last(U, ancilla_state)).nullity


def _stabilizer_pool(m: int, rng: np.random.Generator, samples: int) -> list[StateVector]:
    if m == 0:
        return []
    if m <= 3:
        return list(enumerate_stabilizer_states(m))
    return sample_stabilizer_states(m, samples, rng)


@dataclass(frozen=True)
class PaddingCheck:
    ok: bool
    best_d: int
    best_d_prime: int
    padding_preserved: bool

    def __bool__(self) -> bool:
        return self.ok


def padding_monotonicity_check(U: Matrix, d: int, d_prime: int, seed: int = 0, samples: int = 200) -> PaddingCheck:
    """Best ancilla value at size d is at least the best at d' <= d.

    The d-qubit pool contains every d'-qubit input padded with |0>^{d-d'}
    (whose value must be unchanged), the maximally entangled state when
    d == n, and further samples.
    """
    if d < d_prime or d_prime < 0:
        raise ValueError("need d >= d' >= 0")
    rng = np.random.default_rng(seed)
    n = U.n
    small = _stabilizer_pool(d_prime + n, rng, samples)
    small_vals = [aux_nullity(U, phi) for phi in small]
    pad = basis_state(d - d_prime, 0) if d > d_prime else None
    padded_vals = []
    for phi in small:
        big = pad.tensor(phi) if pad is not None else phi
        padded_vals.append(aux_nullity(U, big))
    preserved = padded_vals == small_vals
    big_vals = list(padded_vals)
    if d == n:
        big_vals.append(aux_nullity(U, maximally_entangled(n)))
    if d > d_prime:
        big_vals += [aux_nullity(U, phi) for phi in _stabilizer_pool(d + n, rng, samples // 4)]
    best_d, best_dp = max(big_vals), max(small_vals)
    return PaddingCheck(preserved and best_d >= best_dp, best_d, best_dp, preserved)
