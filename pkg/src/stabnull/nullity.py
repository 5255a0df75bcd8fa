"""Pauli functions, stabilizer nullities, and T-count lower bounds.

For a unitary ``U`` the count ``s(U)`` is the number of +-1 entries of its
Pauli transfer matrix.  A +-1 at ``(u, v)`` happens exactly when
``U sigma_v U^dag = +-sigma_u``, so ``s(U)`` is found by conjugating every
Pauli once and testing whether the result is a signed Pauli.  The candidate
``u`` is read off the nonzero pattern (a Pauli has one nonzero per row, at
column ``row ^ x_mask``) and then checked against every entry.
"""

from __future__ import annotations

import json
import math
import time
from functools import lru_cache
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .backend import (
    Backend,
    ExactArray,
    ExactScalar,
    Matrix,
    StateVector,
    _maxabs,
    _omega_matmul,
    _omega_product,
    _promote,
    _times_i_power,
    to_float,
)
from .circuit import Circuit, build_unitary, count_t_gates
from .errors import InvariantViolation, QubitMismatchError
from .pauli import LabelSubgroup, PauliLabel, PhasedPauli, all_labels, to_dense

__all__ = [
    "FLOAT_PM1_TOL",
    "TransferEntry",
    "StateEntry",
    "NullityReport",
    "TCountBound",
    "state_pauli_function",
    "unitary_pauli_function",
    "pauli_transfer_matrix",
    "conjugate_and_detect",
    "compute_s_unitary",
    "compute_s_state",
    "state_nullity",
    "unitary_nullity",
    "stab_group",
    "subgroup_P_U",
    "is_clifford",
    "t_count_lower_bound",
    "gate_synthesis_lower_bound",
]

FLOAT_PM1_TOL = 1e-8
IMAG_TOL = 1e-10
_CHUNK = 256


@dataclass(frozen=True)
class TransferEntry:
    """Certificate that ``U sigma_v U^dag = sign * sigma_u``."""

    u: PauliLabel
    v: PauliLabel
    sign: int

    def to_dict(self) -> dict:
        return {"u": str(self.u), "v": str(self.v), "sign": self.sign}


@dataclass(frozen=True)
class StateEntry:
    """Certificate that ``<psi|sigma_u|psi> = sign``."""

    u: PauliLabel
    sign: int

    def to_dict(self) -> dict:
        return {"u": str(self.u), "sign": self.sign}


@dataclass(frozen=True)
class NullityReport:
    n: int
    s_value: int
    nullity: int
    backend: Backend
    entries: tuple = ()
    kind: str = "unitary"
    elapsed_ms: float | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        s = self.s_value
        if s < 1 or s & (s - 1):
            raise InvariantViolation(f"s = {s} is not a power of two")
        top = 4**self.n if self.kind == "unitary" else 2**self.n
        if s > top:
            raise InvariantViolation(f"s = {s} exceeds {top}")
        full = 2 * self.n if self.kind == "unitary" else self.n
        if self.nullity != full - (s.bit_length() - 1):
            raise InvariantViolation("nullity inconsistent with s")

    @property
    def labels(self) -> list[PauliLabel]:
        return [e.u for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "s": self.s_value,
            "nullity": self.nullity,
            "backend": str(self.backend),
            "kind": self.kind,
            "entries": [e.to_dict() for e in self.entries],
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: dict) -> NullityReport:
        kind = data.get("kind", "unitary")
        if kind == "unitary":
            entries = tuple(
                TransferEntry(PauliLabel.from_string(e["u"]), PauliLabel.from_string(e["v"]), int(e["sign"]))
                for e in data["entries"]
            )
        else:
            entries = tuple(StateEntry(PauliLabel.from_string(e["u"]), int(e["sign"])) for e in data["entries"])
        return cls(
            n=int(data["n"]),
            s_value=int(data["s"]),
            nullity=int(data["nullity"]),
            backend=Backend(data["backend"]),
            entries=entries,
            kind=kind,
            elapsed_ms=data.get("elapsed_ms"),
        )

    @classmethod
    def from_json(cls, text: str) -> NullityReport:
        return cls.from_dict(json.loads(text))


# ---------------------------------------------------------------------------
# label tables


def _parity(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(a)
    for b in range(n):
        out ^= (a >> b) & 1
    return out


def _popcount_arr(a: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros_like(a)
    for b in range(n):
        out += (a >> b) & 1
    return out


def _sign_matrix(n: int) -> np.ndarray:
    """H[c, z] = (-1)^{z.c}."""
    idx = np.arange(2**n)
    return (1 - 2 * _parity(idx[:, None] & idx[None, :], n)).astype(np.int64)


def _label_arrays(labels: Sequence[PauliLabel]) -> tuple[np.ndarray, np.ndarray]:
    xs = np.array([lab.x_mask for lab in labels], dtype=np.int64)
    zs = np.array([lab.z_mask for lab in labels], dtype=np.int64)
    return xs, zs


# ---------------------------------------------------------------------------
# conjugation of Paulis by U


def _conjugates(U: Matrix, xs: np.ndarray, zs: np.ndarray):
    """Stack of U sigma_v U^dag for the given labels (data, shared exponent)."""
    n, dim = U.n, U.dim
    c = np.arange(dim)
    cols = c[None, :] ^ xs[:, None]
    i_exp = (_popcount_arr(xs & zs, n)[:, None] + 2 * _parity(zs[:, None] & c[None, :], n)) % 4
    if isinstance(U.data, ExactArray):
        p = U.data.coeffs[:, c[None, :, None], cols[:, None, :]]  # (4, V, N, N)
        p = _times_i_power(p, i_exp[:, None, :])
        udag = U.data.dagger()
        w = _omega_matmul(p, udag.coeffs, dim)
        return w, U.data.k + udag.k
    a = np.moveaxis(U.data[:, cols], 1, 0) * (1j**i_exp)[:, None, :]
    return a @ U.data.conj().T, 0


def _detect(w, k: int, n: int):
    """Vectorized signed-Pauli test on a stack of matrices.

    Returns (valid, x_u, z_u, sign) arrays over the stack.
    """
    dim = 2**n
    c = np.arange(dim)
    single = [1 << j for j in range(n)]
    if isinstance(w, np.ndarray) and w.dtype != object and np.iscomplexobj(w):
        nb = w.shape[0]
        xu = np.argmax(np.abs(w[:, 0, :]), axis=1)
        d = w[np.arange(nb)[:, None], c[None, :] ^ xu[:, None], c[None, :]]
        zu = np.zeros(nb, dtype=np.int64)
        for j, col in enumerate(single):
            zu |= (np.real(d[:, col] * np.conj(d[:, 0])) < 0).astype(np.int64) << j
        m = _popcount_arr(xu & zu, n)
        lam = d[:, 0] / (1j**m)
        sign = np.where(lam.real >= 0, 1, -1)
        expected = sign[:, None] * (1j**m)[:, None] * (1 - 2 * _parity(zu[:, None] & c[None, :], n))
        resid = w.copy()
        resid[np.arange(nb)[:, None], c[None, :] ^ xu[:, None], c[None, :]] -= expected
        err = np.max(np.abs(resid).reshape(nb, -1), axis=1)
        return err <= FLOAT_PM1_TOL, xu, zu, sign
    # exact: w are coefficient stacks (4, B, N, N) with denominator sqrt2^k, k even.
    # i^e is w^{2e}: component 2(e mod 2) with sign (-1)^{e div 2}.
    if k % 2:
        raise InvariantViolation("conjugated Pauli has an odd denominator exponent")
    scale = 2 ** (k // 2)
    nb = w.shape[1]
    xu = np.argmax(np.any(w[:, :, 0, :] != 0, axis=0), axis=1)
    b = np.arange(nb)[:, None]
    rows = c[None, :] ^ xu[:, None]
    d = w[:, b, rows, c[None, :]]  # (4, B, N)
    zu = np.zeros(nb, dtype=np.int64)
    for j, col in enumerate(single):
        zu |= np.all(d[:, :, col] == -d[:, :, 0], axis=0).astype(np.int64) << j
    m = _popcount_arr(xu & zu, n) % 4
    lead = d[2 * (m % 2), np.arange(nb), 0]
    sign = np.where(lead > 0, 1, -1) * (1 - 2 * (m // 2))
    # the candidate sign * sigma_u, placed where it should sit; everything must match
    e = (m[:, None] + 2 * _parity(zu[:, None] & c[None, :], n)) % 4
    expected = np.zeros_like(w)
    expected[2 * (e % 2), b, rows, c[None, :]] = (sign[:, None] * (1 - 2 * (e // 2))) * scale
    valid = ~np.any((w != expected).reshape(4, nb, -1).any(axis=0), axis=1)
    return valid, xu, zu, sign


def _scan(U: Matrix, labels: Sequence[PauliLabel]) -> list[TransferEntry]:
    xs, zs = _label_arrays(labels)
    w, k = _conjugates(U, xs, zs)
    valid, xu, zu, sign = _detect(w, k, U.n)
    return [
        TransferEntry(PauliLabel(U.n, int(xu[i]), int(zu[i])), labels[i], int(sign[i]))
        for i in np.flatnonzero(valid)
    ]


def _check_unitary_input(U: Matrix) -> None:
    if not isinstance(U, Matrix):
        raise TypeError("expected a Matrix")


def conjugate_and_detect(U: Matrix, v: PauliLabel) -> tuple[PauliLabel, int] | None:
    """(u, sign) with ``U sigma_v U^dag = sign * sigma_u``, or None."""
    if v.n != U.n:
        raise QubitMismatchError(f"label has {v.n} qubits, matrix has {U.n}")
    hits = _scan(U, [v])
    return (hits[0].u, hits[0].sign) if hits else None


@lru_cache(maxsize=None)
def _ordered_labels(n: int) -> tuple[PauliLabel, ...]:
    return tuple(PauliLabel.from_vector(n, vec) for vec in range(4**n))


@lru_cache(maxsize=None)
def _index_labels(n: int) -> tuple[PauliLabel, ...]:
    return tuple(all_labels(n))


@lru_cache(maxsize=None)
def _trace_tables(n: int) -> tuple[np.ndarray, ...]:
    """Per-width constants of the trace step: c, gather, sign matrix, i-phases."""
    c = np.arange(2**n)
    tables = (c, c[:, None] ^ c[None, :], _sign_matrix(n), _popcount_arr(c[:, None] & c[None, :], n))
    for t in tables:
        t.flags.writeable = False
    return tables


def compute_s_unitary(U: Matrix, threads: int = 1) -> NullityReport:
    """Scan all 4^n Paulis; entries are sorted by the bit encoding of v."""
    _check_unitary_input(U)
    start = time.perf_counter()
    labels = _ordered_labels(U.n)
    chunks = [labels[i : i + _CHUNK] for i in range(0, len(labels), _CHUNK)]
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda ch: _scan(U, ch), chunks))
    else:
        parts = [_scan(U, ch) for ch in chunks]
    entries = tuple(e for part in parts for e in part)
    s = len(entries)
    us = [e.u for e in entries]
    group = LabelSubgroup.from_labels(U.n, us)
    if len(set(us)) != s or group.size != s:
        raise InvariantViolation(f"detected u-labels do not form a subgroup of size {s}")
    elapsed = (time.perf_counter() - start) * 1e3
    return NullityReport(
        n=U.n,
        s_value=s,
        nullity=2 * U.n - (s.bit_length() - 1),
        backend=U.backend,
        entries=entries,
        kind="unitary",
        elapsed_ms=elapsed,
    )


def unitary_nullity(U: Matrix, threads: int = 1) -> int:
    return compute_s_unitary(U, threads).nullity


def subgroup_P_U(U: Matrix) -> LabelSubgroup:
    """U P_n U^dag intersected with P_n."""
    return LabelSubgroup.from_labels(U.n, compute_s_unitary(U).labels)


def is_clifford(U: Matrix) -> bool:
    return compute_s_unitary(U).s_value == 4**U.n


# ---------------------------------------------------------------------------
# Pauli functions


def unitary_pauli_function(U: Matrix, u: PauliLabel, v: PauliLabel) -> float:
    """tr(sigma_u U sigma_v U^dag) / 2^n."""
    if u.n != U.n or v.n != U.n:
        raise QubitMismatchError("label and matrix qubit counts differ")
    val = pauli_transfer_matrix(U, rows=[u], cols=[v])[0, 0]
    return float(to_float(val).real) if isinstance(val, ExactScalar) else float(val)


def pauli_transfer_matrix(U: Matrix, rows: Sequence[PauliLabel] | None = None,
                          cols: Sequence[PauliLabel] | None = None) -> np.ndarray:
    """Transfer matrix in label-index order (I, X, Y, Z digits, qubit 0 first).

    Float backend returns real floats; exact backend returns an object array of
    :class:`ExactScalar`.
    """
    n, dim = U.n, U.dim
    rows = _index_labels(n) if rows is None else list(rows)
    cols = _index_labels(n) if cols is None else list(cols)
    xs, zs = _label_arrays(cols)
    w, k = _conjugates(U, xs, zs)
    # gather[x, c] = c ^ x
    # tr(sigma_u W) = i^{|x&z|} sum_c (-1)^{z.c} W[c, c ^ x], for every (x, z) at once
    c, gather, hs, phase = _trace_tables(n)
    rx, rz = _label_arrays(rows)
    if isinstance(U.data, ExactArray):
        g = w[:, :, c[None, :], gather]  # (4, V, x, c)
        tot = _times_i_power(g @ hs, phase)  # (4, V, x, z)
        picked = np.moveaxis(tot[:, :, rx, rz], 1, 2).tolist()  # (4, R, V)
        a, b, cc, d = picked
        out = np.empty((len(rows), len(cols)), dtype=object)
        for r in range(len(rows)):
            for j in range(len(cols)):
                # real iff the w^2 part vanishes and the w, w^3 parts cancel
                if cc[r][j] or b[r][j] != -d[r][j]:
                    raise InvariantViolation("transfer matrix entry is not real")
                out[r, j] = ExactScalar(a[r][j], b[r][j], 0, d[r][j], k + 2 * n).canonical()
        return out
    g = w[:, c[None, :], gather]
    tot = ((g @ hs) * (1j**phase))[:, rx, rz].T / dim  # (R, V)
    if np.max(np.abs(tot.imag), initial=0.0) > IMAG_TOL:
        raise InvariantViolation("transfer matrix entry has a non-negligible imaginary part")
    return np.ascontiguousarray(tot.real)


def _state_expectations_float(psi: np.ndarray, n: int) -> np.ndarray:
    """<psi|sigma_{x,z}|psi> for a batch of states; returns (B, 2^n x, 2^n z)."""
    dim = 2**n
    c = np.arange(dim)
    hs = _sign_matrix(n).astype(float)
    out = np.empty((psi.shape[0], dim, dim), dtype=complex)
    for x in range(dim):
        wv = np.conj(psi[:, c ^ x]) * psi
        m = _popcount_arr(x & c, n)  # c plays z here
        out[:, x, :] = (wv @ hs) * (1j**m)[None, :]
    return out


def _state_pm1_exact(amps: ExactArray, n: int):
    """(x, z, sign) triples where the exact expectation is +-1."""
    dim = 2**n
    c = np.arange(dim)
    hs = _sign_matrix(n)
    p = amps.coeffs
    pc = amps.conj().coeffs
    scale = 2**amps.k  # conj(psi) psi carries sqrt2^{2k}
    hits = []
    for x in range(dim):
        wv = _omega_product(pc[:, c ^ x], p, lambda a, b: a * b)
        wv = _promote(wv, _maxabs(wv) * dim)
        tot = wv @ hs
        m = _popcount_arr(x & c, n)
        tot = _times_i_power(tot, m)
        for z in range(dim):
            re = tot[0, z]
            if tot[1, z] == 0 and tot[2, z] == 0 and tot[3, z] == 0 and abs(re) == scale:
                hits.append((x, z, 1 if re > 0 else -1))
    return hits


def _require_normalized(psi: StateVector) -> None:
    if psi.backend == Backend.EXACT:
        if psi.norm_squared() != 1:
            raise ValueError("state is not normalized")
    elif abs(psi.norm_squared() - 1) > 1e-10:
        raise ValueError("state is not normalized")


def state_pauli_function(psi: StateVector, u: PauliLabel) -> float:
    """<psi|sigma_u|psi>."""
    if u.n != psi.n:
        raise QubitMismatchError(f"label has {u.n} qubits, state has {psi.n}")
    amps = psi.to_numpy()
    sig = to_dense(u).data
    val = np.vdot(amps, sig @ amps)
    if abs(val.imag) > IMAG_TOL:
        raise InvariantViolation(f"Pauli expectation has imaginary part {val.imag}")
    return float(val.real)


def _state_entries(psi: StateVector) -> list[StateEntry]:
    n = psi.n
    if psi.backend == Backend.EXACT:
        hits = _state_pm1_exact(psi.amplitudes, n)
    else:
        vals = _state_expectations_float(psi.to_numpy()[None, :], n)[0]
        if np.max(np.abs(vals.imag)) > IMAG_TOL:
            raise InvariantViolation("Pauli expectation has a non-negligible imaginary part")
        re = vals.real
        xs, zs = np.nonzero(np.abs(np.abs(re) - 1) <= FLOAT_PM1_TOL)
        hits = [(int(x), int(z), 1 if re[x, z] > 0 else -1) for x, z in zip(xs, zs)]
    entries = [StateEntry(PauliLabel(n, x, z), s) for x, z, s in hits]
    return sorted(entries, key=lambda e: e.u.vector)


def compute_s_state(psi: StateVector) -> NullityReport:
    _require_normalized(psi)
    start = time.perf_counter()
    entries = tuple(_state_entries(psi))
    s = len(entries)
    if s == 0 or LabelSubgroup.from_labels(psi.n, [e.u for e in entries]).size != s:
        raise InvariantViolation(f"+-1 labels of the state do not form a subgroup (s = {s})")
    return NullityReport(
        n=psi.n,
        s_value=s,
        nullity=psi.n - (s.bit_length() - 1),
        backend=psi.backend,
        entries=entries,
        kind="state",
        elapsed_ms=(time.perf_counter() - start) * 1e3,
    )


def state_nullity(psi: StateVector) -> int:
    return compute_s_state(psi).nullity


def state_nullities_batch(states: np.ndarray, n: int, chunk: int = 2048) -> np.ndarray:
    """Float state nullity for each row of ``states`` (shape B x 2^n)."""
    out = np.empty(states.shape[0], dtype=np.int64)
    for i in range(0, states.shape[0], chunk):
        vals = _state_expectations_float(states[i : i + chunk], n)
        counts = np.sum(np.abs(np.abs(vals.real) - 1) <= FLOAT_PM1_TOL, axis=(1, 2))
        bad = counts & (counts - 1)
        if np.any(counts < 1) or np.any(bad):
            raise InvariantViolation("state s-value is not a power of two")
        out[i : i + chunk] = n - (np.log2(counts).round().astype(np.int64))
    return out


def stab_group(psi: StateVector) -> list[PhasedPauli]:
    """All Paulis P with P|psi> = |psi>; only real phases can occur."""
    _require_normalized(psi)
    return [PhasedPauli(e.u, 0 if e.sign > 0 else 2) for e in _state_entries(psi)]


# ---------------------------------------------------------------------------
# lower bounds


@dataclass(frozen=True)
class TCountBound:
    bound: int
    t_gates_used: int
    report: NullityReport

    def to_dict(self) -> dict:
        return {"bound": self.bound, "t_gates_used": self.t_gates_used, "report": self.report.to_dict()}


def t_count_lower_bound(circuit: Circuit, backend: Backend | str = "auto", threads: int = 1,
                        max_qubits: int | None = None) -> TCountBound:
    """v(U) for the circuit's unitary, alongside the circuit's own T count."""
    U = build_unitary(circuit, backend, max_qubits=max_qubits)
    report = compute_s_unitary(U, threads)
    used = count_t_gates(circuit)
    if circuit.is_clifford_t() and report.nullity > used:
        raise InvariantViolation(
            f"lower bound {report.nullity} exceeds the {used} T gates of a Clifford+T circuit"
        )
    return TCountBound(report.nullity, used, report)


def gate_synthesis_lower_bound(U: Matrix, W: Matrix) -> int:
    """ceil(v(U) / v(W)): copies of W needed to build U with free Cliffords."""
    vw = unitary_nullity(W)
    if vw == 0:
        raise ValueError("W is Clifford (zero nullity); it gives no finite bound")
    return math.ceil(unitary_nullity(U) / vw)
