"""Circuit IR, text format, and unitary construction on either backend.

Gate lists are temporal: the first gate listed acts first, so a circuit
``g1, g2, ..., gl`` builds the matrix ``Gl ... G2 G1``.  Qubit 0 is the most
significant bit of basis-state indices.

Text format::

    qubits 3          # header, required, n >= 1
    h 0
    cnot 0 1
    ccz 0 1 2
    ckz 2 0 1 2       # ckz <control count> <qubits...>
    diag 1,0 1,0 ...  # 2^n phases (re,im) on the whole register
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .backend import Backend, ExactArray, Matrix, StateVector, _omega_product
from .errors import BackendError, CircuitParseError, ResourceLimitError

__all__ = [
    "Gate",
    "Circuit",
    "MAX_UNITARY_QUBITS",
    "parse",
    "serialize",
    "build_unitary",
    "apply_circuit",
    "embed",
    "count_t_gates",
    "special_family",
    "diag_from_phases",
    "exp_ix_gate",
    "ckz",
    "resolve_backend",
]

MAX_UNITARY_QUBITS = 7
PHASE_ATOL = 1e-12

ONE_QUBIT = ("i", "x", "y", "z", "h", "s", "sdg", "t", "tdg")
TWO_QUBIT = ("cnot", "cz", "swap")
T_KINDS = ("t", "tdg")
CLIFFORD_KINDS = ONE_QUBIT[:7] + TWO_QUBIT

_INVERSE = {"s": "sdg", "sdg": "s", "t": "tdg", "tdg": "t"}

# omega exponents of the nonzero entries of fixed gates, as {(row, col): exp}
_OMEGA_TABLE: dict[str, dict[tuple[int, int], int]] = {
    "i": {(0, 0): 0, (1, 1): 0},
    "x": {(0, 1): 0, (1, 0): 0},
    "y": {(0, 1): 6, (1, 0): 2},
    "z": {(0, 0): 0, (1, 1): 4},
    "s": {(0, 0): 0, (1, 1): 2},
    "sdg": {(0, 0): 0, (1, 1): 6},
    "t": {(0, 0): 0, (1, 1): 1},
    "tdg": {(0, 0): 0, (1, 1): 7},
    "cnot": {(0, 0): 0, (1, 1): 0, (2, 3): 0, (3, 2): 0},
    "cz": {(0, 0): 0, (1, 1): 0, (2, 2): 0, (3, 3): 4},
    "swap": {(0, 0): 0, (1, 2): 0, (2, 1): 0, (3, 3): 0},
}
_OMEGA = cmath.exp(1j * math.pi / 4)


@dataclass(frozen=True, eq=False)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    phases: tuple[complex, ...] | None = None
    matrix: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"repeated qubit index in {self.kind} {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError("qubit indices must be non-negative")
        arity = self.arity_required()
        if arity is not None and len(self.qubits) != arity:
            raise ValueError(f"{self.kind} acts on {arity} qubit(s), got {len(self.qubits)}")
        if self.kind == "diag":
            if self.phases is None or len(self.phases) != 2 ** len(self.qubits):
                raise ValueError("diag needs 2^m phases for m qubits")
            for ph in self.phases:
                if abs(abs(ph) - 1) > PHASE_ATOL:
                    raise ValueError(f"diag phase {ph} is not unit modulus")
        if self.kind == "custom":
            m = self.matrix
            dim = 2 ** len(self.qubits)
            if m is None or m.shape != (dim, dim):
                raise ValueError("custom gate needs a square matrix matching its qubits")
            if np.max(np.abs(m.conj().T @ m - np.eye(dim))) > 1e-10:
                raise ValueError("custom gate matrix is not unitary")
        if self.kind == "ckz" and not self.qubits:
            raise ValueError("ckz needs at least one qubit")

    def arity_required(self) -> int | None:
        if self.kind in ONE_QUBIT:
            return 1
        if self.kind in TWO_QUBIT:
            return 2
        if self.kind in ("ckz", "diag", "custom"):
            return None
        raise ValueError(f"unknown gate kind {self.kind!r}")

    @property
    def is_t(self) -> bool:
        return self.kind in T_KINDS

    def is_exact_representable(self) -> bool:
        if self.kind == "custom":
            return False
        if self.kind == "diag":
            return all(_omega_exponent(ph) is not None for ph in self.phases)
        return True

    def inverse(self) -> Gate:
        if self.kind == "diag":
            return Gate("diag", self.qubits, tuple(ph.conjugate() for ph in self.phases))
        if self.kind == "custom":
            return Gate("custom", self.qubits, matrix=self.matrix.conj().T)
        return Gate(_INVERSE.get(self.kind, self.kind), self.qubits)

    def local_float(self) -> np.ndarray:
        m = len(self.qubits)
        if self.kind == "custom":
            return np.asarray(self.matrix, dtype=complex)
        if self.kind == "diag":
            return np.diag(np.asarray(self.phases, dtype=complex))
        if self.kind == "h":
            return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
        if self.kind == "ckz":
            d = np.ones(2**m, dtype=complex)
            d[-1] = -1
            return np.diag(d)
        out = np.zeros((2**m, 2**m), dtype=complex)
        for (r, c), e in _OMEGA_TABLE[self.kind].items():
            out[r, c] = _OMEGA**e
        return out

    def local_exact(self) -> ExactArray:
        m = len(self.qubits)
        dim = 2**m
        if self.kind == "custom":
            raise BackendError("custom gates are only available on the float backend")
        if self.kind == "h":
            return ExactArray.from_integers(np.array([[1, 1], [1, -1]]), k=1)
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        if self.kind in ("ckz", "diag"):
            if self.kind == "ckz":
                diag = [0] * (dim - 1) + [4]
            else:
                diag = [_omega_exponent(ph) for ph in self.phases]
                if any(e is None for e in diag):
                    raise BackendError("diag phases off the 8th-root grid need the float backend")
            idx = np.arange(dim)
            exps[idx, idx] = diag
            mask[idx, idx] = True
        else:
            for (r, c), e in _OMEGA_TABLE[self.kind].items():
                exps[r, c] = e
                mask[r, c] = True
        return ExactArray.from_omega_exponents(exps, mask)

    def to_text(self) -> str:
        q = " ".join(str(x) for x in self.qubits)
        if self.kind == "ckz":
            if len(self.qubits) == 3:
                return f"ccz {q}"
            return f"ckz {len(self.qubits) - 1} {q}"
        if self.kind == "diag":
            return "diag " + " ".join(f"{ph.real!r},{ph.imag!r}" for ph in self.phases)
        if self.kind == "custom":
            raise ValueError("custom gates have no text form")
        return f"{self.kind} {q}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Gate):
            return NotImplemented
        if (self.kind, self.qubits, self.phases) != (other.kind, other.qubits, other.phases):
            return False
        if self.matrix is None or other.matrix is None:
            return self.matrix is other.matrix
        return bool(np.array_equal(self.matrix, other.matrix))

    __hash__ = None  # type: ignore[assignment]


def _omega_exponent(phase: complex) -> int | None:
    j = round(cmath.phase(phase) / (math.pi / 4)) % 8
    return j if abs(phase - _OMEGA**j) <= PHASE_ATOL else None


def ckz(qubits: Sequence[int]) -> Gate:
    """Multi-controlled Z on ``qubits`` (1 qubit: Z, 2 qubits: CZ)."""
    qubits = tuple(qubits)
    if len(qubits) == 1:
        return Gate("z", qubits)
    if len(qubits) == 2:
        return Gate("cz", qubits)
    return Gate("ckz", qubits)


def diag_from_phases(phases: Sequence[complex], qubits: Sequence[int] | None = None) -> Gate:
    phases = tuple(complex(p) for p in phases)
    m = int(round(math.log2(len(phases)))) if phases else -1
    if m < 0 or 2**m != len(phases):
        raise ValueError("number of phases must be a power of two")
    if qubits is None:
        qubits = range(m)
    return Gate("diag", tuple(qubits), phases)


def exp_ix_gate(qubit: int = 0, theta: float = 1.0) -> Gate:
    """exp(i theta X) = cos(theta) I + i sin(theta) X."""
    c, s = math.cos(theta), math.sin(theta)
    return Gate("custom", (qubit,), matrix=np.array([[c, 1j * s], [1j * s, c]]))


@dataclass(frozen=True, eq=False)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    name: str | None = None

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("circuit width must be at least 1")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if any(q >= self.width for q in g.qubits):
                raise ValueError(f"gate {g.kind} {g.qubits} exceeds width {self.width}")

    def __add__(self, other: Circuit) -> Circuit:
        if other.width != self.width:
            raise ValueError("cannot concatenate circuits of different width")
        return Circuit(self.width, self.gates + other.gates)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        return self.width == other.width and self.gates == other.gates

    __hash__ = None  # type: ignore[assignment]

    def __len__(self) -> int:
        return len(self.gates)

    def inverse(self) -> Circuit:
        return Circuit(self.width, tuple(g.inverse() for g in reversed(self.gates)), self.name)

    def is_clifford_t(self) -> bool:
        return all(g.kind in CLIFFORD_KINDS or g.kind in T_KINDS for g in self.gates)

    def is_exact_representable(self) -> bool:
        return all(g.is_exact_representable() for g in self.gates)


def count_t_gates(circuit: Circuit) -> int:
    """Number of T and T-dagger gates in this particular decomposition."""
    return sum(1 for g in circuit.gates if g.is_t)


def special_family(n: int) -> Circuit:
    """C^{n-1}Z, H on every qubit, C^{n-1}Z."""
    if n < 1:
        raise ValueError("n must be at least 1")
    qs = tuple(range(n))
    gates = [ckz(qs)] + [Gate("h", (q,)) for q in qs] + [ckz(qs)]
    return Circuit(n, tuple(gates), name=f"special_family({n})")


# ---------------------------------------------------------------------------
# text format


def serialize(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.width}"]
    if circuit.name:
        lines.insert(0, f"# {circuit.name}")
    lines += [g.to_text() for g in circuit.gates]
    return "\n".join(lines) + "\n"


def _tokens(line: str) -> list[tuple[str, int]]:
    out = []
    col = 0
    for part in line.split():
        col = line.index(part, col)
        out.append((part, col + 1))
        col += len(part)
    return out


def _parse_int(tok: str, col: int, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise CircuitParseError(f"expected integer {what}, got {tok!r}", lineno, col) from None


def parse(text: str, name: str | None = None) -> Circuit:
    width: int | None = None
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        toks = _tokens(line)
        if not toks:
            continue
        head, hcol = toks[0]
        head = head.lower()
        if width is None:
            if head != "qubits" or len(toks) != 2:
                raise CircuitParseError("missing 'qubits <n>' header", lineno, hcol)
            width = _parse_int(toks[1][0], toks[1][1], lineno, "qubit count")
            if width < 1:
                raise CircuitParseError("qubit count must be at least 1", lineno, toks[1][1])
            continue
        args = toks[1:]
        if head == "qubits":
            raise CircuitParseError("duplicate header", lineno, hcol)
        if head == "diag":
            phases = []
            for tok, col in args:
                try:
                    re_s, im_s = tok.split(",")
                    phases.append(complex(float(re_s), float(im_s)))
                except ValueError:
                    raise CircuitParseError(f"bad phase {tok!r}, expected re,im", lineno, col) from None
            if len(phases) != 2**width:
                raise CircuitParseError(f"diag needs {2**width} phases, got {len(phases)}", lineno, hcol)
            try:
                gates.append(diag_from_phases(phases, range(width)))
            except ValueError as exc:
                raise CircuitParseError(str(exc), lineno, hcol) from None
            continue
        if head == "ckz":
            if not args:
                raise CircuitParseError("ckz needs a control count", lineno, hcol)
            c = _parse_int(args[0][0], args[0][1], lineno, "control count")
            args = args[1:]
            if c < 0 or len(args) != c + 1:
                raise CircuitParseError(f"ckz {c} needs {c + 1} qubits, got {len(args)}", lineno, hcol)
        elif head == "ccz":
            if len(args) != 3:
                raise CircuitParseError(f"ccz needs 3 qubits, got {len(args)}", lineno, hcol)
        elif head in ONE_QUBIT or head in TWO_QUBIT:
            need = 1 if head in ONE_QUBIT else 2
            if len(args) != need:
                raise CircuitParseError(f"{head} needs {need} qubit(s), got {len(args)}", lineno, hcol)
        else:
            raise CircuitParseError(f"unknown gate {toks[0][0]!r}", lineno, hcol)
        qubits = []
        for tok, col in args:
            q = _parse_int(tok, col, lineno, "qubit index")
            if not 0 <= q < width:
                raise CircuitParseError(f"qubit index {q} out of range for width {width}", lineno, col)
            if q in qubits:
                raise CircuitParseError(f"repeated qubit index {q}", lineno, col)
            qubits.append(q)
        gates.append(ckz(qubits) if head in ("ckz", "ccz") else Gate(head, tuple(qubits)))
    if width is None:
        raise CircuitParseError("missing 'qubits <n>' header", 1, 1)
    return Circuit(width, tuple(gates), name)


# ---------------------------------------------------------------------------
# unitary construction


def resolve_backend(circuit: Circuit, backend: Backend | str = "auto") -> Backend:
    """``auto`` picks exact unless a gate has no exact representation."""
    if backend == "auto":
        return Backend.EXACT if circuit.is_exact_representable() else Backend.FLOAT
    backend = Backend(backend)
    if backend == Backend.EXACT and not circuit.is_exact_representable():
        raise BackendError("circuit contains gates with no exact representation")
    return backend


def _local_action(g: np.ndarray, qubits: Sequence[int], t: np.ndarray, n: int) -> np.ndarray:
    """Apply local matrix ``g`` to the leading n row-axes of ``t`` (shape 2^n x rest)."""
    m = len(qubits)
    rest = t.shape[1:]
    tt = t.reshape((2,) * n + rest)
    gg = g.reshape((2,) * (2 * m))
    out = np.tensordot(gg, tt, axes=(list(range(m, 2 * m)), list(qubits)))
    out = np.moveaxis(out, list(range(m)), list(qubits))
    return out.reshape(t.shape)


def _apply_gate(gate: Gate, data, n: int):
    if isinstance(data, ExactArray):
        local = gate.local_exact()

        def op(gc, uc):
            return _local_action(gc, gate.qubits, uc, n)

        prod = _omega_product(local.coeffs, data.coeffs, op, inner=2 ** len(gate.qubits))
        return ExactArray(prod, local.k + data.k).canonical()
    return _local_action(gate.local_float(), gate.qubits, data, n)


def _check_width(n: int, max_qubits: int | None) -> None:
    cap = MAX_UNITARY_QUBITS if max_qubits is None else max_qubits
    if n > cap:
        raise ResourceLimitError(f"{n} qubits exceeds the unitary cap of {cap} (override with max_qubits)")


def build_unitary(circuit: Circuit, backend: Backend | str = "auto", max_qubits: int | None = None) -> Matrix:
    backend = resolve_backend(circuit, backend)
    n = circuit.width
    _check_width(n, max_qubits)
    dim = 2**n
    data = ExactArray.identity(dim) if backend == Backend.EXACT else np.eye(dim, dtype=complex)
    for g in circuit.gates:
        data = _apply_gate(g, data, n)
    return Matrix(n, data)


def embed(gate: Gate, n: int, backend: Backend | str = Backend.FLOAT) -> Matrix:
    """Full 2^n x 2^n matrix of a single gate."""
    return build_unitary(Circuit(n, (gate,)), backend)


def apply_circuit(circuit: Circuit, state: StateVector) -> StateVector:
    if state.n != circuit.width:
        raise ValueError(f"state has {state.n} qubits, circuit has {circuit.width}")
    amps = state.amplitudes
    if isinstance(amps, ExactArray):
        data = amps.reshape(amps.shape[0], 1)
        if not circuit.is_exact_representable():
            raise BackendError("circuit needs the float backend")
    else:
        data = amps.reshape(-1, 1)
    for g in circuit.gates:
        data = _apply_gate(g, data, circuit.width)
    return StateVector(state.n, data.reshape(-1))


def circuit_from_gates(width: int, gates: Iterable[Gate], name: str | None = None) -> Circuit:
    return Circuit(width, tuple(gates), name)
