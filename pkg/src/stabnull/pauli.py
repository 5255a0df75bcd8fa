"""Quotient and full Pauli groups as bit masks, plus GF(2) subgroup machinery.

A label on ``n`` qubits is a pair of n-bit masks ``(x_mask, z_mask)``.  Qubit 0
sits in the most significant bit, matching basis-state indices, so label
``"XZI"`` on 3 qubits has ``x_mask = 0b100`` and ``z_mask = 0b010``.  Per
qubit, I=(0,0), X=(1,0), Y=(1,1), Z=(0,1); the dense matrix of a label is the
tensor product of the Hermitian Pauli matrices, i.e. ``i^{|x&z|} X^x Z^z``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Iterator, Sequence

import numpy as np

from .backend import MAX_DENSE_QUBITS, Backend, ExactArray, Matrix
from .errors import QubitMismatchError, ResourceLimitError

__all__ = [
    "PauliLabel",
    "PhasedPauli",
    "LabelSubgroup",
    "compose",
    "phased_compose",
    "to_dense",
    "span",
    "intersect",
    "product_set_size",
    "all_labels",
    "ENUMERATION_CAP",
]

ENUMERATION_CAP = 6

_CHARS = "IXYZ"
_CODES = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_PHASE_PREFIX = {0: "", 1: "i", 2: "-", 3: "-i"}


def _popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True, order=True)
class PauliLabel:
    """Element of the Pauli group modulo phases."""

    n: int
    x_mask: int = 0
    z_mask: int = 0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("a Pauli label needs at least one qubit")
        limit = 1 << self.n
        if not (0 <= self.x_mask < limit and 0 <= self.z_mask < limit):
            raise ValueError(f"masks must be {self.n}-bit unsigned integers")

    @classmethod
    def identity(cls, n: int) -> PauliLabel:
        return cls(n, 0, 0)

    @classmethod
    def from_string(cls, text: str) -> PauliLabel:
        text = text.strip().upper()
        if not text or any(ch not in _CODES for ch in text):
            raise ValueError(f"invalid Pauli label {text!r}")
        x = z = 0
        for ch in text:
            bx, bz = _CODES[ch]
            x = (x << 1) | bx
            z = (z << 1) | bz
        return cls(len(text), x, z)

    @classmethod
    def from_digits(cls, digits: Sequence[int]) -> PauliLabel:
        """From a string over {0,1,2,3} with sigma_0..sigma_3 = I, X, Y, Z."""
        return cls.from_string("".join(_CHARS[d] for d in digits))

    @classmethod
    def from_index(cls, n: int, index: int) -> PauliLabel:
        """Inverse of :attr:`index` (base-4 digits, qubit 0 most significant)."""
        digits = []
        for _ in range(n):
            digits.append(index % 4)
            index //= 4
        return cls.from_digits(digits[::-1])

    @classmethod
    def from_vector(cls, n: int, vec: int) -> PauliLabel:
        return cls(n, vec >> n, vec & ((1 << n) - 1))

    @property
    def vector(self) -> int:
        """2n-bit encoding ``x_mask << n | z_mask``."""
        return (self.x_mask << self.n) | self.z_mask

    @property
    def digits(self) -> tuple[int, ...]:
        return tuple(_CHARS.index(ch) for ch in str(self))

    @property
    def index(self) -> int:
        return reduce(lambda acc, d: 4 * acc + d, self.digits, 0)

    @property
    def weight(self) -> int:
        return _popcount(self.x_mask | self.z_mask)

    @property
    def y_count(self) -> int:
        return _popcount(self.x_mask & self.z_mask)

    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    def commutes_with(self, other: PauliLabel) -> bool:
        _check_n(self, other)
        return (_popcount(self.x_mask & other.z_mask) + _popcount(self.z_mask & other.x_mask)) % 2 == 0

    def __mul__(self, other: PauliLabel) -> PauliLabel:
        return compose(self, other)

    def __str__(self) -> str:
        return "".join(
            _LETTERS[(self.x_mask >> bit) & 1, (self.z_mask >> bit) & 1]
            for bit in range(self.n - 1, -1, -1)
        )


_LETTERS = {code: ch for ch, code in _CODES.items()}


def _check_n(a: PauliLabel, b: PauliLabel) -> None:
    if a.n != b.n:
        raise QubitMismatchError(f"qubit count mismatch: {a.n} vs {b.n}")


def compose(a: PauliLabel, b: PauliLabel) -> PauliLabel:
    """Product modulo phases."""
    _check_n(a, b)
    return PauliLabel(a.n, a.x_mask ^ b.x_mask, a.z_mask ^ b.z_mask)


@dataclass(frozen=True)
class PhasedPauli:
    """``i**phase_exp`` times the dense matrix of ``label``."""

    label: PauliLabel
    phase_exp: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_string(cls, text: str) -> PhasedPauli:
        text = text.strip()
        for prefix, k in (("-i", 3), ("+i", 1), ("i", 1), ("-", 2), ("+", 0)):
            if text.startswith(prefix):
                return cls(PauliLabel.from_string(text[len(prefix):]), k)
        return cls(PauliLabel.from_string(text), 0)

    @property
    def n(self) -> int:
        return self.label.n

    def __mul__(self, other: PhasedPauli) -> PhasedPauli:
        return phased_compose(self, other)

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase_exp] + str(self.label)


def phased_compose(a: PhasedPauli, b: PhasedPauli) -> PhasedPauli:
    """Exact product in the full Pauli group."""
    la, lb = a.label, b.label
    _check_n(la, lb)
    x, z = la.x_mask ^ lb.x_mask, la.z_mask ^ lb.z_mask
    # sigma = i^{|x&z|} X^x Z^z and Z^za X^xb = (-1)^{za.xb} X^xb Z^za
    k = (
        a.phase_exp
        + b.phase_exp
        + la.y_count
        + lb.y_count
        + 2 * _popcount(la.z_mask & lb.x_mask)
        - _popcount(x & z)
    )
    return PhasedPauli(PauliLabel(la.n, x, z), k)


def _dense_parts(n: int, x_mask: int, z_mask: int):
    """Row index, column index and i-exponent of the nonzero entries."""
    cols = np.arange(1 << n)
    rows = cols ^ x_mask
    parity = np.zeros(1 << n, dtype=np.int64)
    zc = cols & z_mask
    for b in range(n):
        parity ^= (zc >> b) & 1
    return rows, cols, 2 * parity + _popcount(x_mask & z_mask)


def to_dense(p: PhasedPauli | PauliLabel, backend: Backend | str = Backend.FLOAT) -> Matrix:
    """Dense matrix of a (phased) Pauli on the chosen backend."""
    if isinstance(p, PauliLabel):
        p = PhasedPauli(p, 0)
    n = p.n
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the dense cap of {MAX_DENSE_QUBITS}")
    rows, cols, i_exp = _dense_parts(n, p.label.x_mask, p.label.z_mask)
    i_exp = (i_exp + p.phase_exp) % 4
    dim = 1 << n
    if Backend(backend) == Backend.EXACT:
        exps = np.zeros((dim, dim), dtype=np.int64)
        mask = np.zeros((dim, dim), dtype=bool)
        exps[rows, cols] = 2 * i_exp
        mask[rows, cols] = True
        return Matrix(n, ExactArray.from_omega_exponents(exps, mask))
    data = np.zeros((dim, dim), dtype=complex)
    data[rows, cols] = 1j**i_exp
    return Matrix(n, data)


def all_labels(n: int) -> Iterator[PauliLabel]:
    """All 4^n labels ordered by :attr:`PauliLabel.index`."""
    for i in range(4**n):
        yield PauliLabel.from_index(n, i)


# ---------------------------------------------------------------------------
# subgroups of the quotient group as GF(2) subspaces of 2n-bit vectors


def _reduce_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """Reduced row echelon basis, pivots on the highest set bit, sorted descending."""
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            # keep fully reduced: clear the new pivot from existing rows
            top = v.bit_length() - 1
            basis = [b ^ v if (b >> top) & 1 else b for b in basis]
            basis.append(v)
    return tuple(sorted(basis, reverse=True))


@dataclass(frozen=True)
class LabelSubgroup:
    """Subgroup of the quotient Pauli group given by a reduced GF(2) basis."""

    n: int
    basis: tuple[int, ...] = ()
    _elements: tuple[PauliLabel, ...] | None = field(default=None, compare=False, repr=False)

    @classmethod
    def from_labels(cls, n: int, labels: Iterable[PauliLabel]) -> LabelSubgroup:
        vecs = []
        for lab in labels:
            if lab.n != n:
                raise QubitMismatchError(f"qubit count mismatch: {lab.n} vs {n}")
            vecs.append(lab.vector)
        return cls(n, _reduce_basis(vecs))

    @classmethod
    def full(cls, n: int) -> LabelSubgroup:
        return cls(n, tuple(1 << b for b in range(2 * n - 1, -1, -1)))

    @classmethod
    def z_type(cls, n: int) -> LabelSubgroup:
        """{I,Z}^n."""
        return cls(n, tuple(1 << b for b in range(n - 1, -1, -1)))

    @classmethod
    def x_type(cls, n: int) -> LabelSubgroup:
        """{I,X}^n."""
        return cls(n, tuple(1 << (n + b) for b in range(n - 1, -1, -1)))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def size(self) -> int:
        return 1 << self.rank

    def __len__(self) -> int:
        return self.size

    def generators(self) -> list[PauliLabel]:
        return [PauliLabel.from_vector(self.n, v) for v in self.basis]

    def reduce(self, vec: int) -> int:
        for b in self.basis:
            vec = min(vec, vec ^ b)
        return vec

    def __contains__(self, label: PauliLabel) -> bool:
        if label.n != self.n:
            return False
        return self.reduce(label.vector) == 0

    def elements(self) -> tuple[PauliLabel, ...]:
        if self._elements is not None:
            return self._elements
        if self.n > ENUMERATION_CAP:
            raise ResourceLimitError(f"enumeration is capped at n <= {ENUMERATION_CAP}")
        vecs = [0]
        for b in self.basis:
            vecs += [v ^ b for v in vecs]
        elems = tuple(sorted(PauliLabel.from_vector(self.n, v) for v in vecs))
        object.__setattr__(self, "_elements", elems)
        return elems

    def __iter__(self) -> Iterator[PauliLabel]:
        return iter(self.elements())

    def __eq__(self, other) -> bool:
        if not isinstance(other, LabelSubgroup):
            return NotImplemented
        return self.n == other.n and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.n, self.basis))

    def __str__(self) -> str:
        gens = ", ".join(str(g) for g in self.generators())
        return f"<{gens}>" if gens else "<>"


def span(gens: Sequence[PauliLabel], n: int | None = None) -> LabelSubgroup:
    """XOR closure of ``gens``; ``n`` is required only when ``gens`` is empty."""
    if n is None:
        if not gens:
            raise ValueError("span of no generators needs an explicit qubit count")
        n = gens[0].n
    return LabelSubgroup.from_labels(n, gens)


def intersect(a: LabelSubgroup, b: LabelSubgroup) -> LabelSubgroup:
    """Zassenhaus intersection over GF(2)."""
    if a.n != b.n:
        raise QubitMismatchError(f"qubit count mismatch: {a.n} vs {b.n}")
    width = 2 * a.n
    rows = [(v << width) | v for v in a.basis] + [v << width for v in b.basis]
    low = (1 << width) - 1
    inter = [r & low for r in _reduce_basis(rows) if r >> width == 0]
    return LabelSubgroup(a.n, _reduce_basis(inter))


def product(a: LabelSubgroup, b: LabelSubgroup) -> LabelSubgroup:
    """The subgroup {x*y : x in a, y in b}."""
    if a.n != b.n:
        raise QubitMismatchError(f"qubit count mismatch: {a.n} vs {b.n}")
    return LabelSubgroup(a.n, _reduce_basis(itertools.chain(a.basis, b.basis)))


def product_set_size(a: LabelSubgroup, b: LabelSubgroup) -> int:
    """|{x*y}| by explicit enumeration of both factors."""
    if a.n != b.n:
        raise QubitMismatchError(f"qubit count mismatch: {a.n} vs {b.n}")
    return len({compose(x, y) for x in a.elements() for y in b.elements()})
