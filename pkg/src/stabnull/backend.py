"""Dense matrices over two scalar backends.

``float``
    complex128 numpy arrays.
``exact``
    The ring Z[w]/sqrt(2)^k with w = exp(i*pi/4). Every Clifford+T matrix entry
    lives here, so equality tests are tolerance free.

An exact array stores integer coefficients ``(a, b, c, d)`` along a leading
axis of length 4 and one shared denominator exponent ``k``; entry ``j`` is
``(a_j + b_j w + c_j w^2 + d_j w^3) / sqrt(2)^k``.  Coefficients are int64
while they provably fit and fall back to Python ints (object dtype) otherwise.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np

from .errors import BackendError, QubitMismatchError, ResourceLimitError

__all__ = [
    "Backend",
    "ExactScalar",
    "ExactArray",
    "Matrix",
    "StateVector",
    "MAX_DENSE_QUBITS",
    "mat_mul",
    "tensor",
    "conj_transpose",
    "trace",
    "apply",
    "to_float",
    "identity",
    "basis_state",
    "is_unitary",
    "allclose",
]

MAX_DENSE_QUBITS = 14
FLOAT_ATOL = 1e-10

_INT_LIMIT = 2**62
_OMEGA = cmath.exp(1j * math.pi / 4)
_OMEGA_POWERS = np.array([_OMEGA**j for j in range(4)], dtype=complex)


class Backend(str, Enum):
    EXACT = "exact"
    FLOAT = "float"

    def __str__(self) -> str:
        return self.value


# ---------------------------------------------------------------------------
# coefficient-level helpers; ``p`` always has the 4 ring components on axis 0


def _maxabs(p: np.ndarray) -> int:
    if p.size == 0:
        return 0
    return int(np.max(np.abs(p)))


def _promote(p: np.ndarray, bound: int) -> np.ndarray:
    if p.dtype != object and bound >= _INT_LIMIT:
        return p.astype(object)
    return p


def _demote(p: np.ndarray) -> np.ndarray:
    if p.dtype == object and _maxabs(p) < _INT_LIMIT:
        return p.astype(np.int64)
    return p


def _omega_product(p: np.ndarray, q: np.ndarray, op, inner: int = 1) -> np.ndarray:
    """Combine components with ``op`` under w^4 = -1 (elementwise or matmul)."""
    bound = 4 * max(inner, 1) * _maxabs(p) * _maxabs(q)
    p = _promote(p, bound)
    q = _promote(q, bound)
    out: list = [None] * 4
    live_p = [i for i in range(4) if np.any(p[i])]
    live_q = [j for j in range(4) if np.any(q[j])]
    for i in live_p:
        for j in live_q:
            term = op(p[i], q[j])
            idx = i + j
            if idx >= 4:
                idx -= 4
                term = -term
            out[idx] = term if out[idx] is None else out[idx] + term
    if all(o is None for o in out):
        zero = op(p[0], q[0])
        return np.stack([zero * 0] * 4)
    template = next(o for o in out if o is not None)
    return np.stack([o if o is not None else np.zeros_like(template) for o in out])


_BLOCK_IDX = (np.arange(4)[None, :] - np.arange(4)[:, None]) % 4
_BLOCK_SIGN = np.where(np.arange(4)[:, None] > np.arange(4)[None, :], -1, 1)[:, :, None, None]


def _omega_matmul(p: np.ndarray, q: np.ndarray, inner: int) -> np.ndarray:
    """Ring matrix product as one real matmul.

    ``p`` is (4, ..., M, K) and ``q`` is (4, K, N). Output component ``t`` is
    sum over i + j = t (mod 4) of +-p[i] @ q[j], so p's components are laid
    side by side and multiplied by a 4x4 block matrix of signed q components.
    """
    bound = 4 * max(inner, 1) * _maxabs(p) * _maxabs(q)
    p = _promote(p, bound)
    q = _promote(q, bound)
    kdim, ndim = q.shape[-2], q.shape[-1]
    # blocks[i, t] = +-q[(t - i) mod 4], negated where i > t
    blocks = (q[_BLOCK_IDX] * _BLOCK_SIGN).transpose(0, 2, 1, 3).reshape(4 * kdim, 4 * ndim)
    out = np.concatenate(p, axis=-1) @ blocks  # (..., M, 4N)
    return np.moveaxis(out.reshape(out.shape[:-1] + (4, ndim)), -2, 0)


def _times_sqrt2(p: np.ndarray) -> np.ndarray:
    p = _promote(p, 2 * _maxabs(p) + 1)
    a, b, c, d = p
    return np.stack([b - d, a + c, b + d, c - a])


def _divisible_by_sqrt2(p: np.ndarray) -> bool:
    a, b, c, d = p
    return bool(np.all((a - c) % 2 == 0) and np.all((b - d) % 2 == 0))


def _div_sqrt2(p: np.ndarray) -> np.ndarray:
    a, b, c, d = p
    return np.stack([(b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2])


def _raise_k(p: np.ndarray, m: int) -> np.ndarray:
    if m % 2:
        p = _times_sqrt2(p)
        m -= 1
    if m:
        factor = 2 ** (m // 2)
        p = _promote(p, _maxabs(p) * factor) * factor
    return p


def _conj(p: np.ndarray) -> np.ndarray:
    a, b, c, d = p
    return np.stack([a, -d, -c, -b])


def _times_i(p: np.ndarray) -> np.ndarray:
    a, b, c, d = p
    return np.stack([-c, -d, a, b])


# i^e permutes (a, b, c, d) to (c, d, a, b) for odd e, with these signs
_I_SIGNS = np.array([[1, 1, 1, 1], [-1, -1, 1, 1], [-1, -1, -1, -1], [1, 1, -1, -1]], dtype=np.int64)
_I_SIGNS_T = np.ascontiguousarray(_I_SIGNS.T)
_SWAP = [2, 3, 0, 1]


def _times_i_power(p: np.ndarray, e) -> np.ndarray:
    """Multiply entrywise by i**e; ``e`` broadcasts against the entry shape."""
    e = np.asarray(e) % 4
    if e.ndim == 0:
        e = int(e)
        src = p[_SWAP] if e % 2 else p
        return src * _I_SIGNS[e].reshape((4,) + (1,) * (p.ndim - 1))
    pad = (1,) * (p.ndim - 1 - e.ndim)
    odd = (e % 2).astype(bool).reshape((1,) + pad + e.shape)
    signs = _I_SIGNS_T[:, e].reshape((4,) + pad + e.shape)
    return np.where(odd, p[_SWAP], p) * signs


def _to_complex(p: np.ndarray, k: int) -> np.ndarray:
    comps = [np.asarray(p[j], dtype=float) for j in range(4)]
    val = sum(comps[j] * _OMEGA_POWERS[j] for j in range(4))
    return np.asarray(val / math.sqrt(2) ** k, dtype=complex)


def _align(p: np.ndarray, kp: int, q: np.ndarray, kq: int):
    if kp < kq:
        return _raise_k(p, kq - kp), q, kq
    if kq < kp:
        return p, _raise_k(q, kp - kq), kp
    return p, q, kp


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ExactScalar:
    """``(a + b w + c w^2 + d w^3) / sqrt(2)^k`` with arbitrary-size integers."""

    a: int
    b: int = 0
    c: int = 0
    d: int = 0
    k: int = 0

    def __post_init__(self) -> None:
        if self.k < 0:
            raise ValueError("denominator exponent must be non-negative")

    @classmethod
    def from_int(cls, value: int) -> ExactScalar:
        return cls(int(value))

    @classmethod
    def omega_power(cls, j: int) -> ExactScalar:
        j %= 8
        coeffs = [0, 0, 0, 0]
        coeffs[j % 4] = -1 if j >= 4 else 1
        return cls(*coeffs)

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def _arr(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=object)

    @classmethod
    def _from_arr(cls, p: np.ndarray, k: int) -> ExactScalar:
        return cls(*(int(x) for x in p), k=k)

    def canonical(self) -> ExactScalar:
        a, b, c, d, k = self.a, self.b, self.c, self.d, self.k
        if a == b == c == d == 0:
            return ExactScalar(0)
        while k > 0 and (a - c) % 2 == 0 and (b - d) % 2 == 0:
            a, b, c, d = (b - d) // 2, (a + c) // 2, (b + d) // 2, (c - a) // 2
            k -= 1
        return ExactScalar(a, b, c, d, k)

    def is_zero(self) -> bool:
        return self.a == self.b == self.c == self.d == 0

    def _coerce(self, other) -> ExactScalar | None:
        if isinstance(other, ExactScalar):
            return other
        if isinstance(other, (int, np.integer)):
            return ExactScalar(int(other))
        return None

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        x, y = self.canonical(), other.canonical()
        return x.coeffs == y.coeffs and x.k == y.k

    def __hash__(self) -> int:
        x = self.canonical()
        return hash((x.coeffs, x.k))

    def __add__(self, other) -> ExactScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        p, q, k = _align(self._arr(), self.k, other._arr(), other.k)
        return ExactScalar._from_arr(p + q, k).canonical()

    __radd__ = __add__

    def __neg__(self) -> ExactScalar:
        return ExactScalar(-self.a, -self.b, -self.c, -self.d, self.k)

    def __sub__(self, other) -> ExactScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> ExactScalar:
        return (-self) + other

    def __mul__(self, other) -> ExactScalar:
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        prod = _omega_product(self._arr(), other._arr(), lambda x, y: x * y)
        return ExactScalar._from_arr(prod, self.k + other.k).canonical()

    __rmul__ = __mul__

    def conjugate(self) -> ExactScalar:
        return ExactScalar(self.a, -self.d, -self.c, -self.b, self.k)

    def __complex__(self) -> complex:
        return to_float(self)

    def __repr__(self) -> str:
        return f"ExactScalar({self.a}, {self.b}, {self.c}, {self.d}, k={self.k})"


def to_float(x: ExactScalar) -> complex:
    """Complex value of an exact scalar (reporting only)."""
    val = x.a + x.b * _OMEGA + x.c * 1j + x.d * _OMEGA**3
    return complex(val / math.sqrt(2) ** x.k)


class ExactArray:
    """n-dimensional array over Z[w]/sqrt(2)^k with a shared exponent."""

    __slots__ = ("coeffs", "k")
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, coeffs: np.ndarray, k: int = 0) -> None:
        coeffs = np.asarray(coeffs)
        if coeffs.shape[:1] != (4,):
            raise ValueError("leading axis must hold the 4 ring components")
        if coeffs.dtype != object and coeffs.dtype != np.int64:
            coeffs = coeffs.astype(np.int64)
        if k < 0:
            raise ValueError("denominator exponent must be non-negative")
        self.coeffs = coeffs
        self.k = int(k)

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, shape) -> ExactArray:
        return cls(np.zeros((4, *np.atleast_1d(shape)), dtype=np.int64))

    @classmethod
    def from_integers(cls, values, k: int = 0) -> ExactArray:
        values = np.asarray(values)
        coeffs = np.zeros((4, *values.shape), dtype=values.dtype if values.dtype == object else np.int64)
        coeffs[0] = values
        return cls(coeffs, k)

    @classmethod
    def identity(cls, dim: int) -> ExactArray:
        return cls.from_integers(np.eye(dim, dtype=np.int64))

    @classmethod
    def from_omega_exponents(cls, exps, mask=None) -> ExactArray:
        """Entries w**exps (or 0 where ``mask`` is False)."""
        exps = np.asarray(exps) % 8
        coeffs = np.zeros((4, *exps.shape), dtype=np.int64)
        sign = np.where(exps >= 4, -1, 1)
        if mask is not None:
            sign = sign * np.asarray(mask, dtype=np.int64)
        for j in range(4):
            coeffs[j] = np.where(exps % 4 == j, sign, 0)
        return cls(coeffs)

    # basic properties ---------------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[1:]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    def canonical(self) -> ExactArray:
        """Smallest shared exponent; idempotent."""
        p, k = self.coeffs, self.k
        if not np.any(p):
            return ExactArray(np.zeros_like(p, dtype=np.int64), 0)
        while k > 0 and _divisible_by_sqrt2(p):
            p = _div_sqrt2(p)
            k -= 1
        return ExactArray(_demote(p), k)

    def nonzero_mask(self) -> np.ndarray:
        return np.any(self.coeffs != 0, axis=0)

    def to_complex(self) -> np.ndarray:
        return _to_complex(self.coeffs, self.k)

    def scalar(self, index) -> ExactScalar:
        p = self.coeffs[(slice(None), *index)]
        return ExactScalar(*(int(x) for x in p), k=self.k).canonical()

    # arithmetic ---------------------------------------------------------
    def _other(self, other) -> ExactArray:
        if isinstance(other, ExactArray):
            return other
        if isinstance(other, ExactScalar):
            return ExactArray(np.array(other.coeffs, dtype=object), other.k)
        if isinstance(other, (int, np.integer)):
            return ExactArray.from_integers(np.array(int(other)))
        raise BackendError(f"cannot combine exact array with {type(other).__name__}")

    def __eq__(self, other) -> bool:  # type: ignore[override]
        if not isinstance(other, ExactArray):
            return NotImplemented
        if self.shape != other.shape:
            return False
        p, q, _ = _align(self.coeffs, self.k, other.coeffs, other.k)
        return bool(np.all(p == q))

    def __ne__(self, other) -> bool:  # type: ignore[override]
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    def __neg__(self) -> ExactArray:
        return ExactArray(-self.coeffs, self.k)

    def __add__(self, other) -> ExactArray:
        other = self._other(other)
        p, q, k = _align(self.coeffs, self.k, other.coeffs, other.k)
        bound = _maxabs(p) + _maxabs(q)
        return ExactArray(_promote(p, bound) + _promote(q, bound), k).canonical()

    __radd__ = __add__

    def __sub__(self, other) -> ExactArray:
        return self + (-self._other(other))

    def __mul__(self, other) -> ExactArray:
        """Elementwise ring product (numpy broadcasting)."""
        other = self._other(other)
        prod = _omega_product(self.coeffs, other.coeffs, lambda x, y: x * y)
        return ExactArray(prod, self.k + other.k).canonical()

    __rmul__ = __mul__

    def __matmul__(self, other) -> ExactArray:
        if not isinstance(other, ExactArray):
            return NotImplemented
        inner = self.shape[-1] if self.shape else 1
        prod = _omega_matmul(self.coeffs, other.coeffs, inner)
        return ExactArray(prod, self.k + other.k).canonical()

    def times_i_power(self, e) -> ExactArray:
        return ExactArray(_times_i_power(self.coeffs, e), self.k)

    def conj(self) -> ExactArray:
        return ExactArray(_conj(self.coeffs), self.k)

    @property
    def T(self) -> ExactArray:
        return ExactArray(np.swapaxes(self.coeffs, -1, -2), self.k)

    def dagger(self) -> ExactArray:
        return self.conj().T

    def trace(self) -> ExactScalar:
        t = np.trace(self.coeffs, axis1=-2, axis2=-1)
        return ExactScalar(*(int(x) for x in t), k=self.k).canonical()

    def kron(self, other: ExactArray) -> ExactArray:
        prod = _omega_product(self.coeffs, other.coeffs, np.kron)
        return ExactArray(prod, self.k + other.k).canonical()

    def __getitem__(self, key) -> ExactArray | ExactScalar:
        if not isinstance(key, tuple):
            key = (key,)
        sub = self.coeffs[(slice(None), *key)]
        if sub.ndim == 1:
            return ExactScalar(*(int(x) for x in sub), k=self.k).canonical()
        return ExactArray(sub, self.k)

    def reshape(self, *shape) -> ExactArray:
        return ExactArray(self.coeffs.reshape(4, *shape), self.k)

    def __repr__(self) -> str:
        return f"ExactArray(shape={self.shape}, k={self.k})"


ArrayLike = Union[np.ndarray, ExactArray]


def backend_of(data: ArrayLike) -> Backend:
    return Backend.EXACT if isinstance(data, ExactArray) else Backend.FLOAT


def _kron(a: ArrayLike, b: ArrayLike) -> ArrayLike:
    if isinstance(a, ExactArray) and isinstance(b, ExactArray):
        return a.kron(b)
    if isinstance(a, ExactArray) or isinstance(b, ExactArray):
        raise BackendError("cannot mix exact and float backends")
    return np.kron(a, b)


def _check_qubits(n: int, dim: int, what: str) -> None:
    if n < 0 or dim != 2**n:
        raise QubitMismatchError(f"{what} dimension {dim} does not match {n} qubits")
    if n > MAX_DENSE_QUBITS:
        raise ResourceLimitError(f"{n} qubits exceeds the dense cap of {MAX_DENSE_QUBITS}")


@dataclass(frozen=True, eq=False)
class Matrix:
    """A 2^n x 2^n operator on ``n`` qubits; qubit 0 is the most significant bit."""

    n: int
    data: ArrayLike

    def __post_init__(self) -> None:
        shape = self.data.shape
        if len(shape) != 2 or shape[0] != shape[1]:
            raise QubitMismatchError(f"matrix must be square, got shape {shape}")
        _check_qubits(self.n, shape[0], "matrix")
        if not isinstance(self.data, ExactArray):
            object.__setattr__(self, "data", np.asarray(self.data, dtype=complex))

    @property
    def backend(self) -> Backend:
        return backend_of(self.data)

    @property
    def dim(self) -> int:
        return 2**self.n

    def to_numpy(self) -> np.ndarray:
        if isinstance(self.data, ExactArray):
            return self.data.to_complex()
        return self.data

    def to_backend(self, backend: Backend | str) -> Matrix:
        backend = Backend(backend)
        if backend == self.backend:
            return self
        if backend == Backend.FLOAT:
            return Matrix(self.n, self.to_numpy())
        raise BackendError("float matrices cannot be converted to the exact backend")

    def __matmul__(self, other: Matrix) -> Matrix:
        return mat_mul(self, other)

    def dagger(self) -> Matrix:
        return conj_transpose(self)

    def __eq__(self, other) -> bool:  # type: ignore[override]
        if not isinstance(other, Matrix) or other.n != self.n:
            return NotImplemented if not isinstance(other, Matrix) else False
        if self.backend != other.backend:
            return False
        if isinstance(self.data, ExactArray):
            return self.data == other.data
        return bool(np.array_equal(self.data, other.data))

    __hash__ = None  # type: ignore[assignment]


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state amplitudes on ``n`` qubits."""

    n: int
    amplitudes: ArrayLike

    def __post_init__(self) -> None:
        shape = self.amplitudes.shape
        if len(shape) != 1:
            raise QubitMismatchError(f"state must be 1-dimensional, got shape {shape}")
        _check_qubits(self.n, shape[0], "state")
        if not isinstance(self.amplitudes, ExactArray):
            object.__setattr__(self, "amplitudes", np.asarray(self.amplitudes, dtype=complex))

    @property
    def backend(self) -> Backend:
        return backend_of(self.amplitudes)

    def to_numpy(self) -> np.ndarray:
        if isinstance(self.amplitudes, ExactArray):
            return self.amplitudes.to_complex()
        return self.amplitudes

    def to_backend(self, backend: Backend | str) -> StateVector:
        backend = Backend(backend)
        if backend == self.backend:
            return self
        if backend == Backend.FLOAT:
            return StateVector(self.n, self.to_numpy())
        raise BackendError("float states cannot be converted to the exact backend")

    def norm_squared(self) -> ExactScalar | float:
        amps = self.amplitudes
        if isinstance(amps, ExactArray):
            return _sum_exact(amps.conj() * amps)
        return float(np.vdot(amps, amps).real)

    def tensor(self, other: StateVector) -> StateVector:
        return StateVector(self.n + other.n, _kron(self.amplitudes, other.amplitudes))


def _sum_exact(arr: ExactArray) -> ExactScalar:
    total = arr.coeffs.reshape(4, -1).sum(axis=1)
    return ExactScalar(*(int(x) for x in total), k=arr.k).canonical()


def _same_backend(a: Backend, b: Backend) -> None:
    if a != b:
        raise BackendError(f"backend mismatch: {a} vs {b}")


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    if a.n != b.n:
        raise QubitMismatchError(f"cannot multiply {a.n}-qubit and {b.n}-qubit matrices")
    _same_backend(a.backend, b.backend)
    return Matrix(a.n, a.data @ b.data)


def tensor(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; ``a`` occupies the leading (more significant) qubits."""
    _same_backend(a.backend, b.backend)
    return Matrix(a.n + b.n, _kron(a.data, b.data))


def conj_transpose(a: Matrix) -> Matrix:
    if isinstance(a.data, ExactArray):
        return Matrix(a.n, a.data.dagger())
    return Matrix(a.n, a.data.conj().T)


def trace(a: Matrix) -> ExactScalar | complex:
    if isinstance(a.data, ExactArray):
        return a.data.trace()
    return complex(np.trace(a.data))


def apply(a: Matrix, v: StateVector) -> StateVector:
    if a.n != v.n:
        raise QubitMismatchError(f"cannot apply {a.n}-qubit matrix to {v.n}-qubit state")
    _same_backend(a.backend, v.backend)
    if isinstance(a.data, ExactArray):
        col = v.amplitudes.reshape(v.amplitudes.shape[0], 1)
        return StateVector(v.n, (a.data @ col).reshape(-1))
    return StateVector(v.n, a.data @ v.amplitudes)


def identity(n: int, backend: Backend | str = Backend.FLOAT) -> Matrix:
    if Backend(backend) == Backend.EXACT:
        return Matrix(n, ExactArray.identity(2**n))
    return Matrix(n, np.eye(2**n, dtype=complex))


def basis_state(n: int, index: int = 0, backend: Backend | str = Backend.FLOAT) -> StateVector:
    vals = np.zeros(2**n, dtype=np.int64)
    vals[index] = 1
    if Backend(backend) == Backend.EXACT:
        return StateVector(n, ExactArray.from_integers(vals))
    return StateVector(n, vals.astype(complex))


def is_unitary(u: Matrix, atol: float = FLOAT_ATOL) -> bool:
    prod = conj_transpose(u) @ u
    if isinstance(prod.data, ExactArray):
        return prod.data == ExactArray.identity(u.dim)
    return bool(np.max(np.abs(prod.data - np.eye(u.dim))) <= atol)


def allclose(a: Matrix | StateVector, b: Matrix | StateVector, atol: float = FLOAT_ATOL) -> bool:
    """Exact equality when both operands are exact, max-norm tolerance otherwise."""
    da = a.data if isinstance(a, Matrix) else a.amplitudes
    db = b.data if isinstance(b, Matrix) else b.amplitudes
    if isinstance(da, ExactArray) and isinstance(db, ExactArray):
        return da == db
    xa, xb = a.to_numpy(), b.to_numpy()
    if xa.shape != xb.shape:
        return False
    return bool(np.max(np.abs(xa - xb), initial=0.0) <= atol)
