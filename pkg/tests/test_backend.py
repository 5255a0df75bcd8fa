import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stabnull.backend import (
    Backend,
    ExactArray,
    ExactScalar,
    Matrix,
    StateVector,
    apply,
    basis_state,
    identity,
    is_unitary,
    mat_mul,
    tensor,
    trace,
)
from stabnull.errors import BackendError, QubitMismatchError

W = cmath.exp(1j * math.pi / 4)
small = st.integers(-50, 50)
scalars = st.builds(ExactScalar, small, small, small, small, st.integers(0, 6))


def value(x: ExactScalar) -> complex:
    return (x.a + x.b * W + x.c * W**2 + x.d * W**3) / math.sqrt(2) ** x.k


class TestExactScalar:
    @given(scalars, scalars)
    def test_ring_operations_match_complex(self, x, y):
        assert abs(complex(x + y) - (value(x) + value(y))) < 1e-9
        assert abs(complex(x - y) - (value(x) - value(y))) < 1e-9
        assert abs(complex(x * y) - value(x) * value(y)) < 1e-6
        assert abs(complex(x.conjugate()) - value(x).conjugate()) < 1e-9

    @given(scalars)
    def test_canonical_preserves_value(self, x):
        c = x.canonical()
        assert abs(complex(c) - value(x)) < 1e-9
        assert c == x
        assert hash(c) == hash(x)

    def test_inverse_sqrt2(self):
        r = ExactScalar(1, 0, 0, 0, k=1)
        assert r * r == ExactScalar(1, k=2)
        # w + w^7 = sqrt(2)
        assert ExactScalar(0, 1, 0, -1) == ExactScalar(2, k=1)
        assert r * ExactScalar(0, 1, 0, -1) == 1

    def test_omega_powers(self):
        for j in range(8):
            assert abs(complex(ExactScalar.omega_power(j)) - W**j) < 1e-12
        assert ExactScalar.omega_power(8) == 1

    def test_negative_k_rejected(self):
        with pytest.raises(ValueError):
            ExactScalar(1, k=-1)


H_EXACT = ExactArray.from_integers(np.array([[1, 1], [1, -1]]), k=1)
T_EXACT = ExactArray.from_omega_exponents(np.array([[0, 0], [0, 1]]), np.eye(2, dtype=bool))


class TestExactArray:
    def test_hadamard_squares_to_identity(self):
        assert H_EXACT @ H_EXACT == ExactArray.identity(2)

    def test_t_to_the_eighth(self):
        acc = ExactArray.identity(2)
        for _ in range(8):
            acc = acc @ T_EXACT
        assert acc == ExactArray.identity(2)
        np.testing.assert_allclose(T_EXACT.to_complex(), np.diag([1, W]))

    def test_matmul_matches_float(self, rng):
        a = ExactArray(rng.integers(-5, 6, size=(4, 4, 4)), k=3)
        b = ExactArray(rng.integers(-5, 6, size=(4, 4, 4)), k=1)
        np.testing.assert_allclose((a @ b).to_complex(), a.to_complex() @ b.to_complex(), atol=1e-9)
        np.testing.assert_allclose((a + b).to_complex(), a.to_complex() + b.to_complex(), atol=1e-9)
        np.testing.assert_allclose(a.dagger().to_complex(), a.to_complex().conj().T, atol=1e-12)
        np.testing.assert_allclose(a.kron(b).to_complex(), np.kron(a.to_complex(), b.to_complex()), atol=1e-9)
        np.testing.assert_allclose(complex(a.trace()), np.trace(a.to_complex()), atol=1e-9)

    def test_times_i_power(self, rng):
        a = ExactArray(rng.integers(-5, 6, size=(4, 3)), k=0)
        e = np.array([0, 1, 3])
        np.testing.assert_allclose(a.times_i_power(e).to_complex(), a.to_complex() * 1j**e, atol=1e-12)

    def test_overflow_promotes_to_python_ints(self):
        big = ExactArray.from_integers(np.array([2**61, 3]))
        sq = big * big
        assert sq.coeffs.dtype == object
        assert sq.scalar((0,)) == ExactScalar(2**122)
        assert int(sq.coeffs[0][1]) == 9

    def test_equality_across_denominators(self):
        a = ExactArray.from_integers(np.array([2, 4]), k=2)
        b = ExactArray.from_integers(np.array([1, 2]), k=0)
        assert a == b
        assert a.canonical().k == 0


class TestMatrix:
    def test_unitarity(self):
        h = Matrix(1, H_EXACT)
        assert is_unitary(h)
        assert is_unitary(h.to_backend("float"))
        assert not is_unitary(Matrix(1, np.array([[1, 1], [0, 1]], dtype=complex)))

    def test_exact_to_float_only(self):
        h = Matrix(1, H_EXACT)
        np.testing.assert_allclose(h.to_backend(Backend.FLOAT).to_numpy(), np.array([[1, 1], [1, -1]]) / math.sqrt(2))
        with pytest.raises(BackendError):
            Matrix(1, np.eye(2, dtype=complex)).to_backend(Backend.EXACT)

    def test_mixed_backends_rejected(self):
        with pytest.raises(BackendError):
            mat_mul(Matrix(1, H_EXACT), identity(1))

    def test_dimension_checks(self):
        with pytest.raises(QubitMismatchError):
            Matrix(2, np.eye(2, dtype=complex))
        with pytest.raises(QubitMismatchError):
            apply(identity(2), basis_state(1))

    def test_tensor_and_trace(self):
        t = tensor(Matrix(1, T_EXACT), Matrix(1, H_EXACT))
        assert t.n == 2
        assert trace(t) == 0
        assert trace(identity(3, "exact")) == 8

    def test_state_norm(self):
        psi = apply(Matrix(1, H_EXACT), basis_state(1, 0, "exact"))
        assert psi.norm_squared() == 1
        assert isinstance(psi, StateVector)
        np.testing.assert_allclose(psi.to_numpy(), [2**-0.5, 2**-0.5])
        assert basis_state(2, 3).tensor(basis_state(1, 0)).to_numpy()[6] == 1
