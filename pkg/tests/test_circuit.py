import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stabnull.backend import Backend, basis_state
from stabnull.circuit import (
    Circuit,
    Gate,
    apply_circuit,
    build_unitary,
    ckz,
    count_t_gates,
    diag_from_phases,
    exp_ix_gate,
    parse,
    resolve_backend,
    serialize,
    special_family,
)
from stabnull.corpus import TOFFOLI_7T, controlled_s, random_clifford_t_circuit, toffoli_7t
from stabnull.errors import BackendError, CircuitParseError, ResourceLimitError

W = cmath.exp(1j * math.pi / 4)
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def unitary(text: str, backend="auto") -> np.ndarray:
    return build_unitary(parse(text), backend).to_numpy()


class TestParse:
    def test_ccz_line(self):
        c = parse("qubits 3\nccz 0 1 2\n")
        assert c.gates == (ckz((0, 1, 2)),)
        np.testing.assert_allclose(build_unitary(c).to_numpy(), np.diag([1] * 7 + [-1]))

    def test_comments_and_blank_lines(self):
        c = parse("# header comment\n\nqubits 2\nh 0  # trailing\n\ncnot 0 1\n")
        assert [g.kind for g in c.gates] == ["h", "cnot"]

    @pytest.mark.parametrize(
        "text, line, column",
        [
            ("h 0\n", 1, 1),
            ("qubits 0\n", 1, 8),
            ("qubits 2\nqubits 2\n", 2, 1),
            ("qubits 2\nh 2\n", 2, 3),
            ("qubits 2\ncnot 0 0\n", 2, 8),
            ("qubits 2\nh 0 1\n", 2, 1),
            ("qubits 2\n  bogus 1\n", 2, 3),
            ("qubits 2\nh x\n", 2, 3),
            ("qubits 1\ndiag 1,0\n", 2, 1),
            ("qubits 1\ndiag 1,0 2,0\n", 2, 1),
        ],
    )
    def test_errors_carry_position(self, text, line, column):
        with pytest.raises(CircuitParseError) as info:
            parse(text)
        assert (info.value.line, info.value.column) == (line, column)
        assert f"line {line}, column {column}" in str(info.value)

    def test_ckz_syntax(self):
        c = parse("qubits 4\nckz 3 0 1 2 3\nckz 1 0 2\n")
        assert c.gates[0] == ckz((0, 1, 2, 3))
        assert c.gates[1].kind == "cz"
        with pytest.raises(CircuitParseError):
            parse("qubits 3\nckz 2 0 1\n")

    @given(st.integers(1, 3), st.integers(0, 20), st.integers(0, 2**32 - 1))
    @settings(max_examples=40, deadline=None)
    def test_round_trip(self, n, depth, seed):
        c = random_clifford_t_circuit(n, depth, np.random.default_rng(seed))
        assert parse(serialize(c)) == c

    def test_round_trip_special_gates(self):
        c = Circuit(3, (ckz((0, 1, 2)), diag_from_phases([1, 1j, -1, W, 1, 1, 1, -1j])))
        back = parse(serialize(c))
        assert back == c
        assert build_unitary(back) == build_unitary(c)


class TestGates:
    def test_validation(self):
        with pytest.raises(ValueError):
            Gate("h", (0, 1))
        with pytest.raises(ValueError):
            Gate("cnot", (1, 1))
        with pytest.raises(ValueError):
            Gate("custom", (0,), matrix=np.array([[1, 1], [0, 1]]))
        with pytest.raises(ValueError):
            diag_from_phases([1, 2])

    def test_inverse(self):
        for text in ("qubits 1\nt 0\ns 0\nh 0\n", TOFFOLI_7T):
            c = parse(text)
            assert build_unitary(c + c.inverse()) == build_unitary(Circuit(c.width, ()))

    def test_t_count(self):
        assert count_t_gates(toffoli_7t()) == 7
        assert count_t_gates(controlled_s()) == 3

    def test_exp_ix_is_float_only(self):
        c = Circuit(1, (exp_ix_gate(0),))
        assert resolve_backend(c) == Backend.FLOAT
        np.testing.assert_allclose(
            build_unitary(c).to_numpy(), math.cos(1) * np.eye(2) + 1j * math.sin(1) * np.array([[0, 1], [1, 0]])
        )
        with pytest.raises(BackendError):
            build_unitary(c, "exact")


class TestBuild:
    def test_temporal_order(self):
        # "h 0; t 0" means T H, not H T
        np.testing.assert_allclose(unitary("qubits 1\nh 0\nt 0\n"), np.diag([1, W]) @ H)

    def test_qubit_zero_is_most_significant(self):
        u = unitary("qubits 2\nx 0\n")
        assert u[2, 0] == 1

    def test_cnot_control_target(self):
        u = unitary("qubits 2\ncnot 0 1\n")
        np.testing.assert_allclose(u, np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]))

    def test_toffoli_decomposition_is_exact(self):
        tof = np.eye(8)
        tof[6:, 6:] = [[0, 1], [1, 0]]
        u = build_unitary(toffoli_7t(), "exact")
        np.testing.assert_allclose(u.to_numpy(), tof, atol=1e-12)
        assert u == build_unitary(parse("qubits 3\nh 2\nccz 0 1 2\nh 2\n"), "exact")

    def test_controlled_s(self):
        np.testing.assert_allclose(build_unitary(controlled_s()).to_numpy(), np.diag([1, 1, 1, 1j]), atol=1e-12)

    def test_exact_and_float_agree(self, rng):
        for _ in range(10):
            c = random_clifford_t_circuit(3, 15, rng)
            np.testing.assert_allclose(build_unitary(c, "exact").to_numpy(), build_unitary(c, "float").to_numpy(), atol=1e-10)

    def test_diag_grid_uses_exact(self):
        c = parse("qubits 1\ndiag 1,0 0.7071067811865476,0.7071067811865476\n")
        assert resolve_backend(c) == Backend.EXACT
        assert build_unitary(c) == build_unitary(parse("qubits 1\nt 0\n"))
        assert resolve_backend(parse("qubits 1\ndiag 1,0 0.6,0.8\n")) == Backend.FLOAT

    def test_special_family(self):
        c = special_family(4)
        assert [g.kind for g in c.gates] == ["ckz", "h", "h", "h", "h", "ckz"]

    def test_width_cap(self):
        c = Circuit(9, ())
        with pytest.raises(ResourceLimitError):
            build_unitary(c)
        assert build_unitary(Circuit(8, ()), max_qubits=8).n == 8

    def test_apply_matches_unitary(self, rng):
        c = random_clifford_t_circuit(3, 12, rng)
        psi = apply_circuit(c, basis_state(3, 5, "exact"))
        np.testing.assert_allclose(psi.to_numpy(), build_unitary(c).to_numpy()[:, 5], atol=1e-12)
