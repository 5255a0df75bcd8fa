import json

import numpy as np
import pytest

from conftest import brute_state_s
from stabnull.backend import basis_state
from stabnull.circuit import build_unitary, parse, special_family
from stabnull.corpus import controlled_s
from stabnull.errors import QubitMismatchError, ResourceLimitError
from stabnull.nullity import compute_s_state, compute_s_unitary
from stabnull.stabilizer import (
    apply_on_last,
    aux_nullity,
    enumerate_stabilizer_states,
    expected_stabilizer_count,
    max_state_nullity,
    maximally_entangled,
    padding_monotonicity_check,
    plus_state,
    sample_stabilizer_states,
)


@pytest.fixture(scope="module")
def three_qubit_states():
    return enumerate_stabilizer_states(3)


class TestEnumeration:
    @pytest.mark.parametrize("n, count", [(1, 6), (2, 60), (3, 1080)])
    def test_counts(self, n, count):
        states = enumerate_stabilizer_states(n)
        assert len(states) == count == expected_stabilizer_count(n)

    def test_four_qubits(self):
        assert len(enumerate_stabilizer_states(4)) == 36720

    def test_states_are_normalized_and_distinct(self, three_qubit_states):
        v = three_qubit_states.vectors
        np.testing.assert_allclose(np.sum(np.abs(v) ** 2, axis=1), 1)
        overlaps = np.abs(v.conj() @ v.T)
        np.fill_diagonal(overlaps, 0)
        assert overlaps.max() < 1 - 1e-6

    def test_every_state_has_full_stabilizer(self):
        states = enumerate_stabilizer_states(2)
        for psi in states:
            assert compute_s_state(psi).nullity == 0
            assert brute_state_s(psi.to_numpy()) == 4

    def test_index_of(self, three_qubit_states):
        i = three_qubit_states.index_of(plus_state(3))
        assert i is not None
        np.testing.assert_allclose(three_qubit_states.vectors[i], plus_state(3).to_numpy())
        assert three_qubit_states.index_of(basis_state(3, 7)) != i

    def test_json_export(self):
        data = json.loads(enumerate_stabilizer_states(1).to_json())
        assert len(data) == 6 and len(data[0]) == 2 and len(data[0][0]) == 2

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            enumerate_stabilizer_states(5)

    def test_samples_are_stabilizer_states(self, rng):
        for psi in sample_stabilizer_states(4, 10, rng):
            assert compute_s_state(psi).nullity == 0


class TestComparison:
    def test_ccz_attained_at_plus(self, three_qubit_states):
        U = build_unitary(parse("qubits 3\nccz 0 1 2\n"), "float")
        best = max_state_nullity(U, three_qubit_states)
        assert best.max == 3
        assert best.attained_by(three_qubit_states.index_of(plus_state(3)))

    def test_strict_separation(self, three_qubit_states):
        U = build_unitary(special_family(3), "float")
        assert max_state_nullity(U, three_qubit_states).max == 3
        assert compute_s_unitary(U).nullity == 6

    def test_width_mismatch(self, three_qubit_states):
        with pytest.raises(QubitMismatchError):
            max_state_nullity(build_unitary(parse("qubits 1\nt 0\n")), three_qubit_states)


class TestAncilla:
    def test_maximally_entangled(self):
        phi = maximally_entangled(1).to_numpy()
        np.testing.assert_allclose(phi, np.array([1, 0, 0, 1]) / np.sqrt(2))
        assert maximally_entangled(2, "exact").norm_squared() == 1

    def test_apply_on_last(self):
        U = build_unitary(parse("qubits 1\nx 0\n"), "float")
        out = apply_on_last(U, basis_state(2, 0))
        np.testing.assert_allclose(out.to_numpy(), [0, 1, 0, 0])

    @pytest.mark.parametrize(
        "circuit, v",
        [
            (parse("qubits 1\nt 0\n"), 1),
            (parse("qubits 1\ns 0\nt 0\n"), 1),
            (controlled_s(), 2),
            (special_family(3), 6),
        ],
    )
    def test_attained_by_maximally_entangled(self, circuit, v):
        U = build_unitary(circuit)
        assert compute_s_unitary(U).nullity == v
        assert aux_nullity(U, maximally_entangled(circuit.width, "exact")) == v

    def test_padding(self):
        U = build_unitary(parse("qubits 1\nt 0\n"), "float")
        result = padding_monotonicity_check(U, 1, 0)
        assert result and result.padding_preserved
        assert result.best_d == 1
        with pytest.raises(ValueError):
            padding_monotonicity_check(U, 0, 1)
