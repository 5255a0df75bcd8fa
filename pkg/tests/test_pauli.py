import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import dense_pauli, pauli_strings
from stabnull.pauli import (
    LabelSubgroup,
    PauliLabel,
    PhasedPauli,
    all_labels,
    compose,
    intersect,
    phased_compose,
    product,
    product_set_size,
    span,
    to_dense,
)

label_text = st.integers(1, 4).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))


def same_width_pair():
    return st.integers(1, 4).flatmap(
        lambda n: st.tuples(st.text("IXYZ", min_size=n, max_size=n), st.text("IXYZ", min_size=n, max_size=n))
    )


class TestLabel:
    def test_string_round_trip(self):
        for s in pauli_strings(3):
            assert str(PauliLabel.from_string(s)) == s

    def test_index_order_is_ixyz_most_significant_first(self):
        assert [str(p) for p in all_labels(1)] == ["I", "X", "Y", "Z"]
        assert str(PauliLabel.from_index(2, 1)) == "IX"
        assert str(PauliLabel.from_index(2, 4)) == "XI"
        assert PauliLabel.from_string("ZY").index == 14

    def test_masks(self):
        p = PauliLabel.from_string("XYZ")
        assert (p.x_mask, p.z_mask) == (0b110, 0b011)
        assert p.weight == 3 and p.y_count == 1

    def test_bad_input(self):
        with pytest.raises(ValueError):
            PauliLabel.from_string("XQ")
        with pytest.raises(ValueError):
            PauliLabel(2, 4, 0)

    def test_width_mismatch(self):
        with pytest.raises(ValueError):
            compose(PauliLabel.from_string("X"), PauliLabel.from_string("XX"))

    @given(label_text)
    def test_dense_matches_kron(self, s):
        np.testing.assert_allclose(to_dense(PauliLabel.from_string(s)).to_numpy(), dense_pauli(s))

    @given(label_text)
    def test_exact_dense_matches_float(self, s):
        p = PauliLabel.from_string(s)
        np.testing.assert_allclose(to_dense(p, "exact").to_numpy(), to_dense(p).to_numpy())


class TestComposition:
    @given(same_width_pair())
    def test_product_up_to_phase(self, pair):
        a, b = pair
        prod = dense_pauli(a) @ dense_pauli(b)
        c = str(compose(PauliLabel.from_string(a), PauliLabel.from_string(b)))
        ref = dense_pauli(c)
        k = np.flatnonzero(np.abs(ref.reshape(-1)) > 0)[0]
        phase = prod.reshape(-1)[k] / ref.reshape(-1)[k]
        np.testing.assert_allclose(prod, phase * ref)
        assert min(abs(phase - w) for w in (1, 1j, -1, -1j)) < 1e-12

    @given(same_width_pair(), st.integers(0, 3), st.integers(0, 3))
    def test_phased_product_exact(self, pair, ka, kb):
        a = PhasedPauli(PauliLabel.from_string(pair[0]), ka)
        b = PhasedPauli(PauliLabel.from_string(pair[1]), kb)
        np.testing.assert_allclose(
            to_dense(phased_compose(a, b)).to_numpy(), to_dense(a).to_numpy() @ to_dense(b).to_numpy(), atol=1e-12
        )

    @given(same_width_pair())
    def test_commutation(self, pair):
        a, b = (dense_pauli(s) for s in pair)
        commute = np.allclose(a @ b, b @ a)
        assert PauliLabel.from_string(pair[0]).commutes_with(PauliLabel.from_string(pair[1])) == commute

    def test_phased_strings(self):
        assert str(PhasedPauli.from_string("-iXZ")) == "-iXZ"
        assert PhasedPauli.from_string("XZ") * PhasedPauli.from_string("XZ") == PhasedPauli.from_string("II")
        assert str(PhasedPauli.from_string("X") * PhasedPauli.from_string("Z")) == "-iY"


def brute_span(labels, n):
    group = {0}
    for lab in labels:
        group |= {g ^ lab.vector for g in group}
    return group


subgroup_gens = st.integers(1, 3).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.integers(0, 4**n - 1), max_size=5), st.lists(st.integers(0, 4**n - 1), max_size=5))
)


class TestSubgroup:
    def test_standard_groups(self):
        assert LabelSubgroup.full(3).size == 64
        assert LabelSubgroup.x_type(3).size == 8
        assert all(p.z_mask == 0 for p in LabelSubgroup.x_type(2))
        assert all(p.x_mask == 0 for p in LabelSubgroup.z_type(2))
        assert intersect(LabelSubgroup.x_type(2), LabelSubgroup.z_type(2)).size == 1

    @given(subgroup_gens)
    @settings(max_examples=60)
    def test_span_and_intersection_match_brute(self, data):
        n, ga, gb = data
        la = [PauliLabel.from_vector(n, v) for v in ga]
        lb = [PauliLabel.from_vector(n, v) for v in gb]
        a, b = span(la, n), span(lb, n)
        ea, eb = brute_span(la, n), brute_span(lb, n)
        assert {p.vector for p in a.elements()} == ea
        assert {p.vector for p in intersect(a, b).elements()} == ea & eb
        # Lagrange: |AB| |A n B| = |A| |B|
        assert product_set_size(a, b) * intersect(a, b).size == a.size * b.size
        assert product(a, b) == span(la + lb, n)

    def test_membership_and_generators(self):
        g = span([PauliLabel.from_string("XX"), PauliLabel.from_string("ZZ")])
        assert PauliLabel.from_string("YY") in g
        assert PauliLabel.from_string("XI") not in g
        assert g.rank == 2 and len(g.generators()) == 2

    def test_enumeration_cap(self):
        with pytest.raises(Exception):
            LabelSubgroup.full(7).elements()
