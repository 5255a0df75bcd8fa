"""Runnable battery of the nullity theorems at small qubit counts.

Every check is deterministic given ``(name, seed, scale)`` and can be replayed
alone with :func:`run_check`.
"""

from __future__ import annotations

import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import pauli as pa
from .backend import Backend, Matrix, StateVector, apply, basis_state, tensor
from .circuit import (
    Circuit,
    Gate,
    build_unitary,
    count_t_gates,
    diag_from_phases,
    exp_ix_gate,
    parse,
    serialize,
    special_family,
)
from .corpus import (
    clifford_t_corpus,
    controlled_s,
    random_clifford_circuit,
    random_clifford_t_circuit,
    random_diagonal_circuit,
)
from .nullity import (
    compute_s_state,
    compute_s_unitary,
    is_clifford,
    pauli_transfer_matrix,
    stab_group,
    subgroup_P_U,
    t_count_lower_bound,
)
from .stabilizer import (
    aux_nullity,
    enumerate_stabilizer_states,
    max_state_nullity,
    maximally_entangled,
    padding_monotonicity_check,
    plus_state,
    sample_stabilizer_states,
)

__all__ = [
    "CheckResult",
    "SCALES",
    "f_brute",
    "f_closed_form",
    "theorem_2n_check",
    "state_subadditivity_counterexample",
    "transpose_trick_check",
    "run_check",
    "run_all",
    "check_names",
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0
    seed: int | None = None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"

    def to_dict(self, timing: bool = True) -> dict:
        out = asdict(self)
        out["status"] = self.status
        del out["passed"]
        if not timing:
            out["elapsed_ms"] = None
        return out


@dataclass(frozen=True)
class Scale:
    pairs: int
    max_n: int
    lagrange_pairs: int
    f_random: int
    two_n: tuple[int, ...]
    states: int
    enum_max: int
    aux_circuits: int
    ancilla_samples: int


SCALES = {
    "smoke": Scale(pairs=40, max_n=2, lagrange_pairs=40, f_random=300, two_n=(3,), states=20,
                   enum_max=2, aux_circuits=10, ancilla_samples=20),
    "standard": Scale(pairs=500, max_n=3, lagrange_pairs=200, f_random=10_000, two_n=(3, 4), states=100,
                      enum_max=3, aux_circuits=50, ancilla_samples=200),
    "deep": Scale(pairs=500, max_n=3, lagrange_pairs=200, f_random=10_000, two_n=(3, 4, 5), states=200,
                  enum_max=4, aux_circuits=50, ancilla_samples=200),
}

_MAX_WITNESSES = 5


# ---------------------------------------------------------------------------
# the closed form from the 2n-family argument


def _bits(x, n: int | None) -> tuple[int, int]:
    if isinstance(x, str):
        return int(x, 2), len(x)
    if n is None:
        raise ValueError("integer bit strings need an explicit length")
    return int(x), n


def _args(q, s, p, n):
    (qi, nq), (si, ns), (pi, np_) = _bits(q, n), _bits(s, n), _bits(p, n)
    if not nq == ns == np_:
        raise ValueError("bit strings must have equal length")
    return qi, si, pi, nq


def _dot(a: int, b: int) -> int:
    return bin(a & b).count("1") & 1


def f_brute(q, s, p, n: int | None = None) -> int:
    """sum_y (-1)^{(q+s).y} (-1)^{AND(y) + AND(y+p)} by direct summation."""
    q, s, p, n = _args(q, s, p, n)
    ones = (1 << n) - 1
    total = 0
    for y in range(1 << n):
        e = _dot(q ^ s, y) + (y == ones) + ((y ^ p) == ones)
        total += -1 if e & 1 else 1
    return total


def f_closed_form(q, s, p, n: int | None = None) -> int:
    q, s, p, n = _args(q, s, p, n)
    ones = (1 << n) - 1
    if p == 0:
        return 2**n if q == s else 0
    if q == s:
        return 2**n - 4
    z = q ^ s
    return -2 * (-1) ** _dot(z, ones) - 2 * (-1) ** _dot(z, ones ^ p)


# ---------------------------------------------------------------------------
# helpers


class _Recorder:
    def __init__(self) -> None:
        self.failures: list[dict] = []
        self.count = 0

    def check(self, ok: bool, **witness) -> None:
        self.count += 1
        if not ok:
            self.failures.append(witness)

    def result(self, name: str, seed: int | None, start: float, **extra) -> CheckResult:
        witness = dict(extra)
        witness["cases"] = self.count
        if self.failures:
            witness["failures"] = len(self.failures)
            witness["examples"] = self.failures[:_MAX_WITNESSES]
        return CheckResult(name, not self.failures, witness, (time.perf_counter() - start) * 1e3, seed)


def _rng(seed: int, name: str) -> np.random.Generator:
    return np.random.default_rng([seed, zlib.crc32(name.encode())])


def _text(c: Circuit) -> str:
    return serialize(c)


class _Cache:
    """s-reports of exact unitaries keyed by circuit text."""

    def __init__(self) -> None:
        self._reports: dict[str, object] = {}

    def report(self, c: Circuit):
        key = _text(c)
        if key not in self._reports:
            self._reports[key] = compute_s_unitary(build_unitary(c, "auto"))
        return self._reports[key]


def _random_pair(rng: np.random.Generator, max_n: int) -> tuple[Circuit, Circuit]:
    n = int(rng.integers(1, max_n + 1))
    return (random_clifford_t_circuit(n, int(rng.integers(1, 5 * n + 3)), rng),
            random_clifford_t_circuit(n, int(rng.integers(1, 5 * n + 3)), rng))


def _random_subgroup(n: int, rng: np.random.Generator) -> pa.LabelSubgroup:
    k = int(rng.integers(0, 2 * n + 1))
    gens = [pa.PauliLabel.from_vector(n, int(rng.integers(0, 4**n))) for _ in range(k)]
    return pa.span(gens, n)


# ---------------------------------------------------------------------------
# individual checks; each takes (seed, scale) and returns a CheckResult


def check_lagrange(seed: int, scale: Scale) -> CheckResult:
    name, start = "lagrange_product", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(scale.lagrange_pairs):
        n = int(rng.integers(2, 5))
        a, b = _random_subgroup(n, rng), _random_subgroup(n, rng)
        inter = pa.intersect(a, b)
        brute = set(a.elements()) & set(b.elements())
        prod = pa.product_set_size(a, b)
        rec.check(
            prod * inter.size == a.size * b.size and set(inter.elements()) == brute
            and pa.product(a, b).size == prod,
            n=n, a=str(a), b=str(b), product=prod, intersection=inter.size,
        )
    return rec.result(name, seed, start)


def check_faithfulness(seed: int, scale: Scale) -> CheckResult:
    name, start = "faithfulness", time.perf_counter()
    rng, rec, cache = _rng(seed, name), _Recorder(), _Cache()
    for _ in range(max(10, scale.pairs // 10)):
        n = int(rng.integers(1, scale.max_n + 1))
        cliff = random_clifford_circuit(n, 4 * n + 2, rng)
        r = cache.report(cliff)
        rec.check(r.nullity == 0 and r.s_value == 4**n, circuit=_text(cliff), nullity=r.nullity)
        ct = random_clifford_t_circuit(n, 5 * n, rng)
        r = cache.report(ct)
        rec.check(0 <= r.nullity <= 2 * n and (r.nullity == 0) == (r.s_value == 4**n),
                  circuit=_text(ct), nullity=r.nullity)
    t = parse("qubits 1\nt 0\n")
    rec.check(not is_clifford(build_unitary(t)), circuit="t")
    return rec.result(name, seed, start)


def check_clifford_invariance(seed: int, scale: Scale) -> CheckResult:
    name, start = "clifford_invariance", time.perf_counter()
    rng, rec, cache = _rng(seed, name), _Recorder(), _Cache()
    for _ in range(max(10, scale.pairs // 10)):
        n = int(rng.integers(1, scale.max_n + 1))
        u = random_clifford_t_circuit(n, 5 * n, rng)
        c = random_clifford_circuit(n, 4 * n + 2, rng)
        su, scu, suc = cache.report(u).s_value, cache.report(u + c).s_value, cache.report(c + u).s_value
        rec.check(su == scu == suc, u=_text(u), c=_text(c), s=(su, scu, suc))
    return rec.result(name, seed, start)


def check_tensor_additivity(seed: int, scale: Scale) -> CheckResult:
    name, start = "tensor_additivity", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(max(10, scale.pairs // 10)):
        nu = int(rng.integers(1, 3))
        nv = int(rng.integers(1, 4 - nu + 1))
        u = build_unitary(random_clifford_t_circuit(nu, 4 * nu, rng))
        v = build_unitary(random_clifford_t_circuit(nv, 4 * nv, rng))
        vu, vv = compute_s_unitary(u).nullity, compute_s_unitary(v).nullity
        vuv = compute_s_unitary(tensor(u, v)).nullity
        rec.check(vuv == vu + vv, n=(nu, nv), values=(vu, vv, vuv))
    return rec.result(name, seed, start)


def check_composition(seed: int, scale: Scale) -> CheckResult:
    """Subadditivity and the intersection bound on the same random pairs."""
    name, start = "composition_subadditivity", time.perf_counter()
    rng, rec, cache = _rng(seed, name), _Recorder(), _Cache()
    for _ in range(scale.pairs):
        u, v = _random_pair(rng, scale.max_n)
        n = u.width
        ru, rv, ruv = cache.report(u), cache.report(v), cache.report(v + u)  # matrix U V
        p_udag = pa.LabelSubgroup.from_labels(n, cache.report(u.inverse()).labels)
        p_v = pa.LabelSubgroup.from_labels(n, rv.labels)
        inter = pa.intersect(p_udag, p_v).size
        rec.check(
            ru.s_value * rv.s_value <= 4**n * ruv.s_value
            and ruv.nullity <= ru.nullity + rv.nullity
            and inter <= ruv.s_value,
            u=_text(u), v=_text(v), s=(ru.s_value, rv.s_value, ruv.s_value), intersection=inter,
        )
    return rec.result(name, seed, start)


def check_congs(seed: int, scale: Scale) -> CheckResult:
    """s(U) = s(U^dag) = |P_U|, and every s is a power of two."""
    name, start = "subgroup_size_and_integrality", time.perf_counter()
    rng, rec, cache = _rng(seed, name), _Recorder(), _Cache()
    for _ in range(max(10, scale.pairs // 10)):
        n = int(rng.integers(1, scale.max_n + 1))
        u = random_clifford_t_circuit(n, 5 * n, rng)
        r, rd = cache.report(u), cache.report(u.inverse())
        group = pa.LabelSubgroup.from_labels(n, r.labels)
        s = r.s_value
        rec.check(s == rd.s_value == group.size and s & (s - 1) == 0,
                  circuit=_text(u), s=s, s_dagger=rd.s_value, group=group.size)
    return rec.result(name, seed, start)


def check_transfer_uniqueness(seed: int, scale: Scale) -> CheckResult:
    """Full transfer matrix: at most one +-1 per column, and the count matches the scan."""
    name, start = "transfer_matrix_uniqueness", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(max(5, scale.pairs // 50)):
        n = int(rng.integers(1, 3))
        c = random_clifford_t_circuit(n, 5 * n, rng)
        U = build_unitary(c, "float")
        ptm = pauli_transfer_matrix(U)
        pm1 = np.abs(np.abs(ptm) - 1) <= 1e-8
        rec.check(
            bool(np.all(pm1.sum(axis=0) <= 1)) and int(pm1.sum()) == compute_s_unitary(U).s_value,
            circuit=_text(c), count=int(pm1.sum()),
        )
    return rec.result(name, seed, start)


def check_stab_equivalence(seed: int, scale: Scale) -> CheckResult:
    name, start = "stab_equivalence", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(scale.states):
        n = int(rng.integers(1, scale.max_n + 2))
        c = random_clifford_t_circuit(n, 4 * n, rng)
        psi = apply(build_unitary(c), basis_state(n, 0, Backend.EXACT))
        report = compute_s_state(psi)
        group = stab_group(psi)
        fixed = all(apply(pa.to_dense(p, Backend.EXACT), psi).amplitudes == psi.amplitudes for p in group)
        rec.check(len(group) == report.s_value and fixed, circuit=_text(c), s=report.s_value, stab=len(group))
    return rec.result(name, seed, start)


def _diagonal_cases(rng: np.random.Generator, max_n: int) -> list[Circuit]:
    cases = [parse("qubits 3\nccz 0 1 2\n", name="ccz"), parse("qubits 2\nt 0\nt 1\n", name="t_t"),
             controlled_s(), parse("qubits 1\nt 0\n", name="t")]
    for n in range(1, max_n + 1):
        cases.append(random_diagonal_circuit(n, rng, grid=True))
        cases.append(random_diagonal_circuit(n, rng, grid=False))
    return [c for c in cases if c.width <= max(max_n, 3)]


def check_diagonal_equality(seed: int, scale: Scale) -> CheckResult:
    name, start = "diagonal_equality", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    sets = {n: enumerate_stabilizer_states(n) for n in range(1, 4)}
    for c in _diagonal_cases(rng, 3):
        n = c.width
        U = build_unitary(c, "auto")
        v = compute_s_unitary(U).nullity
        best = max_state_nullity(U, sets[n])
        plus_idx = sets[n].index_of(plus_state(n))
        # the two label sets of the |+> characterization, and the product lemma
        state_labels = set(compute_s_state(apply(U.to_backend("float"), plus_state(n))).labels)
        rdag = compute_s_unitary(U.dagger())
        x_type_labels = {e.v for e in rdag.entries if e.u.z_mask == 0}
        prod = pa.product(pa.LabelSubgroup.x_type(n), pa.LabelSubgroup.from_labels(n, rdag.labels))
        rec.check(
            best.max == v and best.attained_by(plus_idx) and state_labels == x_type_labels
            and prod.size == 4**n,
            circuit=c.name, v=v, state_max=best.max,
        )
    return rec.result(name, seed, start)


def check_comparison_domination(seed: int, scale: Scale) -> CheckResult:
    name, start = "state_vs_unitary_domination", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    sets = {n: enumerate_stabilizer_states(n) for n in range(1, scale.enum_max + 1)}
    for _ in range(max(5, scale.pairs // 25)):
        n = int(rng.integers(1, scale.enum_max + 1))
        c = random_clifford_t_circuit(n, 5 * n, rng)
        U = build_unitary(c)
        v = compute_s_unitary(U).nullity
        best = max_state_nullity(U, sets[n])
        rec.check(best.max <= v, circuit=_text(c), v=v, state_max=best.max)
    return rec.result(name, seed, start)


def check_aux_attainment(seed: int, scale: Scale) -> CheckResult:
    name, start = "ancilla_attainment", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    fixed = [parse("qubits 1\nt 0\n"), parse("qubits 1\ns 0\nt 0\n"), controlled_s(),
             parse("qubits 2\ncz 0 1\nt 0\nh 1\nt 1\n")]
    randoms = [random_clifford_t_circuit(int(rng.integers(1, 3)), 8, rng) for _ in range(scale.aux_circuits)]
    for c in fixed + randoms:
        U = build_unitary(c)
        v = compute_s_unitary(U).nullity
        a = aux_nullity(U, maximally_entangled(c.width, Backend.EXACT))
        rec.check(a == v, circuit=_text(c), v=v, aux=a)
    return rec.result(name, seed, start)


def check_aux_domination(seed: int, scale: Scale) -> CheckResult:
    """No stabilizer ancilla beats v(U)."""
    name, start = "ancilla_domination", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(max(3, scale.aux_circuits // 10)):
        n = int(rng.integers(1, 3))
        c = random_clifford_t_circuit(n, 6, rng)
        U = build_unitary(c, "float")
        v = compute_s_unitary(U).nullity
        for d in range(0, 3):
            m = d + n
            if m <= 3:
                pool = list(enumerate_stabilizer_states(m))
            else:
                pool = sample_stabilizer_states(m, scale.ancilla_samples, rng)
            worst = max(aux_nullity(U, phi) for phi in pool)
            rec.check(worst <= v, circuit=_text(c), d=d, v=v, best_ancilla=worst)
    return rec.result(name, seed, start)


def check_strict_separation(seed: int, scale: Scale) -> CheckResult:
    name, start = "strict_separation", time.perf_counter()
    rec = _Recorder()
    U = build_unitary(special_family(3))
    v = compute_s_unitary(U).nullity
    best = max_state_nullity(U, enumerate_stabilizer_states(3))
    aux = aux_nullity(U, maximally_entangled(3, Backend.EXACT))
    rec.check(v == 6 and best.max <= 3 and aux == 6, v=v, state_max=best.max, aux=aux)
    return rec.result(name, seed, start, v=v, state_max=best.max, aux=aux)


def theorem_2n_check(n: int, seed: int = 0, pairs: int = 50) -> CheckResult:
    """s = 1, v = 2n for the special family, plus the trace factorization."""
    name, start = f"theorem_2n[n={n}]", time.perf_counter()
    if not 3 <= n <= 5:
        raise ValueError("the 2n family is checked for 3 <= n <= 5")
    rng, rec = _rng(seed, name), _Recorder()
    U = build_unitary(special_family(n), max_qubits=max(n, 7))
    report = compute_s_unitary(U)
    group = pa.LabelSubgroup.from_labels(n, report.labels)
    rec.check(report.s_value == 1 and report.nullity == 2 * n and group.size == 1,
              s=report.s_value, nullity=report.nullity)
    Uf = U.to_numpy()
    for _ in range(pairs):
        s, t, p, q = (int(x) for x in rng.integers(0, 2**n, size=4))
        # X^s Z^t as a real matrix: the Hermitian Pauli times i^{-|s&t|}
        su = pa.to_dense(pa.PhasedPauli(pa.PauliLabel(n, s, t), -bin(s & t).count("1"))).data
        sv = pa.to_dense(pa.PhasedPauli(pa.PauliLabel(n, p, q), -bin(p & q).count("1"))).data
        direct = np.trace(su @ Uf @ sv @ Uf.conj().T)
        factor = (-1) ** (_dot(s, p) + _dot(s, t)) * f_closed_form(p, t, s, n) * f_closed_form(q, s, p, n) / 2**n
        rec.check(abs(direct - factor) <= 1e-9, s=s, t=t, p=p, q=q, direct=complex(direct).real, factorized=factor)
    return rec.result(name, seed, start, s=report.s_value, nullity=report.nullity)


def check_f_closed_form(seed: int, scale: Scale) -> CheckResult:
    name, start = "f_closed_form", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for n in (1, 2, 3):
        for q in range(2**n):
            for s in range(2**n):
                for p in range(2**n):
                    a, b = f_closed_form(q, s, p, n), f_brute(q, s, p, n)
                    rec.check(a == b, n=n, q=q, s=s, p=p, closed=a, brute=b)
    for n in (4, 5):
        for _ in range(scale.f_random):
            q, s, p = (int(x) for x in rng.integers(0, 2**n, size=3))
            a, b = f_closed_form(q, s, p, n), f_brute(q, s, p, n)
            rec.check(a == b, n=n, q=q, s=s, p=p, closed=a, brute=b)
    return rec.result(name, seed, start)


def _single_qubit_cliffords() -> list[Circuit]:
    """The 24 single-qubit Cliffords modulo phase, as H/S words."""
    seen: dict[bytes, Circuit] = {}
    frontier = [Circuit(1, (), name="I")]
    while frontier:
        nxt = []
        for c in frontier:
            m = build_unitary(c, "float").to_numpy()
            idx = np.flatnonzero(np.abs(m.reshape(-1)) > 1e-9)[0]
            m = m * abs(m.reshape(-1)[idx]) / m.reshape(-1)[idx]
            key = np.rint(np.concatenate([m.real, m.imag]).reshape(-1) * 2**20).astype(np.int64).tobytes()
            if key in seen:
                continue
            seen[key] = c
            for g in ("h", "s"):
                nxt.append(Circuit(1, c.gates + (Gate(g, (0,)),), name=(c.name or "") + g))
        frontier = nxt
    return list(seen.values())


def state_subadditivity_counterexample(cliffords: list[Circuit] | None = None, seed: int = 0) -> CheckResult:
    """psi = C|0>, U = e^{iX} H C^-1, V = C H C^-1 gives (0, 0, 1)."""
    name, start = "state_subadditivity_counterexample", time.perf_counter()
    rec = _Recorder()
    if cliffords is None:
        cliffords = _single_qubit_cliffords()
    values = []
    for c in cliffords:
        cinv = c.inverse()
        h = Circuit(1, (Gate("h", (0,)),))
        u_circ = cinv + h + Circuit(1, (exp_ix_gate(0),))
        v_circ = cinv + h + c
        U, V = build_unitary(u_circ, "float"), build_unitary(v_circ, "float")
        psi = apply(build_unitary(c, "float"), basis_state(1, 0))
        uv = U @ V
        triple = (compute_s_state(apply(U, psi)).nullity, compute_s_state(apply(V, psi)).nullity,
                  compute_s_state(apply(uv, psi)).nullity)
        vu_, vv_, vuv = (compute_s_unitary(m).nullity for m in (U, V, uv))
        values.append(triple)
        rec.check(triple == (0, 0, 1) and vuv <= vu_ + vv_, clifford=c.name, states=triple,
                  unitary=(vu_, vv_, vuv))
    return rec.result(name, seed, start, cliffords=len(cliffords))


def transpose_trick_check(M: np.ndarray | Matrix, atol: float = 1e-10) -> CheckResult:
    """(M (x) I)|Phi> == (I (x) M^T)|Phi>."""
    name, start = "transpose_trick", time.perf_counter()
    rec = _Recorder()
    if isinstance(M, Matrix):
        n, data = M.n, M.to_numpy()
    else:
        data = np.asarray(M, dtype=complex)
        n = int(round(math.log2(data.shape[0])))
    phi = maximally_entangled(n).to_numpy()
    eye = np.eye(2**n)
    left = np.kron(data, eye) @ phi
    right = np.kron(eye, data.T) @ phi
    rec.check(np.max(np.abs(left - right)) <= atol, n=n, err=float(np.max(np.abs(left - right))))
    return rec.result(name, None, start)


def check_transpose_trick(seed: int, scale: Scale) -> CheckResult:
    name, start = "transpose_trick", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(10):
        n = int(rng.integers(1, 4))
        M = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
        ok = transpose_trick_check(M).passed
        phi = maximally_entangled(n).to_numpy()
        eye = np.eye(2**n)
        differs = np.max(np.abs(np.kron(M, eye) @ phi - np.kron(eye, M) @ phi)) > 1e-6
        rec.check(ok and differs, n=n)
    return rec.result(name, seed, start)


def check_nonzero_pattern(seed: int, scale: Scale) -> CheckResult:
    name, start = "nonzero_pattern", time.perf_counter()
    rng, rec = _rng(seed, name), _Recorder()
    for _ in range(100):
        n = int(rng.integers(1, 5))
        u = pa.PauliLabel.from_vector(n, int(rng.integers(0, 4**n)))
        pattern = np.abs(pa.to_dense(u).data)
        x_part = pa.PauliLabel(n, u.x_mask, 0)
        rec.check(np.array_equal(pattern, pa.to_dense(x_part).data.real)
                  and x_part in pa.LabelSubgroup.x_type(n), label=str(u))
    return rec.result(name, seed, start)


def check_padding(seed: int, scale: Scale) -> CheckResult:
    name, start = "padding_monotonicity", time.perf_counter()
    rec = _Recorder()
    cases = [(parse("qubits 1\nt 0\n"), 1, 0), (parse("qubits 1\nh 0\n"), 1, 0),
             (parse("qubits 1\nt 0\n"), 2, 1), (controlled_s(), 1, 0)]
    for c, d, dp in cases:
        res = padding_monotonicity_check(build_unitary(c, "float"), d, dp, seed=seed, samples=scale.ancilla_samples)
        rec.check(res.ok, circuit=_text(c), d=d, d_prime=dp, best=(res.best_d, res.best_d_prime))
    return rec.result(name, seed, start)


def check_t_count_soundness(seed: int, scale: Scale) -> CheckResult:
    name, start = "t_count_soundness", time.perf_counter()
    rec = _Recorder()
    toffoli = None
    for c in clifford_t_corpus(seed, max_qubits=scale.max_n + 1):
        b = t_count_lower_bound(c)
        rec.check(b.bound <= b.t_gates_used, circuit=c.name, bound=b.bound, used=b.t_gates_used)
        if c.name == "toffoli_7t":
            toffoli = (b.bound, b.t_gates_used)
            rec.check(toffoli == (3, 7), circuit=c.name, bound=b.bound, used=b.t_gates_used)
    return rec.result(name, seed, start, toffoli=toffoli)


def check_backend_agreement(seed: int, scale: Scale) -> CheckResult:
    name, start = "backend_agreement", time.perf_counter()
    rec = _Recorder()
    for c in clifford_t_corpus(seed, max_qubits=scale.max_n + 1):
        se = compute_s_unitary(build_unitary(c, "exact")).s_value
        sf = compute_s_unitary(build_unitary(c, "float")).s_value
        rec.check(se == sf, circuit=c.name, exact=se, float=sf)
    return rec.result(name, seed, start)


def _two_n_checks(seed: int, scale: Scale) -> list[CheckResult]:
    return [theorem_2n_check(n, seed) for n in scale.two_n]


def _wrap(fn: Callable) -> Callable[[int, Scale], list[CheckResult]]:
    return lambda seed, scale: [fn(seed, scale)]


_CHECKS: dict[str, Callable[[int, Scale], list[CheckResult]]] = {
    "lagrange_product": _wrap(check_lagrange),
    "faithfulness": _wrap(check_faithfulness),
    "clifford_invariance": _wrap(check_clifford_invariance),
    "tensor_additivity": _wrap(check_tensor_additivity),
    "composition_subadditivity": _wrap(check_composition),
    "subgroup_size_and_integrality": _wrap(check_congs),
    "transfer_matrix_uniqueness": _wrap(check_transfer_uniqueness),
    "stab_equivalence": _wrap(check_stab_equivalence),
    "diagonal_equality": _wrap(check_diagonal_equality),
    "state_vs_unitary_domination": _wrap(check_comparison_domination),
    "ancilla_attainment": _wrap(check_aux_attainment),
    "ancilla_domination": _wrap(check_aux_domination),
    "strict_separation": _wrap(check_strict_separation),
    "theorem_2n": _two_n_checks,
    "f_closed_form": _wrap(check_f_closed_form),
    "state_subadditivity_counterexample": lambda seed, scale: [state_subadditivity_counterexample(seed=seed)],
    "transpose_trick": _wrap(check_transpose_trick),
    "nonzero_pattern": _wrap(check_nonzero_pattern),
    "padding_monotonicity": _wrap(check_padding),
    "t_count_soundness": _wrap(check_t_count_soundness),
    "backend_agreement": _wrap(check_backend_agreement),
}


def check_names() -> list[str]:
    return list(_CHECKS)


def _scale(scale: str | Scale) -> Scale:
    if isinstance(scale, Scale):
        return scale
    try:
        return SCALES[scale]
    except KeyError:
        raise ValueError(f"unknown scale {scale!r}; choose from {sorted(SCALES)}") from None


def run_check(name: str, seed: int = 0, scale: str | Scale = "standard") -> list[CheckResult]:
    """Replay one named check."""
    if name not in _CHECKS:
        raise KeyError(f"unknown check {name!r}")
    sc = _scale(scale)
    try:
        return _CHECKS[name](seed, sc)
    except Exception as exc:  # a crash is a failure with a witness, not an abort
        return [CheckResult(name, False, {"error": f"{type(exc).__name__}: {exc}"}, 0.0, seed)]


def run_all(seed: int = 0, scale: str | Scale = "standard", threads: int = 1) -> list[CheckResult]:
    """Every check, in a fixed order; deterministic for a given seed and scale."""
    sc = _scale(scale)
    names = check_names()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda nm: run_check(nm, seed, sc), names))
    else:
        parts = [run_check(nm, seed, sc) for nm in names]
    return [r for part in parts for r in part]
