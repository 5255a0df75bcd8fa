import json
from pathlib import Path

import pytest

from stabnull import theorems
from stabnull.cli import main
from stabnull.nullity import NullityReport

CIRCUITS = Path(__file__).resolve().parent.parent / "circuits"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestGate:
    def test_single_t(self, capsys):
        code, out, _ = run(capsys, "gate", "--file", str(CIRCUITS / "t.qc"))
        assert code == 0
        assert "nullity: 1" in out
        assert "t_count_lower_bound >= 1" in out
        assert "T gates in circuit: 1" in out
        assert "backend: exact" in out

    def test_special_family(self, capsys):
        code, out, _ = run(capsys, "gate", "--file", str(CIRCUITS / "special3.qc"))
        assert code == 0 and "nullity: 6" in out and "Clifford: no" in out

    def test_bell_prep(self, capsys):
        code, out, _ = run(capsys, "gate", "--file", str(CIRCUITS / "bell_prep.qc"))
        assert code == 0 and "nullity: 0" in out and "Clifford: yes" in out

    def test_json_round_trip(self, capsys):
        code, out, _ = run(capsys, "gate", "--file", str(CIRCUITS / "toffoli_7t.qc"), "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert (data["t_count_lower_bound"], data["t_gates"]) == (3, 7)
        report = NullityReport.from_dict(data)
        assert report.nullity == 3
        assert json.loads(report.to_json())["entries"] == data["entries"]

    def test_json_is_byte_identical_across_threads(self, capsys):
        path = str(CIRCUITS / "special3.qc")
        _, one, _ = run(capsys, "gate", "--file", path, "--format", "json", "--threads", "1")
        _, four, _ = run(capsys, "gate", "--file", path, "--format", "json", "--threads", "4")
        assert one == four

    def test_float_backend_flag(self, capsys):
        code, out, _ = run(capsys, "gate", "--circuit", "qubits 1;t 0", "--backend", "float")
        assert code == 0 and "backend: float" in out and "nullity: 1" in out

    def test_parse_error_exit_code(self, capsys):
        code, _, err = run(capsys, "gate", "--circuit", "qubits 2;h 0;foo 1")
        assert code == 2
        assert "line 3, column 1" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, _ = run(capsys, "gate", "--file", str(tmp_path / "absent.qc"))
        assert code == 2

    def test_width_cap_exit_code(self, capsys):
        code, _, err = run(capsys, "gate", "--circuit", "qubits 9;h 0")
        assert code == 3 and "cap" in err
        code, _, _ = run(capsys, "gate", "--circuit", "qubits 2;h 0", "--max-qubits", "1")
        assert code == 3

    def test_exact_backend_rejects_float_gates(self, capsys):
        code, _, _ = run(capsys, "gate", "--circuit", "qubits 1;diag 1,0 0.6,0.8", "--backend", "exact")
        assert code == 3

    def test_env_override(self, capsys, monkeypatch):
        monkeypatch.setenv("STABNULL_BACKEND", "float")
        code, out, _ = run(capsys, "gate", "--circuit", "qubits 1;t 0")
        assert "backend: float" in out
        code, out, _ = run(capsys, "gate", "--circuit", "qubits 1;t 0", "--backend", "exact")
        assert "backend: exact" in out


class TestState:
    def test_ccz_on_plus(self, capsys):
        code, out, _ = run(capsys, "state", "--file", str(CIRCUITS / "ccz.qc"), "--init", "plus")
        assert code == 0 and "nullity: 3" in out

    def test_empty_circuit(self, capsys):
        code, out, _ = run(capsys, "state", "--circuit", "qubits 1")
        assert code == 0
        assert "nullity: 0" in out
        assert "Stab: {I, Z}" in out

    def test_t_on_plus(self, capsys):
        code, out, _ = run(capsys, "state", "--circuit", "qubits 1;t 0", "--init", "plus")
        assert "nullity: 1" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "state", "--file", str(CIRCUITS / "bell_prep.qc"), "--format", "json")
        data = json.loads(out)
        assert sorted(data["stab_generators"]) == ["XX", "ZZ"]
        assert NullityReport.from_dict(data).s_value == 4


class TestCompare:
    def test_special_family(self, capsys):
        code, out, _ = run(capsys, "compare", "--file", str(CIRCUITS / "special3.qc"), "--format", "json")
        data = json.loads(out)
        assert code == 0
        assert (data["unitary_nullity"], data["state_max"], data["aux_max_entangled"]) == (6, 3, 6)
        assert data["strict_separation"] is True

    def test_ccz(self, capsys):
        code, out, _ = run(capsys, "compare", "--file", str(CIRCUITS / "ccz.qc"))
        assert code == 0
        assert "v(U): 3" in out and "strict separation: no" in out

    def test_clifford(self, capsys):
        code, out, _ = run(capsys, "compare", "--file", str(CIRCUITS / "bell_prep.qc"), "--format", "json")
        data = json.loads(out)
        assert (data["unitary_nullity"], data["state_max"], data["aux_max_entangled"]) == (0, 0, 0)


class TestVerify:
    def test_smoke(self, capsys):
        code, out, _ = run(capsys, "verify", "--scale", "smoke", "--seed", "7")
        assert code == 0
        assert "FAIL" not in out

    def test_json_deterministic(self, capsys):
        _, a, _ = run(capsys, "verify", "--scale", "smoke", "--format", "json", "--threads", "1")
        _, b, _ = run(capsys, "verify", "--scale", "smoke", "--format", "json", "--threads", "3")
        assert a == b
        assert all(r["status"] == "pass" for r in json.loads(a))

    def test_corrupted_build_fails_with_witness(self, capsys, monkeypatch):
        real = theorems.compute_s_unitary

        def flipped(U, threads=1):
            # one wrong entry: the T gate's s-value is replaced by that of S
            return real(U @ U, threads) if U.n == 1 else real(U, threads)

        monkeypatch.setattr(theorems, "compute_s_unitary", flipped)
        code, out, _ = run(capsys, "verify", "--scale", "smoke")
        assert code == 1
        assert "FAIL" in out and "witness" in out
