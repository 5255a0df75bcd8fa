"""Command-line frontend.

Exit codes: 0 success, 1 a check failed, 2 circuit parse error, 3 resource cap
or backend error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .backend import Backend, basis_state
from .circuit import Circuit, apply_circuit, build_unitary, count_t_gates, parse, resolve_backend
from .errors import BackendError, CircuitParseError, InvariantViolation, ResourceLimitError
from .nullity import compute_s_state, compute_s_unitary, stab_group
from .pauli import LabelSubgroup
from .stabilizer import (
    MAX_ENUM_QUBITS,
    MAX_STATE_QUBITS,
    enumerate_stabilizer_states,
    max_state_nullity,
    maximally_entangled,
    aux_nullity,
    plus_state,
    sample_stabilizer_states,
)
from .theorems import SCALES, run_all

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_RESOURCE = 0, 1, 2, 3
ENV_PREFIX = "STABNULL_"
_SAMPLED_STATES = 2000


@dataclass(frozen=True)
class CliConfig:
    command: str
    file: str | None = None
    circuit: str | None = None
    backend: str = "auto"
    format: str = "table"
    seed: int = 0
    scale: str = "standard"
    threads: int = 1
    max_qubits: int | None = None
    init: str = "zero"
    timing: bool = False


def _env(name: str, default):
    return os.environ.get(ENV_PREFIX + name, default)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=["exact", "float", "auto"], default=_env("BACKEND", "auto"))
    common.add_argument("--format", choices=["table", "json"], default=_env("FORMAT", "table"))
    common.add_argument("--seed", type=int, default=int(_env("SEED", 0)))
    common.add_argument("--threads", type=int, default=int(_env("THREADS", 1)))
    max_q = _env("MAX_QUBITS", None)
    common.add_argument("--max-qubits", type=int, default=int(max_q) if max_q else None)
    common.add_argument("--timing", action="store_true", help="include wall-clock times in the output")

    circuit_in = argparse.ArgumentParser(add_help=False)
    src = circuit_in.add_mutually_exclusive_group(required=True)
    src.add_argument("--file", help="circuit file ('-' reads stdin)")
    src.add_argument("--circuit", help="inline circuit text; ';' separates lines")

    parser = argparse.ArgumentParser(prog="stabnull", description="Stabilizer nullity of states and gates.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("gate", parents=[common, circuit_in], help="unitary nullity and T-count lower bound")
    st = sub.add_parser("state", parents=[common, circuit_in], help="nullity of the circuit applied to a state")
    st.add_argument("--init", choices=["zero", "plus"], default="zero", help="input state |0..0> or |+..+>")
    sub.add_parser("compare", parents=[common, circuit_in], help="unitary versus state versus ancilla nullity")
    ver = sub.add_parser("verify", parents=[common], help="run the theorem battery")
    ver.add_argument("--scale", choices=sorted(SCALES), default=_env("SCALE", "standard"))
    return parser


def config_from_args(argv: list[str] | None = None) -> CliConfig:
    ns = build_parser().parse_args(argv)
    return CliConfig(
        command=ns.command,
        file=getattr(ns, "file", None),
        circuit=getattr(ns, "circuit", None),
        backend=ns.backend,
        format=ns.format,
        seed=ns.seed,
        scale=getattr(ns, "scale", "standard"),
        threads=max(1, ns.threads),
        max_qubits=ns.max_qubits,
        init=getattr(ns, "init", "zero"),
        timing=ns.timing,
    )


def _load_circuit(cfg: CliConfig) -> Circuit:
    if cfg.circuit is not None:
        return parse(cfg.circuit.replace(";", "\n"), name="inline")
    if cfg.file == "-":
        return parse(sys.stdin.read(), name="stdin")
    path = Path(cfg.file)
    return parse(path.read_text(), name=path.stem)


def _report_dict(report, timing: bool) -> dict:
    d = report.to_dict()
    if not timing:
        d["elapsed_ms"] = None
    return d


def _emit(cfg: CliConfig, payload, lines: list[str]) -> None:
    if cfg.format == "json":
        print(json.dumps(payload, indent=2, default=str))
    else:
        print("\n".join(lines))


def cmd_gate(cfg: CliConfig) -> int:
    circuit = _load_circuit(cfg)
    backend = resolve_backend(circuit, cfg.backend)
    U = build_unitary(circuit, backend, max_qubits=cfg.max_qubits)
    report = compute_s_unitary(U, cfg.threads)
    used = count_t_gates(circuit)
    clifford_t = circuit.is_clifford_t()
    clifford = report.s_value == 4**circuit.width
    payload = _report_dict(report, cfg.timing)
    payload.update(t_count_lower_bound=report.nullity, t_gates=used if clifford_t else None, clifford=clifford)
    lines = [
        f"circuit: {circuit.name} ({circuit.width} qubits, {len(circuit.gates)} gates)",
        f"backend: {backend.value}",
        f"s(U): {report.s_value}",
        f"nullity: {report.nullity}",
        f"Clifford: {'yes' if clifford else 'no'}",
        f"t_count_lower_bound >= {report.nullity}",
        f"T gates in circuit: {used if clifford_t else 'n/a (not Clifford+T)'}",
    ]
    if cfg.timing:
        lines.append(f"elapsed: {report.elapsed_ms:.3f} ms")
    if report.s_value <= 64:
        lines.append("U sigma_v U^dag = sign sigma_u:")
        lines += [f"  {e.v} -> {'+' if e.sign > 0 else '-'}{e.u}" for e in report.entries]
    _emit(cfg, payload, lines)
    if clifford_t and report.nullity > used:
        return EXIT_FAIL
    return EXIT_OK


def _initial_state(cfg: CliConfig, n: int, backend: Backend):
    if cfg.init == "plus":
        return plus_state(n, backend)
    return basis_state(n, 0, backend)


def cmd_state(cfg: CliConfig) -> int:
    circuit = _load_circuit(cfg)
    n = circuit.width
    cap = MAX_STATE_QUBITS if cfg.max_qubits is None else cfg.max_qubits
    if n > cap:
        raise ResourceLimitError(f"{n} qubits exceeds the state cap of {cap}")
    backend = resolve_backend(circuit, cfg.backend)
    psi = apply_circuit(circuit, _initial_state(cfg, n, backend))
    report = compute_s_state(psi)
    group = stab_group(psi)
    sign = {p.label: p for p in group}
    gens = [str(sign[g]) for g in LabelSubgroup.from_labels(n, list(sign)).generators()]
    payload = _report_dict(report, cfg.timing)
    payload["stab_generators"] = gens
    lines = [
        f"circuit: {circuit.name} ({n} qubits) applied to |{'0' if cfg.init == 'zero' else '+'}>^{n}",
        f"backend: {backend.value}",
        f"s(psi): {report.s_value}",
        f"nullity: {report.nullity}",
        f"Stab generators: {', '.join(gens) if gens else '(none)'}",
    ]
    if len(group) <= 64:
        lines.append(f"Stab: {{{', '.join(str(p) for p in group)}}}")
    _emit(cfg, payload, lines)
    return EXIT_OK


def cmd_compare(cfg: CliConfig) -> int:
    circuit = _load_circuit(cfg)
    n = circuit.width
    backend = resolve_backend(circuit, cfg.backend)
    U = build_unitary(circuit, backend, max_qubits=cfg.max_qubits)
    v = compute_s_unitary(U, cfg.threads).nullity
    Uf = U.to_backend("float")
    if n <= MAX_ENUM_QUBITS:
        states = enumerate_stabilizer_states(n)
        best = max_state_nullity(Uf, states)
        state_max, pool, how = best.max, len(states), "enumerated"
    else:
        rng = np.random.default_rng(cfg.seed)
        sampled = sample_stabilizer_states(n, _SAMPLED_STATES, rng)
        state_max = max(compute_s_state(apply_circuit(circuit, s)).nullity for s in sampled)
        pool, how = len(sampled), "sampled (lower estimate of the maximum)"
    aux = aux_nullity(U, maximally_entangled(n, backend))
    strict = v > state_max
    payload = {
        "n": n,
        "backend": backend.value,
        "unitary_nullity": v,
        "state_max": state_max,
        "states_checked": pool,
        "states_enumerated": how == "enumerated",
        "aux_max_entangled": aux,
        "strict_separation": strict,
    }
    lines = [
        f"circuit: {circuit.name} ({n} qubits)",
        f"backend: {backend.value}",
        f"v(U): {v}",
        f"max state nullity over stabilizer inputs: {state_max} ({pool} states, {how})",
        f"ancilla nullity with maximally entangled input: {aux}",
        f"strict separation: {'yes' if strict else 'no'}",
    ]
    _emit(cfg, payload, lines)
    return EXIT_OK if aux == v and state_max <= v else EXIT_FAIL


def cmd_verify(cfg: CliConfig) -> int:
    results = run_all(cfg.seed, cfg.scale, cfg.threads)
    payload = [r.to_dict(timing=cfg.timing) for r in results]
    width = max(len(r.name) for r in results)
    lines = [f"scale: {cfg.scale}  seed: {cfg.seed}"]
    for r in results:
        line = f"{r.status.upper():4}  {r.name:<{width}}"
        if cfg.timing:
            line += f"  {r.elapsed_ms:9.1f} ms"
        lines.append(line.rstrip())
        if not r.passed:
            lines.append(f"      witness: {json.dumps(r.witness, default=str)}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    _emit(cfg, payload, lines)
    return EXIT_FAIL if failed else EXIT_OK


COMMANDS = {"gate": cmd_gate, "state": cmd_state, "compare": cmd_compare, "verify": cmd_verify}


def main(argv: list[str] | None = None) -> int:
    cfg = config_from_args(argv)
    try:
        return COMMANDS[cfg.command](cfg)
    except CircuitParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (ResourceLimitError, BackendError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except InvariantViolation as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
