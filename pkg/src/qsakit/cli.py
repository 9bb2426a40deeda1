"""JSON batch front-end for compiling, verifying and analyzing schedules.

Every invocation prints one RunReport JSON document to standard output and
exits 0 when all checks pass, 1 when a check fails (the failing check names
the violated invariant), 2 on malformed input and 3 when the dense oracle's
resource limit (env ``QSA_MAX_DENSE_QUBITS``) is exceeded.  Reports are
deterministic: identical input files, arguments and ``--seed`` produce
byte-identical output.  Artifacts (compiled schedules) go to files named by
``--out``; reports never mix with artifacts.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

import numpy as np

from . import analysis, anyon_logic
from .dense_oracle import (
    MATRIX_QUBIT_CAP,
    ResourceLimitError,
    Statevector,
    distance,
    expm,
    max_dense_qubits,
    schedule_unitary,
    verify_schedule,
)
from .pauli_core import PauliString, WeightedPauliSum, commutes
from .schedule_compiler import (
    ConnectivityGraph,
    QsaSchedule,
    compile_schedule,
    validate,
)
from .toric_lattice import (
    LatticeSpec,
    build_variant,
    digital_sequence,
    ground_state_projector,
    ground_state_sweep,
)

EXIT_PASS = 0
EXIT_CHECK_FAILURE = 1
EXIT_MALFORMED_INPUT = 2
EXIT_RESOURCE_LIMIT = 3


class CliInputError(ValueError):
    """Unreadable or structurally invalid input file/argument."""


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliInputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path} is not valid JSON: {exc}") from exc


def _digest(argv, paths) -> str:
    """sha256 over the argument vector and every input file's bytes."""
    h = hashlib.sha256()
    h.update("\x1f".join(argv).encode("utf-8"))
    for path in paths:
        h.update(b"\x1e")
        try:
            with open(path, "rb") as fh:
                h.update(fh.read())
        except OSError:
            h.update(b"<unreadable>")
    return h.hexdigest()


def _jsonable(value):
    """Recursively coerce report values to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, complex):
        return [float(value.real), float(value.imag)]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, PauliString):
        return value.format()
    return value


def _check(name: str, passed: bool, detail=None) -> dict:
    entry = {"name": name, "passed": bool(passed)}
    if detail is not None:
        entry["detail"] = _jsonable(detail)
    return entry


def _print_report(report: dict) -> None:
    sys.stdout.write(json.dumps(_jsonable(report), indent=2, sort_keys=True))
    sys.stdout.write("\n")


# -- subcommand handlers ------------------------------------------------------------
# Each handler returns (checks, metrics, artifacts, input_paths).


def _cmd_compile(args):
    target = PauliString.parse(args.target)
    paths = []
    if args.graph is not None:
        graph = ConnectivityGraph.from_dict(_load_json(args.graph))
        paths.append(args.graph)
    else:
        graph = ConnectivityGraph.complete(target.n_sites)
    schedule = compile_schedule(target, graph, strategy=args.strategy, tg=args.tg)

    checks = []
    violations = validate(schedule, graph)
    if violations:
        checks.extend(_check(v, False) for v in violations)
    else:
        checks.append(_check("validator-clean", True))

    metrics = {
        "target": target.format(),
        "n_sites": schedule.n_sites,
        "depth": schedule.depth,
        "n_attachments": schedule.n_attachments,
        "n_swappers": len(schedule.final_swappers),
        "strategy": args.strategy,
        "tg": schedule.tg,
    }
    if schedule.n_sites <= max_dense_qubits():
        report = verify_schedule(schedule)
        checks.append(
            _check(
                "dense-identity",
                report["passed"],
                f"{report['metric']} = {report['distance']:.3e}",
            )
        )
        metrics["dense_distance"] = report["distance"]
    else:
        metrics["dense_verification"] = "skipped: register above dense limit"

    artifacts = []
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(schedule.to_json())
            fh.write("\n")
        with open(args.out, encoding="utf-8") as fh:
            reread = QsaSchedule.from_json(fh.read())
        checks.append(
            _check("artifact-round-trip", not validate(reread, graph))
        )
        artifacts.append(args.out)
    return checks, metrics, artifacts, paths


def _cmd_verify(args):
    data = _load_json(args.schedule)
    try:
        schedule = QsaSchedule.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise CliInputError(f"bad schedule file: {exc}") from exc
    paths = [args.schedule]
    graph = None
    if args.graph is not None:
        graph = ConnectivityGraph.from_dict(_load_json(args.graph))
        paths.append(args.graph)

    checks = []
    violations = validate(schedule, graph)
    if violations:
        checks.extend(_check(v, False) for v in violations)
    else:
        checks.append(_check("validator-clean", True))

    metrics = {
        "target": schedule.target.format(),
        "n_sites": schedule.n_sites,
        "depth": schedule.depth,
        "tg": schedule.tg if args.tg is None else args.tg,
    }
    if not violations:
        report = verify_schedule(schedule, tg=args.tg)
        checks.append(
            _check(
                "dense-identity",
                report["passed"],
                f"{report['metric']} = {report['distance']:.3e}",
            )
        )
        metrics["dense_distance"] = report["distance"]
        metrics["dense_metric"] = report["metric"]
    return checks, metrics, [], paths


def _lattice_spec(path: str) -> LatticeSpec:
    try:
        return LatticeSpec.from_dict(_load_json(path))
    except (KeyError, TypeError) as exc:
        raise CliInputError(f"bad lattice spec {path}: {exc}") from exc


def _cmd_toric(args):
    spec = _lattice_spec(args.spec)
    paths = [args.spec]
    checks = []
    metrics = {
        "rows": spec.rows,
        "cols": spec.cols,
        "boundary": spec.boundary,
        "model": spec.model,
        "n_sites": spec.n_sites,
    }

    if args.action == "build":
        pset = build_variant(spec)
        ops = pset.operators()
        pairwise = all(
            commutes(a, b) for k, a in enumerate(ops) for b in ops[k + 1 :]
        )
        checks.append(_check("terms-pairwise-commute", pairwise))
        group_ok = True
        for group, terms in sorted(pset.groups().items()):
            seen = set()
            for term in terms:
                support = set(term.operator.support)
                if support & seen:
                    group_ok = False
                seen |= support
        checks.append(_check("groups-support-disjoint", group_ok))
        metrics["n_terms"] = len(pset.terms)
        metrics["group_sizes"] = {
            str(g): len(t) for g, t in sorted(pset.groups().items())
        }

    elif args.action == "ground":
        reference = ground_state_projector(spec)
        ops = build_variant(spec).operators()
        if spec.boundary == "open":
            swept, stages = ground_state_sweep(spec)
            fid = swept.fidelity(reference)
            checks.append(
                _check(
                    "sweep-matches-projector",
                    fid >= 1.0 - 1e-10,
                    f"|<sweep|projector>| = {fid:.12f}",
                )
            )
            metrics["sweep_fidelity"] = fid
            metrics["sweep_stages"] = len(stages)
            state = swept
        else:
            state = reference
        expectations = [state.expectation(op) for op in ops]
        worst = min(x.real for x in expectations) if expectations else 1.0
        checks.append(
            _check(
                "plaquette-expectations-plus-one",
                all(abs(x - 1.0) <= 1e-10 for x in expectations),
                f"min Re<P> = {worst:.12f}",
            )
        )
        metrics["min_expectation"] = worst
        metrics["n_terms"] = len(ops)

    else:  # digital
        seq = digital_sequence(spec, args.tau)
        ham = seq.hamiltonian()
        metrics["tau"] = args.tau
        metrics["n_stages"] = len(seq.stages)
        if spec.n_sites <= MATRIX_QUBIT_CAP:
            dist = distance(seq.unitary(), expm(ham, args.tau))
            checks.append(
                _check(
                    "digital-matches-exponential",
                    dist <= 1e-8,
                    f"spectral distance = {dist:.3e}",
                )
            )
            metrics["distance"] = dist
        else:
            worst = 0.0
            for k in range(args.probes):
                probe = Statevector.random(spec.n_sites, args.seed + k)
                via_seq = seq.apply(probe)
                via_exp = probe.apply_rotation(ham, args.tau)
                infid = 1.0 - abs(via_seq.inner(via_exp)) ** 2
                worst = max(worst, infid)
            checks.append(
                _check(
                    "digital-matches-exponential",
                    worst <= 1e-8,
                    f"max infidelity over {args.probes} probes = {worst:.3e}",
                )
            )
            metrics["max_infidelity"] = worst
            metrics["n_probes"] = args.probes
    return checks, metrics, [], paths


def _payload(args) -> dict:
    if args.path is None:
        return {}
    data = _load_json(args.path)
    if not isinstance(data, dict):
        raise CliInputError(f"{args.path} must hold a JSON object")
    return data


def _cmd_anyon(args):
    spec = _lattice_spec(args.spec)
    paths = [args.spec]
    if args.path is not None:
        paths.append(args.path)
    payload = _payload(args)
    checks = []
    metrics = {"n_sites": spec.n_sites}

    if args.action == "syndrome":
        if args.path is None:
            raise CliInputError("anyon syndrome requires --path")
        try:
            string_path = anyon_logic.StringPath.from_dict(payload)
        except (KeyError, TypeError) as exc:
            raise CliInputError(f"bad path file: {exc}") from exc
        predicted = anyon_logic.predict_syndrome(string_path, spec)
        actual = anyon_logic.syndrome_of(string_path, spec)
        checks.append(
            _check(
                "prediction-matches-anticommutation",
                predicted.entries == actual.entries,
                {"predicted": predicted.to_dict(), "actual": actual.to_dict()},
            )
        )
        metrics["syndrome"] = actual.to_dict()
        metrics["string"] = anyon_logic.path_string(string_path, spec).format()
        metrics["closed"] = anyon_logic.path_is_closed(string_path, spec)

    elif args.action == "braid":
        center = tuple(payload.get("center", (1, 1)))
        report = anyon_logic.braiding_phase(spec, center)
        checks.append(
            _check(
                "braiding-phase-minus-one",
                abs(report["braiding_phase"] + 1.0) <= 1e-10,
                f"phase = {report['braiding_phase']:+.12f}",
            )
        )
        checks.append(
            _check(
                "ground-loop-expectation-plus-one",
                abs(report["expectation_ground"] - 1.0) <= 1e-10,
            )
        )
        metrics.update(
            {
                "center": list(center),
                "expectation_ground": report["expectation_ground"],
                "expectation_excited": report["expectation_excited"],
                "braiding_phase": report["braiding_phase"],
                "loop": report["loop"],
            }
        )

    elif args.action == "memory":
        raw = payload.get("amplitudes", [0.5, 0.5, 0.5, 0.5])
        if len(raw) != 4:
            raise CliInputError("memory amplitudes must hold four entries")
        amplitudes = [
            complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a)
            for a in raw
        ]
        norm = math.sqrt(sum(abs(a) ** 2 for a in amplitudes))
        if norm == 0:
            raise CliInputError("memory amplitudes must not all vanish")
        amplitudes = [a / norm for a in amplitudes]
        basis = anyon_logic.memory_basis(spec)
        worst_pair = max(
            abs(basis[i].inner(basis[j]))
            for i in range(4)
            for j in range(i + 1, 4)
        )
        checks.append(
            _check(
                "basis-pairwise-orthogonal",
                worst_pair <= 1e-10,
                f"max |overlap| = {worst_pair:.3e}",
            )
        )
        encoded = anyon_logic.memory_encode(spec, amplitudes)
        overlaps = [b.inner(encoded) for b in basis]
        err = max(abs(o - a) for o, a in zip(overlaps, amplitudes))
        checks.append(
            _check(
                "encoded-overlaps-match",
                err <= 1e-8,
                f"max |<basis|state> - target| = {err:.3e}",
            )
        )
        metrics["amplitudes"] = amplitudes
        metrics["overlaps"] = overlaps
        metrics["max_overlap_error"] = err

    elif args.action == "magic":
        theta = float(payload.get("theta", math.pi / 4.0))
        qubit = _hole_qubit_from_payload(payload, spec, "hole", default=0)
        report = anyon_logic.magic_report(qubit, theta, spec)
        checks.append(
            _check(
                "magic-state-fidelity",
                report["fidelity"] >= 1.0 - 1e-10,
                f"fidelity = {report['fidelity']:.12f}",
            )
        )
        metrics.update(
            {
                "theta": theta,
                "fidelity": report["fidelity"],
                "overlap_zero": report["overlap_zero"],
                "overlap_one": report["overlap_one"],
                "recorded_phase": report["recorded_phase"],
            }
        )

    else:  # cnot
        control = _hole_from_payload(payload, spec, "control", default=0)
        target = _hole_from_payload(payload, spec, "target", default=1)
        gate = anyon_logic.loop_cnot(control, target, spec)
        table = gate.truth_table()
        for row in table["rows"]:
            c, t = row["input"]
            checks.append(
                _check(
                    f"truth-table-row-{c}{t}",
                    row["distance"] <= 1e-8,
                    f"|out - expected| = {row['distance']:.3e}",
                )
            )
        metrics["max_distance"] = table["max_distance"]
        metrics["braid"] = gate.braid.format()
        metrics["braid_weight"] = gate.braid.weight
        metrics["recorded_phase_control1"] = complex(-1j)
    return checks, metrics, [], paths


def _hole_from_payload(payload, spec, key, default):
    idx = int(payload.get(key, default))
    if not (0 <= idx < len(spec.holes)):
        raise CliInputError(
            f"{key} hole index {idx} out of range: spec defines "
            f"{len(spec.holes)} hole(s)"
        )
    return spec.holes[idx]


def _hole_qubit_from_payload(payload, spec, key, default):
    return anyon_logic.hole_qubit(_hole_from_payload(payload, spec, key, default), spec)


def _cmd_analyze(args):
    checks = []
    metrics = {}
    paths = []

    if args.action == "strength":
        params = analysis.StrengthParams(
            g=args.g,
            t=args.t,
            tau=args.tau,
            tau_prime=args.tau_prime,
            omega=args.omega,
            omega_prime=args.omega_prime,
            n=args.n,
        )
        g_prime = analysis.strength_target(params)
        t_prime = params.total_time()
        tau, tau_prime = params.durations()
        conserved = abs(params.t * params.g - t_prime * g_prime)
        checks.append(
            _check(
                "conservation-tg",
                conserved <= 1e-12 * max(1.0, abs(params.t * params.g)),
                f"|t g - t' g'| = {conserved:.3e}",
            )
        )
        metrics.update(
            {
                "g": params.g,
                "t": params.t,
                "tau": tau,
                "tau_prime": tau_prime,
                "n": params.n,
                "g_prime": g_prime,
                "t_prime": t_prime,
                "regime_tau_exceeds_t": bool(tau + tau_prime > params.t),
            }
        )
        if params.n == 1:
            g_w = analysis.strength_toric(params)
            checks.append(_check("toric-quarter-of-target", g_w * 4.0 == g_prime))
            metrics["g_wall"] = g_w
            metrics["wall_ratio"] = g_w / params.g if params.g else None

    else:  # error-scaling
        if (args.schedule is None) == (args.digital is None):
            raise CliInputError(
                "provide exactly one subject: --schedule or --digital"
            )
        if args.schedule is not None:
            data = _load_json(args.schedule)
            try:
                subject = QsaSchedule.from_dict(data)
            except (KeyError, TypeError, ValueError) as exc:
                raise CliInputError(f"bad schedule file: {exc}") from exc
            paths.append(args.schedule)
        else:
            spec = _lattice_spec(args.digital)
            subject = digital_sequence(
                spec, 0.3 if args.tau is None else args.tau
            )
            paths.append(args.digital)
        try:
            deltas = tuple(float(x) for x in args.deltas.split(","))
        except ValueError as exc:
            raise CliInputError(f"bad --deltas list: {exc}") from exc
        report = analysis.error_scaling(
            subject,
            deltas=deltas,
            random_offsets=args.random_offsets,
            seed=args.seed,
        )
        checks.append(
            _check(
                "slope-first-order",
                0.9 <= report.slope <= 1.1,
                f"log-log slope = {report.slope:.4f}",
            )
        )
        metrics.update(report.to_dict())
    return checks, metrics, [], paths


# -- parser -------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", type=int, default=11, help="oracle state-sampling seed"
    )

    parser = argparse.ArgumentParser(
        prog="qsakit",
        description="Compile, verify and analyze exact N-body pulse schedules.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", parents=[common], help="compile a Pauli target")
    p.add_argument("--target", required=True, help="Pauli literal, e.g. XZZX")
    p.add_argument("--graph", default=None, help="connectivity graph JSON file")
    p.add_argument(
        "--strategy",
        default="auto",
        choices=["auto", "doubling", "line_endpoints", "single_endpoint", "greedy"],
    )
    p.add_argument("--tg", type=float, default=1.0)
    p.add_argument("--out", default=None, help="write the schedule JSON here")
    p.set_defaults(handler=_cmd_compile)

    p = sub.add_parser("verify", parents=[common], help="verify a schedule file")
    p.add_argument("--schedule", required=True)
    p.add_argument("--tg", type=float, default=None)
    p.add_argument("--graph", default=None)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("toric", parents=[common], help="lattice builds and states")
    p.add_argument("action", choices=["build", "ground", "digital"])
    p.add_argument("--spec", required=True, help="lattice spec JSON file")
    p.add_argument("--tau", type=float, default=0.3)
    p.add_argument("--probes", type=int, default=5)
    p.set_defaults(handler=_cmd_toric)

    p = sub.add_parser("anyon", parents=[common], help="anyon experiments")
    p.add_argument(
        "action", choices=["syndrome", "braid", "memory", "magic", "cnot"]
    )
    p.add_argument("--spec", required=True, help="lattice spec JSON file")
    p.add_argument(
        "--path",
        default=None,
        help="experiment payload JSON (string path, amplitudes, hole indexes...)",
    )
    p.set_defaults(handler=_cmd_anyon)

    p = sub.add_parser("analyze", parents=[common], help="strength and error scaling")
    p.add_argument("action", choices=["strength", "error-scaling"])
    p.add_argument("--g", type=float, default=1.0)
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--tau-prime", type=float, default=None)
    p.add_argument("--omega", type=float, default=None)
    p.add_argument("--omega-prime", type=float, default=None)
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--schedule", default=None)
    p.add_argument("--digital", default=None, help="lattice spec JSON file")
    p.add_argument("--deltas", default="1e-2,1e-3,1e-4")
    p.add_argument("--random-offsets", action="store_true")
    p.set_defaults(handler=_cmd_analyze)
    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_MALFORMED_INPUT if exc.code else int(exc.code or 0)

    report = {"command": argv, "seed": args.seed}
    try:
        checks, metrics, artifacts, paths = args.handler(args)
    except ResourceLimitError as exc:
        report.update(
            {
                "status": "resource-limit",
                "error": str(exc),
                "inputs_digest": _digest(argv, []),
                "checks": [],
                "metrics": {},
                "artifacts": [],
            }
        )
        _print_report(report)
        return EXIT_RESOURCE_LIMIT
    except (CliInputError, ValueError, TypeError, KeyError) as exc:
        report.update(
            {
                "status": "malformed-input",
                "error": f"{type(exc).__name__}: {exc}",
                "inputs_digest": _digest(argv, []),
                "checks": [],
                "metrics": {},
                "artifacts": [],
            }
        )
        _print_report(report)
        return EXIT_MALFORMED_INPUT

    passed = all(c["passed"] for c in checks)
    report.update(
        {
            "status": "pass" if passed else "fail",
            "inputs_digest": _digest(argv, paths),
            "checks": checks,
            "metrics": metrics,
            "artifacts": artifacts,
        }
    )
    _print_report(report)
    return EXIT_PASS if passed else EXIT_CHECK_FAILURE
