"""Command-line entry point: ``pairvqe ham|vqe|scan|noise-sweep``.

Exit codes: 0 success, 1 usage error, 2 input error, 3 non-convergence.
Relative paths that do not exist are retried under ``$PAIRVQE_FIXTURES``.
"""

from __future__ import annotations

import argparse
import csv
import datetime as dt
import json
import os
import platform
import sys
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__
from .ansatz import PuccdParameters
from .estimator import MeasurementPlan, MitigationMode
from .integrals import IntegralFormatError
from .pauli import group_terms
from .vqe import VqeConfig, run_vqe
from .workflows import (
    SCAN_COLUMNS,
    SWEEP_COLUMNS,
    Problem,
    accuracy_threshold_rate,
    dissociation_scan,
    noise_sweep,
)

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_NOT_CONVERGED = 0, 1, 2, 3
FIXTURE_ENV = "PAIRVQE_FIXTURES"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    command: str
    config: dict
    seed: int | None
    fixtures: list[str]
    outputs: list[str] = field(default_factory=list)
    tool_version: str = __version__
    python: str = platform.python_version()
    started_at: str = ""
    wall_clock_seconds: float = 0.0

    def write(self, path: Path) -> None:
        path.write_text(json.dumps(asdict(self), indent=2) + "\n")


def resolve_input(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    base = os.environ.get(FIXTURE_ENV)
    if base and not p.is_absolute() and (Path(base) / p).exists():
        return Path(base) / p
    raise InputError(f"no such file or directory: {path}")


def _write_csv(path: Path, columns, rows) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})


def _sidecar(path: Path) -> Path:
    return path.with_name(path.name + ".manifest.json")


def _dump_json(path: Path, data: dict) -> None:
    path.write_text(json.dumps(data, indent=2) + "\n")


def cmd_ham(args) -> int:
    src = resolve_input(args.integrals)
    problem = Problem.load(src)
    h = problem.hamiltonian
    groups = group_terms(h)
    n_params = (problem.n_orbitals - problem.n_pairs) * problem.n_pairs
    print(f"qubits: {h.n_qubits}, groups: {len(groups)}, parameters: {n_params}")
    print(f"terms: {len(h.terms)}, constant: {h.constant:.12f} Ha")
    for g in groups:
        print(f"  {g.label}: {len(g.terms)} terms")
    if args.out:
        out = Path(args.out)
        data = h.to_json()
        data.update(
            n_pairs=problem.n_pairs,
            parameter_count=n_params,
            groups={g.label: list(g.terms) for g in groups},
            manifest=_sidecar(out).name,
        )
        _dump_json(out, data)
        args.manifest.outputs.append(str(out))
        args.manifest_path = _sidecar(out)
    args.manifest.fixtures.append(str(src))
    return EXIT_OK


def _vqe_config(args, init: PuccdParameters | None) -> VqeConfig:
    return VqeConfig(
        objective=args.objective,
        optimizer=args.optimizer,
        max_evaluations=args.max_evals,
        initial_parameters=init,
        trotter_steps=args.trotter_steps,
        seed=args.seed,
        plan=MeasurementPlan(args.plan),
        mitigation=MitigationMode(args.mitigation),
        target_sigma=args.sigma,
        readout_error=args.readout_error,
    )


def cmd_vqe(args) -> int:
    src = resolve_input(args.integrals)
    problem = Problem.load(src)
    init = None
    if args.init:
        init = PuccdParameters.load(resolve_input(args.init), problem.n_orbitals, problem.n_pairs)
    config = _vqe_config(args, init)
    if config.mitigation is MitigationMode.ALL_TERMS and config.plan is MeasurementPlan.TPB3:
        config.plan = MeasurementPlan.PAIRED
    args.manifest.config = config.to_json()
    args.manifest.fixtures.append(str(src))
    result = run_vqe(problem.hamiltonian, problem.n_pairs, config)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = result.to_json()
    data.update(
        e_hf=problem.e_hf,
        e_doci=problem.e_doci,
        delta_e_doci=abs(result.exact_energy - problem.e_doci),
        manifest="manifest.json",
    )
    _dump_json(out / "result.json", data)
    (out / "trace.csv").write_text(result.trace_csv())
    args.manifest.outputs += [str(out / "result.json"), str(out / "trace.csv")]
    args.manifest_path = out / "manifest.json"
    print(
        f"E_pUCCD = {result.exact_energy:.10f} Ha, E_DOCI = {problem.e_doci:.10f} Ha, "
        f"|dE| = {abs(result.exact_energy - problem.e_doci):.3e} Ha, "
        f"evaluations = {result.evaluations}, shots = {result.total_shots} ({result.reason})"
    )
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def cmd_scan(args) -> int:
    directory = args.integrals_dir or os.environ.get(FIXTURE_ENV)
    if not directory:
        raise InputError("no --integrals-dir given and $PAIRVQE_FIXTURES is unset")
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"not a directory: {directory}")
    paths = sorted(p for p in directory.iterdir() if p.name.endswith(".fcidump"))
    if not paths:
        raise InputError(f"no .fcidump files in {directory}")
    config = _vqe_config(args, None)
    args.manifest.config = config.to_json()
    args.manifest.fixtures += [str(p) for p in paths]
    rows = dissociation_scan(paths, config, jobs=args.jobs)
    out = Path(args.out)
    _write_csv(out, SCAN_COLUMNS, rows)
    args.manifest.outputs.append(str(out))
    args.manifest_path = _sidecar(out)
    for row in rows:
        print(f"{row['distance_angstrom']:>8}  {row['delta_e_hartree']!s:>24}  {row['status']}")
    return EXIT_OK


def cmd_noise_sweep(args) -> int:
    src = resolve_input(args.integrals)
    problem = Problem.load(src)
    params = PuccdParameters.load(resolve_input(args.params), problem.n_orbitals, problem.n_pairs)
    modes = [MitigationMode(m) for m in args.modes]
    args.manifest.fixtures += [str(src), str(args.params)]
    args.manifest.config = {
        "error_rates": args.error_rates,
        "modes": [m.value for m in modes],
        "repeats": args.repeats,
        "shots_per_group": args.shots,
    }
    rows = noise_sweep(
        problem, params, args.error_rates, modes, args.repeats, args.shots, args.seed, args.jobs
    )
    out = Path(args.out)
    _write_csv(out, SWEEP_COLUMNS, rows)
    thresholds = {m.value: accuracy_threshold_rate(problem, params, m) for m in modes}
    summary = {"chemical_accuracy_error_rate": thresholds, "manifest": _sidecar(out).name}
    if thresholds.get("diag") and thresholds.get("all"):
        summary["all_vs_diag_rate_gain"] = thresholds["all"] / thresholds["diag"] - 1
    summary_path = out.with_name(out.name + ".summary.json")
    _dump_json(summary_path, summary)
    args.manifest.outputs += [str(out), str(summary_path)]
    args.manifest_path = _sidecar(out)
    for row in rows:
        print(
            f"p={row['error_rate']:<8g} {row['mode']:<5} "
            f"|dE|={row['mean_abs_error_hartree']!s:<24} {row['status']}"
        )
    for mode, rate in thresholds.items():
        shown = "not reached" if rate is None else f"{rate:.4g}"
        print(f"1 kcal/mol reached at readout error ({mode}): {shown}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pairvqe", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ham = sub.add_parser("ham", help="build the qubit Hamiltonian and report its structure")
    ham.add_argument("--integrals", required=True, help="FCIDUMP or JSON integral file")
    ham.add_argument("--out", help="write the Hamiltonian as JSON")
    ham.set_defaults(func=cmd_ham, seed=None)

    def vqe_options(p):
        p.add_argument("--objective", choices=["exact", "sampled"], default="exact")
        p.add_argument("--optimizer", choices=["implicit_filtering", "nelder_mead"], default="implicit_filtering")
        p.add_argument("--mitigation", choices=[m.value for m in MitigationMode], default="none")
        p.add_argument("--plan", choices=[m.value for m in MeasurementPlan], default="tpb3")
        p.add_argument("--sigma", type=float, default=0.0008, help="target std error per energy (Ha)")
        p.add_argument("--readout-error", type=float, default=0.0)
        p.add_argument("--max-evals", type=int, default=5000)
        p.add_argument("--trotter-steps", type=int, default=1)
        p.add_argument("--seed", type=int, default=0)

    vqe = sub.add_parser("vqe", help="run one VQE optimization")
    vqe.add_argument("--integrals", required=True)
    vqe.add_argument("--init", help="initial angles JSON {'(i,j)': value}")
    vqe.add_argument("--out", required=True, help="output directory")
    vqe_options(vqe)
    vqe.set_defaults(func=cmd_vqe)

    scan = sub.add_parser("scan", help="dissociation curve over a directory of FCIDUMP files")
    scan.add_argument("--integrals-dir", help=f"defaults to ${FIXTURE_ENV}")
    scan.add_argument("--out", required=True, help="CSV path")
    scan.add_argument("--jobs", type=int, default=1)
    vqe_options(scan)
    scan.set_defaults(func=cmd_scan)

    sweep = sub.add_parser("noise-sweep", help="energy error versus readout error rate")
    sweep.add_argument("--integrals", required=True)
    sweep.add_argument("--params", required=True, help="angles JSON or a VQE result.json")
    sweep.add_argument("--error-rates", type=float, nargs="+", required=True)
    sweep.add_argument("--modes", nargs="+", choices=[m.value for m in MitigationMode], default=[m.value for m in MitigationMode])
    sweep.add_argument("--repeats", type=int, default=50)
    sweep.add_argument("--shots", type=int, default=100_000, help="shots per measurement setting")
    sweep.add_argument("--seed", type=int, default=0)
    sweep.add_argument("--jobs", type=int, default=1)
    sweep.add_argument("--out", required=True, help="CSV path")
    sweep.set_defaults(func=cmd_noise_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    args.manifest = RunManifest(
        command=" ".join(["pairvqe", *(argv if argv is not None else sys.argv[1:])]),
        config={},
        seed=args.seed,
        fixtures=[],
        started_at=dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds"),
    )
    args.manifest_path = None
    try:
        code = args.func(args)
    except (InputError, IntegralFormatError, OSError, json.JSONDecodeError) as exc:
        print(f"pairvqe: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"pairvqe: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.manifest_path is not None:
        args.manifest.wall_clock_seconds = round(time.monotonic() - started, 3)
        args.manifest.write(args.manifest_path)
    return code


if __name__ == "__main__":
    sys.exit(main())
