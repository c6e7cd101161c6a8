"""Command-line front end.

    pairdecay run --config a --regime chaotic --qubits 15 --coupling 0.03 \\
        --steps 100 --ensemble 60 --seed 7 --out results/
    pairdecay run --spec results/manifest.json --out rerun/
    pairdecay sizescan --coupling 0.01 --steps 4500 --sizes 5,8,11,14
    pairdecay fit results/trajectories.csv --window 3 30
    pairdecay wernercheck
    pairdecay oracle --qubits 4 --trials 50

Exit codes: 0 success, 2 bad input, 3 numerical failure, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
import time
from pathlib import Path
from typing import Mapping, Optional, Sequence

import numpy as np

from pairdecay import InsufficientData, InvalidInput, NumericalDegeneracy, __version__
from pairdecay.experiments import (
    EnsembleSummary,
    ExperimentSpec,
    TrajectoryRecord,
    fit_power_law,
    run_ensemble,
    size_scan,
)
from pairdecay.floquet import ChainSpec, apply_step, compile_spec, dense_oracle
from pairdecay.measures import concurrence, purity, werner_concurrence_of_purity, werner_state
from pairdecay.state import StateVector, make_haar_random

log = logging.getLogger("pairdecay")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

WERNER_TOL = 1e-12
ORACLE_TOL = 1e-10

TRAJECTORY_HEADER = ["t", "concurrence", "purity", "seed"]
SUMMARY_HEADER = ["t", "c_mean", "c_var", "p_mean", "p_var"]
WERNER_HEADER = ["purity", "concurrence"]

# flag name -> ExperimentSpec field
SPEC_FLAGS = {
    "config": "configuration",
    "regime": "regime",
    "qubits": "num_qubits",
    "coupling": "coupling",
    "steps": "steps",
    "ensemble": "ensemble_size",
    "seed": "seed",
    "env_bond": "env_bond",
    "stride": "record_stride",
    "b_perp": "b_perp",
    "b_par": "b_par",
}
REQUIRED_FIELDS = ("configuration", "regime", "num_qubits", "coupling", "steps")
_FIELD_TYPES = {
    "configuration": str, "regime": str, "num_qubits": int, "coupling": float,
    "steps": int, "ensemble_size": int, "seed": int, "env_bond": float,
    "record_stride": int, "b_perp": float, "b_par": float,
}


class ParseError(InvalidInput):
    pass


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def spec_from_mapping(fields: Mapping) -> ExperimentSpec:
    """Build a validated spec from a field mapping (manifest or JSON file)."""
    unknown = set(fields) - set(_FIELD_TYPES)
    if unknown:
        raise ParseError(f"unknown field(s): {', '.join(sorted(unknown))}")
    for name in REQUIRED_FIELDS:
        if fields.get(name) is None:
            flag = next(f for f, n in SPEC_FLAGS.items() if n == name)
            raise ParseError(f"missing required field {name!r} (flag --{flag.replace('_', '-')})")
    kwargs = {}
    for name, value in fields.items():
        if value is None:
            continue
        try:
            kwargs[name] = _FIELD_TYPES[name](value)
        except (TypeError, ValueError):
            raise ParseError(f"field {name!r}: cannot read {value!r} as "
                             f"{_FIELD_TYPES[name].__name__}") from None
    try:
        return ExperimentSpec(**kwargs)
    except InvalidInput as exc:
        raise ParseError(str(exc)) from None


def load_spec_file(path) -> ExperimentSpec:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a JSON object")
    return spec_from_mapping(data.get("spec", data))


def parse_spec(args) -> ExperimentSpec:
    """Spec from parsed CLI flags; ``--spec FILE`` supplies the base values."""
    fields = {}
    if getattr(args, "spec", None):
        fields.update(load_spec_file(args.spec).to_dict())
    for flag, name in SPEC_FLAGS.items():
        value = getattr(args, flag, None)
        if value is not None:
            fields[name] = value
    if getattr(args, "regime", None) not in (None, "custom"):
        # a new preset replaces fields inherited from the file
        for name in ("b_perp", "b_par"):
            if getattr(args, name, None) is None:
                fields.pop(name, None)
    return spec_from_mapping(fields)


def spec_to_argv(spec: ExperimentSpec) -> list[str]:
    argv = []
    for flag, name in SPEC_FLAGS.items():
        value = getattr(spec, name)
        # --flag=value so negative numbers are not read as options
        argv.append(f"--{flag.replace('_', '-')}={value if isinstance(value, str) else fmt(value)}")
    return argv


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def werner_reference(n: int = 751) -> np.ndarray:
    p = np.linspace(0.25, 1.0, n)
    return np.column_stack([p, werner_concurrence_of_purity(p)])


def emit_results(records: Sequence[TrajectoryRecord], summary: EnsembleSummary,
                 out_dir, spec: ExperimentSpec, duration: float = 0.0) -> dict:
    """Write trajectory, summary and Werner-reference CSVs plus a manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "trajectories": out / "trajectories.csv",
        "summary": out / "summary.csv",
        "werner_reference": out / "werner_reference.csv",
        "manifest": out / "manifest.json",
    }
    _write_csv(paths["trajectories"], TRAJECTORY_HEADER,
               ((t, c, p, rec.seed) for rec in records
                for t, c, p in zip(rec.t, rec.concurrence, rec.purity)))
    _write_csv(paths["summary"], SUMMARY_HEADER,
               zip(summary.t, summary.c_mean, summary.c_var, summary.p_mean, summary.p_var))
    _write_csv(paths["werner_reference"], WERNER_HEADER, werner_reference())
    manifest = {
        "spec": spec.to_dict(),
        "version": __version__,
        "duration_s": duration,
        "outputs": {k: str(v) for k, v in paths.items()},
    }
    paths["manifest"].write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return paths


def read_trajectory_csv(path) -> dict[int, tuple[np.ndarray, np.ndarray, np.ndarray]]:
    """Trajectory CSV -> {seed: (t, concurrence, purity)}."""
    rows: dict[int, list] = {}
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(TRAJECTORY_HEADER) - set(reader.fieldnames or ())
        if missing:
            raise ParseError(f"{path}: missing column(s) {', '.join(sorted(missing))}")
        for row in reader:
            try:
                rows.setdefault(int(row["seed"]), []).append(
                    (float(row["t"]), float(row["concurrence"]), float(row["purity"])))
            except ValueError:
                raise ParseError(f"{path}: malformed row {row}") from None
    return {seed: tuple(np.array(col) for col in zip(*vals)) for seed, vals in rows.items()}


def werner_sweep(n: int = 1001) -> dict:
    """Closed-form and self-consistency errors of the Werner family."""
    worst_c = worst_p = worst_self = 0.0
    for alpha in np.linspace(0.0, 1.0, n):
        rho = werner_state(alpha)
        c, p = concurrence(rho), purity(rho)
        worst_c = max(worst_c, abs(c - max(0.0, 1 - 1.5 * alpha)))
        worst_p = max(worst_p, abs(p - (1 - 1.5 * alpha + 0.75 * alpha ** 2)))
        worst_self = max(worst_self, abs(c - werner_concurrence_of_purity(p)))
    return {"closed_form_c": worst_c, "closed_form_p": worst_p, "self_consistency": worst_self}


def oracle_check(num_qubits: int, trials: int, seed: int = 0) -> float:
    """Largest amplitude error of the kernel against the dense oracle."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        spec = ChainSpec(num_qubits, tuple(rng.uniform(-2, 2, num_qubits)),
                         rng.uniform(-2, 2), rng.uniform(-2, 2))
        psi = make_haar_random(num_qubits, rng)
        state = StateVector(psi.copy(), num_qubits)
        apply_step(state, compile_spec(spec))
        worst = max(worst, float(np.max(np.abs(state.amplitudes - dense_oracle(spec) @ psi))))
    return worst


def _add_spec_flags(p: argparse.ArgumentParser, with_config=True):
    p.add_argument("--spec", help="JSON spec or manifest to start from")
    if with_config:
        p.add_argument("--config", choices=["a", "b", "c"])
        p.add_argument("--regime", help="integrable, integrable-1.4, intermediate, chaotic or custom")
        p.add_argument("--qubits", type=int, help="total chain length L")
    p.add_argument("--coupling", type=float, help="weak bond J_c")
    p.add_argument("--steps", type=int)
    p.add_argument("--ensemble", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--env-bond", dest="env_bond", type=float)
    p.add_argument("--stride", type=int, help="record every N steps")
    p.add_argument("--b-perp", dest="b_perp", type=float)
    p.add_argument("--b-par", dest="b_par", type=float)
    p.add_argument("--workers", type=int, help="processes (default $PAIRDECAY_THREADS or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pairdecay", description=__doc__.split("\n")[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one ensemble and write CSVs")
    _add_spec_flags(p)
    p.add_argument("--out", default="results")

    p = sub.add_parser("sizescan", help="Werner deviation vs environment size")
    _add_spec_flags(p)
    p.add_argument("--sizes", default="5,8,11,14", help="environment sizes, comma separated")
    p.add_argument("--p-range", dest="p_range", nargs=2, type=float, default=(0.5, 1.0))
    p.add_argument("--out", help="optional CSV path")

    p = sub.add_parser("fit", help="decay exponent from a trajectory CSV")
    p.add_argument("csv")
    p.add_argument("--window", nargs=2, type=float, default=(3.0, 30.0))
    p.add_argument("--quantity", choices=["concurrence", "purity"], default="concurrence")

    p = sub.add_parser("wernercheck", help="alpha-sweep self-consistency report")
    p.add_argument("--points", type=int, default=1001)

    p = sub.add_parser("oracle", help="kernel vs dense matrix on small chains")
    p.add_argument("--qubits", type=int, default=4)
    p.add_argument("--trials", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_run(args) -> int:
    spec = parse_spec(args)
    t0 = time.perf_counter()
    summary, records = run_ensemble(spec, args.workers)
    paths = emit_results(records, summary, args.out, spec, time.perf_counter() - t0)
    for name, path in paths.items():
        print(f"{name}: {path}")
    return EXIT_OK


def _cmd_sizescan(args) -> int:
    fields = {"configuration": "a", "regime": "chaotic", "num_qubits": 16}
    if args.spec:
        fields.update(load_spec_file(args.spec).to_dict())
    for flag, name in SPEC_FLAGS.items():
        if getattr(args, flag, None) is not None:
            fields[name] = getattr(args, flag)
    base = spec_from_mapping(fields)
    try:
        sizes = [int(s) for s in args.sizes.split(",")]
    except ValueError:
        raise ParseError(f"--sizes: cannot read {args.sizes!r}") from None
    rows = size_scan(base, sizes, tuple(args.p_range), args.workers)
    for n, dev in rows:
        print(f"env={n} L={n + 2} deviation={dev:.6g}")
    if args.out:
        _write_csv(Path(args.out), ["env_qubits", "deviation"], rows)
    return EXIT_OK


def _cmd_fit(args) -> int:
    data = read_trajectory_csv(args.csv)
    if not data:
        raise InsufficientData(f"{args.csv}: no rows")
    col = 1 if args.quantity == "concurrence" else 2
    for seed, cols in sorted(data.items()):
        gamma, a = fit_power_law(cols[0], cols[col], tuple(args.window),
                                 skip_zero=args.quantity == "concurrence")
        print(f"seed={seed} gamma={gamma:.3f} a={a:.6g}")
    if len(data) > 1:
        t = next(iter(data.values()))[0]
        mean = np.mean([cols[col] for cols in data.values()], axis=0)
        gamma, a = fit_power_law(t, mean, tuple(args.window),
                                 skip_zero=args.quantity == "concurrence")
        print(f"mean gamma={gamma:.3f} a={a:.6g}")
    return EXIT_OK


def _cmd_wernercheck(args) -> int:
    report = werner_sweep(args.points)
    for k, v in report.items():
        print(f"max |error| {k}: {v:.3e}")
    ok = max(report.values()) < WERNER_TOL
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_oracle(args) -> int:
    if not 1 <= args.qubits <= 8:
        raise ParseError("--qubits: dense oracle supports 1..8 qubits")
    worst = oracle_check(args.qubits, args.trials, args.seed)
    ok = worst < ORACLE_TOL
    print(f"L={args.qubits} trials={args.trials} max amplitude error={worst:.3e} "
          f"{'PASS' if ok else 'FAIL'}")
    return EXIT_OK if ok else EXIT_NUMERIC


COMMANDS = {
    "run": _cmd_run,
    "sizescan": _cmd_sizescan,
    "fit": _cmd_fit,
    "wernercheck": _cmd_wernercheck,
    "oracle": _cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (InvalidInput, InsufficientData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericalDegeneracy as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
