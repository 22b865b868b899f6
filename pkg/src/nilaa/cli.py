"""Command-line entry point.

Subcommands: validate, decide, suspend, simulate, corpus.  stdout carries
one canonical verdict JSON object (corpus run prints one line per check
instead); human-readable diagnostics go to stderr.  Exit codes: 0 for
AA/pass-like verdicts, 1 for NOT_AA/fail-like verdicts, 2 for
INCONCLUSIVE, 3 for errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import io as nio
from .criteria import (HypothesisViolated, InapplicableCriterion, NonAbelian,
                       ValidationError, basepoint_decide, full_decide,
                       lie_necessary, minimality_check, power_unipotent,
                       torus_decide, translation_decide,
                       two_generator_analysis)
from .orbit import NumericAffine, aa_empirical_test, trajectory
from .ratlin import NotUnipotent, QMatrix
from .suspension import (Mismatch, embedding_consistency_check,
                         monodromy_adjoint_check, suspend)

CRITERIA = ("full", "basepoint", "torus", "translation", "lie",
            "power-unipotent", "minimality", "two-generator")

_DECIDERS = {"full": full_decide, "basepoint": basepoint_decide,
             "torus": torus_decide, "translation": translation_decide}

HEIS_LATTICE = QMatrix([[1, 0, 0], [0, 1, 0], [0, 0, Fraction(1, 2)]])


def run_criterion(system, criterion: str) -> dict:
    """Dispatch one criterion over a validated system (verdict dict)."""
    if criterion in _DECIDERS:
        return nio.verdict_to_dict(_DECIDERS[criterion](system))
    if criterion == "lie":
        return nio.lie_report_to_dict(lie_necessary(system))
    if criterion == "minimality":
        return nio.minimality_report_to_dict(minimality_check(system))
    if criterion == "power-unipotent":
        return nio.power_result_to_dict(power_unipotent(system.automorphism))
    if criterion == "two-generator":
        return nio.two_generator_report_to_dict(
            two_generator_analysis(system))
    raise ValueError(f"unknown criterion {criterion!r}")


def _error(criterion: str, message: str) -> dict:
    return nio.make_verdict_dict(nio.ERROR, criterion, None, [message])


def _validate_result(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        return _error("validate", str(exc))
    except json.JSONDecodeError as exc:
        return _error("validate",
                      f"{Path(path).name}:{exc.lineno}:{exc.colno}: "
                      f"{exc.msg}")
    file_notes = raw.get("notes", []) if isinstance(raw, dict) else []
    if not isinstance(file_notes, list):
        file_notes = []
    try:
        system = nio.system_from_dict(raw, source=Path(path).name)
    except nio.ParseError as exc:
        return _error("validate", str(exc))
    except ValidationError as exc:
        witness = nio.describe_validation_witness(exc)
        notes = list(file_notes)
        notes.append(f"first failing check: {exc.check}; {witness}")
        return nio.make_verdict_dict(nio.INVALID, "validate",
                                     nio.validation_failure_dict(exc), notes)
    notes = list(system.notes)
    notes.append("algebra, lattice, automorphism and lattice preservation "
                 "all check out")
    return nio.make_verdict_dict(nio.VALID, "validate", None, notes)


def _decide_result(path, criterion: str) -> dict:
    try:
        system = nio.parse_system(path)
    except nio.ParseError as exc:
        return _error(criterion, str(exc))
    except ValidationError as exc:
        return nio.make_verdict_dict(
            nio.ERROR, criterion, nio.validation_failure_dict(exc),
            [f"the system file fails validation at {exc.check}"])
    try:
        return run_criterion(system, criterion)
    except NonAbelian as exc:
        return _error(criterion, f"the torus criterion requires an abelian "
                                 f"algebra: {exc}")
    except InapplicableCriterion as exc:
        return _error(criterion, str(exc))
    except HypothesisViolated as exc:
        return _error(criterion, f"hypothesis violated: {exc.which}")
    except NotUnipotent as exc:
        return _error(criterion, f"the automorphism is not unipotent: {exc}")
    except ValueError as exc:
        return _error(criterion, str(exc))


def _suspend_result(path, out) -> dict:
    try:
        system = nio.parse_system(path)
    except nio.ParseError as exc:
        return _error("suspend", str(exc))
    except ValidationError as exc:
        return _error("suspend",
                      f"the system file fails validation at {exc.check}")
    try:
        susp = suspend(system)
    except NotUnipotent as exc:
        return _error("suspend", f"the automorphism is not unipotent: {exc}")
    except ValueError as exc:
        return _error("suspend", str(exc))
    notes = [f"fiber dimension {system.dim}, suspension dimension "
             f"{susp.dim}"]
    if not monodromy_adjoint_check(susp):
        return _error("suspend", "monodromy adjoint check failed")
    notes.append("monodromy adjoint check: passed")
    try:
        embedding_consistency_check(system, susp, samples=10)
    except Mismatch as exc:
        return _error("suspend", f"embedding consistency failed: {exc}")
    notes.append("embedding consistency: 10 exact samples")
    if out is not None:
        payload = nio.suspension_to_dict(susp, system.name)
        Path(out).write_text(nio.canonical_json(payload), encoding="utf-8")
        notes.append("suspension data written")
    return nio.make_verdict_dict(nio.PASS, "suspend", None, notes)


def _numeric_space(system, config) -> str:
    space = config.get("space")
    if space is not None:
        return space
    if system.algebra.abelian():
        return "Torus"
    heis_table = {(0, 1): tuple(Fraction(v) for v in (0, 0, 1))}
    if system.dim == 3 and dict(system.algebra.table) == heis_table:
        return "Heisenberg3"
    raise ValueError("simulation supports tori and the 3-dimensional "
                     "Heisenberg quotient only")


def _numeric_map(system) -> tuple:
    """Build the numeric oracle map and the probe list from a system."""
    config = dict(system.simulate or {})
    space = _numeric_space(system, config)
    expected = QMatrix.identity(system.dim) if space == "Torus" \
        else HEIS_LATTICE
    if system.lattice.basis != expected:
        raise ValueError("simulation requires the standard lattice for "
                         "this space")
    values = {key: Fraction(val)
              for key, val in (config.get("values") or {}).items()}
    missing = [p for p in system.translation.params if p not in values]
    if missing:
        raise ValueError(f"simulate needs numeric values for parameters "
                         f"{missing}")
    translation = system.translation.substitute(values)
    affine = NumericAffine(system.dim, system.automorphism, translation,
                           space=space)
    probes = None
    if config.get("probe") is not None:
        probes = [tuple(Fraction(v) for v in config["probe"])]
    return affine, probes, config


def _simulate_result(path, eps=None, horizon=None, seed=None, trials=None,
                     dump=None) -> dict:
    try:
        system = nio.parse_system(path)
    except nio.ParseError as exc:
        return _error("simulate", str(exc))
    except ValidationError as exc:
        return _error("simulate",
                      f"the system file fails validation at {exc.check}")
    try:
        affine, probes, config = _numeric_map(system)
    except ValueError as exc:
        return _error("simulate", str(exc))
    eps = eps if eps is not None else config.get("eps", 1e-3)
    horizon = int(horizon if horizon is not None
                  else config.get("horizon", 10 ** 5))
    seed = int(seed if seed is not None else config.get("seed", 0))
    trials = int(trials if trials is not None else config.get("trials", 5))
    report = aa_empirical_test(affine, trials, eps, horizon, seed,
                               probes=probes)
    if dump is not None:
        start = probes[0] if probes else tuple([0] * affine.dim)
        steps = int(config.get("dump_steps", 200))
        with open(dump, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["k"] + [f"x{i + 1}" for i in range(affine.dim)])
            for k, point in trajectory(affine, start, steps):
                writer.writerow([k] + [float(v) for v in point])
    return nio.aa_report_to_dict(report)


def _corpus_run(stdout) -> int:
    base = nio.corpus_dir()
    manifest = nio.load_manifest()
    failures = 0
    checks = 0
    for entry in sorted(manifest["entries"], key=lambda e: e["file"]):
        path = base / entry["file"]
        jobs = [("validate", entry["validate"], None)]
        for run in entry.get("runs", []):
            jobs.append((run["criterion"], run, run))
        for criterion, job, run in jobs:
            if criterion == "validate":
                result = _validate_result(path)
            elif criterion == "simulate":
                result = _simulate_result(path)
            else:
                result = _decide_result(path, criterion)
            produced = nio.canonical_json(result)
            golden = (base / job["golden"]).read_text(encoding="utf-8")
            code = nio.exit_code_for(result["status"])
            ok = produced == golden and code == job["exit_code"]
            checks += 1
            if not ok:
                failures += 1
            print(f"{entry['file']} {criterion}: "
                  f"{'PASS' if ok else 'FAIL'}", file=stdout)
            if not ok:
                print(f"  expected exit {job['exit_code']}, got {code}",
                      file=sys.stderr)
    print(f"{checks - failures}/{checks} corpus checks passed",
          file=stdout)
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilaa",
        description="Almost-automorphy criteria for affine maps of "
                    "nilmanifolds")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a system file")
    p.add_argument("file")

    p = sub.add_parser("decide", help="run one criterion on a system file")
    p.add_argument("file")
    p.add_argument("--criterion", required=True, choices=CRITERIA)

    p = sub.add_parser("suspend", help="build and check the suspension")
    p.add_argument("file")
    p.add_argument("--out", help="write the suspension data as JSON")

    p = sub.add_parser("simulate", help="empirical almost-automorphy test")
    p.add_argument("file")
    p.add_argument("--eps", type=float)
    p.add_argument("--horizon", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--dump", help="write a trajectory CSV to this path")

    p = sub.add_parser("corpus", help="bundled example systems")
    p.add_argument("action", choices=["run"])
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "validate":
        result = _validate_result(args.file)
    elif args.command == "decide":
        result = _decide_result(args.file, args.criterion)
    elif args.command == "suspend":
        result = _suspend_result(args.file, args.out)
    elif args.command == "simulate":
        result = _simulate_result(args.file, eps=args.eps,
                                  horizon=args.horizon, seed=args.seed,
                                  trials=args.trials, dump=args.dump)
    else:
        return _corpus_run(sys.stdout)
    sys.stdout.write(nio.canonical_json(result))
    return nio.exit_code_for(result["status"])


if __name__ == "__main__":
    sys.exit(main())
