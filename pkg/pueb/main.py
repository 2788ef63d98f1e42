"""Command-line entrypoint: ``python -m pueb <command>``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import Callable, Dict, List, Optional

from .algebra.finite_field import Field, parse_dim_spec
from .bases.entangled import all_entangled_bases
from .bases.mub import all_mubs
from .config import Settings, check_dimension, get_settings
from .errors import PuebError
from .schemas import CheckResult, Manifest, RunReport
from .suites import SUITE_RUNNERS, run_suite
from .tomography.measurements import (
    exact_prob_table,
    measurement_count,
    sampled_prob_table,
    settings_for,
)
from .tomography.reconstruction import (
    diagnostics,
    random_density_matrix,
    reconstruct,
    shot_noise_tolerance,
)
from .utils.serialization import (
    basis_record,
    density_record,
    entangled_record,
    read_density,
    write_json,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_REJECTED = 2


def _field_for(spec: str, settings: Settings) -> Field:
    f = parse_dim_spec(spec)
    check_dimension(f.d, "single" if f.n == 1 else "prime_power", settings)
    return f


def _output_dir(args: argparse.Namespace, settings: Settings, command: str) -> Path:
    return Path(args.out) if args.out else settings.output_dir / command


def cmd_mub_gen(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Write the d+1 bases, optionally the entangled bases, and a manifest."""

    f = _field_for(args.dim, settings)
    out = _output_dir(args, settings, "mub-gen")
    files: List[str] = []
    for basis in all_mubs(f):
        name = "basis_computational.json" if basis.is_computational else f"basis_b{basis.label}.json"
        write_json(out / name, basis_record(basis))
        files.append(name)
    if args.entangled:
        if f.n > 1:
            raise PuebError("entangled bases are built for prime dimensions only")
        check_dimension(f.d, "two_particle", settings)
        for basis in all_entangled_bases(f.d):
            name = f"entangled_b{basis.b}_s{basis.s}.json"
            write_json(out / name, entangled_record(basis))
            files.append(name)
    manifest = Manifest(
        dim=f.d,
        field=f.name,
        modulus_poly=list(f.modulus_poly) if f.n > 1 else None,
        files=files,
    )
    write_json(out / "manifest.json", manifest)
    logger.info("Wrote %d files to %s", len(files) + 1, out)
    basis_files = sum(name.startswith("basis_") for name in files)
    checks = [CheckResult.evaluate("mub-gen.basis_files", abs(basis_files - (f.d + 1)), 0.5)]
    return RunReport(command="mub-gen", dim=f.d, checks=checks)


def cmd_verify(args: argparse.Namespace, settings: Settings) -> RunReport:
    f = _field_for(args.dim, settings)
    return RunReport(command=f"verify:{args.suite}", dim=f.d, checks=run_suite(args.suite, f))


def cmd_count(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Measurement-count table; the setting lists must match the formulas."""

    f = _field_for(args.dim, settings)
    d = f.d
    rows = {
        scheme: measurement_count(d, scheme)
        for scheme in (
            "single_mub",
            "two_partite_full_mub",
            "two_partite_this_paper",
            "product_single_mub",
        )
    }
    checks = [
        CheckResult.evaluate(
            "count.single_settings", abs(len(settings_for(d, "single")) - rows["single_mub"]), 0.5
        )
    ]
    if f.n == 1 and d in settings.two_particle_primes:
        checks.append(
            CheckResult.evaluate(
                "count.two_partite_settings",
                abs(len(settings_for(d, "two_partite")) - rows["two_partite_this_paper"]),
                0.5,
            )
        )
    return RunReport(command="count", dim=d, checks=checks, counts=rows)


def cmd_tomo(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Round trip: state -> probabilities -> reconstruction, all written to the output directory."""

    f = _field_for(args.dim, settings)
    d = f.d
    scheme = args.scheme
    if scheme == "two_partite":
        if f.n > 1:
            raise PuebError("two-partite tomography needs a prime dimension")
        check_dimension(d, "two_particle", settings)
    dim = d if scheme == "single" else d * d
    seed = settings.default_seed if args.seed is None else args.seed

    if args.state_file:
        truth = read_density(args.state_file)
        if truth.dim != dim:
            raise PuebError(f"state file has dimension {truth.dim}, expected {dim}")
    else:
        truth = random_density_matrix(dim, seed=seed)

    if args.shots == "exact":
        table = exact_prob_table(truth, scheme, f)
        tolerance = settings.loose_tol
    else:
        try:
            shots = int(args.shots)
        except ValueError as exc:
            raise PuebError(f"--shots must be 'exact' or an integer, got {args.shots!r}") from exc
        table = sampled_prob_table(truth, scheme, shots, seed, f)
        tolerance = float(shot_noise_tolerance(d, shots))

    estimate = reconstruct(table, f)
    summary = diagnostics(estimate, truth)
    out = _output_dir(args, settings, "tomo")
    write_json(out / "state_true.json", density_record(truth))
    write_json(out / "probabilities.json", table)
    write_json(out / "state_reconstructed.json", density_record(estimate))
    write_json(out / "summary.json", summary)
    logger.info("Reconstruction error %.3e from %d settings", summary.max_error, len(table.settings))

    expected_settings = measurement_count(
        d, "single_mub" if scheme == "single" else "two_partite_this_paper"
    )
    checks = [
        CheckResult.evaluate("tomo.settings", abs(len(table.settings) - expected_settings), 0.5),
        CheckResult.evaluate("tomo.max_error", summary.max_error, tolerance),
        CheckResult.evaluate("tomo.trace", abs(summary.trace - 1.0), max(tolerance, settings.loose_tol)),
    ]
    return RunReport(command=f"tomo:{scheme}", dim=d, checks=checks)


COMMANDS: Dict[str, Callable[[argparse.Namespace, Settings], RunReport]] = {
    "mub-gen": cmd_mub_gen,
    "verify": cmd_verify,
    "count": cmd_count,
    "tomo": cmd_tomo,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pueb", description="Mutually unbiased bases, entangled bases and tomography checks."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dim", required=True, help='dimension as "p", "p^n" or a prime power')
        p.add_argument("--json", action="store_true", help="print the report as JSON")

    p_gen = sub.add_parser("mub-gen", help="write the d+1 bases and a manifest")
    common(p_gen)
    p_gen.add_argument("--out", default=None, help="output directory")
    p_gen.add_argument(
        "--entangled", action="store_true", help="also write the d(d-1) entangled bases"
    )

    p_verify = sub.add_parser("verify", help="run a verification suite")
    common(p_verify)
    p_verify.add_argument("--suite", choices=sorted(SUITE_RUNNERS), default="all")

    p_count = sub.add_parser("count", help="print the measurement-count table")
    common(p_count)

    p_tomo = sub.add_parser("tomo", help="tomography round trip")
    common(p_tomo)
    p_tomo.add_argument("--scheme", choices=["single", "two_partite"], default="single")
    p_tomo.add_argument("--seed", type=int, default=None)
    p_tomo.add_argument("--shots", default="exact", help='"exact" or a number of shots per setting')
    p_tomo.add_argument("--state-file", default=None, help="density matrix JSON instead of a random state")
    p_tomo.add_argument("--out", default=None, help="output directory")
    return parser


def render_table(report: RunReport) -> str:
    width = max([len(c.name) for c in report.checks] + [5])
    lines = [
        f"{report.command}  d={report.dim}",
        f"{'check':<{width}}  {'max_deviation':>13}  {'tolerance':>9}  result",
    ]
    for check in report.checks:
        lines.append(
            f"{check.name:<{width}}  {check.max_deviation:13.3e}  {check.tolerance:9.1e}  "
            f"{'pass' if check.passed else 'FAIL'}"
        )
    for scheme, value in (report.counts or {}).items():
        lines.append(f"{scheme:<{width}}  {value:>13d}")
    lines.append(f"{'PASS' if report.passed else 'FAIL'}  ({report.wall_time_ms} ms)")
    return "\n".join(lines)


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(level=settings.log_level, stream=sys.stderr)

    started = time.perf_counter()
    try:
        report = COMMANDS[args.command](args, settings)
    except PuebError as exc:
        logger.error("%s", exc)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REJECTED
    report.wall_time_ms = int((time.perf_counter() - started) * 1000)

    if args.json:
        print(report.to_json())
    else:
        print(render_table(report))
    return EXIT_OK if report.passed else EXIT_FAILED


if __name__ == "__main__":
    raise SystemExit(main())
