"""Command-line interface.

Subcommands: quantum, lhv, scan, sample, appendix-a.  Every command accepts
``--output`` (report destination, stdout by default) and ``--format``
(text or structured JSON).  Exit status is 0 on success regardless of the
verdict; argument errors exit 2 and validation or I/O failures exit 1.

Angles are taken in degrees on the command line and converted to radians
internally.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import analysis, lhv, modelfile, montecarlo, report
from .errors import TrinebellError
from .quantum import basis_from_angle, bell_record, make_phi_plus

DEFAULT_ANGLES_DEG = (0.0, 120.0, -120.0)
REFINE_WINDOW_DEG = 1.0
REFINE_STEP_DEG = 0.01

SCAN_CSV_COLUMNS = ("theta_b_deg", "theta_c_deg", "bell_sum")
TRIALS_CSV_COLUMNS = ("trial", "setting_1", "setting_2", "outcome_1", "outcome_2")


def cmd_quantum(angles_deg: tuple[float, float, float]) -> report.ReportDocument:
    """Exact correlations of the entangled pair at three basis angles."""
    for value in angles_deg:
        if not math.isfinite(value):
            raise TrinebellError(f"angles must be finite, got {value!r}")
    bases = [
        basis_from_angle(math.radians(angle), label)
        for angle, label in zip(angles_deg, ("A", "B", "C"))
    ]
    record = bell_record(make_phi_plus(), *bases)
    return report.quantum_report(tuple(float(a) for a in angles_deg), record)


def cmd_lhv(model_path: str) -> report.ReportDocument:
    """Exact correlations, hypothesis flags and area chain for a model file."""
    model = modelfile.load_model(model_path)
    record = lhv.lhv_bell_record(model)
    flags = lhv.classify_model(model)
    weights = lhv.triplet_weights_from_model(model)
    chain = analysis.venn_chain(weights) if weights is not None else None
    return report.lhv_report(model_path, model, record, flags, chain)


def _write_scan_csv(deg_grid: np.ndarray, result: analysis.ScanResult, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(SCAN_CSV_COLUMNS)
        for i, tb in enumerate(deg_grid):
            for j, tc in enumerate(deg_grid):
                writer.writerow([repr(float(tb)), repr(float(tc)), repr(float(result.bell_sums[i, j]))])


def cmd_scan(
    step_deg: float,
    refine: bool,
    csv_path: str,
    plot_path: str | None = None,
) -> tuple[analysis.ScanResult, report.ReportDocument]:
    """Grid scan over (theta_b, theta_c) with theta_a pinned at 0."""
    if not math.isfinite(step_deg) or step_deg <= 0.0:
        raise TrinebellError(f"step must be positive, got {step_deg!r}")
    deg_grid = np.arange(0.0, 360.0, step_deg)
    if deg_grid.size == 0:
        deg_grid = np.array([0.0])
    result = analysis.scan_angles(np.radians(deg_grid))
    i, j = np.unravel_index(int(np.argmin(result.bell_sums)), result.bell_sums.shape)
    argmin_deg = (float(deg_grid[i]), float(deg_grid[j]))
    min_sum = result.min_sum
    refined_flag = False
    if refine:
        refined = analysis.refine_scan(
            result, math.radians(REFINE_WINDOW_DEG), math.radians(REFINE_STEP_DEG)
        )
        if refined.min_sum < min_sum:
            min_sum = refined.min_sum
            argmin_deg = (math.degrees(refined.argmin[1]), math.degrees(refined.argmin[2]))
        refined_flag = True
    _write_scan_csv(deg_grid, result, csv_path)
    if plot_path is not None:
        from . import plotting

        plotting.render_scan_heatmap(result, plot_path)
    doc = report.scan_report(
        step_deg=step_deg,
        refined=refined_flag,
        csv_path=csv_path,
        grid_points=int(result.bell_sums.size),
        min_sum=min_sum,
        argmin_deg=argmin_deg,
    )
    return result, doc


def _write_trials_csv(trials: montecarlo.TrialArrays, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(TRIALS_CSV_COLUMNS)
        for rec in trials.records():
            writer.writerow([rec.index, rec.setting_1, rec.setting_2, rec.outcome_1, rec.outcome_2])


def cmd_sample(
    n: int,
    seed: int,
    source_name: str,
    settings_policy: str,
    model_path: str | None = None,
    trials_csv: str | None = None,
    plot_path: str | None = None,
) -> report.ReportDocument:
    """Seeded sampling run; the report is bit-stable for fixed flags."""
    config = montecarlo.RunConfig(
        n_samples=n, seed=seed, source=source_name, settings_policy=settings_policy
    )
    model_source = None
    if source_name == "quantum":
        source = montecarlo.QuantumSource.trine()
    else:
        if model_path is None:
            source = montecarlo.LhvSource(lhv.uniform_triplet_model())
            model_source = "builtin:uniform-8"
        else:
            source = montecarlo.LhvSource(modelfile.load_model(model_path))
            model_source = model_path
    trials = montecarlo.generate_trials(config, source)
    estimate = montecarlo.estimate_from_trials(config, trials)
    if trials_csv is not None:
        _write_trials_csv(trials, trials_csv)
    if plot_path is not None:
        from . import plotting

        plotting.render_estimates(estimate, plot_path)
    return report.sample_report(estimate, model_source)


def cmd_appendix_a(model_path: str) -> report.ReportDocument:
    """Run the locality/perfect-correlation/determinism chain on a model file."""
    model = modelfile.load_model(model_path)
    locality_ok = lhv.check_bell_locality(model.joint_tables(), model)
    derivation = lhv.derive_determinism(model)
    return report.determinism_report(model_path, model, locality_ok, derivation)


def _emit(doc: report.ReportDocument, fmt: str, output: str | None) -> None:
    text = report.render_json(doc) if fmt == "structured" else report.render_text(doc)
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as f:
            f.write(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", default=None, help="write the report here instead of stdout")
    common.add_argument(
        "--format",
        choices=("text", "structured"),
        default="text",
        help="report format (structured = JSON)",
    )

    parser = argparse.ArgumentParser(
        prog="trinebell",
        description="Exact, enumerated and sampled tests of a three-setting Bell inequality.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("quantum", parents=[common], help="exact entangled-pair correlations")
    p.add_argument(
        "--angles",
        nargs=3,
        type=float,
        default=list(DEFAULT_ANGLES_DEG),
        metavar=("A", "B", "C"),
        help="basis angles in degrees (default: the 120-degree trine)",
    )

    p = sub.add_parser("lhv", parents=[common], help="evaluate a hidden-variable model file")
    p.add_argument("model", help="model file (JSON)")

    p = sub.add_parser("scan", parents=[common], help="grid scan over measurement angles")
    p.add_argument("--step", type=float, default=1.0, help="grid step in degrees (default 1)")
    p.add_argument(
        "--refine",
        action="store_true",
        help="re-scan +/-1 degree around the incumbent minimum at 0.01 degree",
    )
    p.add_argument("--csv", default="scan.csv", help="where to write the grid (default scan.csv)")
    p.add_argument("--plot", default=None, help="also render a heatmap PNG to this path")

    p = sub.add_parser("sample", parents=[common], help="seeded Monte Carlo sampling")
    p.add_argument("--n", type=int, default=100_000, help="number of trials")
    p.add_argument("--seed", type=int, default=0, help="RNG seed")
    p.add_argument("--source", choices=("quantum", "lhv"), default="quantum")
    p.add_argument(
        "--settings-policy",
        default="uniform",
        help="'uniform' or a fixed pair such as AB (default uniform)",
    )
    p.add_argument("--model", default=None, help="model file for --source lhv (default: uniform-8)")
    p.add_argument("--trials-csv", default=None, help="write the per-trial log here")
    p.add_argument("--plot", default=None, help="render an estimates figure PNG to this path")

    p = sub.add_parser(
        "appendix-a", parents=[common], help="determinism derivation for a model file"
    )
    p.add_argument("model", help="model file (JSON)")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "quantum":
            doc = cmd_quantum(tuple(args.angles))
        elif args.command == "lhv":
            doc = cmd_lhv(args.model)
        elif args.command == "scan":
            _, doc = cmd_scan(args.step, args.refine, args.csv, args.plot)
        elif args.command == "sample":
            doc = cmd_sample(
                n=args.n,
                seed=args.seed,
                source_name=args.source,
                settings_policy=args.settings_policy,
                model_path=args.model,
                trials_csv=args.trials_csv,
                plot_path=args.plot,
            )
        else:
            doc = cmd_appendix_a(args.model)
        _emit(doc, args.format, args.output)
    except (TrinebellError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
