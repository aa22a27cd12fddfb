"""Command-line interface.

Exit codes: 0 success, 1 selftest failure, 2 file/argument parse error,
3 precondition violation (named in the message), 4 solver non-convergence.

Subcommands::

    distance     closed-form distances between two measure files
    geodesic     sampled geodesic path, JSON + CSV summary
    heatflow     entropy/Fisher/mass table along the heat flow
    bridge       Schrödinger bridge between two measures
    gamma-sweep  bridge objective across a descending temperature list
    convexity    entropy along the geodesic vs. the chord bound
    selftest     seeded invariant suite over all modules
"""

from __future__ import annotations

import argparse
import math
import os
import sys

import numpy as np

from . import io as fio
from .entropy_flow import entropy, fisher_information, flow_table
from .exceptions import FRGeoError, MeasureFormatError, NoConvergenceError
from .fisher_rao import (
    MeasurePath,
    fisher_rao_distance,
    fisher_rao_geodesic,
    hellinger_distance_sq,
    hellinger_geodesic,
    metric_speed,
)
from .measures import (
    MatrixMeasure,
    ReferenceMeasure,
    mass,
    tv_distance,
    uniform_reference,
)
from .schrodinger import SchrodingerConfig, convexity_experiment, gamma_sweep, solve_bridge
from .selftest import run_selftest

EXIT_OK = 0
EXIT_SELFTEST_FAIL = 1
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_NO_CONVERGENCE = 4


def _load_measure(path: str) -> MatrixMeasure:
    try:
        return fio.load_measure(path)
    except (OSError, MeasureFormatError) as exc:
        raise _ParseFailure(f"cannot load measure '{path}': {exc}") from exc


def _load_reference(path: str | None, like: MatrixMeasure) -> ReferenceMeasure:
    if path is None:
        return uniform_reference(like.support, like.dim)
    try:
        return fio.load_reference(path)
    except (OSError, MeasureFormatError) as exc:
        raise _ParseFailure(f"cannot load reference '{path}': {exc}") from exc


class _ParseFailure(Exception):
    pass


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        values = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise _ParseFailure(f"cannot parse {what} '{text}': {exc}") from exc
    if not values:
        raise _ParseFailure(f"empty {what} '{text}'")
    return values


def _path_csv_rows(path: MeasurePath, lam: ReferenceMeasure, metric: str):
    speeds = metric_speed(path, metric)
    for k, (t, g) in enumerate(zip(path.times, path.slices)):
        yield (float(t), mass(g), entropy(g, lam), speeds[k])


def _cmd_distance(args) -> int:
    g0 = _load_measure(args.g0)
    g1 = _load_measure(args.g1)
    metric = args.metric
    if metric == "tv":
        print(f"tv_distance = {tv_distance(g0, g1)!r}")
        return EXIT_OK
    dh_sq = hellinger_distance_sq(g0, g1)
    if metric == "bures":
        # Fiberwise aggregate: the square root of the summed squared fiber
        # distances (one fiber when the support is a single point).
        print(f"bures_fiberwise = {math.sqrt(dh_sq / 4.0)!r}")
        return EXIT_OK
    if metric == "hellinger":
        print(f"hellinger = {math.sqrt(dh_sq)!r}")
        print(f"hellinger_sq = {dh_sq!r}")
        return EXIT_OK
    dfr = fisher_rao_distance(g0, g1)
    print(f"fisher_rao = {dfr!r}")
    print(f"hellinger = {math.sqrt(dh_sq)!r}")
    print(f"cone_inversion_argument = {1.0 - dh_sq / 8.0!r}")
    return EXIT_OK


def _cmd_geodesic(args) -> int:
    g0 = _load_measure(args.g0)
    g1 = _load_measure(args.g1)
    lam = _load_reference(args.reference, g0)
    ts = np.linspace(0.0, 1.0, args.steps + 1)
    if args.metric == "fisher-rao":
        path = fisher_rao_geodesic(g0, g1, ts)
        metric = "fisher_rao"
    else:
        path = hellinger_geodesic(g0, g1, ts)
        metric = "hellinger"
    fio.ensure_dir(args.out)
    fio.save_measure_path(os.path.join(args.out, "path.json"), path.times, path.slices)
    fio.write_csv(
        os.path.join(args.out, "path.csv"),
        ["time", "mass", "entropy", "speed"],
        _path_csv_rows(path, lam, metric),
    )
    print(f"wrote {args.out}/path.json and {args.out}/path.csv ({path.n_slices} slices)")
    return EXIT_OK


def _cmd_heatflow(args) -> int:
    g = _load_measure(args.g)
    lam = _load_reference(args.reference, g)
    ts = np.linspace(0.0, args.t, args.steps + 1)
    rows = flow_table(g, lam, ts)
    fio.write_csv(args.out, ["t", "entropy", "fisher", "mass", "tv_to_equilibrium"], rows)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


def _cmd_bridge(args) -> int:
    g0 = _load_measure(args.g0)
    g1 = _load_measure(args.g1)
    lam = _load_reference(args.reference, g0)
    cfg = SchrodingerConfig(epsilon=args.epsilon, n_steps=args.steps, max_iters=args.max_iters)
    result = solve_bridge(g0, g1, lam, cfg)
    fio.ensure_dir(args.out)
    fio.save_measure_path(os.path.join(args.out, "path.json"), result.path.times, result.path.slices)
    speeds = metric_speed(result.path, "fisher_rao")
    rows = [
        (float(t), mass(g), entropy(g, lam), fisher_information(g, lam), speeds[k])
        for k, (t, g) in enumerate(zip(result.path.times, result.path.slices))
    ]
    fio.write_csv(os.path.join(args.out, "slices.csv"), ["t", "mass", "entropy", "fisher", "speed"], rows)
    print(f"objective = {result.objective!r}")
    print(f"kinetic = {result.kinetic!r}")
    print(f"fisher_term = {result.fisher_term!r}")
    print(f"converged = {result.converged} after {result.iterations} iterations")
    if not result.converged:
        raise NoConvergenceError(f"bridge stopped after {result.iterations} iterations without converging")
    return EXIT_OK


def _cmd_gamma_sweep(args) -> int:
    g0 = _load_measure(args.g0)
    g1 = _load_measure(args.g1)
    lam = _load_reference(args.reference, g0)
    epsilons = _parse_floats(args.epsilons, "epsilon list")
    cfg = SchrodingerConfig(epsilon=epsilons[0], n_steps=args.steps)
    rows = gamma_sweep(g0, g1, lam, epsilons, cfg, jobs=args.jobs)
    dfr_sq = fisher_rao_distance(g0, g1) ** 2
    table = [
        (r.epsilon, 2.0 * r.objective, dfr_sq, r.tv_gap)
        for r in rows
    ]
    fio.write_csv(args.out, ["epsilon", "objective_x2", "dfr_sq", "tv_gap"], table)
    failed = [r for r in rows if r.error is not None]
    for r in rows:
        status = f"error: {r.error}" if r.error else ("converged" if r.converged else "not converged")
        print(f"epsilon={r.epsilon}: objective_x2={2.0 * r.objective!r} tv_gap={r.tv_gap!r} ({status})")
    print(f"wrote {args.out}")
    if failed:
        raise NoConvergenceError(f"{len(failed)} sweep row(s) failed")
    if any(not r.converged for r in rows):
        raise NoConvergenceError("at least one sweep row did not converge")
    return EXIT_OK


def _cmd_convexity(args) -> int:
    g0 = _load_measure(args.g0)
    g1 = _load_measure(args.g1)
    lam = _load_reference(args.reference, g0)
    thetas = _parse_floats(args.theta_grid, "theta grid")
    rows = convexity_experiment(g0, g1, lam, thetas, check=False)
    table = [(theta, lhs, rhs, rhs - lhs) for theta, lhs, rhs in rows]
    fio.write_csv(args.out, ["theta", "entropy_lhs", "bound_rhs", "slack"], table)
    worst = min(rhs - lhs for _, lhs, rhs in rows)
    print(f"wrote {args.out}; worst slack = {worst!r}")
    if worst < -1e-6:
        print("half-convexity bound violated", file=sys.stderr)
        return EXIT_SELFTEST_FAIL
    return EXIT_OK


def _cmd_selftest(args) -> int:
    results = run_selftest(seed=args.seed, force_fail=args.force_fail)
    failed = 0
    for r in results:
        if r.passed:
            print(f"PASS {r.group}")
        else:
            failed += 1
            print(f"FAIL {r.group}: {r.detail}")
    print(f"{len(results) - failed}/{len(results)} invariant groups passed (seed {args.seed})")
    return EXIT_OK if failed == 0 else EXIT_SELFTEST_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frgeo",
        description="Distances, geodesics, heat flow and Schrödinger bridges "
        "for Hermitian-PSD-matrix-valued measures on finite supports.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="distance between two measure files")
    p.add_argument("g0")
    p.add_argument("g1")
    p.add_argument("--metric", choices=["bures", "hellinger", "fisher-rao", "tv"], default="fisher-rao")
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("geodesic", help="sampled geodesic path (JSON + CSV: time, mass, entropy, speed)")
    p.add_argument("g0")
    p.add_argument("g1")
    p.add_argument("--metric", choices=["hellinger", "fisher-rao"], default="fisher-rao")
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--reference", default=None, help="reference measure file (default: uniform)")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_geodesic)

    p = sub.add_parser("heatflow", help="CSV table (t, entropy, fisher, mass, tv_to_equilibrium)")
    p.add_argument("g")
    p.add_argument("--reference", default=None)
    p.add_argument("--t", type=float, default=1.0, help="final flow time")
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(fn=_cmd_heatflow)

    p = sub.add_parser(
        "bridge",
        help="Schrödinger bridge between two sphere measures "
        "(writes path.json and slices.csv: t, mass, entropy, fisher, speed)",
    )
    p.add_argument("g0")
    p.add_argument("g1")
    p.add_argument("--reference", default=None)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--steps", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(fn=_cmd_bridge)

    p = sub.add_parser("gamma-sweep", help="CSV (epsilon, objective_x2, dfr_sq, tv_gap) over a descending epsilon list")
    p.add_argument("g0")
    p.add_argument("g1")
    p.add_argument("--reference", default=None)
    p.add_argument("--epsilons", default="0.5,0.2,0.1,0.05", help="comma-separated, descending")
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--jobs", type=int, default=1, help="worker pool size; rows run cold when > 1")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(fn=_cmd_gamma_sweep)

    p = sub.add_parser("convexity", help="CSV (theta, entropy_lhs, bound_rhs, slack) along the geodesic")
    p.add_argument("g0")
    p.add_argument("g1")
    p.add_argument("--reference", default=None)
    p.add_argument("--theta-grid", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    p.add_argument("--out", required=True, help="output CSV file")
    p.set_defaults(fn=_cmd_convexity)

    p = sub.add_parser("selftest", help="run the seeded invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-fail", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(fn=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors, matching the parse-error code
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except _ParseFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (FRGeoError, ValueError) as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
