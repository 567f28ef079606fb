"""Command-line entry point.

Subcommands:
  simulate    run a scenario file and write the telemetry CSV
  fit         offline peak fit over a time window of an existing log
  stats       beacon-level statistics over a time window
  trajectory  decimated (azimuth, elevation) pairs for plotting

Exit codes: 0 success, 1 usage or configuration error, 2 runtime
estimation error.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .antenna import BeaconSample
from .beacon import QuadraticCoefficients, az_coeff_from_elevation
from .estimators import (
    EstimationError,
    InsufficientDataError,
    ls_fit,
    recover_peak,
    regression_row,
    rls_init,
    rls_recover,
    rls_update,
)
from .scenario import ScenarioError, load_scenario, resolve_scenario_path
from .telemetry import beacon_stats, extract_trajectory, format_float, read_csv, write_csv
from .tracker import PatternInfeasibleError, run_scenario

USAGE_ERROR = 1
ESTIMATION_ERROR = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; the CLI contract reserves
    # 2 for estimation failures.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="steptrack", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sim = sub.add_parser("simulate", help="run a scenario and write telemetry CSV")
    sim.add_argument("scenario", help="scenario file path or bundled scenario name")
    sim.add_argument("--output", help="override the scenario's output CSV path")
    sim.add_argument(
        "--duration-s", type=float, default=None, help="override the run duration"
    )

    fit = sub.add_parser("fit", help="offline peak fit on a telemetry log")
    fit.add_argument("log", help="telemetry CSV path")
    fit.add_argument(
        "--k-y", type=float, required=True, help="elevation curvature, dB/deg^2"
    )
    fit.add_argument("--t0", type=float, default=None, help="window start, s")
    fit.add_argument("--t1", type=float, default=None, help="window end, s")
    fit.add_argument("--mode", choices=("batch-ls", "rls"), default="batch-ls")
    fit.add_argument(
        "--forgetting", type=float, default=1.0, help="RLS forgetting factor"
    )
    fit.add_argument(
        "--delta", type=float, default=1e8, help="RLS initial gain scale"
    )
    fit.add_argument(
        "--k-floor",
        type=float,
        default=0.01,
        help="minimum usable curvature magnitude, dB/deg^2",
    )

    st = sub.add_parser("stats", help="beacon statistics over a window")
    st.add_argument("log", help="telemetry CSV path")
    st.add_argument("--t0", type=float, default=None)
    st.add_argument("--t1", type=float, default=None)

    tr = sub.add_parser("trajectory", help="plot-ready (az, el) trace")
    tr.add_argument("log", help="telemetry CSV path")
    tr.add_argument("--decimation", type=int, default=1)
    tr.add_argument("--output", required=True, help="output CSV path")

    return parser


def _cmd_simulate(args) -> int:
    try:
        path = resolve_scenario_path(args.scenario)
        scenario = load_scenario(path)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    duration = scenario.duration if args.duration_s is None else args.duration_s
    output = args.output or scenario.output
    try:
        log = run_scenario(
            scenario.orbit,
            scenario.antenna,
            scenario.receiver,
            scenario.tracker,
            duration,
            peak_level_db=scenario.peak_level_db,
        )
    except (ValueError, PatternInfeasibleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        write_csv(log, output)
    except OSError as exc:
        print(f"error: cannot write {output}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(f"wrote {len(log)} records to {output}")
    if len(log):
        stats = beacon_stats(log)
        cmd_az = [r.commanded_az for r in log]
        cmd_el = [r.commanded_el for r in log]
        print(f"beacon mean {stats.mean:.3f} dB, stddev {stats.stddev:.3f} dB, "
              f"min {stats.minimum:.3f} dB, max {stats.maximum:.3f} dB")
        print(f"command peak-to-peak: azimuth {max(cmd_az) - min(cmd_az):.4f} deg, "
              f"elevation {max(cmd_el) - min(cmd_el):.4f} deg")
    return 0


def _window(log, t0, t1):
    return [
        r for r in log
        if (t0 is None or r.t >= t0) and (t1 is None or r.t <= t1)
    ]


def _cmd_fit(args) -> int:
    try:
        log = read_csv(args.log)
    except (OSError, ValueError) as exc:
        print(f"error: cannot read log: {exc}", file=sys.stderr)
        return USAGE_ERROR
    records = _window(log, args.t0, args.t1)
    try:
        if len(records) < 3:
            raise InsufficientDataError(
                f"window holds {len(records)} records, need at least 3"
            )
        mean_az = float(np.mean([r.readback_az for r in records]))
        mean_el = float(np.mean([r.readback_el for r in records]))
        k = QuadraticCoefficients(
            k_az=az_coeff_from_elevation(args.k_y, mean_el), k_el=args.k_y
        )
        # Fit in window-mean-centered coordinates: identical minimizer,
        # but keeps the recursive solver conditioned at large angles.
        rows = [
            regression_row(
                BeaconSample(
                    r.t, r.readback_az - mean_az, r.readback_el - mean_el, r.beacon_db
                ),
                k,
            )
            for r in records
        ]
        if args.mode == "batch-ls":
            beta = ls_fit(rows)
            local = recover_peak(beta, k, args.k_floor)
        else:
            state = rls_init(args.forgetting, args.delta)
            for row in rows:
                state, _ = rls_update(state, row)
            beta = state.coeffs
            local = rls_recover(state, k, args.k_floor)
    except (EstimationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return ESTIMATION_ERROR
    x = np.array([row.regressors for row in rows])
    y = np.array([row.response for row in rows])
    rms = float(np.sqrt(np.mean((y - x @ beta) ** 2)))
    print(f"peak azimuth   : {local.azimuth + mean_az:.6f} deg")
    print(f"peak elevation : {local.elevation + mean_el:.6f} deg")
    print(f"peak level     : {local.level:.6f} dB")
    print(f"residual rms   : {rms:.6e} dB")
    return 0


def _cmd_stats(args) -> int:
    try:
        log = read_csv(args.log)
        stats = beacon_stats(log, args.t0, args.t1)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(f"records : {len(_window(log, args.t0, args.t1))}")
    print(f"mean    : {stats.mean:.6f} dB")
    print(f"stddev  : {stats.stddev:.6f} dB")
    print(f"min     : {stats.minimum:.6f} dB")
    print(f"max     : {stats.maximum:.6f} dB")
    return 0


def _cmd_trajectory(args) -> int:
    try:
        log = read_csv(args.log)
        points = extract_trajectory(log, args.decimation)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    try:
        with open(args.output, "w", newline="") as fh:
            fh.write("readback_az_deg,readback_el_deg\n")
            for az, el in points:
                fh.write(f"{format_float(az)},{format_float(el)}\n")
    except OSError as exc:
        print(f"error: cannot write {args.output}: {exc}", file=sys.stderr)
        return USAGE_ERROR
    print(f"wrote {len(points)} points to {args.output}")
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    handlers = {
        "simulate": _cmd_simulate,
        "fit": _cmd_fit,
        "stats": _cmd_stats,
        "trajectory": _cmd_trajectory,
    }
    return handlers[args.subcommand](args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
