"""Batch command-line front end.

Subcommands: simulate, bounds, martingale-check, lower-bound, oracle-check.
Every CSV output gets a sibling .manifest.json that mirrors the full
configuration (seed included) so the run can be reproduced exactly. Exit
codes: 0 success, 1 certified-bound or oracle violation, 2 usage/config
error, 3 hypothesis violation.
"""

import argparse
import json
import math
import os
import sys
from dataclasses import asdict, dataclass

from . import __version__
from ._backend import backend_name
from ._csvio import fmt_flag, fmt_float, write_csv, write_manifest
from .bounds import (
    DEFAULT_C,
    DEFAULT_DELTA,
    DEFAULT_HW_CONSTANT,
    BoundParams,
    bernstein_tail,
    freedman_tail,
    hw19_deviation,
    main_tail,
    martingale_freedman_params,
)
from .distributions import (
    RandomStream,
    distribution_from_config,
    sample_stack,
)
from .errors import ConfigError, HypothesisError, MatconcError
from .martingale import certify_bounds, decompose, trace_to_csv
from .montecarlo import (
    bound_params_for,
    compare_bounds,
    default_t_grid,
    estimate_tail,
    lower_bound_experiment,
    write_lower_bound_csv,
    write_tail_csv,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """Command name plus its option mapping; round-trips bitwise through
    JSON (all values are JSON primitives, floats serialized via repr)."""

    command: str
    options: dict

    def to_json(self):
        return json.dumps(
            {"command": self.command, "options": self.options}, sort_keys=True
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(command=obj["command"], options=obj["options"])


def parse_grid(spec):
    """Grid syntax: "start:stop:step" (endpoints inclusive within half a
    step) or a comma-separated value list."""
    spec = spec.strip()
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid spec must be start:stop:step, got {spec!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"bad grid spec {spec!r}: {exc}") from exc
        if step <= 0 or stop < start:
            raise ConfigError(f"grid spec needs step > 0 and stop >= start: {spec!r}")
        count = int(math.floor((stop - start + 0.5 * step) / step))
        return [start + i * step for i in range(count + 1)]
    try:
        return [float(p) for p in spec.split(",") if p.strip() != ""]
    except ValueError as exc:
        raise ConfigError(f"bad grid list {spec!r}: {exc}") from exc


def _default_seed():
    env = os.environ.get("MATCONC_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"MATCONC_SEED must be an integer, got {env!r}") from exc
    return 0


def _dist_config_from_args(args):
    cfg = {
        "kind": args.dist,
        "d": args.d,
        "L": args.L,
        "params": {},
    }
    if args.dist == "ginibre_clipped" and args.entry_std is not None:
        cfg["params"]["entry_std"] = args.entry_std
    if args.mean_file:
        cfg["mean_file"] = args.mean_file
    return cfg


def _add_dist_flags(sub):
    sub.add_argument(
        "--dist",
        required=True,
        choices=[
            "two_point_scalar",
            "hermitian_bounded",
            "diagonal_rademacher",
            "ginibre_clipped",
        ],
    )
    sub.add_argument("--d", type=int, default=1, help="matrix dimension")
    sub.add_argument("--L", type=float, required=True, help="distribution scale")
    sub.add_argument(
        "--mean-file", default=None, help="matrix JSON file with the hermitian_bounded center"
    )
    sub.add_argument(
        "--entry-std", type=float, default=None, help="ginibre_clipped entry std"
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="matconc",
        description="Concentration experiments for normalized random matrix products",
    )
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="command", required=True)

    sim = subs.add_parser("simulate", help="Monte Carlo tail estimate vs bounds")
    _add_dist_flags(sim)
    sim.add_argument("--n", type=int, required=True, help="factors per product")
    sim.add_argument("--trials", type=int, required=True)
    sim.add_argument("--t-grid", default=None, help="start:stop:step or comma list")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--workers", type=int, default=0, help="0 = machine parallelism")
    sim.add_argument("--c", type=float, default=DEFAULT_C)
    sim.add_argument("--hw-constant", type=float, default=DEFAULT_HW_CONSTANT)
    sim.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    sim.add_argument("--out", required=True, help="output CSV path")

    bnd = subs.add_parser("bounds", help="tabulate the closed-form bounds")
    bnd.add_argument("--n", type=int, required=True)
    bnd.add_argument("--d", type=int, required=True)
    bnd.add_argument("--L", type=float, required=True)
    bnd.add_argument("--c", type=float, default=DEFAULT_C)
    bnd.add_argument("--hw-constant", type=float, default=DEFAULT_HW_CONSTANT)
    bnd.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    bnd.add_argument("--t-grid", default=None, help="start:stop:step or comma list")
    bnd.add_argument("--n-grid", default=None, help="grid over n at fixed --t")
    bnd.add_argument("--t", type=float, default=None, help="fixed t for --n-grid")
    bnd.add_argument("--R", type=float, default=None, help="freedman increment bound")
    bnd.add_argument("--sigma2", type=float, default=None, help="freedman variation bound")
    bnd.add_argument("--out", required=True)

    mart = subs.add_parser(
        "martingale-check", help="decompose sampled instances and certify the bounds"
    )
    _add_dist_flags(mart)
    mart.add_argument("--n", type=int, required=True)
    mart.add_argument("--trials", type=int, default=100)
    mart.add_argument("--seed", type=int, default=None)
    mart.add_argument(
        "--assume-L",
        type=float,
        default=None,
        help="assert this norm bound instead of the distribution's certified one",
    )
    mart.add_argument("--out", required=True, help="trace CSV path (first trial)")

    low = subs.add_parser("lower-bound", help="scalar two-point lower-bound experiment")
    low.add_argument("--L", default="0.5,1,2,4", help="comma list of L values")
    low.add_argument("--c", default="0.05,0.1,0.2", help="comma list of c values")
    low.add_argument("--n", type=int, required=True)
    low.add_argument("--trials", type=int, required=True)
    low.add_argument("--seed", type=int, default=None)
    low.add_argument("--out", required=True)

    orc = subs.add_parser("oracle-check", help="run enumeration-oracle equivalences")
    orc.add_argument("--n-max", type=int, default=6)
    orc.add_argument("--out", default=None, help="optional JSON report path")
    return parser


def _config_payload(command, options, outputs):
    # route through ExperimentConfig so the manifest carries exactly the
    # JSON form that round-trips
    payload = json.loads(ExperimentConfig(command=command, options=options).to_json())
    payload.update(
        {
            "outputs": outputs,
            "backend": backend_name(),
            "package_version": __version__,
        }
    )
    return payload


def _run_simulate(args):
    seed = args.seed if args.seed is not None else _default_seed()
    dist = distribution_from_config(_dist_config_from_args(args))
    if args.t_grid is not None:
        grid = parse_grid(args.t_grid)
    else:
        grid = [float(t) for t in default_t_grid(args.n, dist.d, dist.norm_bound())]
    est = estimate_tail(dist, args.n, args.trials, grid, seed, workers=args.workers or None)
    params = bound_params_for(dist, args.n, args.delta, args.c, args.hw_constant)
    comparison = compare_bounds(est, params)
    write_tail_csv(comparison, args.out)
    options = {
        "distribution": est.config["distribution"],
        "n": args.n,
        "trials": args.trials,
        "seed": seed,
        "t_grid": [float(t) for t in grid],
        "c": args.c,
        "hw_constant": args.hw_constant,
        "delta": args.delta,
        "workers": args.workers,
    }
    payload = _config_payload("simulate", options, [os.path.basename(args.out)])
    payload["fitted_c"] = comparison.fitted_c if math.isfinite(comparison.fitted_c) else None
    write_manifest(args.out, payload)
    return EXIT_OK


def _bounds_row(params, include_freedman_defaults):
    p = params
    if p.R is None or p.sigma2 is None:
        if include_freedman_defaults:
            r, s2 = martingale_freedman_params(p.n, p.L)
            p = p.with_(R=r, sigma2=s2)
    bern = bernstein_tail(p)
    main = main_tail(p)
    hw = hw19_deviation(p)
    freed = freedman_tail(p)
    return [
        fmt_float(bern.value),
        fmt_flag(bern.valid),
        fmt_float(main.value),
        fmt_flag(main.valid),
        fmt_float(hw.value),
        fmt_float(freed),
    ]


def _run_bounds(args):
    if (args.t_grid is None) == (args.n_grid is None):
        raise ConfigError("bounds needs exactly one of --t-grid or --n-grid")
    base = dict(
        d=args.d,
        L=args.L,
        delta=args.delta,
        c=args.c,
        hw_constant=args.hw_constant,
        R=args.R,
        sigma2=args.sigma2,
    )
    include_defaults = args.R is None and args.sigma2 is None
    header_tail = ["bernstein", "bernstein_valid", "main", "main_valid", "hw19", "freedman"]
    rows = []
    if args.t_grid is not None:
        grid = parse_grid(args.t_grid)
        header = ["t"] + header_tail
        for t in grid:
            params = BoundParams(n=args.n, t=float(t), **base)
            rows.append([fmt_float(t)] + _bounds_row(params, include_defaults))
        grid_options = {"t_grid": [float(t) for t in grid]}
    else:
        grid = parse_grid(args.n_grid)
        if args.t is None:
            raise ConfigError("--n-grid needs a fixed --t")
        header = ["n"] + header_tail
        for nv in grid:
            n_int = int(round(nv))
            if n_int < 1:
                raise ConfigError(f"n grid value {nv} is not a positive integer")
            params = BoundParams(n=n_int, t=args.t, **base)
            rows.append([str(n_int)] + _bounds_row(params, include_defaults))
        grid_options = {"n_grid": [int(round(v)) for v in grid], "t": args.t}
    write_csv(args.out, header, rows)
    options = {
        "n": args.n,
        "d": args.d,
        "L": args.L,
        "c": args.c,
        "hw_constant": args.hw_constant,
        "delta": args.delta,
        "R": args.R,
        "sigma2": args.sigma2,
        **grid_options,
    }
    write_manifest(args.out, _config_payload("bounds", options, [os.path.basename(args.out)]))
    return EXIT_OK


def _run_martingale_check(args):
    seed = args.seed if args.seed is not None else _default_seed()
    dist = distribution_from_config(_dist_config_from_args(args))
    assume_L = args.assume_L if args.assume_L is not None else dist.norm_bound()
    mu = dist.mean()
    exact = dist.is_finitely_supported()
    violations = 0
    max_increment = 0.0
    min_slack = math.inf
    first_trace = None
    for i in range(args.trials):
        xs = sample_stack(dist, RandomStream(seed, i), args.n)
        trace = decompose(xs, mu, assume_L, dist=dist if exact else None)
        report = certify_bounds(trace)
        if first_trace is None:
            first_trace = trace
        max_increment = max(max_increment, report.max_increment_norm)
        min_slack = min(min_slack, report.increment_slack)
        if not report.ok:
            violations += 1
    trace_to_csv(first_trace, args.out)
    options = {
        "distribution": _dist_config_from_args(args),
        "n": args.n,
        "trials": args.trials,
        "seed": seed,
        "assume_L": assume_L,
    }
    payload = _config_payload("martingale-check", options, [os.path.basename(args.out)])
    payload["summary"] = {
        "violations": violations,
        "max_increment_norm": max_increment,
        "min_increment_slack": min_slack,
        "exact_variations": exact,
    }
    write_manifest(args.out, payload)
    if violations:
        print(
            json.dumps({"error": "BoundViolation", "violations": violations}),
            file=sys.stderr,
        )
        return EXIT_VIOLATION
    return EXIT_OK


def _run_lower_bound(args):
    seed = args.seed if args.seed is not None else _default_seed()
    L_values = parse_grid(args.L)
    c_values = parse_grid(args.c)
    # one experiment per c, sharing the per-L streams (common random
    # numbers across c rows); rows concatenate into a single CSV
    reports = [
        lower_bound_experiment(L_values, c, args.n, args.trials, seed)
        for c in c_values
    ]
    write_lower_bound_csv(reports, args.out)
    options = {
        "L_values": [float(L) for L in L_values],
        "c_values": [float(c) for c in c_values],
        "n": args.n,
        "trials": args.trials,
        "seed": seed,
    }
    payload = _config_payload("lower-bound", options, [os.path.basename(args.out)])
    payload["rademacher_floors"] = [r.rademacher_floor for r in reports]
    write_manifest(args.out, payload)
    return EXIT_OK


def _run_oracle_check(args):
    from .oracles import run_all

    results = run_all(n_max=args.n_max)
    payload = [asdict(r) for r in results]
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    print(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": _run_simulate,
        "bounds": _run_bounds,
        "martingale-check": _run_martingale_check,
        "lower-bound": _run_lower_bound,
        "oracle-check": _run_oracle_check,
    }
    try:
        return handlers[args.command](args)
    except HypothesisError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return EXIT_HYPOTHESIS
    except MatconcError as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return EXIT_USAGE
    except OSError as exc:
        print(json.dumps({"error": "OSError", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
