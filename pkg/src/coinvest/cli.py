"""Command-line frontend: solve equilibria, sweep the high cost, simulate
paths, and compare welfare across arrangements.

Solutions are emitted as JSON, grids and paths as CSV, all numbers with 12
significant digits. Exit codes: 0 on success, 1 when the model or the
equilibrium conditions reject the inputs, 2 for usage, parsing, or
simulation-config mistakes.
"""

import argparse
import json
import math
import os
import sys

from dataclasses import dataclass

import numpy as np

from .diffusion import I_func, ModelParams, critical_points
from .errors import (
    CoinvestError,
    ConditionFailed,
    ConfigError,
    DomainError,
    NoRootError,
    NoSolutionError,
    ParameterError,
    SymmetricDegenerateError,
)
from .impulse import (
    efficiency_compare,
    pure_equilibrium,
    residuals,
    solve_mixed_tsspe,
    value_U1,
    value_V,
)
from .simulate import (
    SimConfig,
    estimate_payoffs,
    simulate_path,
    write_events_csv,
    write_path_csv,
)
from .single_game import asymmetry_diagnostic


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one CLI invocation."""

    model: ModelParams
    c1: float
    c2: float
    options: argparse.Namespace


_FLOAT_KEYS = (
    "mu", "sigma", "r", "alpha", "k", "c1", "c2",
    "x0", "dt", "t_max", "x_min", "x_max", "c1_min", "c1_max", "c1_step",
)
_INT_KEYS = ("n_paths", "seed", "n_points")

# applied after the config file so that file values beat built-in defaults
# but explicit flags beat both
_DEFAULTS = {"dt": 1e-3, "n_paths": 100_000, "seed": 42, "n_points": 50}


def _sig(value):
    """Round a float to the 12 significant digits the outputs carry."""
    return float(f"{value:.12g}")


def _condition(err):
    if isinstance(err, ConditionFailed):
        return err.condition
    if isinstance(err, SymmetricDegenerateError):
        return "symmetric-degenerate"
    if isinstance(err, NoRootError):
        return "z1-no-root"
    if isinstance(err, NoSolutionError):
        return "no-solution"
    if isinstance(err, ParameterError):
        return "parameter"
    if isinstance(err, DomainError):
        return "domain"
    return "internal"


def _read_config(src):
    values = {}
    with open(src) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"bad config line: {line!r}")
            key, _, raw = line.partition("=")
            values[key.strip()] = raw.strip()
    return values


def _apply_config(args):
    if getattr(args, "config", None) is None:
        return
    for key, raw in _read_config(args.config).items():
        try:
            if key in _FLOAT_KEYS:
                value = float(raw)
            elif key in _INT_KEYS:
                value = int(raw)
            else:
                raise ConfigError(f"unknown config key: {key}")
        except ValueError:
            raise ConfigError(f"bad value for {key}: {raw!r}") from None
        # keys belonging to other subcommands are allowed and skipped, so a
        # single file can serve all four commands
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)
    return


def _require(parser, args, names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        parser.error(f"missing required arguments: {flags}")


def cmd_solve(config):
    """Solve the requested game; returns (exit_code, JSON document)."""
    try:
        if config.options.game == "single":
            diag = asymmetry_diagnostic(config.model, config.c1, config.c2)
            cps = critical_points(config.model)
            doc = {key: _sig(val) for key, val in diag.items()}
            doc["z_star"] = _sig(cps.z_star)
            return 0, doc
        eq = solve_mixed_tsspe(config.model, config.c1, config.c2)
    except CoinvestError as err:
        return 1, {"error": {"condition": _condition(err), "message": str(err)}}
    res = residuals(eq, config.model)
    doc = {
        "theta_star": _sig(eq.theta_star),
        "z1": _sig(eq.z1),
        "z2": _sig(eq.z2),
        "q": _sig(eq.q),
        "w": _sig(eq.w),
        "u1": _sig(eq.u1),
        "residuals": {key: _sig(val) for key, val in res.items()},
        "conditions": {"optimal_u": True, "q_range": True, "ordering": True},
    }
    return 0, doc


def cmd_sweep(config):
    """CSV over a c1 grid; rows where no equilibrium exists keep only the
    cost and the zero validity flag."""
    opts = config.options
    lines = ["c1,valid,theta_star,z1,z2,q"]
    span = opts.c1_max - opts.c1_min
    count = 0 if span < 0 else int(math.floor(span / opts.c1_step + 1e-9)) + 1
    for i in range(count):
        c1 = opts.c1_min + i * opts.c1_step
        try:
            eq = solve_mixed_tsspe(config.model, c1, config.c2)
        except (ConditionFailed, NoRootError, SymmetricDegenerateError):
            lines.append(f"{c1:.12g},0,,,,")
            continue
        lines.append(
            f"{c1:.12g},1,{eq.theta_star:.12g},{eq.z1:.12g},"
            f"{eq.z2:.12g},{eq.q:.12g}"
        )
    return "\n".join(lines) + "\n"


def cmd_simulate(config):
    """Simulate the equilibrium profile: writes path.csv, events.csv and
    payoffs.json under --out and echoes the payoff document."""
    opts = config.options
    eq = solve_mixed_tsspe(config.model, config.c1, config.c2)
    t_max = opts.t_max if opts.t_max is not None else 20.0 / config.model.r
    cfg = SimConfig(
        dt=opts.dt, t_max=t_max, n_paths=opts.n_paths, seed=opts.seed, x0=opts.x0
    )
    path = simulate_path(eq, config.model, cfg, path_index=0)
    est = estimate_payoffs(eq, config.model, cfg)
    ref1 = float(value_U1(eq, config.model, cfg.x0))
    ref2 = float(value_V(eq, config.model, 2, cfg.x0))
    doc = {
        "mean1": _sig(est.mean1),
        "mean2": _sig(est.mean2),
        "se1": _sig(est.se1),
        "se2": _sig(est.se2),
        "analytic": {"U1": _sig(ref1), "V2": _sig(ref2)},
        "z_scores": {
            "z1": _sig((est.mean1 - ref1) / est.se1),
            "z2": _sig((est.mean2 - ref2) / est.se2),
        },
    }
    outdir = opts.out or "."
    os.makedirs(outdir, exist_ok=True)
    write_path_csv(path, os.path.join(outdir, "path.csv"))
    write_events_csv(path, os.path.join(outdir, "events.csv"))
    with open(os.path.join(outdir, "payoffs.json"), "w") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def cmd_compare(config):
    """Welfare CSV (x, V_M, V_P, V_S) with the free-rider coefficient and
    its validity bound in comment lines."""
    opts = config.options
    pure = pure_equilibrium(config.model, config.c1, config.c2)
    cps = critical_points(config.model)
    bound = float(-I_func(config.model, cps.x_hat))
    if not pure.valid:
        raise ConditionFailed(
            "pure-condition",
            f"free-rider coefficient beta = {pure.beta:g} does not exceed "
            f"-I(x_hat) = {bound:g}, so the pure equilibrium fails",
        )
    eq = solve_mixed_tsspe(config.model, config.c1, config.c2)
    x_min = opts.x_min if opts.x_min is not None else eq.theta_star / 2.0
    x_max = opts.x_max if opts.x_max is not None else 4.0 * eq.z2
    grid = np.linspace(x_min, x_max, opts.n_points)
    rows = efficiency_compare(config.model, config.c1, config.c2, grid)
    lines = [
        f"# beta={pure.beta:.12g}",
        f"# minus_I_xhat={bound:.12g}",
        "x,V_M,V_P,V_S",
    ]
    for row in rows:
        lines.append(
            ",".join(f"{row[col]:.12g}" for col in ("x", "V_M", "V_P", "V_S"))
        )
    return "\n".join(lines) + "\n"


def _add_shared(parser):
    group = parser.add_argument_group("model")
    group.add_argument("--mu", type=float, help="drift of the state")
    group.add_argument("--sigma", type=float, help="volatility of the state")
    group.add_argument("--r", type=float, help="discount rate")
    group.add_argument("--alpha", type=float, help="profit exponent")
    group.add_argument("--k", type=float, help="proportional investment cost")
    group.add_argument("--c1", type=float, help="player 1 upfront cost")
    group.add_argument("--c2", type=float, help="player 2 upfront cost")
    parser.add_argument("--config", help="flat key=value file; flags win")
    parser.add_argument("--out", help="output path (directory for simulate)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="coinvest",
        description="equilibria of two-player investment games in a common good",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve one game to JSON")
    _add_shared(p_solve)
    p_solve.add_argument(
        "--game",
        choices=("impulse", "single"),
        default="impulse",
        help="impulse: mixed equilibrium of the repeated game; "
        "single: trigger asymmetry of the one-shot game",
    )

    p_sweep = sub.add_parser("sweep", help="sweep c1 over a grid to CSV")
    _add_shared(p_sweep)
    p_sweep.add_argument("--c1-min", type=float, dest="c1_min")
    p_sweep.add_argument("--c1-max", type=float, dest="c1_max")
    p_sweep.add_argument("--c1-step", type=float, dest="c1_step")

    p_sim = sub.add_parser("simulate", help="Monte Carlo run of the equilibrium")
    _add_shared(p_sim)
    p_sim.add_argument("--x0", type=float, help="initial state")
    p_sim.add_argument("--dt", type=float, help="time step (default 1e-3)")
    p_sim.add_argument("--t-max", type=float, dest="t_max", help="horizon (default 20/r)")
    p_sim.add_argument("--n-paths", type=int, dest="n_paths", help="paths (default 1e5)")
    p_sim.add_argument("--seed", type=int, help="RNG seed (default 42)")

    p_cmp = sub.add_parser("compare", help="welfare comparison CSV")
    _add_shared(p_cmp)
    p_cmp.add_argument("--x-min", type=float, dest="x_min")
    p_cmp.add_argument("--x-max", type=float, dest="x_max")
    p_cmp.add_argument("--n-points", type=int, dest="n_points")

    return parser


_REQUIRED = {
    "solve": ("mu", "sigma", "r", "alpha", "k", "c1", "c2"),
    "sweep": ("mu", "sigma", "r", "alpha", "k", "c2", "c1_min", "c1_max", "c1_step"),
    "simulate": ("mu", "sigma", "r", "alpha", "k", "c1", "c2", "x0"),
    "compare": ("mu", "sigma", "r", "alpha", "k", "c1", "c2"),
}


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args)
        for key, value in _DEFAULTS.items():
            if hasattr(args, key) and getattr(args, key) is None:
                setattr(args, key, value)
        _require(parser, args, _REQUIRED[args.command])
        model = ModelParams(
            mu=args.mu, sigma=args.sigma, r=args.r,
            alpha_profit=args.alpha, k=args.k,
        )
        config = RunConfig(model=model, c1=args.c1, c2=args.c2, options=args)
        if args.command == "solve":
            code, doc = cmd_solve(config)
            _emit(json.dumps(doc, indent=2) + "\n", args.out)
            return code
        if args.command == "sweep":
            _emit(cmd_sweep(config), args.out)
            return 0
        if args.command == "simulate":
            return cmd_simulate(config)
        _emit(cmd_compare(config), args.out)
        return 0
    except SystemExit as exc:
        return int(exc.code or 0)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except CoinvestError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
