"""Monte Carlo engine for the mixed two-stage equilibrium.

Paths follow the controlled state: exact log-normal steps between
interventions, a one-shot concession draw each time a fresh period first
touches the common trigger, and per-step thinning of the stage-2 hazard
rates below it. Discounted payoffs are accumulated per path and compared
against the closed-form values.

Per-path randomness is drawn from an independent stream seeded by
(seed, path_index), one normal and one uniform per step, so any path can be
reproduced in isolation and batches are independent of scheduling order.
"""

import csv
import math
from dataclasses import dataclass, replace

import numba as nb
import numpy as np

from .diffusion import resolvent
from .errors import ConfigError
from .impulse import hazard_rate, value_U1, value_V

_BATCH_ROWS = 1024
_EVENT_CAP = 4096


@dataclass(frozen=True)
class SimConfig:
    dt: float
    t_max: float
    n_paths: int
    seed: int
    x0: float


def default_config(params, x0, n_paths=100_000, seed=42, dt=1e-3):
    """Config with the stock horizon 20/r, which puts the discount tail
    below 1e-6 regardless of the rate."""
    return SimConfig(dt=dt, t_max=20.0 / params.r, n_paths=n_paths, seed=seed, x0=x0)


@dataclass(frozen=True)
class SimulatedPath:
    """One controlled trajectory.

    states[i] is the value at times[i] after any intervention at that
    instant, so plotting times against states draws the jumps. events rows
    are (t, player, pre, post, kind) with kind "hit-q" for the concession
    draw at the trigger and "hazard" for stage-2 mixing."""

    times: np.ndarray
    states: np.ndarray
    events: list


@dataclass(frozen=True)
class PayoffEstimate:
    mean1: float
    mean2: float
    se1: float
    se2: float
    n: int


def _validate(eq, params, cfg):
    if cfg.x0 <= 0.0:
        raise ConfigError(f"x0 must be positive, got {cfg.x0}")
    if cfg.n_paths < 1:
        raise ConfigError(f"n_paths must be at least 1, got {cfg.n_paths}")
    if not 0.0 < cfg.dt < 0.1 / params.r:
        raise ConfigError(f"dt must lie in (0, 1/(10 r)), got {cfg.dt}")
    if math.exp(-params.r * cfg.t_max) >= 1e-6:
        raise ConfigError(
            f"t_max = {cfg.t_max} leaves a discount tail above 1e-6"
        )
    grid = np.geomspace(eq.theta_star * 1e-6, eq.theta_star * (1.0 - 1e-9), 256)
    lam_max = max(
        float(np.max(hazard_rate(eq, params, 1, grid))),
        float(np.max(hazard_rate(eq, params, 2, grid))),
    )
    if lam_max * cfg.dt >= 0.5:
        raise ConfigError(
            f"dt too coarse for the hazard rates: max lambda*dt = "
            f"{lam_max * cfg.dt:g}"
        )


def _coeffs(eq, params):
    """Scalar coefficients of the two hazard rates, precomputed so the
    kernel can evaluate lambda_i(x) = (b + d*x - x**alpha)/(a - k*x)."""
    k = params.k
    line2 = value_V(eq, params, 2, eq.z2) - k * eq.z2 - eq.c2
    a1 = value_V(eq, params, 2, eq.z1) - line2
    b2 = params.r * line2
    line1 = value_U1(eq, params, eq.z1) - k * eq.z1 - eq.c1
    a2 = value_U1(eq, params, eq.z2) - line1
    b1 = params.r * line1
    dcoef = (params.r - params.mu) * k
    return a1, b2, a2, b1, dcoef


@nb.njit(cache=True)
def _run_path(x0, xa0, theta, z1, z2, za1, za2, q, kc, c1, c2,
              a1, b2, a2, b1, dcoef, dt,
              growth, growth_a, uniforms, disc, wdisc, events, states):
    """Simulate one path; returns (profit, cost1, cost2, n_events).

    growth and growth_a hold the per-step factors for X and X**alpha,
    uniforms one draw per step. disc holds discount factors at the grid
    times and wdisc the exact discounted weight of each interval's profit.
    events rows are (t, player, pre, post, kind01) with kind 0 for the
    trigger draw and 1 for a hazard investment; states, when non-empty,
    receives the start-of-interval values plus the final one.

    Each interval spends its uniform on at most one decision. The only
    overlap is a boost landing back at the trigger within the same step,
    which needs a move of order 150 sigma; that period then skips its
    trigger draw and opens in the second stage.
    """
    n = growth.shape[0]
    cap = events.shape[0]
    keep = states.shape[0] > 0
    x = x0
    xa = xa0
    profit = 0.0
    cost1 = 0.0
    cost2 = 0.0
    nev = 0
    stage1 = x >= theta
    u0_spent = False
    if stage1 and x <= theta:
        # the start point sits exactly on the trigger, so the first period
        # opens with the concession draw at t = 0
        u0_spent = True
        if uniforms[0] < q:
            cost2 += disc[0] * (kc * (z2 - x) + c2)
            if nev < cap:
                events[nev, 0] = 0.0
                events[nev, 1] = 2.0
                events[nev, 2] = x
                events[nev, 3] = z2
                events[nev, 4] = 0.0
            nev += 1
            x = z2
            xa = za2
        else:
            stage1 = False
    for i in range(n):
        u_spent = u0_spent and i == 0
        if not stage1 and x < theta and not u_spent:
            lam1 = (b2 + dcoef * x - xa) / (a1 - kc * x)
            lam2 = (b1 + dcoef * x - xa) / (a2 - kc * x)
            p1 = max(1.0 - math.exp(-lam1 * dt), 0.0)
            p2 = max(1.0 - math.exp(-lam2 * dt), 0.0)
            u = uniforms[i]
            both = p1 * p2
            investor = 0
            if u < 0.5 * both:
                investor = 1
            elif u < both:
                investor = 2
            elif u < p1:
                investor = 1
            elif u < p1 + p2 - both:
                investor = 2
            if investor == 1:
                cost1 += disc[i] * (kc * (z1 - x) + c1)
                if nev < cap:
                    events[nev, 0] = i * dt
                    events[nev, 1] = 1.0
                    events[nev, 2] = x
                    events[nev, 3] = z1
                    events[nev, 4] = 1.0
                nev += 1
                x = z1
                xa = za1
                stage1 = True
                u_spent = True
            elif investor == 2:
                cost2 += disc[i] * (kc * (z2 - x) + c2)
                if nev < cap:
                    events[nev, 0] = i * dt
                    events[nev, 1] = 2.0
                    events[nev, 2] = x
                    events[nev, 3] = z2
                    events[nev, 4] = 1.0
                nev += 1
                x = z2
                xa = za2
                stage1 = True
                u_spent = True
        if keep:
            states[i] = x
        profit += xa * wdisc[i]
        x *= growth[i]
        xa *= growth_a[i]
        if stage1 and x <= theta:
            if not u_spent and uniforms[i] < q:
                cost2 += disc[i + 1] * (kc * (z2 - x) + c2)
                if nev < cap:
                    events[nev, 0] = (i + 1) * dt
                    events[nev, 1] = 2.0
                    events[nev, 2] = x
                    events[nev, 3] = z2
                    events[nev, 4] = 0.0
                nev += 1
                x = z2
                xa = za2
            else:
                stage1 = False
    if keep:
        states[n] = x
    return profit, cost1, cost2, nev


@nb.njit(cache=True, parallel=True)
def _run_batch(x0, xa0, theta, z1, z2, za1, za2, q, kc, c1, c2,
               a1, b2, a2, b1, dcoef, dt,
               growth, growth_a, uniforms, disc, wdisc, out):
    for j in nb.prange(out.shape[0]):
        ev = np.empty((0, 5))
        st = np.empty(0)
        profit, cost1, cost2, _ = _run_path(
            x0, xa0, theta, z1, z2, za1, za2, q, kc, c1, c2,
            a1, b2, a2, b1, dcoef, dt,
            growth[j], growth_a[j], uniforms[j], disc, wdisc, ev, st)
        out[j, 0] = profit - cost1
        out[j, 1] = profit - cost2


def _grid(params, cfg):
    n = int(round(cfg.t_max / cfg.dt))
    times = np.arange(n + 1) * cfg.dt
    disc = np.exp(-params.r * times)
    wdisc = disc[:n] * ((1.0 - math.exp(-params.r * cfg.dt)) / params.r)
    return n, times, disc, wdisc


def _scalars(eq, params, cfg):
    a1, b2, a2, b1, dcoef = _coeffs(eq, params)
    return (cfg.x0, cfg.x0 ** params.alpha_profit, eq.theta_star,
            eq.z1, eq.z2,
            eq.z1 ** params.alpha_profit, eq.z2 ** params.alpha_profit,
            eq.q, params.k, eq.c1, eq.c2, a1, b2, a2, b1, dcoef, cfg.dt)


def _simulate_one(eq, params, cfg, path_index):
    _validate(eq, params, cfg)
    n, times, disc, wdisc = _grid(params, cfg)
    rng = np.random.default_rng([cfg.seed, path_index])
    draft = rng.standard_normal(n)
    unif = rng.random(n)
    draft *= params.sigma * math.sqrt(cfg.dt)
    draft += (params.mu - 0.5 * params.sigma**2) * cfg.dt
    growth_a = np.exp(params.alpha_profit * draft)
    growth = np.exp(draft, out=draft)
    events = np.zeros((_EVENT_CAP, 5))
    states = np.empty(n + 1)
    profit, cost1, cost2, nev = _run_path(
        *_scalars(eq, params, cfg),
        growth, growth_a, unif, disc, wdisc, events, states)
    return times, states, events[: min(nev, _EVENT_CAP)], profit, cost1, cost2


def simulate_path(eq, params, cfg, path_index=0):
    """Simulate one controlled path under the mixed equilibrium profile."""
    times, states, ev, _, _, _ = _simulate_one(eq, params, cfg, path_index)
    kinds = ("hit-q", "hazard")
    events = [
        (float(t), int(p), float(pre), float(post), kinds[int(kind)])
        for t, p, pre, post, kind in ev
    ]
    return SimulatedPath(times=times, states=states, events=events)


def path_payoffs(eq, params, cfg, path_index=0):
    """Discounted (payoff1, payoff2) of a single path, for cross-checks."""
    _, _, _, profit, cost1, cost2 = _simulate_one(eq, params, cfg, path_index)
    return profit - cost1, profit - cost2


def estimate_payoffs(eq, params, cfg):
    """Sample means and standard errors of both players' payoffs."""
    _validate(eq, params, cfg)
    if cfg.n_paths < 2:
        raise ConfigError("need n_paths >= 2 for a standard error")
    n, _, disc, wdisc = _grid(params, cfg)
    drift = (params.mu - 0.5 * params.sigma**2) * cfg.dt
    vol = params.sigma * math.sqrt(cfg.dt)
    scalars = _scalars(eq, params, cfg)
    pay = np.empty((cfg.n_paths, 2))
    done = 0
    while done < cfg.n_paths:
        rows = min(_BATCH_ROWS, cfg.n_paths - done)
        draft = np.empty((rows, n))
        unif = np.empty((rows, n))
        for j in range(rows):
            rng = np.random.default_rng([cfg.seed, done + j])
            rng.standard_normal(out=draft[j])
            rng.random(out=unif[j])
        draft *= vol
        draft += drift
        growth_a = np.exp(params.alpha_profit * draft)
        growth = np.exp(draft, out=draft)
        _run_batch(*scalars, growth, growth_a, unif, disc, wdisc,
                   pay[done : done + rows])
        done += rows
    mean1 = float(np.mean(pay[:, 0]))
    mean2 = float(np.mean(pay[:, 1]))
    se1 = float(np.std(pay[:, 0], ddof=1) / math.sqrt(cfg.n_paths))
    se2 = float(np.std(pay[:, 1], ddof=1) / math.sqrt(cfg.n_paths))
    return PayoffEstimate(mean1=mean1, mean2=mean2, se1=se1, se2=se2, n=cfg.n_paths)


def mc_vs_analytic(eq, params, cfg, x0_grid):
    """Z-scores of the Monte Carlo means against the closed-form values on a
    grid of start states. The report's ok flag clears when every |z| <= 4."""
    rows = []
    worst = 0.0
    for x0 in np.asarray(x0_grid, dtype=float):
        est = estimate_payoffs(eq, params, replace(cfg, x0=float(x0)))
        ref1 = float(value_U1(eq, params, float(x0)))
        ref2 = float(value_V(eq, params, 2, float(x0)))
        zs1 = (est.mean1 - ref1) / est.se1
        zs2 = (est.mean2 - ref2) / est.se2
        worst = max(worst, abs(zs1), abs(zs2))
        rows.append({
            "x0": float(x0),
            "mean1": est.mean1, "se1": est.se1, "analytic1": ref1, "z1": zs1,
            "mean2": est.mean2, "se2": est.se2, "analytic2": ref2, "z2": zs2,
        })
    return {"rows": rows, "max_abs_z": worst, "ok": worst <= 4.0}


def truncation_bound(eq, params, cfg):
    """Bound on the discounted payoff mass ignored beyond the horizon: the
    tail discount times the perpetual profit value from twice the largest
    boost target (the state rarely sits that high)."""
    return math.exp(-params.r * cfg.t_max) * float(
        resolvent(params, 2.0 * eq.z2)
    )


def write_path_csv(path, dest):
    """Write times and states as CSV columns (t, x)."""
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "x"])
        for t, x in zip(path.times, path.states):
            writer.writerow([f"{t:.12g}", f"{x:.12g}"])


def write_events_csv(path, dest):
    """Write the event list as CSV columns (t, player, pre, post, kind)."""
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "player", "pre", "post", "kind"])
        for t, player, pre, post, kind in path.events:
            writer.writerow([f"{t:.12g}", player, f"{pre:.12g}", f"{post:.12g}", kind])
