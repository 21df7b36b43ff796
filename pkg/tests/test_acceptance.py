"""End-to-end acceptance checks for the benchmark economy.

Every test times the work it certifies, prints one PASS/FAIL line even
under default capture, and only then asserts, so a red run still reports
every criterion's outcome.
"""

import time

import numpy as np
import pytest

from coinvest.diffusion import I_func, ModelParams, critical_points
from coinvest.errors import ConditionFailed
from coinvest.impulse import (
    c1_max,
    efficiency_compare,
    pure_equilibrium,
    residuals,
    solve_mixed_tsspe,
    solve_single_impulse,
    value_U1,
    value_V,
)
from coinvest.simulate import SimConfig, estimate_payoffs, simulate_path
from coinvest.single_game import asymmetry_diagnostic, stopping_threshold

P = ModelParams(mu=-0.5, sigma=0.25, r=1.0, alpha_profit=0.5, k=1.0)
C1, C2 = 0.0165, 0.015


@pytest.fixture(scope="module", autouse=True)
def warm_kernels():
    """Compile (or load from cache) the simulation kernels so the timed
    budgets below measure the numerics, not the JIT."""
    eq = solve_mixed_tsspe(P, C1, C2)
    cfg = SimConfig(dt=1e-3, t_max=20.0, n_paths=2, seed=0, x0=0.1)
    simulate_path(eq, P, cfg, path_index=0)
    estimate_payoffs(eq, P, cfg)


def report(capsys, num, ok, detail):
    with capsys.disabled():
        print(f"ACCEPTANCE {num} {'PASS' if ok else 'FAIL'}: {detail}")


def test_criterion_1_single_policy_regression(capsys):
    start = time.perf_counter()
    pol = solve_single_impulse(P, C2)
    elapsed = time.perf_counter() - start
    ok = (
        abs(pol.theta - 0.0439) <= 1e-3
        and abs(pol.z - 0.1480) <= 1e-3
        and elapsed < 1.0
    )
    report(
        capsys, 1, ok,
        f"(theta, z) = ({pol.theta:.6f}, {pol.z:.6f}) in {elapsed:.3f} s",
    )
    assert abs(pol.theta - 0.0439) <= 1e-3
    assert abs(pol.z - 0.1480) <= 1e-3
    assert elapsed < 1.0


def test_criterion_2_existence_boundary(capsys):
    start = time.perf_counter()
    bound = c1_max(P, C2)
    solve_mixed_tsspe(P, C1, C2)
    failed_condition = None
    try:
        solve_mixed_tsspe(P, 0.018, C2)
    except ConditionFailed as err:
        failed_condition = err.condition
    elapsed = time.perf_counter() - start
    ok = (
        abs(bound - 0.01729) <= 1e-4
        and failed_condition == "OptimalU"
        and elapsed < 5.0
    )
    report(
        capsys, 2, ok,
        f"c1_max = {bound:.6f}, c1=0.018 fails {failed_condition} "
        f"in {elapsed:.3f} s",
    )
    assert abs(bound - 0.01729) <= 1e-4
    assert failed_condition == "OptimalU"
    assert elapsed < 5.0


def test_criterion_3_pure_equilibrium_condition(capsys):
    start = time.perf_counter()
    pure = pure_equilibrium(P, C1, C2)
    bound = -I_func(P, critical_points(P).x_hat)
    elapsed = time.perf_counter() - start
    ok = (
        abs(pure.beta - 7.60e-4) <= 0.02 * 7.60e-4
        and abs(bound - 2.95e-4) <= 0.02 * 2.95e-4
        and pure.valid
        and elapsed < 1.0
    )
    report(
        capsys, 3, ok,
        f"beta = {pure.beta:.3e}, -I(x_hat) = {bound:.3e}, valid={pure.valid} "
        f"in {elapsed:.3f} s",
    )
    assert pure.beta == pytest.approx(7.60e-4, rel=0.02)
    assert float(bound) == pytest.approx(2.95e-4, rel=0.02)
    assert pure.valid
    assert elapsed < 1.0


def test_criterion_4_welfare_ordering(capsys):
    start = time.perf_counter()
    eq = solve_mixed_tsspe(P, C1, C2)
    grid = np.linspace(eq.theta_star / 2.0, 4.0 * eq.z2, 50)
    rows = efficiency_compare(P, C1, C2, grid)
    holds = all(r["V_M"] < r["V_P"] <= r["V_S"] + 1e-12 for r in rows)
    elapsed = time.perf_counter() - start
    ok = holds and len(rows) == 50 and elapsed < 1.0
    report(
        capsys, 4, ok,
        f"V_M < V_P <= V_S on {len(rows)} points in {elapsed:.3f} s",
    )
    assert holds
    assert len(rows) == 50
    assert elapsed < 1.0


def test_criterion_5_residuals_on_random_pairs(capsys):
    start = time.perf_counter()
    rng = np.random.default_rng(7)
    worst = 0.0
    found = 0
    while found < 10:
        c2 = rng.uniform(0.008, 0.03)
        c1 = c2 * rng.uniform(1.01, 1.12)
        try:
            eq = solve_mixed_tsspe(P, c1, c2)
        except Exception:
            continue
        worst = max(worst, max(residuals(eq, P).values()))
        found += 1
    elapsed = time.perf_counter() - start
    ok = worst < 1e-9 and elapsed < 5.0
    report(
        capsys, 5, ok,
        f"worst residual over 10 cost pairs = {worst:.2e} in {elapsed:.3f} s",
    )
    assert worst < 1e-9
    assert elapsed < 5.0


def test_criterion_6_smooth_pasting_and_qvi(capsys):
    start = time.perf_counter()
    eq = solve_mixed_tsspe(P, C1, C2)
    t = eq.theta_star
    # one-sided slopes from points strictly on each branch, so the quotient
    # is not polluted by the (separately certified) value-matching residual
    h = 1e-8 * t
    slope_below = float(value_V(eq, P, 2, t - h) - value_V(eq, P, 2, t - 2 * h)) / h
    slope_above = float(value_V(eq, P, 2, t + 2 * h) - value_V(eq, P, 2, t + h)) / h
    qvi = True
    for x in np.linspace(t / 2.0, 0.8, 50):
        zs = np.linspace(x, x + 3.0 * eq.z2, 200)
        best = float(np.max(value_V(eq, P, 2, zs) - P.k * (zs - x) - C2))
        if float(value_V(eq, P, 2, x)) < best - 1e-10:
            qvi = False
    elapsed = time.perf_counter() - start
    pasting = abs(slope_below - P.k) <= 1e-6 * P.k and abs(slope_above - P.k) <= 1e-6 * P.k
    ok = pasting and qvi and elapsed < 2.0
    report(
        capsys, 6, ok,
        f"V2'(theta-) = {slope_below:.8f}, V2'(theta+) = {slope_above:.8f}, "
        f"QVI holds: {qvi} in {elapsed:.3f} s",
    )
    assert abs(slope_below - P.k) <= 1e-6 * P.k
    assert abs(slope_above - P.k) <= 1e-6 * P.k
    assert qvi
    assert elapsed < 2.0


def test_criterion_7_monte_carlo_oracle(capsys):
    eq = solve_mixed_tsspe(P, C1, C2)
    ref1 = float(value_U1(eq, P, 0.1))
    ref2 = float(value_V(eq, P, 2, 0.1))
    attempts = []
    ok = False
    # one fresh-seed retry is allowed for the ~1% false-failure rate
    for seed in (42, 43):
        cfg = SimConfig(dt=1e-3, t_max=20.0, n_paths=100_000, seed=seed, x0=0.1)
        start = time.perf_counter()
        est = estimate_payoffs(eq, P, cfg)
        elapsed = time.perf_counter() - start
        z1 = (est.mean1 - ref1) / est.se1
        z2 = (est.mean2 - ref2) / est.se2
        attempts.append((seed, z1, z2, elapsed))
        if abs(z1) <= 3.0 and abs(z2) <= 3.0 and elapsed < 120.0:
            ok = True
            break
    seed, z1, z2, elapsed = attempts[-1]
    report(
        capsys, 7, ok,
        f"z-scores = ({z1:.2f}, {z2:.2f}) with seed {seed}, "
        f"{len(attempts)} attempt(s), last took {elapsed:.1f} s",
    )
    assert abs(z1) <= 3.0
    assert abs(z2) <= 3.0
    assert all(a[3] < 120.0 for a in attempts)


def test_criterion_8_comparative_statics(capsys):
    start = time.perf_counter()
    m = c1_max(P, C2)
    qs = []
    for f in np.linspace(0.05, 0.95, 10):
        eq = solve_mixed_tsspe(P, C2 + (m - C2) * f, C2)
        qs.append(eq.q)
    q_increasing = all(a < b for a, b in zip(qs, qs[1:]))
    thetas = [stopping_threshold(P, c).theta for c in np.linspace(0.005, 0.05, 5)]
    theta_decreasing = all(a > b for a, b in zip(thetas, thetas[1:]))
    elapsed = time.perf_counter() - start
    ok = q_increasing and theta_decreasing and elapsed < 5.0
    report(
        capsys, 8, ok,
        f"q increasing in c1: {q_increasing}, theta decreasing in c: "
        f"{theta_decreasing} in {elapsed:.3f} s",
    )
    assert q_increasing
    assert theta_decreasing
    assert elapsed < 5.0


def test_criterion_9_asymmetry_diagnostic(capsys):
    start = time.perf_counter()
    pairs = [(0.0165, 0.015), (0.02, 0.015), (0.03, 0.02), (0.015, 0.015), (0.05, 0.05)]
    holds = True
    for c1, c2 in pairs:
        gap = asymmetry_diagnostic(P, c1, c2)["gap"]
        if c1 > c2 and not gap > 0.0:
            holds = False
        if c1 == c2 and gap != 0.0:
            holds = False
    elapsed = time.perf_counter() - start
    ok = holds and elapsed < 2.0
    report(
        capsys, 9, ok,
        f"gap sign matches cost asymmetry on {len(pairs)} pairs in {elapsed:.3f} s",
    )
    assert holds
    assert elapsed < 2.0
