"""Repeated-investment equilibria of the two-player impulse game.

The single-agent impulse policy (trigger theta, boost target z) doubles as the
social planner's solution when the profit flow is scaled by two. On top of it
sit the mixed-strategy two-stage equilibrium, where the low-cost player
concedes with probability q at every fresh hit of the common trigger and both
players mix at hazard rates below it, and the pure equilibrium in which only
the low-cost player ever invests.
"""

from dataclasses import dataclass

import numpy as np

from .diffusion import (
    I_func,
    J_func,
    _check_state,
    critical_points,
    phi,
    resolvent,
)
from .errors import (
    ConditionFailed,
    DomainError,
    InternalError,
    NoRootError,
    NoSolutionError,
    ParameterError,
    SymmetricDegenerateError,
)
from .roots import bisect


@dataclass(frozen=True)
class ImpulsePolicy:
    """Single-agent impulse rule: boost from theta up to z, at cost
    cost + k*(z - theta) per round. coef is the payoff coefficient on phi."""

    theta: float
    z: float
    coef: float
    cost: float
    profit_scale: float = 1.0

    def value(self, params, x):
        """Discounted payoff of following the policy from state x."""
        _check_state(x)
        x = np.asarray(x, dtype=float)
        v_z = self.coef * phi(params, self.z) + resolvent(
            params, self.z, self.profit_scale
        )
        out = np.where(
            x >= self.theta,
            self.coef * phi(params, x) + resolvent(params, x, self.profit_scale),
            v_z - params.k * (self.z - x) - self.cost,
        )
        return out[()]


@dataclass(frozen=True)
class MixedEquilibrium:
    """Mixed two-stage equilibrium: common trigger theta_star, boost targets
    z1 (player 1) and z2 (player 2), concession probability q for player 2 at
    each fresh hit of the trigger, and payoff coefficients w (second stage,
    both players) and u1 (player 1's first stage)."""

    theta_star: float
    z1: float
    z2: float
    q: float
    w: float
    u1: float
    c1: float
    c2: float


@dataclass(frozen=True)
class PureEquilibrium:
    """Pure equilibrium where only player 2 invests; player 1 free-rides with
    payoff coefficient beta. Valid when beta exceeds the best coefficient
    player 1 could secure by investing itself."""

    beta: float
    policy2: ImpulsePolicy
    valid: bool

    def value1(self, params, x):
        """Player 1's payoff: beta*phi + resolvent above the trigger,
        constant below it (player 2 invests immediately there)."""
        _check_state(x)
        x = np.asarray(x, dtype=float)
        at_z = self.beta * phi(params, self.policy2.z) + resolvent(
            params, self.policy2.z
        )
        out = np.where(
            x >= self.policy2.theta,
            self.beta * phi(params, x) + resolvent(params, x),
            at_z,
        )
        return out[()]


def _z_scalar(params, x, cps, profit_scale):
    ix = I_func(params, x, profit_scale)
    if I_func(params, cps.x_hat, profit_scale) - ix >= 0.0:
        # x sits within rounding distance of x_hat, where I is flat; the
        # paired target collapses onto x_hat too
        return cps.x_hat
    # the upper endpoint is nudged past z_star so that I is positive there
    # by a real margin instead of a rounding-level residual
    return bisect(
        lambda z: I_func(params, z, profit_scale) - ix,
        cps.x_hat,
        cps.z_star * (1.0 + 1e-9),
    )


def Z_map(params, x, profit_scale=1.0):
    """Boost target paired with trigger x: the point above x_hat where I
    takes the same value as at x. Defined for x strictly below x_hat."""
    _check_state(x)
    cps = critical_points(params, profit_scale)
    if np.any(np.asarray(x) >= cps.x_hat):
        raise DomainError(f"argument must lie below x_hat = {cps.x_hat:g}")
    if np.ndim(x) == 0:
        return _z_scalar(params, float(x), cps, profit_scale)
    return np.array([_z_scalar(params, float(xi), cps, profit_scale) for xi in x])


def C_func(params, x, profit_scale=1.0):
    """Cost level that makes trigger x optimal: J(Z(x)) - J(x), positive and
    decreasing to zero as x approaches x_hat."""
    z = Z_map(params, x, profit_scale)
    return J_func(params, z, profit_scale) - J_func(params, x, profit_scale)


def solve_single_impulse(params, c, profit_scale=1.0):
    """Optimal impulse policy of a lone agent paying upfront cost c.

    profit_scale=2 gives the social planner (both profit streams, one cost).
    The trigger solves C(theta) = c by bisection on (0, x_hat); the target and
    coefficient follow from the level condition on I.
    """
    cps = critical_points(params, profit_scale)
    if not 0.0 < c < cps.j_zstar:
        raise NoSolutionError(
            f"upfront cost must lie in (0, {cps.j_zstar:g}), got {c}"
        )
    lo = 1e-12 * cps.x_hat
    hi = cps.x_hat * (1.0 - 1e-12)
    if C_func(params, lo, profit_scale) <= c:
        raise NoSolutionError(
            f"cost {c} is numerically indistinguishable from the bound "
            f"{cps.j_zstar:g}; no trigger above {lo:g}"
        )
    theta = bisect(lambda t: C_func(params, t, profit_scale) - c, lo, hi)
    z = Z_map(params, theta, profit_scale)
    return ImpulsePolicy(
        theta=float(theta),
        z=float(z),
        coef=float(-I_func(params, theta, profit_scale)),
        cost=c,
        profit_scale=profit_scale,
    )


def solve_mixed_tsspe(params, c1, c2):
    """Mixed two-stage equilibrium for upfront costs c1 > c2.

    Player 2's trigger/target solve the single-agent system at c2; player 1's
    target z1 solves the gap condition J(z1) - J(theta_star) = c1 on
    (x_hat, z2); q restores player 1's indifference at the trigger. Raises a
    structured error naming whichever condition fails.
    """
    if c1 <= c2:
        raise SymmetricDegenerateError(
            f"requires strictly ordered costs c1 > c2, got ({c1}, {c2})"
        )
    pol2 = solve_single_impulse(params, c2)
    theta, z2 = pol2.theta, pol2.z
    cps = critical_points(params)
    j_theta = J_func(params, theta)

    lo = cps.x_hat * (1.0 + 1e-9)
    if J_func(params, lo) - j_theta - c1 <= 0.0:
        raise NoRootError(
            f"no boost target for player 1: c1 = {c1} exceeds "
            f"J(x_hat) - J(theta_star) = {J_func(params, cps.x_hat) - j_theta:g}"
        )
    z1 = bisect(lambda z: J_func(params, z) - j_theta - c1, lo, z2)

    w = float(-I_func(params, theta))
    u1 = float(-I_func(params, z1))

    # player 1 must weakly prefer waiting at the trigger: the payoff from
    # investing there on first-stage terms has to stay below the gap bound
    lhs = u1 * phi(params, theta) + resolvent(params, theta) - params.k * theta
    rhs = J_func(params, z1)
    if not lhs < rhs:
        raise ConditionFailed(
            "OptimalU",
            f"investing at the trigger pays {lhs:g}, waiting bound is {rhs:g}",
        )

    num = phi(params, theta) * (I_func(params, theta) - I_func(params, z1))
    den = (
        u1 * phi(params, z2)
        + resolvent(params, z2)
        - (w * phi(params, theta) + resolvent(params, theta))
    )
    q = float(num / den)
    if not 0.0 < q < 1.0:
        raise ConditionFailed("q-range", f"concession probability {q:g} not in (0, 1)")

    if not theta < cps.x_hat < z1 < z2:
        raise ConditionFailed(
            "ordering",
            f"expected theta_star < x_hat < z1 < z2, got "
            f"({theta:g}, {cps.x_hat:g}, {z1:g}, {z2:g})",
        )

    return MixedEquilibrium(
        theta_star=theta, z1=float(z1), z2=z2, q=q, w=w, u1=u1, c1=c1, c2=c2
    )


def residuals(eq, params):
    """Absolute residuals of the defining equations of a mixed equilibrium."""
    i_match = abs(I_func(params, eq.theta_star) - I_func(params, eq.z2))
    j_gap_c2 = abs(J_func(params, eq.z2) - J_func(params, eq.theta_star) - eq.c2)
    j_gap_c1 = abs(J_func(params, eq.z1) - J_func(params, eq.theta_star) - eq.c1)
    u1_theta = value_U1(eq, params, eq.theta_star)
    u1_z2 = value_U1(eq, params, eq.z2)
    v1_theta = value_V(eq, params, 1, eq.theta_star)
    u1_boundary = abs(u1_theta - eq.q * u1_z2 - (1.0 - eq.q) * v1_theta)
    return {
        "i_match": float(i_match),
        "j_gap_c2": float(j_gap_c2),
        "j_gap_c1": float(j_gap_c1),
        "u1_boundary": float(u1_boundary),
    }


def c1_max(params, c2):
    """Largest c1 (within 1e-6) for which the mixed equilibrium exists,
    found by bisection on solver validity over (c2, J(x_hat) - J(theta_star))."""
    pol2 = solve_single_impulse(params, c2)
    cps = critical_points(params)
    hi = float(J_func(params, cps.x_hat) - J_func(params, pol2.theta))

    def valid(c1):
        try:
            solve_mixed_tsspe(params, c1, c2)
        except (ConditionFailed, NoRootError):
            return False
        return True

    lo = c2 * (1.0 + 1e-9)
    if not valid(lo):
        raise NoSolutionError(f"no valid c1 exists above c2 = {c2}")
    while hi - lo > 1e-6:
        mid = 0.5 * (lo + hi)
        if valid(mid):
            lo = mid
        else:
            hi = mid
    return lo


def hazard_rate(eq, params, investor, x):
    """Stage-2 mixing rate of the given investor, positive only strictly
    below the common trigger.

    The rate keeps the opponent indifferent, so it is built from the
    opponent's reward line; its drift is evaluated in closed form.
    """
    if investor not in (1, 2):
        raise ParameterError(f"investor must be 1 or 2, got {investor}")
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    _check_state(xs)
    k = params.k
    if investor == 1:
        # opponent is player 2: reward line from boosting to z2 at cost c2
        f_own = value_V(eq, params, 2, eq.z2)
        f_at_target = value_V(eq, params, 2, eq.z1)
        const = f_own - k * eq.z2 - eq.c2
    else:
        f_own = value_U1(eq, params, eq.z1)
        f_at_target = value_U1(eq, params, eq.z2)
        const = f_own - k * eq.z1 - eq.c1
    lam = np.zeros_like(xs)
    mask = xs < eq.theta_star
    if np.any(mask):
        xm = xs[mask]
        g = const + k * xm
        num = params.r * g - params.mu * xm * k - xm**params.alpha_profit
        den = f_at_target - g
        if np.any(den <= 0.0):
            raise InternalError(
                "nonpositive hazard denominator; equilibrium record is inconsistent"
            )
        lam[mask] = num / den
    return lam.reshape(np.shape(x))[()]


def value_V(eq, params, player, x):
    """Second-stage payoff of the given player; below the trigger it equals
    that player's own reward line."""
    if player not in (1, 2):
        raise ParameterError(f"player must be 1 or 2, got {player}")
    _check_state(x)
    x = np.asarray(x, dtype=float)
    above = eq.w * phi(params, x) + resolvent(params, x)
    if player == 1:
        f_own = float(eq.u1 * phi(params, eq.z1) + resolvent(params, eq.z1))
        below = f_own - params.k * (eq.z1 - x) - eq.c1
    else:
        f_own = float(eq.w * phi(params, eq.z2) + resolvent(params, eq.z2))
        below = f_own - params.k * (eq.z2 - x) - eq.c2
    out = np.where(x >= eq.theta_star, above, below)
    return out[()]


def value_U1(eq, params, x):
    """Player 1's first-stage payoff: a larger coefficient than in the second
    stage, since player 2 may concede for free at the next hit."""
    _check_state(x)
    x = np.asarray(x, dtype=float)
    above = eq.u1 * phi(params, x) + resolvent(params, x)
    out = np.where(x >= eq.theta_star, above, value_V(eq, params, 1, x))
    return out[()]


def pure_equilibrium(params, c1, c2):
    """Pure equilibrium in which only player 2 invests, following its
    single-agent policy; player 1 free-rides.

    Validity is a flag: the free-riding coefficient beta must beat the best
    coefficient -I(x_hat) player 1 could reach by investing."""
    if not c1 > 0:
        raise ParameterError(f"c1 must be positive, got {c1}")
    pol2 = solve_single_impulse(params, c2)
    cps = critical_points(params)
    beta = float(
        (resolvent(params, pol2.z) - resolvent(params, pol2.theta))
        / (phi(params, pol2.theta) - phi(params, pol2.z))
    )
    valid = bool(beta > -I_func(params, cps.x_hat))
    return PureEquilibrium(beta=beta, policy2=pol2, valid=valid)


def efficiency_compare(params, c1, c2, grid):
    """Total payoffs across the three arrangements on a state grid: mixed
    equilibrium (second stage), pure equilibrium, and the social planner
    (doubled profit flow, cost c2). Returns one row per grid point."""
    eq = solve_mixed_tsspe(params, c1, c2)
    pure = pure_equilibrium(params, c1, c2)
    planner = solve_single_impulse(params, c2, profit_scale=2.0)
    rows = []
    for x in np.asarray(grid, dtype=float):
        v_m = value_V(eq, params, 1, x) + value_V(eq, params, 2, x)
        v_p = pure.value1(params, x) + pure.policy2.value(params, x)
        v_s = planner.value(params, x)
        rows.append(
            {"x": float(x), "V_M": float(v_m), "V_P": float(v_p), "V_S": float(v_s)}
        )
    return rows
