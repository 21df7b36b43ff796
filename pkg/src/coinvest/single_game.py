"""One-shot investment game: a single boost up to the myopic end-point.

Covers the single-player optimal stopping rule, the symmetric war-of-attrition
mixing rate, the first-stage payoffs of the two-stage equilibrium with an
exogenous concession probability, and the threshold-gap diagnostic showing why
asymmetric costs rule out a common mixed region.
"""

from dataclasses import dataclass

import numpy as np

from .diffusion import (
    _check_state,
    critical_points,
    phi,
    phi_prime,
    resolvent,
    resolvent_prime,
)
from .errors import DomainError, NoRootError, NoSolutionError, ParameterError
from .roots import find_root


@dataclass(frozen=True)
class StoppingSolution:
    """Single-player stopping rule: invest when the state falls to theta.

    alpha_coef is the maximized stopping coefficient, i.e. the value of
    (reward - resolvent) / phi at theta.
    """

    theta: float
    z_star: float
    alpha_coef: float
    cost: float


@dataclass(frozen=True)
class SingleGameTSSPE:
    """Two-stage equilibrium of the one-shot game: player 2 concedes with
    probability q2 when the state first reaches theta, player 1 never does."""

    theta: float
    q2: float
    cost: float

    def __post_init__(self):
        if not 0.0 < self.q2 <= 1.0:
            raise ParameterError(f"q2 must lie in (0, 1], got {self.q2}")


def _check_cost(c):
    if not c > 0:
        raise ParameterError(f"cost must be positive, got {c}")


def reward_g(params, c, x):
    """Reward from investing now: boost to the myopic end-point, pay k per
    unit plus the upfront cost c. Linear with slope k below z_star."""
    _check_state(x)
    _check_cost(c)
    cps = critical_points(params)
    rz = resolvent(params, cps.z_star)
    x = np.asarray(x, dtype=float)
    out = np.where(
        x < cps.z_star,
        rz - params.k * (cps.z_star - x) - c,
        resolvent(params, x) - c,
    )
    return out[()]


def stopping_threshold(params, c):
    """Optimal investment trigger: the interior maximizer of the stopping
    coefficient (reward_g - resolvent) / phi on (0, z_star).

    Located as the bracketed root of the coefficient's derivative. Raises
    NoSolutionError when no interior maximum exists (cost too large).
    """
    _check_cost(c)
    cps = critical_points(params)
    rz = resolvent(params, cps.z_star)
    k = params.k

    def slope_num(x):
        # numerator of the derivative of (g - R)/phi on the linear branch
        g = rz - k * (cps.z_star - x) - c
        return (k - resolvent_prime(params, x)) * phi(params, x) - (
            g - resolvent(params, x)
        ) * phi_prime(params, x)

    try:
        theta = find_root(slope_num, 1e-6 * cps.z_star, cps.z_star * (1.0 - 1e-9))
    except NoRootError as exc:
        raise NoSolutionError(
            f"stopping coefficient has no interior maximum for cost {c}"
        ) from exc
    alpha_coef = (reward_g(params, c, theta) - resolvent(params, theta)) / phi(
        params, theta
    )
    return StoppingSolution(
        theta=float(theta),
        z_star=float(cps.z_star),
        alpha_coef=float(alpha_coef),
        cost=c,
    )


def value_single(params, c, x):
    """Value of the optimal single-player stopping rule; equals the
    investment reward at and below the trigger."""
    sol = stopping_threshold(params, c)
    x = np.asarray(x, dtype=float)
    out = np.where(
        x > sol.theta,
        sol.alpha_coef * phi(params, x) + resolvent(params, x),
        reward_g(params, c, x),
    )
    return out[()]


def mixed_mpe_rate(params, c, x):
    """Symmetric mixed-strategy investment rate, positive only below the
    common trigger theta.

    The drift of the reward is evaluated on its linear branch in closed form
    (mu*x*k - r*g), avoiding finite differences across the kink.
    """
    sol = stopping_threshold(params, c)
    rz = resolvent(params, sol.z_star)
    k = params.k
    a = params.alpha_profit
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    _check_state(xs)
    lam = np.zeros_like(xs)
    mask = xs < sol.theta
    if np.any(mask):
        xm = xs[mask]
        g = rz - k * (sol.z_star - xm) - c
        num = params.r * g - params.mu * xm * k - xm**a
        den = rz - g
        lam[mask] = num / den
    return lam.reshape(np.shape(x))[()]


def tsspe_first_stage_value(params, c, q2, x):
    """First-stage payoffs (player 1, player 2) when player 2 invests with
    probability q2 at the moment the state first reaches the trigger.

    Player 2's payoff is its single-player stopping value for any q2; player 1
    rides the chance of a free boost, so its payoff grows with q2.
    """
    if not 0.0 <= q2 <= 1.0:
        raise ParameterError(f"q2 must lie in [0, 1], got {q2}")
    sol = stopping_threshold(params, c)
    _check_state(x)
    if np.any(np.asarray(x) <= sol.theta):
        raise DomainError(
            f"first-stage values are defined above the trigger {sol.theta:g}"
        )
    rz = resolvent(params, sol.z_star)
    g_theta = reward_g(params, c, sol.theta)
    f_theta = (1.0 - q2) * g_theta + q2 * rz
    x = np.asarray(x, dtype=float)
    v1 = resolvent(params, x) + (f_theta - resolvent(params, sol.theta)) * phi(
        params, x
    ) / phi(params, sol.theta)
    v2 = sol.alpha_coef * phi(params, x) + resolvent(params, x)
    return v1[()], v2[()]


def asymmetry_diagnostic(params, c1, c2):
    """Both players' triggers and their gap theta2 - theta1.

    A strictly positive gap (whenever c1 > c2) is what rules out an
    equilibrium with a common mixed region in the one-shot game.
    """
    if not (c1 >= c2 > 0):
        raise ParameterError(f"costs must satisfy c1 >= c2 > 0, got ({c1}, {c2})")
    theta1 = stopping_threshold(params, c1).theta
    theta2 = stopping_threshold(params, c2).theta
    return {"theta1": theta1, "theta2": theta2, "gap": theta2 - theta1}
