"""Closed-form building blocks of the uncontrolled state process.

The common good follows a geometric Brownian motion dX = mu X dt + sigma X dW
that drifts downward (mu < 0) and pays each player a profit flow
pi(x) = x**alpha. Everything the equilibrium construction needs has a closed
form here: the decreasing/increasing solutions phi, psi of the generator
equation, the resolvent of pi, the scale and speed densities, the auxiliary
functions I and J whose level/gap conditions pin down investment triggers and
targets, and the critical points z_star (myopic boost end-point), x_hat
(minimizer of I) and x_star (maximizer of the net flow rho).

An optional ``profit_scale`` on the profit-dependent quantities multiplies
pi, which is how the social planner (two profit streams, one cost) reuses the
single-agent machinery.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NoRootError, ParameterError
from .roots import find_root

SCALE_REF = 1.0  # reference point of the scale function; cancels in all results


@dataclass(frozen=True)
class ModelParams:
    """Diffusion and profit primitives.

    mu: drift rate, negative (the good deteriorates when nobody invests)
    sigma: volatility, positive
    r: discount rate, positive
    alpha_profit: exponent of the profit flow pi(x) = x**alpha_profit, in (0, 1)
    k: variable investment cost per unit of state, positive
    """

    mu: float
    sigma: float
    r: float
    alpha_profit: float
    k: float

    def __post_init__(self):
        if not self.mu < 0:
            raise ParameterError(f"mu must be negative, got {self.mu}")
        if not self.sigma > 0:
            raise ParameterError(f"sigma must be positive, got {self.sigma}")
        if not self.r > 0:
            raise ParameterError(f"r must be positive, got {self.r}")
        if not 0 < self.alpha_profit < 1:
            raise ParameterError(
                f"alpha_profit must lie in (0, 1), got {self.alpha_profit}"
            )
        if not self.k > 0:
            raise ParameterError(f"k must be positive, got {self.k}")
        if not self.r - self.growth_rate(self.alpha_profit) > 0:
            raise ParameterError(
                "r must exceed the growth rate of the profit flow; "
                f"r - delta = {self.r - self.growth_rate(self.alpha_profit)}"
            )

    def growth_rate(self, a):
        """Expected growth rate delta(a) of X**a: a*mu + sigma^2*a*(a-1)/2."""
        return a * self.mu + 0.5 * self.sigma**2 * a * (a - 1.0)


@dataclass(frozen=True)
class FundamentalPair:
    """Power indices of the two monotone solutions of the generator equation."""

    gamma_plus: float
    gamma_minus: float


@dataclass(frozen=True)
class CriticalPoints:
    """Landmarks of the investment geometry.

    z_star: unique maximizer of resolvent(z) - k*z, the myopic boost end-point
    x_hat: global minimizer of I
    x_star: maximizer of rho
    j_zstar: J(z_star), the upper bound for admissible upfront costs
    """

    z_star: float
    x_hat: float
    x_star: float
    j_zstar: float


@dataclass(frozen=True)
class AssumptionReport:
    """Structural checks behind the equilibrium construction, as flags.

    The located diagnostics (x_c1, x_c2 are the states where the drift of the
    stopping reward plus the profit flow changes sign) are reported for
    inspection; only the booleans participate in passed().
    """

    resolvent_finite: bool
    zstar_unique: bool
    rho_single_peaked: bool
    ell_negative_witness: bool
    x_c_found: bool
    c2_in_range: bool
    x_c1: float | None
    x_c2: float | None
    z_star: float
    x_hat: float
    x_star: float
    j_zstar: float

    def passed(self):
        return (
            self.resolvent_finite
            and self.zstar_unique
            and self.rho_single_peaked
            and self.ell_negative_witness
            and self.x_c_found
            and self.c2_in_range
        )


def _check_state(x):
    if np.any(np.asarray(x) <= 0.0):
        raise DomainError("state must be positive")


def fundamental_pair(params):
    """Roots gamma of (sigma^2/2) g(g-1) + mu g - r = 0, one of each sign."""
    b = 0.5 - params.mu / params.sigma**2
    root = np.sqrt(b * b + 2.0 * params.r / params.sigma**2)
    return FundamentalPair(gamma_plus=b + root, gamma_minus=b - root)


def phi(params, x):
    """Decreasing solution of the generator equation, x**gamma_minus."""
    _check_state(x)
    return x ** fundamental_pair(params).gamma_minus


def phi_prime(params, x):
    _check_state(x)
    gm = fundamental_pair(params).gamma_minus
    return gm * x ** (gm - 1.0)


def psi(params, x):
    """Increasing solution of the generator equation, x**gamma_plus."""
    _check_state(x)
    return x ** fundamental_pair(params).gamma_plus


def profit(params, x, profit_scale=1.0):
    """Profit flow pi(x) = x**alpha, optionally scaled."""
    _check_state(x)
    return profit_scale * x**params.alpha_profit


def resolvent(params, x, profit_scale=1.0):
    """Expected discounted profit from never investing: x**alpha / (r - delta)."""
    _check_state(x)
    a = params.alpha_profit
    return profit_scale * x**a / (params.r - params.growth_rate(a))


def resolvent_prime(params, x, profit_scale=1.0):
    """Derivative of the resolvent, alpha x**(alpha-1) / (r - delta)."""
    _check_state(x)
    a = params.alpha_profit
    return profit_scale * a * x ** (a - 1.0) / (params.r - params.growth_rate(a))


def scale_speed(params, x):
    """Scale density S'(x) and speed density m'(x), referenced at x0 = 1."""
    _check_state(x)
    expo = -2.0 * params.mu / params.sigma**2
    sp = (x / SCALE_REF) ** expo
    mp = 2.0 / (params.sigma**2 * x**2 * sp)
    return sp, mp


def rho(params, x):
    """Net flow from holding the myopic policy: pi(x) + k*(mu - r)*x."""
    _check_state(x)
    return x**params.alpha_profit + params.k * (params.mu - params.r) * x


def I_func(params, x, profit_scale=1.0):
    """Coefficient-scale function (resolvent'(x) - k) / phi'(x), in closed form.

    Negative on (0, z_star), zero at z_star, with a unique interior minimum
    at x_hat; its level sets match investment triggers to boost targets.
    """
    _check_state(x)
    a = params.alpha_profit
    gm = fundamental_pair(params).gamma_minus
    rnet = params.r - params.growth_rate(a)
    return (
        profit_scale * a * x ** (a - gm) / rnet - params.k * x ** (1.0 - gm)
    ) / gm


def I_prime(params, x, profit_scale=1.0):
    """Analytic derivative of I_func."""
    _check_state(x)
    a = params.alpha_profit
    gm = fundamental_pair(params).gamma_minus
    rnet = params.r - params.growth_rate(a)
    return (
        profit_scale * a * (a - gm) * x ** (a - gm - 1.0) / rnet
        - params.k * (1.0 - gm) * x**-gm
    ) / gm


def J_func(params, x, profit_scale=1.0):
    """Gap function resolvent(x) - k*x - I(x)*phi(x), in closed form.

    The spread J(z) - J(theta) equals the upfront cost that makes a
    trigger/target pair (theta, z) with I(theta) = I(z) optimal.
    """
    _check_state(x)
    a = params.alpha_profit
    gm = fundamental_pair(params).gamma_minus
    rnet = params.r - params.growth_rate(a)
    return (1.0 - a / gm) * profit_scale * x**a / rnet - params.k * x * (
        1.0 - 1.0 / gm
    )


def J_prime(params, x, profit_scale=1.0):
    """Analytic derivative of J_func; equals -I_prime(x) * phi(x)."""
    return -I_prime(params, x, profit_scale) * phi(params, x)


def ell(params, x, profit_scale=1.0):
    """Integral diagnostic L(x), recovered from I'(x) instead of quadrature.

    L(x) = I'(x) * sigma(x)^2 * phi'(x)^2 / (2 S'(x)); it shares I's sign
    structure (negative below x_hat, positive above), which is what the
    construction actually uses.
    """
    _check_state(x)
    sp, _ = scale_speed(params, x)
    sig2 = params.sigma**2 * x**2
    return I_prime(params, x, profit_scale) * sig2 * phi_prime(params, x) ** 2 / (2.0 * sp)


def critical_points(params, profit_scale=1.0):
    """Locate z_star, x_hat and x_star, plus the cost bound J(z_star).

    z_star and x_star come from closed-form first-order conditions; x_hat is
    the bracketed root of I' on (1e-6 z_star, z_star). Raises NumericalError
    (reporting the scanned interval) if the bracket fails.
    """
    a = params.alpha_profit
    rnet = params.r - params.growth_rate(a)
    z_star = (profit_scale * a / (params.k * rnet)) ** (1.0 / (1.0 - a))
    x_star = (profit_scale * a / (params.k * (params.r - params.mu))) ** (
        1.0 / (1.0 - a)
    )
    x_hat = find_root(
        lambda x: I_prime(params, x, profit_scale), 1e-6 * z_star, z_star
    )
    return CriticalPoints(
        z_star=z_star,
        x_hat=x_hat,
        x_star=x_star,
        j_zstar=float(J_func(params, z_star, profit_scale)),
    )


def _sign_changes(values):
    signs = np.sign(values)
    signs = signs[signs != 0]
    return int(np.count_nonzero(signs[1:] != signs[:-1]))


def check_assumptions(params, c1, c2):
    """Verify the structural assumptions the solvers rely on, as a report.

    Failures are reported as flags, never raised, except for the
    precondition c1 >= c2 > 0 on the upfront costs.
    """
    if not (c1 >= c2 > 0):
        raise ParameterError(f"costs must satisfy c1 >= c2 > 0, got ({c1}, {c2})")
    cps = critical_points(params)
    k = params.k

    grid = np.geomspace(1e-6 * cps.z_star, 10.0 * cps.z_star, 400)
    zstar_unique = _sign_changes(resolvent_prime(params, grid) - k) == 1

    rho_grid = np.geomspace(1e-6 * cps.x_star, 10.0 * cps.x_star, 400)
    a = params.alpha_profit
    rho_prime = a * rho_grid ** (a - 1.0) + k * (params.mu - params.r)
    rho_single_peaked = _sign_changes(rho_prime) == 1

    ell_grid = np.geomspace(1e-3 * cps.x_hat, cps.x_hat * (1.0 - 1e-6), 50)
    ell_negative_witness = bool(np.all(ell(params, ell_grid) < 0.0))

    # state where the drift of the stopping reward plus the profit flow
    # changes sign; the mixed-strategy rate is positive below it
    rz = resolvent(params, cps.z_star)

    def reward_drift_plus_profit(c):
        def f(x):
            g = rz - k * (cps.z_star - x) - c
            return params.mu * x * k - params.r * g + x**a

        return f

    def locate(c):
        try:
            return find_root(
                reward_drift_plus_profit(c),
                1e-6 * cps.z_star,
                cps.z_star * (1.0 - 1e-9),
            )
        except NoRootError:
            return None

    x_c1 = locate(c1)
    x_c2 = locate(c2)

    return AssumptionReport(
        resolvent_finite=params.r - params.growth_rate(a) > 0,
        zstar_unique=zstar_unique,
        rho_single_peaked=rho_single_peaked,
        ell_negative_witness=ell_negative_witness,
        x_c_found=x_c1 is not None and x_c2 is not None,
        c2_in_range=0.0 < c2 < cps.j_zstar,
        x_c1=x_c1,
        x_c2=x_c2,
        z_star=cps.z_star,
        x_hat=cps.x_hat,
        x_star=cps.x_star,
        j_zstar=cps.j_zstar,
    )
