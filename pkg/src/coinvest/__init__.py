"""Solver and simulator for two-player stochastic games of investment in a
common good driven by geometric Brownian motion.

The diffusion module holds the closed-form building blocks, single_game the
one-shot investment game, impulse the repeated-game equilibria and welfare
comparison, and simulate the Monte Carlo cross-check of the analytic values.
"""

from .diffusion import (
    AssumptionReport,
    CriticalPoints,
    FundamentalPair,
    ModelParams,
    check_assumptions,
    critical_points,
    ell,
    fundamental_pair,
    I_func,
    J_func,
    phi,
    profit,
    psi,
    resolvent,
    rho,
    scale_speed,
)
from .errors import (
    CoinvestError,
    ConditionFailed,
    ConfigError,
    DomainError,
    InternalError,
    NoRootError,
    NoSolutionError,
    NumericalError,
    ParameterError,
    SymmetricDegenerateError,
)
from .impulse import (
    C_func,
    ImpulsePolicy,
    MixedEquilibrium,
    PureEquilibrium,
    Z_map,
    c1_max,
    efficiency_compare,
    hazard_rate,
    pure_equilibrium,
    residuals,
    solve_mixed_tsspe,
    solve_single_impulse,
    value_U1,
    value_V,
)
from .simulate import (
    PayoffEstimate,
    SimConfig,
    SimulatedPath,
    default_config,
    estimate_payoffs,
    mc_vs_analytic,
    path_payoffs,
    simulate_path,
    truncation_bound,
    write_events_csv,
    write_path_csv,
)
from .single_game import (
    SingleGameTSSPE,
    StoppingSolution,
    asymmetry_diagnostic,
    mixed_mpe_rate,
    reward_g,
    stopping_threshold,
    tsspe_first_stage_value,
    value_single,
)

__version__ = "0.1.0"
