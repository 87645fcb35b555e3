"""Scaling-invariance (transformation method) solvers for boundary-layer similarity problems.

* :mod:`topfer.blasius` -- Töpfer's non-iterative method for the Blasius problem.
* :mod:`topfer.itm` -- the iterative transformation method for a general
  third-order problem on a semi-infinite interval.
* :mod:`topfer.falkner_skan` -- Falkner-Skan normal and reverse flow, beta sweeps
  and the search for beta_min.
"""

from .blasius import BlasiusSolution, SeriesExpansion, blasius_rhs, lambda_from_terminal, series_coefficients, series_eval, solve_toepfer
from .errors import (
    BadStartError,
    BlowUpError,
    BranchError,
    DomainError,
    DoubleBlowUpError,
    InvalidConfigError,
    InvalidProblemError,
    NoConvergenceError,
    StalledSecantError,
    TopferError,
)
from .falkner_skan import BetaMinResult, BranchPoint, FalknerSkanCase, Flow, find_beta_min, solve_case, sweep_beta
from .itm import ItmConfig, ItmResult, IterationRecord, ScalingProblem, secant_solve
from .ode import IntegrationStats, IvpProblem, StateVector, Trajectory, integrate_adaptive, rk4_fixed

__version__ = "0.1.0"
