"""Iterative transformation method for third-order problems on a semi-infinite domain.

The target problem is

    f''' = phi(eta, f, f', f''),   f(0) = a,  f'(0) = b,  f'(inf) = c.

A numerical parameter ``h`` is embedded so that the modified problem is
invariant under the scaling group

    f* = lam * f,   eta* = lam**delta * eta,   h* = lam**sigma * h.

For each trial ``h*`` one initial value problem is integrated with
``f*''(0) = d`` fixed, the group parameter ``lam`` is read from the terminal
velocity, and the transformation function ``Gamma(h*) = lam**-sigma * h* - 1``
is driven to zero with the secant method. The root maps back to ``h = 1``,
i.e. to the original problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import (
    BranchError,
    DomainError,
    DoubleBlowUpError,
    InvalidConfigError,
    InvalidProblemError,
    NoConvergenceError,
    StalledSecantError,
)
from .ode import IvpProblem, StateVector, Trajectory, integrate_adaptive

Phi = Callable[[float, float, float, float], float]


@dataclass(frozen=True)
class ScalingProblem:
    phi: Phi
    a: float
    b: float
    c: float
    delta: float
    sigma: float
    d: float

    def __post_init__(self):
        if self.c == 0:
            raise InvalidProblemError("asymptotic velocity c must be nonzero")
        if self.delta == 1:
            raise InvalidProblemError("group exponent delta must differ from 1")
        if self.sigma == 0:
            raise InvalidProblemError("group exponent sigma must be nonzero")
        if self.d == 0:
            raise InvalidProblemError("starred second derivative d must be nonzero")


@dataclass(frozen=True)
class ItmConfig:
    h0: float
    h1: float
    eta_inf: float = 20.0
    tol: float = 1e-6
    tol_r: float = 1e-6
    tol_a: float = 1e-6
    max_iter: int = 50
    rtol: float = 1e-6
    atol: float = 1e-6
    # Secant iterates above this bound abort the solve as non-convergent.
    h_max: float = math.inf

    def __post_init__(self):
        if not (self.h0 > 0 and self.h1 > 0) or self.h0 == self.h1:
            raise InvalidConfigError(f"seeds must be distinct and positive, got {self.h0!r}, {self.h1!r}")
        if not self.eta_inf > 0:
            raise InvalidConfigError(f"eta_inf must be positive, got {self.eta_inf!r}")
        for name in ("tol", "tol_r", "tol_a", "rtol", "atol"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise InvalidConfigError(f"{name} must be positive, got {value!r}")
        if not self.h_max > max(self.h0, self.h1):
            raise InvalidConfigError(f"h_max must exceed both seeds, got {self.h_max!r}")
        if self.max_iter < 2:
            raise InvalidConfigError(f"max_iter must be at least 2, got {self.max_iter!r}")


@dataclass(frozen=True)
class IterationRecord:
    """One row of an iteration table.

    ``halted_early`` marks a failed iterate: the IVP stopped short of the
    truncated boundary or ended with a terminal velocity of the wrong sign.
    Such rows carry ``gamma == -1`` and NaN for the rescaled ``fpp0_physical``.
    """

    j: int
    h_star: float
    gamma: float
    rel_change: float | None
    fpp0_physical: float
    halted_early: bool = False


@dataclass(frozen=True)
class ItmResult:
    h_star_root: float
    lam: float
    fpp0: float
    iterations: list[IterationRecord]
    starred: Trajectory
    physical: np.ndarray = field(repr=False)

    @property
    def n_iterations(self) -> int:
        """Index of the accepted iterate (iterates are counted from j = 0)."""
        return self.iterations[-1].j


def modified_ivp(problem: ScalingProblem, h_star: float, eta_inf: float) -> IvpProblem:
    """Starred IVP for the trial value ``h_star`` on ``[0, eta_inf]``."""
    if not h_star > 0:
        raise DomainError(f"h_star must be positive, got {h_star!r}")
    delta, sigma, phi = problem.delta, problem.sigma, problem.phi
    s_out = h_star ** ((1 - 3 * delta) / sigma)
    s_eta = h_star ** (-delta / sigma)
    s_f = h_star ** (-1 / sigma)
    s_fp = h_star ** ((delta - 1) / sigma)
    s_fpp = h_star ** ((2 * delta - 1) / sigma)

    def rhs(eta: float, y: StateVector) -> float:
        return s_out * phi(s_eta * eta, s_f * y.f, s_fp * y.fp, s_fpp * y.fpp)

    initial = StateVector(
        h_star ** (1 / sigma) * problem.a,
        h_star ** ((1 - delta) / sigma) * problem.b,
        problem.d,
    )
    return IvpProblem(rhs, initial, eta_inf)


def group_parameter(problem: ScalingProblem, fp_terminal: float) -> float:
    ratio = fp_terminal / problem.c
    if not ratio > 0:
        raise BranchError(f"terminal velocity {fp_terminal!r} has the wrong sign for c = {problem.c!r}")
    return ratio ** (1 / (1 - problem.delta))


def transformation_function(problem: ScalingProblem, h_star: float, lam: float) -> float:
    return lam ** (-problem.sigma) * h_star - 1


def rescale_missing_condition(lam: float, d: float, delta: float) -> float:
    """Physical ``f''(0)`` recovered from the starred one."""
    return lam ** (2 * delta - 1) * d


def rescale_trajectory(traj: Trajectory, lam: float, delta: float) -> np.ndarray:
    """Map a starred trajectory to physical variables; columns ``eta, f, f', f''``."""
    out = np.empty((len(traj), 4))
    out[:, 0] = lam ** (-delta) * traj.eta
    out[:, 1] = traj.states[:, 0] / lam
    out[:, 2] = lam ** (delta - 1) * traj.states[:, 1]
    out[:, 3] = lam ** (2 * delta - 1) * traj.states[:, 2]
    return out


def evaluate_gamma(problem: ScalingProblem, h_star: float, config: ItmConfig):
    """Integrate the starred IVP at ``h_star`` and return ``(gamma, lam, trajectory)``.

    A failed integration, or a terminal velocity of the wrong sign, gives
    ``gamma = -1`` and ``lam = None``.
    """
    ivp = modified_ivp(problem, h_star, config.eta_inf)
    traj = integrate_adaptive(ivp, rtol=config.rtol, atol=config.atol)
    if traj.halted_early:
        return -1.0, None, traj
    try:
        lam = group_parameter(problem, traj.final.fp)
        gamma = transformation_function(problem, h_star, lam)
    except (BranchError, OverflowError, ZeroDivisionError):
        return -1.0, None, traj
    if not math.isfinite(gamma):
        return -1.0, None, traj
    return gamma, lam, traj


def _record(problem, j, h, gamma, lam, h_prev) -> IterationRecord:
    failed = lam is None
    return IterationRecord(
        j=j,
        h_star=h,
        gamma=gamma,
        rel_change=None if h_prev is None else abs(h - h_prev) / abs(h),
        fpp0_physical=math.nan if failed else rescale_missing_condition(lam, problem.d, problem.delta),
        halted_early=failed,
    )


def secant_solve(problem: ScalingProblem, config: ItmConfig) -> ItmResult:
    """Drive ``Gamma(h*)`` to zero by the secant method from the seeds ``(h0, h1)``.

    Stops when ``|Gamma(h*_j)| <= tol`` and
    ``|h*_j - h*_{j-1}| <= tol_r * |h*_j| + tol_a`` hold together. Two equal
    values of ``Gamma`` away from a root raise :class:`StalledSecantError`;
    equal values already within ``tol`` (the function is flat at rounding
    level) are resolved by a bisection step instead.
    """
    history: list[IterationRecord] = []

    h_prev = config.h0
    g_prev, lam, _ = evaluate_gamma(problem, h_prev, config)
    history.append(_record(problem, 0, h_prev, g_prev, lam, None))

    h = config.h1
    j = 1
    while True:
        g, lam, traj = evaluate_gamma(problem, h, config)
        history.append(_record(problem, j, h, g, lam, h_prev if j > 1 else None))

        if lam is not None and abs(g) <= config.tol and abs(h - h_prev) <= config.tol_r * abs(h) + config.tol_a:
            return ItmResult(
                h_star_root=h,
                lam=lam,
                fpp0=rescale_missing_condition(lam, problem.d, problem.delta),
                iterations=history,
                starred=traj,
                physical=rescale_trajectory(traj, lam, problem.delta),
            )
        if lam is None and history[-2].halted_early:
            raise DoubleBlowUpError(
                f"IVP failed at two successive iterates h* = {h_prev:g}, {h:g}", history
            )
        if g == g_prev and abs(g) > config.tol:
            raise StalledSecantError(f"secant stalled at h* = {h:g} (Gamma = {g:g})", history)
        if j >= config.max_iter:
            raise NoConvergenceError(f"no convergence after {j} iterations", history)

        if g == g_prev:
            # Flat at rounding level next to a root: close the gap by halving.
            h_next = 0.5 * (h + h_prev)
        else:
            h_next = h - g * (h - h_prev) / (g - g_prev)
        if not h_next > 0 or not math.isfinite(h_next):
            h_next = 0.5 * h
        if h_next > config.h_max:
            raise NoConvergenceError(f"secant left the admissible range: h* = {h_next:g} > {config.h_max:g}", history)
        h_prev, g_prev = h, g
        h = h_next
        j += 1
