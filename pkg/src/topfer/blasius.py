"""Blasius flat-plate boundary layer by Töpfer's non-iterative transformation.

``f''' + f f'' / 2 = 0`` with ``f(0) = f'(0) = 0`` and ``f'(inf) = 1`` is
invariant under ``f* = lam**(-1/3) f``, ``eta* = lam**(1/3) eta``. So one
IVP with ``f*''(0) = 1`` suffices: the skin friction is read off the terminal
starred velocity and the profile follows by rescaling.

A power series around the wall is included as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import BlowUpError, DomainError, InvalidConfigError, NoConvergenceError
from .ode import IvpProblem, StateVector, Trajectory, integrate_adaptive, rk4_fixed

# Boyd's high-precision value of f''(0).
BOYD_LAMBDA = 0.33205733621519630

HISTORICAL = dict(checkpoints=(4.0, 6.0), integrator="fixed", step=0.1)
PRODUCTION = dict(checkpoints=(6.0, 8.0, 10.0), agreement_tol=1e-9, integrator="adaptive", rtol=1e-10, atol=1e-10)

SERIES_RADIUS = 2.0


def blasius_rhs(eta: float, state: StateVector) -> float:
    return -0.5 * state.f * state.fpp


def lambda_from_terminal(fp_terminal: float) -> float:
    """Skin friction from the starred velocity at 'infinity'."""
    if not fp_terminal > 0:
        raise DomainError(f"terminal velocity must be positive, got {fp_terminal!r}")
    return fp_terminal ** -1.5


@dataclass(frozen=True)
class BlasiusSolution:
    lam: float
    lambda_checkpoints: list[tuple[float, float]]
    starred: Trajectory
    # columns eta, f, f', f''
    physical: np.ndarray = field(repr=False)


def starred_problem(domain_end: float) -> IvpProblem:
    return IvpProblem(blasius_rhs, StateVector(0.0, 0.0, 1.0), domain_end)


def rescale(traj: Trajectory, lam: float) -> np.ndarray:
    c = lam ** (1 / 3)
    out = np.empty((len(traj), 4))
    out[:, 0] = traj.eta / c
    out[:, 1] = c * traj.states[:, 0]
    out[:, 2] = c * c * traj.states[:, 1]
    out[:, 3] = lam * traj.states[:, 2]
    return out


def solve_toepfer(
    checkpoints: Sequence[float] = PRODUCTION["checkpoints"],
    agreement_tol: float = PRODUCTION["agreement_tol"],
    integrator: str = "adaptive",
    step: float = 0.1,
    rtol: float = PRODUCTION["rtol"],
    atol: float = PRODUCTION["atol"],
) -> BlasiusSolution:
    """One IVP up to the last checkpoint, then accept the first ``lam_j``
    that agrees with ``lam_{j-1}`` to within ``agreement_tol``."""
    checkpoints = [float(c) for c in checkpoints]
    if len(checkpoints) < 2:
        raise InvalidConfigError("at least two checkpoints are required")
    if any(b <= a for a, b in zip(checkpoints, checkpoints[1:])) or checkpoints[0] <= 0:
        raise InvalidConfigError(f"checkpoints must be positive and increasing, got {checkpoints}")
    if not agreement_tol > 0:
        raise InvalidConfigError(f"agreement_tol must be positive, got {agreement_tol!r}")

    problem = starred_problem(checkpoints[-1])
    if integrator == "fixed":
        traj = rk4_fixed(problem, step)
    elif integrator == "adaptive":
        traj = integrate_adaptive(problem, rtol=rtol, atol=atol, checkpoints=checkpoints)
    else:
        raise InvalidConfigError(f"unknown integrator {integrator!r}")
    if traj.halted_early:
        raise BlowUpError(f"Blasius IVP halted at eta* = {traj.halt_abscissa:g}", traj.halt_abscissa)

    pairs = []
    for c in checkpoints:
        try:
            i = traj.index_of(c)
        except KeyError:
            raise InvalidConfigError(f"checkpoint {c:g} is not on the integration grid") from None
        pairs.append((c, lambda_from_terminal(traj.state_at(i).fp)))

    for (_, prev), (_, lam) in zip(pairs, pairs[1:]):
        if abs(lam - prev) <= agreement_tol:
            return BlasiusSolution(lam, pairs, traj, rescale(traj, lam))
    raise NoConvergenceError(f"no two consecutive checkpoint values agree within {agreement_tol:g}", pairs)


@dataclass(frozen=True)
class SeriesExpansion:
    """``f(eta) = sum C_n eta**n`` about the wall; ``coefficients[n] = C_n``."""

    lam: float
    coefficients: tuple

    @property
    def n_max(self) -> int:
        return len(self.coefficients) - 1


def series_coefficients(lam, n_max: int) -> SeriesExpansion:
    """Coefficients from matching powers of eta in ``f''' = -f f''/2``:

        n(n-1)(n-2) C_n = -1/2 sum_k C_k (n-1-k)(n-2-k) C_{n-1-k}

    Works for floats and for :class:`fractions.Fraction` (exact arithmetic).
    """
    if n_max < 2:
        raise InvalidConfigError(f"n_max must be at least 2, got {n_max!r}")
    exact = isinstance(lam, Fraction)
    zero = Fraction(0) if exact else 0.0
    half = Fraction(1, 2) if exact else 0.5
    c = [zero] * (n_max + 1)
    c[2] = lam * half
    for n in range(5, n_max + 1):
        if n % 3 != 2:
            continue
        acc = zero
        for k in range(2, n - 2):
            m = n - 1 - k
            if c[k] and c[m]:
                acc += c[k] * m * (m - 1) * c[m]
        c[n] = -half * acc / (n * (n - 1) * (n - 2))
    return SeriesExpansion(lam, tuple(c))


def series_eval(series: SeriesExpansion, eta: float) -> tuple[float, float, float]:
    """``(f, f', f'')`` of the truncated series by Horner's rule."""
    if abs(eta) > SERIES_RADIUS:
        raise DomainError(f"|eta| must not exceed {SERIES_RADIUS}, got {eta!r}")
    c = series.coefficients
    # Start from a zero of the coefficient type so Fraction input stays exact.
    f = fp = fpp = c[0] * 0
    for n in range(len(c) - 1, -1, -1):
        f = f * eta + c[n]
        if n >= 1:
            fp = fp * eta + n * c[n]
        if n >= 2:
            fpp = fpp * eta + n * (n - 1) * c[n]
    return f, fp, fpp
