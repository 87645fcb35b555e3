"""Initial value integrators for a single third-order scalar ODE.

The state is always the triple ``(f, f', f'')`` and the right-hand side
returns ``f'''``. Two integrators are provided:

* :func:`rk4_fixed` -- the classical fourth order Runge-Kutta scheme on a
  uniform grid.
* :func:`integrate_adaptive` -- Dormand-Prince 5(4) with per-component error
  control, landing exactly on requested checkpoints.

Neither raises on blow-up. A trajectory that leaves the bounded region (any
component above :data:`BLOWUP_BOUND` in magnitude, or a non-finite value) is
returned truncated with ``halted_early`` set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import InvalidConfigError, InvalidProblemError

BLOWUP_BOUND = 1e10
MIN_STEP_FRACTION = 1e-12
# Numeric failures inside a user rhs are treated as blow-up.
_NUMERIC_FAILURES = (OverflowError, ZeroDivisionError, ValueError)


class StateVector(NamedTuple):
    f: float
    fp: float
    fpp: float


Rhs = Callable[[float, StateVector], float]


@dataclass(frozen=True)
class IvpProblem:
    """``f''' = rhs(eta, state)`` on ``[0, domain_end]`` from ``initial``."""

    rhs: Rhs
    initial: StateVector
    domain_end: float

    def __post_init__(self):
        if not self.domain_end > 0:
            raise InvalidProblemError(f"domain_end must be positive, got {self.domain_end!r}")
        object.__setattr__(self, "initial", StateVector(*map(float, self.initial)))


@dataclass(frozen=True)
class IntegrationStats:
    steps: int = 0
    failed: int = 0
    evaluations: int = 0


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of an :class:`IvpProblem`.

    ``eta`` has shape ``(n,)`` and ``states`` shape ``(n, 3)``; both arrays
    are read-only.
    """

    eta: np.ndarray
    states: np.ndarray
    stats: IntegrationStats
    halted_early: bool = False
    halt_abscissa: float | None = None
    domain_end: float = field(default=math.nan)

    def __post_init__(self):
        self.eta.setflags(write=False)
        self.states.setflags(write=False)

    def __len__(self) -> int:
        return len(self.eta)

    @property
    def final(self) -> StateVector:
        return StateVector(*(float(v) for v in self.states[-1]))

    @property
    def end(self) -> float:
        return float(self.eta[-1])

    def state_at(self, index: int) -> StateVector:
        return StateVector(*(float(v) for v in self.states[index]))

    def samples(self) -> Iterator[tuple[float, StateVector]]:
        for i in range(len(self.eta)):
            yield float(self.eta[i]), self.state_at(i)

    def index_of(self, abscissa: float, rel: float = 1e-9) -> int:
        """Index of the sample sitting on ``abscissa`` (raises KeyError if none)."""
        i = int(np.searchsorted(self.eta, abscissa))
        for k in (i - 1, i):
            if 0 <= k < len(self.eta) and abs(self.eta[k] - abscissa) <= rel * max(1.0, abs(abscissa)):
                return k
        raise KeyError(abscissa)


def _bounded(y: Sequence[float]) -> bool:
    return all(math.isfinite(v) and abs(v) <= BLOWUP_BOUND for v in y)


def _finish(etas, ys, stats, halted, domain_end) -> Trajectory:
    return Trajectory(
        eta=np.array(etas, dtype=float),
        states=np.array(ys, dtype=float).reshape(-1, 3),
        stats=stats,
        halted_early=halted,
        halt_abscissa=etas[-1] if halted else None,
        domain_end=domain_end,
    )


def _check_origin(problem: IvpProblem) -> float:
    try:
        value = float(problem.rhs(0.0, problem.initial))
    except _NUMERIC_FAILURES as exc:
        raise InvalidProblemError(f"rhs failed at eta = 0: {exc}") from exc
    if not math.isfinite(value) or not _bounded(problem.initial):
        raise InvalidProblemError("rhs or initial state is not finite at eta = 0")
    return value


def rk4_fixed(problem: IvpProblem, step: float) -> Trajectory:
    """Classical RK4 on the grid ``k * step``; the last step shrinks to land on ``domain_end``."""
    if not step > 0:
        raise InvalidConfigError(f"step must be positive, got {step!r}")
    _check_origin(problem)
    rhs = problem.rhs
    end = problem.domain_end
    ratio = end / step
    n_steps = round(ratio)
    if n_steps < 1 or abs(ratio - n_steps) > 1e-9 * max(1.0, ratio):
        n_steps = math.ceil(ratio)

    f, fp, fpp = problem.initial
    etas = [0.0]
    ys = [(f, fp, fpp)]
    evals = 0
    halted = False
    eta = 0.0
    for k in range(1, n_steps + 1):
        nxt = end if k == n_steps else k * step
        h = nxt - eta
        try:
            k1 = rhs(eta, StateVector(f, fp, fpp))
            a1, b1, c1 = fp, fpp, k1
            h2 = 0.5 * h
            k2 = rhs(eta + h2, StateVector(f + h2 * a1, fp + h2 * b1, fpp + h2 * c1))
            a2, b2, c2 = fp + h2 * b1, fpp + h2 * c1, k2
            k3 = rhs(eta + h2, StateVector(f + h2 * a2, fp + h2 * b2, fpp + h2 * c2))
            a3, b3, c3 = fp + h2 * b2, fpp + h2 * c2, k3
            k4 = rhs(nxt, StateVector(f + h * a3, fp + h * b3, fpp + h * c3))
            a4, b4, c4 = fp + h * b3, fpp + h * c3, k4
        except _NUMERIC_FAILURES:
            halted = True
            break
        finally:
            evals += 4
        h6 = h / 6.0
        y = (
            f + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4),
            fp + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4),
            fpp + h6 * (c1 + 2.0 * c2 + 2.0 * c3 + c4),
        )
        if not _bounded(y):
            halted = True
            break
        f, fp, fpp = y
        eta = nxt
        etas.append(eta)
        ys.append(y)

    stats = IntegrationStats(steps=len(etas) - 1, failed=0, evaluations=evals)
    return _finish(etas, ys, stats, halted, end)


# Dormand-Prince 5(4) tableau.
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B = _A[6]
# Difference between the 5th and embedded 4th order weights.
_E = (
    71 / 57600,
    0.0,
    -71 / 16695,
    71 / 1920,
    -17253 / 339200,
    22 / 525,
    -1 / 40,
)


def _deriv(rhs: Rhs, eta: float, y: Sequence[float]) -> tuple[float, float, float]:
    return (y[1], y[2], float(rhs(eta, StateVector(*y))))


def _initial_step(rhs, eta0, y0, d0, rtol, atol, span) -> float:
    # Hairer, Norsett & Wanner, Solving ODEs I, II.4.
    sc = [atol + rtol * abs(v) for v in y0]
    n0 = max(abs(v) / s for v, s in zip(y0, sc))
    n1 = max(abs(v) / s for v, s in zip(d0, sc))
    h0 = 1e-6 if n0 < 1e-5 or n1 < 1e-5 else 0.01 * n0 / n1
    h0 = min(h0, span)
    y1 = [v + h0 * dv for v, dv in zip(y0, d0)]
    try:
        d1 = _deriv(rhs, eta0 + h0, y1)
    except _NUMERIC_FAILURES:
        return h0 * 1e-3
    n2 = max(abs(a - b) / s for a, b, s in zip(d1, d0, sc)) / h0
    if not math.isfinite(n2):
        return h0 * 1e-3
    if max(n1, n2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(n1, n2)) ** (1 / 5)
    return min(100 * h0, h1, span)


def integrate_adaptive(
    problem: IvpProblem,
    rtol: float = 1e-6,
    atol: float = 1e-6,
    checkpoints: Sequence[float] | None = None,
    max_steps: int = 200_000,
) -> Trajectory:
    """Dormand-Prince 5(4) integration with exact landing on ``checkpoints``.

    Each accepted step is stored. The local error of every component is held
    below ``rtol * |y| + atol``. On step-size underflow, state blow-up or
    more than ``max_steps`` accepted steps the partial trajectory is returned
    with ``halted_early=True``.
    """
    if not (rtol > 0 and atol > 0):
        raise InvalidConfigError(f"rtol and atol must be positive, got {rtol!r}, {atol!r}")
    end = problem.domain_end
    targets = sorted({float(c) for c in (() if checkpoints is None else checkpoints)} | {end})
    if targets[0] <= 0 or targets[-1] > end:
        raise InvalidConfigError("checkpoints must lie in (0, domain_end]")
    _check_origin(problem)

    rhs = problem.rhs
    h_min = MIN_STEP_FRACTION * end
    eta = 0.0
    y = tuple(problem.initial)
    etas = [eta]
    ys = [y]
    steps = failed = 0
    evals = 1
    k1 = _deriv(rhs, eta, y)
    h = _initial_step(rhs, eta, y, k1, rtol, atol, targets[0])
    evals += 1
    halted = False
    ti = 0
    comp = (0.0, 0.0, 0.0)

    while ti < len(targets):
        target = targets[ti]
        if h < h_min or steps >= max_steps:
            halted = True
            break
        proposal = h
        landing = eta + h >= target - 1e-12 * end
        if landing:
            h = target - eta
        try:
            ks = [k1]
            for s in range(1, 7):
                a = _A[s]
                yi = tuple(
                    y[i] + h * sum(a[j] * ks[j][i] for j in range(s)) for i in range(3)
                )
                ks.append(_deriv(rhs, eta + _C[s] * h, yi))
            evals += 6
        except _NUMERIC_FAILURES:
            evals += 6
            failed += 1
            h *= 0.2
            continue
        # Compensated (Kahan) update: the increment is tiny next to |y| near
        # the end of long domains and plain addition loses its low bits.
        inc = tuple(h * sum(_B[j] * ks[j][i] for j in range(6)) + comp[i] for i in range(3))
        y_new = tuple(y[i] + inc[i] for i in range(3))
        err = 0.0
        for i in range(3):
            e = h * sum(_E[j] * ks[j][i] for j in range(7))
            sc = atol + rtol * max(abs(y[i]), abs(y_new[i]))
            err = max(err, abs(e) / sc)
        if not math.isfinite(err) or not all(math.isfinite(v) for v in y_new):
            failed += 1
            h *= 0.2
            continue
        if err > 1.0:
            failed += 1
            h *= max(0.2, 0.9 * err ** -0.2)
            continue

        if not _bounded(y_new):
            halted = True
            break
        steps += 1
        eta = target if landing else eta + h
        comp = tuple(inc[i] - (y_new[i] - y[i]) for i in range(3))
        y = y_new
        k1 = ks[6]
        etas.append(eta)
        ys.append(y)
        factor = 5.0 if err == 0.0 else min(5.0, max(0.2, 0.9 * err ** -0.2))
        h = h * factor
        if landing:
            ti += 1
            # A step cut short to land does not shrink the next one.
            h = max(h, proposal)

    stats = IntegrationStats(steps=steps, failed=failed, evaluations=evals)
    return _finish(etas, ys, stats, halted, end)
