"""Falkner-Skan wedge flows solved by the iterative transformation method.

``f''' + f f'' + beta (1 - f'^2) = 0`` with ``f(0) = f'(0) = 0`` and
``f'(inf) = 1``. For ``beta_min < beta < 0`` two solutions exist: normal
flow (``f'' (0) > 0``) and Stewartson's reverse flow (``f''(0) < 0``). The
branch is picked by the sign of the starred initial shear ``d``.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
import math
from dataclasses import dataclass
from functools import partial
from typing import Sequence

from .errors import BadStartError, InvalidConfigError, NoConvergenceError
from .itm import ItmConfig, ItmResult, ScalingProblem, secant_solve

log = logging.getLogger(__name__)

SIGMA = 4.0
DELTA = -1.0
BETA_MIN_START = -0.1988


class Flow(str, enum.Enum):
    NORMAL = "normal"
    REVERSE = "reverse"

    @property
    def d(self) -> float:
        return 1.0 if self is Flow.NORMAL else -1.0


DEFAULT_SEEDS = {Flow.NORMAL: (1.0, 5.0), Flow.REVERSE: (15.0, 25.0)}
# Below beta_min the secant drifts to ever larger h* (Gamma creeps toward zero
# from below) and each IVP gets slower; h* = 1e6 means |f''(0)| ~ 3e-5.
DEFAULT_H_MAX = 1e6


def default_config(flow: Flow | str, **overrides) -> ItmConfig:
    h0, h1 = DEFAULT_SEEDS[Flow(flow)]
    overrides.setdefault("h0", h0)
    overrides.setdefault("h1", h1)
    overrides.setdefault("h_max", DEFAULT_H_MAX)
    return ItmConfig(**overrides)


@dataclass(frozen=True)
class FalknerSkanCase:
    beta: float
    flow: Flow = Flow.NORMAL
    config: ItmConfig | None = None

    def __post_init__(self):
        object.__setattr__(self, "flow", Flow(self.flow))
        if self.config is None:
            object.__setattr__(self, "config", default_config(self.flow))


@dataclass(frozen=True)
class BranchPoint:
    beta: float
    flow: Flow
    fpp0: float
    iterations: int
    converged: bool
    h_star: float = math.nan


@dataclass(frozen=True)
class BetaMinResult:
    beta_min: float
    fpp0_normal: float
    fpp0_reverse: float
    bracket: tuple[float, float]
    probes: list[tuple[float, bool]] = dataclasses.field(default_factory=list, repr=False)


def fs_phi(eta: float, f: float, fp: float, fpp: float, beta: float) -> float:
    return -f * fpp - beta * (1.0 - fp * fp)


def make_problem(case: FalknerSkanCase) -> ScalingProblem:
    return ScalingProblem(
        phi=partial(fs_phi, beta=case.beta),
        a=0.0,
        b=0.0,
        c=1.0,
        delta=DELTA,
        sigma=SIGMA,
        d=case.flow.d,
    )


def solve_case(case: FalknerSkanCase) -> ItmResult:
    return secant_solve(make_problem(case), case.config)


def _point(beta, flow, result: ItmResult | None, iterations: int) -> BranchPoint:
    if result is None:
        return BranchPoint(beta, flow, math.nan, iterations, False)
    return BranchPoint(beta, flow, result.fpp0, result.n_iterations, True, result.h_star_root)


def sweep_beta(
    betas: Sequence[float],
    flow: Flow | str,
    config: ItmConfig | None = None,
    warm_start: bool = True,
) -> list[BranchPoint]:
    """Solve one branch for each ``beta`` in order.

    With ``warm_start`` the seeds for a point are ``0.9`` and ``1.1`` times
    the root found at the previous converged point; the first point (and
    every point when ``warm_start`` is off) uses ``config``'s seeds.
    Non-convergence is recorded in the returned points, never raised.
    """
    betas = list(betas)
    if not betas:
        raise InvalidConfigError("at least one beta is required")
    flow = Flow(flow)
    base = config or default_config(flow)
    points = []
    last_root = None
    for beta in betas:
        cfg = base
        if warm_start and last_root is not None:
            cfg = dataclasses.replace(base, h0=0.9 * last_root, h1=1.1 * last_root)
        try:
            result = solve_case(FalknerSkanCase(beta, flow, cfg))
        except NoConvergenceError as exc:
            log.info("beta = %g (%s) did not converge: %s", beta, flow.value, exc)
            points.append(_point(beta, flow, None, len(exc.history) - 1))
            continue
        last_root = result.h_star_root
        points.append(_point(beta, flow, result, 0))
    return points


def _try(beta: float, flow: Flow, cfg: ItmConfig) -> ItmResult | None:
    try:
        return solve_case(FalknerSkanCase(beta, flow, cfg))
    except NoConvergenceError:
        return None


def _limit_fit(points):
    """Fit ``fpp0**2 = slope * (beta - beta_star)`` through the last two points."""
    (b1, f1), (b2, f2) = points[-2:]
    slope = (f1 * f1 - f2 * f2) / (b1 - b2)
    if not slope > 0:
        return None
    return slope, b2 - f2 * f2 / slope


def find_beta_min(
    config: ItmConfig | None = None,
    threshold: float = 1e-5,
    start: float = BETA_MIN_START,
    step: float = 1e-5,
    physical_length: float = 20.0,
    min_eta_inf: float = 1.0,
    growth_cap: float = 1000.0,
    probe_tol: float = 1e-10,
    min_bracket: float = 1e-15,
    max_probes: int = 60,
) -> BetaMinResult:
    """Continue both branches in ``beta`` toward the limit where they merge.

    Both branches are first solved at ``start`` with ``config`` (default seeds
    and ``eta_inf = 20`` by default). The continuation then lowers ``beta``:
    by ``step`` until two converged points are available, afterwards aiming
    at ``threshold / 2`` through the square-root law
    ``fpp0**2 ~ beta - beta_min`` fitted to the last two converged points.
    Probes are kept strictly inside the bracket ``(failed, converged)`` and
    fall back to bisection when the extrapolation leaves it.

    Each branch is warm-started from its previous root ``h``, with the
    truncated boundary shrunk to ``physical_length / h**(1/4)`` (the physical
    length of the domain at that root) but never below ``min_eta_inf``. A
    probe counts as failed when either branch does not converge or its secant
    iterates exceed ``growth_cap`` times the previous root. Probes integrate
    with ``rtol = atol = probe_tol``: near the limit the transformation
    function is of order 1e-8 over a wide range of ``h*`` and the bias of a
    looser tolerance is enough to hide the root.

    The search stops once both skin frictions are within ``threshold`` of
    zero, the bracket is narrower than ``min_bracket``, or ``max_probes``
    probes were spent.
    """
    if not threshold > 0:
        raise InvalidConfigError(f"threshold must be positive, got {threshold!r}")
    if config is None:
        seeds = DEFAULT_SEEDS
        base = default_config(Flow.NORMAL, max_iter=60)
    else:
        seeds = {flow: (config.h0, config.h1) for flow in Flow}
        base = config

    results = {flow: _try(start, flow, dataclasses.replace(base, h0=seeds[flow][0], h1=seeds[flow][1])) for flow in Flow}
    if any(r is None for r in results.values()):
        raise BadStartError(f"ITM did not converge on both branches at beta = {start!r}")

    good, bad = start, None
    history = {flow: [(start, results[flow].fpp0)] for flow in Flow}
    probes = [(start, True)]

    def done() -> bool:
        return all(abs(r.fpp0) <= threshold for r in results.values())

    while not done() and len(probes) < max_probes:
        if bad is not None and good - bad < min_bracket:
            break
        beta = good - step
        fits = [_limit_fit(history[flow]) for flow in Flow] if len(history[Flow.NORMAL]) > 1 else []
        if fits and all(fits):
            target = 0.5 * threshold
            beta = max(b_star + target * target / slope for slope, b_star in fits)
        if bad is not None and not bad < beta < good:
            beta = 0.5 * (good + bad)
        if not beta < good:
            break

        trial = {}
        for flow in Flow:
            h = results[flow].h_star_root
            eta_inf = min(base.eta_inf, max(min_eta_inf, physical_length / h ** 0.25))
            cfg = dataclasses.replace(
                base, h0=h, h1=1.1 * h, eta_inf=eta_inf, h_max=growth_cap * h, rtol=probe_tol, atol=probe_tol
            )
            trial[flow] = _try(beta, flow, cfg)
            if trial[flow] is None:
                break
        ok = len(trial) == len(Flow) and all(r is not None for r in trial.values())
        probes.append((beta, ok))
        log.debug("probe beta = %.15g: %s", beta, "converged" if ok else "failed")
        if ok:
            good = beta
            results = trial
            for flow in Flow:
                history[flow].append((beta, results[flow].fpp0))
        else:
            bad = beta

    return BetaMinResult(
        beta_min=good,
        fpp0_normal=results[Flow.NORMAL].fpp0,
        fpp0_reverse=results[Flow.REVERSE].fpp0,
        bracket=(good if bad is None else bad, good),
        probes=probes,
    )
