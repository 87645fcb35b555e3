import numpy as np
import pytest
from scipy.interpolate import BPoly
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from topfer.falkner_skan import DELTA, FalknerSkanCase, default_config, find_beta_min, make_problem
from topfer.itm import modified_ivp
from topfer.ode import StateVector


@pytest.fixture(scope="session")
def beta_min_result():
    return find_beta_min(threshold=1e-5)


def shoot_falkner_skan(beta, length=10.0, bracket=(0.1, 1.0)):
    """Independent oracle: plain shooting on f''(0) with scipy, f'(length) = 1."""

    def miss(s):
        sol = solve_ivp(
            lambda t, y: [y[1], y[2], -y[0] * y[2] - beta * (1 - y[1] ** 2)],
            (0, length),
            [0.0, 0.0, s],
            method="DOP853",
            rtol=1e-12,
            atol=1e-12,
        )
        return sol.y[1, -1] - 1.0

    return brentq(miss, *bracket, xtol=1e-13)


def algebraic_residual(case, res):
    """Falkner-Skan residual with f''' taken from the solver's own (rescaled) starred rhs."""
    ivp = modified_ivp(make_problem(case), res.h_star_root, case.config.eta_inf)
    fppp_star = np.array([ivp.rhs(e, StateVector(*s)) for e, s in res.starred.samples()])
    p = res.physical
    fppp = res.lam ** (3 * DELTA - 1) * fppp_star
    return np.abs(fppp + p[:, 1] * p[:, 3] + case.beta * (1 - p[:, 2] ** 2))


def hermite_residual(beta, profile):
    """Falkner-Skan residual with f''' from a quintic Hermite fit through (f, f', f'') only."""
    x = profile[:, 0]
    d3 = BPoly.from_derivatives(x, profile[:, 1:4]).derivative(3)
    xi = x[1:-1]
    eps = 1e-9 * np.minimum(np.diff(x)[:-1], np.diff(x)[1:])
    fppp = 0.5 * (d3(xi - eps) + d3(xi + eps))
    p = profile[1:-1]
    return np.abs(fppp + p[:, 1] * p[:, 3] + beta * (1 - p[:, 2] ** 2))


def reverse_case(beta):
    # Close to beta = 0 the reverse root moves out to h* ~ 70.
    cfg = default_config("reverse", h0=75.0, h1=150.0) if beta > -0.02 else None
    return FalknerSkanCase(beta, "reverse", cfg)
