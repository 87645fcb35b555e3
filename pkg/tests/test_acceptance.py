"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest -v tests/test_acceptance.py``; the lines are printed even
when output capture is on.
"""

import math
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from conftest import algebraic_residual, reverse_case
from test_properties import group_image_error
from topfer.blasius import BOYD_LAMBDA, series_coefficients, series_eval, solve_toepfer, starred_problem
from topfer.errors import DoubleBlowUpError, TopferError
from topfer.falkner_skan import FalknerSkanCase, default_config, make_problem, solve_case
from topfer.itm import evaluate_gamma
from topfer.ode import IvpProblem, StateVector, integrate_adaptive, rk4_fixed


@pytest.fixture
def report(capsys):
    def emit(criterion, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {criterion}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return emit


def test_criterion_1_blasius_historical(report):
    sol = solve_toepfer(checkpoints=(4.0, 6.0), agreement_tol=1e-3, integrator="fixed", step=0.1)
    (_, l1), (_, l2) = sol.lambda_checkpoints
    ok = abs(l1 - 0.3329124105) <= 1e-6 and abs(l2 - 0.3320575595) <= 1e-6
    report(1, ok, f"lambda_1 = {l1:.10f}, lambda_2 = {l2:.10f}")


def test_criterion_2_blasius_reference(report):
    sol = solve_toepfer(checkpoints=(8.0, 10.0), agreement_tol=1e-9)
    report(2, abs(sol.lam - 0.33205733621519630) <= 1e-8, f"lambda = {sol.lam:.17f}, error {sol.lam - BOYD_LAMBDA:.2e}")


def test_criterion_3_normal_flow_near_zero(report):
    case = FalknerSkanCase(-0.01, "normal", default_config("normal", h0=5.0, h1=10.0))
    res = solve_case(case)
    g5 = evaluate_gamma(make_problem(case), 5.0, case.config)[0]
    g10 = evaluate_gamma(make_problem(case), 10.0, case.config)[0]
    ok = (
        abs(res.h_star_root - 2.845355) <= 1e-4
        and abs(res.fpp0 - 0.456455) <= 1e-5
        and abs(res.n_iterations - 7) <= 2
        and abs(g5 - 0.631459) <= 1e-4
        and abs(g10 - 1.791425) <= 1e-4
    )
    report(
        3,
        ok,
        f"h* = {res.h_star_root:.6f}, f''(0) = {res.fpp0:.6f}, iterations = {res.n_iterations}, "
        f"Gamma(5) = {g5:.6f}, Gamma(10) = {g10:.6f}",
    )


def test_criterion_4_reverse_flow_near_zero(report):
    res = solve_case(FalknerSkanCase(-0.01, "reverse", default_config("reverse", h0=75.0, h1=150.0)))
    ok = abs(res.h_star_root - 67.804746) <= 1e-3 and abs(res.fpp0 + 0.042321) <= 1e-5 and abs(res.n_iterations - 7) <= 2
    report(4, ok, f"h* = {res.h_star_root:.6f}, f''(0) = {res.fpp0:.6f}, iterations = {res.n_iterations}")


def test_criterion_5_reverse_flow_skin_friction(report):
    betas = (-0.025, -0.05, -0.1, -0.15, -0.18)
    expected = (-0.074366, -0.108271, -0.140546, -0.133421, -0.097692)
    counts = (8, 7, 9, 7, 7)
    results = [solve_case(FalknerSkanCase(b, "reverse")) for b in betas]
    ok = all(abs(r.fpp0 - e) <= 1e-5 and abs(r.n_iterations - n) <= 2 for r, e, n in zip(results, expected, counts))
    detail = ", ".join(f"{b}: {r.fpp0:.6f} ({r.n_iterations} it)" for b, r in zip(betas, results))
    report(5, ok, detail)


def test_criterion_6_near_limit_branches(report):
    up = solve_case(FalknerSkanCase(-0.1988, "normal")).fpp0
    down = solve_case(FalknerSkanCase(-0.1988, "reverse")).fpp0
    ok = abs(up - 0.005221) <= 1e-5 and abs(down + 0.005158) <= 1e-5
    report(6, ok, f"normal {up:.6f}, reverse {down:.6f}")


def test_criterion_7_beta_min(report, beta_min_result):
    r = beta_min_result
    ok = abs(r.beta_min + 0.19884) <= 1e-4 and abs(r.fpp0_normal) <= 1e-5 and abs(r.fpp0_reverse) <= 1e-5
    report(7, ok, f"beta_min = {r.beta_min:.9f}, f''(0) = {r.fpp0_normal:.2e} / {r.fpp0_reverse:.2e}")


def test_criterion_8_properties(report):
    notes, ok = [], True

    # (a) RK4 error ratio per halving on f''' = -f f''
    p = IvpProblem(lambda e, y: -y.f * y.fpp, StateVector(0.0, 0.0, 1.0), 1.0)
    ref = np.array(rk4_fixed(p, 1e-5).final)
    errs = [np.abs(np.array(rk4_fixed(p, s).final) - ref).max() for s in (0.1, 0.05, 0.025, 0.0125)]
    ratios = [a / b for a, b in zip(errs, errs[1:])]
    ok &= all(14 <= x <= 18 for x in ratios)
    notes.append("a: ratios " + "/".join(f"{x:.2f}" for x in ratios))

    # (b) group invariance of the modified problem
    tol = 1e-8
    worst = max(group_image_error(h, l0, tol) for h in (0.3, 2.0, 20.0) for l0 in (0.5, 1.7))
    ok &= worst <= 10 * (tol + tol)
    notes.append(f"b: {worst:.1e} <= {20 * tol:.0e}")

    # (c) exact closed forms and agreement with the numeric solution on [0, 1]
    lam = Fraction(BOYD_LAMBDA)
    c = series_coefficients(lam, 11).coefficients
    exact = (
        c[5] == -(lam**2) / (2 * factorial(5))
        and c[8] == 11 * lam**3 / (2**2 * factorial(8))
        and c[11] == -375 * lam**4 / (2**3 * factorial(11))
    )
    s = series_coefficients(BOYD_LAMBDA, 26)
    k = BOYD_LAMBDA ** (1 / 3)
    etas = np.linspace(0.1, 1.0, 10)
    tr = integrate_adaptive(starred_problem(k), rtol=1e-12, atol=1e-12, checkpoints=k * etas)
    gap = max(abs(series_eval(s, e)[0] - k * tr.states[tr.index_of(k * e)][0]) for e in etas)
    ok &= exact and gap <= 1e-8
    notes.append(f"c: exact={exact}, gap {gap:.1e}")

    # (d) residual of every converged profile in the reference cases
    cases = [FalknerSkanCase(b, "normal") for b in (0.0, -0.01, -0.1, -0.1988)]
    cases += [reverse_case(b) for b in (-0.01, -0.025, -0.1, -0.18, -0.1988)]
    res = max(algebraic_residual(cs, solve_case(cs))[1:-1].max() for cs in cases)
    ok &= res <= 1e-5
    notes.append(f"d: residual {res:.1e}")

    # (e) back flow on the reverse branch
    prof = solve_case(FalknerSkanCase(-0.15, "reverse")).physical
    fp_min = prof[1:-1, 2].min()
    ok &= fp_min < 0
    notes.append(f"e: min f' = {fp_min:.4f}")

    report(8, bool(ok), "; ".join(notes))


def test_criterion_9_robustness(report):
    notes, ok = [], True
    # first seed blows up, the secant still recovers
    for beta, expected in ((-0.025, -0.074366), (-0.1, -0.140546), (-0.18, -0.097692)):
        res = solve_case(FalknerSkanCase(beta, "reverse", default_config("reverse", h0=1e-3, h1=25.0)))
        halted = [r for r in res.iterations if r.halted_early]
        ok &= bool(halted) and all(r.gamma == -1.0 for r in halted) and abs(res.fpp0 - expected) <= 1e-5
        notes.append(f"{beta}: recovered {res.fpp0:.6f} after {len(halted)} blow-up")
    # both seeds blow up: classified, never a stray numeric exception
    for seeds in ((1e-3, 2e-3), (0.5, 1.0)):
        try:
            solve_case(FalknerSkanCase(-0.1, "reverse", default_config("reverse", h0=seeds[0], h1=seeds[1])))
            kind = "converged"
        except DoubleBlowUpError as exc:
            kind = "double blow-up"
            ok &= all(r.gamma == -1.0 and math.isnan(r.fpp0_physical) for r in exc.history[-2:])
        except TopferError as exc:
            kind = type(exc).__name__
            ok = False
        notes.append(f"seeds {seeds}: {kind}")
    report(9, bool(ok), "; ".join(notes))
