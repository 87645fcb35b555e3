"""
Blasius flat plate without iteration
====================================

The Blasius equation f''' + f f''/2 = 0 is invariant under a scaling group,
so one initial value problem with f''(0) = 1 is enough: the far-field value
of f' fixes the scale, and every other solution is a rescaled copy.
"""

import numpy as np

from topfer import series_coefficients, series_eval, solve_toepfer
from topfer.blasius import BOYD_LAMBDA

# The classical hand computation: RK4 with step 0.1, truncated boundary at 4 and 6.
hist = solve_toepfer(checkpoints=(4.0, 6.0), agreement_tol=1e-3, integrator="fixed", step=0.1)
for eta_star, lam in hist.lambda_checkpoints:
    print(f"RK4, eta* = {eta_star:4.1f}: lambda = {lam:.10f}")

# With an adaptive pair the truncation error is the only thing left.
sol = solve_toepfer()
print(f"\nadaptive: lambda = {sol.lam:.15f}  (error {sol.lam - BOYD_LAMBDA:+.1e})")

# the physical profile, a few rows
prof = sol.physical
print("\n   eta        f         f'        f''")
for i in np.linspace(0, len(prof) - 1, 8).astype(int):
    print("  ".join(f"{v:8.5f}" for v in prof[i]))

# Near the wall the power series f = sum C_n eta**n is an independent check.
s = series_coefficients(sol.lam, 26)
row = prof[np.argmin(np.abs(prof[:, 0] - 1.0))]
print(f"\nat eta = {row[0]:.6f}")
print("  series ", np.array(series_eval(s, row[0])))
print("  numeric", row[1:])
