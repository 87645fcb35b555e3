"""
Locating beta_min
=================

Below beta_min no solution exists and the secant iterates for h* run away.
Continuing both branches downward and fitting f''(0)**2 ~ beta - beta_min
to the last converged points homes in on the limit in a handful of solves.
"""

import time

from topfer import find_beta_min

t0 = time.perf_counter()
res = find_beta_min(threshold=1e-5)
print(f"done in {time.perf_counter() - t0:.1f} s")

for beta, ok in res.probes:
    print(f"  probe {beta:.12f}  {'converged' if ok else 'no solution'}")

print(f"\nbeta_min ~ {res.beta_min:.9f}")
print(f"f''(0) at the last converged probe: {res.fpp0_normal:.2e} (normal), {res.fpp0_reverse:.2e} (reverse)")
