"""
Normal and reverse flow
=======================

For beta_min < beta < 0 there are two solutions.  The reverse one has a
pocket of back flow near the wall (f' < 0).  A warm-started sweep walks
both branches toward the limit where they merge.
"""

import numpy as np

from topfer import sweep_beta
from topfer.falkner_skan import FalknerSkanCase, solve_case

betas = [-0.025, -0.05, -0.1, -0.15, -0.18, -0.195, -0.1988]
up = sweep_beta(betas, "normal")
down = sweep_beta(betas, "reverse")

print("   beta      normal     reverse")
for a, b in zip(up, down):
    print(f"{a.beta:8.4f}  {a.fpp0:10.6f}  {b.fpp0:10.6f}")

# where does the back flow sit?
prof = solve_case(FalknerSkanCase(-0.15, "reverse")).physical
back = prof[prof[:, 2] < 0]
print(f"\nbeta = -0.15 reverse: f' < 0 on ({back[0, 0]:.3f}, {back[-1, 0]:.3f}), min f' = {back[:, 2].min():.4f}")

# near the limit the gap closes like sqrt(beta - beta_min)
gap = np.array([a.fpp0 - b.fpp0 for a, b in zip(up, down)])
print("gap**2 for the last three:", np.round(gap[-3:] ** 2, 8))
