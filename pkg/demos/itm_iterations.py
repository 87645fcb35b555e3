"""
The iterative transformation method, step by step
=================================================

Falkner-Skan f''' + f f'' + beta (1 - f'^2) = 0 is not scaling invariant.
Embedding an extra parameter h restores the invariance; a secant search on
h* then finds the value that maps back to h = 1.  Each iterate is one
initial value problem.
"""

from topfer import FalknerSkanCase, solve_case
from topfer.falkner_skan import default_config
from topfer.tables import iterations_table

# normal flow, seeds 5 and 10
res = solve_case(FalknerSkanCase(-0.01, "normal", default_config("normal", h0=5.0, h1=10.0)))
print("beta = -0.01, normal flow")
print(iterations_table(res.iterations))
print(f"f''(0) = {res.fpp0:.6f}, lambda = {res.lam:.6f}, h* = {res.h_star_root:.6f}\n")

# The reverse branch starts from f*''(0) = -1 and needs larger seeds here.
res = solve_case(FalknerSkanCase(-0.01, "reverse", default_config("reverse", h0=75.0, h1=150.0)))
print("beta = -0.01, reverse flow")
print(iterations_table(res.iterations))
print(f"f''(0) = {res.fpp0:.6f}")

# A seed that blows up only costs one iterate: Gamma = -1 pushes the secant back.
res = solve_case(FalknerSkanCase(-0.1, "reverse", default_config("reverse", h0=1e-3, h1=25.0)))
print("\nbeta = -0.1, reverse flow from a bad first seed")
print(iterations_table(res.iterations))
