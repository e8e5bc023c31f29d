# %% [markdown]
# # u'(t) = cos(4t) u(t), u(-1) = 1
#
# The coefficient function needs about 22 Legendre terms, so F is banded with
# that width. One banded solve with 101 unknowns gives the solution
# coefficients, and the numerical band of the resolvent says how many are
# unaffected by truncation.

# %%
import numpy as np

from starode import SolveConfig, error_report, parse, solve_ode
from starode.linalg import numerical_bandwidth, trailing_bandwidth
from starode.solver import solution_operator

f = parse("cos(4*t)")
r = solve_ode(f, SolveConfig(M=101))
print(f"N = {r.N}, K = {r.K}, L = {r.L}, residual = {r.residual:.1e}")
print("timings (s):", {k: round(v, 4) for k, v in r.timings.items()})

# %% the band of U = H (I - F)^{-1}
from starode import coeff_matrix, heaviside_matrix

F = coeff_matrix(r.f_series, r.M)
U = solution_operator(F, heaviside_matrix(r.M))
print("band of F:", numerical_bandwidth(F))
print("trailing band of U:", trailing_bandwidth(U), "(K + 1)")
print("full band of U:", numerical_bandwidth(U), "(wider near the top-left corner)")

# %% compare with the exact solution exp(int cos(4t))
e = error_report(r)
print("max coefficient error on the first L:", e.coeff_errors[: r.L].max())
for n in (10, 20, 30, 40, 50, 60, 70):
    print(f"  n = {n:3d}: grid error {e.inf_norm_error[n]:.2e}")

# %% beyond L the computed coefficients stop tracking the true ones
for k in (r.L - 5, r.L, r.L + 10, r.M - 1):
    print(f"k = {k:3d}: |u_k| = {abs(r.u.coeffs[k]):.2e}  |diff| = {e.coeff_errors[k]:.2e}")
