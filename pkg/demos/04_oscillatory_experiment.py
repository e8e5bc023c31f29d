# %% [markdown]
# # A complex, oscillatory coefficient
#
# f(t) = -2 pi i (0.1 + cos(6 pi (t+1)) + cos(12 pi (t+1))) needs about 75
# terms, and the solution is oscillatory enough that 601 unknowns are used.
# The trusted count L = M - K - 1 tracks where the coefficient errors start
# to grow.

# %%
import time

import numpy as np

from starode import SolveConfig, error_report, parse, solve_ode

text = "-2*pi*i*(0.1+cos(6*pi*(t+1))+cos(12*pi*(t+1)))"
t0 = time.perf_counter()
r = solve_ode(parse(text), SolveConfig(M=601))
print(f"solve: {time.perf_counter() - t0:.2f} s   N = {r.N}, K = {r.K}, L = {r.L}")

# %%
e = error_report(r)
good = int(np.argmax(e.coeff_errors > 1e-7))
print("first coefficient with error above 1e-7:", good)
print("worst error over the trusted prefix:", e.coeff_errors[: r.L].max())

# %% grid error of the partial sums decays, then plateaus
for n in (100, 200, 300, 350, 380, r.L - 1):
    print(f"n = {n:3d}: {e.inf_norm_error[n]:.2e}")

# %% |u(t)| = exp(Re A(t)) = 1 here since f is purely imaginary
grid = np.linspace(-1, 1, 7)
print(np.round(np.abs(r(grid)), 12))
