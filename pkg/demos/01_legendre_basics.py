# %% [markdown]
# # Orthonormal Legendre polynomials
#
# The basis is p_k = sqrt((2k+1)/2) P_k, so the integral of p_k p_l over
# [-1, 1] is the Kronecker delta. This script checks that, fits a few
# functions adaptively and looks at the antiderivative map.

# %%
import numpy as np

from starode import antiderivative, eval_poly, eval_series, fit_series, gauss_nodes, tail_bound
from starode.legendre import vander

# %% Gauss rule and orthonormality
x, w = gauss_nodes(40)
V = vander(x, 30)
gram = (V * w[:, None]).T @ V
print("max |<p_k, p_l> - delta_kl| for k, l < 30:", np.abs(gram - np.eye(30)).max())

# %% the sup of |p_k| is reached at the endpoints
for k in (0, 1, 5, 20):
    print(f"p_{k}(1) = {eval_poly(k, 1.0):.6f}   sqrt((2k+1)/2) = {np.sqrt((2 * k + 1) / 2):.6f}")

# %% adaptive fits; the length is the number of retained coefficients
for name, f in [("cos(4t)", lambda t: np.cos(4 * t)), ("exp(t)", np.exp),
                ("1/(1+25t^2)", lambda t: 1 / (1 + 25 * t**2))]:
    s = fit_series(f)
    grid = np.linspace(-1, 1, 1001)
    err = np.abs(eval_series(s, grid) - f(grid)).max()
    print(f"{name:>12}: N = {len(s):4d}   grid error = {err:.1e}")

# %% coefficients decay until they hit rounding level
s = fit_series(lambda t: np.cos(4 * t))
weighted = np.abs(s.coeffs) * np.sqrt((2 * np.arange(len(s)) + 1) / 2)
print(np.array2string(weighted, precision=1, max_line_width=90))

# %% uniform error bound from the tail of the series
grid = np.linspace(-1, 1, 1000)
for n in (6, 10, 14):
    actual = np.abs(eval_series(s.truncate(n), grid) - eval_series(s, grid)).max()
    print(f"n = {n:2d}: bound {tail_bound(s, n):.2e} >= actual {actual:.2e}")

# %% antiderivative: A(t) = int_{-1}^t f, one term longer, A(-1) = 0
A = antiderivative(s)
print("A(-1) =", abs(eval_series(A, -1.0)))
print("A(1) - sin(4)/2 =", abs(eval_series(A, 1.0) - np.sin(4) / 2))
