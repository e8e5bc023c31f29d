# %% [markdown]
# # The star-product as a matrix product
#
# A kernel f(t) Theta(t - s) is stored by its double Legendre coefficients.
# Those coefficients come from integrals of three Legendre polynomials,
# and every f is a combination of the fixed banded matrices B^(d).

# %%
import numpy as np

from starode import (
    LegendreSeries,
    basis_matrix,
    coeff_matrix,
    heaviside_matrix,
    identity_matrix,
    numerical_bandwidth,
    triple_product,
)

# %% selection rules make most triple products exactly zero
print("P(1,1,1) =", triple_product(1, 1, 1), "  (odd sum)")
print("P(0,7,7) =", triple_product(0, 7, 7), "  (1/sqrt 2)")
print("P(1,1,2) =", triple_product(1, 1, 2), "  (2/sqrt 10)")
print("P(1,2,5) =", triple_product(1, 2, 5), "  (triangle fails)")

# %% B^(d) has bandwidth exactly d + 1
for d in range(5):
    B = basis_matrix(d, 24)
    print(f"d = {d}: measured band {numerical_bandwidth(B, 1e-300)}, declared {B.bandwidth}")

# %% Heaviside matrix: tridiagonal, leading block
H = heaviside_matrix(6)
print(np.array2string(H.entries, precision=4, suppress_small=True))

# %% Theta * Theta = (t - s) Theta
# Multiplying a kernel by t (or s) acts on its row (or column) index through
# the tridiagonal Jacobi matrix J, so (t - s) Theta has coefficients J H - H J.
M = 16
H = heaviside_matrix(M)
k = np.arange(M - 1)
J = np.diag((k + 1) / np.sqrt((2 * k + 1) * (2 * k + 3)), 1)
J = J + J.T
ramp = J @ H.entries - H.entries @ J
HH = (H @ H).entries
print("leading 8x8 block of H H - (J H - H J):", np.abs(HH[:8, :8] - ramp[:8, :8]).max())
print(np.array2string(HH[:4, :4], precision=5, suppress_small=True))

# %% the identity is the delta distribution
F = coeff_matrix(LegendreSeries([0.3, 0.2, -0.1]), M)
print("F @ I == F:", np.array_equal((F @ identity_matrix(M)).entries, F.entries))
