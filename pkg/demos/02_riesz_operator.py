# %% [markdown]
# # The discrete Riesz operator
#
# The spatial operator is a symmetric Toeplitz matrix acting on interior
# nodes. At alpha = 2 it is the familiar three-point Laplacian; for
# 1 < alpha < 2 it is a dense, negative-definite matrix.

# %%
import numpy as np

from tempered_wave.operators import apply, assemble_riesz, definiteness_check
from tempered_wave.problems import exact_riesz_of_manufactured

op = assemble_riesz(2.0, 4, 0.25)
print("alpha = 2, M = 4:\n", op.dense())

# %% First row for a fractional order
op = assemble_riesz(1.5, 8, 1 / 8)
print("first row of A_alpha:", op.matrix.first_row)

# %% Negative definiteness
rep = definiteness_check(assemble_riesz(1.5, 64, 1 / 64), trials=200)
print(rep)

# %% Consistency on u = x^2 (1 - x)^2. The error is second order away from
# the boundary; next to x = 0 and x = 1 it is limited by the boundary layer.
for M in (64, 128, 256):
    x = np.arange(1, M) / M
    err = np.abs(apply(assemble_riesz(1.5, M, 1 / M), x**2 * (1 - x) ** 2)
                 - exact_riesz_of_manufactured(x, 1.5))
    band = (x >= 0.25) & (x <= 0.75)
    print(f"M={M:4d}  interior max error={err[band].max():.3e}  global max={err.max():.3e}")
