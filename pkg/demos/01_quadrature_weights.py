# %% [markdown]
# # Tempered quadrature weights
#
# The memory term is approximated by a discrete convolution
# ``tau**beta * sum_k l_k u(t_{n-k})``. This script computes the weights,
# compares the closed form with a direct series expansion of the generating
# function, and checks the quadrature order on a smooth test function.

# %%
import math

import numpy as np

from tempered_wave.analysis import tempered_integral, tempered_integral_reference
from tempered_wave.kernels import tempered_coeffs, tempered_coeffs_oracle

beta, lam, tau = 0.7, 0.1, 1 / 40
c = tempered_coeffs(beta, lam, tau, 512)
print("first weights:", c.l[:5])
print("l_0 == (3/2)**-beta:", c.l[0] == 1.5**-beta)

# %% For beta = 1 and no tempering the weights are 1 - 3**-(k+1)
k = np.arange(6)
print(tempered_coeffs(1.0, 0.0, 1.0, 6).l)
print(1 - 3.0 ** -(k + 1))

# %% Closed form against the series-product expansion
oracle = tempered_coeffs_oracle(beta, lam, tau, 512)
print("max relative deviation:", np.max(np.abs(c.l - oracle.l) / oracle.l))

# %% Second-order accuracy for v(t) = t^3 e^{-t} at T = 1
ref = tempered_integral_reference(lambda s: s**3 * math.exp(-s), 1.0, beta, lam)
prev = None
for N in (32, 64, 128, 256):
    err = abs(tempered_integral(lambda t: t**3 * np.exp(-t), 1.0, beta, lam, N) - ref)
    print(f"N={N:4d}  error={err:.3e}" + ("" if prev is None else f"  ratio={prev / err:.3f}"))
    prev = err
