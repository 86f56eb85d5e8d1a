"""Kernels of the inverse-Gaussian heat and Poisson semigroups.

Run:  python3 demos/01_kernels.py
"""

import numpy as np

from iglab import kernels as K
from iglab.frac import frac_kernel_dt
from iglab.kernels import KernelSpec
from iglab.quad import QuadratureConfig

x, y = np.array([0.4, -0.3]), np.array([1.0, 0.2])

# The heat kernel is explicit; the Poisson kernel is its subordination.
for t in (0.1, 0.5, 2.0):
    heat = float(K.heat_kernel_A(t, x, y))
    poisson = float(np.ravel(K.poisson_kernel_A(t, x[None], y[None]))[0])
    print(f"t={t:<4}  T_t^A={heat:.6e}  P_t^A={poisson:.6e}")

# Time derivatives from the Stirling/Hermite expansion agree with a plain
# central difference up to its O(h^2) error.
t, h = 0.7, 1e-4
for k in range(1, 4):
    exact = float(K.heat_A_dt(k, t, x, y))
    print(f"d_t^{k} T_t^A = {exact:+.8e}")
fd = (float(K.heat_kernel_A(t + h, x, y)) - float(K.heat_kernel_A(t - h, x, y))) / (2 * h)
print(f"central difference of order 1: {fd:+.8e}")

# Fractional time derivatives t^alpha d_t^alpha, here for the Euclidean heat kernel.
spec = KernelSpec("HeatEuclid", 2)
q = QuadratureConfig(node_count=40)
for alpha in (0.5, 1.0, 1.5):
    print(f"alpha={alpha}: t^a d_t^a T_t(x-y) = {frac_kernel_dt(spec, alpha, 0.8, x, y, q):+.6e}")

# The first Riesz kernel is singular on the diagonal and odd in x - y (Euclidean case).
print("R_1(x, y) =", float(np.ravel(K.riesz_kernel_euclid_closed(1, x, y))[0]))
print("R_1(y, x) =", float(np.ravel(K.riesz_kernel_euclid_closed(1, y, x))[0]))
