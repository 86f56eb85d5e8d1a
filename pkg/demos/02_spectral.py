"""Operators acting diagonally on the Hermite-type basis H~_k = H_k e^{-|x|^2}.

Run:  python3 demos/02_spectral.py
"""

import numpy as np

from iglab.spectral import (ConjA, HeatA, PoissonA, RieszA, SpectralFunction, apply_spectral,
                            evaluate, expand)

f = SpectralFunction(1, {(0,): 1.0, (2,): -0.5, (3,): 0.25}, 3)
x = np.linspace(-2, 2, 5)[:, None]
print("f(x)       :", np.round(evaluate(f, x), 6))
print("T_1 f(x)   :", np.round(evaluate(apply_spectral(HeatA(1.0), f), x), 6))
print("P_1 f(x)   :", np.round(evaluate(apply_spectral(PoissonA(1.0), f), x), 6))

# The Riesz transform raises the degree by one; conjugation tends to it as t -> 0.
R1 = apply_spectral(RieszA(1), f)
print("R_1 f terms:", {k: round(c, 6) for k, c in R1.terms.items()})
for t in (1e-1, 1e-2, 1e-4):
    C = apply_spectral(ConjA(1, t), f)
    gap = np.max(np.abs(evaluate(C, x) - evaluate(R1, x))) / np.max(np.abs(evaluate(R1, x)))
    print(f"|C_t f - R_1 f| / |R_1 f| at t={t:g}: {gap:.2e}")

# Recover coefficients of a sampled function w.r.t. the basis.
g = expand(lambda z: np.exp(-z[..., 0] ** 2) * (1 + z[..., 0]), n=1, max_degree=4)
print("expansion of (1+x)e^{-x^2}:", {k: round(c, 8) for k, c in g.terms.items() if abs(c) > 1e-12})
