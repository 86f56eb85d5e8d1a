"""Semigroups, kernels, fractional derivatives and variational path
functionals for the inverse Gaussian measure on R^n.

Core modules: special, quad, jets, measure, kernels, frac, spectral and
pathops.  The experiment layer (corpus, sweeps, diagnostics, verification
suites, CLI) lives in :mod:`iglab.lab`.
"""

__version__ = "0.1.0"
