"""Empirical boundedness: L^p ratios of variation operators across seeds and grids.

The ratio ||V_rho(T_t^A f)||_p / ||f||_p over a random corpus should stay
roughly constant as seeds and grid refinement change.  The same is run for
the maximal differential transform along a lacunary time sequence.

Run:  python3 demos/03_sweeps.py
"""

from iglab.lab.config import load, from_dict
from iglab.lab.sweeps import run_difftransform_sweep, run_variation_sweep, stability

cfg = from_dict(load("demos/configs/sweep_small.json"))
for family in ("heat", "poisson", "conj"):
    res = stability(cfg.with_(family=family), run_variation_sweep)
    print(f"{family:8s} max ratio per (seed, refinement):",
          [round(r[2], 3) for r in res.table], f"spread {res.spread:.2f}")

res = stability(cfg.with_(alpha=1.0), run_difftransform_sweep)
print("difftransform alpha=1 spread:", round(res.spread, 2))
