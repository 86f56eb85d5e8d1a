"""Splitting operators into a local part near the diagonal and a global remainder.

Pairs (x, y) are local when |x - y| < n delta min(1, 1/|x|).
Local plus global reproduces the full operator; the share of global pairs
drops to 0 as delta grows.

Run:  python3 demos/04_localglobal.py
"""

from iglab.lab.config import from_dict, load
from iglab.lab.diag import global_fraction_vs_delta, riesz_local_constant, run_localglobal_diag

cfg = from_dict(load("demos/configs/localglobal.json"))
rows, local_share = run_localglobal_diag(cfg)
print(f"{len(rows)} functions, local pair share {local_share:.3f}, "
      f"max partition error {max(r.max_partition_error for r in rows):.1e}")
for r in rows[:3]:
    print(f"  f{r.function_id}: full {r.full_norm:.4f}  local {r.local_norm:.4f}  global {r.global_norm:.4f}")

for delta, frac in global_fraction_vs_delta(cfg, [0.5, 1, 2, 5, 20]):
    print(f"delta={delta:<5} global pair fraction {frac:.3f}")

fit = riesz_local_constant(n=1, delta=cfg.delta, seed=cfg.seed)
print(f"fitted local Riesz-difference constants {[round(c, 3) for c in fit.constants]}, spread {fit.spread:.2f}")
