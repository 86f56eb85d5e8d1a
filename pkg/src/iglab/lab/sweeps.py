"""Empirical boundedness probes: L^p and weak-(1,1) ratios of path functionals.

For each corpus function f the chosen operator family is sampled along a
time (or truncation) grid at every spatial node, a path functional is applied
pointwise, and the L^p(gamma_{-1}) norm of the result is compared with that
of f on the same grid.  Boundedness is probed by the stability of the
largest ratio across seeds and grid refinements.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..measure import GridFunction, legendre_grid, lp_norm, weak_l1_quasinorm
from ..pathops import (LacunarySeq, SignSeq, Trajectory, jump_count, oscillation,
                       rho_variation_paths, short_variation)
from ..quad import panels
from .config import ConfigError, ExperimentConfig
from .corpus import Bump, evaluate_any, make_corpus, shrinking_bumps
from .flows import RieszShells, conj_flow, heat_flow, poisson_flow
from .parallel import pmap

_SEMIGROUP_OF = {"heat": "HeatA", "poisson": "PoissonA",
                 "heat_euclid": "HeatEuclid", "poisson_euclid": "PoissonEuclid"}


@dataclass
class SweepRow:
    function_id: int
    kind: str
    input_norm: float
    output_norm: float
    ratio: float  # nan when skipped
    status: str  # ok | skipped | partial
    failed_points: int = 0


@dataclass
class SweepReport:
    rows: list
    meta: dict = field(default_factory=dict)

    @property
    def ratios(self) -> np.ndarray:
        return np.array([r.ratio for r in self.rows if r.status != "skipped"])

    @property
    def max_ratio(self) -> float:
        r = self.ratios
        return float(np.max(r)) if r.size else math.nan

    @property
    def median_ratio(self) -> float:
        r = self.ratios
        return float(np.median(r)) if r.size else math.nan

    def summary(self) -> dict:
        return {"max_ratio": self.max_ratio, "median_ratio": self.median_ratio,
                "functions": len(self.rows),
                "skipped": sum(r.status == "skipped" for r in self.rows),
                "failed_points": sum(r.failed_points for r in self.rows), **self.meta}


# ------------------------------------------------------------------ grids

def spatial_grid(cfg: ExperimentConfig, refinement: int = 1):
    return legendre_grid(cfg.n, cfg.grid.count * refinement, cfg.grid.extent)


def graded_grid(n: int, center, width: float, extent: float, per_panel: int = 8):
    """Tensor grid on [-extent, extent]^n with panels shrinking geometrically
    towards `center` down to width/8, so narrow bumps stay resolved."""
    axes = []
    for c in center:
        edges = {-extent, extent}
        h = width / 8.0
        while h < 2 * extent:
            for e in (c - h, c + h):
                if -extent < e < extent:
                    edges.add(e)
            h *= 2.0
        if -extent < c < extent:
            edges.add(c)
        axes.append(panels(np.array(sorted(edges)), per_panel))
    import itertools
    pts = np.array(list(itertools.product(*[a[0] for a in axes])))
    wts = np.prod(np.array(list(itertools.product(*[a[1] for a in axes]))), axis=1)
    return pts, wts


# ------------------------------------------------------------ trajectories

class TrajectoryBuilder:
    """Samples one operator family on fixed parameter and spatial grids."""

    def __init__(self, cfg: ExperimentConfig, family: str, x, params):
        self.cfg, self.family, self.x = cfg, family, x
        self.params = np.asarray(params, dtype=float)
        self.quad = cfg.quadrature.build()
        self._shells = None
        if family == "truncriesz":
            self._shells = RieszShells(x, self.params, cfg.component, quad=self.quad)

    def __call__(self, f) -> np.ndarray:
        fam, x, ts = self.family, self.x, self.params
        if fam in ("heat", "heat_euclid"):
            return heat_flow(f, _SEMIGROUP_OF[fam], ts, x, self.cfg.alpha, self.quad)
        if fam in ("poisson", "poisson_euclid"):
            return poisson_flow(f, _SEMIGROUP_OF[fam], ts, x, self.cfg.alpha, self.quad)
        if fam == "conj":
            return conj_flow(f, self.cfg.component, ts, x, self.quad)
        if fam == "truncriesz":
            return self._shells.flow(lambda y: evaluate_any(f, y))
        raise ConfigError(f"unknown family {fam!r}")


def parameter_grid(cfg: ExperimentConfig, family: str, refinement: int = 1):
    spec = cfg.truncation_grid if family == "truncriesz" else cfg.time_grid
    return spec.points(refinement)


def apply_functional(cfg: ExperimentConfig, params, values) -> np.ndarray:
    """Pointwise path functional of trajectories values[:, j] sampled at params."""
    if cfg.functional == "variation":
        return rho_variation_paths(values, cfg.rho)
    out = np.empty(values.shape[1])
    for j in range(values.shape[1]):
        tr = Trajectory(params, values[:, j])
        if cfg.functional == "jump":
            out[j] = cfg.jump_lambda * jump_count(tr, cfg.jump_lambda) ** (1.0 / cfg.rho)
        elif cfg.functional == "oscillation":
            out[j] = oscillation(tr, params[::-1])
        else:
            out[j] = short_variation(tr)
    return out


def _row(fid, f, x, w, out, p) -> SweepRow:
    kind = "bump" if isinstance(f, Bump) else "expansion"
    fin = GridFunction(x, evaluate_any(f, x), w)
    ok = np.isfinite(out)
    failed = int(np.sum(~ok))
    nin = lp_norm(fin, p)
    if failed == out.size:
        return SweepRow(fid, kind, nin, math.nan, math.nan, "skipped", failed)
    nout = lp_norm(GridFunction(x[ok], out[ok], w[ok]), p)
    if nin == 0:
        return SweepRow(fid, kind, nin, nout, math.nan, "skipped", failed)
    return SweepRow(fid, kind, nin, nout, nout / nin, "partial" if failed else "ok", failed)


def _meta(cfg, started, **extra):
    return {"config_hash": cfg.hash(), "runtime_s": time.perf_counter() - started,
            "tolerances": dict(cfg.tolerances), "quadrature": cfg.to_dict()["quadrature"], **extra}


# ---------------------------------------------------------------- sweeps

def run_variation_sweep(cfg: ExperimentConfig, family: str | None = None,
                        seed: int | None = None, refinement: int = 1, corpus=None) -> SweepReport:
    started = time.perf_counter()
    family = family or cfg.family
    seed = cfg.seed if seed is None else seed
    corpus = corpus if corpus is not None else make_corpus(
        cfg.n, cfg.corpus.size, seed, cfg.corpus.max_degree, cfg.corpus.bump_fraction)
    if len(corpus) == 0:
        raise ConfigError("corpus is empty")
    x, w = spatial_grid(cfg, refinement)
    params = parameter_grid(cfg, family, refinement)
    build = TrajectoryBuilder(cfg, family, x, params)

    def one(item):
        fid, f = item
        with np.errstate(all="ignore"):
            out = apply_functional(cfg, params, build(f))
        return _row(fid, f, x, w, out, cfg.p)

    rows = pmap(one, enumerate(corpus))
    return SweepReport(rows, _meta(cfg, started, family=family, seed=seed, refinement=refinement,
                                   functional=cfg.functional))


def sign_sequence(kind: str, length: int, seed: int) -> SignSeq:
    if kind == "ones":
        return SignSeq(np.ones(length))
    if kind == "alternating":
        return SignSeq((-1.0) ** np.arange(length))
    return SignSeq(np.random.default_rng(10_000 + seed).choice([-1.0, 1.0], size=length))


def lacunary_sequence(cfg: ExperimentConfig, refinement: int = 1) -> LacunarySeq:
    """The configured sequence (validated) or a geometric one over time_grid.range."""
    d = cfg.difftransform
    try:
        if d.times is not None:
            return LacunarySeq(np.array(d.times, dtype=float), d.lacunary_lambda)
        lo, hi = cfg.time_grid.range
        return LacunarySeq.geometric(lo, hi, d.lacunary_lambda ** (1.0 / refinement))
    except ValueError as exc:
        raise ConfigError(f"difftransform sequence rejected: {exc}") from exc


def maximal_diff_transform(values, v) -> np.ndarray:
    """sup over windows of |sum v_j (g_{j+1} - g_j)| for many scalar paths (columns)."""
    inc = np.diff(values, axis=0)
    S = np.concatenate([np.zeros((1, values.shape[1])), np.cumsum(v[:inc.shape[0], None] * inc, axis=0)])
    return np.max(S, axis=0) - np.min(S, axis=0)


def run_difftransform_sweep(cfg: ExperimentConfig, semigroup: str | None = None,
                            v: SignSeq | None = None, seq: LacunarySeq | None = None,
                            seed: int | None = None, refinement: int = 1, corpus=None) -> SweepReport:
    started = time.perf_counter()
    semigroup = semigroup or cfg.difftransform.semigroup
    seed = cfg.seed if seed is None else seed
    seq = seq or lacunary_sequence(cfg, refinement)
    ts = seq.times
    if ts.size < 2:
        raise ConfigError("lacunary sequence needs at least two times")
    v = v or sign_sequence(cfg.difftransform.signs, ts.size - 1, seed)
    if v.v.shape[0] < ts.size - 1:
        raise ConfigError("sign sequence shorter than the increments")
    corpus = corpus if corpus is not None else make_corpus(
        cfg.n, cfg.corpus.size, seed, cfg.corpus.max_degree, cfg.corpus.bump_fraction)
    if len(corpus) == 0:
        raise ConfigError("corpus is empty")
    x, w = spatial_grid(cfg, refinement)
    quad = cfg.quadrature.build()
    flow = heat_flow if semigroup in ("HeatA", "HeatEuclid") else poisson_flow

    def one(item):
        fid, f = item
        with np.errstate(all="ignore"):
            vals = flow(f, semigroup, ts, x, cfg.alpha, quad)
            out = maximal_diff_transform(vals, v.v)
        return _row(fid, f, x, w, out, cfg.p)

    rows = pmap(one, enumerate(corpus))
    return SweepReport(rows, _meta(cfg, started, family=f"difftransform:{semigroup}", seed=seed,
                                   refinement=refinement, sequence_length=int(ts.size),
                                   lacunary_lambda=seq.lambda_))


# ----------------------------------------------------- stability and weak-(1,1)

@dataclass
class StabilityResult:
    table: list  # (seed, refinement, max_ratio, median_ratio)
    spread: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.spread) and self.spread < self.threshold)


def stability(cfg: ExperimentConfig, runner, **kw) -> StabilityResult:
    """Max ratio for every (seed, refinement) pair and its max/min spread."""
    table = []
    for r in cfg.refinements:
        for s in cfg.seeds:
            rep = runner(cfg, seed=s, refinement=r, **kw)
            table.append((s, r, rep.max_ratio, rep.median_ratio))
    mx = np.array([t[2] for t in table])
    spread = float(np.max(mx) / np.min(mx)) if np.all(mx > 0) else math.inf
    return StabilityResult(table, spread, cfg.spread_threshold)


@dataclass
class WeakRow:
    width: float
    input_l1: float
    output_weak: float
    ratio: float


def run_weak_sweep(cfg: ExperimentConfig, kind: str = "variation",
                   family: str | None = None, semigroup: str | None = None):
    """Weak-(1,1) ratios ||Of||_{L^{1,inf}} / ||f||_{L^1} over L^1-normalised shrinking bumps.

    kind "variation" uses the configured path functional of `family`;
    kind "difftransform" uses the maximal differential transform of `semigroup`.
    """
    family = family or cfg.family
    semigroup = semigroup or cfg.difftransform.semigroup
    center = cfg.weak.center if cfg.weak.center is not None else (0.5,) * cfg.n
    if len(center) != cfg.n:
        raise ConfigError("weak.center must have n entries")
    quad = cfg.quadrature.build()
    lo, hi = cfg.weak.time_range
    rows = []
    for b in shrinking_bumps(cfg.n, center, cfg.weak.widths):
        x, w = graded_grid(cfg.n, center, b.width, cfg.grid.extent, cfg.weak.per_panel)
        with np.errstate(all="ignore"):
            if kind == "variation":
                if family == "truncriesz":
                    params = cfg.truncation_grid.points()
                else:
                    params = np.geomspace(lo, hi, cfg.time_grid.count)
                out = apply_functional(cfg, params, TrajectoryBuilder(cfg, family, x, params)(b))
            else:
                seq = LacunarySeq.geometric(lo, hi, cfg.difftransform.lacunary_lambda)
                flow = heat_flow if semigroup in ("HeatA", "HeatEuclid") else poisson_flow
                vals = flow(b, semigroup, seq.times, x, cfg.alpha, quad)
                v = sign_sequence(cfg.difftransform.signs, seq.times.size - 1, cfg.seed)
                out = maximal_diff_transform(vals, v.v)
        ok = np.isfinite(out)
        weak = weak_l1_quasinorm(GridFunction(x[ok], out[ok], w[ok]))
        l1 = b.l1_gamma()
        rows.append(WeakRow(b.width, l1, weak, weak / l1))
    ratios = np.array([r.ratio for r in rows])
    spread = float(ratios.max() / ratios.min()) if np.all(ratios > 0) else math.inf
    return rows, spread
