"""Run configuration: JSON files parsed into validated dataclasses.

Every field has a default, so ``{}`` is a valid configuration.  Unknown keys
and out-of-range values raise :class:`ConfigError`, which the CLI maps to
exit code 2.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from typing import Optional

import numpy as np

from ..quad import JACOBI, SUBSTITUTION, QuadratureConfig


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Tensor Gauss-Legendre grid on [-extent, extent]^n, `count` nodes per axis."""
    extent: float = 5.0
    count: int = 48

    def validate(self):
        if not 0 < self.extent <= 8:
            raise ConfigError("grid.extent must lie in (0, 8]")
        if not 2 <= self.count <= 4096:
            raise ConfigError("grid.count must lie in [2, 4096]")


@dataclass(frozen=True)
class TimeGridSpec:
    range: tuple = (1e-3, 20.0)
    count: int = 64
    spacing: str = "geometric"

    def validate(self, name="time_grid"):
        lo, hi = self.range
        if not 0 < lo < hi:
            raise ConfigError(f"{name}.range must satisfy 0 < lo < hi")
        if not 2 <= self.count <= 4096:
            raise ConfigError(f"{name}.count must lie in [2, 4096]")
        if self.spacing not in ("geometric", "linear"):
            raise ConfigError(f"{name}.spacing must be 'geometric' or 'linear'")

    def points(self, refinement: int = 1) -> np.ndarray:
        lo, hi = self.range
        k = self.count * refinement
        return np.geomspace(lo, hi, k) if self.spacing == "geometric" else np.linspace(lo, hi, k)


@dataclass(frozen=True)
class CorpusSpec:
    size: int = 50
    max_degree: int = 6
    bump_fraction: float = 0.2

    def validate(self):
        if self.size < 1:
            raise ConfigError("corpus.size must be >= 1")
        if not 0 <= self.max_degree <= 40:
            raise ConfigError("corpus.max_degree must lie in [0, 40]")
        if not 0 <= self.bump_fraction <= 1:
            raise ConfigError("corpus.bump_fraction must lie in [0, 1]")


@dataclass(frozen=True)
class WeakSpec:
    """Shrinking-bump family for the weak-(1,1) probes."""
    widths: tuple = (0.4, 0.2, 0.1, 0.05, 0.025)
    center: Optional[tuple] = None
    time_range: tuple = (1e-4, 20.0)
    per_panel: int = 8

    def validate(self):
        if len(self.widths) < 1 or not all(0 < w < 1 for w in self.widths):
            raise ConfigError("weak.widths must lie in (0, 1)")
        lo, hi = self.time_range
        if not 0 < lo < hi:
            raise ConfigError("weak.time_range must satisfy 0 < lo < hi")
        if self.per_panel < 2:
            raise ConfigError("weak.per_panel must be >= 2")


@dataclass(frozen=True)
class DiffTransformSpec:
    semigroup: str = "HeatA"
    lacunary_lambda: float = 2.0
    times: Optional[tuple] = None  # explicit sequence; otherwise geometric over time_grid.range
    signs: str = "random"  # random | ones | alternating

    def validate(self):
        if self.semigroup not in ("HeatA", "PoissonA", "HeatEuclid", "PoissonEuclid"):
            raise ConfigError("difftransform.semigroup is not a known semigroup")
        if not self.lacunary_lambda > 1:
            raise ConfigError("difftransform.lacunary_lambda must exceed 1")
        if self.signs not in ("random", "ones", "alternating"):
            raise ConfigError("difftransform.signs must be random, ones or alternating")


@dataclass(frozen=True)
class QuadSpec:
    node_count: int = 16
    truncation: float = 50.0
    singularity_exponent_handling: str = SUBSTITUTION

    def build(self) -> QuadratureConfig:
        return QuadratureConfig(self.node_count, self.truncation, self.singularity_exponent_handling)

    def validate(self):
        if self.singularity_exponent_handling not in (SUBSTITUTION, JACOBI):
            raise ConfigError("quadrature.singularity_exponent_handling is unknown")
        try:
            self.build()
        except ValueError as exc:
            raise ConfigError(f"quadrature: {exc}") from exc


SWEEP_FAMILIES = ("heat", "poisson", "heat_euclid", "poisson_euclid", "truncriesz", "conj")
FUNCTIONALS = ("variation", "jump", "oscillation", "short")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str = "run"
    n: int = 1
    p: float = 2.0
    rho: float = 3.0
    alpha: float = 0.0
    family: str = "heat"
    component: int = 1
    functional: str = "variation"
    jump_lambda: float = 0.1
    seed: int = 0
    seeds: tuple = (0, 1, 2, 3, 4)
    refinements: tuple = (1, 2)
    spread_threshold: float = 10.0
    weak_mode: bool = False
    delta: float = 1.0
    diag_param: float = 0.1  # t (heat, poisson, conj) or eps (truncriesz) for local/global diagnostics
    grid: GridSpec = field(default_factory=GridSpec)
    time_grid: TimeGridSpec = field(default_factory=TimeGridSpec)
    truncation_grid: TimeGridSpec = field(default_factory=lambda: TimeGridSpec((1e-2, 5.0), 32))
    corpus: CorpusSpec = field(default_factory=CorpusSpec)
    weak: WeakSpec = field(default_factory=WeakSpec)
    difftransform: DiffTransformSpec = field(default_factory=DiffTransformSpec)
    quadrature: QuadSpec = field(default_factory=QuadSpec)
    tolerances: dict = field(default_factory=dict)
    outputs: dict = field(default_factory=dict)

    def validate(self) -> "ExperimentConfig":
        if self.n not in (1, 2, 3):
            raise ConfigError("n must be 1, 2 or 3")
        if not (1 < self.p < math.inf):
            raise ConfigError("p must satisfy 1 < p < inf (weak_mode covers p = 1)")
        if not self.rho > 2:
            raise ConfigError("rho must exceed 2")
        if not self.alpha >= 0:
            raise ConfigError("alpha must be >= 0")
        if self.family not in SWEEP_FAMILIES:
            raise ConfigError(f"family must be one of {SWEEP_FAMILIES}")
        if self.functional not in FUNCTIONALS:
            raise ConfigError(f"functional must be one of {FUNCTIONALS}")
        if not 1 <= self.component <= self.n:
            raise ConfigError("component must lie in 1..n")
        if self.family == "truncriesz" and self.n > 2:
            raise ConfigError("truncated Riesz sweeps support n <= 2")
        if not self.jump_lambda > 0:
            raise ConfigError("jump_lambda must be positive")
        if not self.delta > 0:
            raise ConfigError("delta must be positive")
        if not self.diag_param > 0:
            raise ConfigError("diag_param must be positive")
        if not self.spread_threshold > 1:
            raise ConfigError("spread_threshold must exceed 1")
        if len(self.seeds) < 1 or len(self.refinements) < 1 or any(r < 1 for r in self.refinements):
            raise ConfigError("seeds and refinements must be non-empty; refinements >= 1")
        for t in self.tolerances.values():
            if not (isinstance(t, (int, float)) and t > 0):
                raise ConfigError("tolerances must be positive numbers")
        self.grid.validate()
        self.time_grid.validate()
        self.truncation_grid.validate("truncation_grid")
        self.corpus.validate()
        self.weak.validate()
        self.difftransform.validate()
        self.quadrature.validate()
        return self

    # ------------------------------------------------------------ I/O
    def to_dict(self) -> dict:
        return _plain(asdict(self))

    def hash(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    def with_(self, **changes) -> "ExperimentConfig":
        d = self.to_dict()
        d.update(changes)
        return from_dict(d)


def _plain(obj):
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    return obj


_NESTED = {"grid": GridSpec, "time_grid": TimeGridSpec, "truncation_grid": TimeGridSpec,
           "corpus": CorpusSpec, "weak": WeakSpec, "difftransform": DiffTransformSpec,
           "quadrature": QuadSpec}


def _build(cls, data, where):
    if is_dataclass(data):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"{where} must be an object")
    names = {f.name: f for f in fields(cls)}
    unknown = set(data) - set(names)
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {sorted(unknown)}")
    kw = {}
    for k, v in data.items():
        if cls is ExperimentConfig and k in _NESTED:
            kw[k] = _build(_NESTED[k], v, k)
        elif isinstance(v, list):
            kw[k] = tuple(v)
        else:
            kw[k] = v
    try:
        return cls(**kw)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from exc


def from_dict(data: dict) -> ExperimentConfig:
    cfg = _build(ExperimentConfig, data, "config")
    try:
        return cfg.validate()
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def load(path) -> dict:
    """Raw JSON object from a file (ConfigError on unreadable or malformed input)."""
    if path is None:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return data
