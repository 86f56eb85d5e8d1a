"""Variational functionals of sampled trajectories.

Every functional is exact on the sampled grid: sups over times are taken
over the sample times only, which bounds the continuum quantity from below.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

__all__ = [
    "Lq", "Trajectory", "LacunarySeq", "SignSeq", "InequalityCheck",
    "rho_variation", "rho_variation_paths", "oscillation", "short_variation", "jump_count",
    "jump_variation_inequality_check", "diff_transform",
    "diff_transform_maximal", "lacunarity_normalize", "dyadic_block",
]


@dataclass(frozen=True)
class Lq:
    """l^q norm on R^d values; q = inf allowed."""
    q: float = 2.0
    d: Optional[int] = None

    def __post_init__(self):
        if not self.q >= 1:
            raise ValueError("q must be >= 1")


ABS = "abs"


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    values: np.ndarray
    norm: object = ABS

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("a trajectory needs at least one sample")
        if v.shape[0] != t.size or v.ndim > 2:
            raise ValueError("values must have shape (m,) or (m, d)")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if isinstance(self.norm, Lq) and self.norm.d is not None and v.ndim == 2 \
                and v.shape[1] != self.norm.d:
            raise ValueError("value dimension does not match the norm")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    @property
    def m(self) -> int:
        return self.times.size

    def restrict(self, mask) -> "Trajectory":
        return Trajectory(self.times[mask], self.values[mask], self.norm)

    def dist(self, i, j):
        """||g_j - g_i|| with broadcasting over index arrays."""
        diff = self.values[j] - self.values[i]
        return _norm(diff, self.norm, self.values.ndim)

    def pairwise(self) -> np.ndarray:
        v = self.values
        diff = v[None, :] - v[:, None]
        return _norm(diff, self.norm, v.ndim)

    def to_csv(self, path) -> None:
        v = self.values.reshape(self.m, -1)
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["t"] + [f"v_{i + 1}" for i in range(v.shape[1])])
            for t, row in zip(self.times, v):
                wr.writerow([repr(float(t))] + [repr(float(c)) for c in row])

    @classmethod
    def from_csv(cls, path, norm=ABS) -> "Trajectory":
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
        body = np.array(rows[1:], dtype=float)
        vals = body[:, 1] if body.shape[1] == 2 else body[:, 1:]
        return cls(body[:, 0], vals, norm)


def _norm(diff, norm, ndim):
    if ndim == 1:
        return np.abs(diff)
    q = norm.q if isinstance(norm, Lq) else 2.0
    if math.isinf(q):
        return np.max(np.abs(diff), axis=-1)
    return np.sum(np.abs(diff) ** q, axis=-1) ** (1.0 / q)


def rho_variation(traj: Trajectory, rho: float) -> float:
    """max over increasing index chains of (sum ||g_{i_{l+1}} - g_{i_l}||^rho)^{1/rho}.

    S[j] = max(0, max_{i<j} S[i] + ||g_j - g_i||^rho); the sum is maximised
    directly, then the 1/rho power is taken once.
    """
    if traj.m == 0:
        raise ValueError("empty trajectory")
    if not rho >= 1:
        raise ValueError("rho must be >= 1")
    D = traj.pairwise() ** rho
    m = traj.m
    S = np.zeros(m)
    for j in range(1, m):
        S[j] = max(0.0, float(np.max(S[:j] + D[:j, j])))
    return float(np.max(S) ** (1.0 / rho))


def rho_variation_paths(values, rho: float) -> np.ndarray:
    """rho_variation of many scalar paths at once; values has shape (m, N), result (N,)."""
    v = np.asarray(values, dtype=float)
    if v.ndim != 2 or v.shape[0] == 0:
        raise ValueError("values must have shape (m, N) with m >= 1")
    if not rho >= 1:
        raise ValueError("rho must be >= 1")
    m = v.shape[0]
    S = np.zeros_like(v)
    for j in range(1, m):
        cand = S[:j] + np.abs(v[j] - v[:j]) ** rho
        S[j] = np.maximum(0.0, np.max(cand, axis=0))
    return np.max(S, axis=0) ** (1.0 / rho)


def oscillation(traj: Trajectory, brackets) -> float:
    """(sum_i max_{s', s'' in [t_{i+1}, t_i]} ||g(s') - g(s'')||^2)^{1/2}.

    Brackets are closed on the sample grid (both endpoints included).
    """
    b = np.asarray(brackets, dtype=float)
    if np.any(np.diff(b) >= 0):
        raise ValueError("brackets must be strictly decreasing")
    total = 0.0
    for hi, lo in zip(b[:-1], b[1:]):
        mask = (traj.times >= lo) & (traj.times <= hi)
        if mask.sum() < 2:
            continue
        sub = traj.restrict(mask)
        total += float(np.max(sub.pairwise())) ** 2
    return math.sqrt(total)


def dyadic_block(t):
    """k with t in (2^{-k}, 2^{-k+1}]."""
    t = np.asarray(t, dtype=float)
    mant, ex = np.frexp(t)  # t = mant 2^ex, mant in [0.5, 1)
    ceil_log2 = np.where(mant == 0.5, ex - 1, ex)
    return 1 - ceil_log2


def short_variation(traj: Trajectory) -> float:
    """(sum_k V_2(g restricted to (2^{-k}, 2^{-k+1}])^2)^{1/2}."""
    blocks = dyadic_block(traj.times)
    total = 0.0
    for k in np.unique(blocks):
        sub = traj.restrict(blocks == k)
        if sub.m >= 2:
            total += rho_variation(sub, 2.0) ** 2
    return math.sqrt(total)


def jump_count(traj: Trajectory, lambda_: float) -> int:
    """Maximal number of pairs s_1 < t_1 <= s_2 < t_2 <= ... with jumps > lambda.

    Greedy: close a pair at the first sample that differs by more than lambda
    from some sample since the last closing time, then restart there.
    """
    if not lambda_ > 0:
        raise ValueError("lambda must be positive")
    count, start = 0, 0
    for j in range(1, traj.m):
        d = traj.dist(np.arange(start, j), j)
        if np.any(d > lambda_):
            count += 1
            start = j
    return count


@dataclass(frozen=True)
class InequalityCheck:
    holds: bool
    lhs: float
    rhs: float
    slack: float
    holds_exponent_one: bool
    rhs_exponent_one: float


def jump_variation_inequality_check(traj: Trajectory, rho: float, lambda_: float) -> InequalityCheck:
    """lambda N_lambda^{1/rho} <= 2^{1+1/rho} V_rho, plus the stricter 2^1 V_rho form."""
    N = jump_count(traj, lambda_)
    V = rho_variation(traj, rho)
    lhs = lambda_ * N ** (1.0 / rho)
    rhs = 2.0 ** (1.0 + 1.0 / rho) * V
    rhs1 = 2.0 * V
    return InequalityCheck(lhs <= rhs, lhs, rhs, rhs - lhs, lhs <= rhs1, rhs1)


@dataclass(frozen=True)
class LacunarySeq:
    times: np.ndarray
    lambda_: float

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if not self.lambda_ > 1:
            raise ValueError("lacunarity constant must exceed 1")
        if t.ndim != 1 or t.size < 1 or np.any(t <= 0):
            raise ValueError("times must be positive")
        ratios = t[1:] / t[:-1]
        if np.any(ratios < self.lambda_ * (1 - 1e-12)):
            raise ValueError("sequence is not lambda-lacunary")
        object.__setattr__(self, "times", t)

    @classmethod
    def geometric(cls, t0: float, t1: float, lambda_: float) -> "LacunarySeq":
        k = int(math.floor(math.log(t1 / t0) / math.log(lambda_) + 1e-9))
        return cls(t0 * lambda_ ** np.arange(k + 1), lambda_)


@dataclass(frozen=True)
class SignSeq:
    v: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.v)
        if not np.all(np.isfinite(v)):
            raise ValueError("sign sequence must be finite")
        object.__setattr__(self, "v", v)

    @property
    def sup(self) -> float:
        return float(np.max(np.abs(self.v))) if self.v.size else 0.0


def _increments(traj: Trajectory):
    return traj.values[1:] - traj.values[:-1]


def diff_transform(traj: Trajectory, v, N1: int, N2: int):
    """sum_{j=N1}^{N2} v_j (g(t_{j+1}) - g(t_j)) over 0-based indices.

    N1 = N2 (a single increment) is accepted.
    """
    vv = v.v if isinstance(v, SignSeq) else np.asarray(v)
    m = traj.m
    if not 0 <= N1 <= N2 <= m - 2:
        raise IndexError(f"window ({N1}, {N2}) outside 0..{m - 2}")
    if vv.shape[0] < m - 1:
        raise IndexError("sign sequence shorter than the increments")
    inc = _increments(traj)
    w = vv[N1:N2 + 1]
    if inc.ndim == 2:
        return np.sum(w[:, None] * inc[N1:N2 + 1], axis=0)
    return np.sum(w * inc[N1:N2 + 1])


def diff_transform_maximal(traj: Trajectory, v) -> float:
    """sup over windows N1 <= N2 of ||T_N||, via prefix sums S_j (S_{-1} = 0).

    Real scalar paths need max S - min S; complex or vector paths take the
    max over pairs of prefix sums.
    """
    if traj.m < 2:
        raise ValueError("need at least two samples")
    vv = v.v if isinstance(v, SignSeq) else np.asarray(v)
    inc = _increments(traj)
    w = vv[: traj.m - 1]
    terms = w[:, None] * inc if inc.ndim == 2 else w * inc
    S = np.concatenate([np.zeros((1,) + terms.shape[1:], dtype=terms.dtype),
                        np.cumsum(terms, axis=0)])
    if S.ndim == 1 and not np.iscomplexobj(S):
        return float(np.max(S) - np.min(S))
    diff = S[None] - S[:, None]
    return float(np.max(_norm(diff, traj.norm, S.ndim) if S.ndim == 2 else np.abs(diff)))


def lacunarity_normalize(seq: LacunarySeq) -> LacunarySeq:
    """Insert geometric points so that every ratio lies strictly in (lambda, lambda^2).

    A gap of ratio r is cut into p equal geometric pieces with
    log r / (2 log lambda) < p < log r / log lambda.  Gaps for which no integer
    p exists (ratio exactly lambda, lambda^2, ...) force a smaller constant,
    which is returned in the new sequence.
    """
    t = seq.times
    lam = seq.lambda_
    for _ in range(200):
        L = math.log(lam)
        pieces = []
        ok = True
        for r in t[1:] / t[:-1]:
            lr = math.log(r)
            p = int(math.floor(lr / (2 * L))) + 1
            if not (lr / p > L * (1 + 1e-12) and lr / p < 2 * L * (1 - 1e-12)):
                ok = False
                break
            pieces.append(p)
        if ok:
            out = [t[0]]
            for a, b, p in zip(t[:-1], t[1:], pieces):
                if p > 1:
                    out.extend(a * (b / a) ** (np.arange(1, p) / p))
                out.append(b)
            return LacunarySeq(np.array(out), lam)
        lam = lam ** 0.95
    raise RuntimeError("could not normalise the lacunary sequence")
