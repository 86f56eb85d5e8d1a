"""Command-line entry point.

    iglab verify <suite>          --config cfg.json --out DIR
    iglab sweep variation         --config cfg.json --out DIR
    iglab sweep difftransform     --config cfg.json --out DIR
    iglab diag localglobal        --config cfg.json --out DIR
    iglab kernel eval             --config cfg.json --out DIR
    iglab traj ops                --config cfg.json --out DIR

Exit codes: 0 when every check passes, 1 on a tolerance failure, 2 on a
configuration error.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
import time

import numpy as np

from .config import ConfigError, from_dict, load

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _outdir(path):
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {path}: {exc}") from exc
    return path


def _experiment(args):
    return from_dict(load(args.config))


# ------------------------------------------------------------------ verify

def cmd_verify(args) -> int:
    from .io import write_jsonl
    from .verify import SUITES, run_verify
    if args.suite not in SUITES:
        raise ConfigError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    cfg = _experiment(args)
    out = _outdir(args.out)
    checks = run_verify(args.suite, cfg.tolerances, cfg.seed)
    write_jsonl(os.path.join(out, f"verify_{args.suite}.jsonl"), [c.as_dict() for c in checks])
    bad = [c for c in checks if not c.passed]
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'} {c.suite}: {c.check} error={c.error:.3e} tol={c.tolerance:.1e}")
    return EXIT_FAIL if bad else EXIT_OK


# ------------------------------------------------------------------- sweeps

def _write_stability(out, res, title):
    from .io import write_table
    from .svg import line_chart
    write_table(out, "stability", [list(r) for r in res.table])
    series = {}
    for s, r, mx, _ in res.table:
        series.setdefault(f"seed {s}", ([], []))
        series[f"seed {s}"][0].append(r)
        series[f"seed {s}"][1].append(mx)
    line_chart(series, os.path.join(out, "stability.svg"), title, "grid refinement", "max ratio")


def _write_rows(out, rep):
    from .io import write_table
    write_table(out, "sweep_rows", [[r.function_id, r.kind, r.input_norm, r.output_norm, r.ratio,
                                     r.status, r.failed_points] for r in rep.rows])


def _write_weak(out, rows, name="weak"):
    from .io import write_table
    from .svg import line_chart
    write_table(out, "weak", [[r.width, r.input_l1, r.output_weak, r.ratio] for r in rows], name)
    line_chart({"weak ratio": ([r.width for r in rows], [r.ratio for r in rows])},
               os.path.join(out, f"{name}.svg"), "weak-(1,1) ratio", "bump width", "ratio", logx=True)


def _sweep(args, kind) -> int:
    from .io import write_json
    from .sweeps import (run_difftransform_sweep, run_variation_sweep, run_weak_sweep,
                         stability, lacunary_sequence)
    cfg = _experiment(args)
    if kind == "difftransform":
        lacunary_sequence(cfg)  # reject a non-lacunary sequence before any computation
    out = _outdir(args.out)
    started = time.perf_counter()
    runner = run_variation_sweep if kind == "variation" else run_difftransform_sweep
    base = runner(cfg)
    _write_rows(out, base)
    res = stability(cfg, runner)
    _write_stability(out, res, f"{kind} sweep: max L^{cfg.p:g} ratio")
    summary = {"kind": kind, "base": base.summary(), "spread": res.spread,
               "spread_threshold": res.threshold, "stable": res.passed,
               "config_hash": cfg.hash(), "config": cfg.to_dict()}
    ok = res.passed
    if cfg.weak_mode:
        rows, spread = run_weak_sweep(cfg, kind)
        _write_weak(out, rows)
        summary["weak_spread"] = spread
        summary["weak_stable"] = bool(spread < cfg.spread_threshold)
        ok = ok and summary["weak_stable"]
    summary["runtime_s"] = time.perf_counter() - started
    write_json(os.path.join(out, "summary.json"), summary)
    print(f"{'PASS' if ok else 'FAIL'} sweep {kind}: max ratio {base.max_ratio:.4g}, "
          f"spread {res.spread:.3g} (threshold {res.threshold:g})")
    return EXIT_OK if ok else EXIT_FAIL


def cmd_sweep(args) -> int:
    return _sweep(args, args.kind)


# --------------------------------------------------------------------- diag

def cmd_diag(args) -> int:
    from .diag import (conj_global_constant, global_fraction_vs_delta, riesz_local_constant,
                       run_localglobal_diag)
    from .io import write_json, write_table
    cfg = _experiment(args)
    out = _outdir(args.out)
    tol = cfg.tolerances.get("partition", 1e-10)
    rows, local_fraction = run_localglobal_diag(cfg)
    write_table(out, "localglobal", [[r.function_id, r.input_norm, r.full_norm, r.local_norm,
                                      r.global_norm, r.max_partition_error] for r in rows])
    deltas = [cfg.delta * 10 ** k for k in range(4)]
    write_table(out, "delta_exhaustion", [list(d) for d in global_fraction_vs_delta(cfg, deltas)])
    fits = [riesz_local_constant(cfg.n, cfg.delta, seed=cfg.seed, component=cfg.component),
            conj_global_constant(cfg.n, seed=cfg.seed, component=cfg.component)]
    write_table(out, "fitted_constants", [[f.name, cfg.n, j, c] for f in fits
                                           for j, c in enumerate(f.constants)])
    part = max(r.max_partition_error for r in rows)
    ok = part < tol and all(f.stable(cfg.spread_threshold) for f in fits)
    write_json(os.path.join(out, "summary.json"), {
        "max_partition_error": part, "partition_tolerance": tol, "local_pair_fraction": local_fraction,
        "fitted_spreads": {f.name: f.spread for f in fits}, "config_hash": cfg.hash(), "passed": ok})
    print(f"{'PASS' if ok else 'FAIL'} diag localglobal: partition error {part:.2e}, "
          + ", ".join(f"{f.name} spread {f.spread:.3g}" for f in fits))
    return EXIT_OK if ok else EXIT_FAIL


# ------------------------------------------------------------------- kernel

def cmd_kernel(args) -> int:
    from ..frac import frac_kernel_dt
    from ..kernels import KernelSpec, kernel_value
    from ..quad import QuadratureConfig
    from .io import write_csv
    raw = load(args.config)
    allowed = {"family", "n", "component", "alpha", "t", "x", "y", "quadrature"}
    if set(raw) - allowed:
        raise ConfigError(f"unknown key(s): {sorted(set(raw) - allowed)}")
    try:
        spec = KernelSpec(raw.get("family", "HeatA"), int(raw.get("n", 1)), raw.get("component"))
        quad = QuadratureConfig(**raw.get("quadrature", {}))
        n = spec.n
        x = np.atleast_2d(np.asarray(raw.get("x", [[0.5] * n]), dtype=float))
        y = np.atleast_2d(np.asarray(raw.get("y", [[0.0] * n]), dtype=float))
        t = np.atleast_1d(np.asarray(raw.get("t", [1.0]), dtype=float))
        alpha = float(raw.get("alpha", 0.0))
        L = max(len(x), len(y), len(t))
        x, y, t = (np.broadcast_to(a, (L,) + a.shape[1:]) if len(a) == 1 else a for a in (x, y, t))
        if not (len(x) == len(y) == len(t) == L) or x.shape[1] != n or y.shape[1] != n:
            raise ConfigError("t, x, y must have equal lengths (or length 1) and n coordinates")
        if alpha < 0:
            raise ConfigError("alpha must be >= 0")
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    out = _outdir(args.out)
    rows = []
    for ti, xi, yi in zip(t, x, y):
        if alpha > 0:
            v = frac_kernel_dt(spec, alpha, float(ti), xi, yi, quad)
        else:
            v = float(np.asarray(kernel_value(spec, float(ti), xi[None], yi[None], quad)).ravel()[0])
        rows.append([float(ti)] + [float(c) for c in xi] + [float(c) for c in yi]
                    + [float(v), spec.family.value, alpha])
    header = ["t"] + [f"x_{i + 1}" for i in range(n)] + [f"y_{i + 1}" for i in range(n)] + ["value", "family", "alpha"]
    write_csv(os.path.join(out, "kernel_eval.csv"), header, rows)
    ok = all(math.isfinite(r[-3]) for r in rows)
    print(f"{'PASS' if ok else 'FAIL'} kernel eval: {len(rows)} values of {spec.family.value}")
    return EXIT_OK if ok else EXIT_FAIL


# --------------------------------------------------------------------- traj

def cmd_traj(args) -> int:
    from ..pathops import (ABS, LacunarySeq, Lq, SignSeq, Trajectory, diff_transform_maximal,
                           jump_count, jump_variation_inequality_check, lacunarity_normalize,
                           oscillation, rho_variation, short_variation)
    from .io import write_table
    raw = load(args.config)
    allowed = {"trajectory", "trajectory_csv", "norm", "rho", "lambda", "brackets", "signs",
               "lacunary_lambda"}
    if set(raw) - allowed:
        raise ConfigError(f"unknown key(s): {sorted(set(raw) - allowed)}")
    try:
        norm = ABS if raw.get("norm", "abs") == "abs" else Lq(float(raw["norm"]["q"]))
        if "trajectory_csv" in raw:
            tr = Trajectory.from_csv(raw["trajectory_csv"], norm)
        else:
            d = raw.get("trajectory")
            if d is None:
                raise ConfigError("config needs 'trajectory' or 'trajectory_csv'")
            tr = Trajectory(np.asarray(d["times"], float), np.asarray(d["values"], float), norm)
        rho = float(raw.get("rho", 3.0))
        lam = float(raw.get("lambda", 0.5))
        if not rho >= 1 or not lam > 0:
            raise ConfigError("rho must be >= 1 and lambda > 0")
    except (KeyError, TypeError, ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from exc
    out = _outdir(args.out)
    rows = [["rho_variation", rho, rho_variation(tr, rho)],
            ["jump_count", lam, float(jump_count(tr, lam))],
            ["short_variation", "", short_variation(tr)]]
    chk = jump_variation_inequality_check(tr, rho, lam)
    rows += [["jump_inequality_lhs", lam, chk.lhs], ["jump_inequality_rhs", lam, chk.rhs],
             ["jump_inequality_holds", lam, float(chk.holds)]]
    if "brackets" in raw:
        try:
            rows.append(["oscillation", "", oscillation(tr, raw["brackets"])])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    if "signs" in raw and tr.m >= 2:
        v = SignSeq(np.asarray(raw["signs"], float))
        if v.v.shape[0] < tr.m - 1:
            raise ConfigError("signs must cover every increment")
        rows.append(["diff_transform_maximal", "", diff_transform_maximal(tr, v)])
    if "lacunary_lambda" in raw:
        try:
            seq = LacunarySeq(tr.times, float(raw["lacunary_lambda"]))
        except ValueError as exc:
            raise ConfigError(f"lacunary sequence rejected: {exc}") from exc
        rows.append(["lacunarity_normalized_length", seq.lambda_, float(lacunarity_normalize(seq).times.size)])
    write_table(out, "traj_ops", rows)
    print(f"{'PASS' if chk.holds else 'FAIL'} traj ops: V_rho={rows[0][2]:.6g}, "
          f"N_lambda={int(rows[1][2])}, inequality {'holds' if chk.holds else 'violated'}")
    return EXIT_OK if chk.holds else EXIT_FAIL


# ---------------------------------------------------------------------- main

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iglab", description="Inverse-Gaussian harmonic analysis laboratory")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", default=None, help="JSON configuration file")
        sp.add_argument("--out", default="out", help="output directory")

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite")
    common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="empirical boundedness sweeps")
    s.add_argument("kind", choices=["variation", "difftransform"])
    common(s)
    s.set_defaults(func=cmd_sweep)

    d = sub.add_parser("diag", help="local/global diagnostics")
    d.add_argument("kind", choices=["localglobal"])
    common(d)
    d.set_defaults(func=cmd_diag)

    k = sub.add_parser("kernel", help="evaluate kernels")
    k.add_argument("kind", choices=["eval"])
    common(k)
    k.set_defaults(func=cmd_kernel)

    t = sub.add_parser("traj", help="path functionals of one trajectory")
    t.add_argument("kind", choices=["ops"])
    common(t)
    t.set_defaults(func=cmd_traj)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    from .parallel import thread_count
    try:
        thread_count()
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
