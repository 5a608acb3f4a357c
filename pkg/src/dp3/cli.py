"""Command-line entry point: ``dp3 <command> CONFIG [options]``.

Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 hypothesis failure.
"""
import argparse
import os
import sys
import warnings

import numpy as np

from .artifacts import write_json, write_manifest, write_series, write_snapshots, write_table
from .certificates import certify
from .characteristics import riccati_check, track
from .config import build_control, build_grid, build_initial, build_profiles, load_config
from .errors import ConfigError, DomainError, HypothesisError, NumericError
from .evolution import run
from .mollifier import epsilon_ladder, size_estimate_check
from .persistence import flux_decay_audit, persistence_track, rho_decay_classify
from .rhs import REDUCTIONS

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_HYPOTHESIS = 0, 2, 3, 4


def _setup(args):
    cfg = load_config(args.config)
    grid = build_grid(cfg)
    control = build_control(cfg)
    s0 = build_initial(cfg, grid)
    os.makedirs(args.out, exist_ok=True)
    return cfg, grid, control, s0


def _simulate(cfg, s0, control, profiles=None, residual_kinds=()):
    t = cfg["time"]
    return run(s0, control, form=cfg["model"]["form"], sample_every=t["sample_every"],
               weights=build_profiles(cfg) if profiles is None else profiles,
               sobolev_s=cfg["model"]["sobolev_s"], residual_kinds=residual_kinds, fixed_dt=t["fixed_dt"])


def _status(res):
    """Non-finite values mean the integrator failed; threshold and step-size stops are detections."""
    if res.report.reason == "non_finite":
        print(f"dp3: numeric failure: non-finite state after {res.report.steps} steps "
              f"(t = {res.report.t_final:.6g})", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def cmd_simulate(args):
    cfg, grid, control, s0 = _setup(args)
    write_manifest(os.path.join(args.out, "manifest.json"), "simulate", cfg, grid)
    res = _simulate(cfg, s0, control, residual_kinds=tuple(cfg["reductions"]["kinds"]))
    write_series(os.path.join(args.out, "series.csv"), res.series)
    write_snapshots(os.path.join(args.out, "snapshots"), res.snapshots)
    write_json(os.path.join(args.out, "blowup_report.json"), res.report.as_dict())
    x0s = cfg["characteristics"]["x0s"]
    if x0s:
        traces = track(res.snapshots, x0s, cfg["model"]["form"])
        for i, tr in enumerate(traces):
            _riccati_margin(tr, s0)
            write_table(os.path.join(args.out, f"trace_{i:02d}.csv"), ["t", "q", "f", "v_at_q", "margin"], tr.rows())
    return _status(res)


def _riccati_margin(trace, s0):
    """Fill the trace margin from the certificate constants when they exist at its start point."""
    if len(trace.t) < 3:
        return
    try:
        cert = certify(s0, x0=trace.x0, check=False)
    except HypothesisError:
        return
    riccati_check(trace, cert.a, cert.b1)


def cmd_certify(args):
    cfg, grid, control, s0 = _setup(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        cert = certify(s0, x0=cfg["certify"]["x0"])
    out = cert.as_dict()
    out["warnings"] = sorted({str(w.message) for w in caught})
    write_json(os.path.join(args.out, "certificate.json"), out)
    return EXIT_OK


def cmd_mollify(args):
    cfg, grid, control, s0 = _setup(args)
    eps = args.eps if args.eps is not None else cfg["mollify"]["epsilons"]
    if len(eps) < 3:
        raise ConfigError(f"epsilon ladder needs at least three entries, got {len(eps)}")
    try:
        table = epsilon_ladder(s0, eps, control, sample_every=cfg["time"]["sample_every"], workers=args.workers)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    size = size_estimate_check(s0, control, calibration=cfg["mollify"]["calibration_C"],
                               sobolev_s=cfg["model"]["sobolev_s"], form=cfg["model"]["form"],
                               sample_every=cfg["time"]["sample_every"])
    write_manifest(os.path.join(args.out, "manifest.json"), "mollify", cfg, grid)
    write_json(os.path.join(args.out, "mollify_report.json"), {"ladder": table.as_dict(), "size_estimate": size})
    return EXIT_OK


def _parse_profile(text):
    try:
        kind, beta, n = text.split(":")
        return {"kind": kind, "beta": float(beta), "N": float(n)}
    except ValueError:
        raise argparse.ArgumentTypeError(f"profile must look like kind:beta:N, got {text!r}") from None


def cmd_persist(args):
    cfg, grid, control, s0 = _setup(args)
    profiles = build_profiles(cfg, args.profile)
    if not profiles:
        raise ConfigError("persistence needs at least one weight profile")
    p = cfg["persist"]
    L = grid.L
    ladder = p.get("N_ladder") or [0.05 * L, 0.1 * L, 0.2 * L]
    x_samples = p.get("x_samples") or [0.05 * L, 0.1 * L, 0.2 * L]
    thr = cfg["thresholds"]
    res = _simulate(cfg, s0, control, profiles=profiles)
    try:
        tracked = persistence_track(res.snapshots, profiles, p["selector"])
        report = {"t": tracked["t"], "stopped_early": res.report.detected, "profiles": {}}
        for prof in profiles:
            gamma = p.get("gamma", 2.0 * prof.beta / 3.0)
            label, s_vals = rho_decay_classify(res.snapshots, prof.beta, gamma, ladder,
                                               o_drop=thr["classify"]["o_drop"], O_factor=thr["classify"]["O_factor"],
                                               zero_floor=thr["zero_floor"])
            entry = dict(tracked[prof.label])
            entry.update(kind=prof.kind, beta=prof.beta, N=prof.N, gamma=gamma, ladder=s_vals, classification=label)
            if len(res.snapshots) >= 2:
                entry["flux_audit"] = flux_decay_audit(res.snapshots, prof.beta, gamma, x_samples)
            report["profiles"][prof.label] = entry
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    write_manifest(os.path.join(args.out, "manifest.json"), "persist", cfg, grid)
    write_series(os.path.join(args.out, "series.csv"), res.series)
    write_json(os.path.join(args.out, "persistence_report.json"), report)
    return _status(res)


def cmd_check_reductions(args):
    cfg, grid, control, s0 = _setup(args)
    kinds = tuple(cfg["reductions"]["kinds"]) or REDUCTIONS
    res = _simulate(cfg, s0, control, residual_kinds=kinds)
    tol = cfg["reductions"]["tolerance"]
    worst = {k: float(np.max(np.abs([r[i] for r in res.series.residuals]))) for i, k in enumerate(kinds)}
    write_manifest(os.path.join(args.out, "manifest.json"), "check-reductions", cfg, grid)
    write_series(os.path.join(args.out, "series.csv"), res.series)
    write_json(os.path.join(args.out, "reductions.json"), {
        "max_residual": worst,
        "tolerance": tol,
        "within_tolerance": {k: v <= tol for k, v in worst.items()},
        "t_final": res.report.t_final,
    })
    return _status(res)


COMMANDS = {
    "simulate": cmd_simulate,
    "certify": cmd_certify,
    "mollify": cmd_mollify,
    "persist": cmd_persist,
    "check-reductions": cmd_check_reductions,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="dp3", description="Three-component DP system simulator and checks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("config", help="JSON run configuration")
        sp.add_argument("--out", default=".", help="output directory (default: current directory)")
        if name == "mollify":
            sp.add_argument("--eps", type=float, nargs="+", help="override the epsilon ladder")
            sp.add_argument("--workers", type=int, default=1)
        if name == "persist":
            sp.add_argument("--profile", type=_parse_profile, nargs="*",
                            help="override weight profiles, each as kind:beta:N")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"dp3: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except HypothesisError as exc:
        print(f"dp3: hypothesis failure: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except NumericError as exc:
        print(f"dp3: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
