"""Command-line interface.

Subcommands: profile, spectrum, sweep, events, plot, report, charges.

Exit codes: 0 success; 2 invalid arguments; 3 profile solver failed to
converge; 4 sweep partially failed or sweep data empty.  The profile cache
directory is taken from the SOLERLAB_CACHE environment variable when set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .charges import charge_table, save_charge_table_csv
from .config import RunConfig, load_config, save_config
from .grid import build_grid
from .operators import ChannelSpec
from .profile import ProfileCache, ProfileError, SolverOptions, save_profile_csv, \
    solve_profile
from .spectra import SpectrumRecord, Tolerances, save_spectrum_json, solve_channel
from .svgplot import render_sweep_svgs
from .sweep import SweepContext, SweepResult, detect_events, load_sweep_csv, \
    save_events_json, save_sweep_csv, stability_report, sweep

EXIT_OK, EXIT_ARGS, EXIT_NOCONV, EXIT_PARTIAL = 0, 2, 3, 4


def _cache():
    d = os.environ.get("SOLERLAB_CACHE")
    return ProfileCache(d) if d else None


def _fail(msg, code):
    print(f"error: {msg}", file=sys.stderr)
    return code


def _tolerances(cfg):
    return Tolerances(re_tol=cfg.re_tol, zero_tol=cfg.zero_tol,
                      band_tol=cfg.band_tol, match_tol=cfg.match_tol,
                      tail_tol=cfg.tail_tol, tail_frac=cfg.tail_frac)


def _channels(cfg):
    chans = ["ell0"]
    for ell in range(1, cfg.ell_max + 1):
        ms = [m for m in (cfg.m_values or range(ell + 1)) if abs(m) <= ell]
        for m in ms:
            for eta2 in cfg.eta_norm_sq:
                chans.append(ChannelSpec(ell, m, eta2))
    return chans


def _merge_config(args, flag_map):
    """RunConfig from defaults, then --config file, then explicit flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = load_config(args.config, cfg)
    for flag, name in flag_map.items():
        val = getattr(args, flag, None)
        if val is not None:
            setattr(cfg, name, val)
    return cfg


# ---------------------------------------------------------------------------
# subcommands


def cmd_profile(args):
    if not (0 < args.omega < args.mass):
        return _fail(f"omega must lie in (0, mass), got {args.omega}", EXIT_ARGS)
    try:
        prof = solve_profile(args.omega, args.mass)
    except ProfileError as exc:
        return _fail(f"profile solver did not converge: {exc}", EXIT_NOCONV)
    out = args.out or f"profile_w{args.omega:g}.csv"
    save_profile_csv(prof, out)
    print(f"wrote {out} (v0={prof.v_at_zero!r}, kappa={prof.kappa!r})")
    return EXIT_OK


def cmd_spectrum(args):
    if not (0 < args.omega < args.mass):
        return _fail(f"omega must lie in (0, mass), got {args.omega}", EXIT_ARGS)
    try:
        channel = "ell0" if args.ell == 0 else ChannelSpec(args.ell, args.m, args.eta2)
    except ValueError as exc:
        return _fail(str(exc), EXIT_ARGS)
    if args.ell == 0 and args.m != 0:
        return _fail(f"need |m| <= ell, got m={args.m}, ell=0", EXIT_ARGS)
    cache = _cache()
    try:
        prof = cache.get(args.omega, args.mass) if cache else \
            solve_profile(args.omega, args.mass)
    except ProfileError as exc:
        return _fail(f"profile solver did not converge: {exc}", EXIT_NOCONV)
    rec = solve_channel(prof, channel, n=args.nodes, map_scale=args.map_scale)
    out = args.out or f"spectrum_w{args.omega:g}_l{args.ell}_m{args.m}.json"
    save_spectrum_json(rec, out)
    print(f"wrote {out} (instability measure {rec.instability_measure!r})")
    return EXIT_OK


_SWEEP_FLAGS = {
    "mass": "mass", "omega_min": "omega_min", "omega_max": "omega_max",
    "steps": "steps", "ell_max": "ell_max", "nodes": "n",
    "map_scale": "map_scale", "jobs": "jobs", "out_dir": "out_dir",
    "refine_tol": "refine_tol",
}


def _run_sweep(cfg):
    return sweep(
        cfg.omega_min, cfg.omega_max, cfg.steps, _channels(cfg),
        mass=cfg.mass, n=cfg.n, map_scale=cfg.map_scale, tol=_tolerances(cfg),
        solver_opts=SolverOptions(rtol=cfg.solver_rtol), cache=_cache(),
        jobs=cfg.jobs,
    )


def cmd_sweep(args):
    try:
        cfg = _merge_config(args, _SWEEP_FLAGS)
        if args.eta2 is not None:
            cfg.eta_norm_sq = args.eta2
        if args.m is not None:
            cfg.m_values = args.m
        result = _run_sweep(cfg)
    except (ValueError, OSError) as exc:
        return _fail(str(exc), EXIT_ARGS)
    os.makedirs(cfg.out_dir, exist_ok=True)
    detect_events(result, refine_tol=cfg.refine_tol)
    save_sweep_csv(result, os.path.join(cfg.out_dir, "sweep.csv"))
    save_events_json(result.events, os.path.join(cfg.out_dir, "events.json"))
    save_config(cfg, os.path.join(cfg.out_dir, "run.cfg"))
    print(f"wrote sweep.csv, events.json, run.cfg in {cfg.out_dir}")
    if not result.complete():
        for om, msg in result.failures:
            print(f"omega={om}: {msg}", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def _result_from_csv(path):
    """Rebuild a (re-solvable) SweepResult from a persisted sweep CSV."""
    meta, rows = load_sweep_csv(path)
    ctx = SweepContext(mass=meta.get("mass", 1.0), n=int(meta.get("n", 300)),
                       map_scale=meta.get("map_scale", 10.0), cache=_cache())
    grouped = {}
    for om, ell, m, eta2, re, im, tag in rows:
        grouped.setdefault((om, ell, m, eta2), []).append((re + 1j * im, tag))
    channels = []
    records = {}
    omegas = sorted({om for om, *_ in grouped})
    for (om, ell, m, eta2), pairs in grouped.items():
        ch = "ell0" if ell == 0 else ChannelSpec(ell, m, eta2)
        if ch not in channels:
            channels.append(ch)
        lam = np.array([z for z, _ in pairs])
        tags = tuple(t for _, t in pairs)
        unstable = [z.real for z, t in pairs if t == "unstable"]
        key = ("ell0",) if ell == 0 else (ell, m, eta2)
        records[(om, key)] = SpectrumRecord(
            omega=om, channel=ch, grid_ref=(ctx.n, ctx.map_scale),
            eigenvalues=lam, tags=tags,
            instability_measure=max(unstable) if unstable else 0.0)
    for om in omegas:
        for ch in channels:
            key = ("ell0",) if ch == "ell0" else (ch.ell, ch.m, ch.eta_norm_sq)
            records.setdefault((om, key), None)
    return SweepResult(channels=channels, omega_grid=np.array(omegas),
                       records=records, context=ctx), rows


def cmd_events(args):
    try:
        result, _ = _result_from_csv(args.infile)
    except (OSError, ValueError, KeyError) as exc:
        return _fail(f"cannot read sweep CSV: {exc}", EXIT_ARGS)
    if len(result.omega_grid) == 0:
        return _fail("sweep data is empty", EXIT_PARTIAL)
    detect_events(result, refine_tol=args.refine_tol)
    save_events_json(result.events, args.out)
    print(f"wrote {args.out} ({len(result.events)} events)")
    return EXIT_OK


def cmd_plot(args):
    try:
        _, rows = _result_from_csv(args.infile)
    except (OSError, ValueError) as exc:
        return _fail(f"cannot read sweep CSV: {exc}", EXIT_ARGS)
    if not rows:
        return _fail("sweep data is empty; no SVG emitted", EXIT_PARTIAL)
    os.makedirs(args.out, exist_ok=True)
    paths = render_sweep_svgs(rows, args.out)
    print("wrote " + ", ".join(paths))
    return EXIT_OK


def cmd_report(args):
    try:
        result, _ = _result_from_csv(args.infile)
    except (OSError, ValueError) as exc:
        return _fail(f"cannot read sweep CSV: {exc}", EXIT_ARGS)
    if len(result.omega_grid) == 0:
        return _fail("sweep data is empty", EXIT_PARTIAL)
    if args.events:
        with open(args.events) as fh:
            raw = json.load(fh)
        from .sweep import BifurcationEvent
        result.events = [
            BifurcationEvent(
                kind=e["kind"],
                channel="ell0" if e["ell"] == 0 else
                ChannelSpec(e["ell"], e["m"], e["eta_norm_sq"]),
                omega_location=e["omega"], direction=e.get("direction", "?"),
                bracket=(e["bracket_lo"], e["bracket_hi"]),
                evidence={}, resolved=e.get("resolved", True))
            for e in raw
        ]
    rep = stability_report(result)
    print("stability window(s):",
          ", ".join(f"({lo:.4g}, {hi:.4g})" for lo, hi in rep["stability_window"])
          or "none")
    print("per-channel instability intervals:")
    for key, ivals in sorted(rep["per_channel_unstable"].items(), key=str):
        label = "ell=0" if key == ("ell0",) else \
            f"ell={key[0]}, m={key[1]}, eta2={key[2]}"
        txt = ", ".join(f"({lo:.4g}, {hi:.4g})" for lo, hi in ivals) or "stable"
        print(f"  {label}: {txt}")
    if rep["events"]:
        print("events:")
        for ev in rep["events"]:
            ell, m, eta2 = (0, 0, 0.0) if ev.channel == "ell0" else \
                (ev.channel.ell, ev.channel.m, ev.channel.eta_norm_sq)
            print(f"  {ev.kind} at omega={ev.omega_location:.4g} "
                  f"(ell={ell}, m={m}, {ev.direction})")
    n_art = len(rep["artifact_suspects"])
    print(f"artifact-suspect eigenvalues (excluded from the window): {n_art}")
    return EXIT_OK


def cmd_charges(args):
    if not (0 < args.omega_min < args.omega_max < args.mass):
        return _fail("require 0 < omega-min < omega-max < mass", EXIT_ARGS)
    cache = _cache()
    grid = build_grid(args.nodes, args.map_scale)
    profiles = []
    for om in np.linspace(args.omega_min, args.omega_max, args.steps):
        try:
            profiles.append(cache.get(float(om), args.mass) if cache else
                            solve_profile(float(om), args.mass))
        except ProfileError as exc:
            return _fail(f"profile solver did not converge at omega={om}: {exc}",
                         EXIT_NOCONV)
    rows = charge_table(profiles, grid)
    save_charge_table_csv(rows, args.out)
    print(f"wrote {args.out} ({len(rows)} rows)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser():
    p = argparse.ArgumentParser(
        prog="solerlab",
        description="Solitary-wave stability laboratory for the cubic Soler model")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="solve one radial profile, write CSV")
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--mass", type=float, default=1.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("spectrum", help="classified spectrum of one channel")
    sp.add_argument("--omega", type=float, required=True)
    sp.add_argument("--ell", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--eta2", type=float, default=0.0)
    sp.add_argument("--mass", type=float, default=1.0)
    sp.add_argument("--nodes", type=int, default=300)
    sp.add_argument("--map-scale", type=float, default=10.0)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_spectrum)

    sp = sub.add_parser("sweep", help="sweep omega over channels, write CSV/JSON")
    sp.add_argument("--config")
    sp.add_argument("--omega-min", dest="omega_min", type=float)
    sp.add_argument("--omega-max", dest="omega_max", type=float)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--ell-max", dest="ell_max", type=int)
    sp.add_argument("--m", type=int, nargs="*")
    sp.add_argument("--eta2", type=float, nargs="*")
    sp.add_argument("--mass", type=float)
    sp.add_argument("--nodes", type=int)
    sp.add_argument("--map-scale", dest="map_scale", type=float)
    sp.add_argument("--refine-tol", dest="refine_tol", type=float)
    sp.add_argument("--jobs", type=int)
    sp.add_argument("--out-dir", dest="out_dir")
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("events", help="refine bifurcation events of a sweep")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default="events.json")
    sp.add_argument("--refine-tol", dest="refine_tol", type=float, default=1e-3)
    sp.set_defaults(func=cmd_events)

    sp = sub.add_parser("plot", help="render sweep CSV as SVG figures")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--out", default=".")
    sp.set_defaults(func=cmd_plot)

    sp = sub.add_parser("report", help="stability window and interval table")
    sp.add_argument("--in", dest="infile", required=True)
    sp.add_argument("--events")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("charges", help="charge/energy table over omega")
    sp.add_argument("--omega-min", dest="omega_min", type=float, required=True)
    sp.add_argument("--omega-max", dest="omega_max", type=float, required=True)
    sp.add_argument("--steps", type=int, default=10)
    sp.add_argument("--mass", type=float, default=1.0)
    sp.add_argument("--nodes", type=int, default=300)
    sp.add_argument("--map-scale", dest="map_scale", type=float, default=10.0)
    sp.add_argument("--out", default="charges.csv")
    sp.set_defaults(func=cmd_charges)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
