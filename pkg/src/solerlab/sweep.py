"""Frequency sweeps, bifurcation detection, and stability reporting.

A sweep solves every requested channel on an omega grid (profiles are
cached and shared), producing classified spectra per point.  Instability
onsets and offsets between adjacent grid points are then refined by
bisection in omega and labeled by branch geometry:

* pitchfork: a real pair passes through lambda = 0,
* hamiltonian-hopf: a quadruplet leaves the imaginary axis after a
  collision of imaginary pairs in the spectral gap,
* threshold-emergence: a quadruplet detaches from the essential-spectrum
  band edge |Im lambda| = mass - omega.

Artifact-suspect eigenvalues never count toward instability: they are
carried in the records (and plotted dashed) but excluded from the
instability measure by the classification itself.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .operators import ChannelSpec
from .profile import NoConvergenceError, ProfileCache, ProfileError, SolverOptions, \
    _atomic_write, solve_profile
from .spectra import Tolerances, channel_fields, solve_channel

__all__ = [
    "BifurcationEvent",
    "SweepResult",
    "MissingPitchforkError",
    "sweep",
    "detect_events",
    "stability_report",
    "omega_p_curve",
    "save_sweep_csv",
    "load_sweep_csv",
    "save_events_json",
    "load_events_json",
]


class MissingPitchforkError(Exception):
    """No pitchfork found for a requested channel in the scanned range."""


@dataclass(frozen=True)
class BifurcationEvent:
    """A refined instability onset/offset.

    direction is "onset" when instability turns on as omega decreases
    through the location, "offset" when it turns off.  evidence holds the
    decisive unstable eigenvalue(s) at the unstable end of the final
    bracket.  resolved is False when the bisection budget ran out.
    """

    kind: str  # pitchfork | hamiltonian-hopf | threshold-emergence
    channel: object
    omega_location: float
    direction: str
    bracket: tuple
    evidence: dict = field(compare=False)
    resolved: bool = True


def _channel_key(channel):
    return ("ell0",) if channel == "ell0" else \
        (channel.ell, channel.m, channel.eta_norm_sq)


@dataclass
class SweepContext:
    """Everything needed to (re-)solve a sweep point."""

    mass: float = 1.0
    n: int = 300
    map_scale: float = 10.0
    tol: Tolerances = field(default_factory=Tolerances)
    solver_opts: SolverOptions = field(default_factory=SolverOptions)
    cache: ProfileCache | None = None

    def profile(self, omega):
        if self.cache is not None:
            return self.cache.get(omega, self.mass, self.solver_opts)
        return solve_profile(omega, self.mass, self.solver_opts)

    def solve(self, omega, channel):
        return solve_channel(self.profile(omega), channel,
                             n=self.n, map_scale=self.map_scale, tol=self.tol)


@dataclass
class SweepResult:
    channels: list
    omega_grid: np.ndarray
    records: dict  # (omega, channel key) -> SpectrumRecord or None
    context: SweepContext
    events: list = field(default_factory=list)
    stability_window: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    def record(self, omega, channel):
        return self.records.get((float(omega), _channel_key(channel)))

    def complete(self):
        return not self.failures


def sweep(omega_min, omega_max, steps, channels, *, mass=1.0, n=300,
          map_scale=10.0, tol=Tolerances(), solver_opts=SolverOptions(),
          cache=None, jobs=1):
    """Classify spectra of every channel on a uniform omega grid.

    Profile failures at an omega mark all its records missing (None) and the
    sweep continues; the failure list is carried in the result.
    """
    if not (0 < omega_min < omega_max < mass):
        raise ValueError("require 0 < omega_min < omega_max < mass")
    if steps < 2:
        raise ValueError("need steps >= 2")
    ctx = SweepContext(mass=mass, n=n, map_scale=map_scale, tol=tol,
                       solver_opts=solver_opts, cache=cache)
    omegas = np.linspace(omega_min, omega_max, int(steps))
    profiles = {}
    failures = []
    for om in omegas:
        try:
            profiles[float(om)] = ctx.profile(float(om))
        except ProfileError as exc:
            failures.append((float(om), str(exc)))

    tasks = [(float(om), ch) for om in omegas for ch in channels
             if float(om) in profiles]

    def run(task):
        om, ch = task
        return task, solve_channel(profiles[om], ch, n=n,
                                   map_scale=map_scale, tol=tol)

    records = {(om, _channel_key(ch)): None for om in map(float, omegas)
               for ch in channels}
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(run, tasks))
    else:
        done = [run(t) for t in tasks]
    for (om, ch), rec in done:
        records[(om, _channel_key(ch))] = rec

    result = SweepResult(channels=list(channels), omega_grid=omegas,
                         records=records, context=ctx, failures=failures)
    result.stability_window = _windows(result)
    return result


def _unstable_eigs(record):
    return [z for z, t in zip(record.eigenvalues, record.tags) if t == "unstable"]


def _event_kind(lam, omega, mass, tol):
    """Label the geometry of the decisive unstable eigenvalue."""
    if abs(lam.imag) < 10 * tol.re_tol + 0.02:
        return "pitchfork"
    band_edge = mass - abs(omega)
    if abs(abs(lam.imag) - band_edge) < 0.05 * mass:
        return "threshold-emergence"
    return "hamiltonian-hopf"


def detect_events(result, refine_tol=1e-3, max_iters=40):
    """Refine every instability onset/offset of the sweep by bisection.

    Events are appended to (and returned with) the sweep result; brackets
    shrink monotonically and the refined location always lies inside the
    coarse bracket.  An exhausted budget yields resolved=False.
    """
    ctx = result.context
    events = []
    for ch in result.channels:
        key = _channel_key(ch)
        pts = [(om, result.records[(float(om), key)])
               for om in map(float, result.omega_grid)]
        pts = [(om, rec) for om, rec in pts if rec is not None]
        for (om_lo, rec_lo), (om_hi, rec_hi) in zip(pts, pts[1:]):
            s_lo = rec_lo.instability_measure > 0
            s_hi = rec_hi.instability_measure > 0
            if s_lo == s_hi:
                continue
            lo, hi = om_lo, om_hi
            rec_at = {lo: rec_lo, hi: rec_hi}
            resolved = True
            iters = 0
            while hi - lo > refine_tol:
                iters += 1
                if iters > max_iters:
                    resolved = False
                    break
                mid = 0.5 * (lo + hi)
                try:
                    rec_mid = ctx.solve(mid, ch)
                except ProfileError:
                    resolved = False
                    break
                rec_at[mid] = rec_mid
                if (rec_mid.instability_measure > 0) == s_lo:
                    lo = mid
                else:
                    hi = mid
            unstable_side = lo if s_lo else hi
            lam = max(_unstable_eigs(rec_at[unstable_side]),
                      key=lambda z: z.real)
            kind = _event_kind(lam, unstable_side, ctx.mass, ctx.tol)
            # direction as omega decreases through the event
            direction = "onset" if s_lo else "offset"
            events.append(BifurcationEvent(
                kind=kind, channel=ch, omega_location=0.5 * (lo + hi),
                direction=direction, bracket=(lo, hi),
                evidence={
                    "lambda_unstable": complex(lam),
                    "unstable_side": unstable_side,
                    "measure_lo": rec_at[lo].instability_measure,
                    "measure_hi": rec_at[hi].instability_measure,
                },
                resolved=resolved,
            ))
    events.sort(key=lambda e: (e.omega_location, _channel_key(e.channel)))
    result.events = events
    return result


def _windows(result, events=()):
    """Maximal omega intervals where every channel is stable.

    Interval edges snap to refined event locations when one falls in the
    bounding grid cell."""
    omegas = [float(om) for om in result.omega_grid]
    ok = []
    for om in omegas:
        recs = [result.records[(om, _channel_key(ch))] for ch in result.channels]
        if any(r is None for r in recs):
            ok.append(False)
        else:
            ok.append(all(r.instability_measure == 0 for r in recs))

    def edge(a, b):
        for ev in events:
            if a <= ev.omega_location <= b:
                return ev.omega_location
        return 0.5 * (a + b)

    windows = []
    i = 0
    while i < len(omegas):
        if not ok[i]:
            i += 1
            continue
        j = i
        while j + 1 < len(omegas) and ok[j + 1]:
            j += 1
        lo = omegas[i] if i == 0 else edge(omegas[i - 1], omegas[i])
        hi = omegas[j] if j == len(omegas) - 1 else edge(omegas[j], omegas[j + 1])
        windows.append((lo, hi))
        i = j + 1
    return windows


def stability_report(result):
    """Stability window(s), per-channel instability intervals, events, and
    the artifact-suspect census."""
    result.stability_window = _windows(result, result.events)
    per_channel = {}
    artifacts = []
    for ch in result.channels:
        key = _channel_key(ch)
        intervals = []
        run = None
        for om in map(float, result.omega_grid):
            rec = result.records[(om, key)]
            unstable = rec is not None and rec.instability_measure > 0
            if rec is not None:
                for z, t in zip(rec.eigenvalues, rec.tags):
                    if t == "artifact-suspect" and z.imag >= 0:
                        artifacts.append((om, key, complex(z)))
            if unstable and run is None:
                run = [om, om]
            elif unstable:
                run[1] = om
            elif run is not None:
                intervals.append(tuple(run))
                run = None
        if run is not None:
            intervals.append(tuple(run))
        per_channel[key] = intervals
    return {
        "stability_window": result.stability_window,
        "per_channel_unstable": per_channel,
        "events": result.events,
        "artifact_suspects": artifacts,
    }


def omega_p_curve(ells, m=0, *, omega_lo=0.1, omega_hi=0.25, step=0.005,
                  refine_tol=1e-3, strict=True, **ctx_kwargs):
    """Locate the pitchfork frequency per degree: scanning omega downward,
    the first appearance of an unstable (near-)real pair is refined by
    bisection.  With strict=True a degree without a pitchfork raises
    MissingPitchforkError; otherwise its entry is None."""
    ctx = SweepContext(**ctx_kwargs)
    out = []
    for ell in ells:
        ch = ChannelSpec(int(ell), m)
        omegas = np.arange(omega_hi, omega_lo - 1e-12, -step)
        found = None
        prev = None
        for om in omegas:
            try:
                rec = ctx.solve(float(om), ch)
            except ProfileError:
                prev = None
                continue
            real_pair = [z for z in _unstable_eigs(rec)
                         if z.real > 0 and abs(z.imag) < 0.02]
            if real_pair:
                if prev is None:
                    found = (float(om), float(om))
                else:
                    found = (float(om), prev)
                break
            prev = float(om)
        if found is None:
            if strict:
                raise MissingPitchforkError(
                    f"no pitchfork for ell={ell}, m={m} in "
                    f"({omega_lo}, {omega_hi})")
            out.append((int(ell), None))
            continue
        lo, hi = found
        while hi - lo > refine_tol:
            mid = 0.5 * (lo + hi)
            rec = ctx.solve(mid, ch)
            real_pair = [z for z in _unstable_eigs(rec)
                         if z.real > 0 and abs(z.imag) < 0.02]
            if real_pair:
                lo = mid
            else:
                hi = mid
        out.append((int(ell), 0.5 * (lo + hi)))
    return out


# ---------------------------------------------------------------------------
# persistence


def save_sweep_csv(result, path):
    """One row per eigenvalue; solver parameters ride in comment headers so
    downstream commands can re-solve consistently."""
    ctx = result.context
    lines = [
        f"# mass={ctx.mass!r}",
        f"# n={ctx.n}",
        f"# map_scale={ctx.map_scale!r}",
        f"# omega_min={float(result.omega_grid[0])!r}",
        f"# omega_max={float(result.omega_grid[-1])!r}",
        f"# steps={len(result.omega_grid)}",
        "omega,ell,m,eta_norm_sq,re_lambda,im_lambda,tag",
    ]
    for om in map(float, result.omega_grid):
        for ch in result.channels:
            rec = result.records[(om, _channel_key(ch))]
            if rec is None:
                continue
            ell, mm, eta2 = channel_fields(ch)
            for z, t in zip(rec.eigenvalues, rec.tags):
                lines.append(f"{om!r},{ell},{mm},{float(eta2)!r},"
                             f"{float(z.real)!r},{float(z.imag)!r},{t}")
    _atomic_write(path, "\n".join(lines) + "\n")


def load_sweep_csv(path):
    """Parse a sweep CSV into (header meta, row list)."""
    meta = {}
    rows = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, val = line[1:].partition("=")
                meta[key.strip()] = float(val)
            elif not line.startswith("omega,"):
                om, ell, m, eta2, re, im, tag = line.split(",")
                rows.append((float(om), int(ell), int(m), float(eta2),
                             float(re), float(im), tag))
    return meta, rows


def _event_to_json(ev):
    ell, m, eta2 = channel_fields(ev.channel)
    return {
        "kind": ev.kind, "ell": ell, "m": m, "eta_norm_sq": eta2,
        "omega": ev.omega_location,
        "bracket_lo": ev.bracket[0], "bracket_hi": ev.bracket[1],
        "direction": ev.direction, "resolved": ev.resolved,
    }


def save_events_json(events, path):
    _atomic_write(path, json.dumps([_event_to_json(e) for e in events],
                                   indent=1) + "\n")


def load_events_json(path):
    with open(path) as fh:
        return json.load(fh)
