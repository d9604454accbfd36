"""Radial solitary-wave profiles of the cubic Soler model.

The one-frequency ansatz reduces the nonlinear Dirac equation to a pair of
coupled radial ODEs for the large component v(r) and small component u(r):

    u' = (omega - f) v - 2 u / r,
    v' = -(omega + f) u,            f(r) = mass - (v^2 - u^2).

Localized ground states (nodeless v > 0) exist for 0 < omega < mass and decay
like exp(-kappa r) / r with kappa = sqrt(mass^2 - omega^2).  We solve by
shooting from r = 0 on the amplitude v(0), classifying each trajectory as an
overshoot or undershoot and bisecting on the separatrix.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

__all__ = [
    "SolverOptions",
    "SolitonProfile",
    "ProfileError",
    "NoConvergenceError",
    "BlowUpError",
    "solve_profile",
    "evaluate_profile",
    "profile_residual",
    "save_profile_csv",
    "load_profile_csv",
    "ProfileCache",
]

_R0 = 1e-6  # series start offset: avoids the 2/r coordinate singularity


class ProfileError(Exception):
    """Base class for profile-solver failures."""


class NoConvergenceError(ProfileError):
    """Shooting bracket exhausted; no ground state found at these settings."""


class BlowUpError(ProfileError):
    """Integration escaped before the decaying tail could be matched."""


@dataclass(frozen=True)
class SolverOptions:
    """Knobs for the shooting solver.

    r_max: integration span; default 40/kappa capped at 200/mass.
    rtol/atol: tolerances of the adaptive RK integrator.
    bisect_iters: bisection budget on v(0).
    n_samples: size of the native (graded) sample grid.
    bracket_cap: give up growing the bracket beyond this amplitude.
    """

    r_max: float | None = None
    rtol: float = 1e-12
    atol: float = 1e-14
    bisect_iters: int = 200
    n_samples: int = 6000
    bracket_cap: float = 1e4


@dataclass(frozen=True)
class SolitonProfile:
    """A solved radial profile with its evaluation rule.

    samples is an (m, 3) array of rows (r, v, u) on the solver's native grid,
    increasing in r up to r_cut; beyond r_cut the exponential tail model

        v = C exp(-kappa r) / r,   u = (kappa + 1/r) v / (omega + mass)

    takes over (it solves the far-field linearization exactly).
    """

    omega: float
    mass: float
    v_at_zero: float
    kappa: float
    samples: np.ndarray
    r_cut: float
    r_max: float
    tail_coeff: float
    _spl_v: CubicSpline = field(repr=False, compare=False)
    _spl_u: CubicSpline = field(repr=False, compare=False)

    def __call__(self, r):
        return evaluate_profile(self, r)


def _rhs(r, y, omega, mass):
    v, u = y
    f = mass - (v * v - u * u)
    return [-(omega + f) * u, (omega - f) * v - 2.0 * u / r]


def _series_start(omega, mass, v0):
    """Series expansion at the origin: v ~ v0 + v2 r^2, u ~ u1 r."""
    f0 = mass - v0 * v0
    u1 = (omega - mass + v0 * v0) * v0 / 3.0
    v2 = -(omega + f0) * u1 / 2.0
    return u1, [v0 + v2 * _R0 * _R0, u1 * _R0]


def _classify(omega, mass, v0, r_max, opts):
    """Tag a shot as 'large' (v overshoots) or 'small' (v undershoots).

    Undershoots spiral into the center (sqrt(mass-omega), 0) or turn with u
    crossing zero downward; overshoots drive v through zero, or grow without
    a turn (the over-the-top escape with u > 0).
    """
    _, y0 = _series_start(omega, mass, v0)

    def ev_v(r, y, *a):
        return y[0]

    ev_v.terminal, ev_v.direction = True, -1

    def ev_u(r, y, *a):
        return y[1]

    ev_u.terminal, ev_u.direction = True, -1

    def ev_grow(r, y, *a):
        return y[0] * y[0] + y[1] * y[1] - 9.0 * (v0 * v0 + mass * mass)

    ev_grow.terminal, ev_grow.direction = True, 1

    with np.errstate(all="ignore"):
        sol = solve_ivp(
            _rhs, (_R0, r_max), y0, args=(omega, mass),
            rtol=opts.rtol, atol=opts.atol, events=[ev_v, ev_u, ev_grow],
        )
    times = [t[0] if t.size else np.inf for t in sol.t_events]
    first = min(times)
    if first == np.inf:
        return "small"
    if times[0] == first:
        return "large"
    if times[1] == first:
        return "small"
    return "large" if sol.y_events[2][0][1] > 0 else "small"


def _shoot_amplitude(omega, mass, r_max, opts):
    """Bisect on v(0) for the separatrix between under- and overshoot."""
    lo = np.sqrt(mass - omega) + 1e-6 * mass
    if _classify(omega, mass, lo, r_max, opts) != "small":
        raise NoConvergenceError(
            f"shooting floor misclassified at omega={omega}, mass={mass}")
    hi = None
    v = lo
    while hi is None:
        vt = v * 1.25
        if vt > opts.bracket_cap * np.sqrt(mass):
            raise NoConvergenceError(
                f"shooting bracket exhausted at omega={omega}, mass={mass}")
        if _classify(omega, mass, vt, r_max, opts) == "large":
            hi = vt
        else:
            v = vt
    lo = v
    for _ in range(opts.bisect_iters):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if _classify(omega, mass, mid, r_max, opts) == "large":
            hi = mid
        else:
            lo = mid
    return lo


def _finish(omega, mass, v_at_zero, kappa, samples, r_cut, r_max, tail_coeff):
    """Build splines over the native samples and assemble the dataclass."""
    u1, _ = _series_start(omega, mass, v_at_zero)
    r, v, u = samples.T
    spl_v = CubicSpline(r, v, bc_type=((1, 0.0), "not-a-knot"))
    spl_u = CubicSpline(r, u, bc_type=((1, u1), "not-a-knot"))
    return SolitonProfile(
        omega=omega, mass=mass, v_at_zero=v_at_zero, kappa=kappa,
        samples=samples, r_cut=r_cut, r_max=r_max, tail_coeff=tail_coeff,
        _spl_v=spl_v, _spl_u=spl_u,
    )


def solve_profile(omega, mass=1.0, opts=SolverOptions()):
    """Solve for the nodeless ground-state profile at (omega, mass).

    Raises NoConvergenceError when shooting fails to bracket, BlowUpError
    when the accepted trajectory escapes before a usable tail forms.
    """
    if not (0.0 < omega < mass):
        raise ValueError(f"require 0 < omega < mass, got omega={omega}, mass={mass}")
    kappa = float(np.sqrt(mass * mass - omega * omega))
    r_max = opts.r_max if opts.r_max is not None else min(40.0 / kappa, 200.0 / mass)

    v0 = float(_shoot_amplitude(omega, mass, r_max, opts))
    u1, y0 = _series_start(omega, mass, v0)
    with np.errstate(all="ignore"):
        sol = solve_ivp(
            _rhs, (_R0, r_max), y0, args=(omega, mass),
            rtol=opts.rtol, atol=opts.atol, dense_output=True,
        )
    # Even the bisected separatrix eventually leaves the decaying solution
    # (finite-precision contamination grows like exp(+kappa r)); truncate
    # comfortably before the contamination minimum and splice the exact
    # far-field tail.
    amp = np.abs(sol.y[0]) + np.abs(sol.y[1])
    r_min = sol.t[int(np.argmin(amp))]
    r_cut = 0.7 * r_min
    if r_cut < 4.0 / kappa:
        raise BlowUpError(
            f"trajectory escaped at r={r_min:.3g} (omega={omega}, mass={mass})")

    rs = r_cut * np.linspace(0.0, 1.0, opts.n_samples) ** 2
    rs = rs[rs > _R0]
    vv, uu = sol.sol(rs)
    win = rs > 0.9 * r_cut
    tail_coeff = float(np.median(vv[win] * rs[win] * np.exp(kappa * rs[win])))

    samples = np.column_stack((
        np.concatenate(([0.0], rs)),
        np.concatenate(([v0], vv)),
        np.concatenate(([0.0], uu)),
    ))
    prof = _finish(omega, mass, v0, kappa, samples, r_cut, r_max, tail_coeff)
    if np.any(prof.samples[:, 1] <= 0):
        raise NoConvergenceError(
            f"converged to a nodal (excited) branch at omega={omega}")
    return prof


def _tail_vu(profile, r):
    rr = np.maximum(r, 1e-300)
    with np.errstate(over="ignore", under="ignore"):
        v = profile.tail_coeff * np.exp(-profile.kappa * r) / rr
        u = (profile.kappa + 1.0 / rr) * v / (profile.omega + profile.mass)
    return v, u


def evaluate_profile(profile, nodes):
    """Evaluate (v, u) at arbitrary r >= 0 (spline core + exponential tail)."""
    r = np.asarray(nodes, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r)
    if np.any(r < 0):
        raise ValueError("profile evaluation requires r >= 0")
    core = r <= profile.r_cut
    v = np.empty_like(r)
    u = np.empty_like(r)
    v[core] = profile._spl_v(r[core])
    u[core] = profile._spl_u(r[core])
    v[~core], u[~core] = _tail_vu(profile, r[~core])
    if scalar:
        return float(v[0]), float(u[0])
    return v, u


def profile_residual(profile, nodes):
    """Max-norm residual of both radial ODEs at the given nodes."""
    r = np.atleast_1d(np.asarray(nodes, dtype=float))
    r = r[r > 0]
    core = r <= profile.r_cut
    v = np.empty_like(r)
    u = np.empty_like(r)
    dv = np.empty_like(r)
    du = np.empty_like(r)
    rc = r[core]
    v[core] = profile._spl_v(rc)
    u[core] = profile._spl_u(rc)
    dv[core] = profile._spl_v(rc, 1)
    du[core] = profile._spl_u(rc, 1)
    rt = r[~core]
    vt, ut = _tail_vu(profile, rt)
    v[~core], u[~core] = vt, ut
    kap, om, ms = profile.kappa, profile.omega, profile.mass
    dvt = -(kap + 1.0 / rt) * vt
    dv[~core] = dvt
    du[~core] = ((kap + 1.0 / rt) * dvt - vt / rt**2) / (om + ms)
    f = ms - (v * v - u * u)
    res_v = dv + (om + f) * u
    res_u = du - (om - f) * v + 2.0 * u / r
    return float(max(np.abs(res_v).max(), np.abs(res_u).max()))


# ---------------------------------------------------------------------------
# persistence


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def save_profile_csv(profile, path):
    """Persist a profile as CSV: comment header then r,v,u rows."""
    lines = [
        f"# omega={profile.omega!r}",
        f"# mass={profile.mass!r}",
        f"# kappa={profile.kappa!r}",
        f"# v0={profile.v_at_zero!r}",
        f"# r_max={profile.r_max!r}",
        f"# tail_coeff={profile.tail_coeff!r}",
        "r,v,u",
    ]
    lines.extend(
        f"{float(r)!r},{float(v)!r},{float(u)!r}" for r, v, u in profile.samples
    )
    _atomic_write(path, "\n".join(lines) + "\n")


def load_profile_csv(path):
    """Rebuild a SolitonProfile from its persisted CSV."""
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
            elif line != "r,v,u":
                rows.append([float(x) for x in line.split(",")])
    samples = np.asarray(rows, dtype=float)
    if samples.ndim != 2 or samples.shape[1] != 3 or samples.shape[0] < 4:
        raise ValueError(f"malformed profile CSV: {path}")
    omega, mass = meta["omega"], meta["mass"]
    kappa = meta.get("kappa", float(np.sqrt(mass**2 - omega**2)))
    v0 = meta.get("v0", samples[0, 1])
    r_cut = samples[-1, 0]
    r_max = meta.get("r_max", min(40.0 / kappa, 200.0 / mass))
    if "tail_coeff" in meta:
        tail_coeff = meta["tail_coeff"]
    else:
        r, v, _ = samples.T
        win = r > 0.9 * r_cut
        tail_coeff = float(np.median(v[win] * r[win] * np.exp(kappa * r[win])))
    return _finish(omega, mass, v0, kappa, samples, r_cut, r_max, tail_coeff)


class ProfileCache:
    """Filesystem-backed profile cache keyed by (omega, mass, tolerances).

    Insertions of the same key resolve first-writer-wins: a writer that loses
    the race adopts the existing file rather than clobbering it, so parallel
    sweep workers agree on one profile per key.
    """

    def __init__(self, directory):
        self.directory = str(directory)
        os.makedirs(self.directory, exist_ok=True)

    def _path(self, omega, mass, opts):
        key = f"w{omega:.14g}_m{mass:.14g}_t{opts.rtol:.3g}_{opts.bisect_iters}"
        return os.path.join(self.directory, f"profile_{key}.csv")

    def get(self, omega, mass=1.0, opts=SolverOptions()):
        path = self._path(omega, mass, opts)
        if os.path.exists(path):
            return load_profile_csv(path)
        prof = solve_profile(omega, mass, opts)
        if not os.path.exists(path):
            save_profile_csv(prof, path)
            return prof
        return load_profile_csv(path)
