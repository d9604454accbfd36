"""Eigenvalue computation and classification for channel operators.

A raw dense spectrum of a discretized channel mixes several populations:
discretized essential spectrum (a band on the imaginary axis with
|Im lambda| >= mass - |omega|), genuine discrete modes, symmetry-forced zero
modes, true unstable modes (Re lambda != 0), and discretization artifacts.
Classification cross-checks two resolutions (n and ceil(1.5 n)): a genuine
discrete eigenvalue persists (mutual-nearest match within match_tol) and its
eigenvector is localized (small tail mass), while artifacts fail one of the
two tests and are tagged, never dropped.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg

from .grid import build_grid
from .operators import ChannelSpec, assemble_channel
from .profile import _atomic_write

__all__ = [
    "Tolerances",
    "SpectrumRecord",
    "EigensolverError",
    "compute_spectrum",
    "classify",
    "residual_check",
    "solve_channel",
    "record_to_json",
    "save_spectrum_json",
    "load_spectrum_json",
    "channel_fields",
]

TAGS = ("essential", "discrete", "zero-mode", "unstable", "artifact-suspect")


class EigensolverError(Exception):
    """Dense eigendecomposition failed; carries condition diagnostics."""


@dataclass(frozen=True)
class Tolerances:
    """Classification thresholds (units of mass = 1 unless noted).

    re_tol: smallest |Re lambda| considered a real-part candidate.
    zero_tol: radius of the zero-mode ball.
    band_tol: half-width of the essential-spectrum band test.
    match_tol: cross-resolution mutual-nearest match radius.
    tail_tol: max eigenvector mass fraction beyond r_tail.
    tail_frac: r_tail = tail_frac * (profile r_max).
    """

    re_tol: float = 1e-4
    zero_tol: float = 1e-5
    band_tol: float = 1e-3
    match_tol: float = 1e-2
    tail_tol: float = 1e-3
    tail_frac: float = 0.75


@dataclass(frozen=True)
class SpectrumRecord:
    """Classified spectrum of one (omega, channel) at one grid pair."""

    omega: float
    channel: object  # ChannelSpec or "ell0"
    grid_ref: tuple  # (n, map_scale) of the coarse grid
    eigenvalues: np.ndarray
    tags: tuple
    instability_measure: float

    def tagged(self, tag):
        return self.eigenvalues[[t == tag for t in self.tags]]


def compute_spectrum(op, want_vectors=False):
    """Eigenvalues lambda = -i mu of the stored real matrix, sorted by
    (Im lambda, Re lambda); optionally the corresponding eigenvectors."""
    M = op.matrix if hasattr(op, "matrix") else np.asarray(op)
    try:
        if want_vectors:
            mu, vecs = scipy.linalg.eig(M, check_finite=False)
        else:
            mu = scipy.linalg.eigvals(M, check_finite=False)
            vecs = None
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        norm = float(np.abs(M).max()) if M.size else 0.0
        raise EigensolverError(
            f"dense eigensolve failed (size {M.shape}, max-entry {norm:.3g}, "
            f"finite={bool(np.all(np.isfinite(M)))}): {exc}") from exc
    if not np.all(np.isfinite(mu)):
        raise EigensolverError(
            f"eigensolve produced non-finite eigenvalues (size {M.shape}, "
            f"matrix finite={bool(np.all(np.isfinite(M)))})")
    lam = -1j * mu
    order = np.lexsort((lam.real, lam.imag))
    lam = lam[order]
    if want_vectors:
        return lam, vecs[:, order]
    return lam


def residual_check(op, lam, vector):
    """Relative eigenpair residual ||M v - mu v|| / ||v|| with mu = i lambda."""
    M = op.matrix if hasattr(op, "matrix") else np.asarray(op)
    v = np.asarray(vector)
    nv = np.linalg.norm(v)
    if nv == 0:
        raise ValueError("residual_check needs a nonzero vector")
    return float(np.linalg.norm(M @ v - (1j * lam) * v) / nv)


def _mutual_matches(coarse, fine, match_tol):
    """Indices of coarse eigenvalues having a mutual nearest neighbor in the
    fine spectrum within match_tol."""
    if len(coarse) == 0 or len(fine) == 0:
        return np.zeros(len(coarse), dtype=bool)
    dist = np.abs(coarse[:, None] - fine[None, :])
    near_f = dist.argmin(axis=1)
    near_c = dist.argmin(axis=0)
    idx = np.arange(len(coarse))
    matched = (near_c[near_f] == idx) & (dist[idx, near_f] < match_tol)
    return matched


def _tail_fractions(vectors, layout_blocks, grid, r_tail):
    """Weighted eigenvector mass fraction beyond r_tail, per column."""
    w = grid.quad * grid.nodes**2
    dens = np.zeros((grid.n, vectors.shape[1]))
    a2 = np.abs(vectors) ** 2
    for b in range(layout_blocks):
        dens += a2[b * grid.n:(b + 1) * grid.n, :]
    dens *= w[:, None]
    total = dens.sum(axis=0)
    total[total == 0] = 1.0
    return dens[grid.nodes > r_tail, :].sum(axis=0) / total


def classify(coarse_eigs, omega, fine_eigs, *, mass=1.0, channel="ell0",
             grid=None, vectors=None, profile_r_max=None, grid_ref=None,
             tol=Tolerances()):
    """Tag each coarse eigenvalue and compute the instability measure.

    Rules, in order: zero-mode (|lambda| < zero_tol); essential (within
    band_tol of the band i R, |Im| >= mass - |omega| - band_tol, and not
    matched at the finer resolution); unstable (|Re| > re_tol, matched across
    resolutions, eigenvector tail-localized); artifact-suspect (real-part
    candidate failing the match or tail test); else discrete.
    """
    lam = np.asarray(coarse_eigs)
    matched = _mutual_matches(lam, np.asarray(fine_eigs), tol.match_tol)
    band_edge = mass - abs(omega)
    in_band = (np.abs(lam.real) <= tol.band_tol) & \
              (np.abs(lam.imag) >= band_edge - tol.band_tol)
    if vectors is not None and grid is not None and profile_r_max is not None:
        blocks = vectors.shape[0] // grid.n
        tails = _tail_fractions(vectors, blocks, grid, tol.tail_frac * profile_r_max)
        tail_ok = tails < tol.tail_tol
    else:
        tail_ok = np.ones(len(lam), dtype=bool)

    tags = []
    for i, z in enumerate(lam):
        if abs(z) < tol.zero_tol:
            tags.append("zero-mode")
        elif in_band[i] and not matched[i]:
            tags.append("essential")
        elif abs(z.real) > tol.re_tol:
            if matched[i] and tail_ok[i]:
                tags.append("unstable")
            else:
                tags.append("artifact-suspect")
        else:
            tags.append("discrete")
    unstable_re = [z.real for z, t in zip(lam, tags) if t == "unstable"]
    measure = max(unstable_re) if unstable_re else 0.0
    measure = max(measure, 0.0)
    if grid_ref is None:
        grid_ref = (grid.n, grid.map_scale) if grid is not None else (0, 0.0)
    return SpectrumRecord(
        omega=float(omega), channel=channel, grid_ref=tuple(grid_ref),
        eigenvalues=lam, tags=tuple(tags), instability_measure=float(measure),
    )


_GRIDS = {}


def _grid(n, map_scale):
    key = (int(n), float(map_scale))
    if key not in _GRIDS:
        _GRIDS[key] = build_grid(*key)
    return _GRIDS[key]


def solve_channel(profile, channel, n=300, map_scale=10.0, tol=Tolerances()):
    """Full pipeline for one channel: assemble at n and ceil(1.5 n),
    diagonalize (vectors only at the coarse resolution), classify."""
    gc = _grid(n, map_scale)
    gf = _grid(math.ceil(1.5 * n), map_scale)
    lam_c, vecs = compute_spectrum(assemble_channel(profile, gc, channel), True)
    lam_f = compute_spectrum(assemble_channel(profile, gf, channel))
    return classify(
        lam_c, profile.omega, lam_f, mass=profile.mass, channel=channel,
        grid=gc, vectors=vecs, profile_r_max=profile.r_max, tol=tol,
    )


def channel_fields(channel):
    """(ell, m, eta_norm_sq) triple for records and file formats."""
    if channel == "ell0":
        return 0, 0, 0.0
    return channel.ell, channel.m, channel.eta_norm_sq


def record_to_json(record):
    ell, m, eta2 = channel_fields(record.channel)
    return {
        "omega": record.omega,
        "ell": ell,
        "m": m,
        "eta_norm_sq": eta2,
        "n": record.grid_ref[0],
        "map_scale": record.grid_ref[1],
        "eigenvalues": [
            {"re": float(z.real), "im": float(z.imag), "tag": t}
            for z, t in zip(record.eigenvalues, record.tags)
        ],
    }


def save_spectrum_json(record, path):
    _atomic_write(path, json.dumps(record_to_json(record), indent=1) + "\n")


def load_spectrum_json(path):
    with open(path) as fh:
        obj = json.load(fh)
    lam = np.array([e["re"] + 1j * e["im"] for e in obj["eigenvalues"]])
    tags = tuple(e["tag"] for e in obj["eigenvalues"])
    channel = "ell0" if obj["ell"] == 0 else ChannelSpec(obj["ell"], obj["m"], obj["eta_norm_sq"])
    unstable = [z.real for z, t in zip(lam, tags) if t == "unstable"]
    return SpectrumRecord(
        omega=obj["omega"], channel=channel,
        grid_ref=(obj["n"], obj["map_scale"]), eigenvalues=lam, tags=tags,
        instability_measure=max(unstable) if unstable else 0.0,
    )
