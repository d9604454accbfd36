"""Bi-frequency modes, SU(1,1) transformations, and conserved charges.

The ansatz family is parameterized by a radial profile and two spinor
parameters (xi, eta) with ||xi||^2 - ||eta||^2 = 1: the xi sector carries
the e^{-i omega t} component and the eta sector the e^{+i omega t} one.
The scalar density of every member is time-independent and equals the
one-frequency density v^2 - u^2 pointwise.

The symmetry group element g = (a, b), |a|^2 - |b|^2 = 1, acts by
psi -> (a + i b gamma^2 K) psi with K complex conjugation; on the ansatz
parameters this is the closed form

    xi -> a xi - b eta_c,   eta -> a eta + b xi_c,
    where z_c = -i sigma_2 conj(z).

Charges reduce to radial quadratures through Q0 = 4 pi int (v^2+u^2) r^2 dr:

    Q = Q0 (||xi||^2 + ||eta||^2),   Sigma = 2 i Q0 xi^T sigma_2 eta.

The energy functional is obtained from the Lagrangian by Legendre transform
of the time-derivative term; for the ansatz it reduces (see the derivation
note in the repository) to

    E = 4 pi int [ v u' - u v' + 2uv/r + mass (v^2-u^2)
                   - (v^2-u^2)^2 / 2 ] r^2 dr
      = 4 pi int [ omega (v^2+u^2) + (v^2-u^2)^2 / 2 ] r^2 dr,

the two forms being identical on exact profiles by the radial ODEs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .profile import _atomic_write, evaluate_profile

__all__ = [
    "SpinorField",
    "SU11Element",
    "make_bifrequency",
    "apply_su11",
    "conjugate_spinor",
    "scalar_density",
    "is_attracting",
    "charges",
    "energy",
    "energy_density",
    "charge_table",
    "save_charge_table_csv",
]

_SIGMA2 = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_NORM_TOL = 1e-9


@dataclass(frozen=True)
class SU11Element:
    """Group element (a, b) with |a|^2 - |b|^2 = 1."""

    a: complex
    b: complex

    def __post_init__(self):
        if abs(abs(self.a) ** 2 - abs(self.b) ** 2 - 1.0) > _NORM_TOL:
            raise ValueError(f"|a|^2 - |b|^2 must be 1, got a={self.a!r}, b={self.b!r}")

    def compose(self, other):
        """self after other (matrix product in the defining representation)."""
        return SU11Element(
            self.a * other.a + self.b * np.conj(other.b),
            self.a * other.b + self.b * np.conj(other.a),
        )

    @classmethod
    def identity(cls):
        return cls(1.0 + 0.0j, 0.0j)

    @classmethod
    def boost(cls, s, phase=0.0):
        """One-parameter family (cosh s, e^{i phase} sinh s)."""
        return cls(complex(np.cosh(s)), np.exp(1j * phase) * np.sinh(s))


@dataclass(frozen=True)
class SpinorField:
    """An ansatz-family field: radial profile plus spinor parameters."""

    profile: object
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=complex).reshape(2)
        eta = np.asarray(self.eta, dtype=complex).reshape(2)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)
        gap = np.vdot(xi, xi).real - np.vdot(eta, eta).real
        if abs(gap - 1.0) > _NORM_TOL:
            raise ValueError(f"normalization ||xi||^2 - ||eta||^2 = 1 violated ({gap})")

    @property
    def omega(self):
        return self.profile.omega

    @property
    def is_one_frequency(self):
        return bool(np.all(self.eta == 0))


def make_bifrequency(profile, xi, eta=(0.0, 0.0)):
    """Construct an ansatz-family field; raises on bad normalization."""
    return SpinorField(profile, np.asarray(xi), np.asarray(eta))


def conjugate_spinor(z):
    """The charge-conjugate 2-spinor z_c = -i sigma_2 conj(z)."""
    z = np.asarray(z, dtype=complex).reshape(2)
    return -1j * (_SIGMA2 @ z.conj())


def apply_su11(g, fld):
    """Closed-form group action on the ansatz parameters."""
    xi = g.a * fld.xi - g.b * conjugate_spinor(fld.eta)
    eta = g.a * fld.eta + g.b * conjugate_spinor(fld.xi)
    return SpinorField(fld.profile, xi, eta)


def scalar_density(fld, r):
    """psi-bar psi at radius r: time-independent, equal to v^2 - u^2."""
    v, u = evaluate_profile(fld.profile, r)
    return v * v - u * u


def is_attracting(fld, r_samples=None):
    """True when the scalar density is strictly positive on the sampled
    radii (fields of this class attract each other)."""
    if r_samples is None:
        r_samples = fld.profile.samples[:, 0]
    r = np.atleast_1d(np.asarray(r_samples, dtype=float))
    return bool(np.all(scalar_density(fld, r[r > 0]) > 0))


def _q0(profile, grid):
    v, u = evaluate_profile(profile, grid.nodes)
    return 4.0 * np.pi * float(grid.quad @ ((v * v + u * u) * grid.nodes**2))


def charges(fld, grid):
    """(Q, Sigma) by radial quadrature of the angular-reduced densities."""
    q0 = _q0(fld.profile, grid)
    Q = q0 * float(np.vdot(fld.xi, fld.xi).real + np.vdot(fld.eta, fld.eta).real)
    Sigma = 2j * q0 * complex(fld.xi @ (_SIGMA2 @ fld.eta))
    return Q, Sigma


def energy_density(profile, r, form="reduced"):
    """Radial energy density (without the 4 pi r^2 measure)."""
    v, u = evaluate_profile(profile, r)
    q2 = v * v - u * u
    if form == "reduced":
        return profile.omega * (v * v + u * u) + 0.5 * q2 * q2
    if form != "direct":
        raise ValueError(f"unknown energy form {form!r}")
    r = np.asarray(r, dtype=float)
    core = r <= profile.r_cut
    dv = np.empty_like(r)
    du = np.empty_like(r)
    dv[core] = profile._spl_v(r[core], 1)
    du[core] = profile._spl_u(r[core], 1)
    rt = r[~core]
    kap, om, ms = profile.kappa, profile.omega, profile.mass
    vt, _ = evaluate_profile(profile, rt) if rt.size else (np.empty(0),) * 2
    dvt = -(kap + 1.0 / rt) * vt
    dv[~core] = dvt
    du[~core] = ((kap + 1.0 / rt) * dvt - vt / rt**2) / (om + ms)
    return v * du - u * dv + 2 * u * v / r + ms * q2 - 0.5 * q2 * q2


def energy(profile, grid, form="reduced"):
    """Field energy E(omega) of the one-frequency wave by quadrature."""
    dens = energy_density(profile, grid.nodes, form=form)
    return 4.0 * np.pi * float(grid.quad @ (dens * grid.nodes**2))


def charge_table(profiles, grid):
    """Rows (omega, Q, Re Sigma, Im Sigma, E) for one-frequency modes."""
    rows = []
    for prof in profiles:
        fld = make_bifrequency(prof, (1.0, 0.0))
        Q, Sigma = charges(fld, grid)
        rows.append((prof.omega, Q, Sigma.real, Sigma.imag, energy(prof, grid)))
    return rows


def save_charge_table_csv(rows, path):
    lines = ["omega,Q,Sigma_re,Sigma_im,E"]
    lines.extend(
        f"{float(om)!r},{float(q)!r},{float(sr)!r},{float(si)!r},{float(e)!r}"
        for om, q, sr, si, e in rows)
    _atomic_write(path, "\n".join(lines) + "\n")
