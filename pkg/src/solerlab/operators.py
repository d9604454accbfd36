"""Radial linearization operators of the Soler solitary wave.

All operators are stored as dense *real* matrices M; the dynamical
eigenvalues are lambda = -i mu with mu an eigenvalue of M.  Keeping M real
halves memory and makes the lambda -> conj(lambda) spectral symmetry exact
by construction.

Component layout conventions (each name is one grid-sized block):

* L00 (size 2n), layout (a, b): the spherically symmetric self-adjoint block
  acting on (large, small) component perturbations.
* L0(ell) (size 4n), layout (a, b, p, q): the degree-ell self-adjoint block;
  p and q carry the extra angular components, coupled through ell(ell+1)/r.
* A00 (size 4n), layout (a, b, a', b'): the exceptional ell = 0 dynamics,
  M00 = [[L00 + V, V], [-V, -L00 - V]].
* A(ell, m_eff) (size 8n), layout (a, b, p, q, a', b', p', q'): the general
  channel; the potential V couples the (a, b)-type pairs of the two
  conjugation sectors with weights (1, m_eff) as assembled below.

Bi-frequency channels enter purely through the effective order
m_eff = (1 + 2 eta_norm_sq) m of ChannelSpec.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import resample
from .profile import _atomic_write

__all__ = [
    "ChannelSpec",
    "LinearOperator",
    "assemble_L00",
    "assemble_L0",
    "assemble_V",
    "assemble_A00",
    "assemble_A",
    "assemble_channel",
    "symmetrized_matrix",
    "dump_operator",
    "load_operator",
]


@dataclass(frozen=True)
class ChannelSpec:
    """A perturbation channel: spherical degree ell, order m, and the
    bi-frequency parameter eta_norm_sq (0 means one-frequency)."""

    ell: int
    m: int
    eta_norm_sq: float = 0.0

    def __post_init__(self):
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ValueError(f"ell must be a nonnegative integer, got {self.ell!r}")
        if int(self.m) != self.m or abs(self.m) > self.ell:
            raise ValueError(f"need integer |m| <= ell, got m={self.m!r}, ell={self.ell!r}")
        if self.eta_norm_sq < 0:
            raise ValueError(f"eta_norm_sq must be >= 0, got {self.eta_norm_sq!r}")

    @property
    def m_eff(self):
        return (1.0 + 2.0 * self.eta_norm_sq) * self.m


@dataclass(frozen=True)
class LinearOperator:
    """A discretized radial block operator.

    channel is a ChannelSpec for general channels, the tag "ell0" for the
    exceptional spherically symmetric channel, or None for raw building
    blocks (V).  Eigenvalues of the dynamics are lambda = -i mu where mu
    runs over eigenvalues of `matrix`.
    """

    matrix: np.ndarray
    layout: tuple
    channel: object
    grid_ref: tuple
    omega: float


def _diag(x, n):
    return np.diag(np.broadcast_to(x, (n,)))


def assemble_L00(profile, grid):
    """The self-adjoint ell = 0 block [[f-w, d/dr + 2/r], [-d/dr, -f-w]].

    Applied to the profile itself it vanishes: the profile ODEs say exactly
    L00 (v, u)^T = 0 when f is built from the same (v, u)."""
    r, D, n = grid.nodes, grid.diff, grid.n
    v, u, f = resample(grid, profile)
    om = profile.omega
    M = np.block([
        [_diag(f - om, n), D + _diag(2.0 / r, n)],
        [-D, _diag(-f - om, n)],
    ])
    return LinearOperator(M, ("a", "b"), "ell0", (grid.n, grid.map_scale), om)


def assemble_L0(profile, grid, ell):
    """The self-adjoint degree-ell block (size 4n) on components (a,b,p,q)."""
    if ell < 1 or int(ell) != ell:
        raise ValueError(f"ell must be a positive integer, got {ell!r}")
    r, D, n = grid.nodes, grid.diff, grid.n
    v, u, f = resample(grid, profile)
    om = profile.omega
    Z = np.zeros((n, n))
    dfo = _diag(f - om, n)
    dnfo = _diag(-f - om, n)
    ang = _diag(ell * (ell + 1) / r, n)
    inv_r = _diag(1.0 / r, n)
    M = np.block([
        [dfo, D + 2 * inv_r, Z, ang],
        [-D, dnfo, ang, Z],
        [Z, inv_r, dfo, D + inv_r],
        [inv_r, Z, -D - inv_r, dnfo],
    ])
    return LinearOperator(M, ("a", "b", "p", "q"),
                          ChannelSpec(int(ell), 0), (grid.n, grid.map_scale), om)


def assemble_V(profile, grid):
    """The node-diagonal potential [[-v^2, uv], [uv, -u^2]].

    Symmetric, and -V is positive semidefinite: each node block is rank one
    with eigenvalues 0 and v^2 + u^2."""
    n = grid.n
    v, u, _ = resample(grid, profile)
    M = np.block([
        [np.diag(-v * v), np.diag(u * v)],
        [np.diag(u * v), np.diag(-u * u)],
    ])
    return LinearOperator(M, ("a", "b"), None, (grid.n, grid.map_scale), profile.omega)


def assemble_A00(profile, grid):
    """The exceptional channel M00 = [[L00+V, V], [-V, -L00-V]] (size 4n)."""
    L = assemble_L00(profile, grid).matrix
    V = assemble_V(profile, grid).matrix
    M = np.block([[L + V, V], [-V, -L - V]])
    return LinearOperator(M, ("a", "b", "a'", "b'"), "ell0",
                          (grid.n, grid.map_scale), profile.omega)


def assemble_A(profile, grid, channel):
    """The general channel (size 8n) at effective order channel.m_eff.

    M = [[L0, 0], [0, -L0]] plus the potential coupling of the (a, b)-type
    pairs of both sectors with weights (1, m_eff, 1, -m_eff)."""
    if not isinstance(channel, ChannelSpec):
        channel = ChannelSpec(*channel)
    if channel.ell < 1:
        raise ValueError("general channels need ell >= 1; use assemble_A00 for ell=0")
    L = assemble_L0(profile, grid, channel.ell).matrix
    V = assemble_V(profile, grid).matrix
    m = channel.m_eff
    n2 = 2 * grid.n
    Z = np.zeros((n2, n2))
    M = np.block([
        [L, np.zeros_like(L)],
        [np.zeros_like(L), -L],
    ])
    M += np.block([
        [V, m * V, V, -m * V],
        [Z, Z, Z, Z],
        [-V, -m * V, -V, m * V],
        [Z, Z, Z, Z],
    ])
    layout = ("a", "b", "p", "q", "a'", "b'", "p'", "q'")
    return LinearOperator(M, layout, channel, (grid.n, grid.map_scale), profile.omega)


def assemble_channel(profile, grid, channel):
    """Dispatch: the tag "ell0" (or ell = 0) gives A00, else the general A."""
    if channel == "ell0" or (isinstance(channel, ChannelSpec) and channel.ell == 0):
        return assemble_A00(profile, grid)
    return assemble_A(profile, grid, channel)


def symmetrized_matrix(op, grid):
    """Similarity-transform a self-adjoint block (L00 or L0) into its
    symmetric realization W^{1/2} M W^{-1/2}.

    W is the radial measure r^2 quad per component; the angular components
    (p, q) carry the extra ell(ell+1) normalization of their harmonics.
    The result being (numerically) symmetric certifies real spectrum."""
    base = grid.quad * grid.nodes**2
    factors = []
    for name in op.layout:
        if name in ("p", "q"):
            ell = op.channel.ell
            factors.append(ell * (ell + 1) * base)
        elif name in ("a", "b"):
            factors.append(base)
        else:
            raise ValueError(f"symmetrization applies to self-adjoint blocks only, "
                             f"layout {op.layout} given")
    wsq = np.sqrt(np.concatenate(factors))
    return op.matrix * (wsq[:, None] / wsq[None, :])


def dump_operator(op, path):
    """Plain-text dump: first line 'rows cols', then row-major entries."""
    M = op.matrix
    lines = [f"{M.shape[0]} {M.shape[1]}"]
    lines.extend(" ".join(f"{float(x)!r}" for x in row) for row in M)
    _atomic_write(path, "\n".join(lines) + "\n")


def load_operator(path):
    """Read back a dumped matrix (returns the bare ndarray)."""
    with open(path) as fh:
        rows, cols = (int(t) for t in fh.readline().split())
        M = np.loadtxt(fh, dtype=float, ndmin=2)
    if M.shape != (rows, cols):
        raise ValueError(f"dump header {(rows, cols)} disagrees with data {M.shape}")
    return M
