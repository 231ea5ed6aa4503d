"""Exact 2D Ising thermodynamics and the Wulff droplet shape.

Everything here is closed-form input for the droplet ratio Delta of
:mod:`dropletlab.theory`: the critical coupling beta_c = ln(1+sqrt(2))/2, the
spontaneous magnetization m*(beta), and the anisotropic interface tension
tau(theta) of the square-lattice Ising model, plus a numerical Wulff
construction turning tau(theta) into the unit-area droplet cost tau_W.

Unit convention: every tension returned here is dimensionless -- the beta
factor is absorbed -- so it is directly the log-probability cost per unit
boundary length, and a droplet of area A costs tau_W * sqrt(A) in log-weight
units.  The axis value is tau(0) = 2 beta + ln tanh beta.

The angular tension comes from the exact equi-decay body of the model: the
Wulff shape is, up to scale, {(X, Y): cosh X + cosh Y <= c(beta)} with
c = cosh(2 beta)^2 / sinh(2 beta), and tau(theta) is its support function.
Solving the tangency condition gives, per angle, a quadratic in mu^2 with

    tau(theta) = a asinh(a mu) + b asinh(b mu),   a = cos theta, b = sin theta,
    mu^2 = c (c^2 - 4) / (c + sqrt(c^2 - (b^2 - a^2)^2 (c^2 - 4))),

which reduces at theta = 0 to acosh(c - 1) = 2 beta + ln tanh beta, the known
axis tension, and is evaluated in the rationalized form above to stay stable
near the diagonal.  Susceptibility chi has no closed form and is carried as
opaque measured data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable

import numpy as np
from scipy.spatial import ConvexHull

__all__ = [
    "BETA_C",
    "IsingThermo",
    "TauFunction",
    "WulffShape",
    "beta_critical",
    "m_star",
    "tau_axis",
    "tau_ising",
    "wulff_construct",
    "tau_w_unit_volume",
    "read_tau_table",
    "write_polygon_csv",
]

BETA_C = 0.5 * math.log(1.0 + math.sqrt(2.0))

DEFAULT_RESOLUTION = 4096


def beta_critical() -> float:
    """Self-dual critical coupling ln(1+sqrt(2))/2; sinh(2 beta_c) = 1."""
    return BETA_C


def m_star(beta: float) -> float:
    """Spontaneous magnetization (1 - sinh(2 beta)^-4)^(1/8); 0 at or below beta_c."""
    if beta <= BETA_C:
        return 0.0
    s = math.sinh(2.0 * beta)
    return (1.0 - s ** -4) ** 0.125


def tau_axis(beta: float) -> float:
    """Axis-direction interface tension 2 beta + ln tanh beta (dimensionless)."""
    _require_ordered(beta)
    return 2.0 * beta + math.log(math.tanh(beta))


def _require_ordered(beta: float) -> None:
    if not beta > BETA_C:
        raise ValueError(
            f"interface tension needs the ordered phase: beta={beta} <= beta_c={BETA_C:.6f}"
        )


def tau_ising(beta: float, theta):
    """Exact anisotropic interface tension at normal angle theta (scalar or array).

    Square symmetry: tau(theta) = tau(theta + pi/2) = tau(-theta).  At
    theta = 0 this equals tau_axis(beta) exactly.
    """
    _require_ordered(beta)
    th = np.asarray(theta, dtype=float)
    a = np.cos(th)
    b = np.sin(th)
    c = math.cosh(2.0 * beta) ** 2 / math.sinh(2.0 * beta)
    aniso = (b * b - a * a) ** 2
    # mu^2 from the tangency quadratic, rationalized so the anisotropy -> 0
    # (diagonal) limit is exact rather than catastrophically cancelled.
    disc = np.sqrt(c * c - aniso * (c * c - 4.0))
    mu = np.sqrt(c * (c * c - 4.0) / (c + disc))
    val = a * np.arcsinh(a * mu) + b * np.arcsinh(b * mu)
    if np.ndim(theta) == 0:
        return float(val)
    return val


class TauFunction:
    """Angular interface tension theta -> tau(theta) > 0 with declared symmetry.

    symmetry is one of "isotropic", "square", "none"; the square case is the
    lattice symmetry group (theta -> theta + pi/2, theta -> -theta).
    """

    def __init__(self, fn: Callable[[np.ndarray], np.ndarray], symmetry: str = "none"):
        if symmetry not in ("isotropic", "square", "none"):
            raise ValueError(f"unknown symmetry {symmetry!r}")
        self._fn = fn
        self.symmetry = symmetry

    def __call__(self, theta):
        val = self._fn(np.asarray(theta, dtype=float))
        if np.ndim(theta) == 0:
            return float(val)
        return np.asarray(val, dtype=float)

    @classmethod
    def isotropic(cls, tau0: float) -> "TauFunction":
        if tau0 <= 0.0:
            raise ValueError("tau must be positive")
        return cls(lambda th: np.full_like(th, tau0, dtype=float), symmetry="isotropic")

    @classmethod
    def ising(cls, beta: float) -> "TauFunction":
        _require_ordered(beta)
        return cls(lambda th: tau_ising(beta, th), symmetry="square")

    @classmethod
    def from_table(cls, thetas, taus, symmetry: str = "none") -> "TauFunction":
        """Periodic linear interpolation of sampled (theta, tau) pairs."""
        th = np.mod(np.asarray(thetas, dtype=float), 2.0 * math.pi)
        ta = np.asarray(taus, dtype=float)
        if th.ndim != 1 or th.shape != ta.shape or th.size < 3:
            raise ValueError("need matching 1D theta/tau arrays with >= 3 samples")
        if np.any(ta <= 0.0):
            raise ValueError("tau samples must be strictly positive")
        order = np.argsort(th, kind="stable")
        th, ta = th[order], ta[order]
        return cls(
            lambda q: np.interp(np.mod(q, 2.0 * math.pi), th, ta, period=2.0 * math.pi),
            symmetry=symmetry,
        )


@dataclass(frozen=True)
class WulffShape:
    """Convex polygon approximating the minimal-cost droplet shape.

    vertices are counter-clockwise; area is the enclosed area; boundary_cost
    is W = sum of tau(edge normal) * edge length over the polygon boundary.
    """

    vertices: np.ndarray
    area: float
    boundary_cost: float
    resolution: int

    def __post_init__(self) -> None:
        if self.area <= 0.0:
            raise ValueError("Wulff shape must have positive area")


def wulff_construct(tau: TauFunction, resolution: int = DEFAULT_RESOLUTION) -> WulffShape:
    """Intersect the half-planes {x . n(theta_i) <= tau(theta_i)} on an angular grid.

    Implemented through the polar dual: the vertices of the intersection are
    the facet equations of the convex hull of the points n_i / tau_i, which is
    robust when some constraints go inactive (faceting).  The boundary cost W
    re-evaluates tau at each realized edge normal, making the exact polygon
    identity W = 2 * area a nontrivial self-consistency check.
    """
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16, got {resolution}")
    angles = 2.0 * math.pi * np.arange(resolution) / resolution
    taus = np.asarray(tau(angles), dtype=float)
    if np.any(~np.isfinite(taus)) or np.any(taus <= 0.0):
        raise ValueError("tau(theta) must be finite and positive on the angular grid")

    points = np.column_stack((np.cos(angles), np.sin(angles))) / taus[:, None]
    try:
        hull = ConvexHull(points)
    except Exception as exc:  # scipy.spatial.QhullError and friends
        raise ValueError(f"degenerate Wulff intersection: {exc}") from None

    # Hull facet u.x <= h (u outward unit normal, h > 0 since the origin is
    # interior) dualizes to the intersection vertex u/h.
    normals = hull.equations[:, :2]
    offsets = -hull.equations[:, 2]
    if np.any(offsets <= 0.0):
        raise ValueError("degenerate Wulff intersection: origin not interior")
    verts = normals / offsets[:, None]
    order = np.argsort(np.arctan2(verts[:, 1], verts[:, 0]))
    verts = verts[order]

    x, y = verts[:, 0], verts[:, 1]
    area = 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
    if not area > 0.0:
        raise ValueError("degenerate Wulff intersection: vanishing area")

    edges = np.roll(verts, -1, axis=0) - verts
    lengths = np.hypot(edges[:, 0], edges[:, 1])
    # CCW ordering: outward normal of edge e is (e_y, -e_x)/|e|.
    keep = lengths > 0.0
    edge_angles = np.arctan2(-edges[keep, 0], edges[keep, 1])
    boundary = float(np.sum(np.asarray(tau(edge_angles)) * lengths[keep]))

    return WulffShape(vertices=verts, area=area, boundary_cost=boundary, resolution=resolution)


def tau_w_unit_volume(shape: WulffShape) -> float:
    """Boundary cost of the shape rescaled to unit area: W / sqrt(area).

    Equals 2 sqrt(area) up to the discretization consistency of the
    construction; a droplet of area A then costs tau_W * sqrt(A).
    """
    return shape.boundary_cost / math.sqrt(shape.area)


@dataclass(frozen=True)
class IsingThermo:
    """Bundle of exact thermodynamic inputs at one coupling.

    chi (susceptibility, Var M / number of sites) has no closed form; it stays
    None until supplied by measurement or user input.
    """

    beta: float
    beta_c: float
    m_star: float
    tau_axis: float
    tau_w: float
    chi: float | None = None
    resolution: int = DEFAULT_RESOLUTION

    @classmethod
    def at(cls, beta: float, resolution: int = DEFAULT_RESOLUTION, chi: float | None = None) -> "IsingThermo":
        _require_ordered(beta)
        shape = wulff_construct(TauFunction.ising(beta), resolution=resolution)
        return cls(
            beta=beta,
            beta_c=BETA_C,
            m_star=m_star(beta),
            tau_axis=tau_axis(beta),
            tau_w=tau_w_unit_volume(shape),
            chi=chi,
            resolution=resolution,
        )

    def with_chi(self, chi: float) -> "IsingThermo":
        if chi <= 0.0:
            raise ValueError("chi must be positive")
        return replace(self, chi=chi)


def read_tau_table(path: str | Path) -> TauFunction:
    """Load a two-column text file (theta_radians, tau); whitespace or comma separated."""
    p = Path(path)
    try:
        data = np.loadtxt(p)
    except ValueError:
        data = np.loadtxt(p, delimiter=",")
    data = np.atleast_2d(data)
    if data.shape[1] != 2:
        raise ValueError(f"{p}: expected two columns (theta_radians, tau), got shape {data.shape}")
    return TauFunction.from_table(data[:, 0], data[:, 1])


def write_polygon_csv(shape: WulffShape, path: str | Path) -> None:
    """Emit the shape boundary as a CSV with header x,y (17 significant digits)."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("x,y\n")
        for vx, vy in shape.vertices:
            fh.write(f"{vx:.17g},{vy:.17g}\n")
