"""Boundary-loop extraction and droplet census for spin configurations.

A configuration with plus boundary decomposes into closed loops on the dual
lattice separating +/- regions.  Loops are classified by their L-infinity
diameter against a two-sided window [K ln L, L^(2/3)/K]: below it small
(thermal), inside it intermediate (forbidden at equilibrium in the large
system limit), above it large (the macroscopic droplet scale).  The droplet
fraction compares the largest large loop's enclosed area to the planned
excess volume.

At bench scales the window can invert (K ln L > L^(2/3)/K); a census then
carries window_valid=False and the intermediate band is empty rather than
raising, so that size sweeps spanning the inversion stay comparable.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .lattice import CanonicalConstraint, SpinConfig


@dataclass(frozen=True)
class Contour:
    """One closed dual-lattice loop.

    volume counts every enclosed cell, nested islands included; diameter is
    the L-infinity extent over the loop's corner points; exterior marks
    loops not nested inside any other loop.  interior_spin is the spin value
    immediately inside the loop's first edge.
    """

    length: int
    diameter: int
    volume: int
    interior_spin: int
    exterior: bool
    _rows: np.ndarray
    _cols: np.ndarray

    def __post_init__(self) -> None:
        if self.length < 4 or self.length % 2 != 0:
            raise ValueError(f"loop length must be even and >= 4, got {self.length}")
        if self.volume < 1 or self.diameter < 1:
            raise ValueError("volume and diameter must be >= 1")


@dataclass(frozen=True)
class ContourCensus:
    """Classification counts for one configuration at window constant K."""

    n_small: int
    n_intermediate: int
    n_large: int
    K: float
    lo: float
    hi: float
    window_valid: bool
    largest_volume: int
    largest_diameter: int
    total_large_volume: int

    @property
    def n_total(self) -> int:
        return self.n_small + self.n_intermediate + self.n_large


def _trace(config: SpinConfig):
    if config.boundary != "plus":
        raise ValueError("loop extraction requires the plus boundary")
    L = config.L
    cap = L * L + 1
    lengths = np.zeros(cap, dtype=np.int64)
    diams = np.zeros(cap, dtype=np.int64)
    vols = np.zeros(cap, dtype=np.int64)
    inner = np.zeros(cap, dtype=np.int64)
    starts = np.zeros(cap + 1, dtype=np.int64)
    n_vedges = L * (L + 1)
    vrows = np.zeros(n_vedges, dtype=np.int64)
    vcols = np.zeros(n_vedges, dtype=np.int64)
    count = _kernels.trace_contours(config.padded, L, lengths, diams, vols, inner, starts, vrows, vcols)
    return count, lengths, diams, vols, inner, starts, vrows, vcols


def extract_contours(config: SpinConfig) -> list[Contour]:
    """All boundary loops of the configuration, with nesting resolved."""
    count, lengths, diams, vols, inner, starts, vrows, vcols = _trace(config)
    L = config.L
    depth = np.zeros((L, L), dtype=np.int64)
    if count:
        _kernels.paint_interior_depth(L, count, starts, vrows, vcols, depth)
    out = []
    for k in range(count):
        lo, hi = starts[k], starts[k + 1]
        r0, c0 = int(vrows[lo]), int(vcols[lo])
        out.append(
            Contour(
                length=int(lengths[k]),
                diameter=int(diams[k]),
                volume=int(vols[k]),
                interior_spin=int(inner[k]),
                exterior=bool(depth[r0, c0] == 1),
                _rows=vrows[lo:hi].copy(),
                _cols=vcols[lo:hi].copy(),
            )
        )
    return out


def render_spins(contours: list[Contour], L: int) -> np.ndarray:
    """Rebuild the spin grid from loops: start all-plus, flip interiors.

    Nesting needs no special casing: a cell inside k loops is flipped k
    times, which is exactly the +- alternation across nested boundaries.
    """
    spins = np.ones((L, L), dtype=np.int8)
    for c in contours:
        rows = np.asarray(c._rows)
        cols = np.asarray(c._cols)
        for r in np.unique(rows):
            cs = np.sort(cols[rows == r])
            for a in range(0, cs.size, 2):
                spins[r, cs[a] : cs[a + 1]] *= -1
    return spins


def reconstruct_magnetization(contours: list[Contour], L: int) -> int:
    """M implied by the loop set: interior-minus loops add area, holes subtract."""
    minus = 0
    for c in contours:
        minus += c.volume if c.interior_spin < 0 else -c.volume
    return L * L - 2 * minus


def census_window(L: int, K: float) -> tuple[float, float, bool]:
    """(lo, hi, valid) thresholds for side length L and window constant K."""
    if L < 2:
        raise ValueError(f"L must be >= 2, got {L}")
    if not (math.isfinite(K) and K > 0.0):
        raise ValueError(f"K must be positive and finite, got {K}")
    lo = K * math.log(L)
    hi = L ** (2.0 / 3.0) / K
    return lo, hi, lo < hi


def classify(contours: list[Contour], L: int, K: float) -> ContourCensus:
    """Count loops per diameter band; largest refers to the large band only.

    Bands are decided top down: above hi is large, inside [lo, hi] is
    intermediate, below lo is small, so the partition stays exhaustive even
    when the window is inverted (window_valid False, empty intermediate band).
    """
    lo, hi, valid = census_window(L, K)
    n_small = n_inter = n_large = 0
    largest_v = 0
    largest_d = 0
    total_large_v = 0
    for c in contours:
        d = c.diameter
        if d > hi:
            n_large += 1
            total_large_v += c.volume
            if d > largest_d or (d == largest_d and c.volume > largest_v):
                largest_d = d
                largest_v = c.volume
        elif lo <= d <= hi:
            n_inter += 1
        else:
            n_small += 1
    return ContourCensus(
        n_small=n_small,
        n_intermediate=n_inter,
        n_large=n_large,
        K=float(K),
        lo=lo,
        hi=hi,
        window_valid=valid,
        largest_volume=largest_v,
        largest_diameter=largest_d,
        total_large_volume=total_large_v,
    )


def census_of(config: SpinConfig, K: float) -> ContourCensus:
    """classify() without building per-loop objects (hot path for sweeps)."""
    count, lengths, diams, vols, inner, starts, vrows, vcols = _trace(config)
    L = config.L
    lo, hi, valid = census_window(L, K)
    d = diams[:count]
    v = vols[:count]
    large = d > hi
    inter = (~large) & (d >= lo)
    n_large = int(np.count_nonzero(large))
    largest_v = 0
    largest_d = 0
    if n_large:
        dl = d[large]
        vl = v[large]
        dmax = dl.max()
        largest_d = int(dmax)
        largest_v = int(vl[dl == dmax].max())
    return ContourCensus(
        n_small=int(count - n_large - np.count_nonzero(inter)),
        n_intermediate=int(np.count_nonzero(inter)),
        n_large=n_large,
        K=float(K),
        lo=lo,
        hi=hi,
        window_valid=valid,
        largest_volume=largest_v,
        largest_diameter=largest_d,
        total_large_volume=int(v[large].sum()),
    )


def droplet_fraction(census: ContourCensus, constraint: CanonicalConstraint) -> float:
    """Volume of the largest large loop over the excess volume; 0 if none."""
    if constraint.v_l <= 0.0:
        raise ValueError(f"droplet fraction needs v_l > 0, got {constraint.v_l}")
    if census.n_large == 0:
        return 0.0
    return census.largest_volume / constraint.v_l


@dataclass(frozen=True)
class CensusSummary:
    """Event frequencies over a sample of censuses, with binomial errors.

    p_no_intermediate: no loop in the intermediate band.
    p_no_spanning: additionally no large loop (nothing at or above the
    window's lower edge).
    p_droplet: at least one large loop present.
    """

    n: int
    p_no_intermediate: float
    p_no_intermediate_err: float
    p_no_spanning: float
    p_no_spanning_err: float
    p_droplet: float
    p_droplet_err: float
    mean_lambda: float | None
    mean_lambda_err: float | None
    lambda_values: np.ndarray | None


def _binomial_err(p: float, n: int) -> float:
    return math.sqrt(p * (1.0 - p) / n)


def census_frequencies(records: list[ContourCensus], v_l: float | None = None) -> CensusSummary:
    """Aggregate event frequencies; droplet-fraction stats when v_l given."""
    n = len(records)
    if n == 0:
        raise ValueError("need at least one census record")
    a = sum(1 for r in records if r.n_intermediate == 0) / n
    b = sum(1 for r in records if r.n_intermediate == 0 and r.n_large == 0) / n
    c = sum(1 for r in records if r.n_large >= 1) / n
    lam = lam_err = None
    lam_values = None
    if v_l is not None:
        if v_l <= 0.0:
            raise ValueError(f"v_l must be positive, got {v_l}")
        lam_values = np.array([r.largest_volume / v_l if r.n_large else 0.0 for r in records])
        lam = float(lam_values.mean())
        lam_err = float(lam_values.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return CensusSummary(
        n=n,
        p_no_intermediate=a,
        p_no_intermediate_err=_binomial_err(a, n),
        p_no_spanning=b,
        p_no_spanning_err=_binomial_err(b, n),
        p_droplet=c,
        p_droplet_err=_binomial_err(c, n),
        mean_lambda=lam,
        mean_lambda_err=lam_err,
        lambda_values=lam_values,
    )


def parse_grid(text: str) -> np.ndarray:
    """Spin grid from a plain-text block of '+' and '-' characters."""
    rows = [line.strip() for line in text.strip().splitlines() if line.strip()]
    if not rows or any(len(r) != len(rows[0]) for r in rows):
        raise ValueError("grid rows must be nonempty and equal length")
    lut = {"+": 1, "-": -1}
    try:
        return np.array([[lut[ch] for ch in row] for row in rows], dtype=np.int8)
    except KeyError as exc:
        raise ValueError(f"grid may contain only '+' and '-', got {exc.args[0]!r}") from None
