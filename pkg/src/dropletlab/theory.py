"""Large-deviation free energy of droplet formation in a two-phase system.

A system of volume V carrying an excess delta-N of the minority phase can pay
for it in two ways: spread it over Gaussian bulk fluctuations (quadratic cost,
compressibility kappa) or condense a fraction into a single macroscopic droplet
(surface cost, Wulff constant tau_W).  After scaling out the overall cost
tau_W * (delta-V)^((d-1)/d), the fraction lambda of the excess condensed into
the droplet is governed by a single one-parameter variational function

    Phi_Delta(lambda) = lambda^((d-1)/d) + Delta * (1 - lambda)^2,

with all system detail compressed into the dimensionless ratio Delta.  The
minimizer jumps from lambda = 0 (all fluctuation) to lambda >= 2/(d+1) (a
macroscopic droplet) at the critical value

    Delta_c = (1/d) * ((d+1)/2)^((d+1)/d),

and for Delta > Delta_c the two regimes are separated by an interdicting local
maximum of Phi.  Everything in this module is exact arithmetic on that
variational problem; no simulation enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "PhiMinResult",
    "TwoPhaseParams",
    "MechanismSplit",
    "phi",
    "critical_delta",
    "critical_lambda",
    "spinodal_delta",
    "minimize_phi",
    "lambda_curve",
    "delta_from_physical",
    "delta_ising",
    "v_from_delta_ising",
    "crossover_scale",
    "mechanism_costs",
]

# Bisection tolerance on lambda for stationary points.
LAMBDA_TOL = 1e-12
# |Delta - Delta_c| below which the two minima are reported as degenerate.
DEGENERACY_TOL = 1e-9


def _check_d(d: int) -> None:
    if not isinstance(d, (int,)) or isinstance(d, bool):
        raise ValueError(f"dimension d must be an integer >= 2, got {d!r}")
    if d < 2:
        raise ValueError(f"dimension d must be >= 2, got {d}")


def _check_delta(delta: float) -> None:
    if not math.isfinite(delta) or delta < 0.0:
        raise ValueError(f"Delta must be finite and >= 0, got {delta!r}")


def phi(d: int, delta: float, lam: float) -> float:
    """Variational cost Phi_Delta(lambda) = lambda^((d-1)/d) + Delta*(1-lambda)^2.

    lambda is the fraction of the excess carried by the droplet; the remaining
    (1-lambda) is absorbed by Gaussian background fluctuations.
    """
    _check_d(d)
    _check_delta(delta)
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must lie in [0, 1], got {lam!r}")
    return lam ** ((d - 1) / d) + delta * (1.0 - lam) ** 2


def critical_delta(d: int) -> float:
    """Delta above which a macroscopic droplet is the global minimizer.

    Closed form ((d+1)/2)^((d+1)/d) / d; 0.918558653543692 in d=2.
    """
    _check_d(d)
    return ((d + 1) / 2.0) ** ((d + 1) / d) / d


def critical_lambda(d: int) -> float:
    """Droplet fraction at the transition: lambda jumps from 0 to 2/(d+1)."""
    _check_d(d)
    return 2.0 / (d + 1)


def spinodal_delta(d: int) -> float:
    """Smallest Delta with a metastable droplet branch.

    Below this value the stationarity condition has no roots and any droplet
    shrinks downhill; between it and critical_delta(d) a local droplet minimum
    exists but lambda = 0 stays global.  The branch appears at
    lambda = 1/(d+1).
    """
    _check_d(d)
    return (d - 1) * (d + 1) ** (1.0 + 1.0 / d) / (2.0 * d * d)


def _stationarity_gap(d: int, delta: float, lam: float) -> float:
    # G(lambda) = Phi'(lambda) restricted to lambda in (0,1):
    #   ((d-1)/d) lambda^(-1/d) - 2 Delta (1 - lambda)
    return ((d - 1) / d) * lam ** (-1.0 / d) - 2.0 * delta * (1.0 - lam)


def _bisect_gap(d: int, delta: float, lo: float, hi: float, increasing: bool) -> float:
    # Bracketed bisection for G = 0; G is monotone on each side of its minimum.
    a, b = lo, hi
    for _ in range(200):
        if b - a <= LAMBDA_TOL:
            break
        mid = 0.5 * (a + b)
        g = _stationarity_gap(d, delta, mid)
        if (g < 0.0) == increasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


@dataclass(frozen=True)
class PhiMinResult:
    """Global minimum of Phi_Delta plus the interdicting barrier when present.

    lambda_star is 0 below the transition and the droplet root (>= 2/(d+1))
    above it.  Exactly at the transition (within DEGENERACY_TOL on Delta) the
    two minima tie; degenerate is set and lambda_star reports the fluctuation
    side, leaving the choice to the caller.  barrier_lambda/barrier_value
    describe the local maximum separating the two basins whenever the
    stationarity condition has roots (Delta > spinodal_delta), else None.
    """

    lambda_star: float
    phi_value: float
    degenerate: bool
    barrier_lambda: float | None = None
    barrier_value: float | None = None


def minimize_phi(d: int, delta: float) -> PhiMinResult:
    """Minimize Phi_Delta over lambda in [0, 1].

    Stationary points solve ((d-1)/d) lambda^(-1/d) = 2 Delta (1-lambda).
    The gap function is strictly convex-like (decreasing then increasing) with
    minimum at lambda_tilde = ((d-1)/(2 Delta d^2))^(d/(d+1)), so the barrier
    root is bisected on (0, lambda_tilde] and the droplet root on
    [lambda_tilde, 1).  Tolerance 1e-12 on lambda.
    """
    _check_d(d)
    _check_delta(delta)

    delta_c = critical_delta(d)
    if delta == 0.0:
        return PhiMinResult(lambda_star=0.0, phi_value=0.0, degenerate=False)

    lam_tilde = ((d - 1) / (2.0 * delta * d * d)) ** (d / (d + 1))
    barrier_lam: float | None = None
    barrier_val: float | None = None
    droplet_lam: float | None = None

    if lam_tilde < 1.0 and _stationarity_gap(d, delta, lam_tilde) < 0.0:
        # Two stationary roots: local max left of lam_tilde, local min right.
        barrier_lam = _bisect_gap(d, delta, 1e-300, lam_tilde, increasing=False)
        droplet_lam = _bisect_gap(d, delta, lam_tilde, 1.0 - 1e-16, increasing=True)
        barrier_val = phi(d, delta, barrier_lam)

    degenerate = abs(delta - delta_c) < DEGENERACY_TOL
    if degenerate or delta <= delta_c or droplet_lam is None:
        lam_star, val = 0.0, delta
    else:
        lam_star, val = droplet_lam, phi(d, delta, droplet_lam)
    return PhiMinResult(
        lambda_star=lam_star,
        phi_value=val,
        degenerate=degenerate,
        barrier_lambda=barrier_lam,
        barrier_value=barrier_val,
    )


def lambda_curve(d: int, delta_grid: list[float]) -> list[tuple[float, float]]:
    """Minimizing droplet fraction lambda_Delta over a grid of Delta values."""
    return [(float(dl), minimize_phi(d, float(dl)).lambda_star) for dl in delta_grid]


@dataclass(frozen=True)
class TwoPhaseParams:
    """Bulk two-phase parameters entering the dimensionless ratio Delta.

    rho_l/rho_g are the coexisting number densities (liquid > gas), kappa the
    Gaussian compressibility of particle-number fluctuations (Var N = kappa V),
    tau_w the surface cost of the unit-volume equilibrium droplet in log-weight
    units.
    """

    d: int
    rho_l: float
    rho_g: float
    kappa: float
    tau_w: float

    def __post_init__(self) -> None:
        _check_d(self.d)
        if not self.rho_l > self.rho_g:
            raise ValueError(
                f"need rho_l > rho_g, got rho_l={self.rho_l}, rho_g={self.rho_g}"
            )
        if self.kappa <= 0.0 or self.tau_w <= 0.0:
            raise ValueError("kappa and tau_w must be positive")


def delta_from_physical(params: TwoPhaseParams, excess: float, volume: float) -> float:
    """Delta for an excess of delta-N particles in volume V.

    Delta = (rho_l-rho_g)^((d-1)/d) * (delta-N)^((d+1)/d) / (2 kappa tau_W V).
    """
    if excess <= 0.0:
        raise ValueError(f"excess particle number must be positive, got {excess}")
    if volume <= 0.0:
        raise ValueError(f"volume must be positive, got {volume}")
    d = params.d
    rho_diff = params.rho_l - params.rho_g
    return (
        rho_diff ** ((d - 1) / d)
        * excess ** ((d + 1) / d)
        / (2.0 * params.kappa * params.tau_w * volume)
    )


def delta_ising(m_star: float, chi: float, tau_w: float, v_l: float, n_sites: float) -> float:
    """Delta for the 2D lattice gas with excess volume v_L on |Lambda| sites.

    Delta = 2 m*^2 v_L^(3/2) / (chi tau_W |Lambda|), with chi = Var(M)/|Lambda|
    the magnetization susceptibility (variance convention, no extra beta).
    Algebraically identical to delta_from_physical under the lattice-gas
    dictionary delta-N = 2 m* v_L, rho_l - rho_g = 2 m*, kappa = chi.
    """
    if not (0.0 < m_star <= 1.0):
        raise ValueError(f"m_star must lie in (0, 1], got {m_star}")
    if chi <= 0.0 or tau_w <= 0.0 or n_sites <= 0:
        raise ValueError("chi, tau_w and n_sites must be positive")
    if v_l <= 0.0:
        raise ValueError(f"excess volume must be positive, got {v_l}")
    return 2.0 * m_star * m_star * v_l ** 1.5 / (chi * tau_w * n_sites)


def v_from_delta_ising(delta: float, m_star: float, chi: float, tau_w: float, n_sites: float) -> float:
    """Excess volume realizing a target Delta; inverse of delta_ising.

    v_L = (Delta chi tau_W |Lambda| / (2 m*^2))^(2/3); round-trips with
    delta_ising to relative 1e-12.
    """
    _check_delta(delta)
    if not (0.0 < m_star <= 1.0):
        raise ValueError(f"m_star must lie in (0, 1], got {m_star}")
    if chi <= 0.0 or tau_w <= 0.0 or n_sites <= 0:
        raise ValueError("chi, tau_w and n_sites must be positive")
    return (delta * chi * tau_w * n_sites / (2.0 * m_star * m_star)) ** (2.0 / 3.0)


def crossover_scale(params: TwoPhaseParams) -> float:
    """Excess scale Theta with Theta^(d+1) = (kappa tau_W)^d (rho_l-rho_g)^(1-d).

    Theta marks the fluctuation/droplet crossover: an excess
    delta-N = x Theta V^(d/(d+1)) gives Delta = x^((d+1)/d) / 2 independently
    of V, kappa, tau_W and the densities, so x = 1 lands at Delta = 1/2 in
    every dimension.
    """
    d = params.d
    rho_diff = params.rho_l - params.rho_g
    return ((params.kappa * params.tau_w) ** d * rho_diff ** (1 - d)) ** (1.0 / (d + 1))


@dataclass(frozen=True)
class MechanismSplit:
    """A candidate split of the excess across absorption mechanisms.

    dn_s goes into Gaussian background fluctuations, dn_i into n equal
    intermediate-scale droplets (isoperimetric constant c of order unity),
    dn_l into the single large droplet.  Costs below compare the intermediate
    mechanism against folding its share back into the background.
    """

    dn_s: float
    dn_i: float
    dn_l: float
    n: int
    c: float = 1.0

    def __post_init__(self) -> None:
        if min(self.dn_s, self.dn_i, self.dn_l) < 0.0 or self.n < 0:
            raise ValueError("particle counts and droplet count must be >= 0")
        if self.c <= 0.0:
            raise ValueError("isoperimetric constant must be positive")
        if self.n == 0 and self.dn_i > 0.0:
            raise ValueError("dn_i > 0 requires at least one intermediate droplet")


def mechanism_costs(split: MechanismSplit, params: TwoPhaseParams, volume: float) -> tuple[float, float]:
    """(combined, pure) log-weight costs of an intermediate-droplet split.

    combined = dn_s^2/(2 kappa V) + tau_W c dn_i^((d-1)/d) n^(1/d) keeps n
    intermediate droplets; pure = (dn_s+dn_i)^2/(2 kappa V) absorbs their share
    into the background instead.  Surface cost of the large droplet is common
    to both routes and omitted.
    """
    if volume <= 0.0:
        raise ValueError(f"volume must be positive, got {volume}")
    d = params.d
    gauss = split.dn_s ** 2 / (2.0 * params.kappa * volume)
    surface = 0.0
    if split.n > 0:
        surface = params.tau_w * split.c * split.dn_i ** ((d - 1) / d) * split.n ** (1.0 / d)
    combined = gauss + surface
    pure = (split.dn_s + split.dn_i) ** 2 / (2.0 * params.kappa * volume)
    return combined, pure
