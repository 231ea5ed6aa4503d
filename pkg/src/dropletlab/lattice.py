"""Monte Carlo engine for the square-lattice Ising model with fixed boundary.

Three samplers share one spin-array layout (see _kernels):

* glauber: single-site Metropolis flips targeting the unconstrained Gibbs
  measure; used for the susceptibility estimate.
* canonical pair exchange: spin exchanges at fixed total magnetization,
  targeting the Gibbs measure conditioned on M; `local` swaps adjacent
  opposite pairs (physical transport dynamics), `nonlocal` swaps arbitrary
  minus/plus pairs and mixes much faster.  Both satisfy detailed balance in
  the fixed-M sector.
* multicanonical: reweighted single-site flips whose learned weights flatten
  the magnetization histogram, giving log-probabilities of magnetizations
  that are exponentially rare under the plain measure.

Reproducibility: every trajectory is a deterministic function of
(seed, stream_id); each proposal consumes a fixed number of draws.
"""

import json
import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import _kernels

_BOUNDARY_VALUE = {"plus": 1, "free": 0}
_CHECKPOINT_MAGIC = b"DLCP"
_CHECKPOINT_VERSION = 1
_MODE_CODE = {"glauber": 0, "local": 1, "nonlocal": 2}
_MODE_NAME = {v: k for k, v in _MODE_CODE.items()}


@dataclass(frozen=True)
class RngStream:
    """Counter-based RNG identity: (seed, stream_id) fixes the trajectory."""

    seed: int
    stream_id: int = 0

    def __post_init__(self) -> None:
        if not (0 <= self.seed < 2**64) or not (0 <= self.stream_id < 2**64):
            raise ValueError("seed and stream_id must fit in 64 bits")

    def generator(self) -> np.random.Generator:
        key = np.array([self.seed, self.stream_id], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


class SpinConfig:
    """L x L spins in {-1,+1} with a fixed boundary and cached M and energy.

    The spin array is padded by one boundary layer on each side (+1 for the
    plus boundary, 0 for free).  Mutation goes through the samplers; direct
    writes to `spins` desynchronize the caches (audit() will catch it).
    """

    __slots__ = ("L", "beta", "boundary", "_s", "m", "energy")

    def __init__(self, L: int, beta: float, spins=None, boundary: str = "plus"):
        if L < 1:
            raise ValueError(f"L must be >= 1, got {L}")
        if boundary not in _BOUNDARY_VALUE:
            raise ValueError(f"boundary must be one of {sorted(_BOUNDARY_VALUE)}, got {boundary!r}")
        if not math.isfinite(beta) or beta < 0.0:
            raise ValueError(f"beta must be finite and >= 0, got {beta}")
        self.L = int(L)
        self.beta = float(beta)
        self.boundary = boundary
        self._s = np.full((L + 2, L + 2), _BOUNDARY_VALUE[boundary], dtype=np.int8)
        if spins is None:
            self._s[1 : L + 1, 1 : L + 1] = 1
        else:
            spins = np.asarray(spins, dtype=np.int8)
            if spins.shape != (L, L) or not np.all(np.abs(spins) == 1):
                raise ValueError("spins must be an L x L array of +-1")
            self._s[1 : L + 1, 1 : L + 1] = spins
        self.m = int(self._s[1 : L + 1, 1 : L + 1].sum())
        self.energy = int(_kernels.energy_of(self._s, self.L))

    @classmethod
    def all_plus(cls, L: int, beta: float, boundary: str = "plus") -> "SpinConfig":
        return cls(L, beta, boundary=boundary)

    @classmethod
    def with_minus_block(cls, L: int, beta: float, n_minus: int, boundary: str = "plus") -> "SpinConfig":
        """All-plus with a centered near-square block of n_minus minus spins."""
        if not 0 <= n_minus <= L * L:
            raise ValueError(f"n_minus must be in [0, L^2], got {n_minus}")
        spins = np.ones((L, L), dtype=np.int8)
        side = int(math.isqrt(n_minus))
        r0 = (L - side) // 2
        spins[r0 : r0 + side, r0 : r0 + side] = -1
        left = n_minus - side * side
        # lay the remainder along the row below the block
        r = r0 + side
        c = r0
        while left > 0 and r < L:
            spins[r, c] = -1
            left -= 1
            c += 1
            if c >= L:
                c = 0
                r += 1
        if left > 0:
            # block did not fit; fall back to filling row-major from the top
            spins = np.ones((L, L), dtype=np.int8)
            flat = spins.reshape(-1)
            flat[:n_minus] = -1
        return cls(L, beta, spins=spins, boundary=boundary)

    @classmethod
    def with_minus_random(cls, L: int, beta: float, n_minus: int, gen: np.random.Generator, boundary: str = "plus") -> "SpinConfig":
        """All-plus with n_minus minus spins at uniformly chosen sites."""
        if not 0 <= n_minus <= L * L:
            raise ValueError(f"n_minus must be in [0, L^2], got {n_minus}")
        spins = np.ones(L * L, dtype=np.int8)
        sites = gen.choice(L * L, size=n_minus, replace=False)
        spins[sites] = -1
        return cls(L, beta, spins=spins.reshape(L, L), boundary=boundary)

    @property
    def spins(self) -> np.ndarray:
        """Interior view; treat as read-only."""
        return self._s[1 : self.L + 1, 1 : self.L + 1]

    @property
    def padded(self) -> np.ndarray:
        return self._s

    def copy(self) -> "SpinConfig":
        return SpinConfig(self.L, self.beta, spins=self.spins.copy(), boundary=self.boundary)

    def audit(self) -> None:
        """Verify cached magnetization and energy against a full recompute."""
        m = int(self.spins.sum())
        e = int(_kernels.energy_of(self._s, self.L))
        if m != self.m or e != self.energy:
            raise AssertionError(
                f"cache desync: m cache {self.m} vs {m}, energy cache {self.energy} vs {e}"
            )


@dataclass(frozen=True)
class CanonicalConstraint:
    """Fixed-magnetization sector: target_m is the conserved total spin.

    v_l is the requested excess volume; target_m the nearest achievable
    magnetization (parity of L^2) for it.  realized_v gives the excess
    volume that target_m actually represents.
    """

    v_l: float
    target_m: int

    @classmethod
    def from_v(cls, L: int, m_star: float, v_l: float) -> "CanonicalConstraint":
        if v_l < 0.0:
            raise ValueError(f"v_l must be >= 0, got {v_l}")
        if not 0.0 < m_star <= 1.0:
            raise ValueError(f"m_star must be in (0, 1], got {m_star}")
        n = L * L
        raw = m_star * n - 2.0 * m_star * v_l
        target = _round_to_parity(raw, n)
        if abs(target) > n:
            raise ValueError(f"target magnetization {target} not achievable on L={L}")
        return cls(v_l=float(v_l), target_m=target)

    @classmethod
    def from_target(cls, L: int, m_star: float, target_m: int) -> "CanonicalConstraint":
        n = L * L
        if abs(target_m) > n or (target_m - n) % 2 != 0:
            raise ValueError(f"target_m {target_m} not achievable on L={L}")
        return cls(v_l=(m_star * n - target_m) / (2.0 * m_star), target_m=int(target_m))

    def realized_v(self, L: int, m_star: float) -> float:
        return (m_star * L * L - self.target_m) / (2.0 * m_star)

    def n_minus(self, L: int) -> int:
        return (L * L - self.target_m) // 2


def _round_to_parity(x: float, n_sites: int) -> int:
    """Nearest integer to x with the parity of n_sites."""
    lo = 2 * math.floor((x - n_sites) / 2.0) + n_sites
    return lo if x - lo <= lo + 2 - x else lo + 2


def initial_canonical_config(
    L: int,
    beta: float,
    constraint: CanonicalConstraint,
    init: str = "random",
    gen: np.random.Generator | None = None,
    boundary: str = "plus",
) -> SpinConfig:
    """Starting configuration in the constraint's sector.

    `random` scatters the minus spins (no droplet seeded), `block` plants
    them as one square block (droplet seeded); comparing runs from both
    guards against trapping on either side of the formation barrier.
    """
    n_minus = constraint.n_minus(L)
    if init == "random":
        if gen is None:
            raise ValueError("random initialization needs a generator")
        return SpinConfig.with_minus_random(L, beta, n_minus, gen, boundary=boundary)
    if init == "block":
        return SpinConfig.with_minus_block(L, beta, n_minus, boundary=boundary)
    raise ValueError(f"init must be 'random' or 'block', got {init!r}")


def run_glauber(config: SpinConfig, gen: np.random.Generator, n_proposals: int) -> None:
    """Advance the unconstrained sampler by n_proposals single-site steps."""
    if n_proposals < 0:
        raise ValueError("n_proposals must be >= 0")
    acc = _kernels.acceptance_table(config.beta)
    m, e = _kernels.glauber_run(config._s, config.L, config.m, config.energy, acc, n_proposals, gen)
    config.m = int(m)
    config.energy = int(e)


def glauber_step(config: SpinConfig, gen: np.random.Generator) -> None:
    """One single-site Metropolis proposal."""
    run_glauber(config, gen, 1)


def _site_lists(config: SpinConfig):
    interior = config._s[1 : config.L + 1, 1 : config.L + 1]
    w = config.L + 2
    rows, cols = np.nonzero(interior < 0)
    minus = ((rows + 1) * w + (cols + 1)).astype(np.int64)
    rows, cols = np.nonzero(interior > 0)
    plus = ((rows + 1) * w + (cols + 1)).astype(np.int64)
    return minus, plus


def run_canonical(
    config: SpinConfig,
    constraint: CanonicalConstraint,
    gen: np.random.Generator,
    n_proposals: int,
    mode: str = "nonlocal",
) -> None:
    """Advance the fixed-magnetization sampler by n_proposals exchanges."""
    if config.m != constraint.target_m:
        raise ValueError(
            f"configuration magnetization {config.m} is not the sector value {constraint.target_m}"
        )
    if n_proposals < 0:
        raise ValueError("n_proposals must be >= 0")
    acc = _kernels.acceptance_table(config.beta)
    if mode == "local":
        e = _kernels.exchange_local_run(config._s, config.L, config.energy, acc, n_proposals, gen)
    elif mode == "nonlocal":
        minus, plus = _site_lists(config)
        e = _kernels.exchange_nonlocal_run(
            config._s, config.L, config.energy, acc, minus, plus, minus.size, plus.size, n_proposals, gen
        )
    else:
        raise ValueError(f"mode must be 'local' or 'nonlocal', got {mode!r}")
    config.energy = int(e)


def canonical_step(
    config: SpinConfig,
    constraint: CanonicalConstraint,
    gen: np.random.Generator,
    mode: str = "nonlocal",
) -> None:
    """One magnetization-conserving exchange proposal."""
    run_canonical(config, constraint, gen, 1, mode=mode)


@dataclass(frozen=True)
class ChiEstimate:
    """Per-site magnetization variance with a blocking error bar."""

    chi: float
    std_error: float
    tau_int: float
    flagged: bool
    n_samples: int
    beta: float
    L: int


def measure_chi(
    beta: float,
    L: int,
    sweeps: int,
    rng: RngStream,
    burn_in_sweeps: int | None = None,
    boundary: str = "plus",
) -> ChiEstimate:
    """chi = Var(M)/L^2 from unconstrained sampling, one sample per sweep.

    The error bar comes from a blocking analysis (largest stable block
    variance); the estimate is flagged when the integrated autocorrelation
    time exceeds sweeps/100, i.e. when the run is too short to decorrelate.
    """
    if sweeps < 16:
        raise ValueError(f"need at least 16 measurement sweeps, got {sweeps}")
    if burn_in_sweeps is None:
        burn_in_sweeps = max(200, L)
    gen = rng.generator()
    config = SpinConfig.all_plus(L, beta, boundary=boundary)
    acc = _kernels.acceptance_table(beta)
    cadence = L * L
    m, e = _kernels.glauber_run(config._s, L, config.m, config.energy, acc, burn_in_sweeps * cadence, gen)
    series = np.empty(sweeps, dtype=np.int64)
    m, e = _kernels.glauber_record_m(config._s, L, m, e, acc, cadence, series, gen)
    config.m = int(m)
    config.energy = int(e)
    config.audit()

    x = series.astype(np.float64)
    var0 = float(x.var())
    chi = var0 / (L * L)
    # chi is the mean of the squared-deviation series; blocking that series
    # gives an autocorrelation-aware error bar for it
    y = (x - x.mean()) ** 2
    err_y, _ = _blocking_error(y)
    _, tau = _blocking_error(x)
    flagged = bool(tau > sweeps / 100.0)
    return ChiEstimate(
        chi=chi,
        std_error=err_y / (L * L),
        tau_int=tau,
        flagged=flagged,
        n_samples=sweeps,
        beta=beta,
        L=L,
    )


def _blocking_error(x: np.ndarray) -> tuple[float, float]:
    """(std error of the mean, integrated autocorrelation time) by blocking."""
    n = x.size
    var0 = x.var(ddof=1)
    if var0 == 0.0:
        return 0.0, 0.5
    best = math.sqrt(var0 / n)
    b = x.copy()
    while b.size >= 32:
        if b.size % 2 == 1:
            b = b[:-1]
        b = 0.5 * (b[0::2] + b[1::2])
        cand = math.sqrt(b.var(ddof=1) / b.size)
        if cand > best:
            best = cand
    tau = 0.5 * (best * best * n) / var0
    return best, tau


@dataclass
class WlSchedule:
    """Weight-learning schedule: halve lnf whenever the visit histogram is
    flat (min bin >= `flatness` of the mean), stop at lnf_floor, then run a
    frozen-weight production pass split into jackknife blocks."""

    lnf_init: float = 1.0
    lnf_floor: float = 1e-8
    flatness: float = 0.80
    chunk_sweeps: int = 20
    max_stage_sweeps: int = 40000
    production_sweeps: int = 4000
    blocks: int = 32

    def __post_init__(self) -> None:
        if not (0.0 < self.flatness < 1.0):
            raise ValueError("flatness must be in (0, 1)")
        if self.lnf_floor <= 0.0 or self.lnf_init <= self.lnf_floor:
            raise ValueError("need lnf_init > lnf_floor > 0")
        if min(self.chunk_sweeps, self.max_stage_sweeps, self.production_sweeps) < 1:
            raise ValueError("sweep counts must be >= 1")
        if self.blocks < 2:
            raise ValueError("need >= 2 jackknife blocks")


@dataclass
class MagnetizationHistogram:
    """log P(M) over a window of achievable magnetizations (step 2).

    logp is shifted so its maximum is 0; logp_err is the jackknife error of
    each bin from the production blocks.  converged reports whether the
    weight-learning schedule reached its floor within budget.
    """

    L: int
    beta: float
    boundary: str
    m_values: np.ndarray
    log_weight: np.ndarray
    visits: np.ndarray
    logp: np.ndarray
    logp_err: np.ndarray
    converged: bool
    lnf_final: float
    n_production_samples: int

    def normalized_logp(self) -> np.ndarray:
        """logp shifted so that sum(exp(logp)) = 1 over the window."""
        good = np.isfinite(self.logp)
        z = _logsumexp(self.logp[good])
        out = self.logp - z
        return out

    def logp_at(self, m: int) -> tuple[float, float]:
        idx = np.nonzero(self.m_values == m)[0]
        if idx.size != 1:
            raise KeyError(f"magnetization {m} not in histogram window")
        return float(self.logp[idx[0]]), float(self.logp_err[idx[0]])


def _logsumexp(a: np.ndarray) -> float:
    hi = float(np.max(a))
    return hi + math.log(float(np.sum(np.exp(a - hi))))


def multicanonical_logp(
    beta: float,
    L: int,
    m_range: tuple[int, int],
    rng: RngStream,
    schedule: WlSchedule | None = None,
    boundary: str = "plus",
) -> MagnetizationHistogram:
    """Learn log P(M) on [m_range[0], m_range[1]] by flat-histogram sampling.

    The window is clipped to achievable magnetizations with the parity of
    L^2.  Weight learning failing to reach the floor within budget yields a
    partial result with converged=False rather than an exception.
    """
    if schedule is None:
        schedule = WlSchedule()
    n = L * L
    lo = _round_up_parity(max(m_range[0], -n), n)
    hi = _round_down_parity(min(m_range[1], n), n)
    if lo > hi:
        raise ValueError(f"empty magnetization window {m_range} on L={L}")
    m_values = np.arange(lo, hi + 1, 2, dtype=np.int64)
    nbins = m_values.size
    weights = np.zeros(nbins, dtype=np.float64)
    visits = np.zeros(nbins, dtype=np.int64)

    gen = rng.generator()
    n_minus = (n - hi) // 2
    config = SpinConfig.with_minus_random(L, beta, n_minus, gen, boundary=boundary)
    m, e = config.m, config.energy

    lnf = schedule.lnf_init
    chunk = schedule.chunk_sweeps * n
    converged = True
    while lnf > schedule.lnf_floor:
        stage_sweeps = 0
        while True:
            m, e = _kernels.wang_landau_run(
                config._s, L, m, e, beta, weights, visits, lo, lnf, chunk, gen
            )
            stage_sweeps += schedule.chunk_sweeps
            mean = visits.mean()
            if mean > 0 and visits.min() >= schedule.flatness * mean:
                break
            if stage_sweeps >= schedule.max_stage_sweeps:
                converged = False
                break
        if not converged:
            break
        lnf *= 0.5
        visits[:] = 0

    # production with frozen weights
    block_counts = np.zeros((schedule.blocks, nbins), dtype=np.int64)
    per_block = max(1, schedule.production_sweeps // schedule.blocks) * n
    for b in range(schedule.blocks):
        m, e = _kernels.multicanonical_production_run(
            config._s, L, m, e, beta, weights, block_counts[b], lo, per_block, gen
        )
    config.m = int(m)
    config.energy = int(e)
    config.audit()

    counts = block_counts.sum(axis=0)
    with np.errstate(divide="ignore"):
        raw = np.where(counts > 0, np.log(np.maximum(counts, 1)), -np.inf) - weights
    logp = raw - np.max(raw[np.isfinite(raw)])

    # jackknife over production blocks; bins empty in any leave-one-out
    # replicate carry no usable error estimate and get err = inf
    total = counts[None, :] - block_counts
    with np.errstate(divide="ignore"):
        loo = np.where(total > 0, np.log(np.maximum(total, 1)), -np.inf) - weights[None, :]
    loo = loo - np.nanmax(np.where(np.isfinite(loo), loo, np.nan), axis=1, keepdims=True)
    nb = schedule.blocks
    usable = np.isfinite(loo).all(axis=0)
    loo_safe = np.where(np.isfinite(loo), loo, 0.0)
    bmean = loo_safe.mean(axis=0)
    logp_err = np.sqrt((nb - 1) / nb * np.sum((loo_safe - bmean) ** 2, axis=0))
    logp_err[~usable] = np.inf

    return MagnetizationHistogram(
        L=L,
        beta=beta,
        boundary=boundary,
        m_values=m_values,
        log_weight=weights.copy(),
        visits=visits.copy(),
        logp=logp,
        logp_err=logp_err,
        converged=converged,
        lnf_final=lnf,
        n_production_samples=int(per_block) * schedule.blocks,
    )


def _round_up_parity(x: int, n_sites: int) -> int:
    return x if (x - n_sites) % 2 == 0 else x + 1


def _round_down_parity(x: int, n_sites: int) -> int:
    return x if (x - n_sites) % 2 == 0 else x - 1


def save_checkpoint(path, config: SpinConfig, gen: np.random.Generator, mode: str = "nonlocal") -> None:
    """Binary snapshot: header, RNG state, packed spins; versioned magic."""
    if mode not in _MODE_CODE:
        raise ValueError(f"mode must be one of {sorted(_MODE_CODE)}, got {mode!r}")
    state = gen.bit_generator.state
    if state["bit_generator"] != "Philox":
        raise ValueError("checkpoints support the Philox generator only")
    rng_blob = json.dumps(
        {
            "counter": state["state"]["counter"].tolist(),
            "key": state["state"]["key"].tolist(),
            "buffer": state["buffer"].tolist(),
            "buffer_pos": int(state["buffer_pos"]),
            "has_uint32": int(state["has_uint32"]),
            "uinteger": int(state["uinteger"]),
        }
    ).encode()
    bits = np.packbits((config.spins > 0).astype(np.uint8))
    header = struct.pack(
        "<4sHBBId",
        _CHECKPOINT_MAGIC,
        _CHECKPOINT_VERSION,
        _MODE_CODE[mode],
        _BOUNDARY_VALUE[config.boundary],
        config.L,
        config.beta,
    )
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(struct.pack("<I", len(rng_blob)))
        fh.write(rng_blob)
        fh.write(bits.tobytes())


def load_checkpoint(path) -> tuple[SpinConfig, np.random.Generator, str]:
    """Restore (config, generator, mode) from save_checkpoint output."""
    blob = Path(path).read_bytes()
    head = struct.calcsize("<4sHBBId")
    magic, version, mode_code, bval, L, beta = struct.unpack("<4sHBBId", blob[:head])
    if magic != _CHECKPOINT_MAGIC:
        raise ValueError(f"{path}: not a checkpoint file")
    if version != _CHECKPOINT_VERSION:
        raise ValueError(f"{path}: unsupported checkpoint version {version}")
    (rng_len,) = struct.unpack("<I", blob[head : head + 4])
    rng_state = json.loads(blob[head + 4 : head + 4 + rng_len])
    bits = np.frombuffer(blob[head + 4 + rng_len :], dtype=np.uint8)
    flat = np.unpackbits(bits, count=L * L)
    spins = np.where(flat.reshape(L, L) > 0, 1, -1).astype(np.int8)
    boundary = {v: k for k, v in _BOUNDARY_VALUE.items()}[bval]
    config = SpinConfig(L, beta, spins=spins, boundary=boundary)
    bg = np.random.Philox()
    bg.state = {
        "bit_generator": "Philox",
        "state": {
            "counter": np.array(rng_state["counter"], dtype=np.uint64),
            "key": np.array(rng_state["key"], dtype=np.uint64),
        },
        "buffer": np.array(rng_state["buffer"], dtype=np.uint64),
        "buffer_pos": rng_state["buffer_pos"],
        "has_uint32": rng_state["has_uint32"],
        "uinteger": rng_state["uinteger"],
    }
    return config, np.random.Generator(bg), _MODE_NAME[mode_code]


HISTOGRAM_CSV_COLUMNS = ["M", "logp", "logp_err", "log_weight", "visits"]


def write_histogram_csv(hist: MagnetizationHistogram, path) -> None:
    """Serialize a magnetization histogram with its metadata as comments.

    Floats use 17 significant digits so the file round-trips exactly through
    read_histogram_csv.
    """
    lines = [
        f"# L = {hist.L}",
        f"# beta = {format(hist.beta, '.17g')}",
        f"# boundary = {hist.boundary}",
        f"# converged = {1 if hist.converged else 0}",
        f"# lnf_final = {format(hist.lnf_final, '.17g')}",
        f"# n_production_samples = {hist.n_production_samples}",
        ",".join(HISTOGRAM_CSV_COLUMNS),
    ]
    for i in range(hist.m_values.size):
        lines.append(",".join((
            str(int(hist.m_values[i])),
            format(float(hist.logp[i]), ".17g"),
            format(float(hist.logp_err[i]), ".17g"),
            format(float(hist.log_weight[i]), ".17g"),
            str(int(hist.visits[i])),
        )))
    Path(path).write_text("\n".join(lines) + "\n")


def read_histogram_csv(path) -> MagnetizationHistogram:
    """Inverse of write_histogram_csv."""
    meta: dict[str, str] = {}
    rows: list[list[str]] = []
    header_seen = False
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line.lstrip("# ").partition(" = ")
            meta[key] = value
        elif not header_seen:
            if line.split(",") != HISTOGRAM_CSV_COLUMNS:
                raise ValueError(f"{path}: unexpected histogram columns {line!r}")
            header_seen = True
        else:
            rows.append(line.split(","))
    required = {"L", "beta", "boundary", "converged", "lnf_final", "n_production_samples"}
    missing = required - meta.keys()
    if missing or not header_seen or not rows:
        raise ValueError(f"{path}: incomplete histogram file (missing {sorted(missing)})")
    cols = list(zip(*rows))
    return MagnetizationHistogram(
        L=int(meta["L"]),
        beta=float(meta["beta"]),
        boundary=meta["boundary"],
        m_values=np.array([int(x) for x in cols[0]], dtype=np.int64),
        logp=np.array([float(x) for x in cols[1]]),
        logp_err=np.array([float(x) for x in cols[2]]),
        log_weight=np.array([float(x) for x in cols[3]]),
        visits=np.array([int(x) for x in cols[4]], dtype=np.int64),
        converged=meta["converged"] == "1",
        lnf_final=float(meta["lnf_final"]),
        n_production_samples=int(meta["n_production_samples"]),
    )
