"""Sweep orchestration: plan excess volumes for target supersaturations, run
replicated fixed-magnetization chains from both initializations, aggregate
droplet censuses, and compare rare-event rates with the variational theory.

Chains are independent (one spin configuration and one RNG stream each), so
replicas parallelize freely; aggregation uses only sums and per-chain means
and is therefore independent of completion order.
"""

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path

import numpy as np

from . import __version__
from .contours import ContourCensus, census_frequencies, census_of, census_window
from .lattice import (
    CanonicalConstraint,
    ChiEstimate,
    MagnetizationHistogram,
    RngStream,
    WlSchedule,
    initial_canonical_config,
    measure_chi,
    multicanonical_logp,
    run_canonical,
)
from .theory import delta_ising, minimize_phi, v_from_delta_ising
from .thermo import IsingThermo

# chain stream 0 is reserved for the susceptibility measurement
_CHI_STREAM = 0
# flat-histogram streams sit far above any chain allocation (chains use
# 1 + 2*replicas*point_index, so collision would need ~5e5 chains)
_LOGP_STREAM_BASE = 2**20
_DELTA_AUDIT_TOL = 1e-12


@dataclass(frozen=True)
class SweepSpec:
    """A sweep over system sizes and supersaturation targets.

    Exactly one of delta_grid and vl_list selects the horizontal axis; the
    budget counts census samples per chain.  Window validity per (L, K) is
    recorded, not enforced: bench-scale lattices commonly invert the census
    window and the classifier handles that explicitly.
    """

    beta: float
    l_list: tuple[int, ...]
    delta_grid: tuple[float, ...] = ()
    vl_list: tuple[float, ...] = ()
    replicas: int = 8
    budget: int = 200
    k_list: tuple[float, ...] = (4.0,)
    seed: int = 0
    census: bool = True
    lambda_: bool = True
    logp: bool = False
    chi_sweeps: int = 2000
    burn_in_mult: int = 1000
    cadence_mult: int = 10
    mode: str = "nonlocal"

    def __post_init__(self) -> None:
        if not self.l_list or any(L < 2 for L in self.l_list):
            raise ValueError("l_list must name lattice sides >= 2")
        if bool(self.delta_grid) == bool(self.vl_list):
            raise ValueError("exactly one of delta_grid and vl_list must be set")
        if any(d <= 0.0 for d in self.delta_grid) or any(v <= 0.0 for v in self.vl_list):
            raise ValueError("supersaturation and excess-volume targets must be positive")
        if not self.k_list or any(k <= 0.0 for k in self.k_list):
            raise ValueError("k_list entries must be positive")
        if self.replicas < 1:
            raise ValueError("replicas must be >= 1")
        if min(self.budget, self.chi_sweeps, self.burn_in_mult, self.cadence_mult) < 1:
            raise ValueError("budget, chi_sweeps and cadence settings must be >= 1")
        if not (0 <= self.seed < 2**64):
            raise ValueError("seed must fit in 64 bits")

    def invalid_windows(self) -> list[tuple[int, float]]:
        out = []
        for L in self.l_list:
            for K in self.k_list:
                if not census_window(L, K)[2]:
                    out.append((L, K))
        return out


@dataclass(frozen=True)
class RunPoint:
    """One planned (L, target, K) cell of the sweep grid."""

    beta: float
    L: int
    K: float
    v_target: float
    v_realized: float
    target_m: int
    delta_target: float  # nan when planned from an explicit excess volume
    delta_realized: float
    seed: int
    stream_base: int

    @property
    def constraint(self) -> CanonicalConstraint:
        return CanonicalConstraint(v_l=self.v_realized, target_m=self.target_m)


@dataclass(frozen=True)
class ChainResult:
    """Raw per-chain sample arrays; init is 'block' or 'random'."""

    init: str
    stream_id: int
    largest_volumes: np.ndarray
    n_intermediate: np.ndarray
    n_large: np.ndarray
    sweeps: np.ndarray | None = None
    energies: np.ndarray | None = None
    m: int = 0


@dataclass(frozen=True)
class RunRecord:
    """Aggregated census statistics for one run point."""

    beta: float
    L: int
    K: float
    seed: int
    replicas: int
    n_samples: int
    v_target: float
    v_realized: float
    target_m: int
    delta_target: float
    delta_realized: float
    window_lo: float
    window_hi: float
    window_valid: bool
    p_no_intermediate: float
    p_no_intermediate_err: float
    p_no_spanning: float
    p_no_spanning_err: float
    p_droplet: float
    p_droplet_err: float
    mean_lambda: float
    mean_lambda_err: float
    mean_intermediate_count: float
    lambda_block: float
    lambda_random: float
    metastable: bool


def audit_record(record: RunRecord, thermo: IsingThermo) -> None:
    """Recompute the realized supersaturation from stored inputs."""
    again = delta_ising(thermo.m_star, thermo.chi, thermo.tau_w, record.v_realized, record.L**2)
    if not math.isclose(again, record.delta_realized, rel_tol=_DELTA_AUDIT_TOL, abs_tol=0.0):
        raise AssertionError(
            f"realized-supersaturation audit failed: {again!r} vs {record.delta_realized!r}"
        )


def plan_sweep(spec: SweepSpec, thermo: IsingThermo) -> tuple[list[RunPoint], list[dict]]:
    """Map the sweep grid to achievable run points.

    Unreachable targets (excess volume not realizable on the lattice, or
    rounding collapsing it to zero) are returned in the rejection list with
    a reason instead of raising.
    """
    if thermo.chi is None:
        raise ValueError("thermo bundle lacks a susceptibility; measure chi first")
    points: list[RunPoint] = []
    rejected: list[dict] = []
    targets: list[tuple[float, float]] = []  # (delta_target, v_target) per L below
    index = 0
    for L in spec.l_list:
        n_sites = L * L
        if spec.delta_grid:
            targets = [
                (d, v_from_delta_ising(d, thermo.m_star, thermo.chi, thermo.tau_w, n_sites))
                for d in spec.delta_grid
            ]
        else:
            targets = [(math.nan, v) for v in spec.vl_list]
        for delta_target, v_target in targets:
            label = {"L": L, "delta": delta_target, "v": v_target}
            try:
                cons = CanonicalConstraint.from_v(L, thermo.m_star, v_target)
            except ValueError as exc:
                rejected.append({**label, "reason": str(exc)})
                continue
            v_real = cons.realized_v(L, thermo.m_star)
            if v_real <= 0.0:
                rejected.append({**label, "reason": "target rounds to zero excess volume"})
                continue
            delta_real = delta_ising(thermo.m_star, thermo.chi, thermo.tau_w, v_real, n_sites)
            for K in spec.k_list:
                points.append(
                    RunPoint(
                        beta=spec.beta,
                        L=L,
                        K=K,
                        v_target=v_target,
                        v_realized=v_real,
                        target_m=cons.target_m,
                        delta_target=delta_target,
                        delta_realized=delta_real,
                        seed=spec.seed,
                        stream_base=1 + 2 * spec.replicas * index,
                    )
                )
                index += 1
    return points, rejected


def _run_chain(point: RunPoint, init: str, stream_id: int, budget: int,
               burn_in_mult: int, cadence_mult: int, mode: str) -> ChainResult:
    gen = RngStream(seed=point.seed, stream_id=stream_id).generator()
    cons = point.constraint
    config = initial_canonical_config(point.L, point.beta, cons, init=init, gen=gen)
    n_sites = point.L * point.L
    run_canonical(config, cons, gen, burn_in_mult * n_sites, mode=mode)
    cadence = cadence_mult * n_sites
    vols = np.empty(budget, dtype=np.int64)
    inter = np.empty(budget, dtype=np.int64)
    large = np.empty(budget, dtype=np.int64)
    sweeps = np.empty(budget, dtype=np.int64)
    energies = np.empty(budget, dtype=np.int64)
    for i in range(budget):
        run_canonical(config, cons, gen, cadence, mode=mode)
        census = census_of(config, point.K)
        vols[i] = census.largest_volume
        inter[i] = census.n_intermediate
        large[i] = census.n_large
        sweeps[i] = burn_in_mult + (i + 1) * cadence_mult
        energies[i] = config.energy
    config.audit()
    return ChainResult(init=init, stream_id=stream_id,
                       largest_volumes=vols, n_intermediate=inter, n_large=large,
                       sweeps=sweeps, energies=energies, m=config.m)


def _chain_censuses(point: RunPoint, chain: ChainResult) -> list[ContourCensus]:
    lo, hi, valid = census_window(point.L, point.K)
    out = []
    for v, ni, nl in zip(chain.largest_volumes, chain.n_intermediate, chain.n_large):
        out.append(
            ContourCensus(
                n_small=0,  # small loops are not tracked in sweep mode
                n_intermediate=int(ni),
                n_large=int(nl),
                K=point.K,
                lo=lo,
                hi=hi,
                window_valid=valid,
                largest_volume=int(v),
                largest_diameter=0,
                total_large_volume=int(v),
            )
        )
    return out


def aggregate(point: RunPoint, chains: list[ChainResult], replicas: int) -> RunRecord:
    """Merge chain outputs into a record; permutation-invariant by design."""
    records: list[ContourCensus] = []
    for chain in chains:
        records.extend(_chain_censuses(point, chain))
    summary = census_frequencies(records, v_l=point.v_realized)

    def sample_lambdas(chain: ChainResult) -> np.ndarray:
        return np.where(chain.n_large > 0, chain.largest_volumes / point.v_realized, 0.0)

    def chain_lambda(chain: ChainResult) -> float:
        return float(sample_lambdas(chain).mean())

    by_init: dict[str, list[ChainResult]] = {"block": [], "random": []}
    for chain in chains:
        by_init[chain.init].append(chain)
    means = sorted(chain_lambda(c) for c in chains)
    n_chains = len(means)
    if n_chains > 1:
        scatter = float(np.std(means, ddof=1)) / math.sqrt(n_chains)
    else:
        scatter = summary.mean_lambda_err or 0.0

    def init_se(group: list[ChainResult]) -> float:
        if len(group) >= 2:
            return _mean_err([chain_lambda(c) for c in group])
        # one replica: fall back on the within-chain sample scatter (an
        # underestimate under autocorrelation, still better than zero)
        lam = sample_lambdas(group[0])
        if lam.size < 2:
            return 0.0
        return float(np.std(lam, ddof=1)) / math.sqrt(lam.size)

    lam_b = float(np.mean([chain_lambda(c) for c in by_init["block"]]))
    lam_r = float(np.mean([chain_lambda(c) for c in by_init["random"]]))
    se_b = init_se(by_init["block"])
    se_r = init_se(by_init["random"])
    gap = abs(lam_b - lam_r)
    metastable = bool(gap > 3.0 * math.hypot(se_b, se_r)) if se_b + se_r > 0.0 else gap > 0.0

    lo, hi, valid = census_window(point.L, point.K)
    inter_rate = float(np.mean([c.n_intermediate.mean() for c in chains]))
    return RunRecord(
        beta=point.beta,
        L=point.L,
        K=point.K,
        seed=point.seed,
        replicas=replicas,
        n_samples=summary.n,
        v_target=point.v_target,
        v_realized=point.v_realized,
        target_m=point.target_m,
        delta_target=point.delta_target,
        delta_realized=point.delta_realized,
        window_lo=lo,
        window_hi=hi,
        window_valid=valid,
        p_no_intermediate=summary.p_no_intermediate,
        p_no_intermediate_err=summary.p_no_intermediate_err,
        p_no_spanning=summary.p_no_spanning,
        p_no_spanning_err=summary.p_no_spanning_err,
        p_droplet=summary.p_droplet,
        p_droplet_err=summary.p_droplet_err,
        mean_lambda=float(summary.mean_lambda),
        mean_lambda_err=scatter,
        mean_intermediate_count=inter_rate,
        lambda_block=lam_b,
        lambda_random=lam_r,
        metastable=metastable,
    )


def _mean_err(values: list[float]) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1)) / math.sqrt(len(values))


def run_point(point: RunPoint, budget: int, replicas: int,
              burn_in_mult: int = 1000, cadence_mult: int = 10,
              mode: str = "nonlocal", threads: int | None = None,
              stream_dir: str | Path | None = None) -> RunRecord:
    """Execute a planned point: `replicas` pairs of block/random-init chains."""
    if budget < 1:
        raise ValueError("budget must be >= 1 census sample per chain")
    if replicas < 1:
        raise ValueError("replicas must be >= 1")
    jobs = []
    for r in range(replicas):
        for j, init in enumerate(("block", "random")):
            jobs.append((init, point.stream_base + 2 * r + j))
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chains = list(
                pool.map(
                    lambda job: _run_chain(point, job[0], job[1], budget,
                                           burn_in_mult, cadence_mult, mode),
                    jobs,
                )
            )
    else:
        chains = [
            _run_chain(point, init, sid, budget, burn_in_mult, cadence_mult, mode)
            for init, sid in jobs
        ]
    if stream_dir is not None:
        for chain in chains:
            write_stream_csv(point, chain, stream_dir)
    return aggregate(point, chains, replicas)


STREAM_CSV_COLUMNS = ["sweep", "M", "energy", "largest_contour_volume",
                      "n_intermediate", "n_large"]


def write_stream_csv(point: RunPoint, chain: ChainResult, directory: str | Path) -> Path:
    """Append one chain's raw measurement stream to its per-replica CSV.

    The file is keyed by the chain's global stream id, which is unique within
    a sweep, so repeated appends only ever come from checkpoint continuations
    of the same chain.
    """
    if chain.sweeps is None or chain.energies is None:
        raise ValueError("chain carries no stream samples")
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"stream_L{point.L}_s{chain.stream_id:05d}_{chain.init}.csv"
    lines = [] if path.exists() else [",".join(STREAM_CSV_COLUMNS)]
    for i in range(chain.sweeps.size):
        lines.append(",".join(str(int(x)) for x in (
            chain.sweeps[i], chain.m, chain.energies[i],
            chain.largest_volumes[i], chain.n_intermediate[i], chain.n_large[i],
        )))
    with open(path, "a") as fh:
        fh.write("\n".join(lines) + "\n")
    return path


@dataclass(frozen=True)
class RatePoint:
    """One excess volume's measured rare-event rate against theory."""

    v: float
    v_realized: float
    target_m: int
    delta: float
    empirical: float
    empirical_err: float
    empirical_smoothed: float
    theory: float
    deviation: float
    ratio: float


@dataclass(frozen=True)
class RateFit:
    beta: float
    L: int
    points: list[RatePoint]
    skipped: list[dict]


def fit_rate(histogram: MagnetizationHistogram, thermo: IsingThermo,
             v_values: list[float]) -> RateFit:
    """Compare -log p(M_v)/sqrt(v) with the variational rate per volume.

    The probability reference is the histogram's mode bin (the typical
    magnetization), which must lie inside the window.  The single-bin value
    is primary; a 5-bin linear fit around the target provides a smoothed
    cross-check column.
    """
    if thermo.chi is None:
        raise ValueError("thermo bundle lacks a susceptibility; measure chi first")
    if any(v <= 0.0 for v in v_values):
        raise ValueError("excess volumes must be positive")
    L = histogram.L
    n_sites = L * L
    logp = histogram.logp - float(np.max(histogram.logp))  # mode bin is the zero reference
    points: list[RatePoint] = []
    skipped: list[dict] = []
    for v in v_values:
        try:
            cons = CanonicalConstraint.from_v(L, thermo.m_star, v)
        except ValueError as exc:
            skipped.append({"v": v, "reason": str(exc)})
            continue
        v_real = cons.realized_v(L, thermo.m_star)
        idx = np.nonzero(histogram.m_values == cons.target_m)[0]
        if idx.size != 1:
            skipped.append({"v": v, "reason": f"magnetization {cons.target_m} outside window"})
            continue
        i = int(idx[0])
        if not np.isfinite(logp[i]):
            skipped.append({"v": v, "reason": f"no samples in bin M={cons.target_m}"})
            continue
        delta = delta_ising(thermo.m_star, thermo.chi, thermo.tau_w, v_real, n_sites)
        theory = thermo.tau_w * minimize_phi(2, delta).phi_value
        sq = math.sqrt(v_real)
        empirical = -float(logp[i]) / sq
        err = float(histogram.logp_err[i]) / sq
        points.append(
            RatePoint(
                v=v,
                v_realized=v_real,
                target_m=cons.target_m,
                delta=delta,
                empirical=empirical,
                empirical_err=err,
                empirical_smoothed=-_local_linear(histogram.m_values, logp, i) / sq,
                theory=theory,
                deviation=empirical - theory,
                ratio=empirical / theory,
            )
        )
    return RateFit(beta=histogram.beta, L=L, points=points, skipped=skipped)


def _local_linear(m_values: np.ndarray, logp: np.ndarray, i: int) -> float:
    """Value at bin i of a least-squares line through up to 5 nearby bins."""
    lo = max(0, i - 2)
    hi = min(m_values.size, i + 3)
    x = m_values[lo:hi].astype(np.float64)
    y = logp[lo:hi]
    good = np.isfinite(y)
    if good.sum() < 2:
        return float(logp[i])
    coef = np.polynomial.polynomial.polyfit(x[good], y[good], 1)
    return float(coef[0] + coef[1] * m_values[i])


def _f17(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


RUNS_CSV_COLUMNS = [
    "beta", "L", "K", "seed", "replicas", "n_samples",
    "v_target", "v_realized", "target_m", "delta_target", "delta_realized",
    "window_lo", "window_hi", "window_valid",
    "p_no_intermediate", "p_no_intermediate_err",
    "p_no_spanning", "p_no_spanning_err",
    "p_droplet", "p_droplet_err",
    "mean_lambda", "mean_lambda_err", "mean_intermediate_count",
    "lambda_block", "lambda_random", "metastable",
]

RATE_CSV_COLUMNS = [
    "beta", "L", "v", "v_realized", "target_m", "delta",
    "empirical", "empirical_err", "empirical_smoothed",
    "theory", "deviation", "ratio",
]


def write_runs_csv(records: list[RunRecord], path) -> None:
    lines = [",".join(RUNS_CSV_COLUMNS)]
    for r in records:
        d = asdict(r)
        lines.append(",".join(_f17(d[c]) for c in RUNS_CSV_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def write_rate_csv(fits: list[RateFit], path) -> None:
    lines = [",".join(RATE_CSV_COLUMNS)]
    for fit in fits:
        for p in fit.points:
            d = {**asdict(p), "beta": fit.beta, "L": fit.L}
            lines.append(",".join(_f17(d[c]) for c in RATE_CSV_COLUMNS))
    Path(path).write_text("\n".join(lines) + "\n")


def load_sweep_config(path) -> SweepSpec:
    """SweepSpec from a flat-key JSON file; unknown keys are rejected."""
    raw = json.loads(Path(path).read_text())
    if not isinstance(raw, dict):
        raise ValueError(f"{path}: config must be a JSON object with flat keys")
    keymap = {
        "beta": "beta",
        "L_list": "l_list",
        "delta_grid": "delta_grid",
        "vL_list": "vl_list",
        "replicas": "replicas",
        "budget": "budget",
        "K_list": "k_list",
        "seed": "seed",
        "mode_census": "census",
        "mode_lambda": "lambda_",
        "mode_logp": "logp",
        "chi_sweeps": "chi_sweeps",
        "burn_in_mult": "burn_in_mult",
        "cadence_mult": "cadence_mult",
        "exchange_mode": "mode",
    }
    unknown = sorted(set(raw) - set(keymap))
    if unknown:
        raise ValueError(f"{path}: unknown config keys {unknown}")
    kwargs = {}
    for key, attr in keymap.items():
        if key in raw:
            value = raw[key]
            if attr in ("l_list", "delta_grid", "vl_list", "k_list"):
                value = tuple(value)
            kwargs[attr] = value
    if "beta" not in kwargs:
        raise ValueError(f"{path}: config requires 'beta'")
    if "l_list" not in kwargs:
        raise ValueError(f"{path}: config requires 'L_list'")
    return SweepSpec(**kwargs)


def config_echo(spec: SweepSpec) -> dict:
    """The effective configuration under the external flat-key names."""
    return {
        "beta": spec.beta,
        "L_list": list(spec.l_list),
        "delta_grid": list(spec.delta_grid),
        "vL_list": list(spec.vl_list),
        "replicas": spec.replicas,
        "budget": spec.budget,
        "K_list": list(spec.k_list),
        "seed": spec.seed,
        "mode_census": spec.census,
        "mode_lambda": spec.lambda_,
        "mode_logp": spec.logp,
        "chi_sweeps": spec.chi_sweeps,
        "burn_in_mult": spec.burn_in_mult,
        "cadence_mult": spec.cadence_mult,
        "exchange_mode": spec.mode,
    }


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    thermo: IsingThermo
    records: list[RunRecord]
    rejected: list[dict]
    rate_fits: list[RateFit] = field(default_factory=list)
    chi_estimate: ChiEstimate | None = None
    histograms: list[MagnetizationHistogram] = field(default_factory=list)


def run_sweep(spec: SweepSpec, threads: int | None = None,
              progress=None, stream_dir: str | Path | None = None,
              wl_schedule: WlSchedule | None = None) -> SweepResult:
    """Measure chi, plan the grid, execute every point, audit the results.

    The susceptibility is measured once per sweep (dedicated RNG stream) and
    frozen into the plan so every realized supersaturation shares it.  With
    the logp mode enabled the sweep also learns log P(M) per system size over
    a window covering the planned targets and fits the rare-event rate at the
    swept excess volumes.
    """
    chi_l = min(64, max(spec.l_list))
    chi = measure_chi(
        spec.beta, chi_l, spec.chi_sweeps, RngStream(seed=spec.seed, stream_id=_CHI_STREAM)
    )
    thermo = IsingThermo.at(spec.beta).with_chi(chi.chi)
    points, rejected = plan_sweep(spec, thermo)
    if progress is not None:
        progress(f"chi({spec.beta}) = {chi.chi:.6g} from L={chi_l}; {len(points)} points planned")

    def one(point: RunPoint) -> RunRecord:
        record = run_point(point, spec.budget, spec.replicas,
                           burn_in_mult=spec.burn_in_mult,
                           cadence_mult=spec.cadence_mult, mode=spec.mode,
                           stream_dir=stream_dir)
        audit_record(record, thermo)
        if progress is not None:
            progress(
                f"L={record.L} delta={record.delta_realized:.4g} K={record.K}: "
                f"lambda={record.mean_lambda:.4f} droplet_p={record.p_droplet:.3f}"
            )
        return record

    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, points))
    else:
        records = [one(p) for p in points]

    fits: list[RateFit] = []
    histograms: list[MagnetizationHistogram] = []
    if spec.logp:
        for i, L in enumerate(sorted({p.L for p in points})):
            mine = [p for p in points if p.L == L]
            v_list = sorted({p.v_target for p in mine})
            # the window must reach the unconstrained mode near m*|Lambda| so
            # that logp differences read as rare-event costs
            lo = min(p.target_m for p in mine) - 8
            hist = multicanonical_logp(
                spec.beta, L, (lo, L * L),
                RngStream(seed=spec.seed, stream_id=_LOGP_STREAM_BASE + i),
                schedule=wl_schedule,
            )
            histograms.append(hist)
            fit = fit_rate(hist, thermo, v_list)
            fits.append(fit)
            if progress is not None:
                progress(
                    f"logp L={L}: converged={hist.converged} "
                    f"{len(fit.points)} rate points, {len(fit.skipped)} skipped"
                )
    return SweepResult(spec=spec, thermo=thermo, records=records, rejected=rejected,
                       rate_fits=fits, chi_estimate=chi, histograms=histograms)


def summary_dict(result: SweepResult) -> dict:
    """Machine-readable sweep summary (goes to summary.json)."""
    spec = result.spec
    return {
        "version": __version__,
        "config": config_echo(spec),
        "chi": result.thermo.chi,
        "chi_flagged": bool(result.chi_estimate.flagged) if result.chi_estimate else False,
        "thermo": {
            "beta": result.thermo.beta,
            "m_star": result.thermo.m_star,
            "tau_axis": result.thermo.tau_axis,
            "tau_w": result.thermo.tau_w,
        },
        "n_points": len(result.records),
        "rejected": result.rejected,
        "invalid_windows": [list(t) for t in spec.invalid_windows()],
        "metastable_points": [
            {"L": r.L, "delta": r.delta_realized, "K": r.K}
            for r in result.records
            if r.metastable
        ],
        "realized_deltas": sorted({r.delta_realized for r in result.records}),
        "realized_volumes": sorted({r.v_realized for r in result.records}),
        "n_rate_points": sum(len(f.points) for f in result.rate_fits),
        "rate_skipped": [s for f in result.rate_fits for s in f.skipped],
        "logp_converged": [
            {"L": h.L, "converged": bool(h.converged)} for h in result.histograms
        ],
    }
