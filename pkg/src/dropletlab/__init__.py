"""Droplet formation and dissolution in the 2D Ising lattice gas.

Three layers: exact theory (the constrained free energy and its phase
structure, plus exact magnetization and surface tension inputs), a Monte
Carlo engine for fixed- and free-magnetization sampling with boundary-loop
census analysis, and a sweep harness that ties measured susceptibilities to
supersaturation targets and rare-event rates.
"""

__version__ = "0.1.0"

from .contours import (
    CensusSummary,
    Contour,
    ContourCensus,
    census_frequencies,
    census_of,
    census_window,
    classify,
    droplet_fraction,
    extract_contours,
    parse_grid,
    render_spins,
)
from .harness import (
    RateFit,
    RatePoint,
    RunPoint,
    RunRecord,
    SweepResult,
    SweepSpec,
    fit_rate,
    load_sweep_config,
    plan_sweep,
    run_point,
    run_sweep,
    summary_dict,
    write_rate_csv,
    write_runs_csv,
    write_stream_csv,
)
from .lattice import (
    CanonicalConstraint,
    ChiEstimate,
    MagnetizationHistogram,
    RngStream,
    SpinConfig,
    WlSchedule,
    canonical_step,
    glauber_step,
    initial_canonical_config,
    load_checkpoint,
    measure_chi,
    multicanonical_logp,
    read_histogram_csv,
    run_canonical,
    run_glauber,
    save_checkpoint,
    write_histogram_csv,
)
from .theory import (
    MechanismSplit,
    PhiMinResult,
    TwoPhaseParams,
    critical_delta,
    critical_lambda,
    crossover_scale,
    delta_from_physical,
    delta_ising,
    lambda_curve,
    mechanism_costs,
    minimize_phi,
    phi,
    spinodal_delta,
    v_from_delta_ising,
)
from .thermo import (
    IsingThermo,
    TauFunction,
    WulffShape,
    beta_critical,
    m_star,
    read_tau_table,
    tau_axis,
    tau_ising,
    tau_w_unit_volume,
    write_polygon_csv,
    wulff_construct,
)
