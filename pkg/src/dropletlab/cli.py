"""Command line entry point.

One subcommand per pipeline stage: exact theory evaluation (theory-phi,
theory-critical, theory-curve), surface-tension geometry (wulff),
susceptibility measurement (chi), constrained sweeps (simulate),
flat-histogram estimation (logp), and rare-event rate comparison (analyze).

Exit codes: 0 success, 1 usage error or invalid parameter domain, 2 runtime
failure, 3 run completed but carries quality flags (flagged susceptibility,
metastable points, unconverged weight learning).

Every successful run writes summary.json into the output directory echoing
the effective configuration with defaults resolved, so any run can be
reproduced exactly from its summary.  The default output directory is taken
from the DROPLETLAB_OUTDIR environment variable when set.
"""

import argparse
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .harness import (
    SweepSpec,
    fit_rate,
    load_sweep_config,
    run_sweep,
    summary_dict,
    write_rate_csv,
    write_runs_csv,
)
from .lattice import (
    RngStream,
    WlSchedule,
    measure_chi,
    multicanonical_logp,
    read_histogram_csv,
    write_histogram_csv,
)
from .theory import critical_delta, critical_lambda, minimize_phi, phi, spinodal_delta
from .thermo import (
    IsingThermo,
    TauFunction,
    read_tau_table,
    tau_w_unit_volume,
    write_polygon_csv,
    wulff_construct,
)

OUTDIR_ENV = "DROPLETLAB_OUTDIR"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_FLAGGED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the exit-code contract reserves 2 for
    # runtime failures, so route usage problems through an exception instead
    def error(self, message):
        raise _UsageError(message)


def _f17(x: float) -> str:
    return format(float(x), ".17g")


def _fnum(x: float) -> str:
    # stdout numbers use the shortest representation that parses back to the
    # same double, so printed values round-trip exactly
    return repr(float(x))


def _outdir(args) -> Path:
    path = Path(args.outdir if args.outdir is not None else os.environ.get(OUTDIR_ENV, "."))
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_summary(outdir: Path, subcommand: str, config: dict, outputs: dict) -> None:
    payload = {
        "version": __version__,
        "subcommand": subcommand,
        "config": config,
        "outputs": outputs,
    }
    (outdir / "summary.json").write_text(json.dumps(payload, indent=2) + "\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dropletlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"dropletlab {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand", parser_class=_Parser)
    sub.required = True

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--outdir", default=None,
                       help=f"output directory (default: ${OUTDIR_ENV} or '.')")
        return p

    p = add("theory-phi", "evaluate the constrained free energy at a point or tabulate it")
    p.add_argument("--d", type=int, required=True, help="dimension, >= 2")
    p.add_argument("--delta", type=float, required=True, help="supersaturation parameter")
    p.add_argument("--lambda", dest="lambda_", type=float, default=None,
                   help="droplet fraction in [0, 1]")
    p.add_argument("--lambda-min", type=float, default=None,
                   help="table mode: grid start (default 0)")
    p.add_argument("--lambda-max", type=float, default=None,
                   help="table mode: grid end (default 1)")
    p.add_argument("--points", type=int, default=None,
                   help="table mode: grid size (default 201)")
    p.add_argument("--out", default=None,
                   help="tabulate lambda,phi over a grid to this CSV instead of printing")

    p = add("theory-critical", "print the critical supersaturation for dimension d")
    p.add_argument("--d", type=int, required=True)

    p = add("theory-curve", "tabulate the minimizing droplet fraction over a grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--delta-min", type=float, default=0.0)
    p.add_argument("--delta-max", type=float, default=1.5)
    p.add_argument("--points", type=int, default=301)
    p.add_argument("--out", default=None, help="curve CSV path (default: OUTDIR/theory_curve.csv)")

    p = add("wulff", "construct the minimal-boundary droplet shape")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--beta", type=float, help="exact Ising surface tension at this coupling")
    src.add_argument("--isotropic", type=float, metavar="TAU0", help="constant surface tension")
    src.add_argument("--tau-table", metavar="PATH",
                     help="two-column text file theta_radians tau")
    p.add_argument("--resolution", type=int, default=4096)
    p.add_argument("--out", default=None, help="polygon CSV path (default: OUTDIR/wulff.csv)")

    p = add("chi", "measure the per-site magnetization variance by free sampling")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--L", type=int, default=64)
    p.add_argument("--sweeps", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=None, help="burn-in sweeps (default: sweeps/4)")
    p.add_argument("--boundary", choices=("plus", "free"), default="plus")

    p = add("simulate", "run a constrained-magnetization sweep")
    p.add_argument("--config", default=None, help="flat-key JSON sweep configuration")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--L", type=int, nargs="+", default=None, metavar="L")
    grid = p.add_mutually_exclusive_group()
    grid.add_argument("--delta", type=float, nargs="+", default=None,
                      help="supersaturation targets (excluded by --vL)")
    grid.add_argument("--vL", type=float, nargs="+", default=None,
                      help="excess volume targets (excluded by --delta)")
    p.add_argument("--K", type=float, nargs="+", default=None,
                   help="census window constants (default: 4.0)")
    p.add_argument("--replicas", type=int, default=None)
    p.add_argument("--budget", type=int, default=None, help="census samples per chain")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--chi-sweeps", type=int, default=None)
    p.add_argument("--burn-in-mult", type=int, default=None, help="burn-in sweeps (units of L^2 proposals)")
    p.add_argument("--cadence-mult", type=int, default=None, help="sweeps between census samples")
    p.add_argument("--mode", choices=("nonlocal", "local"), default=None,
                   help="spin-exchange proposal kind (default: nonlocal)")
    p.add_argument("--logp", action="store_true", default=None,
                   help="also learn log P(M) per size and fit rare-event rates")
    p.add_argument("--threads", type=int, default=None,
                   help="replica worker threads (default: machine parallelism)")
    p.add_argument("--stream-dir", default=None,
                   help="write per-chain raw measurement streams into this directory")
    p.add_argument("--quiet", action="store_true", help="suppress the progress log")

    p = add("logp", "learn log P(M) over a magnetization window by flat-histogram sampling")
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--m-min", type=int, default=None, help="window low edge (default: -L^2)")
    p.add_argument("--m-max", type=int, default=None, help="window high edge (default: L^2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--stream-id", type=int, default=0)
    p.add_argument("--boundary", choices=("plus", "free"), default="plus")
    p.add_argument("--production-sweeps", type=int, default=None)
    p.add_argument("--max-stage-sweeps", type=int, default=None)
    p.add_argument("--chunk-sweeps", type=int, default=None)
    p.add_argument("--flatness", type=float, default=None)
    p.add_argument("--lnf-floor", type=float, default=None)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--out", default=None, help="histogram CSV path (default: OUTDIR/hist.csv)")

    p = add("analyze", "fit rare-event rates from a stored histogram against theory")
    p.add_argument("--hist", required=True, help="histogram CSV written by the logp subcommand")
    p.add_argument("--v", type=float, nargs="+", required=True, help="excess volumes to fit")
    p.add_argument("--chi", type=float, required=True,
                   help="measured susceptibility entering the supersaturation map")
    p.add_argument("--out", default=None, help="rate CSV path (default: OUTDIR/rate.csv)")

    return parser


def _cmd_theory_phi(args) -> int:
    if args.out is None:
        if (args.lambda_min, args.lambda_max, args.points) != (None, None, None):
            raise _UsageError("theory-phi: grid flags need --out")
        if args.lambda_ is None:
            raise _UsageError("theory-phi: one of --lambda or --out is required")
        value = phi(args.d, args.delta, args.lambda_)
        print(_fnum(value))
        _write_summary(_outdir(args), "theory-phi",
                       {"d": args.d, "delta": args.delta, "lambda": args.lambda_},
                       {"stdout": _fnum(value)})
        return EXIT_OK
    if args.lambda_ is not None:
        raise _UsageError("theory-phi: --lambda and --out are mutually exclusive")
    lo = 0.0 if args.lambda_min is None else args.lambda_min
    hi = 1.0 if args.lambda_max is None else args.lambda_max
    n = 201 if args.points is None else args.points
    if n < 2:
        raise ValueError("need at least 2 grid points")
    if not 0.0 <= lo < hi <= 1.0:
        raise ValueError("need 0 <= lambda_min < lambda_max <= 1")
    outdir = _outdir(args)
    out = Path(args.out)
    lines = [f"# d = {args.d}", f"# delta = {_f17(args.delta)}", "lambda,phi"]
    for lam in np.linspace(lo, hi, n):
        lines.append(f"{_f17(lam)},{_f17(phi(args.d, args.delta, float(lam)))}")
    out.write_text("\n".join(lines) + "\n")
    config = {"d": args.d, "delta": args.delta,
              "lambda_min": lo, "lambda_max": hi, "points": n}
    _write_summary(outdir, "theory-phi", config, {"phi_csv": out.name})
    return EXIT_OK


def _cmd_theory_critical(args) -> int:
    value = critical_delta(args.d)
    print(_fnum(value))
    _write_summary(_outdir(args), "theory-critical", {"d": args.d}, {"stdout": _fnum(value)})
    return EXIT_OK


def _cmd_theory_curve(args) -> int:
    if args.points < 2:
        raise ValueError("need at least 2 grid points")
    if not args.delta_max > args.delta_min >= 0.0:
        raise ValueError("need delta_max > delta_min >= 0")
    outdir = _outdir(args)
    out = Path(args.out) if args.out else outdir / "theory_curve.csv"
    grid = np.linspace(args.delta_min, args.delta_max, args.points)
    lines = [
        f"# d = {args.d}",
        f"# delta_c = {_f17(critical_delta(args.d))}",
        f"# lambda_c = {_f17(critical_lambda(args.d))}",
        f"# spinodal_delta = {_f17(spinodal_delta(args.d))}",
        "delta,lambda_star,phi_value,degenerate",
    ]
    for delta in grid:
        r = minimize_phi(args.d, float(delta))
        lines.append(",".join((
            _f17(delta), _f17(r.lambda_star), _f17(r.phi_value),
            "1" if r.degenerate else "0",
        )))
    out.write_text("\n".join(lines) + "\n")
    config = {"d": args.d, "delta_min": args.delta_min, "delta_max": args.delta_max,
              "points": args.points}
    _write_summary(outdir, "theory-curve", config, {"curve_csv": out.name})
    return EXIT_OK


def _cmd_wulff(args) -> int:
    outdir = _outdir(args)
    out = Path(args.out) if args.out else outdir / "wulff.csv"
    if args.beta is not None:
        tau = TauFunction.ising(args.beta)
        source = {"kind": "ising", "beta": args.beta}
    elif args.isotropic is not None:
        tau = TauFunction.isotropic(args.isotropic)
        source = {"kind": "isotropic", "tau0": args.isotropic}
    else:
        tau = read_tau_table(args.tau_table)
        source = {"kind": "table", "path": args.tau_table}
    shape = wulff_construct(tau, resolution=args.resolution)
    write_polygon_csv(shape, out)
    values = {
        "area": shape.area,
        "boundary_cost": shape.boundary_cost,
        "tau_w": tau_w_unit_volume(shape),
    }
    if args.beta is not None:
        thermo = IsingThermo.at(args.beta, resolution=args.resolution)
        values = {
            "beta_c": thermo.beta_c,
            "m_star": thermo.m_star,
            "tau_axis": thermo.tau_axis,
            **values,
        }
    for key, val in values.items():
        print(f"{key} = {_fnum(val)}")
    _write_summary(outdir, "wulff", {**source, "resolution": args.resolution},
                   {"polygon_csv": out.name, **{k: v for k, v in values.items()}})
    return EXIT_OK


def _cmd_chi(args) -> int:
    result = measure_chi(
        args.beta, args.L, args.sweeps,
        RngStream(seed=args.seed, stream_id=args.stream_id),
        burn_in_sweeps=args.burn_in, boundary=args.boundary,
    )
    print(_fnum(result.chi))
    config = {"beta": args.beta, "L": args.L, "sweeps": args.sweeps, "seed": args.seed,
              "stream_id": args.stream_id, "burn_in": args.burn_in, "boundary": args.boundary}
    _write_summary(_outdir(args), "chi", config, {
        "chi": result.chi,
        "std_error": result.std_error,
        "tau_int": result.tau_int,
        "flagged": result.flagged,
        "n_samples": result.n_samples,
    })
    return EXIT_FLAGGED if result.flagged else EXIT_OK


_SIMULATE_SPEC_FLAGS = ("beta", "L", "delta", "vL", "K", "replicas", "budget", "seed",
                        "chi_sweeps", "burn_in_mult", "cadence_mult", "mode", "logp")


def _simulate_spec(args) -> SweepSpec:
    if args.config is not None:
        clashing = [name for name in _SIMULATE_SPEC_FLAGS
                    if getattr(args, name) is not None]
        if clashing:
            raise _UsageError(
                "--config carries the whole sweep definition; drop --"
                + ", --".join(c.replace("_", "-") for c in clashing)
            )
        return load_sweep_config(args.config)
    if args.beta is None:
        raise _UsageError("simulate requires --beta (or --config)")
    if args.L is None:
        raise _UsageError("simulate requires --L (or --config)")
    if (args.delta is None) == (args.vL is None):
        raise _UsageError("simulate requires exactly one of --delta and --vL")
    fields = {
        "beta": args.beta,
        "l_list": tuple(args.L),
        "delta_grid": tuple(args.delta) if args.delta is not None else (),
        "vl_list": tuple(args.vL) if args.vL is not None else (),
    }
    for flag, field_name in (("K", "k_list"), ("replicas", "replicas"),
                             ("budget", "budget"), ("seed", "seed"),
                             ("chi_sweeps", "chi_sweeps"), ("burn_in_mult", "burn_in_mult"),
                             ("cadence_mult", "cadence_mult"), ("mode", "mode"),
                             ("logp", "logp")):
        value = getattr(args, flag)
        if value is not None:
            fields[field_name] = tuple(value) if flag == "K" else value
    return SweepSpec(**fields)


def _cmd_simulate(args) -> int:
    spec = _simulate_spec(args)
    outdir = _outdir(args)
    progress = None if args.quiet else (lambda line: print(line, file=sys.stderr))
    result = run_sweep(spec, threads=args.threads, progress=progress,
                       stream_dir=args.stream_dir)
    runs_path = outdir / "runs.csv"
    rate_path = outdir / "rate.csv"
    write_runs_csv(result.records, runs_path)
    write_rate_csv(result.rate_fits, rate_path)
    outputs = {"runs_csv": runs_path.name, "rate_csv": rate_path.name}
    for hist in result.histograms:
        hist_path = outdir / f"hist_L{hist.L}.csv"
        write_histogram_csv(hist, hist_path)
        outputs[f"hist_L{hist.L}_csv"] = hist_path.name
    if args.stream_dir is not None:
        outputs["stream_dir"] = args.stream_dir
    summary = summary_dict(result)
    summary["subcommand"] = "simulate"
    summary["outputs"] = outputs
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    flagged = (
        summary["chi_flagged"]
        or bool(summary["metastable_points"])
        or any(not h.converged for h in result.histograms)
    )
    return EXIT_FLAGGED if flagged else EXIT_OK


def _cmd_logp(args) -> int:
    outdir = _outdir(args)
    out = Path(args.out) if args.out else outdir / "hist.csv"
    n = args.L * args.L
    m_min = -n if args.m_min is None else args.m_min
    m_max = n if args.m_max is None else args.m_max
    schedule_fields = {
        name: getattr(args, name)
        for name in ("production_sweeps", "max_stage_sweeps", "chunk_sweeps",
                     "flatness", "lnf_floor", "blocks")
        if getattr(args, name) is not None
    }
    schedule = WlSchedule(**schedule_fields)
    hist = multicanonical_logp(
        args.beta, args.L, (m_min, m_max),
        RngStream(seed=args.seed, stream_id=args.stream_id),
        schedule=schedule, boundary=args.boundary,
    )
    write_histogram_csv(hist, out)
    config = {"beta": args.beta, "L": args.L, "m_min": m_min, "m_max": m_max,
              "seed": args.seed, "stream_id": args.stream_id, "boundary": args.boundary,
              **{name: getattr(schedule, name)
                 for name in ("lnf_init", "lnf_floor", "flatness", "chunk_sweeps",
                              "max_stage_sweeps", "production_sweeps", "blocks")}}
    _write_summary(outdir, "logp", config, {
        "hist_csv": out.name,
        "converged": hist.converged,
        "lnf_final": hist.lnf_final,
        "n_bins": int(hist.m_values.size),
    })
    return EXIT_OK if hist.converged else EXIT_FLAGGED


def _cmd_analyze(args) -> int:
    outdir = _outdir(args)
    out = Path(args.out) if args.out else outdir / "rate.csv"
    hist = read_histogram_csv(args.hist)
    thermo = IsingThermo.at(hist.beta).with_chi(args.chi)
    fit = fit_rate(hist, thermo, args.v)
    write_rate_csv([fit], out)
    for p in fit.points:
        print(f"v={_fnum(p.v)} empirical={_fnum(p.empirical)} "
              f"theory={_fnum(p.theory)} ratio={_fnum(p.ratio)}")
    config = {"hist": args.hist, "v": list(args.v), "chi": args.chi}
    _write_summary(outdir, "analyze", config, {
        "rate_csv": out.name,
        "n_points": len(fit.points),
        "skipped": fit.skipped,
        "histogram_converged": hist.converged,
    })
    return EXIT_OK if hist.converged else EXIT_FLAGGED


_COMMANDS = {
    "theory-phi": _cmd_theory_phi,
    "theory-critical": _cmd_theory_critical,
    "theory-curve": _cmd_theory_curve,
    "wulff": _cmd_wulff,
    "chi": _cmd_chi,
    "simulate": _cmd_simulate,
    "logp": _cmd_logp,
    "analyze": _cmd_analyze,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.subcommand](args)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # invalid parameter domains surface as ValueError from the library
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit:
        raise
    except KeyboardInterrupt:
        return EXIT_RUNTIME
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
