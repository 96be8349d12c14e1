"""Command-line front end.

Subcommands:

    validate-kernel   audit a kernel config against the structural
                      assumptions, write the report CSV
    solve             run the memory wave solver, write trajectory and
                      energy-ledger CSVs
    experiment        run the scenario named in the config's [scenario]
                      table (kv_limit, continuous_dependence,
                      delta_limit, stress_relaxation), write its table
    report            re-parse previously written CSVs and check them

Exit codes: 0 all checks pass, 1 scientific failure (assumption
violated, divergence, threshold exceeded), 2 usage or config error.
All output files are deterministic: rerunning a config byte-reproduces
them.
"""

from __future__ import annotations

import argparse
import glob
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import recording
from .config import ConfigError, load_config
from .kernels import RescaledKernel, RheologicalKernel, constant_profile, \
    validate_assumptions
from .oracles import continuous_dependence_experiment, kv_limit_experiment
from .rheology import DeltaLimitRow, StrainHistory, delta_limit_diagnostics, \
    stress_response
from .solver import SolveDiverged, WaveModel, solve


def _out_dir(cfg, args):
    d = args.out if args.out else cfg.output.directory
    os.makedirs(d, exist_ok=True)
    return d


def _out_path(cfg, args, suffix):
    return os.path.join(_out_dir(cfg, args), cfg.output.prefix + suffix)


def cmd_validate_kernel(cfg, args):
    kernel = cfg.kernel()
    tol = args.tol if args.tol is not None else 1e-9
    tail_tol = cfg.grids.tail_tol if cfg.grids is not None else 1e-10
    report = validate_assumptions(kernel, tol=tol, tail_tol=tail_tol)
    path = recording.write_csv(
        _out_path(cfg, args, "_kernel_report.csv"),
        *recording.kernel_report_table(report))
    for line in report.summary_lines():
        print(line)
    print("wrote %s" % path)
    return 0 if report.passed else 1


def _build_model(cfg):
    spectrum = cfg.spectrum()
    model = WaveModel(kernel=cfg.kernel(), spectrum=spectrum,
                      nonlinearity=cfg.nonlinearity(),
                      forcing=cfg.forcing(spectrum.n_modes))
    model.validate()
    return model


def cmd_solve(cfg, args):
    model = _build_model(cfg)
    grids = cfg.need_grids()
    window = cfg.need_run()
    a0, b0 = cfg.initial_state(model.spectrum.n_modes)
    record = solve(model, a0, b0, None, window.tau, window.t_end, grids.dt,
                   output_every=grids.output_every, n_age=grids.n_age,
                   s_min=grids.s_min, tail_tol=grids.tail_tol)
    traj = recording.write_csv(_out_path(cfg, args, "_trajectory.csv"),
                               *recording.trajectory_table(record))
    ledger = recording.write_csv(_out_path(cfg, args, "_ledger.csv"),
                                 *recording.ledger_table(record.ledger))
    print("wrote %s" % traj)
    print("wrote %s" % ledger)
    return 0


def _ratio_column(errors):
    out = [float("nan")]
    out.extend(errors[i] / errors[i - 1] if errors[i - 1] != 0 else float("nan")
               for i in range(1, len(errors)))
    return out


def _scenario_kv_limit(cfg, args, scenario, map_fn):
    block = cfg.kernel_block or {}
    if block.get("family") != "rescaled":
        raise ConfigError("kv_limit sweeps rescaled kernels; set "
                          "kernel.family = \"rescaled\"")
    eps_values = scenario.pop("eps_values", None)
    if not eps_values:
        raise ConfigError("scenario.eps_values is required for kv_limit")
    base_kernel = cfg.kernel()
    kernels = [("eps=%s" % repr(float(e)),
                RescaledKernel(shape=base_kernel.shape,
                               eps=constant_profile(float(e))))
               for e in eps_values]
    model = _build_model(cfg)
    grids = cfg.need_grids()
    window = cfg.need_run()
    a0, b0 = cfg.initial_state(model.spectrum.n_modes)
    rows = kv_limit_experiment(
        kernels, model.spectrum, model.nonlinearity, model.forcing,
        a0, b0, window.tau, window.t_end, grids.dt,
        output_every=grids.output_every, n_age=grids.n_age,
        s_min=grids.s_min, map_fn=map_fn)
    errors = [r[2] for r in rows]
    ratios = _ratio_column(errors)
    table = [(float(e), m, err, rat) for e, (_, m, err), rat
             in zip(eps_values, rows, ratios)]
    return recording.write_csv(_out_path(cfg, args, "_kv_limit.csv"),
                               ["eps", "m", "error", "ratio"], table)


def _scenario_continuous_dependence(cfg, args, scenario, map_fn):
    deltas = scenario.pop("deltas", None)
    if not deltas:
        raise ConfigError("scenario.deltas is required for continuous_dependence")
    model = _build_model(cfg)
    grids = cfg.need_grids()
    window = cfg.need_run()
    a0, b0 = cfg.initial_state(model.spectrum.n_modes)
    rows, gronwall = continuous_dependence_experiment(
        model, a0, b0, None, window.tau, window.t_end, grids.dt,
        deltas=[float(d) for d in deltas], output_every=grids.output_every,
        n_age=grids.n_age, s_min=grids.s_min, map_fn=map_fn)
    table = [(d, rn, rw) + gronwall[d] for d, rn, rw in rows]
    return recording.write_csv(
        _out_path(cfg, args, "_continuous_dependence.csv"),
        ["delta", "sup_ratio_natural", "sup_ratio_weak",
         "gronwall_rate", "gronwall_ok"], table)


def _scenario_delta_limit(cfg, args, scenario):
    kernel = cfg.kernel()
    if not isinstance(kernel, RheologicalKernel):
        raise ConfigError("delta_limit diagnostics need kernel.family = "
                          "\"rheological\"")
    times = scenario.pop("times", None)
    nus = scenario.pop("nus", [0.0])
    if not times:
        raise ConfigError("scenario.times is required for delta_limit")
    table = []
    for nu in nus:
        for row in delta_limit_diagnostics(kernel, float(nu),
                                           [float(t) for t in times]):
            table.append(row.astuple())
    return recording.write_csv(_out_path(cfg, args, "_delta_limit.csv"),
                               list(DeltaLimitRow.COLUMNS), table)


def _scenario_stress(cfg, args, scenario):
    kernel = cfg.kernel()
    if not isinstance(kernel, RheologicalKernel):
        raise ConfigError("stress_relaxation needs kernel.family = "
                          "\"rheological\"")
    form = scenario.pop("strain", "step")
    amplitude = float(scenario.pop("amplitude", 1.0))
    t_end = float(scenario.pop("t_end", 4.0))
    n_samples = int(scenario.pop("n_samples", 161))
    n_query = int(scenario.pop("n_query", 41))
    spring_k = float(scenario.pop("spring_k", 1.0))
    if form == "step":
        strain = StrainHistory.step(amplitude, 0.0, t_end, n=n_samples)
    elif form == "sine":
        ts = np.linspace(0.0, t_end, n_samples)
        strain = StrainHistory.from_function(
            lambda t: amplitude * np.sin(t), lambda t: amplitude * np.cos(t), ts)
    else:
        raise ConfigError("scenario.strain must be \"step\" or \"sine\"")
    t_grid = np.linspace(0.0, t_end, n_query)
    sig_el, sig_rt = stress_response(kernel, strain, t_grid, spring_k=spring_k)
    table = [(float(t), float(strain.value(t)), float(e), float(r),
              float(abs(e - r)))
             for t, e, r in zip(t_grid, sig_el, sig_rt)]
    return recording.write_csv(
        _out_path(cfg, args, "_stress.csv"),
        ["t", "strain", "sigma_elastic", "sigma_rate", "gap"], table)


def cmd_experiment(cfg, args):
    scenario = cfg.need_scenario()
    kind = scenario.pop("kind", None)
    if kind is None:
        raise ConfigError("scenario.kind is required")
    jobs = max(1, args.jobs)

    def run(map_fn):
        if kind == "kv_limit":
            return _scenario_kv_limit(cfg, args, scenario, map_fn)
        if kind == "continuous_dependence":
            return _scenario_continuous_dependence(cfg, args, scenario, map_fn)
        if kind == "delta_limit":
            return _scenario_delta_limit(cfg, args, scenario)
        if kind == "stress_relaxation":
            return _scenario_stress(cfg, args, scenario)
        raise ConfigError("unknown scenario.kind %r" % kind)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            path = run(pool.map)
    else:
        path = run(map)
    print("wrote %s" % path)
    return 0


def _check_kernel_report(header, rows, tol):
    bad = [r for r in rows
           if r[header.index("verdict")] not in ("pass", "info")]
    if bad:
        return False, "%d failing checks" % len(bad)
    return True, "all assumptions hold"


def _check_kv_limit(header, rows, tol):
    err = recording.column(header, rows, "error")
    if not np.all(np.isfinite(err)):
        return False, "non-finite error column"
    dec = np.all(np.diff(err) < 0)
    return bool(dec), ("error strictly decreasing" if dec
                       else "error column not strictly decreasing")


def _check_continuous_dependence(header, rows, tol):
    ok_col = recording.column(header, rows, "gronwall_ok")
    ratios = np.concatenate([
        recording.column(header, rows, "sup_ratio_natural"),
        recording.column(header, rows, "sup_ratio_weak")])
    if not np.all(np.isfinite(ratios)):
        return False, "non-finite ratio"
    if not np.all(ok_col == 1):
        return False, "Gronwall holdout violated"
    return True, "ratios finite, Gronwall holdout respected"


def _check_delta_limit(header, rows, tol):
    nus = recording.column(header, rows, "nu")
    tails = recording.column(header, rows, "I1")
    for nu in np.unique(nus):
        seq = tails[nus == nu]
        if not np.all(np.diff(seq) < 0):
            return False, "I1 not strictly decreasing for nu=%g" % nu
    return True, "I1 strictly decreasing per nu"


def _check_stress(header, rows, tol):
    gap = recording.column(header, rows, "gap")
    scale = np.max(np.abs(recording.column(header, rows, "sigma_elastic")))
    bound = (tol if tol is not None else 1e-6) * max(scale, 1.0)
    worst = float(np.max(gap))
    return worst <= bound, "max form gap %.3e vs bound %.3e" % (worst, bound)


def _check_ledger(header, rows, tol):
    vals = np.array([[c for c in row] for row in rows], dtype=float)
    if not np.all(np.isfinite(vals)):
        return False, "non-finite ledger entry"
    resid = recording.column(header, rows, "key_residual")
    bound = tol if tol is not None else 1e-3
    worst = float(np.min(resid))
    return worst >= -bound, "min key residual %.3e vs -%g" % (worst, bound)


def _check_generic(header, rows, tol):
    for row in rows:
        for cell in row:
            if isinstance(cell, float) and not np.isfinite(cell):
                return False, "non-finite cell"
    return True, "parsed, all numeric cells finite"


_REPORT_CHECKS = [
    ("_kernel_report.csv", _check_kernel_report),
    ("_kv_limit.csv", _check_kv_limit),
    ("_continuous_dependence.csv", _check_continuous_dependence),
    ("_delta_limit.csv", _check_delta_limit),
    ("_stress.csv", _check_stress),
    ("_ledger.csv", _check_ledger),
]


def cmd_report(cfg, args):
    directory = args.out if args.out else cfg.output.directory
    pattern = os.path.join(directory, cfg.output.prefix + "_*.csv")
    paths = sorted(glob.glob(pattern))
    if not paths:
        print("no files match %s" % pattern, file=sys.stderr)
        return 2
    failures = 0
    for path in paths:
        header, rows = recording.read_csv(path)
        check = _check_generic
        for suffix, fn in _REPORT_CHECKS:
            if path.endswith(suffix):
                check = fn
                break
        ok, detail = check(header, rows, args.tol)
        print("%s: %s (%s)" % (path, "PASS" if ok else "FAIL", detail))
        failures += 0 if ok else 1
    return 1 if failures else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="memwave",
        description="Aging-memory wave equation: solver and diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (("validate-kernel", cmd_validate_kernel),
                     ("solve", cmd_solve),
                     ("experiment", cmd_experiment),
                     ("report", cmd_report)):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="TOML config path")
        p.add_argument("--out", default=None,
                       help="output directory (overrides [output])")
        p.add_argument("--jobs", type=int, default=1,
                       help="worker threads for sweep scenarios")
        p.add_argument("--tol", type=float, default=None,
                       help="tolerance override for checks")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        return args.fn(cfg, args)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except SolveDiverged as exc:
        print("solution diverged at t=%.6g" % exc.t, file=sys.stderr)
        return 1
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
