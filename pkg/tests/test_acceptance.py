"""Acceptance scorecard: one test per shipped guarantee.

Each test prints a single ``criterion NN: pass|FAIL`` line; the -rA
flag in pyproject surfaces those lines even for passing tests, so a
bare pytest run shows the whole scorecard.  Tolerances and runtime caps
are part of the contract and are asserted, not just printed.
"""

import glob
import os
import time

import numpy as np
import pytest
from scipy.integrate import quad

from memwave import cli, recording
from memwave.history import MemoryNormSpec, key_inequality_residuals
from memwave.kernels import (
    BASE_SHAPES,
    RescaledKernel,
    RheologicalKernel,
    ZeroKernel,
    constant_profile,
    exp_decay_profile,
    inverse_softplus_profile,
    log_growth_profile,
    structural_functions,
    tanh_step_profile,
    validate_assumptions,
)
from memwave.oracles import (
    continuous_dependence_experiment,
    exp_kernel_oracle,
    kv_limit_experiment,
    sup_modal_gap,
)
from memwave.rheology import (
    StrainHistory,
    delta_limit_diagnostics,
    standard_solid_relaxation,
    stress_response,
)
from memwave.solver import WaveModel, solve
from memwave.spectral import Spectrum, make_nonlinearity

CONFIG_DIR = os.path.join(os.path.dirname(__file__), "..", "configs")


def _verdict(num, problems, detail):
    ok = not problems
    text = detail if ok else "; ".join(problems)
    print("criterion %02d: %s (%s)" % (num, "pass" if ok else "FAIL", text))
    assert ok, "criterion %02d: %s" % (num, text)


def _exp_kernel(profile):
    return RescaledKernel(shape=BASE_SHAPES["exponential"], eps=profile)


def test_criterion_01_rescaled_validator_and_closed_forms():
    problems = []
    worst_time = 0.0
    worst_rel = 0.0
    s_dense = np.geomspace(1e-9, 40.0, 4000)
    for label, profile in (("exp_decay", exp_decay_profile()),
                           ("inverse_softplus", inverse_softplus_profile(2.0))):
        kernel = _exp_kernel(profile)
        start = time.perf_counter()
        report = validate_assumptions(kernel)
        elapsed = time.perf_counter() - start
        worst_time = max(worst_time, elapsed)
        if not report.passed:
            problems.append("%s fails validator" % label)
        if report.worst_margin() < -1e-9:
            problems.append("%s margin %.2e" % (label, report.worst_margin()))
        if elapsed >= 1.0:
            problems.append("%s validator took %.2fs" % (label, elapsed))
        # closed-form structure against quadrature and finite differences
        for tau, t in ((-1.0, 0.5), (0.0, 2.0)):
            kappa, big_k, growth = structural_functions(kernel, tau, t)
            mass, _ = quad(lambda s: kernel.mu(t, s), 0, np.inf, limit=200)
            worst_rel = max(worst_rel, abs(kappa - mass) / abs(mass))
            ratio = np.max(kernel.mu(t, s_dense) / kernel.mu(tau, s_dense))
            worst_rel = max(worst_rel, abs(big_k - ratio) / abs(big_k))
            h = 1e-5
            fd = (kernel.mu(t + h, s_dense)
                  - kernel.mu(t - h, s_dense)) / (2 * h)
            growth_fd = np.max(fd / kernel.mu(t, s_dense))
            worst_rel = max(worst_rel, abs(growth - growth_fd)
                            / max(abs(growth), 1e-30))
    if worst_rel > 1e-6:
        problems.append("structure functions off by %.2e" % worst_rel)
    _verdict(1, problems,
             "both scale profiles admissible, structure rel err %.1e, "
             "slowest audit %.3fs" % (worst_rel, worst_time))


def test_criterion_02_rheological_validator_and_mass():
    problems = []
    kernel = RheologicalKernel(K0=tanh_step_profile(base=1.0, step=2.0),
                               gamma=1.0, rho=1.0)
    report = validate_assumptions(kernel)
    if not report.passed:
        problems.append("validator fails")
    worst_rel = 0.0
    for t in (-1.0, 0.0, 2.0):
        kappa = structural_functions(kernel, t - 0.5, t)[0]
        mass, _ = quad(lambda s: kernel.mu(t, s), 0, np.inf, limit=200)
        worst_rel = max(worst_rel, abs(kappa - mass) / abs(mass))
        if abs(kappa - kernel.K0.value(t) / kernel.rho) > 1e-12:
            problems.append("kappa(t=%g) is not K0/rho" % t)
    if worst_rel > 1e-6:
        problems.append("mass quadrature off by %.2e" % worst_rel)
    _verdict(2, problems,
             "tanh-step modulus admissible, mass rel err %.1e" % worst_rel)


def test_criterion_03_delta_limit_concentration():
    problems = []
    kernel = RheologicalKernel(K0=log_growth_profile(base=1.0),
                               gamma=1.0, rho=1.0)
    start = time.perf_counter()
    times = [10.0, 20.0, 40.0]
    for nu in (0.0, 0.5):
        rows = delta_limit_diagnostics(kernel, nu, times)
        tails = [r.tail for r in rows]
        if not all(x > y for x, y in zip(tails, tails[1:])):
            problems.append("tail not strictly decreasing at nu=%g" % nu)
        if nu == 0.5:
            bulks = [r.bulk for r in rows]
            if not all(x > y for x, y in zip(bulks, bulks[1:])):
                problems.append("bulk not strictly decreasing at nu=0.5")
        else:
            limit = kernel.gamma / kernel.rho
            gap = abs(rows[-1].bulk - limit) / limit
            if gap > 0.05:
                problems.append("bulk(40) misses gamma/rho by %.1f%%"
                                % (100 * gap))
    elapsed = time.perf_counter() - start
    if elapsed >= 5.0:
        problems.append("diagnostics took %.2fs" % elapsed)
    _verdict(3, problems,
             "tails vanish, bulk(nu=0, t=40) within %.2f%% of gamma/rho, "
             "%.2fs" % (100 * gap, elapsed))


def test_criterion_04_stress_form_equivalence():
    problems = []
    aging = RheologicalKernel(
        K0=tanh_step_profile(base=1.0, step=2.0), gamma=1.0,
        rho=1.0).with_cached_antiderivative(-60.0, 60.0)
    samples = np.linspace(0.0, 4.0, 161)
    smooth = StrainHistory.from_function(np.sin, np.cos, samples)
    t_grid = np.linspace(0.0, 4.0, 41)
    elastic, rate = stress_response(aging, smooth, t_grid, spring_k=1.0)
    gap = float(np.max(np.abs(elastic - rate)))
    scale = float(np.max(np.abs(elastic)))
    if gap > 1e-6 * scale:
        problems.append("form gap %.2e exceeds 1e-6*%.2f" % (gap, scale))

    beta, gamma, spring_k, amplitude = 1.0, 1.0, 2.0, 0.8
    solid = RheologicalKernel(K0=constant_profile(beta), gamma=gamma, rho=1.0)
    step = StrainHistory.step(amplitude, 0.0, 4.0, n=161)
    t_relax = np.linspace(0.1, 4.0, 40)
    elastic, rate = stress_response(solid, step, t_relax, spring_k=spring_k)
    exact = standard_solid_relaxation(spring_k, beta, gamma, amplitude,
                                      t_relax)
    rel = float(max(np.max(np.abs(elastic - exact) / np.abs(exact)),
                    np.max(np.abs(rate - exact) / np.abs(exact))))
    if rel > 1e-4:
        problems.append("relaxation curve off by %.2e relative" % rel)
    _verdict(4, problems,
             "smooth-strain form gap %.1e (scale %.2f), relaxation rel err "
             "%.1e" % (gap, scale, rel))


def test_criterion_05_solver_order_on_harmonic_motion():
    problems = []
    spectrum = Spectrum.interval(1)
    model = WaveModel(kernel=ZeroKernel(), spectrum=spectrum,
                      nonlinearity=make_nonlinearity("zero"))
    errors = []
    for dt in (2e-3, 1e-3, 5e-4):
        record = solve(model, np.array([1.0]), np.zeros(1), None, 0.0, 1.0,
                       dt, output_every=round(0.1 / dt))
        t = record.times
        gap_a = record.a[:, 0] - np.cos(np.pi * t)
        gap_b = record.b[:, 0] + np.pi * np.sin(np.pi * t)
        errors.append(float(np.max(np.sqrt(np.pi ** 2 * gap_a ** 2
                                           + gap_b ** 2))))
    ratios = [errors[0] / errors[1], errors[1] / errors[2]]
    for ratio in ratios:
        if not 3.5 <= ratio <= 4.5:
            problems.append("halving ratio %.3f outside [3.5, 4.5]" % ratio)
    record = solve(model, np.array([1.0]), np.zeros(1), None, 0.0, 1.0,
                   5e-4, output_every=200)
    terminal = abs(record.a[-1, 0] + 1.0)
    if terminal > 1e-4:
        problems.append("terminal gap %.2e at dt=5e-4" % terminal)
    _verdict(5, problems,
             "halving ratios %.4f / %.4f, |a(1)+1| = %.1e" %
             (ratios[0], ratios[1], terminal))


def test_criterion_06_oracle_equivalence_with_refinement():
    problems = []
    spectrum = Spectrum.interval(8)
    nonlinearity = make_nonlinearity("cubic_minus_linear")
    model = WaveModel(kernel=_exp_kernel(constant_profile(1.0)),
                      spectrum=spectrum, nonlinearity=nonlinearity)
    a0 = np.zeros(8)
    a0[:4] = [0.5, -0.2, 0.1, 0.05]
    b0 = np.zeros(8)
    start = time.perf_counter()
    gaps = []
    for dt, n_age in ((4e-3, 64), (2e-3, 128), (1e-3, 256)):
        record = solve(model, a0, b0, None, 0.0, 5.0, dt,
                       output_every=round(0.05 / dt), n_age=n_age)
        oracle = exp_kernel_oracle(1.0, spectrum, nonlinearity, None, a0, b0,
                                   0.0, 5.0, dt,
                                   output_every=round(0.05 / dt))
        gaps.append(sup_modal_gap(record.times, record.a,
                                  oracle.times, oracle.a))
    elapsed = time.perf_counter() - start
    if gaps[-1] > 1e-4:
        problems.append("finest gap %.2e exceeds 1e-4" % gaps[-1])
    orders = [float(np.log2(gaps[i] / gaps[i + 1])) for i in range(2)]
    for order in orders:
        if order < 1.8:
            problems.append("observed order %.2f below 1.8" % order)
    if elapsed >= 30.0:
        problems.append("sweep took %.1fs" % elapsed)
    _verdict(6, problems,
             "gaps %.1e -> %.1e -> %.1e, orders %.2f / %.2f, %.1fs" %
             (gaps[0], gaps[1], gaps[2], orders[0], orders[1], elapsed))


def test_criterion_07_energy_monotonicity_with_richardson_budget():
    problems = []
    model = WaveModel(kernel=_exp_kernel(constant_profile(1.0)),
                      spectrum=Spectrum.interval(3),
                      nonlinearity=make_nonlinearity("zero"))
    a0 = np.array([0.5, -0.3, 0.2])
    upticks = {}
    for dt in (2e-3, 1e-3):
        record = solve(model, a0, np.zeros(3), None, 0.0, 1.0, dt,
                       output_every=round(0.02 / dt))
        energy = record.ledger.energy_total
        upticks[dt] = max(0.0, float(np.max(np.diff(energy))))
    budget = 1.5 * (upticks[2e-3] / 2e-3 ** 2) * 1e-3 ** 2 + 1e-12
    if upticks[1e-3] > budget:
        problems.append("fine uptick %.2e beyond Richardson budget %.2e"
                        % (upticks[1e-3], budget))
    _verdict(7, problems,
             "worst upticks %.1e (dt=2e-3), %.1e (dt=1e-3), budget %.1e" %
             (upticks[2e-3], upticks[1e-3], budget))


def test_criterion_08_slice_norm_inequality_at_two_steps():
    problems = []
    kernel = _exp_kernel(inverse_softplus_profile(2.0))
    spectrum = Spectrum.interval(4)
    model = WaveModel(kernel=kernel, spectrum=spectrum,
                      nonlinearity=make_nonlinearity("cubic_minus_linear"))
    a0 = np.array([0.5, -0.2, 0.1, 0.0])
    b0 = np.array([0.0, 0.3, 0.0, 0.0])
    norm_spec = MemoryNormSpec(sigma=0, lam=spectrum.lam)
    minima = {}
    for dt in (2e-3, 1e-3):
        record = solve(model, a0, b0, None, 0.0, 1.0, dt,
                       output_every=round(0.02 / dt))
        residual = key_inequality_residuals(record.hist, kernel, norm_spec,
                                            record.times,
                                            velocities=record.b)
        n_out = len(record.times)
        if residual.shape != (n_out, n_out):
            problems.append("residual matrix misses output pairs")
        minima[dt] = float(residual.min())
    budget = 1.5 * (max(-minima[2e-3], 0.0) / 2e-3 ** 2) * 1e-3 ** 2 + 1e-12
    if minima[1e-3] < -budget:
        problems.append("fine min %.2e below -%.2e" % (minima[1e-3], budget))
    _verdict(8, problems,
             "matrix minima %.1e (dt=2e-3), %.1e (dt=1e-3), budget %.1e" %
             (minima[2e-3], minima[1e-3], budget))


def test_criterion_09_continuous_dependence_ratios():
    problems = []
    model = WaveModel(kernel=_exp_kernel(inverse_softplus_profile(2.0)),
                      spectrum=Spectrum.interval(4),
                      nonlinearity=make_nonlinearity("cubic_minus_linear"))
    a0 = np.array([0.5, -0.2, 0.1, 0.0])
    b0 = np.array([0.0, 0.3, 0.0, 0.0])
    rows, gronwall = continuous_dependence_experiment(
        model, a0, b0, None, 0.0, 1.0, 1e-3,
        deltas=[1e-2, 1e-3, 1e-4], output_every=50)
    for name, idx in (("natural", 1), ("weak", 2)):
        column = [row[idx] for row in rows]
        if not all(np.isfinite(column)):
            problems.append("non-finite %s ratio" % name)
            continue
        spread = max(column) / min(column) - 1.0
        if spread > 0.20:
            problems.append("%s ratios vary by %.0f%%" % (name, 100 * spread))
    if not all(ok for _, ok in gronwall.values()):
        problems.append("Gronwall holdout violated")
    _verdict(9, problems,
             "sup ratios natural %s, weak %s, spread <= %.2f%%" %
             (["%.4f" % row[1] for row in rows],
              ["%.4f" % row[2] for row in rows],
              100 * max(max(r[i] for r in rows) / min(r[i] for r in rows) - 1
                        for i in (1, 2))))


def test_criterion_10_kelvin_voigt_limit_sweep():
    problems = []
    spectrum = Spectrum.interval(4)
    a0 = np.array([0.5, -0.2, 0.1, 0.0])
    b0 = np.array([0.0, 0.3, 0.0, 0.0])
    start = time.perf_counter()
    tails = {}
    for name in ("zero", "cubic_minus_linear"):
        kernels = [("eps=%g" % eps, _exp_kernel(constant_profile(eps)))
                   for eps in (0.5, 0.25, 0.125, 0.0625)]
        rows = kv_limit_experiment(kernels, spectrum, make_nonlinearity(name),
                                   None, a0, b0, 0.0, 1.0, 5e-4,
                                   output_every=100, s_min=1e-5)
        masses = [row[1] for row in rows]
        errors = [row[2] for row in rows]
        if any(abs(m - 1.0) > 1e-12 for m in masses):
            problems.append("%s: matched mass drifts from 1" % name)
        if not all(x > y for x, y in zip(errors, errors[1:])):
            problems.append("%s: error not strictly decreasing" % name)
        tails[name] = errors[-1]
    elapsed = time.perf_counter() - start
    if elapsed >= 60.0:
        problems.append("sweep took %.1fs" % elapsed)
    _verdict(10, problems,
             "errors shrink to %.1e (linear) and %.1e (nonlinear), %.1fs" %
             (tails["zero"], tails["cubic_minus_linear"], elapsed))


def test_criterion_11_determinism_and_round_trip(tmp_path):
    problems = []
    configs = sorted(glob.glob(os.path.join(CONFIG_DIR, "*.toml")))
    assert len(configs) == 9
    n_files = 0
    for path in configs:
        stem = os.path.splitext(os.path.basename(path))[0]
        command = {"validate": "validate-kernel", "solve": "solve",
                   "experiment": "experiment"}[stem.split("_")[0]]
        expected = 1 if stem == "validate_broken" else 0
        dirs = [str(tmp_path / (stem + "_a")), str(tmp_path / (stem + "_b"))]
        for out in dirs:
            code = cli.main([command, "--config", path, "--out", out])
            if code != expected:
                problems.append("%s exited %d, wanted %d"
                                % (stem, code, expected))
        first = sorted(glob.glob(os.path.join(dirs[0], "*.csv")))
        if not first:
            problems.append("%s wrote no CSV" % stem)
        for produced in first:
            n_files += 1
            twin = os.path.join(dirs[1], os.path.basename(produced))
            if open(produced, "rb").read() != open(twin, "rb").read():
                problems.append("%s not byte-reproducible"
                                % os.path.basename(produced))
            header, rows = recording.read_csv(produced)
            if not rows or len(header) < 2:
                problems.append("%s re-parses empty"
                                % os.path.basename(produced))
    _verdict(11, problems,
             "9 configs rerun byte-identical, %d CSVs re-parse" % n_files)
