"""Modal solver for the semilinear wave equation with fading memory.

The displacement is expanded in the Dirichlet sine basis; each mode obeys

    a_k'' = g_k - k_inf lam_k a_k - lam_k c_k(t) - <f(u), w_k>,

where c_k(t) is the kernel-weighted age integral of the relative
displacement history.  Time stepping is a velocity-Verlet scheme: the
memory force is reconstructed explicitly from the trajectory buffer and
enters the velocity update through the average of the two endpoint
forces, so the scheme stays second order and symplectic on the
memoryless core.  Stability requires dt <= 2 / sqrt(max lam) for the
wave part; the memory adds mild damping and does not tighten the bound
at the scales used here.

Nothing is ever integrated implicitly and the history is never stored
densely: each force evaluation reads the trajectory buffer through the
age-grid reconstruction.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .grids import AgeGrid
from .history import (HistorySnapshot, MemoryNormSpec, eta_on_grid,
                      memory_coupling, profile_norm2)
from .kernels import ConfigError, ZeroKernel
from .spectral import Nonlinearity, Spectrum


class SolveDiverged(RuntimeError):
    """Raised when the iteration leaves the representable range."""

    def __init__(self, t, message=None):
        self.t = float(t)
        super().__init__(message or "solution diverged at t = %.6g" % t)


@dataclass
class WaveModel:
    """Operator data of one run: kernel, spectrum, source, forcing."""

    kernel: object
    spectrum: Spectrum
    nonlinearity: Nonlinearity
    forcing: Optional[np.ndarray] = None     # modal, constant in time
    k_inf: float = 1.0

    def __post_init__(self):
        n = self.spectrum.n_modes
        if self.forcing is None:
            self.forcing = np.zeros(n)
        self.forcing = np.asarray(self.forcing, dtype=float)
        if self.forcing.shape != (n,):
            raise ConfigError("forcing must provide one coefficient per mode")
        if not np.all(np.isfinite(self.forcing)):
            raise ConfigError("forcing coefficients must be finite")
        if self.k_inf < 0:
            raise ConfigError("elastic weight k_inf must be nonnegative")
        if self.spectrum.kind == "abstract" and not self.nonlinearity.is_zero():
            raise ConfigError("abstract spectra admit only the zero source "
                              "(no collocation grid to evaluate f on)")

    def validate(self):
        self.nonlinearity.check_admissible(self.spectrum.lam[0])

    def source_modal(self, a):
        if self.nonlinearity.is_zero():
            return np.zeros(self.spectrum.n_modes)
        return self.spectrum.project_pointwise_map(a, self.nonlinearity.f)


def modal_rhs(model, hist, t, a):
    """Acceleration vector at time t for displacement a.

    The trajectory buffer must already cover t, since the memory force is
    reconstructed from it.
    """
    lam = model.spectrum.lam
    c = memory_coupling(hist, model.kernel, t)
    fk = model.source_modal(a)
    return model.forcing - model.k_inf * (lam * a) - lam * c - fk


def step(model, hist, a, b, accel, i):
    """One velocity-Verlet step from index i; returns (a1, b1, accel1).

    ``accel`` is the acceleration at the current step (reused from the
    previous call); the velocity update averages it with the freshly
    evaluated endpoint acceleration, which amounts to sampling the memory
    force at the step midpoint to second order.
    """
    dt = hist.dt
    a1 = a + dt * b + (0.5 * dt * dt) * accel
    hist.append(a1)
    accel1 = modal_rhs(model, hist, hist.tau + (i + 1) * dt, a1)
    b1 = b + 0.5 * dt * (accel + accel1)
    return a1, b1, accel1


@dataclass
class EnergyLedger:
    """Diagnostic series on the output grid; all norms squared."""

    t: np.ndarray
    energy: np.ndarray            # E: open-loop energy of (u, du/dt)
    energy_total: np.ndarray      # E plus the natural memory norm
    strong: np.ndarray            # L: one grading up
    strong_total: np.ndarray
    mem2_natural: np.ndarray      # sigma = 0
    mem2_weak: np.ndarray         # sigma = -1
    mem2_strong: np.ndarray       # sigma = +1
    state2: np.ndarray            # |z|^2 in the natural product metric
    state2_weak: np.ndarray
    key_residual: np.ndarray      # slice-norm inequality residual from the origin

    COLUMNS = ("t", "E", "E_total", "L", "L_total", "mem2_s0", "mem2_sm1",
               "mem2_sp1", "state2", "state2_weak", "key_residual")

    def rows(self):
        cols = (self.t, self.energy, self.energy_total, self.strong,
                self.strong_total, self.mem2_natural, self.mem2_weak,
                self.mem2_strong, self.state2, self.state2_weak,
                self.key_residual)
        return np.column_stack(cols)


def energy_functionals(model, hist, t, a, b):
    """Pointwise energy functionals; returns a dict of scalars.

    E pairs the H^1 x L^2 norm of the state with twice the integrated
    antiderivative of the source; L is its one-grade-stronger sibling with
    the source tested against the operator.  The *_total variants add the
    matching memory norms.
    """
    sp = model.spectrum
    lam = sp.lam
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)

    w = hist.grid.mass_weights(model.kernel, t)
    eta = eta_on_grid(hist, t)
    per_mode = w @ (eta * eta)
    mem0 = float(per_mode @ lam)
    mem_w = float(per_mode.sum())
    mem_s = float(per_mode @ (lam * lam))

    two_F = 0.0
    if not model.nonlinearity.is_zero():
        two_F = 2.0 * sp.mean_of_map(a, model.nonlinearity.antiderivative)
    E = float(lam @ (a * a) + b @ b) + two_F

    fk = model.source_modal(a)
    L = float((lam * lam) @ (a * a) + lam @ (b * b)
              + 2.0 * lam @ (a * (fk - model.forcing)))

    c = w @ eta
    return {
        "E": E,
        "E_total": E + mem0,
        "L": L,
        "L_total": L + mem_s,
        "mem2_s0": mem0,
        "mem2_sm1": mem_w,
        "mem2_sp1": mem_s,
        "state2": float(lam @ (a * a) + b @ b) + mem0,
        "state2_weak": float(a @ a + (b * b) @ (1.0 / lam)) + mem_w,
        "pair_velocity": float(lam @ (b * c)),
        "growth_rate": float(model.kernel.growth_rate(t)),
    }


@dataclass
class RunRecord:
    """A completed run: output samples, full history, diagnostics."""

    model: WaveModel
    tau: float
    dt: float
    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    hist: HistorySnapshot
    ledger: EnergyLedger

    @property
    def t_end(self):
        return float(self.times[-1])

    def state_at_end(self):
        return self.a[-1].copy(), self.b[-1].copy()


def _ledger_from_rows(times, rows):
    keys = ("E", "E_total", "L", "L_total", "mem2_s0", "mem2_sm1", "mem2_sp1",
            "state2", "state2_weak")
    series = {k: np.array([r[k] for r in rows]) for k in keys}

    # slice-norm inequality residual measured from the origin, trapezoid in t
    norms = series["mem2_s0"]
    pairs = np.array([r["pair_velocity"] for r in rows])
    M = float(np.max([r["growth_rate"] for r in rows]))
    seg = np.diff(times)
    cum_n = np.concatenate([[0.0], np.cumsum(0.5 * seg * (norms[:-1] + norms[1:]))])
    cum_p = np.concatenate([[0.0], np.cumsum(0.5 * seg * (pairs[:-1] + pairs[1:]))])
    res = norms[0] + M * cum_n + 2.0 * cum_p - norms

    return EnergyLedger(
        t=times, energy=series["E"], energy_total=series["E_total"],
        strong=series["L"], strong_total=series["L_total"],
        mem2_natural=series["mem2_s0"], mem2_weak=series["mem2_sm1"],
        mem2_strong=series["mem2_sp1"], state2=series["state2"],
        state2_weak=series["state2_weak"], key_residual=res)


def solve(model, a0, b0, eta0, tau, t_end, dt, grid=None, output_every=10,
          n_age=256, s_min=1e-4, tail_tol=1e-10, divergence_cap=1e9,
          validate=True):
    """Integrate the memory wave equation over [tau, t_end].

    Parameters
    ----------
    model : WaveModel
    a0, b0 : arrays (n,)
        Modal displacement and velocity at the origin.
    eta0 : None or (J, n) array
        Inherited profile sampled on the age-grid nodes; None means a
        virgin history.
    grid : AgeGrid, optional
        Defaults to a geometric grid sized for the kernel on the window.
    output_every : int
        Ledger and output cadence in steps.
    validate : bool
        Run the nonlinearity admissibility gate before stepping.

    Returns
    -------
    RunRecord

    Raises
    ------
    SolveDiverged
        When a step leaves the representable range; carries the time.
    """
    if dt <= 0 or t_end <= tau:
        raise ConfigError("need dt > 0 and t_end > tau")
    if validate:
        model.validate()
    n_steps = int(round((t_end - tau) / dt))
    if abs(tau + n_steps * dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ConfigError("the window [tau, t_end] is not a whole number of steps")
    output_every = max(1, int(output_every))

    if grid is None:
        grid = AgeGrid.for_kernel(model.kernel, (tau, t_end), n_nodes=n_age,
                                  s_min=s_min, tail_tol=tail_tol)

    a = np.array(a0, dtype=float)
    b = np.array(b0, dtype=float)
    if a.shape != (model.spectrum.n_modes,) or b.shape != a.shape:
        raise ConfigError("initial data must have one coefficient per mode")
    hist = HistorySnapshot.start(tau, dt, a, eta0, grid, n_steps)

    out_idx = list(range(0, n_steps + 1, output_every))
    if out_idx[-1] != n_steps:
        out_idx.append(n_steps)
    out_set = frozenset(out_idx)
    times = tau + dt * np.asarray(out_idx, dtype=float)

    a_out = np.empty((len(out_idx), len(a)))
    b_out = np.empty_like(a_out)
    rows = []
    pos = 0

    accel = modal_rhs(model, hist, tau, a)
    for i in range(n_steps + 1):
        if i in out_set:
            t_i = tau + i * dt
            a_out[pos] = a
            b_out[pos] = b
            rows.append(energy_functionals(model, hist, t_i, a, b))
            pos += 1
        if i == n_steps:
            break
        a, b, accel = step(model, hist, a, b, accel, i)
        if not np.all(np.isfinite(a)) or np.max(np.abs(a)) > divergence_cap:
            raise SolveDiverged(tau + (i + 1) * dt)

    ledger = _ledger_from_rows(times, rows)
    return RunRecord(model=model, tau=tau, dt=dt, times=times, a=a_out,
                     b=b_out, hist=hist, ledger=ledger)


# ---------------------------------------------------------------------------
# initial data
# ---------------------------------------------------------------------------

def project_initial_data(spectrum, grid, u0=None, v0=None, eta0=None,
                         n_quad=4096):
    """Turn initial data into modal arrays and age-grid samples.

    Each of ``u0`` and ``v0`` may be None (zero), a modal coefficient
    array, or a callable on (0, 1); callables are projected on a dense
    grid so that aliasing stays below coefficient round-off.  ``eta0``
    may be None, a (J, n) sample array, or a callable ``(s, x)`` which is
    projected at every age node.
    """
    n = spectrum.n_modes

    def modal_of(data):
        if data is None:
            return np.zeros(n)
        if callable(data):
            return spectrum.project_function(data, n_quad=n_quad)
        arr = np.asarray(data, dtype=float)
        if arr.shape != (n,):
            raise ConfigError("modal initial data must have %d entries" % n)
        return arr

    a0 = modal_of(u0)
    b0 = modal_of(v0)

    if eta0 is None:
        samples = np.zeros((grid.size, n))
    elif callable(eta0):
        m = int(n_quad)
        h = 1.0 / (m + 1)
        x = h * np.arange(1, m + 1)
        k = np.arange(1, n + 1)
        basis = np.sqrt(2.0) * np.sin(np.pi * x[:, None] * k[None, :])
        vals = np.asarray([eta0(s, x) for s in grid.nodes], dtype=float)
        samples = h * (vals @ basis)
    else:
        samples = np.asarray(eta0, dtype=float)
        if samples.shape != (grid.size, n):
            raise ConfigError("profile samples must be (%d, %d)"
                              % (grid.size, n))
    return a0, b0, samples


# ---------------------------------------------------------------------------
# two-sided energy control
# ---------------------------------------------------------------------------

def two_side_control_check(record):
    """Check the energy envelope along a run.

    Lower side: E >= theta (|u|_1^2 + |du/dt|^2) - C with constants from
    the source's dissipation margin.  Upper side: E <= Q(r) with r the
    energy-norm radius of the state and Q a quartic with the source's
    growth constant.  Returns the constants and the worst signed margins
    (nonnegative margins mean the envelope holds).
    """
    model = record.model
    sp = model.spectrum
    lam1 = float(sp.lam[0])
    theta, C, c_F = model.nonlinearity.energy_envelope(lam1)

    lam = sp.lam
    quad = (lam @ (record.a ** 2).T) + (record.b ** 2).sum(axis=1)
    E = record.ledger.energy
    lower = E - (theta * quad - C)

    r2 = quad
    # 2|int F| <= c_F (int u^2 + int u^4) <= c_F/lam1 * r^2 (1 + r^2/4)
    Q = r2 + c_F * (r2 / lam1) * (1.0 + 0.25 * r2) + C
    upper = Q - E
    return {
        "theta": theta, "C": C, "c_F": c_F,
        "lower_margin": float(np.min(lower)),
        "upper_margin": float(np.min(upper)),
        "ok": bool(np.min(lower) > -1e-9 * max(1.0, float(np.max(np.abs(E)))))
              and bool(np.min(upper) > -1e-9 * max(1.0, float(np.max(np.abs(E))))),
    }
