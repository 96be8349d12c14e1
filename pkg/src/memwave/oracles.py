"""Independent oracles and comparison experiments for the memory solver.

Auxiliary-variable oracle
-------------------------
For the time-independent kernel mu(s) = eps^-2 exp(-s/eps) the memory
force admits an exact reduction to a local variable.  Write

    zeta_k(t) = int_0^inf mu(s) eta_k(t, s) ds,

the per-mode memory coupling.  Differentiating under the integral and
using that the history profile obeys  d/dt eta = -d/ds eta + a_k'(t):

    zeta_k'(t) = int mu(s) (-d/ds eta_k) ds + a_k'(t) int mu(s) ds.

Integrate the first term by parts.  The boundary terms vanish: at s = 0
the profile vanishes (eta(t, 0+) = u(t) - u(t) = 0 along any trajectory)
and at infinity the kernel does; what remains is int mu'(s) eta_k ds.
For the exponential shape mu' = -mu / eps, so that integral is
-zeta_k / eps, and with the total mass kappa = 1/eps:

    zeta_k' = -zeta_k / eps + a_k'(t) / eps.

The memory wave equation then closes into the local ODE system

    a_k'  = b_k
    b_k'  = g_k - lam_k a_k - lam_k zeta_k - <f(u), w_k>
    zeta_k' = (b_k - zeta_k) / eps,

integrated here with a classical fourth-order Runge-Kutta step, far
inside the accuracy of the history-based solver.  No age grid, no
trajectory buffer, no reconstruction: if the two routes agree, the
history bookkeeping is right.  The reduction exists only for constant
eps and the exponential shape; requests outside that family are
rejected.

Kelvin-Voigt comparison
-----------------------
As the kernel concentrates at age zero with fixed first moment m, the
memory force tends to m times the velocity Laplacian, so runs against

    a_k'' = g_k - k_inf lam_k a_k - m lam_k b_k - <f(u), w_k>

quantify the distance to the local damping limit.  The comparison
stepper mirrors the memory solver exactly (same velocity-Verlet family;
the velocity force is absorbed by the exact diagonal solve of the
trapezoid update), so the degenerate pair zero kernel / m = 0 matches
bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from .history import MemoryNormSpec, eta_on_grid, profile_norm2
from .kernels import ConfigError
from .solver import RunRecord, SolveDiverged, WaveModel, solve


@dataclass(frozen=True)
class KVConfig:
    """Kelvin-Voigt limit data: damping mass and elastic weight."""

    m: float
    k_inf: float = 1.0

    def __post_init__(self):
        if self.m < 0:
            raise ConfigError("damping mass must be nonnegative")
        if self.k_inf < 0:
            raise ConfigError("elastic weight k_inf must be nonnegative")


@dataclass
class OracleRun:
    """Output samples of an oracle integration."""

    times: np.ndarray
    a: np.ndarray
    b: np.ndarray
    zeta: Optional[np.ndarray] = None


def _output_times(tau, t_end, dt, output_every):
    n_steps = int(round((t_end - tau) / dt))
    if abs(tau + n_steps * dt - t_end) > 1e-9 * max(1.0, abs(t_end)):
        raise ConfigError("the window is not a whole number of steps")
    idx = list(range(0, n_steps + 1, max(1, int(output_every))))
    if idx[-1] != n_steps:
        idx.append(n_steps)
    return n_steps, idx, tau + dt * np.asarray(idx, dtype=float)


def kv_solve(kv, spectrum, nonlinearity, forcing, a0, b0, tau, t_end, dt,
             output_every=10, divergence_cap=1e9):
    """Integrate the Kelvin-Voigt equation with the solver's stepper family.

    Velocity Verlet with the damping term handled by the exact diagonal
    solve of the trapezoid velocity update; reduces bitwise to the memory
    solver's scheme when m = 0.
    """
    lam = spectrum.lam
    g = np.zeros(spectrum.n_modes) if forcing is None else np.asarray(forcing, dtype=float)
    model_force = (lambda a: np.zeros(spectrum.n_modes)) if nonlinearity.is_zero() \
        else (lambda a: spectrum.project_pointwise_map(a, nonlinearity.f))

    n_steps, idx, times = _output_times(tau, t_end, dt, output_every)
    out_set = frozenset(idx)

    a = np.array(a0, dtype=float)
    b = np.array(b0, dtype=float)
    a_out = np.empty((len(idx), len(a)))
    b_out = np.empty_like(a_out)
    pos = 0

    denom = 1.0 + 0.5 * dt * kv.m * lam

    def elastic(a_):
        return g - kv.k_inf * (lam * a_) - model_force(a_)

    accel = elastic(a) - lam * (kv.m * b)
    for i in range(n_steps + 1):
        if i in out_set:
            a_out[pos] = a
            b_out[pos] = b
            pos += 1
        if i == n_steps:
            break
        a1 = a + dt * b + (0.5 * dt * dt) * accel
        partial = elastic(a1)
        b = (b + 0.5 * dt * (accel + partial)) / denom
        a = a1
        accel = partial - lam * (kv.m * b)
        if not np.all(np.isfinite(a)) or np.max(np.abs(a)) > divergence_cap:
            raise SolveDiverged(tau + (i + 1) * dt)
    return OracleRun(times=times, a=a_out, b=b_out)


def zeta_initial(eps, eta0_modal, n_modes):
    """Adaptive quadrature of the inherited profile against the kernel.

    ``eta0_modal`` maps an age s to the modal profile vector (or None for
    a virgin history).  Kept independent of the age grid on purpose.
    """
    if eta0_modal is None:
        return np.zeros(n_modes)
    zeta = np.empty(n_modes)
    for k in range(n_modes):
        zeta[k], _ = integrate.quad(
            lambda s: np.exp(-s / eps) / (eps * eps) * float(eta0_modal(s)[k]),
            0.0, np.inf, limit=200)
    return zeta


def exp_kernel_oracle(eps, spectrum, nonlinearity, forcing, a0, b0,
                      tau, t_end, dt, eta0_modal=None, output_every=10,
                      zeta0=None):
    """Fourth-order integration of the auxiliary-variable reduction.

    Parameters
    ----------
    eps : float
        Kernel scale; the kernel is eps^-2 exp(-s/eps), constant in time.
    eta0_modal : callable or None
        Age to modal-profile map for the inherited history; integrated
        adaptively into the initial zeta.  ``zeta0`` overrides directly.

    Returns
    -------
    OracleRun with the zeta series attached.
    """
    eps = float(eps)
    if eps <= 0:
        raise ConfigError("oracle needs a positive constant kernel scale")
    lam = spectrum.lam
    g = np.zeros(spectrum.n_modes) if forcing is None else np.asarray(forcing, dtype=float)
    fk = (lambda a: 0.0) if nonlinearity.is_zero() \
        else (lambda a: spectrum.project_pointwise_map(a, nonlinearity.f))

    def rhs(y):
        a, b, z = y
        return np.array([b,
                         g - lam * a - lam * z - fk(a),
                         (b - z) / eps])

    n_steps, idx, times = _output_times(tau, t_end, dt, output_every)
    out_set = frozenset(idx)

    if zeta0 is None:
        zeta0 = zeta_initial(eps, eta0_modal, spectrum.n_modes)
    y = np.array([np.asarray(a0, dtype=float),
                  np.asarray(b0, dtype=float),
                  np.asarray(zeta0, dtype=float)])

    a_out = np.empty((len(idx), spectrum.n_modes))
    b_out = np.empty_like(a_out)
    z_out = np.empty_like(a_out)
    pos = 0
    for i in range(n_steps + 1):
        if i in out_set:
            a_out[pos], b_out[pos], z_out[pos] = y
            pos += 1
        if i == n_steps:
            break
        k1 = rhs(y)
        k2 = rhs(y + 0.5 * dt * k1)
        k3 = rhs(y + 0.5 * dt * k2)
        k4 = rhs(y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return OracleRun(times=times, a=a_out, b=b_out, zeta=z_out)


def require_constant_exp_kernel(kernel):
    """Extract the oracle scale or explain why there is none."""
    eps = kernel.constant_exp_scale()
    if eps is None:
        raise ConfigError(
            "the auxiliary-variable oracle needs a time-independent "
            "exponential kernel; %s does not reduce" % kernel.label)
    return eps


# ---------------------------------------------------------------------------
# experiments
# ---------------------------------------------------------------------------

def sup_modal_gap(times_a, series_a, times_b, series_b):
    """Sup over time of the max modal difference; grids must align."""
    if len(times_a) != len(times_b) or np.max(np.abs(times_a - times_b)) > 1e-12:
        raise ValueError("output grids differ")
    return float(np.max(np.abs(series_a - series_b)))


def kv_limit_experiment(kernels, spectrum, nonlinearity, forcing, a0, b0,
                        tau, t_end, dt, k_inf=1.0, output_every=10,
                        n_age=256, s_min=1e-4, map_fn=map):
    """Distance between memory runs and their Kelvin-Voigt limit.

    ``kernels`` is a list of (label, kernel) pairs, typically rescalings
    of one shape with shrinking scale.  Each memory run is compared
    against the local damping equation with the kernel's own first
    moment.  Returns rows (label, m, sup_gap).  Runs are independent;
    ``map_fn`` may be a thread pool's map.
    """
    from .kernels import kv_mass

    def one(pair):
        label, kernel = pair
        m = kv_mass(kernel, tau)
        model = WaveModel(kernel=kernel, spectrum=spectrum,
                          nonlinearity=nonlinearity, forcing=forcing,
                          k_inf=k_inf)
        rec = solve(model, a0, b0, None, tau, t_end, dt,
                    output_every=output_every, n_age=n_age, s_min=s_min)
        ref = kv_solve(KVConfig(m=m, k_inf=k_inf), spectrum, nonlinearity,
                       forcing, a0, b0, tau, t_end, dt,
                       output_every=output_every)
        return (label, float(m),
                sup_modal_gap(rec.times, rec.a, ref.times, ref.a))

    return list(map_fn(one, kernels))


def difference_history(rec1, rec2):
    """HistorySnapshot of the difference of two runs on the same grid."""
    from .history import HistorySnapshot

    h1, h2 = rec1.hist, rec2.hist
    if h1.grid is not h2.grid and not np.array_equal(h1.grid.nodes, h2.grid.nodes):
        raise ValueError("runs use different age grids")
    if h1.dt != h2.dt or h1.tau != h2.tau or h1.n_filled != h2.n_filled:
        raise ValueError("runs use different time grids")
    diff = HistorySnapshot(
        tau=h1.tau, dt=h1.dt, u_tau=h1.u_tau - h2.u_tau,
        eta_tau=h1.eta_tau - h2.eta_tau, grid=h1.grid,
        traj=h1.traj[:h1.n_filled] - h2.traj[:h2.n_filled],
        n_filled=h1.n_filled)
    return diff


def state_distance2(rec1, rec2, i, sigma, lam):
    """Squared product-metric distance of two runs at output index i.

    sigma = 0 pairs H^1 x L^2 with the natural memory norm; sigma = -1 is
    the weak metric (L^2 x H^-1 plus the weak memory norm).
    """
    kernel = rec1.model.kernel
    diff = difference_history(rec1, rec2)
    t = float(rec1.times[i])
    spec = MemoryNormSpec(sigma, lam)
    w = diff.grid.mass_weights(kernel, t)
    mem = profile_norm2(eta_on_grid(diff, t), w, spec)
    da = rec1.a[i] - rec2.a[i]
    db = rec1.b[i] - rec2.b[i]
    if sigma == 0:
        return float(lam @ (da * da) + db @ db) + mem
    if sigma == -1:
        return float(da @ da + (db * db) @ (1.0 / lam)) + mem
    raise ValueError("sigma must be 0 or -1 here")


def continuous_dependence_experiment(model, a0, b0, eta0, tau, t_end, dt,
                                     deltas, output_every=10, n_age=256,
                                     s_min=1e-4, grid=None, map_fn=map):
    """Growth of state distances under initial-data perturbations.

    The base run is compared with runs whose first displacement mode is
    shifted by each delta.  For every delta the sup over output times of
    the distance ratio (current distance over initial distance) is
    reported in the natural and weak metrics, together with a Gronwall
    certificate for the squared weak distance: a rate fitted on even
    output indices must cover the odd ones.

    Returns (rows, gronwall) where rows are
    (delta, sup_ratio_natural, sup_ratio_weak) and gronwall maps delta to
    (rate, holdout_ok).  Perturbed runs are independent given the base
    run; ``map_fn`` may be a thread pool's map.
    """
    for delta in deltas:
        if delta == 0:
            raise ConfigError("a zero perturbation leaves the ratio undefined")
    lam = model.spectrum.lam
    base = solve(model, a0, b0, eta0, tau, t_end, dt, grid=grid,
                 output_every=output_every, n_age=n_age, s_min=s_min)
    grid = base.hist.grid

    def one(delta):
        a_pert = np.array(a0, dtype=float)
        a_pert[0] += delta
        pert = solve(model, a_pert, b0, eta0, tau, t_end, dt, grid=grid,
                     output_every=output_every, n_age=n_age, s_min=s_min)

        d_nat = np.array([state_distance2(base, pert, i, 0, lam)
                          for i in range(len(base.times))])
        d_weak = np.array([state_distance2(base, pert, i, -1, lam)
                           for i in range(len(base.times))])
        r_nat = np.sqrt(d_nat / d_nat[0])
        r_weak = np.sqrt(d_weak / d_weak[0])

        # Gronwall fit-then-verify on the squared weak distance
        ts = base.times - tau
        logs = np.log(d_weak / d_weak[0])
        fit_idx = np.arange(2, len(ts), 2)
        hold_idx = np.arange(1, len(ts), 2)
        rate = float(np.max(logs[fit_idx] / ts[fit_idx])) if len(fit_idx) else 0.0
        rate = max(rate, 0.0)
        slack = 1e-9 + 0.05 * abs(rate)
        ok = bool(np.all(logs[hold_idx] <= (rate + slack) * ts[hold_idx] + 1e-9))
        return ((float(delta), float(np.max(r_nat)), float(np.max(r_weak))),
                (rate, ok))

    results = list(map_fn(one, deltas))
    rows = [row for row, _ in results]
    gronwall = {row[0]: cert for row, cert in results}
    return rows, gronwall
