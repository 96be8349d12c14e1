"""Relative-displacement histories and kernel-weighted norms.

The memory state of the wave model is the relative displacement profile

    eta_t(s) = u(t) - u(t - s)                    for ages s <= t - tau,
    eta_t(s) = eta_tau(s - (t - tau)) + u(t) - u(tau)   for older ages,

where tau is the run origin, u the modal trajectory and eta_tau the
inherited profile.  Nothing here stores eta densely: every evaluation
reconstructs it from the trajectory buffer and the inherited samples.

Weighted norms pair a profile with the kernel slice at time t,

    |eta|^2 = sum_k lam_k^(sigma+1) sum_j w_j(t) eta_k(s_j)^2,

with w_j(t) the exact cell masses of the age grid.  sigma = -1, 0, 1 select
the weak, natural and strong gradings.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grids import AgeGrid
from .kernels import ConfigError


@dataclass(frozen=True)
class MemoryNormSpec:
    """Grading of the memory norm: exponent sigma and eigenvalue sequence."""

    sigma: int
    lam: np.ndarray

    def __post_init__(self):
        if self.sigma not in (-1, 0, 1):
            raise ConfigError("memory norm grading must be -1, 0 or +1")

    @property
    def weights_lam(self):
        return np.asarray(self.lam, dtype=float) ** (self.sigma + 1)


@dataclass
class HistorySnapshot:
    """Trajectory buffer plus inherited profile; the full memory state.

    The buffer holds modal displacement coefficients at every solver step
    from the run origin onward, with no gaps.  ``eta_tau`` holds the
    inherited profile sampled on the age grid nodes.
    """

    tau: float
    dt: float
    u_tau: np.ndarray            # (n,)
    eta_tau: np.ndarray          # (J, n)
    grid: AgeGrid
    traj: np.ndarray             # (capacity, n), rows 0..n_filled-1 valid
    n_filled: int = 1

    @classmethod
    def start(cls, tau, dt, u_tau, eta_tau, grid, n_steps):
        u_tau = np.asarray(u_tau, dtype=float)
        n = len(u_tau)
        if eta_tau is None:
            eta_tau = np.zeros((grid.size, n))
        eta_tau = np.asarray(eta_tau, dtype=float)
        if eta_tau.shape != (grid.size, n):
            raise ConfigError("inherited profile must be sampled on the age "
                              "grid nodes, expected shape %r" % ((grid.size, n),))
        traj = np.empty((int(n_steps) + 1, n))
        traj[0] = u_tau
        return cls(tau=float(tau), dt=float(dt), u_tau=u_tau,
                   eta_tau=eta_tau, grid=grid, traj=traj)

    @property
    def t_now(self):
        return self.tau + (self.n_filled - 1) * self.dt

    @property
    def n_modes(self):
        return self.traj.shape[1]

    def append(self, a):
        if self.n_filled >= self.traj.shape[0]:
            raise RuntimeError("trajectory buffer full")
        self.traj[self.n_filled] = a
        self.n_filled += 1

    def u_at(self, t):
        """Modal displacement at times t, linear in time between steps.

        Accepts a scalar or an array of times inside [tau, t_now].
        """
        t = np.asarray(t, dtype=float)
        pos = (t - self.tau) / self.dt
        last = self.n_filled - 1
        if np.any(pos < -1e-9) or np.any(pos > last + 1e-9):
            raise ValueError("time outside the recorded trajectory")
        if last == 0:
            base = np.zeros(t.shape, dtype=int)
            return self.traj[base] if t.shape else self.traj[0]
        base = np.clip(pos.astype(int), 0, last - 1)
        frac = np.clip(pos - base, 0.0, 1.0)
        return self.traj[base] + frac[..., None] * (self.traj[base + 1] - self.traj[base])

    def _eta_tau_at(self, ages):
        """Inherited profile at given ages, edge-clamped linear interpolation."""
        idx, frac = self.grid.interp_weights(ages)
        lo = self.eta_tau[idx]
        hi = self.eta_tau[idx + 1]
        return lo + frac[..., None] * (hi - lo)


def eta_eval(hist, t, s):
    """Relative displacement eta_t(s) as a modal vector.

    Ages at or below the elapsed span t - tau read the trajectory buffer;
    older ages shift the inherited profile and add the net displacement
    since the origin.
    """
    t = float(t)
    s = float(s)
    if s <= 0:
        raise ValueError("age must be positive")
    span = t - hist.tau
    u_t = hist.u_at(t)
    if s <= span + 1e-12 * max(1.0, abs(span)):
        return u_t - hist.u_at(t - s)
    return hist._eta_tau_at(np.asarray([s - span]))[0] + (u_t - hist.u_tau)


def eta_at_ages(hist, t, ages):
    """Profile samples at the given ages at time t; shape (len(ages), n)."""
    t = float(t)
    span = t - hist.tau
    ages = np.asarray(ages, dtype=float)
    u_t = hist.u_at(t)
    out = np.empty((len(ages), hist.n_modes))
    recent = ages <= span + 1e-12 * max(1.0, abs(span))
    if np.any(recent):
        out[recent] = u_t - hist.u_at(t - ages[recent])
    if not recent.all():
        old = ~recent
        out[old] = hist._eta_tau_at(ages[old] - span) + (u_t - hist.u_tau)
    return out


def eta_on_grid(hist, t):
    """Profile samples on every age-grid node at time t; shape (J, n)."""
    return eta_at_ages(hist, t, hist.grid.nodes)


# ---------------------------------------------------------------------------
# weighted norms and pairings
# ---------------------------------------------------------------------------

def profile_norm2(samples, weights, spec):
    """Squared memory norm of profile samples under given cell weights."""
    per_mode = weights @ (np.asarray(samples) ** 2)
    return float(per_mode @ spec.weights_lam)


def profile_pair(samples_a, samples_b, weights, spec):
    """Memory inner product of two sampled profiles."""
    per_mode = weights @ (np.asarray(samples_a) * np.asarray(samples_b))
    return float(per_mode @ spec.weights_lam)


def memory_norm(hist, kernel, t, spec):
    """Squared norm of eta_t in the time-t kernel metric."""
    w = hist.grid.mass_weights(kernel, t)
    return profile_norm2(eta_on_grid(hist, t), w, spec)


def memory_coupling(hist, kernel, t):
    """Kernel-weighted age integral of eta_t, one value per mode.

    This is the memory force entering the modal wave equation (before the
    eigenvalue factor).  It uses the grid's refined coupling rule: exact
    sub-cell masses with evaluation at sub-cell kernel centroids, which keeps
    the force accurate for history oscillations faster than the node
    spacing resolves.
    """
    ages, w = hist.grid.coupling_rule(kernel, t)
    return w @ eta_at_ages(hist, t, ages)


def phi_bound(hist, kernel, t, spec):
    """Origin-metric norm of eta_t against its a-priori envelope.

    Returns the pair (value, envelope) where value is |eta_t|^2 measured in
    the kernel metric frozen at the run origin, and the envelope is
    6 kappa(tau) sup_{[tau,t]} |u|^2 + 3 |eta_tau|^2 in the same metric.
    The envelope only uses data available at the origin plus the running
    displacement bound, so it certifies that reconstructed profiles cannot
    blow up faster than the trajectory does.
    """
    w_tau = hist.grid.mass_weights(kernel, hist.tau)
    value = profile_norm2(eta_on_grid(hist, t), w_tau, spec)

    n_hi = min(hist.n_filled, int(round((t - hist.tau) / hist.dt)) + 1)
    traj = hist.traj[:n_hi]
    sup_u2 = float(np.max((traj ** 2) @ spec.weights_lam))
    kappa_tau = float(kernel.total_mass(hist.tau))
    inherited = profile_norm2(hist.eta_tau, w_tau, spec)
    return value, 6.0 * kappa_tau * sup_u2 + 3.0 * inherited


def translation_dissipativity(samples, kernel, grid, t, spec):
    """Both sides of the translation-generator dissipation identity.

    The generator acts as minus the age derivative; pairing it with the
    profile in the kernel metric equals half the integral of the kernel age
    slope against the squared profile.  Returns (pairing, half_integral);
    both are nonpositive for admissible kernels and differ only by
    quadrature error.
    """
    samples = np.asarray(samples, dtype=float)
    w = grid.mass_weights(kernel, t)
    dsamples = np.gradient(samples, grid.nodes, axis=0)
    pairing = -profile_pair(dsamples, samples, w, spec)

    v = grid.slope_weights(kernel, t)
    half = 0.5 * float((v @ samples ** 2) @ spec.weights_lam)
    return pairing, half


# ---------------------------------------------------------------------------
# the key inequality: norms across time slices
# ---------------------------------------------------------------------------

def _velocity_from_traj(hist):
    """Central-difference modal velocity on the full step grid."""
    traj = hist.traj[:hist.n_filled]
    v = np.empty_like(traj)
    if hist.n_filled == 1:
        v[:] = 0.0
        return v
    v[1:-1] = (traj[2:] - traj[:-2]) / (2.0 * hist.dt)
    v[0] = (traj[1] - traj[0]) / hist.dt
    v[-1] = (traj[-1] - traj[-2]) / hist.dt
    return v


def slice_norm_series(hist, kernel, spec, times, velocities=None):
    """Per-time ingredients of the slice-norm inequality.

    For each requested time: the squared memory norm, the pairing of the
    velocity with the profile in the kernel metric, and the kernel growth
    rate.  Velocities default to central differences of the trajectory;
    callers holding exact modal velocities may pass them (rows matching
    ``times``).
    """
    times = np.asarray(times, dtype=float)
    if velocities is None:
        v_full = _velocity_from_traj(hist)
        idx = np.rint((times - hist.tau) / hist.dt).astype(int)
        idx = np.clip(idx, 0, hist.n_filled - 1)
        velocities = v_full[idx]
    norms = np.empty(len(times))
    pairs = np.empty(len(times))
    rates = np.empty(len(times))
    for i, t in enumerate(times):
        w = hist.grid.mass_weights(kernel, t)
        prof = eta_on_grid(hist, t)
        norms[i] = profile_norm2(prof, w, spec)
        pairs[i] = profile_pair(velocities[i], prof, w, spec)
        rates[i] = float(kernel.growth_rate(t))
    return norms, pairs, rates


def key_inequality_residuals(hist, kernel, spec, times, velocities=None):
    """Residual matrix of the slice-norm inequality over all time pairs.

    The inequality bounds the norm at a later slice by the norm at an
    earlier one plus a growth term and a velocity coupling term,

        |eta_b|^2 <= |eta_a|^2 + M int_a^b |eta_t|^2 dt
                     + 2 int_a^b <du/dt, eta_t> dt,

    with M the supremum of the kernel growth rate over the window.  Time
    integrals use the trapezoid rule on ``times``.  Entry (i, j) holds
    rhs - lhs for the pair (times[i], times[j]); entries with j < i are 0.
    Negative entries beyond the discretization budget falsify the bound.
    """
    times = np.asarray(times, dtype=float)
    norms, pairs, rates = slice_norm_series(hist, kernel, spec, times,
                                            velocities)
    M = float(np.max(rates))
    dt_seg = np.diff(times)
    inc_norm = 0.5 * dt_seg * (norms[:-1] + norms[1:])
    inc_pair = 0.5 * dt_seg * (pairs[:-1] + pairs[1:])
    cum_norm = np.concatenate([[0.0], np.cumsum(inc_norm)])
    cum_pair = np.concatenate([[0.0], np.cumsum(inc_pair)])

    n = len(times)
    res = np.zeros((n, n))
    for i in range(n):
        int_norm = cum_norm[i:] - cum_norm[i]
        int_pair = cum_pair[i:] - cum_pair[i]
        res[i, i:] = norms[i] + M * int_norm + 2.0 * int_pair - norms[i:]
    return res


def key_inequality_residual(hist, kernel, spec, t_a, t_b, times,
                            velocities=None):
    """Single-pair residual; see :func:`key_inequality_residuals`."""
    times = np.asarray(times, dtype=float)
    i = int(np.argmin(np.abs(times - t_a)))
    j = int(np.argmin(np.abs(times - t_b)))
    if j < i:
        raise ValueError("need t_a <= t_b")
    res = key_inequality_residuals(hist, kernel, spec, times, velocities)
    return float(res[i, j])
