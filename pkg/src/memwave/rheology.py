"""Constitutive layer of the aging standard-linear-solid model.

The mechanical picture is a lone spring of rigidity ``spring_k`` in
parallel with a Maxwell element whose spring stiffens in time (rigidity
K0(t), dashpot viscosity gamma).  Writing eps for the total strain,
eps0 and eps1 for the strains of the Maxwell spring and damper, sigma_S
and sigma_M for the two branch stresses, the element laws are

    eps = eps0 + eps1            (strains in series add)
    sigma = sigma_S + sigma_M    (parallel branches add)
    sigma_S = spring_k * eps
    sigma_M = K0(t) eps0 = gamma * d/dt eps1.

Eliminating eps0 gives a linear ODE for eps1 driven by eps; solving it
from the infinite past (the strain is assumed bounded there, so the
homogeneous part dies off) and substituting back yields two equivalent
closed forms for the total stress, with H the antiderivative of K0:

  elastic form:
    sigma(t) = (K0(t) + spring_k) eps(t)
               - (K0(t)/gamma) int_0^inf e^{-(H(t)-H(t-s))/gamma}
                                 K0(t-s) eps(t-s) ds
  rate form:
    sigma(t) = spring_k eps(t)
               + K0(t) int_0^inf e^{-(H(t)-H(t-s))/gamma}
                         (d eps/dt)(t-s) ds.

One follows from the other by integrating by parts in s, so computing
both and differencing is a sharp quadrature check.  A strain jump at
the first sample time feeds the rate form a point mass, which is added
analytically; a constant pre-history likewise integrates in closed form
into the elastic form.

The delta-limit diagnostics quantify how fast the relaxation function
k_t(s) = K0(t) e^{-(H(t)-H(t-s))/gamma} / rho concentrates at age zero:
the tail I1 past age t, the bulk I2 on [nu, t], the prefactor
Q(t) = K0(t) e^{-H(t)/gamma}, and the decay certificate dK0/K0^2.  When
K0 grows without bound and the certificate tends to zero, I1 -> 0 and
I2 -> gamma/rho for nu = 0 (and to 0 for nu > 0): the memory term turns
into Kelvin-Voigt damping of strength gamma/rho.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicHermiteSpline

from .kernels import ConfigError, RheologicalKernel

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


@dataclass(frozen=True, eq=False)
class StrainHistory:
    """Strain trajectory: sampled values and rates, constant pre-history.

    Between samples the strain is the cubic Hermite interpolant of
    (values, rates), so the rate samples really are the derivative of
    the reconstructed strain and the two stress forms must agree up to
    quadrature error alone.  Before ``times[0]`` the strain is frozen at
    ``past_value``; a mismatch with ``values[0]`` is a genuine jump and
    is handled analytically in the stress integrals.
    """

    times: np.ndarray
    values: np.ndarray
    rates: np.ndarray
    past_value: float = 0.0
    _spline: CubicHermiteSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        r = np.asarray(self.rates, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("need at least two strain samples")
        if v.shape != t.shape or r.shape != t.shape:
            raise ValueError("strain and rate samples must match the time grid")
        if np.any(np.diff(t) <= 0):
            raise ValueError("strain sample times must increase")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "rates", r)
        object.__setattr__(self, "_spline", CubicHermiteSpline(t, v, r))

    @classmethod
    def step(cls, amplitude, t0, t_end, n=2):
        """Strain zero before t0, constant ``amplitude`` afterwards."""
        t = np.linspace(t0, t_end, max(2, n))
        return cls(times=t, values=np.full_like(t, float(amplitude)),
                   rates=np.zeros_like(t), past_value=0.0)

    @classmethod
    def from_function(cls, fn, dfn, times, past_value=0.0):
        t = np.asarray(times, dtype=float)
        return cls(times=t, values=np.asarray(fn(t), dtype=float),
                   rates=np.asarray(dfn(t), dtype=float),
                   past_value=float(past_value))

    @property
    def start(self):
        return float(self.times[0])

    @property
    def jump(self):
        """Strain discontinuity at the first sample time."""
        return float(self.values[0] - self.past_value)

    def value(self, r):
        r = np.asarray(r, dtype=float)
        out = np.where(r < self.times[0], self.past_value, self._spline(np.clip(r, self.times[0], self.times[-1])))
        return out

    def rate(self, r):
        r = np.asarray(r, dtype=float)
        inside = (r >= self.times[0]) & (r <= self.times[-1])
        return np.where(inside, self._spline.derivative()(np.clip(r, self.times[0], self.times[-1])), 0.0)


def _segments(strain, t):
    """Quadrature segment edges covering [start, t] split at every sample."""
    edges = strain.times[strain.times < t - 1e-14]
    return np.concatenate([edges, [t]])


def _past_weight(kernel, t, t0):
    """exp((H(t0) - H(t)) / gamma); exact memory weight of the pre-history."""
    return float(np.exp((kernel.H(t0) - kernel.H(t)) / kernel.gamma))


def stress_response(kernel, strain, t_grid, spring_k=1.0):
    """Total stress along ``t_grid`` by both constitutive forms.

    Returns (sigma_elastic, sigma_rate): the elastic form carries the
    strain itself under the integral, the rate form its derivative plus
    the analytic jump term.  Their difference is pure quadrature error.
    Query times must lie within the sampled strain window.
    """
    if not isinstance(kernel, RheologicalKernel):
        raise ConfigError("stress response is defined for rheological kernels")
    t_grid = np.asarray(t_grid, dtype=float)
    if np.any(t_grid < strain.start - 1e-12) or np.any(t_grid > strain.times[-1] + 1e-12):
        raise ValueError("stress queried outside the sampled strain window")
    gamma = kernel.gamma
    K0 = kernel.K0
    d_eps = strain._spline.derivative()

    sig_el = np.empty(t_grid.shape)
    sig_rt = np.empty(t_grid.shape)
    for i, t in enumerate(t_grid):
        edges = _segments(strain, t)
        lo, hi = edges[:-1], edges[1:]
        mid = 0.5 * (lo + hi)
        half = 0.5 * (hi - lo)
        nodes = (mid[:, None] + half[:, None] * _GL_NODES).ravel()
        w = (half[:, None] * _GL_WEIGHTS).ravel()

        memw = np.exp((kernel.H(nodes) - kernel.H(t)) / gamma)
        live_el = float(np.dot(w, memw * K0(nodes) * strain._spline(nodes)))
        live_rt = float(np.dot(w, memw * d_eps(nodes)))

        w0 = _past_weight(kernel, t, strain.start)
        eps_t = float(strain._spline(t))
        K0t = float(K0(t))
        # constant pre-history integrates exactly against the kernel weight
        sig_el[i] = (K0t + spring_k) * eps_t \
            - (K0t / gamma) * (live_el + gamma * strain.past_value * w0)
        sig_rt[i] = spring_k * eps_t + K0t * (live_rt + strain.jump * w0)
    return sig_el, sig_rt


def standard_solid_relaxation(spring_k, beta, gamma, amplitude, t):
    """Closed-form step response when K0 is the constant beta."""
    t = np.asarray(t, dtype=float)
    return (spring_k + beta * np.exp(-beta * t / gamma)) * float(amplitude)


@dataclass(frozen=True)
class DeltaLimitRow:
    """Concentration diagnostics of the relaxation function at one time."""

    t: float
    nu: float
    tail: float        # I1: relaxation mass at ages beyond t
    bulk: float        # I2: relaxation mass on [nu, t]
    prefactor: float   # Q(t) = K0(t) exp(-H(t)/gamma)
    certificate: float  # dK0/K0^2, must -> 0 for the delta limit

    COLUMNS = ("t", "nu", "I1", "I2", "Q", "dK0_over_K0sq")

    def astuple(self):
        return (self.t, self.nu, self.tail, self.bulk,
                self.prefactor, self.certificate)


def delta_limit_diagnostics(kernel, nu, times):
    """Tail and bulk relaxation mass at the given times.

    tail = int_t^inf k_t(s) ds factors as Q(t)/rho times a t-independent
    integral over the frozen pre-history of K0, computed once.  bulk =
    int_nu^t k_t(s) ds is adaptive quadrature on exponent differences,
    so no overflow however large H grows.  Q may underflow to zero for
    strongly stiffening K0; the tail is then genuinely negligible.
    """
    if not isinstance(kernel, RheologicalKernel):
        raise ConfigError("delta-limit diagnostics need a rheological kernel")
    nu = float(nu)
    if nu < 0:
        raise ConfigError("the lag nu must be nonnegative")
    gamma, rho = kernel.gamma, kernel.rho

    past_mass, past_err = integrate.quad(
        lambda x: np.exp(kernel.H(-x) / gamma), 0.0, np.inf, limit=200)
    if past_err > 1e-8 * max(1.0, past_mass):
        raise ConfigError("tail quadrature did not converge")

    rows = []
    for t in np.atleast_1d(np.asarray(times, dtype=float)):
        t = float(t)
        if t < nu:
            raise ConfigError("diagnostics need t >= nu")
        K0t = float(kernel.K0(t))
        Ht = float(kernel.H(t))
        q = K0t * float(np.exp(-Ht / gamma))
        tail = q * past_mass / rho

        if t == nu:
            bulk = 0.0
        else:
            scale = gamma / K0t
            pts = [p for p in (nu + scale, nu + 10 * scale) if nu < p < t]
            bulk_int, bulk_err = integrate.quad(
                lambda s: np.exp((kernel.H(t - s) - Ht) / gamma),
                nu, t, points=pts or None, limit=200)
            if bulk_err > 1e-8 * max(1.0, abs(bulk_int)):
                raise ConfigError("bulk quadrature did not converge")
            bulk = K0t * bulk_int / rho

        cert = float(kernel.K0.deriv(t)) / K0t ** 2
        rows.append(DeltaLimitRow(t=t, nu=nu, tail=tail, bulk=bulk,
                                  prefactor=q, certificate=cert))
    return rows


def convexity_margin(kernel, t, s_grid):
    """Worst second divided difference of k_t over age triples.

    Divided differences stay sign-correct on non-uniform grids, where the
    plain second difference of a convex decreasing tail can dip negative.
    """
    s = np.asarray(s_grid, dtype=float)
    k = kernel.tail_mass(t, s)
    left = (k[1:-1] - k[:-2]) / (s[1:-1] - s[:-2])
    right = (k[2:] - k[1:-1]) / (s[2:] - s[1:-1])
    d2 = (right - left) / (s[2:] - s[:-2])
    return float(np.min(d2))
