"""Time-dependent memory kernels and their structural checks.

A memory kernel here is a family ``mu_t(s)`` of nonnegative, nonincreasing,
summable functions of the age variable ``s > 0``, indexed by the current
time ``t``.  The standing assumptions are:

* (M1) for each t, ``mu_t`` is nonnegative, nonincreasing and summable;
* (M2) slice domination: ``mu_t(s) <= K(tau, t) * mu_tau(s)`` for ``tau <= t``;
* (M3) the time derivative ``d/dt mu_t(s)`` exists and is locally bounded;
* (M4) combined growth: ``d/dt mu_t + d/ds mu_t <= M(t) * mu_t`` pointwise.

Two concrete families are provided.  The rescaled family squeezes a fixed
shape ``mu(s)`` through a nonincreasing time scale ``eps(t)``,

    mu_t(s) = eps(t)^-2 * mu(s / eps(t)),

which keeps the first moment (the Kelvin-Voigt mass) constant while the
kernel concentrates at ``s = 0``.  The rheological family comes from a
spring/aging-dashpot ladder with stiffening coefficient ``K0(t)``,

    mu_t(s) = K0(t) K0(t-s) exp(-(H(t) - H(t-s)) / gamma) / (rho gamma),

with ``H`` the antiderivative of ``K0``.  Both expose closed forms for the
total mass, the domination constant and the growth rate, and both can be
audited numerically with :func:`validate_assumptions`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.special import expit, spence


class ConfigError(ValueError):
    """Raised when a requested kernel/solver configuration is inadmissible."""


# ---------------------------------------------------------------------------
# time profiles: named C^1 functions of t used as eps(t) or K0(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TimeProfile:
    """A named scalar function of time with closed-form derivative.

    Attributes
    ----------
    name : str
        Identifier used in config files and reports.
    value, deriv : callable
        Vectorized ``t -> float`` maps.
    antideriv : callable or None
        Closed-form antiderivative with ``antideriv(0) = 0``; required when
        the profile drives a rheological kernel.  When absent a cached
        numeric antiderivative is built on demand.
    inf_value : float
        Infimum over all of R.  Must be positive for rheological use.
    constant_value : float or None
        Set when the profile is constant in t; lets downstream code pick
        exact reductions (for instance the exponential-kernel oracle).
    """

    name: str
    value: Callable[[np.ndarray], np.ndarray]
    deriv: Callable[[np.ndarray], np.ndarray]
    antideriv: Optional[Callable[[np.ndarray], np.ndarray]] = None
    inf_value: float = 0.0
    constant_value: Optional[float] = None

    def __call__(self, t):
        return self.value(t)


def constant_profile(value):
    if value <= 0:
        raise ConfigError("constant profile must be positive, got %r" % value)
    v = float(value)
    return TimeProfile(
        name="constant",
        value=lambda t: np.full_like(np.asarray(t, dtype=float), v),
        deriv=lambda t: np.zeros_like(np.asarray(t, dtype=float)),
        antideriv=lambda t: v * np.asarray(t, dtype=float),
        inf_value=v,
        constant_value=v,
    )


def exp_decay_profile(amplitude=1.0, rate=1.0):
    """eps(t) = amplitude * exp(-rate * t); nonincreasing for rate >= 0."""
    if amplitude <= 0:
        raise ConfigError("exp_decay amplitude must be positive")
    a, r = float(amplitude), float(rate)
    return TimeProfile(
        name="exp_decay",
        value=lambda t: a * np.exp(-r * np.asarray(t, dtype=float)),
        deriv=lambda t: -r * a * np.exp(-r * np.asarray(t, dtype=float)),
        inf_value=0.0,
    )


def inverse_softplus_profile(sharpness=2.0):
    """Smoothed version of eps(t) = 1 / (1 + max(t, 0)).

    The positive part is mollified through a softplus ramp
    ``p(t) = log(1 + exp(sharpness*t)) / sharpness`` so the profile is C^1
    (in fact smooth), positive and nonincreasing on all of R.
    """
    b = float(sharpness)
    if b <= 0:
        raise ConfigError("softplus sharpness must be positive")

    def value(t):
        t = np.asarray(t, dtype=float)
        return 1.0 / (1.0 + np.logaddexp(0.0, b * t) / b)

    def deriv(t):
        t = np.asarray(t, dtype=float)
        e = 1.0 / (1.0 + np.logaddexp(0.0, b * t) / b)
        return -expit(b * t) * e * e

    return TimeProfile(name="inverse_softplus", value=value, deriv=deriv,
                       inf_value=0.0)


def tanh_step_profile(base=1.0, step=2.0):
    """K0(t) = base + step * (1 + tanh t): nondecreasing, inf = base."""
    beta, alpha = float(base), float(step)
    if beta <= 0 or alpha < 0:
        raise ConfigError("tanh_step needs base > 0 and step >= 0")

    def value(t):
        t = np.asarray(t, dtype=float)
        return beta + alpha * (1.0 + np.tanh(t))

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return alpha / np.cosh(np.clip(t, -350.0, 350.0)) ** 2

    def antideriv(t):
        # int (1 + tanh) = t + log cosh t, written overflow-safe
        t = np.asarray(t, dtype=float)
        logcosh = np.abs(t) + np.log1p(np.exp(-2.0 * np.abs(t))) - math.log(2.0)
        return beta * t + alpha * (t + logcosh)

    return TimeProfile(name="tanh_step", value=value, deriv=deriv,
                       antideriv=antideriv, inf_value=beta)


def log_growth_profile(base=1.0):
    """K0(t) = base * (1 + log(1 + exp(t))): unbounded, derivative -> base.

    The antiderivative of log(1 + e^t) is a dilogarithm; scipy's ``spence``
    gives it in closed form, which keeps the stress and delta-limit
    quadratures exact even for t of order 10^2.
    """
    beta = float(base)
    if beta <= 0:
        raise ConfigError("log_growth base must be positive")

    def value(t):
        t = np.asarray(t, dtype=float)
        return beta * (1.0 + np.logaddexp(0.0, t))

    def deriv(t):
        t = np.asarray(t, dtype=float)
        return beta * expit(t)

    def antideriv(t):
        t = np.asarray(t, dtype=float)
        # int_0^t log(1+e^y) dy = -Li2(-e^t) - pi^2/12, Li2(x) = spence(1-x)
        x = np.exp(np.clip(t, None, 700.0))
        return beta * (t - spence(1.0 + x) - math.pi ** 2 / 12.0)

    return TimeProfile(name="log_growth", value=value, deriv=deriv,
                       antideriv=antideriv, inf_value=beta)


TIME_PROFILES = {
    "constant": constant_profile,
    "exp_decay": exp_decay_profile,
    "inverse_softplus": inverse_softplus_profile,
    "tanh_step": tanh_step_profile,
    "log_growth": log_growth_profile,
}


def cached_antiderivative(profile, t_lo, t_hi, n=4001):
    """Dense cumulative quadrature of ``profile`` plus cubic interpolation.

    Fallback for custom K0 profiles that ship no closed form.  The cache
    covers [t_lo, t_hi]; queries outside raise.
    """
    from scipy.interpolate import CubicSpline

    ts = np.linspace(t_lo, t_hi, n)
    vals = profile(ts)
    # composite Simpson via cumulative trapezoid refinement
    acc = integrate.cumulative_simpson(vals, x=ts, initial=0.0)
    # anchor H(0) = 0
    if t_lo <= 0.0 <= t_hi:
        acc = acc - np.interp(0.0, ts, acc)
    spline = CubicSpline(ts, acc)

    def H(t):
        t = np.asarray(t, dtype=float)
        if np.any(t < t_lo - 1e-12) or np.any(t > t_hi + 1e-12):
            raise ValueError("antiderivative cache queried outside its range")
        return spline(np.clip(t, t_lo, t_hi))

    return H


# ---------------------------------------------------------------------------
# base shapes for the rescaled family
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BaseShape:
    """Fixed kernel shape mu(y) on y > 0 with closed-form tail and moments.

    ``tail(y) = int_y^inf mu`` must satisfy ``tail(0) = mass``.  The first
    moment ``int_0^inf y mu(y) dy`` is the Kelvin-Voigt mass of every
    rescaling of the shape.
    """

    name: str
    mu: Callable[[np.ndarray], np.ndarray]
    dmu: Callable[[np.ndarray], np.ndarray]
    tail: Callable[[np.ndarray], np.ndarray]
    mass: float
    first_moment: float
    singular_at_zero: bool = False


def _exp_shape():
    e = lambda y: np.exp(-np.asarray(y, dtype=float))
    return BaseShape(name="exponential", mu=e, dmu=lambda y: -e(y), tail=e,
                     mass=1.0, first_moment=1.0)


def _triangular_shape():
    def mu(y):
        y = np.asarray(y, dtype=float)
        return np.clip(1.0 - y, 0.0, None)

    def dmu(y):
        y = np.asarray(y, dtype=float)
        return np.where(y < 1.0, -1.0, 0.0)

    def tail(y):
        y = np.asarray(y, dtype=float)
        return 0.5 * np.clip(1.0 - y, 0.0, None) ** 2

    return BaseShape(name="triangular", mu=mu, dmu=dmu, tail=tail,
                     mass=0.5, first_moment=1.0 / 6.0)


BASE_SHAPES = {
    "exponential": _exp_shape(),
    "triangular": _triangular_shape(),
}


# ---------------------------------------------------------------------------
# kernel families
# ---------------------------------------------------------------------------

class MemoryKernel:
    """Interface shared by all kernel families.

    Methods accept scalars or arrays and broadcast; ages are measured by
    ``s > 0``.  ``tail_mass(t, s)`` is the exact mass beyond age ``s`` and
    doubles as the cell-weight primitive for age grids.
    """

    label = "kernel"
    singular_at_zero = False

    def mu(self, t, s):
        raise NotImplementedError

    def mu_age_deriv(self, t, s):
        """d/ds mu_t(s)."""
        raise NotImplementedError

    def mu_time_deriv(self, t, s):
        """d/dt mu_t(s)."""
        raise NotImplementedError

    def tail_mass(self, t, s):
        raise NotImplementedError

    def total_mass(self, t):
        """kappa(t) = int_0^inf mu_t(s) ds."""
        raise NotImplementedError

    def domination(self, tau, t):
        """K(tau, t) with mu_t <= K(tau, t) mu_tau for tau <= t."""
        raise NotImplementedError

    def growth_rate(self, t):
        """M(t) bounding d/dt mu_t + d/ds mu_t <= M(t) mu_t."""
        raise NotImplementedError

    def char_age(self, t):
        """Rough age scale the mass concentrates on; used to seed quadratures."""
        raise NotImplementedError

    def constant_exp_scale(self):
        """Return eps if the kernel is exactly eps^-2 exp(-s/eps) for all t.

        None otherwise.  Kernels admitting this reduction can be checked
        against the auxiliary-variable oracle.
        """
        return None


class ZeroKernel(MemoryKernel):
    """The vanishing kernel: no memory at all."""

    label = "zero"

    def _z(self, t, s):
        return np.zeros(np.broadcast(np.asarray(t, dtype=float),
                                     np.asarray(s, dtype=float)).shape)

    def mu(self, t, s):
        return self._z(t, s)

    mu_age_deriv = mu
    mu_time_deriv = mu
    tail_mass = mu

    def total_mass(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def domination(self, tau, t):
        return np.ones(np.broadcast(np.asarray(tau, dtype=float),
                                    np.asarray(t, dtype=float)).shape)

    def growth_rate(self, t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def char_age(self, t):
        return np.ones_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class RescaledKernel(MemoryKernel):
    """mu_t(s) = eps(t)^-2 * shape(s / eps(t)) with eps nonincreasing.

    The scaling keeps the first moment of the family fixed, so the kernels
    converge (in the vague sense) to a Dirac mass of that weight as
    eps(t) -> 0.  Structural functions are exact:

    * kappa(t) = shape.mass / eps(t)
    * K(tau, t) = (eps(tau) / eps(t))^2
    * M(t) = -2 eps'(t) / eps(t)
    """

    shape: BaseShape
    eps: TimeProfile

    @property
    def label(self):
        return "rescaled[%s,%s]" % (self.shape.name, self.eps.name)

    @property
    def singular_at_zero(self):
        return self.shape.singular_at_zero

    def mu(self, t, s):
        e = self.eps(t)
        return self.shape.mu(np.asarray(s, dtype=float) / e) / (e * e)

    def mu_age_deriv(self, t, s):
        e = self.eps(t)
        return self.shape.dmu(np.asarray(s, dtype=float) / e) / (e * e * e)

    def mu_time_deriv(self, t, s):
        s = np.asarray(s, dtype=float)
        e = self.eps(t)
        de = self.eps.deriv(t)
        return -(de / e) * (2.0 * self.mu(t, s) + s * self.mu_age_deriv(t, s))

    def tail_mass(self, t, s):
        e = self.eps(t)
        return self.shape.tail(np.asarray(s, dtype=float) / e) / e

    def total_mass(self, t):
        return self.shape.mass / self.eps(t)

    def domination(self, tau, t):
        r = self.eps(tau) / self.eps(t)
        return r * r

    def growth_rate(self, t):
        return -2.0 * self.eps.deriv(t) / self.eps(t)

    def char_age(self, t):
        return self.eps(t) * max(self.shape.first_moment / max(self.shape.mass, 1e-300), 1e-3)

    def constant_exp_scale(self):
        if self.shape.name == "exponential" and self.eps.constant_value is not None:
            return float(self.eps.constant_value)
        return None

    def kv_mass_exact(self):
        """int s mu_t ds, independent of t for this family."""
        return self.shape.first_moment


@dataclass(frozen=True)
class RheologicalKernel(MemoryKernel):
    """Kernel of an aging spring/dashpot ladder with stiffening K0(t).

    With H the antiderivative of K0 and gamma, rho the dashpot and density
    constants,

        mu_t(s) = K0(t) K0(t-s) exp(-(H(t) - H(t-s)) / gamma) / (rho gamma).

    The relaxation tail is exact, ``tail_mass(t, s) = K0(t)
    exp(-(H(t)-H(t-s))/gamma) / rho``, which makes age-grid weights and the
    delta-limit diagnostics cheap.  K0 must be C^1, nondecreasing, with
    positive infimum.
    """

    K0: TimeProfile
    gamma: float = 1.0
    rho: float = 1.0
    _H: Optional[Callable] = field(default=None, repr=False)

    def __post_init__(self):
        if self.gamma <= 0 or self.rho <= 0:
            raise ConfigError("rheological kernel needs gamma > 0 and rho > 0")
        if self.K0.inf_value <= 0:
            raise ConfigError("rheological K0 must have positive infimum")

    @property
    def label(self):
        return "rheological[%s]" % self.K0.name

    def H(self, t):
        if self.K0.antideriv is not None:
            return self.K0.antideriv(t)
        if self._H is None:
            raise ConfigError(
                "K0 profile %r has no antiderivative; build the kernel with "
                "with_cached_antiderivative() first" % self.K0.name)
        return self._H(t)

    def with_cached_antiderivative(self, t_lo, t_hi):
        return RheologicalKernel(self.K0, self.gamma, self.rho,
                                 _H=cached_antiderivative(self.K0, t_lo, t_hi))

    def _expfac(self, t, s):
        return np.exp(-(self.H(t) - self.H(np.asarray(t) - np.asarray(s))) / self.gamma)

    def mu(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        return (self.K0(t) * self.K0(t - s) * self._expfac(t, s)
                / (self.rho * self.gamma))

    def mu_age_deriv(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        k = self.K0(t - s)
        return (self.K0(t) * self._expfac(t, s)
                * (-self.K0.deriv(t - s) - k * k / self.gamma)
                / (self.rho * self.gamma))

    def mu_time_deriv(self, t, s):
        t = np.asarray(t, dtype=float)
        s = np.asarray(s, dtype=float)
        k_t, k_ts = self.K0(t), self.K0(t - s)
        dk_t, dk_ts = self.K0.deriv(t), self.K0.deriv(t - s)
        bracket = (dk_t * k_ts + k_t * dk_ts
                   - k_t * k_ts * (k_t - k_ts) / self.gamma)
        return bracket * self._expfac(t, s) / (self.rho * self.gamma)

    def tail_mass(self, t, s):
        t = np.asarray(t, dtype=float)
        return self.K0(t) * self._expfac(t, s) / self.rho

    def total_mass(self, t):
        return self.K0(t) / self.rho

    def domination(self, tau, t):
        k_t = self.K0(np.asarray(t, dtype=float))
        k_tau = self.K0(np.asarray(tau, dtype=float))
        return k_t * k_t / (self.K0.inf_value * k_tau)

    def growth_rate(self, t):
        t = np.asarray(t, dtype=float)
        return self.K0.deriv(t) / self.K0(t)

    def char_age(self, t):
        return self.gamma / self.K0(np.asarray(t, dtype=float))


# ---------------------------------------------------------------------------
# free functions on kernels
# ---------------------------------------------------------------------------

def mass_kappa(kernel, t):
    """Total mass kappa(t); closed form via the family."""
    return kernel.total_mass(t)


def structural_functions(kernel, tau, t):
    """Return the triple (kappa(t), K(tau, t), M(t))."""
    return (kernel.total_mass(t), kernel.domination(tau, t),
            kernel.growth_rate(t))


def kv_mass(kernel, t):
    """Kelvin-Voigt mass m(t) = int_0^inf s mu_t(s) ds by quadrature.

    Equals the integral of the relaxation tail (integration by parts), and
    is the damping weight the kernel family concentrates to.
    """
    if isinstance(kernel, ZeroKernel):
        return 0.0
    scale = float(kernel.char_age(t))
    val, _ = integrate.quad(lambda y: y * float(kernel.mu(t, scale * y)),
                            0.0, np.inf, limit=200)
    return scale * scale * val


def choose_smax(kernel, t_window, tail_tol=1e-10, n_probe=33):
    """Smallest truncation age with tail mass below ``tail_tol`` on the window.

    The tail is probed on ``n_probe`` times across ``t_window``; the cut is
    bracketed by doubling and then bisected.  Deterministic.
    """
    t0, t1 = float(t_window[0]), float(t_window[1])
    ts = np.linspace(t0, t1, n_probe) if t1 > t0 else np.array([t0])

    def worst_tail(s):
        return float(np.max(kernel.tail_mass(ts, s)))

    if isinstance(kernel, ZeroKernel):
        return 1.0
    target = 0.9 * tail_tol   # land safely inside the threshold
    s = float(np.max(kernel.char_age(ts)))
    lo = s
    for _ in range(200):
        if worst_tail(s) < target:
            break
        lo = s
        s *= 2.0
    else:
        raise ConfigError("kernel tail does not drop below %g" % tail_tol)
    hi = s
    for _ in range(40):
        mid = 0.5 * (lo + hi)
        if worst_tail(mid) < target:
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# assumption audit
# ---------------------------------------------------------------------------

@dataclass
class KernelReport:
    """Outcome of the (M1)-(M4) audit on a rectangular (t, s) grid.

    Each row carries the assumption tag, a pass/fail verdict, the worst
    signed margin (negative means violated by that amount) and the grid
    point attaining it.
    """

    label: str
    tol: float
    rows: list  # (assumption, verdict, margin, t, s)
    s_truncation: float

    @property
    def passed(self):
        return all(r[1] == "pass" for r in self.rows)

    def row(self, tag):
        for r in self.rows:
            if r[0] == tag:
                return r
        raise KeyError(tag)

    def worst_margin(self):
        return min(r[2] for r in self.rows)

    def summary_lines(self):
        out = ["kernel %s, tol %.3g, truncation age %.6g"
               % (self.label, self.tol, self.s_truncation)]
        for tag, verdict, margin, t, s in self.rows:
            out.append("  %-12s %-4s margin=%+.3e at (t=%.4g, s=%.4g)"
                       % (tag, verdict, margin, t, s))
        return out


def _argmin_unravel(arr):
    idx = np.unravel_index(np.argmin(arr), arr.shape)
    return idx, float(arr[idx])


def validate_assumptions(kernel, t_window=(-2.0, 2.0), s_window=(1e-3, 20.0),
                         nt=21, ns=200, tol=1e-9, tail_tol=1e-10):
    """Audit (M1)-(M4) plus mass domination on a (t, s) grid.

    Margins are signed slacks of the defining inequalities; a verdict fails
    iff its margin drops below ``-tol``.  Summability is certified by
    locating a truncation age whose tail mass stays below ``tail_tol``
    across the window.

    Parameters
    ----------
    kernel : MemoryKernel
    t_window, s_window : pair of floats
        Audit rectangle; the age grid is geometric.
    nt, ns : int
        Grid resolution.
    tol : float
        Negative-margin tolerance for verdicts.
    tail_tol : float
        Tail-mass threshold for the summability certificate.

    Returns
    -------
    KernelReport
    """
    ts = np.linspace(float(t_window[0]), float(t_window[1]), nt)
    ss = np.geomspace(float(s_window[0]), float(s_window[1]), ns)

    mu = kernel.mu(ts[:, None], ss[None, :])            # (nt, ns)
    mu_dot = kernel.mu_time_deriv(ts[:, None], ss[None, :])
    mu_age = kernel.mu_age_deriv(ts[:, None], ss[None, :])

    rows = []

    # (M1): nonnegative, nonincreasing in s, summable
    neg_margin = float(np.min(mu))
    (i0, j0), _ = _argmin_unravel(mu)
    mono = mu[:, :-1] - mu[:, 1:]
    (i1, j1), mono_margin = _argmin_unravel(mono)
    try:
        s_cut = choose_smax(kernel, t_window, tail_tol=tail_tol)
        summ_margin = tail_tol - float(np.max(kernel.tail_mass(ts, s_cut)))
        summ_ok = True
    except ConfigError:
        s_cut = float("inf")
        summ_margin = -1.0
        summ_ok = False
    m1_candidates = [
        (neg_margin, ts[i0], ss[j0]),
        (mono_margin, ts[i1], ss[j1]),
        (summ_margin, ts[0], float(min(s_cut, 1e30))),
    ]
    m1 = min(m1_candidates, key=lambda c: c[0])
    verdict = "pass" if (m1[0] >= -tol and summ_ok) else "fail"
    rows.append(("M1", verdict, m1[0], m1[1], m1[2]))

    # (M2): mu_t <= K(tau, t) mu_tau for tau <= t
    K = kernel.domination(ts[:, None], ts[None, :])      # (tau, t)
    slack = K[:, :, None] * mu[:, None, :] - mu[None, :, :]
    pair_ok = ts[:, None] <= ts[None, :] + 1e-15
    slack = np.where(pair_ok[:, :, None], slack, np.inf)
    (ia, ib, jc), m2_margin = _argmin_unravel(slack)
    rows.append(("M2", "pass" if m2_margin >= -tol else "fail",
                 m2_margin, ts[ib], ss[jc]))

    # (M3): time derivative exists and is locally bounded; here: finite on grid
    finite = np.isfinite(mu_dot)
    if finite.all():
        rows.append(("M3", "pass", 0.0, ts[0], ss[0]))
    else:
        bad = np.argwhere(~finite)[0]
        rows.append(("M3", "fail", -1.0, ts[bad[0]], ss[bad[1]]))

    # (M4): mu_dot + mu_age <= M(t) mu
    M = kernel.growth_rate(ts)
    slack4 = M[:, None] * mu - (mu_dot + mu_age)
    (i4, j4), m4_margin = _argmin_unravel(slack4)
    rows.append(("M4", "pass" if m4_margin >= -tol else "fail",
                 m4_margin, ts[i4], ss[j4]))

    # mass domination: kappa(t) <= K(tau, t) kappa(tau)
    kap = kernel.total_mass(ts)
    kd = K * kap[:, None] - kap[None, :]
    kd = np.where(pair_ok, kd, np.inf)
    (ka, kb), kd_margin = _argmin_unravel(kd)
    rows.append(("mass_dom", "pass" if kd_margin >= -tol else "fail",
                 kd_margin, ts[kb], ss[0]))

    return KernelReport(label=kernel.label, tol=tol, rows=rows,
                        s_truncation=float(s_cut))
