"""Modal bookkeeping: eigenpairs, collocation transforms, nonlinearities.

The spatial operator is minus the Dirichlet Laplacian on the unit
interval, diagonal in the orthonormal sine basis

    w_k(x) = sqrt(2) sin(k pi x),      lam_k = (k pi)^2.

Nonlinear terms are evaluated by collocation on a uniform interior grid
and projected back with the trapezoid rule, which is exact for sine
polynomials as long as the grid oversamples the mode count; a factor-four
oversampling keeps cubic products alias-free with margin.  Abstract
spectra (arbitrary positive eigenvalues) are accepted for linear stress
tests, where no collocation is possible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .kernels import ConfigError


@dataclass
class Spectrum:
    """Eigenvalues plus (for the interval operator) a collocation plan."""

    lam: np.ndarray
    kind: str = "interval"
    x: Optional[np.ndarray] = None          # collocation abscissae
    synth: Optional[np.ndarray] = None      # (m, n) basis samples
    quad_h: float = 0.0

    @classmethod
    def interval(cls, n_modes, collocation=None):
        n = int(n_modes)
        if n < 1:
            raise ConfigError("need at least one mode")
        m = 4 * n if collocation is None else int(collocation)
        if m < 2 * n:
            raise ConfigError(
                "collocation grid of %d points under-resolves %d modes; "
                "need at least %d" % (m, n, 2 * n))
        k = np.arange(1, n + 1)
        lam = (k * np.pi) ** 2
        h = 1.0 / (m + 1)
        x = h * np.arange(1, m + 1)
        synth = np.sqrt(2.0) * np.sin(np.pi * x[:, None] * k[None, :])
        return cls(lam=lam, kind="interval", x=x, synth=synth, quad_h=h)

    @classmethod
    def abstract(cls, lam):
        lam = np.asarray(lam, dtype=float)
        if lam.ndim != 1 or np.any(lam <= 0):
            raise ConfigError("abstract spectrum needs positive eigenvalues")
        return cls(lam=lam, kind="abstract")

    @property
    def n_modes(self):
        return len(self.lam)

    def _need_collocation(self):
        if self.kind != "interval" or self.synth is None:
            raise ConfigError("operation needs the interval collocation grid")

    def to_grid(self, a):
        """Synthesize point values on the collocation grid."""
        self._need_collocation()
        return self.synth @ np.asarray(a, dtype=float)

    def project(self, values):
        """Trapezoid projection of grid values onto the modal basis."""
        self._need_collocation()
        return self.quad_h * (np.asarray(values, dtype=float) @ self.synth)

    def project_pointwise_map(self, a, func):
        """Modal coefficients of func(u) for modal u; one synthesis round trip."""
        return self.project(func(self.to_grid(a)))

    def mean_of_map(self, a, func):
        """Trapezoid integral of func(u(x)) over the interval."""
        self._need_collocation()
        return self.quad_h * float(np.sum(func(self.to_grid(a))))

    def norm2(self, coeffs, order=0):
        """Squared Sobolev norm of given order from modal coefficients."""
        c = np.asarray(coeffs, dtype=float)
        if order == 0:
            return float(c @ c)
        return float((self.lam ** order) @ (c * c))

    def project_function(self, func, n_quad=4096):
        """High-resolution modal projection of a callable on (0, 1).

        Used for initial data only: the dense grid keeps aliasing of
        non-bandlimited shapes below coefficient round-off, independently
        of the run's collocation size.
        """
        self._need_collocation()
        m = int(n_quad)
        h = 1.0 / (m + 1)
        x = h * np.arange(1, m + 1)
        vals = np.asarray(func(x), dtype=float)
        k = np.arange(1, self.n_modes + 1)
        return h * (vals @ (np.sqrt(2.0) * np.sin(np.pi * x[:, None] * k[None, :])))


# ---------------------------------------------------------------------------
# nonlinearities
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Nonlinearity:
    """Pointwise source term f(u) with antiderivative and derivative.

    The admissibility requirements are cubic growth of f' and a lower
    dissipation bound: f(u)/u must stay above minus the first eigenvalue
    for large |u|, otherwise the energy can escape through the well.  Both
    are checked numerically on sample grids.
    """

    name: str
    f: Callable[[np.ndarray], np.ndarray]
    fprime: Callable[[np.ndarray], np.ndarray]
    antiderivative: Callable[[np.ndarray], np.ndarray]

    def is_zero(self):
        return self.name == "zero"

    def quotient_min(self, u_max=50.0, n=20001):
        """min f(u)/u over a symmetric sample grid (u = 0 excluded)."""
        u = np.linspace(-u_max, u_max, n)
        u = u[np.abs(u) > 1e-9]
        return float(np.min(self.f(u) / u))

    def quotient_liminf(self, u_large=1e3, n=4001):
        """min f(u)/u sampled on large |u| only; the dissipation gate."""
        u = np.concatenate([np.linspace(-u_large, -u_large / 2, n),
                            np.linspace(u_large / 2, u_large, n)])
        return float(np.min(self.f(u) / u))

    def growth_constant(self, u_max=50.0, n=20001):
        """Smallest C with |f'(u)| <= C (1 + u^2) on the sample range."""
        u = np.linspace(-u_max, u_max, n)
        return float(np.max(np.abs(self.fprime(u)) / (1.0 + u * u)))

    def check_admissible(self, lam1):
        if abs(float(np.asarray(self.f(0.0)))) > 0.0:
            raise ConfigError("nonlinearity must vanish at zero")
        liminf = self.quotient_liminf()
        if liminf <= -float(lam1):
            raise ConfigError(
                "nonlinearity %s has sampled liminf f(u)/u = %.6g <= -lam_1 "
                "= %.6g; the energy well is unbounded below" %
                (self.name, liminf, -float(lam1)))

    def energy_envelope(self, lam1):
        """Constants (theta, C, c_F) for the two-sided energy control.

        Lower side: pick nu <= inf f(u)/u (floored at -lam1/2 when the
        global infimum dips below admissibility), giving
        F(u) >= nu u^2 / 2 - c and

            E >= theta (|u|_1^2 + |du/dt|^2) - C,   theta = 1 + min(nu,0)/lam1.

        Upper side: c_F bounds 2|F(u)| by c_F (u^2 + u^4), which turns into
        a quartic envelope in the energy norm of the data.
        """
        lam1 = float(lam1)
        q = self.quotient_min()
        nu = q if q > -lam1 else -0.5 * lam1
        u = np.linspace(-50.0, 50.0, 20001)
        Fu = self.antiderivative(u)
        c = float(np.max(np.clip(0.5 * nu * u * u - Fu, 0.0, None)))
        theta = 1.0 + min(nu, 0.0) / lam1
        denom = u * u + u ** 4
        mask = np.abs(u) > 1e-9
        c_F = float(np.max(2.0 * np.abs(Fu[mask]) / denom[mask]))
        return theta, 2.0 * c, c_F


def _poly3(c3, c1, name):
    c3, c1 = float(c3), float(c1)

    def f(u):
        u = np.asarray(u, dtype=float)
        return c3 * u ** 3 + c1 * u

    def fp(u):
        u = np.asarray(u, dtype=float)
        return 3.0 * c3 * u ** 2 + c1

    def F(u):
        u = np.asarray(u, dtype=float)
        return 0.25 * c3 * u ** 4 + 0.5 * c1 * u ** 2

    return Nonlinearity(name=name, f=f, fprime=fp, antiderivative=F)


def make_nonlinearity(name, **params):
    """Registry of source terms; ``poly3`` takes cubic/linear coefficients."""
    allowed = {"zero": (), "cubic": ("cubic",), "cubic_minus_linear": (),
               "poly3": ("cubic", "linear")}
    if name not in allowed:
        raise ConfigError("unknown nonlinearity %r" % name)
    extra = set(params) - set(allowed[name])
    if extra:
        raise ConfigError("nonlinearity %r does not take %r"
                          % (name, sorted(extra)[0]))
    if name == "zero":
        return _poly3(0.0, 0.0, "zero")
    if name == "cubic":
        return _poly3(params.get("cubic", 1.0), 0.0, "cubic")
    if name == "cubic_minus_linear":
        return _poly3(1.0, -1.0, "cubic_minus_linear")
    return _poly3(params.get("cubic", 1.0), params.get("linear", 0.0), "poly3")
