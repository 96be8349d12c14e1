"""Geometric age grids and kernel-weighted quadrature cells.

History profiles are sampled on a log-spaced grid of ages.  Each node owns
a cell; the cell mass under the current kernel is the quadrature weight, so
the rule integrates the kernel measure exactly and only samples the
profile.  The first cell stretches down to age zero, which keeps the total
weight equal to the kernel mass (up to the truncation tail) and absorbs an
integrable singularity at the origin if the kernel has one.

Profiles are reconstructed on demand, so the memory-force rule is free to
evaluate them anywhere, and to use more points than there are nodes.  The
coupling rule splits every cell into a few equal sub-cells, takes the exact
kernel mass of each sub-cell as its weight and evaluates the profile at the
sub-cell's kernel centroid.  Centroid placement cancels the first-order
error term of a one-point rule; the sub-cell split pushes the age
resolution past the fastest modal oscillation the spectrum can feed into
the history, which a node-per-cell rule misses once the cell width exceeds
about a third of the oscillation period.  Norms and diagnostics keep the
plain node rule: they never see the high-frequency cancellation that makes
the force integral delicate.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .kernels import ConfigError, choose_smax


@dataclass
class AgeGrid:
    """Log-spaced quadrature grid for the age variable.

    Attributes
    ----------
    nodes : ndarray (J,)
        Strictly increasing sample ages, geometrically spaced.
    edges : ndarray (J+1,)
        Cell boundaries; ``edges[0] == 0`` and ``edges[-1] == s_max``.
        Cell j is (edges[j], edges[j+1]] and contains nodes[j].
    """

    nodes: np.ndarray
    edges: np.ndarray
    _wcache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.nodes.ndim != 1 or len(self.nodes) < 2:
            raise ConfigError("age grid needs at least two nodes")
        if np.any(np.diff(self.nodes) <= 0) or self.nodes[0] <= 0:
            raise ConfigError("age nodes must be positive and increasing")

    @property
    def s_max(self):
        return float(self.edges[-1])

    @property
    def size(self):
        return len(self.nodes)

    @classmethod
    def geometric(cls, s_min, s_max, n_nodes=256):
        if not (0 < s_min < s_max):
            raise ConfigError("need 0 < s_min < s_max")
        nodes = np.geomspace(float(s_min), float(s_max), int(n_nodes))
        edges = np.empty(len(nodes) + 1)
        edges[0] = 0.0
        edges[1:-1] = np.sqrt(nodes[:-1] * nodes[1:])
        edges[-1] = nodes[-1]
        return cls(nodes=nodes, edges=edges)

    @classmethod
    def for_kernel(cls, kernel, t_window, n_nodes=256, s_min=1e-4,
                   tail_tol=1e-10):
        """Grid whose range covers the kernel mass on a run window."""
        s_max = choose_smax(kernel, t_window, tail_tol=tail_tol)
        s_max = max(s_max, 10.0 * s_min)
        return cls.geometric(s_min, s_max, n_nodes)

    def mass_weights(self, kernel, t):
        """Cell masses int_cell mu_t ds, exact via the kernel tail.

        Weights are cached per (kernel, t); the solver asks for the same
        slice several times per step.
        """
        cached = self._wcache.get("slot")
        if cached is not None and cached[0] is kernel and cached[1] == float(t):
            return cached[2]
        tails = kernel.tail_mass(float(t), self.edges)
        w = tails[:-1] - tails[1:]
        np.clip(w, 0.0, None, out=w)
        # one-slot cache: a run revisits the same slice a few times, then moves on
        self._wcache["slot"] = (kernel, float(t), w)
        return w

    def mass_weights_quadrature(self, kernel, t):
        """Adaptive per-cell quadrature of mu_t; slow reference route."""
        out = np.empty(self.size)
        for j in range(self.size):
            lo, hi = self.edges[j], self.edges[j + 1]
            out[j], _ = integrate.quad(lambda s: float(kernel.mu(t, s)),
                                       lo, hi, limit=100)
        return out

    def coupling_rule(self, kernel, t, refine=2):
        """Quadrature rule (ages, weights) for kernel-weighted integrals.

        Every cell is split into ``refine`` equal sub-cells.  Each sub-cell
        weight is its exact kernel mass (tail differences, like
        :meth:`mass_weights`); each evaluation age is the sub-cell's kernel
        centroid, located by Simpson estimates of the local first moment
        against the local mass.  Sub-cells whose Simpson mass underflows
        fall back to their midpoint; their exact weight is negligible or
        zero there, so the age choice cannot matter.  For kernels unbounded
        at age zero the head evaluation of mu is nudged off the origin,
        which only moves the first centroid, never a weight.
        """
        refine = int(refine)
        if refine < 1:
            raise ConfigError("refine must be a positive integer")
        cached = self._wcache.get("rule")
        if (cached is not None and cached[0] is kernel
                and cached[1] == float(t) and cached[2] == refine):
            return cached[3]
        width = self.edges[1:] - self.edges[:-1]
        frac = np.arange(refine + 1) / refine
        sub = self.edges[:-1, None] + width[:, None] * frac[None, :]
        e = np.append(sub[:, :-1].ravel(), self.edges[-1])

        tails = kernel.tail_mass(float(t), e)
        w = tails[:-1] - tails[1:]
        np.clip(w, 0.0, None, out=w)

        lo, hi = e[:-1], e[1:]
        mid = 0.5 * (lo + hi)
        e_eval = lo if not kernel.singular_at_zero else np.maximum(lo, 0.5 * e[1])
        mu_lo = kernel.mu(float(t), e_eval)
        mu_mid = kernel.mu(float(t), mid)
        mu_hi = kernel.mu(float(t), hi)
        m0 = mu_lo + 4.0 * mu_mid + mu_hi
        m1 = lo * mu_lo + 4.0 * mid * mu_mid + hi * mu_hi
        pts = np.where(m0 > 0, m1 / np.where(m0 > 0, m0, 1.0), mid)
        np.clip(pts, lo, hi, out=pts)

        rule = (pts, w)
        self._wcache["rule"] = (kernel, float(t), refine, rule)
        return rule

    def slope_weights(self, kernel, t):
        """Cell integrals of d/ds mu_t, exact as boundary differences.

        For kernels unbounded at age zero the first cell uses its node as
        the lower limit instead of 0; the skipped sliver carries no mass
        against profiles vanishing at the origin.
        """
        edges = self.edges.copy()
        if kernel.singular_at_zero:
            edges[0] = self.nodes[0]
        vals = kernel.mu(float(t), edges)
        return vals[1:] - vals[:-1]

    def interp_weights(self, query):
        """Linear interpolation stencil on the nodes, edge-clamped.

        Returns (idx, frac) with idx in [0, J-2]; the interpolated profile
        is ``(1-frac)*p[idx] + frac*p[idx+1]`` and queries outside the node
        range clamp to the end samples.
        """
        q = np.asarray(query, dtype=float)
        idx = np.searchsorted(self.nodes, q, side="right") - 1
        idx = np.clip(idx, 0, self.size - 2)
        span = self.nodes[idx + 1] - self.nodes[idx]
        frac = (q - self.nodes[idx]) / span
        frac = np.clip(frac, 0.0, 1.0)
        return idx, frac
