import numpy as np
import pytest
from hypothesis import given, strategies as st

from memwave.grids import AgeGrid
from memwave.history import (
    HistorySnapshot,
    MemoryNormSpec,
    eta_at_ages,
    eta_eval,
    eta_on_grid,
    key_inequality_residual,
    key_inequality_residuals,
    memory_coupling,
    memory_norm,
    phi_bound,
    profile_norm2,
    translation_dissipativity,
)
from memwave.kernels import (
    BASE_SHAPES,
    ConfigError,
    RescaledKernel,
    ZeroKernel,
    constant_profile,
    exp_decay_profile,
)

LAM1 = np.array([np.pi ** 2])


def exp_kernel(eps=1.0):
    return RescaledKernel(shape=BASE_SHAPES["exponential"],
                          eps=constant_profile(eps))


def tri_kernel(eps=1.0):
    return RescaledKernel(shape=BASE_SHAPES["triangular"],
                          eps=constant_profile(eps))


def ramp_history(grid, t_end, dt, slope=1.0):
    """Single-mode history u(t) = slope * t from a virgin origin."""
    n_steps = int(round(t_end / dt))
    h = HistorySnapshot.start(0.0, dt, np.zeros(1), None, grid, n_steps)
    for k in range(1, n_steps + 1):
        h.append(np.array([slope * k * dt]))
    return h


# ---------------------------------------------------------------------------
# grid construction
# ---------------------------------------------------------------------------

def test_geometric_grid_layout():
    g = AgeGrid.geometric(1e-3, 10.0, 64)
    assert g.size == 64
    assert g.edges[0] == 0.0
    assert g.edges[-1] == 10.0 == g.s_max
    assert np.all(g.nodes > g.edges[:-1]) and np.all(g.nodes <= g.edges[1:])
    assert np.all(np.diff(g.nodes) > 0)


def test_grid_constructor_gates():
    with pytest.raises(ConfigError):
        AgeGrid.geometric(1.0, 0.5)
    with pytest.raises(ConfigError):
        AgeGrid.geometric(0.0, 1.0)
    with pytest.raises(ConfigError):
        AgeGrid(nodes=np.array([2.0, 1.0]), edges=np.array([0.0, 1.5, 2.0]))
    with pytest.raises(ConfigError):
        AgeGrid(nodes=np.array([1.0]), edges=np.array([0.0, 1.0]))


def test_for_kernel_covers_the_tail():
    ker = exp_kernel(1.0)
    g = AgeGrid.for_kernel(ker, (0.0, 2.0), n_nodes=128, tail_tol=1e-10)
    assert ker.tail_mass(0.0, g.s_max) <= 1e-10
    assert ker.tail_mass(2.0, g.s_max) <= 1e-10


def test_mass_weights_match_quadrature():
    ker = tri_kernel(1.3)
    g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=96)
    w = g.mass_weights(ker, 0.0)
    wq = g.mass_weights_quadrature(ker, 0.0)
    assert np.max(np.abs(w - wq)) < 1e-9 * ker.total_mass(0.0)
    assert abs(w.sum() - (ker.total_mass(0.0) - ker.tail_mass(0.0, g.s_max))) < 1e-12


def test_interp_weights_clamp_and_reproduce():
    g = AgeGrid.geometric(1e-2, 5.0, 32)
    idx, frac = g.interp_weights(np.array([g.nodes[0] / 2, g.nodes[-1] * 2]))
    assert idx[0] == 0 and frac[0] == 0.0
    assert idx[1] == g.size - 2 and frac[1] == 1.0
    # linear interpolation of the nodes themselves is exact
    q = np.sqrt(g.nodes[:-1] * g.nodes[1:])
    idx, frac = g.interp_weights(q)
    lin = g.nodes[idx] * (1 - frac) + g.nodes[idx + 1] * frac
    assert np.max(np.abs(lin - q)) < 1e-12


# ---------------------------------------------------------------------------
# coupling rule
# ---------------------------------------------------------------------------

def test_coupling_rule_conserves_cell_masses():
    ker = exp_kernel(1.0)
    g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=64)
    pts, w = g.coupling_rule(ker, 0.0, refine=3)
    assert len(pts) == 3 * g.size == len(w)
    assert np.all(w >= 0)
    assert abs(w.sum() - g.mass_weights(ker, 0.0).sum()) < 1e-14
    assert np.all(pts >= 0) and np.all(pts <= g.s_max)
    assert np.all(np.diff(pts) >= 0)


def test_coupling_rule_gate_and_zero_kernel():
    g = AgeGrid.geometric(1e-3, 10.0, 16)
    with pytest.raises(ConfigError):
        g.coupling_rule(exp_kernel(), 0.0, refine=0)
    _, w = g.coupling_rule(ZeroKernel(), 0.0)
    assert np.all(w == 0.0)


def test_coupling_rule_tames_oscillatory_integrands():
    # one point per cell aliases oscillations once the cell width exceeds
    # the period; the refined rule keeps the integral accurate
    ker = exp_kernel(1.0)
    om = 10.0
    exact = 1.0 / (1.0 + om * om)
    g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=128)
    node_err = abs(g.mass_weights(ker, 0.0) @ np.cos(om * g.nodes) - exact)
    pts, w = g.coupling_rule(ker, 0.0, refine=2)
    rule_err = abs(w @ np.cos(om * pts) - exact)
    assert rule_err < 1e-4
    assert rule_err < node_err / 10


def test_coupling_matches_exact_requadrature_at_high_resolution():
    # smooth two-mode run; against the exact continuum integral of the
    # kernel times the piecewise-linear reconstruction, the refined rule
    # must land within 1e-8 once grid and sub-cells resolve the history
    from memwave.solver import WaveModel, solve
    from memwave.spectral import Spectrum, make_nonlinearity

    ker = exp_kernel(1.0)
    sp = Spectrum.interval(2)
    model = WaveModel(kernel=ker, spectrum=sp,
                      nonlinearity=make_nonlinearity("zero"))
    grid = AgeGrid.for_kernel(ker, (0.0, 1.0), n_nodes=4096)
    dt = 1e-3
    rec = solve(model, np.array([0.3, 0.1]), np.zeros(2), None, 0.0, 1.0,
                dt, grid=grid, output_every=1000)
    hist, t = rec.hist, 1.0
    pts, w = grid.coupling_rule(ker, t, refine=4)
    got = w @ eta_at_ages(hist, t, pts)

    # the reconstruction is linear on every age step, and the unit
    # exponential has elementary moments there, so the continuum coupling
    # integral is available in closed form
    traj = hist.traj[:hist.n_filled]
    n = hist.n_filled - 1
    u_t = traj[-1]
    sk = dt * np.arange(n + 1)
    e1 = np.exp(-sk[:-1]) - np.exp(-sk[1:])
    es = (sk[:-1] + 1) * np.exp(-sk[:-1]) - (sk[1:] + 1) * np.exp(-sk[1:])
    alpha = traj[::-1][:n]
    beta = (traj[::-1][1:n + 1] - traj[::-1][:n]) / dt
    exact = ((u_t[None, :] - alpha + beta * sk[:n, None]) * e1[:, None]
             - beta * es[:, None]).sum(axis=0)
    exact += (u_t - traj[0]) * (np.exp(-t) - np.exp(-grid.s_max))

    assert np.max(np.abs(got - exact)) < 1e-8


# ---------------------------------------------------------------------------
# history reconstruction
# ---------------------------------------------------------------------------

def test_relative_displacement_follows_min_law():
    g = AgeGrid.geometric(1e-3, 10.0, 64)
    h = ramp_history(g, 1.0, 0.05)
    for s in (0.05, 0.4, 0.85, 1.0):
        assert eta_eval(h, 1.0, s)[0] == pytest.approx(s, abs=1e-13)
    for s in (1.5, 3.0, 9.0):
        # beyond the elapsed span the virgin profile contributes nothing,
        # leaving the net displacement since the origin
        assert eta_eval(h, 1.0, s)[0] == pytest.approx(1.0, abs=1e-13)


def test_eta_eval_rejects_nonpositive_age():
    g = AgeGrid.geometric(1e-3, 10.0, 16)
    h = ramp_history(g, 0.5, 0.1)
    with pytest.raises(ValueError):
        eta_eval(h, 0.5, 0.0)
    with pytest.raises(ValueError):
        eta_eval(h, 0.5, -1.0)


def test_eta_at_ages_matches_scalar_eval():
    g = AgeGrid.geometric(1e-3, 10.0, 48)
    h = ramp_history(g, 1.0, 0.05)
    ages = np.array([0.03, 0.5, 0.999, 2.0, 7.7])
    block = eta_at_ages(h, 1.0, ages)
    for i, s in enumerate(ages):
        assert block[i, 0] == pytest.approx(eta_eval(h, 1.0, s)[0], abs=1e-14)
    assert np.array_equal(eta_on_grid(h, 1.0), eta_at_ages(h, 1.0, g.nodes))


def test_inherited_profile_branch():
    g = AgeGrid.geometric(1e-3, 10.0, 64)
    phi = np.exp(-g.nodes)[:, None]
    n_steps = 4
    h = HistorySnapshot.start(0.0, 0.1, np.array([2.0]), phi, g, n_steps)
    for k in range(1, n_steps + 1):
        h.append(np.array([2.0 + 0.3 * k * 0.1]))
    t = 0.4
    drift = (2.0 + 0.3 * t) - 2.0
    for s in (1.0, 3.0):
        idx, frac = g.interp_weights(np.array([s - t]))
        expect = (np.exp(-g.nodes[idx[0]]) * (1 - frac[0])
                  + np.exp(-g.nodes[idx[0] + 1]) * frac[0]) + drift
        assert eta_eval(h, t, s)[0] == pytest.approx(expect, abs=1e-12)


@given(st.lists(st.floats(-2.0, 2.0), min_size=3, max_size=15),
       st.floats(0.01, 0.99))
def test_reconstruction_is_difference_of_displacements(vals, srel):
    dt = 0.125
    g = AgeGrid.geometric(1e-3, 10.0, 16)
    h = HistorySnapshot.start(0.0, dt, np.array([vals[0]]), None, g,
                              len(vals) - 1)
    for v in vals[1:]:
        h.append(np.array([v]))
    t = h.t_now
    s = srel * t
    ts = dt * np.arange(len(vals))
    manual = np.interp(t, ts, vals) - np.interp(t - s, ts, vals)
    assert eta_eval(h, t, s)[0] == pytest.approx(manual, abs=1e-12)


def test_history_buffer_gates():
    g = AgeGrid.geometric(1e-3, 10.0, 16)
    h = HistorySnapshot.start(0.0, 0.1, np.zeros(1), None, g, 2)
    h.append(np.ones(1))
    h.append(np.ones(1))
    with pytest.raises(RuntimeError):
        h.append(np.ones(1))
    with pytest.raises(ValueError):
        h.u_at(0.3)
    with pytest.raises(ValueError):
        h.u_at(-0.1)
    with pytest.raises(ConfigError):
        HistorySnapshot.start(0.0, 0.1, np.zeros(2), np.zeros((4, 2)), g, 5)


# ---------------------------------------------------------------------------
# norms and dissipation
# ---------------------------------------------------------------------------

def test_norm_spec_grading_gate():
    MemoryNormSpec(sigma=-1, lam=LAM1)
    with pytest.raises(ConfigError):
        MemoryNormSpec(sigma=2, lam=LAM1)


def test_memory_norm_closed_forms():
    # ramp history held long enough that eta(s) = s on the whole support;
    # first moment integrals are then explicit
    spec = MemoryNormSpec(sigma=0, lam=LAM1)
    for ker, exact in [(exp_kernel(1.0), 2 * np.pi ** 2),
                       (tri_kernel(1.0), np.pi ** 2 / 12)]:
        g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=256)
        h = ramp_history(g, 1.5 * g.s_max, 0.05)
        val = memory_norm(h, ker, h.t_now, spec)
        assert abs(val - exact) <= 1e-3 * exact


def test_memory_norm_second_order_in_grid():
    spec = MemoryNormSpec(sigma=0, lam=LAM1)
    ker = exp_kernel(1.0)
    exact = 2 * np.pi ** 2
    errs = []
    for J in (128, 256, 512):
        g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=J)
        h = ramp_history(g, 1.5 * g.s_max, 0.05)
        errs.append(abs(memory_norm(h, ker, h.t_now, spec) - exact))
    assert 3.0 < errs[0] / errs[1] < 5.5
    assert 3.0 < errs[1] / errs[2] < 5.5


def test_translation_dissipativity_closed_form():
    # triangular kernel with a linear profile: both sides equal -pi^2/6
    spec = MemoryNormSpec(sigma=0, lam=LAM1)
    ker = tri_kernel(1.0)
    g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=256)
    h = ramp_history(g, 1.5 * g.s_max, 0.01)
    pair, half = translation_dissipativity(eta_on_grid(h, h.t_now), ker, g,
                                           h.t_now, spec)
    exact = -np.pi ** 2 / 6
    assert pair <= 0 and half <= 0
    assert abs(pair - exact) <= 1e-3 * abs(exact)
    assert abs(half - exact) <= 1e-3 * abs(exact)
    assert abs(pair - half) <= 5e-3


def test_time_domination_embeds_norms():
    # with exact cell masses the domination bound holds cellwise, so the
    # discrete norms inherit it with no quadrature slack
    ker = RescaledKernel(shape=BASE_SHAPES["exponential"],
                         eps=exp_decay_profile(1.0, 1.0))
    g = AgeGrid.for_kernel(ker, (0.0, 2.0), n_nodes=128)
    spec = MemoryNormSpec(sigma=0, lam=LAM1)
    eta = np.exp(-0.3 * g.nodes)[:, None]
    w0 = g.mass_weights(ker, 0.0)
    w2 = g.mass_weights(ker, 2.0)
    K = ker.domination(0.0, 2.0)
    assert K == pytest.approx(np.exp(4.0), rel=1e-12)
    n2 = profile_norm2(eta, w2, spec)
    n0 = profile_norm2(eta, w0, spec)
    assert n2 <= K * n0 * (1 + 1e-12)


def test_phi_bound_envelope_holds_on_nonlinear_run():
    from memwave.solver import WaveModel, solve
    from memwave.spectral import Spectrum, make_nonlinearity
    from memwave.kernels import inverse_softplus_profile

    ker = RescaledKernel(shape=BASE_SHAPES["exponential"],
                         eps=inverse_softplus_profile(2.0))
    sp = Spectrum.interval(4)
    model = WaveModel(kernel=ker, spectrum=sp,
                      nonlinearity=make_nonlinearity("cubic_minus_linear"))
    rec = solve(model, np.array([0.5, -0.2, 0.1, 0.0]), np.zeros(4), None,
                0.0, 0.5, 1e-3, output_every=100)
    spec = MemoryNormSpec(sigma=0, lam=sp.lam)
    for t in (0.1, 0.3, 0.5):
        value, envelope = phi_bound(rec.hist, ker, t, spec)
        assert 0 <= value <= envelope


# ---------------------------------------------------------------------------
# slice-norm inequality
# ---------------------------------------------------------------------------

def _linear_run():
    from memwave.solver import WaveModel, solve
    from memwave.spectral import Spectrum, make_nonlinearity

    ker = exp_kernel(1.0)
    sp = Spectrum.interval(3)
    model = WaveModel(kernel=ker, spectrum=sp,
                      nonlinearity=make_nonlinearity("zero"))
    # output cadence 0.02 keeps the trapezoid-in-time error of the pairing
    # integral below the dissipation slack for the mode-3 oscillations
    rec = solve(model, np.array([0.4, -0.1, 0.2]), np.zeros(3), None,
                0.0, 1.0, 2e-3, output_every=10)
    return rec, ker, sp


def test_key_inequality_residuals_nonnegative():
    rec, ker, sp = _linear_run()
    spec = MemoryNormSpec(sigma=0, lam=sp.lam)
    res = key_inequality_residuals(rec.hist, ker, spec, rec.times,
                                   velocities=rec.b)
    assert res.shape == (len(rec.times), len(rec.times))
    assert np.all(np.diag(res) == 0.0)
    assert np.tril(res, -1).max() == 0.0 == np.tril(res, -1).min()
    assert res.min() >= -1e-12


def test_key_inequality_single_pair_and_order_gate():
    rec, ker, sp = _linear_run()
    spec = MemoryNormSpec(sigma=0, lam=sp.lam)
    r = key_inequality_residual(rec.hist, ker, spec, rec.times[1],
                                rec.times[-1], rec.times, velocities=rec.b)
    assert r >= -1e-9
    with pytest.raises(ValueError):
        key_inequality_residual(rec.hist, ker, spec, rec.times[-1],
                                rec.times[0], rec.times, velocities=rec.b)


def test_memory_coupling_reduces_to_node_rule_for_slow_profiles():
    # for a smooth, slowly varying history the refined rule and the plain
    # node rule agree to the quadrature budget
    ker = exp_kernel(1.0)
    g = AgeGrid.for_kernel(ker, (0.0, 0.0), n_nodes=256)
    h = ramp_history(g, 1.5 * g.s_max, 0.05)
    t = h.t_now
    coupled = memory_coupling(h, ker, t)
    node = g.mass_weights(ker, t) @ eta_on_grid(h, t)
    assert np.max(np.abs(coupled - node)) < 5e-3 * max(1.0, np.max(np.abs(node)))
