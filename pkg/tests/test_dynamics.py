"""Vector fields, integrators, conservation, full-vs-reduced comparison."""

import io
import json
import math

import numpy as np
import pytest

from threebody4d import dynamics, equilibria, model, reduction

from conftest import central_gradient, random_chart_point, random_reduced_state

MASSES = model.MassTriple(1.0, 2.0, 3.0)
MU1, MU2 = 1.3, 0.4
EQUAL = model.MassTriple(1.0, 1.0, 1.0)


def test_gradient_reduced_finite_differences():
    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        red = random_reduced_state(rng, MU1, MU2)
        g = dynamics.gradient_reduced(MASSES, red)
        z0 = np.concatenate([red.q, red.p])

        def ham(z):
            return reduction.hamiltonian_reduced(
                MASSES, reduction.ReducedState(z[0:4], z[4:8], MU1, MU2))

        fd = central_gradient(ham, z0)
        worst = max(worst, float(np.max(np.abs(g - fd)))
                    / max(1.0, float(np.max(np.abs(fd)))))
    assert worst < 1e-6


def test_gradient_reduced_momentum_part_at_rest():
    rng = np.random.default_rng(1)
    red = random_reduced_state(rng, MU1, MU2)
    rest = reduction.ReducedState(red.q, np.zeros(4), MU1, MU2)
    g = dynamics.gradient_reduced(MASSES, rest)
    assert np.max(np.abs(g[4:8])) < 1e-14


def test_gradient_reduced_zero_at_equilibrium():
    rep = equilibria.isosceles_equilibrium(1.0, 0.2)
    red = reduction.ReducedState(rep.q, np.zeros(4), rep.mu1, rep.mu2)
    g = dynamics.gradient_reduced(EQUAL, red)
    assert np.max(np.abs(g)) < 1e-9


def test_gradient_partial_finite_differences():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(50):
        part = random_chart_point(rng)
        z0 = reduction.partial_to_array(part)
        g = dynamics.gradient_partial(MASSES, z0)

        def ham(z):
            return reduction.hamiltonian_partial(MASSES, reduction.array_to_partial(z))

        fd = central_gradient(ham, z0)
        worst = max(worst, float(np.max(np.abs(g - fd)))
                    / max(1.0, float(np.max(np.abs(fd)))))
    assert worst < 1e-6


def test_restricted_field_matches_reduced():
    # X_{H|I} from the reduced Hamiltonian == projection of X_H at embedded points
    rng = np.random.default_rng(3)
    for _ in range(10):
        red = random_reduced_state(rng, MU1, MU2)
        zp = reduction.partial_to_array(reduction.embed_reduced(red))
        fp = dynamics.partial_field(MASSES).evaluate(0.0, zp)
        fr = dynamics.reduced_field(MASSES, MU1, MU2).evaluate(
            0.0, np.concatenate([red.q, red.p]))
        assert np.max(np.abs(fp[0:4] - fr[0:4])) < 1e-7
        assert np.max(np.abs(fp[8:12] - fr[4:8])) < 1e-7


def test_zero_field_constant_trajectory():
    cfg = dynamics.IntegratorConfig()
    z0 = np.array([1.0, -2.0, 0.5])
    rec = dynamics.integrate(dynamics.zero_field(3), z0, 5.0, cfg)
    assert np.max(np.abs(rec.states - z0)) == 0.0
    assert rec.times[-1] == pytest.approx(5.0)


def test_kepler_circular_orbit():
    # circular binary with a far-away third body: radius constant to 1e-7
    mm = model.MassTriple(1e-5, 1.0, 1.5)
    a = 1.0
    om = math.sqrt((mm.m2 + mm.m3) / a ** 3)
    r2 = np.array([mm.a3 * a, 0, 0, 0])
    r3 = np.array([-mm.a2 * a, 0, 0, 0])
    r1 = np.array([0, 0, 1e4, 0])
    v2 = np.array([0, om * mm.a3 * a, 0, 0])
    v3 = np.array([0, -om * mm.a2 * a, 0, 0])
    st = model.jacobi_from_positions(mm, r1, r2, r3, np.zeros(4), v2, v3)
    z0 = reduction.full_to_array(st)
    period = 2 * math.pi / om
    cfg = dynamics.IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13)
    rec = dynamics.integrate(dynamics.full_field(mm), z0, period, cfg)
    radii = np.linalg.norm(rec.states[:, 0:4], axis=1)
    assert np.max(np.abs(radii - a)) < 1e-7
    assert np.max(np.abs(rec.states[-1] - z0)) < 1e-5  # closed orbit


def test_energy_drift_adaptive():
    red0 = reduction.ReducedState([1.1, 0.1, -0.2, 0.9],
                                  [0.02, -0.01, 0.03, 0.01], MU1, MU2)
    z0 = np.concatenate([red0.q, red0.p])
    cfg = dynamics.IntegratorConfig(rel_tol=1e-10, abs_tol=1e-12)
    rec = dynamics.integrate(dynamics.reduced_field(MASSES, MU1, MU2), z0, 2.0, cfg,
                             monitors=dynamics.reduced_monitors(MASSES, MU1, MU2))
    assert rec.n_steps >= 1000
    h = rec.monitors["H"]
    assert np.max(np.abs(h - h[0])) / abs(h[0]) < 1e-8


def test_reversibility():
    red0 = reduction.ReducedState([1.1, 0.1, -0.2, 0.9],
                                  [0.02, -0.01, 0.03, 0.01], MU1, MU2)
    z0 = np.concatenate([red0.q, red0.p])
    cfg = dynamics.IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13)
    fwd = dynamics.reduced_field(MASSES, MU1, MU2)
    bwd = dynamics.VectorField(8, lambda t, z: -fwd.evaluate(t, z))
    rec = dynamics.integrate(fwd, z0, 3.0, cfg)
    back = dynamics.integrate(bwd, rec.states[-1], 3.0, cfg)
    tol = 10 * cfg.rel_tol * (rec.n_steps + back.n_steps)
    assert np.max(np.abs(back.states[-1] - z0)) < tol


def test_midpoint_energy_bounded():
    rep = equilibria.isosceles_equilibrium(1.0, 0.25)
    z0 = np.concatenate([rep.q, [1e-3, -5e-4, 8e-4, -2e-4]])
    period = 2 * math.pi / rep.omega1
    cfg = dynamics.IntegratorConfig(method="midpoint", dt=period / 200,
                                    monitor_every=10)
    rec = dynamics.integrate(dynamics.reduced_field(EQUAL, rep.mu1, rep.mu2),
                             z0, 20 * period, cfg,
                             monitors=dynamics.reduced_monitors(EQUAL, rep.mu1, rep.mu2))
    h = rec.monitors["H"]
    drift = np.abs(h - h[0]) / abs(h[0])
    half = len(h) // 2
    assert np.max(drift) < 1e-10
    # bounded oscillation, no secular growth
    assert np.max(drift[half:]) < 3.0 * max(np.max(drift[:half]), 1e-14)


def test_domain_exit_on_collision_course():
    red = reduction.ReducedState([0.5, 0.0, 0.0, 2.0], [-0.6, 0.0, 0.0, 0.0],
                                 1.0, 0.0)
    z0 = np.concatenate([red.q, red.p])
    rec = dynamics.integrate(dynamics.reduced_field(EQUAL, 1.0, 0.0), z0, 10.0,
                             dynamics.IntegratorConfig(max_steps=100000))
    assert rec.domain_exit is not None
    assert rec.exit_time is not None and 0 < rec.exit_time < 10.0
    assert len(rec.times) > 10  # partial trajectory retained
    assert rec.states[-1][0] < 0.01  # binary separation collapsed


def test_sample_times_are_hit():
    cfg = dynamics.IntegratorConfig()
    samples = np.array([0.31, 0.72, 1.5])
    red0 = reduction.ReducedState([1.1, 0.1, -0.2, 0.9], np.zeros(4), MU1, MU2)
    z0 = np.concatenate([red0.q, red0.p])
    rec = dynamics.integrate(dynamics.reduced_field(MASSES, MU1, MU2), z0, 2.0,
                             cfg, t_samples=samples)
    for s in samples:
        assert np.min(np.abs(rec.times - s)) < 1e-9


def test_compare_full_vs_reduced_near_equilibrium():
    rep = equilibria.isosceles_equilibrium(1.0, 0.25)
    pert = np.array([1e-3, -5e-4, 8e-4, -2e-4])
    start = reduction.ReducedState(rep.q, pert, rep.mu1, rep.mu2)
    period = 2 * math.pi / rep.omega1
    cfg = dynamics.IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    report = dynamics.compare_full_vs_reduced(EQUAL, start, period, cfg)
    assert report.domain_exit is None
    assert report.max_qp_deviation < 1e-6
    assert report.max_mu_drift < 1e-9
    assert report.max_invariant_residual < 1e-7


def test_compare_at_equilibrium_stays_on_group_orbit():
    rep = equilibria.isosceles_equilibrium(1.0, 0.2)
    start = reduction.ReducedState(rep.q, np.zeros(4), rep.mu1, rep.mu2)
    period = 2 * math.pi / rep.omega1
    cfg = dynamics.IntegratorConfig(rel_tol=1e-12, abs_tol=1e-14)
    # reduced state stays put
    z0 = np.concatenate([start.q, start.p])
    rec = dynamics.integrate(dynamics.reduced_field(EQUAL, rep.mu1, rep.mu2),
                             z0, period, cfg)
    assert np.max(np.abs(rec.states - z0)) < 1e-8
    # full trajectory stays on the group orbit: scalar products constant
    zf = reduction.full_to_array(
        reduction.lift_to_full(reduction.embed_reduced(start)))
    recf = dynamics.integrate(dynamics.full_field(EQUAL), zf, period, cfg)
    s0 = reduction.array_to_full(recf.states[0]).scalar_products()
    for row in recf.states:
        s = reduction.array_to_full(row).scalar_products()
        assert abs(s.s11 - s0.s11) < 1e-8
        assert abs(s.s22 - s0.s22) < 1e-8
        assert abs(s.s12 - s0.s12) < 1e-8


def test_trajectory_record_csv_json():
    cfg = dynamics.IntegratorConfig()
    red0 = reduction.ReducedState([1.1, 0.1, -0.2, 0.9], np.zeros(4), MU1, MU2)
    z0 = np.concatenate([red0.q, red0.p])
    rec = dynamics.integrate(dynamics.reduced_field(MASSES, MU1, MU2), z0, 0.3,
                             cfg, monitors=dynamics.reduced_monitors(MASSES, MU1, MU2))
    assert np.all(np.diff(rec.times) > 0)
    for vals in rec.monitors.values():
        assert len(vals) == len(rec.times)
    buf = io.StringIO()
    labels = [f"q{i}" for i in range(1, 5)] + [f"p{i}" for i in range(1, 5)]
    rec.to_csv(buf, state_labels=labels)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,q1,q2,q3,q4,p1,p2,p3,p4,H"
    assert len(lines) == len(rec.times) + 1
    # 17 significant digits round-trip
    first = lines[1].split(",")
    assert float(first[1]) == rec.states[0][0]
    buf = io.StringIO()
    rec.to_json(buf, state_labels=labels)
    obj = json.loads(buf.getvalue())
    assert obj["domain_exit"] is None
    assert len(obj["t"]) == len(rec.times)
    assert obj["states"]["q1"][0] == rec.states[0][0]


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        dynamics.IntegratorConfig(rel_tol=-1.0)
    with pytest.raises(ValueError):
        dynamics.IntegratorConfig(dt=0.0)
    with pytest.raises(ValueError):
        dynamics.integrate(dynamics.zero_field(2), np.zeros(2), 1.0,
                           dynamics.IntegratorConfig(method="rk4"))
