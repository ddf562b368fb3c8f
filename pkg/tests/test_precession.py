import math

import numpy as np
import pytest

from spindyn import precession as pr


def make_params(**kw):
    return pr.ParticleParams(**kw)


# ---------------------------------------------------------------------------
# precession vector and right-hand sides

def test_precession_vector_constant_b():
    params = make_params(e=-1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 2.0])
    R = pr.precession_vector(fields, np.array([9.0, -3.0, 1.0]), params)
    assert np.allclose(R, [0.0, 0.0, 2.0])  # -(e/mc) B with e = -1


def test_precession_vector_zero_fields():
    params = make_params()
    assert np.allclose(pr.precession_vector(pr.FieldConfig(), np.ones(3), params), 0.0)


def test_precession_vector_momentum_term():
    params = make_params(e=1.0)
    fields = pr.FieldConfig(E=[1.0, 0.0, 0.0])
    R = pr.precession_vector(fields, np.array([0.0, 1.0, 0.0]), params)
    assert np.allclose(R, [0.0, 0.0, -0.5])


def test_precession_rhs_parallel_fixed_point():
    R = np.array([0.0, 1.0, 2.0])
    assert np.allclose(pr.precession_rhs(3.0 * R, R), 0.0)


def test_precession_rhs_basis():
    out = pr.precession_rhs(np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 1.0]))
    assert np.allclose(out, [0.0, 1.0, 0.0])


def test_precession_rhs_magnitude():
    R = np.array([0.0, 0.0, 2.0])
    S = np.array([1.0, 0.0, 1.0])
    out = pr.precession_rhs(S, R)
    expected = np.linalg.norm(R) * np.linalg.norm(S) * math.sin(math.pi / 4)
    assert np.linalg.norm(out) == pytest.approx(expected)


# ---------------------------------------------------------------------------
# alignment torque

def test_alignment_parallel_is_zero():
    params = make_params(gamma_align=1.0)
    B = np.array([0.0, 0.0, 2.0])
    assert np.allclose(pr.alignment_rhs(0.5 * B, B, params), 0.0, atol=1e-15)


def test_alignment_orthogonal_is_zero():
    params = make_params(gamma_align=1.0)
    out = pr.alignment_rhs(np.array([1.0, 0.0, 0.0]), np.array([0.0, 0.0, 3.0]), params)
    assert np.allclose(out, 0.0, atol=1e-15)


def test_alignment_hand_expansion():
    params = make_params(gamma_align=0.7)
    beta = params.beta_align
    b, s, th = 2.0, 1.5, 0.6
    B = np.array([0.0, 0.0, b])
    S = s * np.array([math.sin(th), 0.0, math.cos(th)])
    out = pr.alignment_rhs(S, B, params)
    expected = beta * b * s * math.cos(th) * np.array(
        [-math.sin(th) * math.cos(th), 0.0, math.sin(th) ** 2])
    assert np.allclose(out, expected, atol=1e-14)
    assert abs(np.dot(out, S)) < 1e-14


def test_alignment_zero_field_returns_zero():
    params = make_params(gamma_align=1.0)
    assert np.allclose(pr.alignment_rhs(np.ones(3), np.zeros(3), params), 0.0)


def test_alignment_zero_spin_raises():
    params = make_params(gamma_align=1.0)
    with pytest.raises(ValueError):
        pr.alignment_rhs(np.zeros(3), np.array([0.0, 0.0, 1.0]), params)


def test_alignment_geometry_random():
    """Orthogonal to S, in span(B, S), and always pointing toward the B axis."""
    rng = np.random.default_rng(2)
    params = make_params(gamma_align=1.3)
    B = np.array([0.0, 0.0, 1.0])
    for _ in range(50):
        S = rng.normal(size=3)
        if np.linalg.norm(S) < 1e-3:
            continue
        out = pr.alignment_rhs(S, B, params)
        assert abs(np.dot(out, S)) < 1e-12
        assert abs(np.dot(out, np.cross(B, S))) < 1e-12  # stays in the plane
        th = math.acos(np.clip(S[2] / np.linalg.norm(S), -1, 1))
        dtheta = np.dot(out, np.array([0.0, 0.0, 1.0]))  # d(S.Bhat)/dt
        if 1e-6 < th < math.pi / 2 - 1e-6:
            assert dtheta > 0.0  # cos(theta) grows: moves toward +B
        elif math.pi / 2 + 1e-6 < th < math.pi - 1e-6:
            assert dtheta < 0.0  # moves toward -B


def test_total_rhs_reduces_to_precession():
    params = make_params(gamma_align=0.0)
    fields = pr.FieldConfig(B=[0.1, 0.2, 0.3])
    S = np.array([1.0, -2.0, 0.5])
    R = pr.precession_vector(fields, np.zeros(3), params)
    assert np.allclose(pr.spin_rhs_total(S, fields, np.zeros(3), params),
                       pr.precession_rhs(S, R))


def test_total_rhs_hand_value():
    # theta = pi/4, e = -1, m = c = 1, |S| = |B| = 1, gamma = 1
    params = make_params(gamma_align=1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    S = np.array([math.sqrt(0.5), 0.0, math.sqrt(0.5)])
    out = pr.spin_rhs_total(S, fields, np.zeros(3), params)
    expected = np.array([-math.sqrt(2.0) / 4.0, math.sqrt(2.0) / 2.0,
                         math.sqrt(2.0) / 4.0])
    assert np.allclose(out, expected, atol=1e-14)


def test_total_rhs_aligned_fixed_point():
    params = make_params(gamma_align=2.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    out = pr.spin_rhs_total(np.array([0.0, 0.0, 0.8]), fields, np.zeros(3), params)
    assert np.allclose(out, 0.0, atol=1e-15)


# ---------------------------------------------------------------------------
# closed forms

def test_rodrigues_t_zero():
    S0 = np.array([0.3, 0.4, 0.5])
    assert np.allclose(pr.rotate_rodrigues(S0, np.array([1.0, 2.0, 3.0]), 0.0), S0)


def test_rodrigues_quarter_turn_sign():
    w = 0.7
    out = pr.rotate_rodrigues(np.array([1.0, 0.0, 0.0]),
                              np.array([0.0, 0.0, w]), math.pi / (2.0 * w))
    assert np.allclose(out, [0.0, 1.0, 0.0], atol=1e-14)  # dS/dt = R x S sense


def test_rodrigues_axis_component_conserved():
    rng = np.random.default_rng(3)
    R = rng.normal(size=3)
    S0 = rng.normal(size=3)
    k = R / np.linalg.norm(R)
    for t in (0.1, 1.0, 7.3):
        out = pr.rotate_rodrigues(S0, R, t)
        assert np.dot(out, k) == pytest.approx(np.dot(S0, k))
        assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(S0))


def test_rodrigues_zero_axis():
    S0 = np.array([1.0, 2.0, 3.0])
    assert np.allclose(pr.rotate_rodrigues(S0, np.zeros(3), 5.0), S0)


def test_analytic_theta_ln2():
    params = make_params(gamma_align=1.0)  # beta = 1
    th = pr.analytic_theta(math.pi / 4.0, 1.0, params, math.log(2.0))
    assert th == pytest.approx(math.atan(0.5), abs=1e-15)


def test_analytic_theta_t_zero():
    params = make_params(gamma_align=1.0)
    assert pr.analytic_theta(1.1, 2.0, params, 0.0) == pytest.approx(1.1)


def test_analytic_theta_mirror_symmetry():
    params = make_params(gamma_align=0.8)
    for t in (0.0, 0.5, 2.0):
        acute = pr.analytic_theta(math.pi / 4.0, 1.0, params, t)
        obtuse = pr.analytic_theta(3.0 * math.pi / 4.0, 1.0, params, t)
        assert obtuse == pytest.approx(math.pi - acute, abs=1e-14)


def test_analytic_theta_fixed_points():
    params = make_params(gamma_align=1.0)
    for th0 in (0.0, 0.5 * math.pi, math.pi):
        assert pr.analytic_theta(th0, 1.0, params, 3.0) == th0


def test_alignment_time_inversion():
    params = make_params(gamma_align=1.0)
    t = pr.alignment_time(math.pi / 4.0, math.atan(0.5), 1.0, params)
    assert t == pytest.approx(math.log(2.0), abs=1e-14)


def test_alignment_time_eps_limit():
    params = make_params(gamma_align=1.0)
    th0 = 0.9
    assert pr.alignment_time(th0, th0 * (1.0 - 1e-12), 1.0, params) \
        == pytest.approx(0.0, abs=1e-9)


def test_alignment_time_halves_with_doubled_gamma():
    t1 = pr.alignment_time(0.7, 0.01, 1.0, make_params(gamma_align=1.0))
    t2 = pr.alignment_time(0.7, 0.01, 1.0, make_params(gamma_align=2.0))
    assert t1 == pytest.approx(2.0 * t2)


def test_alignment_time_equator_infinite():
    params = make_params(gamma_align=1.0)
    assert math.isinf(pr.alignment_time(0.5 * math.pi, 0.01, 1.0, params))


def test_alignment_time_bad_eps():
    params = make_params(gamma_align=1.0)
    with pytest.raises(ValueError):
        pr.alignment_time(0.3, 0.5, 1.0, params)


# ---------------------------------------------------------------------------
# integration

def test_integrate_matches_rodrigues():
    params = make_params(gamma_align=0.0)
    fields = pr.FieldConfig(B=[0.3, -0.4, 1.0], E=[0.2, 0.1, -0.3])
    p = np.array([0.5, -0.2, 0.7])
    S0 = np.array([0.6, 0.1, -0.5])
    R = pr.precession_vector(fields, p, params)
    traj = pr.integrate_spin(pr.SpinState(S=S0, p=p), fields, params,
                             dt=1e-3, n_steps=2000)
    for k in (0, 500, 2000):
        assert np.allclose(traj.S[k], pr.rotate_rodrigues(S0, R, traj.t[k]),
                           atol=1e-10)


def test_integrate_aligned_spin_constant():
    params = make_params(gamma_align=1.5)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    S0 = np.array([0.0, 0.0, 0.9])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=0.01,
                             n_steps=500)
    assert np.allclose(traj.S, S0, atol=1e-14)


def test_integrate_equator_invariant():
    params = make_params(gamma_align=2.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    S0 = np.array([0.8, 0.0, 0.0])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=0.01,
                             n_steps=2000)
    assert np.max(np.abs(traj.theta - 0.5 * math.pi)) < 1e-12


def test_integrate_smag_conserved():
    params = make_params(gamma_align=1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0], E=[0.1, 0.0, 0.2])
    S0 = 0.5 * np.array([1.0, 0.2, 1.4])
    traj = pr.integrate_spin(pr.SpinState(S=S0, p=np.array([0.3, 0.1, 0.0])),
                             fields, params, dt=0.01, n_steps=10_000)
    assert traj.smag_drift() < 1e-10


def test_integrate_pure_precession_conserves_sb():
    params = make_params(gamma_align=0.0)
    fields = pr.FieldConfig(B=[0.0, 0.3, 1.0])
    S0 = np.array([1.0, 0.0, 0.3])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=0.005,
                             n_steps=4000)
    sb = traj.S @ fields.B
    assert np.max(np.abs(sb - sb[0])) < 1e-10


def test_integrate_sb_monotone_on_decaying_branch():
    params = make_params(gamma_align=1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    th0 = 1.2
    S0 = np.array([math.sin(th0), 0.0, math.cos(th0)])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=0.01,
                             n_steps=2000)
    cosang = traj.S @ np.array([0.0, 0.0, 1.0])
    assert np.all(np.diff(np.abs(cosang)) > -1e-12)


def test_integrate_rk45_matches_alignment_law():
    params = make_params(gamma_align=1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    th0 = 0.8
    S0 = np.array([math.sin(th0), 0.0, math.cos(th0)])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=0.05,
                             n_steps=100, scheme="rk45")
    exact = np.array([pr.analytic_theta(th0, 1.0, params, t) for t in traj.t])
    assert np.max(np.abs(traj.theta - exact)) < 1e-8


def test_integrate_validation():
    params = make_params()
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    state = pr.SpinState(S=np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        pr.integrate_spin(state, fields, params, dt=0.0, n_steps=10)
    with pytest.raises(ValueError):
        pr.integrate_spin(state, fields, params, dt=0.1, n_steps=0)
    with pytest.raises(ValueError):
        pr.integrate_spin(state, fields, params, dt=0.1, n_steps=10,
                          scheme="euler")


def test_integrate_numerical_failure_reports_step():
    params = make_params(gamma_align=1e8)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1e8])
    state = pr.SpinState(S=np.array([1.0, 0.0, 1.0]))
    with pytest.raises(pr.NumericalFailure) as err:
        pr.integrate_spin(state, fields, params, dt=100.0, n_steps=50)
    assert err.value.step >= 1


def test_coulomb_field_mode():
    fields = pr.FieldConfig(coulomb_q=2.0)
    x = np.array([3.0, 0.0, 4.0])
    E = fields.electric_at(x)
    assert np.allclose(E, 2.0 * x / 125.0)
    with pytest.raises(ValueError):
        fields.electric_at(None)
    with pytest.raises(ValueError):
        fields.electric_at(np.zeros(3))


def test_params_validation():
    with pytest.raises(ValueError):
        pr.ParticleParams(m=0.0)
    with pytest.raises(ValueError):
        pr.ParticleParams(gamma_align=-0.1)
    p = pr.ParticleParams(e=-2.0, m=4.0, c=3.0, gamma_align=0.5)
    assert p.beta_align == pytest.approx(0.5 * 2.0 / 12.0)


def test_measure_alignment_time_matches_formula():
    params = make_params(gamma_align=1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 1.0])
    th0 = math.pi / 4.0
    S0 = np.array([math.sin(th0), 0.0, math.cos(th0)])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=1e-3,
                             n_steps=8000)
    eps = 0.05
    measured = pr.measure_alignment_time(traj, eps)
    exact = pr.alignment_time(th0, eps, 1.0, params)
    assert measured == pytest.approx(exact, abs=2e-3)


def test_decay_rate_fit():
    params = make_params(gamma_align=0.5)
    fields = pr.FieldConfig(B=[0.0, 0.0, 2.0])
    th0 = 1.0
    S0 = np.array([math.sin(th0), 0.0, math.cos(th0)])
    traj = pr.integrate_spin(pr.SpinState(S=S0), fields, params, dt=1e-3,
                             n_steps=2000)
    assert pr.decay_rate_fit(traj) == pytest.approx(-params.beta_align * 2.0,
                                                    rel=1e-6)


# ---------------------------------------------------------------------------
# energy evaluators

def test_energies_spinless_reduction():
    params = make_params(e=-1.0)
    fields = pr.FieldConfig(A0=0.7)
    state = pr.SpinState(S=np.array([0.3, 0.1, -0.2]), p=np.array([1.0, 2.0, 2.0]))
    kinetic = 9.0 / 2.0
    assert pr.pauli_energy(state, fields, params) == pytest.approx(
        kinetic + params.e * 0.7)
    assert pr.covariant_energy_expanded(state, fields, params) == pytest.approx(
        1.0 + kinetic + params.e * 0.7)


def test_energies_shared_sb_coefficient():
    params = make_params(e=-1.0)
    fields = pr.FieldConfig(B=[0.0, 0.0, 2.0])
    state = pr.SpinState(S=np.array([0.0, 0.0, 0.5]), p=np.zeros(3))
    spin_term = -(params.e / (params.m * params.c)) * 1.0
    assert pr.pauli_energy(state, fields, params) == pytest.approx(spin_term)
    assert pr.covariant_energy_expanded(state, fields, params) == pytest.approx(
        params.m * params.c**2 + spin_term)


def test_coefficient_ratio_exactly_half():
    params = make_params()
    fields = pr.FieldConfig(E=[1.0, 0.5, -0.2])
    state = pr.SpinState(S=np.array([0.1, 0.2, 0.3]), p=np.array([0.4, -0.5, 0.6]))
    assert pr.spin_orbit_coefficient_ratio(state, fields, params) == 0.5


def test_coefficient_ratio_degenerate_state_raises():
    params = make_params()
    fields = pr.FieldConfig(E=[1.0, 0.0, 0.0])
    state = pr.SpinState(S=np.array([1.0, 0.0, 0.0]), p=np.array([1.0, 0.0, 0.0]))
    with pytest.raises(ValueError):
        pr.spin_orbit_coefficient_ratio(state, fields, params)
