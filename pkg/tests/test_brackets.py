import numpy as np
import pytest

from spindyn import brackets as br
from spindyn import precession as pr


@pytest.fixture
def params():
    return pr.ParticleParams()


@pytest.fixture
def table(params):
    return br.standard_spin_table(params)


def test_spin_spin_bracket(table):
    pt = br.PhasePoint(S=[0.0, 0.0, 1.7])
    assert table.bracket("S1", "S2", pt) == pytest.approx(1.7)
    assert table.bracket("S2", "S1", pt) == pytest.approx(-1.7)
    assert table.bracket("S2", "S3", pt) == 0.0
    assert table.bracket("S1", "S3", pt) == 0.0


def test_position_position_bracket(table):
    pt = br.PhasePoint(S=[0.0, 0.0, 1.7])
    assert table.bracket("x1", "x2", pt) == pytest.approx(1.7)  # m = c = 1
    assert table.bracket("x1", "x1", pt) == 0.0


def test_position_position_scales_with_mc():
    params = pr.ParticleParams(m=2.0, c=3.0)
    table = br.standard_spin_table(params)
    pt = br.PhasePoint(S=[0.0, 0.0, 1.0])
    assert table.bracket("x1", "x2", pt) == pytest.approx(1.0 / 36.0)


def test_canonical_pairs(table):
    pt = br.PhasePoint(x=[1.0, 2.0, 3.0], p=[4.0, 5.0, 6.0], S=[7.0, 8.0, 9.0])
    for i in (1, 2, 3):
        assert table.bracket(f"x{i}", f"p{i}", pt) == 1.0
    assert table.bracket("x1", "p2", pt) == 0.0
    assert table.bracket("x1", "S2", pt) == 0.0
    assert table.bracket("p1", "p2", pt) == 0.0


def test_structure_matrix_antisymmetric_random(table):
    rng = np.random.default_rng(11)
    for _ in range(100):
        pt = br.PhasePoint(x=rng.normal(size=3), p=rng.normal(size=3),
                           S=rng.normal(size=3))
        pi = table.structure_matrix(pt)
        assert np.max(np.abs(pi + pi.T)) == 0.0


def test_duplicate_pair_rejected():
    t = br.BracketTable()
    t.set("x1", "p1", lambda pt: 1.0)
    with pytest.raises(ValueError):
        t.set("p1", "x1", lambda pt: -1.0)
    with pytest.raises(ValueError):
        t.set("x1", "x1", lambda pt: 0.0)


def test_jacobi_so3_vanishes(table):
    pt = br.PhasePoint(S=[0.7, -1.3, 0.4])
    res = br.jacobi_residual(table, pt, br.coordinate("S1"), br.coordinate("S2"),
                             br.coordinate("S3"))
    assert res < 1e-10


def test_jacobi_mixed_triple_vanishes(table):
    pt = br.PhasePoint(x=[0.1, -0.4, 0.3], p=[0.2, 0.5, -0.1], S=[0.7, -1.3, 0.4])
    res = br.jacobi_residual(table, pt, br.coordinate("x1"), br.coordinate("x2"),
                             br.coordinate("S3"))
    assert res < 1e-8


def test_jacobi_constant_brackets_vanish(table):
    pt = br.PhasePoint(x=[0.1, 0.2, 0.3], p=[0.4, 0.5, 0.6], S=[0.7, 0.8, 0.9])
    res = br.jacobi_residual(table, pt, br.coordinate("x1"), br.coordinate("p1"),
                             br.coordinate("p2"))
    assert res < 1e-12


def test_jacobi_truncated_table_defect_oracle(table):
    """The spatial table with {x,S} = 0 fails Jacobi on (S^i, x^i, x^j);
    the defect equals |S^j|/(mc)^2, recorded as the measured oracle."""
    pt = br.PhasePoint(S=[0.7, -1.3, 0.4])
    res = br.jacobi_residual(table, pt, br.coordinate("S1"), br.coordinate("x1"),
                             br.coordinate("x2"))
    assert res == pytest.approx(abs(pt.S[1]), rel=1e-6)
    res2 = br.jacobi_residual(table, pt, br.coordinate("S2"), br.coordinate("x1"),
                              br.coordinate("x2"))
    assert res2 == pytest.approx(abs(pt.S[0]), rel=1e-6)


def test_flow_reproduces_precession_rhs(params, table):
    fields = pr.FieldConfig(E=[1.0, 0.5, -0.2], B=[0.3, 0.1, 0.8])
    H = br.pauli_hamiltonian_function(fields, params)
    rng = np.random.default_rng(4)
    for _ in range(20):
        pt = br.PhasePoint(x=rng.normal(size=3), p=rng.normal(size=3),
                           S=rng.normal(size=3))
        _, _, dS = br.hamiltonian_flow(table, H, pt)
        R = pr.precession_vector(fields, pt.p, params)
        assert np.max(np.abs(dS - pr.precession_rhs(pt.S, R))) < 1e-12


def test_flow_reproduces_precession_rhs_dimensional():
    params = pr.ParticleParams(e=2.0, m=3.0, c=4.0)
    table = br.standard_spin_table(params)
    fields = pr.FieldConfig(E=[0.5, -1.0, 0.2], B=[1.0, 0.0, -0.5])
    H = br.pauli_hamiltonian_function(fields, params)
    pt = br.PhasePoint(x=[1.0, 0.0, 2.0], p=[0.5, 0.3, -0.7], S=[1.2, -0.1, 0.4])
    _, _, dS = br.hamiltonian_flow(table, H, pt)
    R = pr.precession_vector(fields, pt.p, params)
    assert np.max(np.abs(dS - pr.precession_rhs(pt.S, R))) < 1e-14


def test_flow_free_particle(table, params):
    H = br.PhaseFunction(
        value=lambda pt: 0.5 * float(np.dot(pt.p, pt.p)) / params.m,
        grad=lambda pt: np.concatenate([np.zeros(3), pt.p / params.m, np.zeros(3)]))
    pt = br.PhasePoint(x=[1.0, 2.0, 3.0], p=[0.4, -0.5, 0.6], S=[0.7, 0.8, 0.9])
    dx, dp, dS = br.hamiltonian_flow(table, H, pt)
    assert np.allclose(dx, pt.p / params.m)
    assert np.allclose(dp, 0.0)
    assert np.allclose(dS, 0.0)


def test_flow_zeeman_sign(table):
    B = np.array([0.0, 0.0, 2.0])
    k = 0.7
    H = br.PhaseFunction(value=lambda pt: k * float(np.dot(pt.S, B)),
                         grad=lambda pt: np.concatenate([np.zeros(6), k * B]))
    pt = br.PhasePoint(S=[1.0, 0.0, 0.0])
    _, _, dS = br.hamiltonian_flow(table, H, pt)
    # {S^i, S^j} = eps S^k gives dS/dt = k B x S
    assert np.allclose(dS, k * np.cross(B, pt.S))


def test_casimir_vanishes(table):
    pt = br.PhasePoint(x=[0.3, 0.1, -0.2], p=[1.0, 0.0, 0.5], S=[0.7, -1.3, 0.4])
    assert br.casimir_residual(table, pt) < 1e-15
    assert br.casimir_residual(table, pt, use_fd=True) < 1e-10


def test_casimir_zero_spin(table):
    pt = br.PhasePoint()
    assert br.casimir_residual(table, pt) == 0.0


def test_xx_scaling_slope():
    pt = br.PhasePoint(S=[0.2, -0.5, 0.9])
    slope, vals = br.xx_bracket_c_scaling(lambda c: pr.ParticleParams(c=c),
                                          [10.0, 100.0, 1000.0], pt)
    assert slope == pytest.approx(-2.0, abs=0.01)
    assert vals[0] == pytest.approx(abs(pt.S[2]) / 100.0)
    assert vals[2] == pytest.approx(abs(pt.S[2]) / 1e6)


def test_phase_function_fd_gradient():
    f = br.PhaseFunction(value=lambda pt: float(np.dot(pt.x, pt.p)**2
                                                + np.dot(pt.S, pt.S)))
    pt = br.PhasePoint(x=[0.5, 1.0, -0.3], p=[0.2, -0.8, 0.4], S=[1.0, 0.1, -0.6])
    g = f.gradient(pt)
    xp = float(np.dot(pt.x, pt.p))
    expected = np.concatenate([2.0 * xp * pt.p, 2.0 * xp * pt.x, 2.0 * pt.S])
    assert np.allclose(g, expected, atol=1e-7)


def test_poisson_bracket_canonical(table):
    pt = br.PhasePoint(x=[0.1, 0.2, 0.3], p=[0.4, 0.5, 0.6], S=[0.7, 0.8, 0.9])
    f = br.coordinate("x2")
    g = br.coordinate("p2")
    assert br.poisson_bracket(table, f, g, pt) == pytest.approx(1.0)
