import math

import numpy as np
import pytest

from spindyn import tensors as T


def test_cross_basis():
    assert np.allclose(T.cross([1, 0, 0], [0, 1, 0]), [0, 0, 1])


def test_cross_self_is_zero():
    a = np.array([0.3, -1.2, 2.0])
    assert np.allclose(T.cross(a, a), 0.0)


def test_cross_hand_expansion():
    th = math.pi / 3
    out = T.cross([0, 0, 1], [math.sin(th), 0, math.cos(th)])
    assert np.allclose(out, [0, math.sin(th), 0], atol=1e-15)


def test_cross_antisymmetry_random():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = rng.normal(size=3), rng.normal(size=3)
        assert np.allclose(T.cross(a, b), -T.cross(b, a))
        assert abs(np.dot(T.cross(a, b), a)) < 1e-12
        assert abs(np.dot(T.cross(a, b), b)) < 1e-12


def test_projector_axis():
    assert np.allclose(T.projector([0, 0, 1]), np.diag([1.0, 1.0, 0.0]))


def test_projector_kills_v():
    v = np.array([1.0, 2.0, 3.0])
    assert np.allclose(T.projector(v) @ v, 0.0, atol=1e-15)


def test_projector_idempotent():
    N = T.projector([1.0, -1.0, 2.0])
    assert np.allclose(N @ N, N, atol=1e-15)


def test_projector_spectrum():
    rng = np.random.default_rng(1)
    for _ in range(10):
        v = rng.normal(size=3)
        N = T.projector(v)
        assert abs(np.trace(N) - 2.0) < 1e-12
        assert np.allclose(N @ v, 0.0, atol=1e-12 * np.linalg.norm(v))


def test_projector_zero_vector_raises():
    with pytest.raises(ValueError):
        T.projector([0.0, 0.0, 0.0])


def test_levi_civita_contraction_identity():
    eps = T.EPS3
    for j in range(3):
        for k in range(3):
            for m in range(3):
                for n in range(3):
                    lhs = sum(eps[i, j, k] * eps[i, m, n] for i in range(3))
                    rhs = (j == m) * (k == n) - (j == n) * (k == m)
                    assert lhs == rhs


def test_spin_tensor_single_component():
    s = T.SpinTensor(np.array([0.0, 0.0, 0.0, 2.0, 0.0, 0.0]))  # S^12 = 2
    assert np.allclose(s.spatial_vector(), [0, 0, 1])


def test_spin_tensor_zero():
    assert np.allclose(T.SpinTensor.zero().spatial_vector(), 0.0)


def test_spin_tensor_round_trip():
    v = np.array([0.4, -1.1, 0.7])
    s = T.SpinTensor.from_spatial_vector(v)
    assert np.allclose(s.spatial_vector(), v)
    assert np.allclose(s.comps[:3], 0.0)  # boost block stays empty
    m = s.to_matrix()
    assert np.allclose(m, -m.T)
    assert np.allclose(T.SpinTensor.from_matrix(m).comps, s.comps)


def test_pauli_commutator():
    lhs = T.PAULI[0] @ T.PAULI[1] - T.PAULI[1] @ T.PAULI[0]
    assert T.matnorm(lhs - 2j * T.PAULI[2]) < 1e-15


def test_beta_squares_to_one():
    assert T.matnorm(T.BETA_D @ T.BETA_D - T.ID4) == 0.0


def test_alpha_anticommutators():
    for i in range(3):
        for j in range(3):
            ac = T.anticomm(T.ALPHA[i], T.ALPHA[j])
            assert T.matnorm(ac - 2.0 * (i == j) * T.ID4) < 1e-15


def test_clifford_closure_all_pairs():
    for mu in range(4):
        for nu in range(4):
            ac = T.anticomm(T.GAMMA[mu], T.GAMMA[nu])
            assert T.matnorm(ac - 2.0 * T.CLIFFORD_ETA[mu, nu] * T.ID4) < 1e-15


def test_gamma_hermiticity():
    assert T.matnorm(T.dagger(T.GAMMA[0]) - T.GAMMA[0]) == 0.0
    for i in (1, 2, 3):
        assert T.matnorm(T.dagger(T.GAMMA[i]) + T.GAMMA[i]) == 0.0


def test_sigma_four_vectors():
    assert np.allclose(T.SIGMA4[0], np.eye(2))
    assert np.allclose(T.SIGMA4_BAR[0], -np.eye(2))
    for i in range(3):
        assert np.allclose(T.SIGMA4[i + 1], T.PAULI[i])
        assert np.allclose(T.SIGMA4_BAR[i + 1], T.PAULI[i])


def test_index_raise_lower_round_trip():
    v = np.array([1.5, -0.2, 0.7, 2.0])
    assert np.allclose(T.raise4(T.lower4(v)), v)
    assert T.minkowski_dot(v, v) == pytest.approx(-v[0]**2 + np.sum(v[1:]**2))


def test_antisym_square_flat():
    s = T.SpinTensor.from_spatial_vector([0.3, -0.4, 0.5])
    m = s.to_matrix()
    # purely spatial block: contraction is 2 sum of squares = 8 |s|^2
    assert T.antisym_square(m) == pytest.approx(8.0 * (0.3**2 + 0.4**2 + 0.5**2))


def test_vec3_validation():
    with pytest.raises(ValueError):
        T.vec3([1.0, 2.0])
    assert np.allclose(T.vec3(1, 2, 3), [1.0, 2.0, 3.0])
