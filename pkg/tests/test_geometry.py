import math

import numpy as np
import pytest

from spindyn import geometry as geo


@pytest.fixture
def st():
    return geo.SchwarzschildSpacetime(2.0)


def x_at(r, theta=0.5 * math.pi, phi=0.3):
    return np.array([0.0, r, theta, phi])


def test_metric_components(st):
    x = x_at(8.0)
    g = st.metric_diag(x)
    f = 1.0 - 2.0 / 8.0
    assert np.allclose(g, [-f, 1.0 / f, 64.0, 64.0])


def test_dmetric_matches_finite_differences(st):
    x = x_at(7.3, theta=1.1)
    dg = st.dmetric_diag(x)
    for k in range(4):
        h = 1e-6 * max(1.0, abs(x[k]))
        xp, xm = x.copy(), x.copy()
        xp[k] += h
        xm[k] -= h
        fd = (st.metric_diag(xp) - st.metric_diag(xm)) / (2.0 * h)
        assert np.allclose(dg[k], fd, atol=1e-5, rtol=1e-6)


def test_christoffel_against_metric_derivatives(st):
    for r, th in ((6.0, 0.5 * math.pi), (11.0, 1.0), (40.0, 2.0)):
        assert geo.christoffel_fd_residual(st, x_at(r, th)) < 1e-6


def test_kretschmann_oracle(st):
    for ratio in (3.0, 10.0, 100.0):
        x = x_at(ratio * st.r_s)
        rel = abs(st.kretschmann(x) / st.kretschmann_exact(x) - 1.0)
        assert rel < 1e-6


def test_riemann_symmetries(st):
    x = x_at(7.3, theta=1.1)
    R = st.riemann_lowered(x)
    scale = np.max(np.abs(R))
    assert np.max(np.abs(R + np.swapaxes(R, 0, 1))) < 1e-8 * max(scale, 1.0)
    assert np.max(np.abs(R + np.swapaxes(R, 2, 3))) == 0.0  # exact by construction
    assert np.max(np.abs(R - np.transpose(R, (2, 3, 0, 1)))) < 1e-8 * max(scale, 1.0)


def test_riemann_first_bianchi(st):
    x = x_at(5.5, theta=0.9)
    R = st.riemann_lowered(x)
    cyc = R + np.transpose(R, (0, 2, 3, 1)) + np.transpose(R, (0, 3, 1, 2))
    assert np.max(np.abs(cyc)) < 1e-8 * max(np.max(np.abs(R)), 1.0)


def test_flat_limit_riemann_vanishes():
    st0 = geo.SchwarzschildSpacetime(0.0)
    R = st0.riemann_lowered(x_at(9.0, theta=1.2))
    assert np.max(np.abs(R)) < 1e-8


def test_minkowski_spacetime_trivial():
    flat = geo.MinkowskiSpacetime()
    x = np.array([1.0, 2.0, 3.0, 4.0])
    assert np.allclose(flat.metric_diag(x), [-1, 1, 1, 1])
    assert np.max(np.abs(flat.gamma(x))) == 0.0
    assert np.max(np.abs(flat.riemann_lowered(x))) == 0.0
    assert flat.kretschmann(x) == 0.0


def test_horizon_domain_error(st):
    with pytest.raises(geo.DomainError):
        st.metric_diag(x_at(1.9))
    with pytest.raises(geo.DomainError):
        st.gamma(x_at(2.0))


def test_axis_domain_error(st):
    with pytest.raises(geo.DomainError):
        st.metric_diag(x_at(10.0, theta=1e-9))


def test_riemann_grad_consistency(st):
    """dR from the nested stencil agrees with differencing riemann_lowered."""
    x = x_at(9.0, theta=1.0)
    R, dR = st.riemann_grad(x)
    assert np.allclose(R, st.riemann_lowered(x))
    assert np.max(np.abs(dR[0])) == 0.0
    assert np.max(np.abs(dR[3])) == 0.0
    h = 1e-5 * x[1]
    xp, xm = x.copy(), x.copy()
    xp[1] += h
    xm[1] -= h
    fd = (st.riemann_lowered(xp) - st.riemann_lowered(xm)) / (2.0 * h)
    scale = max(np.max(np.abs(fd)), 1e-12)
    assert np.max(np.abs(dR[1] - fd)) < 1e-4 * scale


def test_negative_rs_rejected():
    with pytest.raises(ValueError):
        geo.SchwarzschildSpacetime(-1.0)
