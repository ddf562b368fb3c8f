"""Velocity dependence of the longitudinal acceleration for charges and geodesics.

Two instantaneous scenarios at prescribed exact speeds:

  * electromagnetic: dv/ds = F v with E parallel to the motion, flat space;
    the longitudinal 3-acceleration falls off as (c^2 - v^2)^{3/2};
  * Schwarzschild radial geodesic at fixed r: falls off as (c^2 - v^2)^1.

Velocity and acceleration are the ones measured by the local static
observer (orthonormal frame, proper distance per proper time).  In flat
space this reduces to the coordinate quantities d^2x/dt^2; in Schwarzschild
coordinates it is the only frame in which the sweep can reach v -> c (the
coordinate radial speed is capped at c(1 - r_s/r)).  Power-law exponents
come from a log-log least-squares fit with the residual always reported.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .geometry import MinkowskiSpacetime, SchwarzschildSpacetime, DomainError
from .tensors import EPS3


@dataclass(frozen=True)
class PowerFit:
    """Result of fitting |a_par| = amplitude * (c^2 - v^2)^exponent."""

    exponent: float
    amplitude: float
    residual: float
    n_samples: int


def em_field_matrix(E, B, e=1.0, m=1.0, c=1.0):
    """Mixed field tensor F^mu_nu scaled so that dv^mu/ds = F^mu_nu v^nu.

    The charge-to-mass coupling e/(mc) is absorbed into the matrix; the
    spatial rows carry E and the magnetic rotation, the time row the power.
    """
    E = np.asarray(E, dtype=float)
    B = np.asarray(B, dtype=float)
    F = np.zeros((4, 4))
    F[0, 1:] = E
    F[1:, 0] = E
    F[1:, 1:] = np.einsum("ijk,k->ij", EPS3, B)
    return (e / (m * c)) * F


def lorentz_rhs(F, v):
    """dv^mu/ds = F^mu_nu v^nu; preserves v^2 by antisymmetry of F_{mu nu}."""
    return F @ np.asarray(v, dtype=float)


def geodesic_rhs(spacetime, x, v):
    """dv^mu/ds = -Gamma^mu_{nu alpha} v^nu v^alpha."""
    G = spacetime.gamma(x)
    v = np.asarray(v, dtype=float)
    return -np.einsum("mab,a,b->m", G, v, v)


def norm_residual(spacetime, x, v, c):
    """|v^2 + c^2| for the proper-time normalization v^2 = -c^2."""
    g = spacetime.metric_diag(x)
    return abs(float(np.sum(g * v * v)) + c * c)


def boosted_flat_state(speed, direction, c=1.0):
    """Flat-space four-velocity with exact spatial speed along `direction`."""
    if not 0.0 <= speed < c:
        raise ValueError("need 0 <= v < c")
    n = np.asarray(direction, dtype=float)
    n = n / np.sqrt(np.dot(n, n))
    gamma = 1.0 / np.sqrt(1.0 - (speed / c) ** 2)
    v = np.empty(4)
    v[0] = gamma * c
    v[1:] = gamma * speed * n
    return v


def radial_state(spacetime, r, v_local, c=1.0, outgoing=True):
    """Radial Schwarzschild four-velocity with local static-frame speed v_local."""
    if not 0.0 <= v_local < c:
        raise ValueError("need 0 <= v < c")
    f = 1.0 - spacetime.r_s / r
    if f <= 0.0:
        raise DomainError("inside the horizon")
    gamma = 1.0 / np.sqrt(1.0 - (v_local / c) ** 2)
    v = np.zeros(4)
    v[0] = c * gamma / np.sqrt(f)
    v[1] = (1.0 if outgoing else -1.0) * gamma * np.sqrt(f) * v_local
    return v


def circular_orbit_state(spacetime, r, c=1.0):
    """Timelike circular geodesic in the equatorial plane (exists for r > 1.5 r_s)."""
    rs = spacetime.r_s
    denom = 1.0 - 1.5 * rs / r
    if denom <= 0.0:
        raise DomainError("no timelike circular orbit at this radius")
    w = np.sqrt(rs / (2.0 * r**3))  # d phi / d x0
    v0 = c / np.sqrt(denom)
    return np.array([v0, 0.0, 0.0, w * v0])


def static_frame_acceleration(spacetime, x, v, vdot, c=1.0):
    """3-velocity and 3-acceleration in the local static orthonormal frame.

    Returns (a, a_par, v3): the frame components of the acceleration, its
    projection on the direction of motion, and the frame 3-velocity.  For
    |v3| = 0 the projection convention is a_par = |a|.
    """
    g = spacetime.metric_diag(x)
    dg = spacetime.dmetric_diag(x)
    v = np.asarray(v, dtype=float)
    vdot = np.asarray(vdot, dtype=float)
    gdot = v @ dg  # d g_ii / ds along the worldline
    scale = np.sqrt(g[1:])
    lapse = np.sqrt(-g[0])
    scale_dot = gdot[1:] / (2.0 * scale)
    lapse_dot = -gdot[0] / (2.0 * lapse)
    denom = lapse * v[0]
    v3 = c * scale * v[1:] / denom
    v3_dot = c * ((scale_dot * v[1:] + scale * vdot[1:]) / denom
                  - scale * v[1:] * (lapse_dot * v[0] + lapse * vdot[0]) / denom**2)
    dT_ds = denom / c
    a = v3_dot / dT_ds
    speed = float(np.sqrt(np.dot(v3, v3)))
    if speed == 0.0:
        a_par = float(np.sqrt(np.dot(a, a)))
    else:
        a_par = float(np.dot(a, v3) / speed)
    return a, a_par, v3


def em_parallel_sweep(speeds, E_mag=1.0, e=1.0, m=1.0, c=1.0):
    """(v, a_par) samples for E parallel to the motion in flat space."""
    flat = MinkowskiSpacetime()
    F = em_field_matrix([E_mag, 0.0, 0.0], [0.0, 0.0, 0.0], e=e, m=m, c=c)
    samples = []
    for v in speeds:
        state = boosted_flat_state(v, [1.0, 0.0, 0.0], c=c)
        vdot = lorentz_rhs(F, state)
        _, a_par, v3 = static_frame_acceleration(flat, np.zeros(4), state, vdot, c=c)
        samples.append((float(np.sqrt(v3 @ v3)), a_par))
    return samples


def geodesic_radial_sweep(speeds, r_over_rs=10.0, r_s=2.0, c=1.0):
    """(v, a_par) samples for radial motion at fixed r in Schwarzschild."""
    st = SchwarzschildSpacetime(r_s)
    r = r_over_rs * r_s
    x = np.array([0.0, r, 0.5 * np.pi, 0.0])
    samples = []
    for v in speeds:
        state = radial_state(st, r, v, c=c, outgoing=True)
        vdot = geodesic_rhs(st, x, state)
        _, a_par, v3 = static_frame_acceleration(st, x, state, vdot, c=c)
        samples.append((float(np.sqrt(v3 @ v3)), a_par))
    return samples


def synthetic_sweep(speeds, exponent, amplitude=1.0, c=1.0):
    """Exact power-law samples a_par = amplitude (c^2 - v^2)^exponent (self-test)."""
    return [(float(v), amplitude * (c * c - v * v) ** exponent) for v in speeds]


def default_speed_grid(c=1.0, n=23, lo=0.90, hi=0.999):
    return list(np.linspace(lo * c, hi * c, n))


def fit_exponent(samples, c=1.0):
    """Least-squares slope of ln|a_par| against ln(c^2 - v^2).

    Requires at least 5 distinct speeds in (0, c) with nonzero a_par.
    """
    if len(samples) < 5:
        raise ValueError("need at least 5 samples")
    v = np.array([s[0] for s in samples], dtype=float)
    a = np.array([s[1] for s in samples], dtype=float)
    if np.any((v <= 0.0) | (v >= c)):
        raise ValueError("speeds must satisfy 0 < v < c")
    if np.any(a == 0.0):
        raise ValueError("a_par must be nonzero")
    if len(np.unique(v)) < len(v):
        raise ValueError("degenerate samples: repeated speeds")
    xlog = np.log(c * c - v * v)
    ylog = np.log(np.abs(a))
    slope, intercept = np.polyfit(xlog, ylog, 1)
    resid = float(np.sqrt(np.mean((ylog - (slope * xlog + intercept)) ** 2)))
    return PowerFit(exponent=float(slope), amplitude=float(np.exp(intercept)),
                    residual=resid, n_samples=len(v))


def integrate_worldline(rhs, x0, v0, ds, n_steps):
    """Fixed-step RK4 for (x, v) worldlines; returns (xs, vs) with every step sampled."""
    y = np.concatenate([np.asarray(x0, float), np.asarray(v0, float)])

    def f(y):
        return np.concatenate([y[4:], rhs(y[:4], y[4:])])

    xs = np.empty((n_steps + 1, 4))
    vs = np.empty((n_steps + 1, 4))
    xs[0], vs[0] = y[:4], y[4:]
    for k in range(1, n_steps + 1):
        k1 = f(y)
        k2 = f(y + 0.5 * ds * k1)
        k3 = f(y + 0.5 * ds * k2)
        k4 = f(y + ds * k3)
        y = y + ds * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        xs[k], vs[k] = y[:4], y[4:]
    return xs, vs
