"""Nonrelativistic spin evolution: precession plus the field-alignment interaction.

The spin obeys a first-order flow

    dS/dt = R x S + beta (B . S) [Shat x (Bhat x Shat)],
    R = -(e/mc) { B - (1/2mc) p x E },      beta = gamma |e| / (m c),

where the second term is a double projection that pushes S toward the axis
of B: spins starting at an acute angle to B align with +B, obtuse ones with
-B, and both terms are orthogonal to S so |S| is an exact flow invariant.

Default units: hbar = c = m = 1, e = -1, |S| = sqrt(3)/2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .tensors import cross, norm, unit, angle_between


class NumericalFailure(RuntimeError):
    """Integration produced a non-finite state; carries the failing step index."""

    def __init__(self, step, message="non-finite state"):
        super().__init__(f"{message} at step {step}")
        self.step = step


@dataclass(frozen=True)
class ParticleParams:
    """Charge, mass and couplings of the spinning particle.

    beta_align = gamma_align * |e| / (m c) is always derived, never stored.
    """

    e: float = -1.0
    m: float = 1.0
    c: float = 1.0
    hbar: float = 1.0
    gamma_align: float = 0.0
    mu: float = 1.0

    def __post_init__(self):
        if self.m <= 0 or self.c <= 0 or self.hbar <= 0:
            raise ValueError("m, c, hbar must be strictly positive")
        if self.gamma_align < 0:
            raise ValueError("gamma_align must be >= 0")

    @property
    def beta_align(self):
        return self.gamma_align * abs(self.e) / (self.m * self.c)


@dataclass(frozen=True)
class FieldConfig:
    """Constant B plus either a constant E or a Coulomb field q x / |x|^3.

    A0 is the scalar-potential value entering the energy evaluators.
    """

    E: np.ndarray = field(default_factory=lambda: np.zeros(3))
    B: np.ndarray = field(default_factory=lambda: np.zeros(3))
    A0: float = 0.0
    coulomb_q: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "E", np.asarray(self.E, dtype=float))
        object.__setattr__(self, "B", np.asarray(self.B, dtype=float))

    def electric_at(self, x=None):
        """Electric field at position x (x ignored in constant mode)."""
        if self.coulomb_q is None:
            return self.E
        if x is None:
            raise ValueError("Coulomb mode needs an evaluation point")
        r = norm(x)
        if r == 0.0:
            raise ValueError("Coulomb field is singular at the origin")
        return self.coulomb_q * np.asarray(x, dtype=float) / r**3


@dataclass
class SpinState:
    S: np.ndarray
    p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    t: float = 0.0

    def __post_init__(self):
        self.S = np.asarray(self.S, dtype=float)
        self.p = np.asarray(self.p, dtype=float)


def precession_vector(fields, p, params, x=None):
    """R = -(e/mc) { B - (1/2mc) p x E }; the instantaneous precession axis/rate."""
    e, m, c = params.e, params.m, params.c
    E = fields.electric_at(x)
    return -(e / (m * c)) * (fields.B - cross(p, E) / (2.0 * m * c))


def precession_rhs(S, R):
    """dS/dt = R x S."""
    return cross(R, S)


def alignment_rhs(S, B, params, sign=1.0):
    """Alignment torque beta (B . S) [Shat x (Bhat x Shat)].

    Lies in the span of B and S, is orthogonal to S, and points toward the
    nearer pole of the B axis.  Zero field returns zero; zero spin is a
    domain error.  `sign` is a fault-injection hook used by the report
    self-test and must stay at +1 for physics.
    """
    S = np.asarray(S, dtype=float)
    B = np.asarray(B, dtype=float)
    if norm(B) == 0.0:
        return np.zeros(3)
    if norm(S) == 0.0:
        raise ValueError("alignment interaction undefined for S = 0")
    shat = unit(S)
    bhat = unit(B)
    # Shat x (Bhat x Shat) = Bhat - Shat (Shat . Bhat)
    double_proj = bhat - shat * float(np.dot(shat, bhat))
    return sign * params.beta_align * float(np.dot(B, S)) * double_proj


def spin_rhs_total(S, fields, p, params, x=None, alignment_sign=1.0):
    """Precession plus alignment; orthogonal to S, so |S| is conserved."""
    R = precession_vector(fields, p, params, x)
    out = precession_rhs(S, R)
    if params.gamma_align > 0.0:
        out = out + alignment_rhs(S, fields.B, params, sign=alignment_sign)
    return out


def rotate_rodrigues(S0, R, t):
    """Exact rotation of S0 about the axis of R by angle |R| t.

    Closed-form solution of dS/dt = R x S for constant R; R = 0 returns S0.
    """
    S0 = np.asarray(S0, dtype=float)
    w = norm(R)
    if w == 0.0:
        return S0.copy()
    k = unit(R)
    phi = w * t
    return (S0 * math.cos(phi)
            + cross(k, S0) * math.sin(phi)
            + k * float(np.dot(k, S0)) * (1.0 - math.cos(phi)))


def theta_of(S, B):
    """Angle between S and B in [0, pi]; nan when either vanishes."""
    if norm(S) == 0.0 or norm(B) == 0.0:
        return math.nan
    return angle_between(S, B)


def analytic_theta(theta0, B_mag, params, t):
    """Closed-form polar angle under pure alignment: tan(theta) decays as exp(-beta |B| t).

    theta = 0, pi/2, pi are fixed; the acute branch decays to 0, the obtuse
    branch to pi, mirroring theta -> pi - theta.
    """
    if theta0 in (0.0, math.pi) or theta0 == 0.5 * math.pi:
        return theta0
    rate = params.beta_align * abs(B_mag)
    if theta0 < 0.5 * math.pi:
        return math.atan(math.tan(theta0) * math.exp(-rate * t))
    return math.pi - math.atan(math.tan(math.pi - theta0) * math.exp(-rate * t))


def alignment_time(theta0, eps, B_mag, params):
    """Time for the angular distance to the attracting pole to shrink below eps.

    Inverted from the tan-decay law; theta0 = pi/2 sits on the invariant
    equator and never aligns (returns inf).
    """
    if theta0 == 0.5 * math.pi:
        return math.inf
    dist0 = theta0 if theta0 < 0.5 * math.pi else math.pi - theta0
    if not 0.0 < eps < dist0:
        raise ValueError("need 0 < eps < angular distance to the pole")
    rate = params.beta_align * abs(B_mag)
    if rate == 0.0:
        return math.inf
    return math.log(math.tan(dist0) / math.tan(eps)) / rate


# ---------------------------------------------------------------------------
# Trajectories

@dataclass
class SpinTrajectory:
    """Sampled spin history with per-sample angle to B and |S|."""

    t: np.ndarray
    S: np.ndarray       # shape (n_samples, 3)
    theta: np.ndarray
    smag: np.ndarray

    def smag_drift(self):
        """Max relative |S| deviation from the initial value."""
        s0 = self.smag[0]
        if s0 == 0.0:
            return 0.0
        return float(np.max(np.abs(self.smag - s0)) / s0)

    def rows(self):
        for k in range(len(self.t)):
            yield (self.t[k], self.S[k, 0], self.S[k, 1], self.S[k, 2],
                   self.theta[k], self.smag[k])


CSV_HEADER_SPIN = "t,Sx,Sy,Sz,theta,Smag"


def _rhs_scalars(fields, p, params, x, alignment_sign):
    """Precompute constants for the scalar-math integration loop."""
    R = precession_vector(fields, p, params, x)
    rx, ry, rz = float(R[0]), float(R[1]), float(R[2])
    B = fields.B
    bmag = norm(B)
    beta = params.beta_align * alignment_sign
    align_on = params.gamma_align > 0.0 and bmag > 0.0
    if align_on:
        bx, by, bz = float(B[0]), float(B[1]), float(B[2])
        bhx, bhy, bhz = bx / bmag, by / bmag, bz / bmag
    else:
        bx = by = bz = bhx = bhy = bhz = 0.0

    def rhs(sx, sy, sz):
        dx = ry * sz - rz * sy
        dy = rz * sx - rx * sz
        dz = rx * sy - ry * sx
        if align_on:
            s2 = sx * sx + sy * sy + sz * sz
            if s2 == 0.0:
                raise ValueError("alignment interaction undefined for S = 0")
            bs = bx * sx + by * sy + bz * sz
            sb_over_s2 = (bhx * sx + bhy * sy + bhz * sz) / s2
            k = beta * bs
            dx += k * (bhx - sx * sb_over_s2)
            dy += k * (bhy - sy * sb_over_s2)
            dz += k * (bhz - sz * sb_over_s2)
        return dx, dy, dz

    return rhs


def integrate_spin(state0, fields, params, dt, n_steps, scheme="rk4", x=None,
                   alignment_sign=1.0):
    """Integrate the spin flow, sampling every step.

    |S| is never renormalized: its drift is the accuracy diagnostic.
    `scheme` is "rk4" (fixed step) or "rk45" (adaptive, rtol 1e-10, sampled
    on the same time grid).  Raises NumericalFailure on non-finite states.
    """
    if dt <= 0.0 or n_steps < 1:
        raise ValueError("need dt > 0 and n_steps >= 1")
    S0 = np.asarray(state0.S, dtype=float)
    t0 = state0.t
    bhat = unit(fields.B) if norm(fields.B) > 0 else None

    if scheme == "rk45":
        ts = t0 + dt * np.arange(n_steps + 1)
        samples = _integrate_rk45(S0, fields, state0.p, params, ts, x, alignment_sign)
    elif scheme == "rk4":
        ts, samples = _integrate_rk4(S0, fields, state0.p, params, t0, dt,
                                     n_steps, x, alignment_sign)
    else:
        raise ValueError(f"unknown scheme {scheme!r}")

    smag = np.sqrt(np.sum(samples**2, axis=1))
    if bhat is not None:
        cosang = np.clip(samples @ bhat / np.where(smag == 0, 1.0, smag), -1.0, 1.0)
        theta = np.arccos(cosang)
    else:
        theta = np.full(len(ts), math.nan)
    return SpinTrajectory(t=np.asarray(ts, dtype=float), S=samples,
                          theta=theta, smag=smag)


def _integrate_rk4(S0, fields, p, params, t0, dt, n_steps, x, alignment_sign):
    rhs = _rhs_scalars(fields, p, params, x, alignment_sign)
    sx, sy, sz = float(S0[0]), float(S0[1]), float(S0[2])
    out = np.empty((n_steps + 1, 3))
    out[0] = (sx, sy, sz)
    h = dt
    for step in range(1, n_steps + 1):
        k1x, k1y, k1z = rhs(sx, sy, sz)
        k2x, k2y, k2z = rhs(sx + 0.5 * h * k1x, sy + 0.5 * h * k1y, sz + 0.5 * h * k1z)
        k3x, k3y, k3z = rhs(sx + 0.5 * h * k2x, sy + 0.5 * h * k2y, sz + 0.5 * h * k2z)
        k4x, k4y, k4z = rhs(sx + h * k3x, sy + h * k3y, sz + h * k3z)
        sx += h * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        sy += h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
        sz += h * (k1z + 2.0 * k2z + 2.0 * k3z + k4z) / 6.0
        if not (math.isfinite(sx) and math.isfinite(sy) and math.isfinite(sz)):
            raise NumericalFailure(step)
        out[step] = (sx, sy, sz)
    ts = t0 + dt * np.arange(n_steps + 1)
    return ts, out


def _integrate_rk45(S0, fields, p, params, ts, x, alignment_sign):
    from scipy.integrate import solve_ivp

    rhs = _rhs_scalars(fields, p, params, x, alignment_sign)

    def f(_t, y):
        return rhs(y[0], y[1], y[2])

    sol = solve_ivp(f, (ts[0], ts[-1]), S0, method="RK45", t_eval=ts,
                    rtol=1e-10, atol=1e-13)
    if not sol.success or not np.all(np.isfinite(sol.y)):
        raise NumericalFailure(len(sol.t), "adaptive integration failed")
    return sol.y.T.copy()


def measure_alignment_time(traj, eps):
    """First sampled time with angular distance to the attracting pole < eps.

    The attracting pole is picked from the initial hemisphere; returns None
    if the threshold is never reached in the sampled window.
    """
    th0 = traj.theta[0]
    dist = traj.theta if th0 < 0.5 * math.pi else math.pi - traj.theta
    hit = np.nonzero(dist < eps)[0]
    if len(hit) == 0:
        return None
    return float(traj.t[hit[0]])


def decay_rate_fit(traj):
    """Least-squares slope of ln tan(theta) vs t; estimates -beta |B|."""
    mask = np.isfinite(traj.theta) & (traj.theta > 1e-12) & (traj.theta < math.pi - 1e-12)
    t = traj.t[mask]
    y = np.log(np.tan(traj.theta[mask]))
    if len(t) < 2:
        return math.nan
    return float(np.polyfit(t, y, 1)[0])


# ---------------------------------------------------------------------------
# Energy evaluators (the 1/2-factor probe)

def _spin_terms(state, fields, params, x=None):
    E = fields.electric_at(x)
    sb = float(np.dot(state.S, fields.B))
    sep = float(np.dot(state.S, cross(E, state.p)))
    return sb, sep


def pauli_energy(state, fields, params, x=None):
    """Kinetic + eA0 - (e/mc)[(S,B) + (1/2mc)(S, E x p)], evaluated classically."""
    e, m, c = params.e, params.m, params.c
    kinetic = float(np.dot(state.p, state.p)) / (2.0 * m)
    sb, sep = _spin_terms(state, fields, params, x)
    return kinetic + e * fields.A0 - (e / (m * c)) * (sb + sep / (2.0 * m * c))


def covariant_energy_expanded(state, fields, params, x=None):
    """Rest energy + kinetic + eA0 - (e/mc)[(S,B) + (1/mc)(S, E x p)].

    Same S.B coefficient as the Pauli form; twice the spin-orbit coefficient.
    """
    e, m, c = params.e, params.m, params.c
    kinetic = float(np.dot(state.p, state.p)) / (2.0 * m)
    sb, sep = _spin_terms(state, fields, params, x)
    return (m * c * c + kinetic + e * fields.A0
            - (e / (m * c)) * (sb + sep / (m * c)))


def spin_orbit_coefficient_ratio(state, fields, params):
    """Ratio of the two spin-orbit couplings isolated with B = 0, A = 0.

    Exactly 1/2: the two evaluators share every factor except a power of two.
    """
    e, m, c = params.e, params.m, params.c
    _, sep = _spin_terms(state, fields, params)
    if sep == 0.0:
        raise ValueError("probe state has vanishing (S, E x p) term")
    pauli_term = -(e / (m * c)) * (sep / (2.0 * m * c))
    covariant_term = -(e / (m * c)) * (sep / (m * c))
    return pauli_term / covariant_term
