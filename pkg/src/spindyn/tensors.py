"""Small exact linear algebra: 3-vectors, Minkowski 4-tensors, Pauli/Dirac matrices.

Conventions used throughout the package:
  * metric signature (-,+,+,+), eta = diag(-1, 1, 1, 1), so p_0 = -p^0;
  * sigma^mu = (1, sigma^i), sigma_bar^mu = (-1, sigma^i);
  * gamma matrices in the Dirac representation with (gamma^0)^2 = +1, i.e.
    {gamma^mu, gamma^nu} = 2 * diag(+1,-1,-1,-1).  This is the convention
    under which the block-diagonalization identities of the quantum module
    close exactly (see tests).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ETA = np.diag([-1.0, 1.0, 1.0, 1.0])

# Clifford metric for {gamma, gamma} = 2*CLIFFORD_ETA; opposite overall sign
# to ETA so that beta_D^2 = +1 in the Dirac representation.
CLIFFORD_ETA = np.diag([1.0, -1.0, -1.0, -1.0])


# ---------------------------------------------------------------------------
# 3-vector helpers (plain ndarrays of shape (3,))

def vec3(x, y=None, z=None):
    """Build a float 3-vector from components or any length-3 sequence."""
    if y is None:
        a = np.asarray(x, dtype=float)
        if a.shape != (3,):
            raise ValueError(f"expected 3 components, got shape {a.shape}")
        return a
    return np.array([x, y, z], dtype=float)


def cross(a, b):
    """Right-handed cross product of two 3-vectors."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ])


def norm(a):
    return float(np.sqrt(np.dot(a, a)))


def unit(a):
    """a / |a|; raises on the zero vector."""
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return np.asarray(a, dtype=float) / n


def projector(v):
    """Projector N_ij = delta_ij - v_i v_j / |v|^2 onto the plane orthogonal to v.

    Satisfies N @ v = 0 and N @ N = N.
    """
    vhat = unit(v)
    return np.eye(3) - np.outer(vhat, vhat)


def angle_between(a, b):
    """Angle in [0, pi] between two nonzero 3-vectors."""
    c = float(np.dot(unit(a), unit(b)))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def levi_civita3():
    """Rank-3 Levi-Civita symbol eps[i,j,k] with eps[0,1,2] = +1."""
    eps = np.zeros((3, 3, 3))
    eps[0, 1, 2] = eps[1, 2, 0] = eps[2, 0, 1] = 1.0
    eps[0, 2, 1] = eps[2, 1, 0] = eps[1, 0, 2] = -1.0
    return eps


EPS3 = levi_civita3()


# ---------------------------------------------------------------------------
# Minkowski index gymnastics for diagonal metrics

def lower4(v, metric_diag=None):
    """Lower the index of a 4-vector; default metric eta = diag(-1,1,1,1)."""
    g = np.diag(ETA) if metric_diag is None else np.asarray(metric_diag)
    return np.asarray(v) * g


def raise4(v, metric_diag=None):
    """Raise the index of a 4-covector (diagonal metric)."""
    g = np.diag(ETA) if metric_diag is None else np.asarray(metric_diag)
    return np.asarray(v) / g


def minkowski_dot(a, b):
    """a_mu b^mu with eta = diag(-1,1,1,1)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return float(-a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3])


# ---------------------------------------------------------------------------
# Antisymmetric rank-2 spin tensor, stored as its 6 independent components

_IDX6 = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


@dataclass(frozen=True)
class SpinTensor:
    """S^{mu nu} = -S^{nu mu}, stored as (S^01, S^02, S^03, S^12, S^13, S^23).

    Antisymmetry is a property of the storage, not a runtime check.
    """

    comps: np.ndarray  # shape (6,)

    def __post_init__(self):
        c = np.asarray(self.comps, dtype=float)
        if c.shape != (6,):
            raise ValueError(f"expected 6 components, got shape {c.shape}")
        object.__setattr__(self, "comps", c)

    @classmethod
    def zero(cls):
        return cls(np.zeros(6))

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        return cls(np.array([m[i, j] for (i, j) in _IDX6]))

    def to_matrix(self):
        m = np.zeros((4, 4))
        for c, (i, j) in zip(self.comps, _IDX6):
            m[i, j] = c
            m[j, i] = -c
        return m

    def scaled(self, factor):
        return SpinTensor(self.comps * factor)

    def spatial_vector(self):
        """S^i = (1/4) eps^{ijk} S^{jk}; inverse of `from_spatial_vector`."""
        s01, s02, s03, s12, s13, s23 = self.comps
        return np.array([0.5 * s23, -0.5 * s13, 0.5 * s12])

    @classmethod
    def from_spatial_vector(cls, s):
        """Purely spatial tensor with S^{jk} = 2 eps^{jkl} s^l and S^{0i} = 0."""
        s = np.asarray(s, dtype=float)
        return cls(np.array([0.0, 0.0, 0.0, 2.0 * s[2], -2.0 * s[1], 2.0 * s[0]]))


def antisym_square(m, metric=None):
    """Full contraction A^{mu nu} A_{mu nu} of an antisymmetric matrix.

    `metric` is the covariant metric matrix used for lowering (default eta).
    """
    g = ETA if metric is None else np.asarray(metric)
    lowered = g @ m @ g.T
    return float(np.einsum("ij,ij->", m, lowered))


# ---------------------------------------------------------------------------
# Pauli and Dirac matrices

ID2 = np.eye(2, dtype=complex)

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
], dtype=complex)

# sigma^mu = (1, sigma^i), sigma_bar^mu = (-1, sigma^i)
SIGMA4 = np.concatenate([ID2[None, :, :], PAULI], axis=0)
SIGMA4_BAR = np.concatenate([-ID2[None, :, :], PAULI], axis=0)


def _dirac_gammas():
    gam = np.zeros((4, 4, 4), dtype=complex)
    gam[0][:2, :2] = ID2
    gam[0][2:, 2:] = -ID2
    for i in range(3):
        gam[i + 1][:2, 2:] = PAULI[i]
        gam[i + 1][2:, :2] = -PAULI[i]
    return gam


GAMMA = _dirac_gammas()
BETA_D = GAMMA[0]
ALPHA = np.array([GAMMA[0] @ GAMMA[i + 1] for i in range(3)])
ID4 = np.eye(4, dtype=complex)


def dirac_constants():
    """Dict of the standard matrices: gamma^mu, alpha^i, beta, sigma^mu, sigma_bar^mu."""
    return {
        "gamma": GAMMA,
        "alpha": ALPHA,
        "beta": BETA_D,
        "sigma": SIGMA4,
        "sigma_bar": SIGMA4_BAR,
    }


def dagger(m):
    return np.conjugate(np.swapaxes(m, -1, -2))


def comm(a, b):
    return a @ b - b @ a


def anticomm(a, b):
    return a @ b + b @ a


def matnorm(m):
    """Largest absolute entry; the residual norm used by the identity checks."""
    return float(np.max(np.abs(m)))
