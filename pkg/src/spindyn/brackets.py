"""Poisson structures for spin phase space.

Phase space is (x, p, S) in R^9 with the standard table

    {S^i, S^j} = eps^{ijk} S^k,      {x^i, x^j} = eps^{ijk} S^k / (mc)^2,
    {x^i, p_j} = delta^i_j,          all other pairs zero.

The x-x bracket encodes the spin-induced position noncommutativity; it
scales as 1/c^2 and vanishes in the nonrelativistic limit.  Only this
spatial table is implemented; the full relativistic Poisson geometry is out
of scope, and the Jacobi defect of the truncated table (nonzero on triples
like (S^1, x^1, x^2)) is measured, not asserted away.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

LABELS = ("x1", "x2", "x3", "p1", "p2", "p3", "S1", "S2", "S3")
_LIDX = {name: k for k, name in enumerate(LABELS)}


@dataclass
class PhasePoint:
    x: np.ndarray = field(default_factory=lambda: np.zeros(3))
    p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    S: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        self.p = np.asarray(self.p, dtype=float)
        self.S = np.asarray(self.S, dtype=float)

    def coords(self):
        return np.concatenate([self.x, self.p, self.S])

    @classmethod
    def from_coords(cls, z):
        z = np.asarray(z, dtype=float)
        return cls(z[0:3], z[3:6], z[6:9])


class BracketTable:
    """Structure functions {z^A, z^B}(point), one stored per unordered pair.

    Antisymmetry holds by construction: the mirrored pair evaluates the same
    stored function with the opposite sign, and {z, z} is identically zero.
    """

    def __init__(self):
        self._pairs = {}

    def set(self, a, b, fn):
        if a == b:
            raise ValueError("diagonal brackets vanish identically")
        if (b, a) in self._pairs:
            raise ValueError(f"pair ({b}, {a}) already registered")
        self._pairs[(a, b)] = fn

    def bracket(self, a, b, point):
        """{z^a, z^b} at the point."""
        if a == b:
            return 0.0
        if (a, b) in self._pairs:
            return float(self._pairs[(a, b)](point))
        if (b, a) in self._pairs:
            return -float(self._pairs[(b, a)](point))
        return 0.0

    def structure_matrix(self, point):
        """Antisymmetric 9x9 matrix Pi^{AB} = {z^A, z^B} at the point."""
        n = len(LABELS)
        pi = np.zeros((n, n))
        for (a, b), fn in self._pairs.items():
            v = float(fn(point))
            ia, ib = _LIDX[a], _LIDX[b]
            pi[ia, ib] = v
            pi[ib, ia] = -v
        return pi


def standard_spin_table(params):
    """so(3) spin brackets + canonical (x, p) pairs + spin-induced {x, x}."""
    mc2 = (params.m * params.c) ** 2
    table = BracketTable()
    eps_cycle = {("1", "2"): 2, ("2", "3"): 0, ("1", "3"): 1}
    sign = {("1", "2"): 1.0, ("2", "3"): 1.0, ("1", "3"): -1.0}
    for (i, j), k in eps_cycle.items():
        s = sign[(i, j)]
        table.set(f"S{i}", f"S{j}", lambda pt, k=k, s=s: s * pt.S[k])
        table.set(f"x{i}", f"x{j}", lambda pt, k=k, s=s: s * pt.S[k] / mc2)
    for i in (1, 2, 3):
        table.set(f"x{i}", f"p{i}", lambda pt: 1.0)
    return table


# ---------------------------------------------------------------------------
# Phase-space functions

@dataclass
class PhaseFunction:
    """Scalar on phase space with an optional analytic gradient.

    The gradient is a length-9 array ordered like LABELS; when absent it is
    approximated by central differences with step 1e-6 * coordinate scale.
    """

    value: callable
    grad: callable | None = None
    name: str = ""

    def gradient(self, point, h_scale=1e-6):
        if self.grad is not None:
            return np.asarray(self.grad(point), dtype=float)
        z0 = point.coords()
        g = np.zeros(9)
        for a in range(9):
            h = h_scale * max(1.0, abs(z0[a]))
            zp = z0.copy()
            zm = z0.copy()
            zp[a] += h
            zm[a] -= h
            g[a] = (self.value(PhasePoint.from_coords(zp))
                    - self.value(PhasePoint.from_coords(zm))) / (2.0 * h)
        return g


def coordinate(label):
    """The coordinate function z^label with its exact gradient."""
    idx = _LIDX[label]
    e = np.zeros(9)
    e[idx] = 1.0
    return PhaseFunction(value=lambda pt, i=idx: pt.coords()[i],
                         grad=lambda pt, g=e: g, name=label)


def poisson_bracket(table, f, g, point):
    """{f, g} = grad(f) . Pi . grad(g) through the table's structure matrix."""
    pi = table.structure_matrix(point)
    return float(f.gradient(point) @ pi @ g.gradient(point))


def jacobi_residual(table, point, A, B, C):
    """|{A,{B,C}} + {B,{C,A}} + {C,{A,B}}| with inner brackets as functions.

    Inner brackets get finite-difference gradients, so the so(3) result is
    zero only to FD accuracy (~1e-10 at unit scale).
    """

    def nested(f, g):
        return PhaseFunction(value=lambda pt: poisson_bracket(table, f, g, pt))

    total = (poisson_bracket(table, A, nested(B, C), point)
             + poisson_bracket(table, B, nested(C, A), point)
             + poisson_bracket(table, C, nested(A, B), point))
    return abs(total)


def hamiltonian_flow(table, H, point):
    """Tangent (dx, dp, dS) of the Hamiltonian flow zdot^A = {z^A, z^B} dH/dz^B."""
    pi = table.structure_matrix(point)
    zdot = pi @ H.gradient(point)
    return zdot[0:3], zdot[3:6], zdot[6:9]


def casimir_residual(table, point, use_fd=False):
    """max_A |{z^A, S^2}|; S^2 is a Casimir of the spin sector, so this is 0.

    With use_fd the gradient of S^2 comes from central differences instead
    of the exact 2S.
    """
    if use_fd:
        s2 = PhaseFunction(value=lambda pt: float(np.dot(pt.S, pt.S)))
        grad = s2.gradient(point)
    else:
        grad = np.concatenate([np.zeros(6), 2.0 * point.S])
    pi = table.structure_matrix(point)
    return float(np.max(np.abs(pi @ grad)))


def pauli_hamiltonian_function(fields, params):
    """The nonrelativistic spin Hamiltonian as a PhaseFunction with exact gradient.

    H = p^2/2m + e A0(x) - (e/mc) [ (S,B) + (1/2mc)(S, E x p) ] with constant
    E, B and A0(x) = -E.x, so that E = -grad A0.
    """
    from .tensors import cross

    e, m, c = params.e, params.m, params.c
    E = fields.electric_at(None)
    B = fields.B
    k = e / (m * c)

    def value(pt):
        return (float(np.dot(pt.p, pt.p)) / (2.0 * m)
                - e * float(np.dot(E, pt.x))
                - k * (float(np.dot(pt.S, B))
                       + float(np.dot(pt.S, cross(E, pt.p))) / (2.0 * m * c)))

    def grad(pt):
        dx = -e * E
        dp = pt.p / m - k * cross(pt.S, E) / (2.0 * m * c)
        dS = -k * (B + cross(E, pt.p) / (2.0 * m * c))
        return np.concatenate([dx, dp, dS])

    return PhaseFunction(value=value, grad=grad, name="pauli")


def xx_bracket_c_scaling(params_factory, c_values, point):
    """Log-log slope of |{x^1, x^2}| against c; -2 for the spin-induced bracket."""
    vals = []
    for c in c_values:
        table = standard_spin_table(params_factory(c))
        vals.append(abs(table.bracket("x1", "x2", point)))
    logc = np.log(np.asarray(c_values, dtype=float))
    logv = np.log(np.asarray(vals))
    slope = float(np.polyfit(logc, logv, 1)[0])
    return slope, vals
