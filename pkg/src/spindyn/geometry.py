"""Spacetime evaluators: metric, Christoffels, curvature.

Coordinates are (x0, r, theta, phi) with x0 = c t; the Schwarzschild metric
is diag(-f, 1/f, r^2, r^2 sin^2 theta) with f = 1 - r_s/r, exterior only.
Christoffels are closed form; the Riemann tensor is assembled from central
finite differences of the Christoffels (the Kretschmann scalar
12 r_s^2 / r^6 serves as the independent curvature oracle).
"""

from __future__ import annotations

import numpy as np


class DomainError(ValueError):
    """Evaluation point outside the chart (horizon, axis, ...)."""


class MinkowskiSpacetime:
    """Flat spacetime in Cartesian coordinates: eta, zero connection, zero curvature."""

    r_s = 0.0
    flat = True

    def metric_diag(self, x):
        return np.array([-1.0, 1.0, 1.0, 1.0])

    def dmetric_diag(self, x):
        return np.zeros((4, 4))

    def gamma(self, x):
        return np.zeros((4, 4, 4))

    def riemann_lowered(self, x, h_scale=1e-6):
        return np.zeros((4, 4, 4, 4))

    def riemann_grad(self, x, h_scale=1e-6):
        return np.zeros((4, 4, 4, 4)), np.zeros((4, 4, 4, 4, 4))

    def kretschmann(self, x):
        return 0.0


def _sch_gamma(r_s, r, theta):
    """Closed-form Schwarzschild Christoffels, vectorized over r and theta."""
    r = np.asarray(r, dtype=float)
    theta = np.asarray(theta, dtype=float)
    shape = np.broadcast(r, theta).shape
    G = np.zeros(shape + (4, 4, 4))
    f = 1.0 - r_s / r
    fp = r_s / r**2
    sin_t = np.sin(theta)
    cos_t = np.cos(theta)
    G[..., 0, 0, 1] = G[..., 0, 1, 0] = fp / (2.0 * f)
    G[..., 1, 0, 0] = 0.5 * f * fp
    G[..., 1, 1, 1] = -fp / (2.0 * f)
    G[..., 1, 2, 2] = -r * f
    G[..., 1, 3, 3] = -r * f * sin_t**2
    G[..., 2, 1, 2] = G[..., 2, 2, 1] = 1.0 / r
    G[..., 2, 3, 3] = -sin_t * cos_t
    G[..., 3, 1, 3] = G[..., 3, 3, 1] = 1.0 / r
    G[..., 3, 2, 3] = G[..., 3, 3, 2] = cos_t / sin_t
    return G


def _riemann_from_group(G_plus_r, G_minus_r, G_plus_t, G_minus_t, G_center,
                        h_r, h_t, g_diag):
    """Assemble R_{rho sigma mu nu} from Christoffels at the 5-point stencil.

    All inputs may carry leading batch dimensions.
    """
    shape = G_center.shape[:-3]
    dG = np.zeros(shape + (4, 4, 4, 4))
    hr = np.asarray(h_r)[..., None, None, None]
    ht = np.asarray(h_t)[..., None, None, None]
    dG[..., 1, :, :, :] = (G_plus_r - G_minus_r) / (2.0 * hr)
    dG[..., 2, :, :, :] = (G_plus_t - G_minus_t) / (2.0 * ht)
    # R^rho_{sigma mu nu} = d_mu G^rho_{nu sigma} - d_nu G^rho_{mu sigma}
    #                      + G^rho_{mu l} G^l_{nu sigma} - G^rho_{nu l} G^l_{mu sigma}
    term1 = np.einsum("...mrns->...rsmn", dG)
    term2 = np.einsum("...nrms->...rsmn", dG)
    term3 = np.einsum("...rml,...lns->...rsmn", G_center, G_center)
    term4 = np.einsum("...rnl,...lms->...rsmn", G_center, G_center)
    upper = term1 - term2 + term3 - term4
    return g_diag[..., :, None, None, None] * upper


class SchwarzschildSpacetime:
    """Exterior Schwarzschild chart with closed-form connection.

    All evaluators are pure; the instance is safe to share between threads.
    """

    flat = False

    def __init__(self, r_s):
        if r_s < 0:
            raise ValueError("r_s must be non-negative")
        self.r_s = float(r_s)

    def _check(self, x):
        r, theta = float(x[1]), float(x[2])
        if r <= self.r_s:
            raise DomainError(f"r = {r} is inside the horizon r_s = {self.r_s}")
        if abs(np.sin(theta)) < 1e-6:
            raise DomainError("too close to the polar coordinate singularity")
        return r, theta

    def metric_diag(self, x):
        r, theta = self._check(x)
        f = 1.0 - self.r_s / r
        return np.array([-f, 1.0 / f, r**2, (r * np.sin(theta)) ** 2])

    def metric_matrix(self, x):
        return np.diag(self.metric_diag(x))

    def dmetric_diag(self, x):
        """dg[k, i] = partial_k g_ii (analytic; only k = r, theta are nonzero)."""
        r, theta = self._check(x)
        dg = np.zeros((4, 4))
        fp = self.r_s / r**2
        f = 1.0 - self.r_s / r
        sin_t, cos_t = np.sin(theta), np.cos(theta)
        dg[1] = [-fp, -fp / f**2, 2.0 * r, 2.0 * r * sin_t**2]
        dg[2, 3] = 2.0 * r**2 * sin_t * cos_t
        return dg

    def gamma(self, x):
        r, theta = self._check(x)
        return _sch_gamma(self.r_s, r, theta)

    def riemann_lowered(self, x, h_scale=1e-6):
        """R_{mu nu alpha beta} from central differences of the Christoffels."""
        r, theta = self._check(x)
        h_r = h_scale * r
        h_t = h_scale
        rs_pts = np.array([r + h_r, r - h_r, r, r, r])
        th_pts = np.array([theta, theta, theta + h_t, theta - h_t, theta])
        G = _sch_gamma(self.r_s, rs_pts, th_pts)
        return _riemann_from_group(G[0], G[1], G[2], G[3], G[4],
                                   h_r, h_t, self.metric_diag(x))

    def riemann_grad(self, x, h_scale=1e-6):
        """Riemann at x plus its coordinate partials dR[k] = partial_k R.

        Only the r and theta slots of dR are nonzero (static, spherically
        symmetric chart).  One vectorized Christoffel evaluation covers the
        full 5x5 stencil.
        """
        r, theta = self._check(x)
        h_r = h_scale * r
        h_t = h_scale
        # outer stencil for dR: center, r+/-, theta+/-
        centers_r = np.array([r, r + h_r, r - h_r, r, r])
        centers_t = np.array([theta, theta, theta, theta + h_t, theta - h_t])
        # inner stencil per center for dGamma
        in_r = np.stack([centers_r + h_r, centers_r - h_r,
                         centers_r, centers_r, centers_r], axis=1)
        in_t = np.stack([centers_t, centers_t,
                         centers_t + h_t, centers_t - h_t, centers_t], axis=1)
        G = _sch_gamma(self.r_s, in_r, in_t)  # (5, 5, 4, 4, 4)
        f = 1.0 - self.r_s / centers_r
        g_diags = np.stack([-f, 1.0 / f, centers_r**2,
                            (centers_r * np.sin(centers_t)) ** 2], axis=1)
        R = _riemann_from_group(G[:, 0], G[:, 1], G[:, 2], G[:, 3], G[:, 4],
                                h_r, h_t, g_diags)
        dR = np.zeros((4, 4, 4, 4, 4))
        dR[1] = (R[1] - R[2]) / (2.0 * h_r)
        dR[2] = (R[3] - R[4]) / (2.0 * h_t)
        return R[0], dR

    def kretschmann(self, x):
        """Full curvature-squared invariant from the finite-difference Riemann."""
        R = self.riemann_lowered(x)
        inv = 1.0 / self.metric_diag(x)
        R_up = (R * inv[:, None, None, None] * inv[None, :, None, None]
                * inv[None, None, :, None] * inv[None, None, None, :])
        return float(np.einsum("abcd,abcd->", R, R_up))

    def kretschmann_exact(self, x):
        """Closed-form 12 r_s^2 / r^6, the oracle for the numerical curvature."""
        r, _ = self._check(x)
        return 12.0 * self.r_s**2 / r**6


def christoffel_fd_residual(spacetime, x, h_scale=1e-7):
    """Max relative gap between closed-form Christoffels and the metric-derivative route.

    Rebuilds Gamma from central differences of the metric and compares; this
    is the independent validation of the closed-form connection.
    """
    g = spacetime.metric_matrix(x) if hasattr(spacetime, "metric_matrix") \
        else np.diag(spacetime.metric_diag(x))
    ginv = np.linalg.inv(g)
    dg = np.zeros((4, 4, 4))
    for k in range(4):
        h = h_scale * max(1.0, abs(float(x[k])))
        xp = np.array(x, dtype=float)
        xm = np.array(x, dtype=float)
        xp[k] += h
        xm[k] -= h
        dg[k] = (np.diag(spacetime.metric_diag(xp))
                 - np.diag(spacetime.metric_diag(xm))) / (2.0 * h)
    gamma_fd = 0.5 * np.einsum("mn,anb->mab", ginv, dg)
    gamma_fd += 0.5 * np.einsum("mn,bna->mab", ginv, dg)
    gamma_fd -= 0.5 * np.einsum("mn,nab->mab", ginv, dg)
    gamma_cf = spacetime.gamma(x)
    scale = max(1.0, float(np.max(np.abs(gamma_cf))))
    return float(np.max(np.abs(gamma_fd - gamma_cf))) / scale
