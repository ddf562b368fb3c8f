"""Figure rendering for the CLI report paths (PNG files next to the CSV output)."""

from __future__ import annotations

import math

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np


def plot_spin_trajectory(traj, path):
    """Spin components, angle to B, and |S| drift."""
    fig, axes = plt.subplots(3, 1, figsize=(7, 8), sharex=True)
    for i, label in enumerate(("Sx", "Sy", "Sz")):
        axes[0].plot(traj.t, traj.S[:, i], label=label, lw=0.9)
    axes[0].set_ylabel("spin components")
    axes[0].legend(loc="upper right", fontsize=8)
    axes[1].plot(traj.t, traj.theta, color="tab:red", lw=0.9)
    axes[1].set_ylabel("angle to B [rad]")
    drift = np.abs(traj.smag - traj.smag[0]) / max(traj.smag[0], 1e-300)
    axes[2].semilogy(traj.t, np.maximum(drift, 1e-18), color="tab:gray", lw=0.9)
    axes[2].set_ylabel("|S| rel. drift")
    axes[2].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_accel_sweep(samples, fit, c, path):
    """Log-log longitudinal acceleration against c^2 - v^2 with the fitted law."""
    v = np.array([s[0] for s in samples])
    a = np.abs(np.array([s[1] for s in samples]))
    gap = c * c - v * v
    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.loglog(gap, a, "o", ms=4, label="samples")
    xs = np.linspace(gap.min(), gap.max(), 200)
    ax.loglog(xs, fit.amplitude * xs**fit.exponent, "-", lw=1,
              label=f"fit: k = {fit.exponent:.4f}")
    ax.set_xlabel("c^2 - v^2")
    ax.set_ylabel("|a_par|")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_body_trajectory(traj, path):
    """Orbit radius and the constraint drifts along the worldline."""
    fig, axes = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
    axes[0].plot(traj.tau, traj.x[:, 1], lw=0.9)
    axes[0].set_ylabel("r")
    for series, label in ((traj.spin_sq, "|S.S drift|"),
                          (traj.mass_shell, "|mass shell drift|")):
        d = np.abs(series - series[0])
        scale = max(abs(series[0]), 1.0)
        axes[1].semilogy(traj.tau, np.maximum(d / scale, 1e-18), lw=0.9, label=label)
    ssc_norm = np.sqrt(np.sum(traj.ssc**2, axis=1))
    axes[1].semilogy(traj.tau, np.maximum(ssc_norm, 1e-18), lw=0.9,
                     label="|S.P| monitor")
    axes[1].set_ylabel("diagnostics")
    axes[1].set_xlabel("tau")
    axes[1].legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_check_report(report, path, title=None):
    """Residual-to-tolerance ratios, one bar per check."""
    names = [it.name for it in report.items]
    ratios = [max(it.residual / it.tol, 1e-18) if it.tol > 0 else 1e-18
              for it in report.items]
    colors = ["tab:blue" if it.passed else "tab:red" for it in report.items]
    fig, ax = plt.subplots(figsize=(7, 0.32 * len(names) + 1.6))
    ax.barh(range(len(names)), ratios, color=colors, log=True)
    ax.axvline(1.0, color="k", lw=1, ls="--")
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=7)
    ax.set_xlabel("residual / tolerance")
    if title:
        ax.set_title(title)
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_packet_series(series, path, detrend=True):
    """Position expectation of a packet run, optionally detrended."""
    y = series.x_mean
    if detrend:
        coeffs = np.polyfit(series.t, y, 1)
        y = y - np.polyval(coeffs, series.t)
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(series.t, y, lw=0.7)
    ax.set_xlabel("t")
    ax.set_ylabel("<x> (detrended)" if detrend else "<x>")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_acceptance(suite, path):
    """One bar per acceptance check across all criteria."""
    names = []
    ratios = []
    colors = []
    for number, _, rep in suite.reports:
        for it in rep.items:
            names.append(f"[{number}] {it.name}")
            ratios.append(max(it.residual / it.tol, 1e-18) if it.tol > 0 else 1e-18)
            colors.append("tab:blue" if it.passed else "tab:red")
    fig, ax = plt.subplots(figsize=(8, 0.28 * len(names) + 1.8))
    ax.barh(range(len(names)), ratios, color=colors, log=True)
    ax.axvline(1.0, color="k", lw=1, ls="--")
    ax.set_yticks(range(len(names)))
    ax.set_yticklabels(names, fontsize=6.5)
    ax.set_xlabel("residual / tolerance")
    ax.invert_yaxis()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
