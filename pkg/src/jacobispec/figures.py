"""Figure rendering for the report-producing commands.

Everything is written straight to image files (Agg backend, no display).
Each renderer takes the same data structures the delimited outputs are built
from, so a report and its figure always agree.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_PNG_META = {"Software": None}  # keep output bytes reproducible


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=150, metadata=_PNG_META)
    plt.close(fig)
    return path


def _cassini_contour(ax, radius_sq: float, **kwargs):
    """Level curve |lam^2 - 4| = radius_sq, drawn from a dense grid."""
    if radius_sq <= 0:
        return
    half = math.sqrt(2.0 + math.sqrt(4.0 + radius_sq))  # outer reach of the oval
    xs = np.linspace(-half * 1.15, half * 1.15, 400)
    ys = np.linspace(-half * 1.15, half * 1.15, 400)
    X, Y = np.meshgrid(xs, ys)
    lam = X + 1j * Y
    ax.contour(X, Y, np.abs(lam * lam - 4.0), levels=[radius_sq], **kwargs)


def render_spectrum_figure(report: dict, path: str | Path) -> Path:
    """Eigenvalues in the spectral plane with the enclosure ovals."""
    fig, ax = plt.subplots(figsize=(7.0, 5.0))
    ax.plot([-2, 2], [0, 0], color="black", lw=2.5, solid_capstyle="round", label="essential spectrum")

    Delta = report["operator"]["Delta"]
    if Delta > 0:
        _cassini_contour(ax, (2.0 * Delta / math.log(2.0)) ** 2, colors="tab:orange",
                         linestyles="--", linewidths=1.0)
        ax.plot([], [], color="tab:orange", ls="--", lw=1.0, label="Cassini enclosure")
    tn = report["operator"]["trace_norm"]
    if report["operator"]["schroedinger"] and tn > 0:
        _cassini_contour(ax, 4.0 / math.log(2.0) ** 2 * tn * tn, colors="tab:green",
                         linestyles=":", linewidths=1.0)
        ax.plot([], [], color="tab:green", ls=":", lw=1.0, label="Birman-Schwinger oval")

    if report["zeros"]:
        xs = [zr["lambda"]["re"] for zr in report["zeros"]]
        ys = [zr["lambda"]["im"] for zr in report["zeros"]]
        sizes = [28 + 22 * (zr["mult"] - 1) for zr in report["zeros"]]
        ax.scatter(xs, ys, s=sizes, color="tab:red", zorder=5, label="eigenvalues")
    ax.set_xlabel(r"Re $\lambda$")
    ax.set_ylabel(r"Im $\lambda$")
    ax.set_title("discrete spectrum")
    ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal", adjustable="datalim")
    ax.grid(alpha=0.25)
    fig.tight_layout()
    return _save(fig, Path(path))


def render_step_roots_figure(n: int, h: float, seeds: Sequence[complex],
                             roots, path: str | Path) -> Path:
    """Root polynomial picture: seeds and polished roots in the zeta plane,
    admissible eigenvalues in the spectral plane."""
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11.0, 4.6))

    th = np.linspace(0, 2 * math.pi, 200)
    ax1.plot(np.cos(th), np.sin(th), color="gray", lw=0.8)
    if seeds:
        ax1.scatter([s.real for s in seeds], [s.imag for s in seeds], s=10,
                    color="tab:blue", marker="x", label="binomial seeds")
    if roots:
        ax1.scatter([r.zeta.real for r in roots], [r.zeta.imag for r in roots], s=12,
                    color="tab:red", label="polished roots")
    ax1.set_title(f"root polynomial, n={n}, h={h:g}")
    ax1.set_xlabel(r"Re $\zeta$")
    ax1.set_ylabel(r"Im $\zeta$")
    ax1.set_aspect("equal", adjustable="datalim")
    ax1.legend(fontsize=8)
    ax1.grid(alpha=0.25)

    ax2.plot([-2, 2], [0, 0], color="black", lw=2.5, solid_capstyle="round")
    adm = [r for r in roots if r.admissible]
    rej = [r for r in roots if not r.admissible]
    if adm:
        ax2.scatter([r.lam.real for r in adm], [r.lam.imag for r in adm], s=14,
                    color="tab:red", label="admissible")
    if rej:
        ax2.scatter([r.lam.real for r in rej], [r.lam.imag for r in rej], s=10,
                    color="lightgray", label="rejected")
    ax2.axhline(h, color="tab:purple", lw=0.8, ls="--", label="Im = h")
    ax2.set_title("eigenvalue candidates")
    ax2.set_xlabel(r"Re $\lambda$")
    ax2.set_ylabel(r"Im $\lambda$")
    ax2.legend(fontsize=8)
    ax2.grid(alpha=0.25)
    fig.tight_layout()
    return _save(fig, Path(path))


def render_sharpness_figure(rows: Sequence[dict], path: str | Path) -> Path:
    """Normalised eigenvalue sums against log n, with the least-squares line."""
    fig, ax = plt.subplots(figsize=(6.4, 4.6))
    ns = np.array([row["n"] for row in rows], dtype=float)
    sums = np.array([row["sum"] for row in rows], dtype=float)
    logs = np.log(ns)
    ax.plot(logs, sums, "o-", color="tab:red", label="normalised sum")
    if len(rows) >= 2:
        slope, intercept = np.polyfit(logs, sums, 1)
        xs = np.linspace(logs.min(), logs.max(), 50)
        ax.plot(xs, slope * xs + intercept, color="tab:blue", lw=0.9, ls="--",
                label=f"fit slope {slope:.4f}")
    ax.set_xlabel(r"$\log n$")
    ax.set_ylabel("normalised eigenvalue sum")
    ax.set_title("growth of the step-potential spectral sum")
    ax.legend(fontsize=8)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    return _save(fig, Path(path))


def render_jost_profile_figure(moduli: Sequence[float], z: complex, path: str | Path) -> Path:
    """Component moduli of one Jost evaluation (on the circle: the boundary profile)."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.semilogy(range(len(moduli)), moduli, "o-", ms=3, color="tab:blue")
    if abs(abs(z) - 1.0) < 1e-12:
        ax.axhline(1.0, color="gray", lw=0.8, ls="--")
    ax.set_xlabel("component k")
    ax.set_ylabel(r"$|u_k|$")
    ax.set_title(f"Jost component moduli at z = {z.real:g}{z.imag:+g}i")
    ax.grid(alpha=0.25)
    fig.tight_layout()
    return _save(fig, Path(path))
