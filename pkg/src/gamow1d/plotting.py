"""Static figures for CLI reports.

Everything renders through the non-interactive Agg backend into a file; the
CSV/JSON tables remain the primary output.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_resonances(rows: Sequence[dict], path) -> None:
    """Resonance energies against half-widths, one marker style per method."""
    fig, ax = plt.subplots(figsize=(6, 4))
    for key, marker, label in (
        ("analytic", "o", "analytic"),
        ("pole", "x", "pole"),
        ("graphic", "+", "graphical"),
    ):
        E = [r[f"E_{key}"] for r in rows]
        hw = [r[f"half_width_{key}"] for r in rows]
        ax.plot(E, hw, marker, label=label, mfc="none")
    ax.set_xlabel("E")
    ax.set_ylabel("Gamma / 2")
    ax.legend()
    _save(fig, path)


def plot_scan(E, T, omega, peaks: Sequence[dict], path) -> None:
    """Transmission curve, superposed Lorentzians and half-maximum markers."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(E, T, lw=1, label="T")
    if omega is not None:
        ax.plot(E, omega, lw=1, ls="--", label="FBW sum")
    for p in peaks:
        if p["accepted"]:
            ax.hlines(0.5, p["left"], p["right"], colors="k", lw=1)
    ax.set_xlabel("E")
    ax.set_ylabel("T")
    ax.legend()
    _save(fig, path)


def plot_deformation(x, V, V_new, path, argand: bool = False) -> None:
    """Base and deformed potential; complex data gets real and imaginary panels."""
    V_new = np.asarray(V_new)
    if argand:
        fig, ax = plt.subplots(figsize=(5, 5))
        ax.plot(V_new.real, V_new.imag, lw=1)
        ax.set_xlabel("Re V")
        ax.set_ylabel("Im V")
        _save(fig, path)
        return
    if np.iscomplexobj(V_new):
        fig, (a1, a2) = plt.subplots(2, 1, figsize=(7, 6), sharex=True)
        a1.plot(x, V, "k:", lw=1)
        a1.plot(x, V_new.real, lw=1)
        a1.set_ylabel("Re V")
        a2.plot(x, V_new.imag, lw=1)
        a2.set_ylabel("Im V")
        a2.set_xlabel("x")
    else:
        fig, ax = plt.subplots(figsize=(7, 4))
        ax.plot(x, V, "k:", lw=1)
        ax.plot(x, V_new, lw=1)
        ax.set_xlabel("x")
        ax.set_ylabel("V")
    _save(fig, path)


def plot_bound(x, V, energies, waves, path) -> None:
    """Potential with each bound state drawn at the height of its energy."""
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(x, V, "k", lw=1)
    depth = max(1.0, float(np.ptp(V)))
    scale = 0.5 * depth / max(1, len(energies))
    for E, w in zip(energies, waves):
        w = np.asarray(w)
        ax.plot(x, E + scale * w / max(np.max(np.abs(w)), 1e-300), lw=1)
    ax.set_xlabel("x")
    ax.set_ylabel("E")
    _save(fig, path)
