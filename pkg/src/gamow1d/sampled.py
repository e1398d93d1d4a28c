"""Numerical solvers for potentials known only through samples.

These know nothing about the closed forms; they serve as independent checks
(and back the CLI's isospectrality report).  A sampled potential is a set of
cells, constant on each, obtained by midpoint sampling.  Inside a cell the
Schrodinger equation ``psi'' = (V - E) psi`` is integrated exactly by the
2x2 propagator::

    [psi ]      [ cos(kh)      sin(kh)/k ] [psi ]
    [psi']   =  [ -k sin(kh)   cos(kh)   ] [psi']     k = sqrt(E - V)

which also covers evanescent cells through complex ``k``.  Cell edges placed
on the discontinuities of V keep the scheme second-order for piecewise
smooth potentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq


@dataclass(frozen=True)
class CellPotential:
    edges: np.ndarray
    values: np.ndarray

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)


def sample_cells(
    V: Callable, x_min: float, x_max: float, n_cells: int, breakpoints: Sequence[float] = ()
) -> CellPotential:
    """Midpoint-sample ``V`` on ``[x_min, x_max]``.

    Breakpoints inside the interval become cell edges.  ``V`` may return
    complex values; only the real part is kept when the imaginary part is
    below 1e-12 of the scale.
    """
    inner = sorted(p for p in breakpoints if x_min < p < x_max)
    knots = [x_min, *inner, x_max]
    total = x_max - x_min
    edges = [np.array([x_min])]
    for a, b in zip(knots[:-1], knots[1:]):
        n = max(2, int(round(n_cells * (b - a) / total)))
        edges.append(np.linspace(a, b, n + 1)[1:])
    edges = np.concatenate(edges)
    mids = 0.5 * (edges[1:] + edges[:-1])
    vals = np.asarray(V(mids))
    if np.iscomplexobj(vals):
        if np.max(np.abs(vals.imag)) <= 1e-12 * max(1.0, np.max(np.abs(vals))):
            vals = vals.real
    return CellPotential(edges, vals)


def _cell_matrices(cells: CellPotential, E):
    """Propagators of every cell, shape ``(len(E), n_cells, 2, 2)``."""
    E = np.asarray(E, dtype=complex)[:, None]
    h = cells.widths[None, :]
    k = np.sqrt(E - cells.values[None, :])
    kh = k * h
    c = np.cos(kh)
    s = np.sin(kh)
    safe = np.where(k == 0, 1.0, k)
    s_over_k = np.where(k == 0, h, s / safe)
    M = np.empty(k.shape + (2, 2), dtype=complex)
    M[..., 0, 0] = c
    M[..., 0, 1] = s_over_k
    M[..., 1, 0] = -k * s
    M[..., 1, 1] = c
    return M


def transfer_matrix(cells: CellPotential, E, chunk: int = 32):
    """Product of all cell propagators, left edge to right edge.

    Returns ``(M, log_scale)`` with the true matrix ``exp(log_scale) * M``.
    Products are formed pairwise (log depth) and renormalised at each level
    so that long evanescent stretches cannot overflow.
    """
    E = np.atleast_1d(np.asarray(E, dtype=complex))
    out = np.empty((E.size, 2, 2), dtype=complex)
    logs = np.empty(E.size)
    for i in range(0, E.size, chunk):
        M = _cell_matrices(cells, E[i : i + chunk])
        lg = np.zeros(M.shape[:2])
        while M.shape[1] > 1:
            if M.shape[1] % 2:
                eye = np.broadcast_to(np.eye(2, dtype=complex), (M.shape[0], 1, 2, 2))
                M = np.concatenate([M, eye], axis=1)
                lg = np.concatenate([lg, np.zeros((lg.shape[0], 1))], axis=1)
            A, B = M[:, 1::2], M[:, 0::2]
            M = np.empty_like(A)
            M[..., 0, 0] = A[..., 0, 0] * B[..., 0, 0] + A[..., 0, 1] * B[..., 1, 0]
            M[..., 0, 1] = A[..., 0, 0] * B[..., 0, 1] + A[..., 0, 1] * B[..., 1, 1]
            M[..., 1, 0] = A[..., 1, 0] * B[..., 0, 0] + A[..., 1, 1] * B[..., 1, 0]
            M[..., 1, 1] = A[..., 1, 0] * B[..., 0, 1] + A[..., 1, 1] * B[..., 1, 1]
            lg = lg[:, 1::2] + lg[:, 0::2]
            m = np.max(np.abs(M), axis=(-2, -1))
            m = np.where(m > 0, m, 1.0)
            M = M / m[..., None, None]
            lg = lg + np.log(m)
        out[i : i + chunk] = M[:, 0]
        logs[i : i + chunk] = lg[:, 0]
    return out, logs


def transmission(cells: CellPotential, E: float) -> float:
    """Transmission probability through the sampled potential.

    The potential is taken as zero outside the sampled interval.  A pure
    transmitted wave ``exp(ik x)`` at the right edge is carried back to the
    left edge and split into incident and reflected parts.
    """
    k = np.sqrt(complex(E))
    x0, x1 = cells.edges[0], cells.edges[-1]
    M, lg = transfer_matrix(cells, [E])
    M = M[0]
    # every propagator has unit determinant, so the inverse of the true
    # product exp(lg) * M is exp(lg) * adj(M); solving with the renormalised
    # M directly would be ill-conditioned across long evanescent stretches
    adj = np.array([[M[1, 1], -M[0, 1]], [-M[1, 0], M[0, 0]]])
    right = np.array([1.0, 1j * k]) * np.exp(1j * k * x1)
    left = adj @ right
    incident = 0.5 * (left[0] + left[1] / (1j * k)) * np.exp(-1j * k * x0)
    return float(np.exp(-2.0 * lg[0]) / abs(incident) ** 2)


def _mismatch(E, cells: CellPotential):
    # start with e^{kappa x} on the left, demand e^{-kappa x} on the right
    E = np.asarray(E, dtype=float)
    scalar = E.ndim == 0
    E = np.atleast_1d(E)
    kap = np.sqrt(-E)
    M, _ = transfer_matrix(cells, E)
    psi = M[:, 0, 0] + M[:, 0, 1] * kap
    dpsi = M[:, 1, 0] + M[:, 1, 1] * kap
    f = (dpsi + kap * psi).real
    return float(f[0]) if scalar else f


def bound_states(
    cells: CellPotential, E_min: float, E_max: float = 0.0, n_scan: int = 400, xtol: float = 1e-12
) -> np.ndarray:
    """Bound-state energies in ``(E_min, E_max)`` by shooting.

    The mismatch ``psi' + kappa psi`` at the right edge is scanned on a grid
    of energies; each sign change is then refined by Brent's method.
    """
    if not E_max <= 0:
        raise ValueError("bound states need E_max <= 0")
    grid = np.linspace(E_min, E_max, n_scan + 1)
    grid = grid[grid < 0]
    f = _mismatch(grid, cells)
    roots = []
    for i in np.flatnonzero(np.sign(f[:-1]) != np.sign(f[1:])):
        roots.append(brentq(_mismatch, grid[i], grid[i + 1], args=(cells,), xtol=xtol))
    return np.array(roots)
