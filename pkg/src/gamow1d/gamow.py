"""Gamow-Siegert functions of the square models.

A Gamow function is the scattering solution evaluated at a complex kinetic
parameter and multiplied through by Delta(k), so that it stays finite on the
poles.  Three families are distinguished by where ``k`` sits:

``DECAYING``    fourth quadrant, on a pole: purely outgoing, grows as e^{|k_I||x|}
``CAPTURE``     third quadrant (the mirror -conj(k) of a decaying pole)
``DECREASING``  upper half plane (conj(k) or -k): no pole condition; the
                envelope decays as x -> +inf and grows as x -> -inf

Piecewise representation (``hb = b/2``)::

    x < -hb   : left_in  e^{ik(x+hb)} + left_out  e^{-ik(x+hb)}
    |x| <= hb : sin_coef sin(qx)      + cos_coef  cos(qx)
    x > hb    : right_out e^{ik(x-hb)} + right_in e^{-ik(x-hb)}

The interior is normalised so that the larger of the two interior
coefficients equals 1; outer coefficients follow from continuity of value and
slope.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NodeError, NotAPole, QuadrantError
from .potentials import PotentialSpec, evaluate_potential, interaction_parameter
from .scattering import delta_fn

POLE_TOL = 1e-8
NODE_TOL = 1e-13


class Variant(str, enum.Enum):
    DECAYING = "decaying"
    CAPTURE = "capture"
    DECREASING = "decreasing"


def _out(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


@dataclass(frozen=True)
class GamowFunction:
    spec: PotentialSpec
    k: complex
    q: complex
    variant: Variant
    left_in: complex
    left_out: complex
    sin_coef: complex
    cos_coef: complex
    right_out: complex
    right_in: complex

    @property
    def energy(self) -> complex:
        """Complex eigenvalue ``eps = k**2``."""
        return self.k * self.k

    @property
    def Gamma(self) -> float:
        return -2.0 * self.energy.imag

    def evaluate(self, x):
        """Return ``(u, u')`` at ``x``."""
        x = np.asarray(x, dtype=float)
        k, q, hb = self.k, self.q, self.spec.half_width
        xl = np.minimum(x + hb, 0.0)
        xr = np.maximum(x - hb, 0.0)
        xi = np.clip(x, -hb, hb)
        ep, em = np.exp(1j * k * xl), np.exp(-1j * k * xl)
        ul = self.left_in * ep + self.left_out * em
        dl = 1j * k * (self.left_in * ep - self.left_out * em)
        sn, cs = np.sin(q * xi), np.cos(q * xi)
        ui = self.sin_coef * sn + self.cos_coef * cs
        di = q * (self.sin_coef * cs - self.cos_coef * sn)
        ep, em = np.exp(1j * k * xr), np.exp(-1j * k * xr)
        ur = self.right_out * ep + self.right_in * em
        dr = 1j * k * (self.right_out * ep - self.right_in * em)
        u = np.where(x < -hb, ul, np.where(x > hb, ur, ui))
        du = np.where(x < -hb, dl, np.where(x > hb, dr, di))
        return _out(u), _out(du)

    def __call__(self, x):
        return self.evaluate(x)[0]

    def beta(self, x):
        """Superpotential ``beta = -u'/u``, its derivative and the flux velocity.

        ``beta'`` comes from the Riccati identity ``beta**2 + eps - V``.
        Raises NodeError where ``u`` vanishes.
        """
        u, du = self.evaluate(x)
        u, du = np.asarray(u), np.asarray(du)
        scale = np.abs(du) / max(abs(self.k), abs(self.q), 1e-300)
        if np.any((np.abs(u) <= NODE_TOL * scale) | (u == 0)):
            raise NodeError("transformation function has a node on the grid")
        b = -du / u
        bp = b * b + self.energy - evaluate_potential(self.spec, x)
        return _out(b), _out(bp), _out(-2.0 * b.imag)

    def density_factor(self, x, t):
        """``exp(-Gamma t) |u(x)|**2`` for decaying or capture states."""
        if self.variant is Variant.DECREASING:
            raise DomainError("density_factor needs a decaying or capture state")
        u = np.abs(np.asarray(self.evaluate(x)[0])) ** 2
        return _out(np.exp(-self.Gamma * np.asarray(t, dtype=float)) * u)

    def asymptotic_beta(self, side: int) -> complex:
        """Limit of beta as ``x -> side * inf`` (``side`` is +1 or -1).

        On each side the exponential that grows outwards dominates whenever
        its coefficient is nonzero.
        """
        k = self.k
        if side > 0:
            grows_out = k.imag < 0  # e^{ikx} grows as x -> +inf
            if (grows_out and self.right_out != 0) or self.right_in == 0:
                return -1j * k
            return 1j * k
        grows_in = k.imag > 0  # e^{ikx} grows as x -> -inf
        if (grows_in and self.left_in != 0) or self.left_out == 0:
            return -1j * k
        return 1j * k


def transformation_k(k_pole: complex, variant: Variant) -> complex:
    """Kinetic parameter of each family built from a fourth-quadrant pole."""
    k_pole = complex(k_pole)
    variant = Variant(variant)
    if variant is Variant.DECAYING:
        return k_pole
    if variant is Variant.CAPTURE:
        return -k_pole.conjugate()
    return k_pole.conjugate()


def build_gamow(
    spec: PotentialSpec,
    k: complex,
    variant: Variant = Variant.DECAYING,
    pole_tol: float = POLE_TOL,
) -> GamowFunction:
    """Build the Delta-cleared solution at ``k`` for the requested family."""
    k = complex(k)
    variant = Variant(variant)
    q = complex(interaction_parameter(spec, k))
    if variant is Variant.DECAYING and not (k.real > 0 and k.imag < 0):
        raise QuadrantError(f"decaying states need k in the fourth quadrant, got {k}")
    if variant is Variant.CAPTURE and not (k.real < 0 and k.imag < 0):
        raise QuadrantError(f"capture states need k in the third quadrant, got {k}")
    if variant is Variant.DECREASING and not k.imag > 0:
        raise QuadrantError(f"decreasing functions need Im k > 0, got {k}")
    pole = variant is not Variant.DECREASING
    if pole and abs(delta_fn(spec, k)) >= pole_tol * abs(k * q):
        raise NotAPole(f"k = {k} is not a zero of Delta (|Delta| too large)")

    hb = spec.half_width
    c, s = np.cos(q * hb), np.sin(q * hb)
    pre = k * np.exp(-1j * k * hb)
    a = 1j * pre * (k * c - 1j * q * s)
    cc = pre * (q * c - 1j * k * s)
    norm = cc if abs(cc) >= abs(a) else a
    a, cc = a / norm, cc / norm

    def edge(x):
        u = a * np.sin(q * x) + cc * np.cos(q * x)
        du = q * (a * np.cos(q * x) - cc * np.sin(q * x))
        return u, du

    u0, d0 = edge(-hb)
    u1, d1 = edge(hb)
    left_in = 0.5 * (u0 + d0 / (1j * k))
    left_out = 0.5 * (u0 - d0 / (1j * k))
    right_out = 0.5 * (u1 + d1 / (1j * k))
    # no wave returns from the right by construction; on a pole none enters
    # from the left either
    if pole:
        left_in = 0j
    return GamowFunction(
        spec, k, q, variant,
        complex(left_in), complex(left_out), complex(a), complex(cc), complex(right_out), 0j,
    )


def gamow_from_pole(spec: PotentialSpec, k_pole: complex, variant: Variant = Variant.DECAYING, **kw):
    return build_gamow(spec, transformation_k(k_pole, variant), variant, **kw)
