"""Closed-form scattering data for the square models.

A single source sits to the left of the interaction zone.  With
``c = cos(qb/2)`` and ``s = sin(qb/2)`` the amplitudes are

    Delta = (k c - i q s) (q c - i k s)
    S     = k q exp(-ikb) / Delta
    L     = i (q**2 - k**2) sin(qb) exp(-ikb) / (2 Delta)

which covers the barrier through ``q**2 - k**2 = -V0``.  Internally the
amplitudes are evaluated from ``Delta / q = k cos(qb) - i (k**2 + q**2)
(b/2) sinc(qb)``, which is even in ``q`` and regular at ``q = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, PoleError
from .potentials import PotentialSpec, interaction_parameter

POLE_GUARD = 1e-13


def _sinc(z):
    """sin(z)/z for complex arrays, equal to 1 at z = 0."""
    z = np.asarray(z, dtype=complex)
    safe = np.where(z == 0, 1.0, z)
    return np.where(z == 0, 1.0 + 0j, np.sin(safe) / safe)


def _scalar(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


def delta_fn(spec: PotentialSpec, k):
    """Delta(k); its zeros in the lower half plane are the resonance poles."""
    k = np.asarray(k, dtype=complex)
    q = interaction_parameter(spec, k)
    half = 0.5 * q * spec.b
    c, s = np.cos(half), np.sin(half)
    return _scalar((k * c - 1j * q * s) * (q * c - 1j * k * s))


def delta_derivative(spec: PotentialSpec, k):
    """Analytic dDelta/dk (uses dq/dk = k/q)."""
    k = np.asarray(k, dtype=complex)
    q = interaction_parameter(spec, k)
    hb = 0.5 * spec.b
    c, s = np.cos(q * hb), np.sin(q * hb)
    dq = k / q
    dc = -s * hb * dq
    ds = c * hb * dq
    A = k * c - 1j * q * s
    B = q * c - 1j * k * s
    dA = c + k * dc - 1j * (dq * s + q * ds)
    dB = dq * c + q * dc - 1j * (s + k * ds)
    return _scalar(dA * B + A * dB)


def _scaled_trig(z):
    """``cos z`` and ``sinc z`` times ``exp(-|Im z|)``, plus ``|Im z|``.

    Large imaginary arguments (deep tunnelling) would overflow cos and sin;
    the common factor cancels in every amplitude.
    """
    z = np.asarray(z, dtype=complex)
    a = np.abs(z.imag)
    ep = np.exp(1j * z - a)
    em = np.exp(-1j * z - a)
    c = 0.5 * (ep + em)
    small = np.abs(z) < 1e-3
    safe = np.where(small, 1.0, z)
    sinc = np.where(small, (1.0 - z * z / 6.0) * np.exp(-a), (ep - em) / (2j * safe))
    return c, sinc, a


def _reduced_delta(spec: PotentialSpec, k, q):
    """``(Delta / q) exp(-|Im qb|)`` and the exponent that was taken out.

    Delta / q is even in ``q``: no branch choice enters.
    """
    c, sinc, a = _scaled_trig(q * spec.b)
    return k * c - 0.5j * (k * k + q * q) * spec.b * sinc, a, sinc


@dataclass(frozen=True)
class ScatteringAmplitudes:
    k: complex
    L: complex
    S: complex
    Delta: complex

    @property
    def R(self) -> float:
        return abs(self.L) ** 2

    @property
    def T(self) -> float:
        return abs(self.S) ** 2


def amplitudes(spec: PotentialSpec, k: complex) -> ScatteringAmplitudes:
    """Reflection and transmission amplitudes at a single kinetic parameter.

    Raises PoleError when ``k`` sits numerically on a zero of Delta.
    """
    k = complex(k)
    q = interaction_parameter(spec, k)
    red, a, sinc = _reduced_delta(spec, k, q)
    red, a, sinc = complex(red), float(a), complex(sinc)
    phase = np.exp(-1j * k * spec.b)
    if red == 0 or abs(red) < POLE_GUARD * abs(k) * max(1.0, abs(phase)) * np.exp(-a):
        raise PoleError(f"k = {k} is on a pole of the transmission amplitude")
    S = k * phase * np.exp(-a) / red
    # q**2 - k**2 is exactly the constant shift; avoids cancellation
    L = 0.5j * spec.q2_shift * spec.b * sinc * phase / red
    with np.errstate(over="ignore"):
        Delta = q * red * np.exp(a)
    return ScatteringAmplitudes(k=k, L=complex(L), S=complex(S), Delta=complex(Delta))


def transmission_coefficient(spec: PotentialSpec, E):
    """T(E) = |S|**2 on the real energy axis; vectorised over ``E``."""
    E = np.asarray(E, dtype=float)
    if np.any(~(E > 0)):
        raise DomainError("transmission is defined for E > 0 only")
    k = np.sqrt(E).astype(complex)
    q = interaction_parameter(spec, k)
    red, a, _ = _reduced_delta(spec, k, q)
    T = np.abs(k * np.exp(-a) / red) ** 2
    return _scalar(np.minimum(T, 1.0))


@dataclass(frozen=True)
class FbwPeak:
    """Fock-Breit-Wigner profile of centre ``E`` and full width ``Gamma``."""

    E: float
    Gamma: float

    def __post_init__(self):
        if not self.Gamma > 0:
            raise DomainError(f"FBW width must be > 0, got {self.Gamma!r}")

    @property
    def half_width(self) -> float:
        return 0.5 * self.Gamma


def fbw(eps_R, peak: FbwPeak):
    """Lorentzian ``(G/2)**2 / ((eps_R - E)**2 + (G/2)**2)``."""
    g2 = peak.half_width**2
    d = np.asarray(eps_R, dtype=float) - peak.E
    return _scalar(g2 / (d * d + g2))


def fbw_sum(eps_R, peaks: Sequence[FbwPeak]):
    """Superposition of FBW profiles, not clamped to 1."""
    total = np.zeros_like(np.asarray(eps_R, dtype=float))
    for p in peaks:
        total = total + fbw(eps_R, p)
    return _scalar(total)


def interior_wave(spec: PotentialSpec, k, x):
    """Interior branch of the scattering solution multiplied by Delta.

    Finite at the poles, where it becomes the interior part of the Gamow
    function.  Only valid for ``|x| <= b/2``.
    """
    k = np.asarray(k, dtype=complex)
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > spec.half_width):
        raise DomainError("interior_wave needs |x| <= b/2")
    q = interaction_parameter(spec, k)
    half = 0.5 * q * spec.b
    c, s = np.cos(half), np.sin(half)
    A = k * c - 1j * q * s
    B = q * c - 1j * k * s
    pre = k * np.exp(-0.5j * k * spec.b)
    return _scalar(pre * (1j * A * np.sin(q * x) + B * np.cos(q * x)))


@dataclass(frozen=True)
class ScatteringWave:
    """Physical scattering state with unit incident wave from the left.

    ``u = exp(ikx) + L exp(-ikx)`` for x < -b/2, ``S exp(ikx)`` for x > b/2.
    Exposes ``energy`` and ``evaluate`` like the other base solutions.
    """

    spec: PotentialSpec
    E: float

    def __post_init__(self):
        if not self.E > 0:
            raise DomainError("scattering states need E > 0")

    @property
    def energy(self) -> float:
        return self.E

    @property
    def k(self) -> float:
        return float(np.sqrt(self.E))

    @property
    def amplitudes(self) -> ScatteringAmplitudes:
        return amplitudes(self.spec, self.k)

    def evaluate(self, x):
        """Return ``(psi, dpsi)`` at ``x``."""
        spec, k = self.spec, self.k
        amp = self.amplitudes
        x = np.asarray(x, dtype=float)
        hb = spec.half_width
        q = interaction_parameter(spec, k)
        # interior from continuity of value and slope at -b/2
        u0 = np.exp(-1j * k * hb) + amp.L * np.exp(1j * k * hb)
        d0 = 1j * k * (np.exp(-1j * k * hb) - amp.L * np.exp(1j * k * hb))
        xs = x + hb
        ui = u0 * np.cos(q * xs) + d0 * xs * _sinc(q * xs)
        di = -u0 * q * np.sin(q * xs) + d0 * np.cos(q * xs)
        el, er = np.exp(1j * k * x), np.exp(-1j * k * x)
        ul = el + amp.L * er
        dl = 1j * k * (el - amp.L * er)
        ur = amp.S * el
        dr = 1j * k * ur
        u = np.where(x < -hb, ul, np.where(x > hb, ur, ui))
        du = np.where(x < -hb, dl, np.where(x > hb, dr, di))
        return _scalar(u), _scalar(du)
