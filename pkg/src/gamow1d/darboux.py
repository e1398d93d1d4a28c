"""Darboux deformations built from Gamow functions.

First order
    A transformation function ``u`` with complex eigenvalue ``eps`` and
    superpotential ``beta = -u'/u`` gives the complex potential

        V1 = V + 2 beta' = 2 beta**2 + 2 eps - V

    and maps a solution ``psi`` of energy ``E`` to ``y = psi' + beta psi``.

Second order
    Iterating with the conjugate seed yields a real potential.  With
    ``v = -2 Im beta`` the result is

        V2 = V + 4 (eps_I / v)'  =  V - 4 eps_I v' / v**2,
        v' = -2 (2 beta_R beta_I + eps_I),

    and solutions map as ``Psi = (eps - E) psi + 2 (eps_I / v) y``.  V2 is
    regular only where ``v`` has no zero; the decreasing function (built at
    the conjugate of a pole) satisfies this on the whole line, while the
    decaying one does not.  The same potential is reachable through the
    Wronskian of the seeds ``phi(conj k)`` and ``phi(-k)``:
    ``V2 = V - 2 (ln W)''``, which this module exposes as a cross-check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import simpson

from .errors import DomainError, QuadrantError, ZeroVelocityError
from .gamow import GamowFunction, Variant, build_gamow
from .potentials import PotentialSpec, evaluate_potential

VELOCITY_TOL = 1e-13


def _out(a):
    a = np.asarray(a)
    return a.item() if a.ndim == 0 else a


@dataclass(frozen=True)
class DeformedState:
    """A solution of a deformed problem, evaluated lazily.

    ``fn(x)`` returns ``(value, derivative)``.
    """

    energy: complex
    fn: Callable = field(repr=False)
    label: str = ""

    def evaluate(self, x):
        return self.fn(x)

    def __call__(self, x):
        return self.fn(x)[0]

    def norm_squared(self, x) -> float:
        """Simpson estimate of the integral of ``|value|**2`` over the grid ``x``."""
        x = np.asarray(x, dtype=float)
        return float(simpson(np.abs(np.asarray(self(x))) ** 2, x=x))


# --------------------------------------------------------------------- first order


@dataclass(frozen=True)
class DeformedPotential1:
    """Complex potential ``2 beta**2 + 2 eps - V`` generated by ``gamow``."""

    gamow: GamowFunction

    @property
    def spec(self) -> PotentialSpec:
        return self.gamow.spec

    @property
    def eps(self) -> complex:
        return self.gamow.energy

    def __call__(self, x):
        b, _, _ = self.gamow.beta(x)
        b = np.asarray(b)
        return _out(2.0 * b * b + 2.0 * self.eps - evaluate_potential(self.spec, x))

    def shift(self, x):
        """``V1 - V = 2 beta'``."""
        _, bp, _ = self.gamow.beta(x)
        return _out(2.0 * np.asarray(bp))


def deform1(gamow: GamowFunction) -> DeformedPotential1:
    return DeformedPotential1(gamow)


def deform1_state(gamow: GamowFunction, psi) -> DeformedState:
    """Map a solution ``psi`` (with ``energy`` and ``evaluate``) to ``y = psi' + beta psi``."""
    E = complex(psi.energy)
    eps = gamow.energy

    def fn(x):
        p, dp = (np.asarray(a) for a in psi.evaluate(x))
        b, _, _ = gamow.beta(x)
        b = np.asarray(b)
        y = dp + b * p
        return _out(y), _out((eps - E) * p + b * y)

    return DeformedState(E, fn, "deform1")


def reciprocal_state(gamow: GamowFunction) -> DeformedState:
    """``1/u``: a solution of the deformed problem at ``eps`` for any family."""

    def fn(x):
        u, du = (np.asarray(a) for a in gamow.evaluate(x))
        y = 1.0 / u
        return _out(y), _out(-du / (u * u))

    return DeformedState(gamow.energy, fn, "reciprocal")


def new_eigenstate(gamow: GamowFunction) -> DeformedState:
    """The extra eigenstate ``1/u`` of the deformed problem at ``eps``.

    Only the decaying family makes ``1/u`` square integrable.
    """
    if gamow.variant is not Variant.DECAYING:
        raise QuadrantError("the new eigenstate needs a decaying transformation function")
    st = reciprocal_state(gamow)
    return DeformedState(st.energy, st.fn, "new_eigenstate")


@dataclass(frozen=True)
class TransformedScattering:
    t: complex
    R: float
    T: float

    @property
    def t_squared(self) -> float:
        return abs(self.t) ** 2

    @property
    def R_tilde(self) -> float:
        return self.t_squared * self.R

    @property
    def T_tilde(self) -> float:
        return self.t_squared * self.T


def transformed_scattering(gamow: GamowFunction, kappa: float) -> TransformedScattering:
    """Scattering coefficients of the first-order deformed potential.

    The map ``y = psi' + beta psi`` multiplies the asymptotic waves by
    ``beta_> + i kappa`` on the right and ``beta_< + i kappa`` on the left, so
    both coefficients pick up the same factor ``|t|**2`` with
    ``t = (beta_> + i kappa) / (beta_< + i kappa)``.
    """
    from .scattering import amplitudes

    kappa = float(kappa)
    if not kappa > 0:
        raise DomainError("kappa must be > 0")
    bp, bm = gamow.asymptotic_beta(+1), gamow.asymptotic_beta(-1)
    den = bm + 1j * kappa
    if den == 0:
        raise DomainError("incident wave annihilated by the transformation")
    amp = amplitudes(gamow.spec, kappa)
    return TransformedScattering((bp + 1j * kappa) / den, amp.R, amp.T)


def velocity_ratio_estimate(v_s, v):
    """``((r - 1) / (r + 1))**2`` with ``r = v_s / v``.

    The limit of ``|t|**2`` from ``transformed_scattering`` for a narrow
    resonance, with ``v_s`` the incident and ``v`` the resonance velocity.
    """
    r = np.asarray(v_s, dtype=float) / np.asarray(v, dtype=float)
    return _out(((r - 1.0) / (r + 1.0)) ** 2)


# -------------------------------------------------------------------- second order


@dataclass(frozen=True)
class DeformedPotential2:
    """Real potential generated by a decreasing Gamow function."""

    gamow: GamowFunction

    @property
    def spec(self) -> PotentialSpec:
        return self.gamow.spec

    @property
    def eps(self) -> complex:
        return self.gamow.energy

    @property
    def k_pole(self) -> complex:
        return self.gamow.k.conjugate()

    def _parts(self, x):
        b, _, v = self.gamow.beta(x)
        b, v = np.asarray(b), np.asarray(v, dtype=float)
        scale = max(abs(self.gamow.k), 1e-300)
        if np.any(np.abs(v) <= VELOCITY_TOL * scale):
            raise ZeroVelocityError("flux velocity vanishes on the grid")
        eI = self.eps.imag
        dv = -2.0 * (2.0 * b.real * b.imag + eI)
        return b, v, dv, eI

    def ratio(self, x):
        """``eps_I / v`` and its derivative."""
        _, v, dv, eI = self._parts(x)
        return _out(eI / v), _out(-eI * dv / (v * v))

    def shift(self, x):
        """``V2 - V``."""
        _, dr = self.ratio(x)
        return _out(4.0 * np.asarray(dr))

    def __call__(self, x):
        return _out(evaluate_potential(self.spec, x) + np.asarray(self.shift(x)))

    def wronskian_form(self, x):
        """Independent evaluation of V2 from the seeds ``phi(conj k)`` and ``phi(-k)``.

        Returned complex; its imaginary part measures round-off.
        """
        u1g = self.gamow
        u2g = build_gamow(self.spec, -self.k_pole, Variant.DECREASING)
        u1, d1 = (np.asarray(a) for a in u1g.evaluate(x))
        u2, d2 = (np.asarray(a) for a in u2g.evaluate(x))
        de = u1g.energy - u2g.energy
        W = u1 * d2 - d1 * u2
        lw = de * (d1 * u2 + u1 * d2) / W - (de * u1 * u2 / W) ** 2
        return _out(evaluate_potential(self.spec, x) - 2.0 * lw)

    def window(self) -> tuple[float, float]:
        """Default sampling window: the zone plus ``min(15/|k_I|, 10 b)`` each side."""
        hb = self.spec.half_width
        pad = min(15.0 / abs(self.k_pole.imag), 10.0 * self.spec.b)
        return -hb - pad, hb + pad


def deform2(spec: PotentialSpec, k_pole: complex) -> DeformedPotential2:
    """Second-order deformation generated by the pole ``k_pole`` (fourth quadrant).

    The decreasing function is built at ``conj(k_pole)``; no pole condition is
    needed there, so any fourth-quadrant ``k`` is accepted.
    """
    k_pole = complex(k_pole)
    if not (k_pole.real > 0 and k_pole.imag < 0):
        raise QuadrantError(f"deform2 needs a fourth-quadrant k, got {k_pole}")
    return DeformedPotential2(build_gamow(spec, k_pole.conjugate(), Variant.DECREASING))


def deform2_state(dp: DeformedPotential2, psi) -> DeformedState:
    """Map ``psi`` of energy ``E`` to ``Psi = (eps - E) psi + 2 (eps_I / v) y``."""
    E = complex(psi.energy)
    eps = dp.eps
    if abs(E - eps) == 0 or abs(E - eps.conjugate()) == 0:
        raise DomainError("psi must not share the transformation energy")
    g = dp.gamow

    def fn(x):
        p, d = (np.asarray(a) for a in psi.evaluate(x))
        b, v, dv, eI = dp._parts(x)
        y = d + b * p
        dy = (eps - E) * p + b * y
        r = eI / v
        dr = -eI * dv / (v * v)
        val = (eps - E) * p + 2.0 * r * y
        der = (eps - E) * d + 2.0 * dr * y + 2.0 * r * dy
        return _out(val), _out(der)

    return DeformedState(E, fn, "deform2")


def gram_matrix(states: Sequence[DeformedState], x) -> np.ndarray:
    """Normalised overlaps ``<y_m | y_n>`` on the grid ``x`` (Simpson rule)."""
    x = np.asarray(x, dtype=float)
    vals = [np.asarray(s(x), dtype=complex) for s in states]
    n = len(vals)
    G = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            G[i, j] = simpson(np.conj(vals[i]) * vals[j], x=x)
    d = np.sqrt(np.abs(np.diag(G)))
    return G / np.outer(d, d)


def count_lobes(dp: DeformedPotential2, samples: int = 4001, rel_floor: float = 1e-3) -> tuple[int, int]:
    """Count sign-alternating lobes of ``V2 - V`` strictly inside the zone.

    Samples whose magnitude is below ``rel_floor`` times the maximum are
    ignored.  Returns ``(lobes, distortions)`` with ``distortions`` the
    number of lobe pairs rounded up.
    """
    hb = dp.spec.half_width
    x = np.linspace(-hb, hb, samples + 2)[1:-1]
    d = np.asarray(dp.shift(x), dtype=float)
    big = np.abs(d) > rel_floor * np.max(np.abs(d))
    s = np.sign(d[big])
    lobes = int(1 + np.count_nonzero(s[1:] != s[:-1])) if s.size else 0
    return lobes, (lobes + 1) // 2
