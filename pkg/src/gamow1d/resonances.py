"""Resonance and bound-state location for square wells and barriers.

Three routes are offered for resonances:

* closed-form long-lifetime estimates (``analytic_*_resonances``);
* the graphical method on the transmission curve (``scan_transmission``,
  ``measure_peak``): a peak's top is the resonance energy and the distance
  between its two crossings of T = 1/2 is the width;
* Newton refinement of the complex zeros of Delta(k) (``refine_pole``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import DomainError, NoConvergence, NoPeaksError, QuadrantError
from .potentials import Kind, PotentialSpec, interaction_parameter, n_inf
from .scattering import FbwPeak, delta_derivative, delta_fn, transmission_coefficient

# Long-lifetime condition (Gamma/2) / (level spacing) << 1, made numeric.
NARROW_RATIO = 0.05

HALF_MAX_XTOL = 1e-12


class Method(str, enum.Enum):
    ANALYTIC = "analytic"
    GRAPHICAL = "graphical"
    REFINED = "refined"


@dataclass(frozen=True)
class Resonance:
    """Complex level ``eps = E - i Gamma/2``.

    ``spacing`` is the distance to the next level of the same family and
    feeds the validity flags; it is ``None`` when unknown.
    """

    E: float
    Gamma: float
    index: int
    method: Method
    k: complex | None = None
    spacing: float | None = None
    iterations: int | None = None

    @property
    def half_width(self) -> float:
        return 0.5 * self.Gamma

    @property
    def eps(self) -> complex:
        return complex(self.E, -0.5 * self.Gamma)

    @property
    def width_ratio(self) -> float:
        if not self.spacing:
            return math.nan
        return self.half_width / self.spacing

    @property
    def narrow(self) -> bool:
        """Level width small against the level spacing."""
        return self.width_ratio < NARROW_RATIO

    @property
    def above_spacing(self) -> bool:
        """Resonance energy exceeds the level spacing."""
        return self.spacing is not None and self.E > self.spacing

    def as_peak(self) -> FbwPeak:
        return FbwPeak(self.E, self.Gamma)


def _with_k(E, half):
    return complex(np.sqrt(complex(E, -half)))


def analytic_well_resonances(spec: PotentialSpec, count: int) -> list[Resonance]:
    """Long-lifetime estimates ``E_m`` and ``Gamma_m`` for a square well.

    E_m = ([(n_inf + m) pi / (2 theta)]**2 - 1) V0 and Gamma_m/2 = (4/b) sqrt(E_m),
    for m = 0 .. count-1.
    """
    if spec.kind is not Kind.WELL:
        raise DomainError("analytic_well_resonances needs a well")
    if count < 1:
        raise DomainError("count must be >= 1")
    th = spec.theta
    n0 = n_inf(spec.V0, spec.b)
    if n0 * math.pi / (2 * th) <= 1.0:
        # 2 theta / pi is an integer: the ceiling gives E = 0, not a resonance
        n0 += 1
    # one extra level so the last row also gets a spacing
    levels = [((((n0 + m) * math.pi) / (2 * th)) ** 2 - 1.0) * spec.V0 for m in range(count + 1)]
    gaps = np.diff(levels)
    out = []
    for m in range(count):
        E = levels[m]
        half = 4.0 / spec.b * math.sqrt(E)
        out.append(Resonance(E, 2 * half, m, Method.ANALYTIC, _with_k(E, half), float(gaps[m])))
    return out


def analytic_barrier_resonances(spec: PotentialSpec, count: int) -> list[Resonance]:
    """Long-lifetime estimates for a square barrier, n = 1 .. count.

    E_n = V0 [1 + (n pi / (2 theta))**2] and Gamma_n/2 = (2/theta)(E_n - V0).
    """
    if spec.kind is not Kind.BARRIER:
        raise DomainError("analytic_barrier_resonances needs a barrier")
    if count < 1:
        raise DomainError("count must be >= 1")
    th = spec.theta
    levels = [spec.V0 * (1.0 + (n * math.pi / (2 * th)) ** 2) for n in range(1, count + 2)]
    gaps = np.diff(levels)
    out = []
    for i in range(count):
        E = levels[i]
        half = 2.0 / th * (E - spec.V0)
        out.append(Resonance(E, 2 * half, i + 1, Method.ANALYTIC, _with_k(E, half), float(gaps[i])))
    return out


def analytic_resonances(spec: PotentialSpec, count: int) -> list[Resonance]:
    if spec.kind is Kind.WELL:
        return analytic_well_resonances(spec, count)
    return analytic_barrier_resonances(spec, count)


def refine_pole(
    spec: PotentialSpec,
    k_guess: complex,
    tol: float = 1e-12,
    max_iter: int = 60,
    *,
    resid_tol: float = 1e-10,
    index: int = 0,
    spacing: float | None = None,
) -> Resonance:
    """Newton iteration on Delta(k) = 0 from a fourth-quadrant seed.

    Converged once the relative Newton step drops below ``tol`` while the
    relative residual ``|Delta| / |k q|`` is below ``resid_tol``.
    """
    k = complex(k_guess)
    if not (k.real > 0 and k.imag < 0):
        raise QuadrantError(f"seed {k} is not in the fourth quadrant")
    if not tol > 0:
        raise DomainError("tol must be > 0")
    guard = 1e-3 * abs(k)
    for it in range(1, max_iter + 1):
        d = delta_fn(spec, k)
        step = d / delta_derivative(spec, k)
        k = k - step
        if k.real < -guard or k.imag > guard:
            raise QuadrantError(f"Newton iterate {k} left the fourth quadrant")
        q = interaction_parameter(spec, k)
        resid = abs(delta_fn(spec, k)) / (abs(k) * abs(q))
        if resid < resid_tol and abs(step) <= tol * abs(k):
            break
    else:
        raise NoConvergence(f"no pole within {max_iter} Newton steps from {k_guess}")
    if not (k.real > 0 and k.imag < 0):
        raise QuadrantError(f"converged to {k}, outside the fourth quadrant")
    E = k.real**2 - k.imag**2
    Gamma = -4.0 * k.real * k.imag
    return Resonance(E, Gamma, index, Method.REFINED, k, spacing, it)


def refine(spec: PotentialSpec, seed: Resonance, **kw) -> Resonance:
    """Refine an analytic (or graphical) resonance into a pole of S."""
    k0 = seed.k if seed.k is not None else _with_k(seed.E, seed.half_width)
    return refine_pole(spec, k0, index=seed.index, spacing=seed.spacing, **kw)


# --- graphical method ------------------------------------------------------


@dataclass(frozen=True)
class Peak:
    """One local maximum of T(E).

    ``left`` and ``right`` are the crossings of T = 1/2 and ``width`` their
    distance (the full width Gamma).  Rejected peaks carry NaN geometry.
    """

    center: float
    width: float
    left: float
    right: float
    accepted: bool
    T_max: float
    sample_index: int

    @property
    def half_width(self) -> float:
        return 0.5 * self.width

    def as_fbw(self) -> FbwPeak:
        return FbwPeak(self.center, self.width)

    def as_resonance(self, index: int) -> Resonance:
        return Resonance(self.center, self.width, index, Method.GRAPHICAL)


@dataclass(frozen=True)
class ScanResult:
    spec: PotentialSpec
    energies: np.ndarray = field(repr=False)
    T_values: np.ndarray = field(repr=False)
    peaks: tuple[Peak, ...]

    @property
    def accepted(self) -> list[Peak]:
        return [p for p in self.peaks if p.accepted]

    def fbw_peaks(self) -> list[FbwPeak]:
        return [p.as_fbw() for p in self.accepted]


def _half_max(E, spec):
    return transmission_coefficient(spec, E) - 0.5


def _refine_top(spec, lo, hi):
    # optimise the offset from the bracket midpoint: Brent's relative
    # tolerance then acts on a small number instead of on E itself
    ref = 0.5 * (lo + hi)
    res = minimize_scalar(
        lambda d: -transmission_coefficient(spec, ref + d),
        bounds=(lo - ref, hi - ref),
        method="bounded",
        options={"xatol": 1e-14 * max(1.0, abs(ref))},
    )
    return float(ref + res.x), float(-res.fun)


def _local_maxima(T):
    """Indices of strict local maxima; plateaus count once at their midpoint."""
    starts = np.flatnonzero(np.r_[True, T[1:] != T[:-1]])
    ends = np.r_[starts[1:] - 1, len(T) - 1]
    vals = T[starts]
    idx = []
    for r in range(1, len(starts) - 1):
        if vals[r] > vals[r - 1] and vals[r] > vals[r + 1]:
            idx.append(((starts[r] + ends[r]) // 2, starts[r], ends[r]))
    return idx


def scan_transmission(
    spec: PotentialSpec, E_min: float, E_max: float, samples: int = 20000
) -> ScanResult:
    """Graphical resonance search on a uniform energy grid.

    Peak tops are refined off-grid, and the half-maximum crossings are found
    by root bracketing on the closed-form T.  Peaks whose flanking minima do
    not drop below 1/2 are kept but marked ``accepted=False``.
    """
    if not (0 < E_min < E_max):
        raise DomainError("need 0 < E_min < E_max")
    if samples < 100:
        raise DomainError("samples must be >= 100")
    E = np.linspace(E_min, E_max, samples)
    T = np.asarray(transmission_coefficient(spec, E))
    found = _local_maxima(T)
    peaks = []
    for j, (p, s, e) in enumerate(found):
        prev = found[j - 1][0] if j > 0 else 0
        nxt = found[j + 1][0] if j + 1 < len(found) else len(T) - 1
        left_seg = T[prev : p + 1]
        right_seg = T[p : nxt + 1]
        accepted = bool(left_seg.min() < 0.5 and right_seg.min() < 0.5)
        center, tmax = _refine_top(spec, E[s - 1], E[e + 1])
        if not accepted:
            peaks.append(Peak(center, math.nan, math.nan, math.nan, False, tmax, p))
            continue
        jl = prev + int(np.flatnonzero(left_seg < 0.5)[-1])
        jr = p + int(np.flatnonzero(right_seg < 0.5)[0])
        left = brentq(_half_max, E[jl], E[jl + 1], args=(spec,), xtol=HALF_MAX_XTOL)
        right = brentq(_half_max, E[jr - 1], E[jr], args=(spec,), xtol=HALF_MAX_XTOL)
        peaks.append(Peak(center, right - left, left, right, True, tmax, p))
    result = ScanResult(spec, E, T, tuple(peaks))
    if not result.accepted:
        raise NoPeaksError(f"no accepted transmission peak in [{E_min}, {E_max}]", result)
    return result


def measure_peak(spec: PotentialSpec, E_guess: float, window: float) -> Peak:
    """Graphical centre and width of the single peak near ``E_guess``.

    The top is searched within ``E_guess +/- window/2``; crossings of 1/2 are
    then bracketed by stepping outwards in units of ``window/200``.
    """
    lo = max(E_guess - 0.5 * window, 1e-300)
    center, tmax = _refine_top(spec, lo, E_guess + 0.5 * window)
    if tmax <= 0.5:
        raise NoPeaksError(f"transmission near {E_guess} never exceeds 1/2")
    step = window / 200.0

    def crossing(direction):
        a = center
        for _ in range(10000):
            b = a + direction * step
            if b <= 0:
                break
            if _half_max(b, spec) < 0:
                lo_, hi_ = (b, a) if direction < 0 else (a, b)
                return brentq(_half_max, lo_, hi_, args=(spec,), xtol=HALF_MAX_XTOL)
            a = b
        raise NoPeaksError(f"no half-maximum crossing found around {center}")

    left, right = crossing(-1), crossing(+1)
    return Peak(center, right - left, left, right, True, tmax, -1)


def graphical_resonances(spec: PotentialSpec, count: int) -> list[Resonance]:
    """Graphical (E, Gamma) for the peaks nearest to the analytic levels."""
    return [graphical_resonance(spec, r) for r in analytic_resonances(spec, count)]


def graphical_resonance(spec: PotentialSpec, seed: Resonance) -> Resonance:
    """Graphical (E, Gamma) of the transmission peak nearest to ``seed``.

    Raises NoPeaksError when the peak has no half-maximum crossings in its
    window, as happens for broad, overlapping resonances.
    """
    window = min(seed.spacing, 8 * seed.Gamma) if seed.spacing else 8 * seed.Gamma
    pk = measure_peak(spec, seed.E, window)
    return Resonance(pk.center, pk.width, seed.index, Method.GRAPHICAL, None, seed.spacing)


# --- bound states ----------------------------------------------------------


class Parity(str, enum.Enum):
    EVEN = "even"
    ODD = "odd"


@dataclass(frozen=True)
class BoundState:
    """Bound level of a square well; ``rho = q b / 2`` with ``0 < rho < theta``."""

    E: float
    parity: Parity
    rho: float
    level: int = 0


def _even_condition(r, th):
    # tan r = sqrt(th^2 - r^2) / r, cleared of poles
    return r * math.sin(r) - math.cos(r) * math.sqrt(max(th * th - r * r, 0.0))


def _odd_condition(r, th):
    # cot r = -sqrt(th^2 - r^2) / r, cleared of poles
    return r * math.cos(r) + math.sin(r) * math.sqrt(max(th * th - r * r, 0.0))


def bound_states(spec: PotentialSpec) -> list[BoundState]:
    """All bound levels, ascending, alternating even/odd from the ground state."""
    if spec.kind is not Kind.WELL:
        raise DomainError("bound states exist only for the well")
    th = spec.theta
    out = []
    j = 1
    while (j - 1) * math.pi / 2 < th:
        lo = (j - 1) * math.pi / 2
        hi = min(j * math.pi / 2, th)
        even = j % 2 == 1
        f = _even_condition if even else _odd_condition
        if f(lo, th) * f(hi, th) > 0:
            # theta sits exactly on the lower bracket end: no level here
            break
        rho = brentq(f, lo, hi, args=(th,), xtol=1e-15, rtol=4 * np.finfo(float).eps)
        E = (2 * rho / spec.b) ** 2 - spec.V0
        if E < 0 and rho > 0:
            out.append(BoundState(E, Parity.EVEN if even else Parity.ODD, rho, len(out)))
        j += 1
    return out


def _bound_pieces(state: BoundState, spec: PotentialSpec, x):
    x = np.asarray(x, dtype=float)
    kap = math.sqrt(-state.E)
    q = 2.0 * state.rho / spec.b
    hb = spec.half_width
    edge = math.exp(-kap * hb)
    el, er = np.exp(kap * np.minimum(x, 0)), np.exp(-kap * np.maximum(x, 0))
    if state.parity is Parity.EVEN:
        amp = edge / math.cos(state.rho)
        ui, di = amp * np.cos(q * x), -amp * q * np.sin(q * x)
        ur, dr = er, -kap * er
    else:
        amp = -edge / math.sin(state.rho)
        ui, di = amp * np.sin(q * x), amp * q * np.cos(q * x)
        ur, dr = -er, kap * er
    ul, dl = el, kap * el
    u = np.where(x < -hb, ul, np.where(x > hb, ur, ui))
    du = np.where(x < -hb, dl, np.where(x > hb, dr, di))
    return u, du


def bound_norm(state: BoundState, spec: PotentialSpec) -> float:
    """L2 norm of the unnormalised parity solution (closed form)."""
    kap = math.sqrt(-state.E)
    q = 2.0 * state.rho / spec.b
    hb = spec.half_width
    edge2 = math.exp(-2 * kap * hb)
    tails = edge2 / kap  # both sides
    if state.parity is Parity.EVEN:
        inner = edge2 / math.cos(state.rho) ** 2 * (hb + math.sin(q * spec.b) / (2 * q))
    else:
        inner = edge2 / math.sin(state.rho) ** 2 * (hb - math.sin(q * spec.b) / (2 * q))
    return math.sqrt(tails + inner)


def bound_wavefunction(state: BoundState, spec: PotentialSpec, x, normalize: bool = False):
    """Parity eigenfunction of a bound level at ``x``."""
    u, _ = _bound_pieces(state, spec, x)
    if normalize:
        u = u / bound_norm(state, spec)
    return u.item() if np.ndim(u) == 0 else u


@dataclass(frozen=True)
class BoundWave:
    """Normalised bound state exposing ``energy`` and ``evaluate``."""

    state: BoundState
    spec: PotentialSpec

    @property
    def energy(self) -> float:
        return self.state.E

    def evaluate(self, x):
        u, du = _bound_pieces(self.state, self.spec, x)
        n = bound_norm(self.state, self.spec)
        u, du = u / n, du / n
        if np.ndim(u) == 0:
            return float(u), float(du)
        return u, du
