"""Square well and square barrier models.

Units follow hbar = 2m = 1, so energies are squared wavenumbers.  A model is
fixed by its kind, a positive strength ``V0`` and a positive width ``b``; the
potential is nonzero on ``|x| <= b/2`` (the edges belong to the interior).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

from .errors import DomainError


class Kind(str, enum.Enum):
    WELL = "well"
    BARRIER = "barrier"


@dataclass(frozen=True)
class PotentialSpec:
    """Piecewise-constant potential of strength ``V0`` and width ``b``.

    The sign is carried by ``kind``: a well sits at ``-V0``, a barrier at
    ``+V0``.
    """

    kind: Kind
    V0: float
    b: float

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "V0", float(self.V0))
        object.__setattr__(self, "b", float(self.b))
        if not (self.V0 > 0 and math.isfinite(self.V0)):
            raise DomainError(f"V0 must be finite and > 0, got {self.V0!r}")
        if not (self.b > 0 and math.isfinite(self.b)):
            raise DomainError(f"b must be finite and > 0, got {self.b!r}")

    @classmethod
    def well(cls, V0: float, b: float) -> "PotentialSpec":
        return cls(Kind.WELL, V0, b)

    @classmethod
    def barrier(cls, V0: float, b: float) -> "PotentialSpec":
        return cls(Kind.BARRIER, V0, b)

    @property
    def half_width(self) -> float:
        return 0.5 * self.b

    @property
    def theta(self) -> float:
        """Strength-range parameter ``(b/2) sqrt(V0)``."""
        return theta(self.V0, self.b)

    @property
    def signed_strength(self) -> float:
        """Value of the potential inside the interaction zone."""
        return -self.V0 if self.kind is Kind.WELL else self.V0

    @property
    def q2_shift(self) -> float:
        """Constant ``c`` in ``q**2 = k**2 + c``."""
        return -self.signed_strength

    def __call__(self, x: ArrayLike):
        return evaluate_potential(self, x)


def theta(V0: float, b: float) -> float:
    return 0.5 * b * math.sqrt(V0)


def n_inf(V0: float, b: float) -> int:
    """Ceiling of ``2 theta / pi``: the lowest well-resonance label."""
    return math.ceil(2.0 * theta(V0, b) / math.pi)


def evaluate_potential(spec: PotentialSpec, x: ArrayLike):
    """Pointwise value of V(x); scalar in, scalar out."""
    xa = np.asarray(x, dtype=float)
    out = np.where(np.abs(xa) <= spec.half_width, spec.signed_strength, 0.0)
    if out.ndim == 0:
        return float(out)
    return out


def interaction_parameter(spec: PotentialSpec, k):
    """Interaction parameter ``q`` with ``q**2 = k**2 +/- V0``.

    The principal root is returned: ``Re q >= 0``, and ``Im q >= 0`` on the
    imaginary axis.  Accepts scalars or arrays.
    """
    k = np.asarray(k, dtype=complex)
    # factored form keeps precision near the threshold k**2 ~ V0
    r = math.sqrt(spec.V0) * (1j if spec.kind is Kind.WELL else 1.0)
    q = np.sqrt((k - r) * (k + r))
    # np.sqrt honours the sign of a zero imaginary part: sqrt(-1-0j) = -1j
    flip = (q.real == 0.0) & (q.imag < 0.0)
    q = np.where(flip, -q, q)
    if q.ndim == 0:
        return complex(q)
    return q
