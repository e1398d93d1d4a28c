"""Resonances, Gamow-Siegert functions and Darboux deformations of square wells and barriers."""

from .darboux import (
    DeformedPotential1,
    DeformedPotential2,
    DeformedState,
    deform1,
    deform1_state,
    deform2,
    deform2_state,
    new_eigenstate,
    transformed_scattering,
)
from .errors import (
    DomainError,
    Gamow1DError,
    NoConvergence,
    NodeError,
    NoPeaksError,
    NotAPole,
    PoleError,
    QuadrantError,
    ZeroVelocityError,
)
from .gamow import GamowFunction, Variant, build_gamow, gamow_from_pole
from .potentials import Kind, PotentialSpec, n_inf, theta
from .resonances import (
    Resonance,
    analytic_resonances,
    bound_states,
    graphical_resonance,
    graphical_resonances,
    refine_pole,
    scan_transmission,
)
from .scattering import amplitudes, delta_fn, transmission_coefficient

__version__ = "0.1.0"
