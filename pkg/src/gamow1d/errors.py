"""Exception hierarchy shared by all modules."""


class Gamow1DError(Exception):
    """Base class for computational failures raised by the library."""


class DomainError(Gamow1DError, ValueError):
    """An input lies outside the domain of the requested operation."""


class PoleError(Gamow1DError):
    """Amplitudes were requested (numerically) on top of a pole of S."""


class NoConvergence(Gamow1DError):
    """An iterative solver exhausted its iteration budget."""


class QuadrantError(Gamow1DError):
    """A kinetic parameter lies in the wrong quadrant of the k-plane."""


WrongQuadrant = QuadrantError


class NotAPole(Gamow1DError):
    """A decaying Gamow function was requested away from a zero of Delta."""


class NodeError(Gamow1DError):
    """The superpotential is singular because u(x) vanishes."""


class ZeroVelocityError(Gamow1DError):
    """The flux velocity vanishes, so eps_I / v is singular."""


class NoPeaksError(Gamow1DError):
    """A transmission scan found no accepted resonance peak.

    The partially filled scan (grid and samples) is kept on ``result`` so
    callers can still emit it.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
