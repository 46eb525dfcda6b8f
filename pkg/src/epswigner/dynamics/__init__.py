from ..hamiltonian import TransportField, kanai_transport_field, transport_coefficients
from .characteristics import (
    CharacteristicEnsemble,
    ExtrapolationWarning,
    evolve_characteristics,
    flow,
)
from .frames import (
    UnsupportedFrameError,
    analytic_w,
    literal_mollification_defect,
    moving_frame_A,
    moving_frame_phi,
    reduced_residual,
)
from .grid import InitialCondition, InitialKind, PhaseGrid
from .semilagrangian import AccuracyWarning, backtrace, evolve_semilagrangian

__all__ = [
    "AccuracyWarning",
    "CharacteristicEnsemble",
    "ExtrapolationWarning",
    "InitialCondition",
    "InitialKind",
    "PhaseGrid",
    "TransportField",
    "UnsupportedFrameError",
    "analytic_w",
    "backtrace",
    "evolve_characteristics",
    "evolve_semilagrangian",
    "flow",
    "kanai_transport_field",
    "literal_mollification_defect",
    "moving_frame_A",
    "moving_frame_phi",
    "reduced_residual",
    "transport_coefficients",
]
