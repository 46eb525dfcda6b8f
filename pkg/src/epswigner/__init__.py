"""Extended phase space Wigner dynamics for a damped, driven charge."""
from .algebra import (
    AlgebraError,
    OperatorPolynomial,
    SeriesDivergenceError,
    adjoint_series,
    commutator,
    conjugate_by_wigner_unitary,
    multiply,
    relative_deviation,
    wigner_generator,
)
from .gauges import (
    Gauge,
    HarmonicDrive,
    PhysicalParams,
    Representation,
    a_gauge_potential,
    gauge_momentum_shift,
    phi_gauge_potential,
)
from .hamiltonian import (
    HamiltonianSpec,
    TransportField,
    build_sn_hamiltonian,
    build_wigner_hamiltonian,
    custom_hamiltonian,
    kanai_hamiltonian,
    kanai_transport_field,
    transport_coefficients,
)
from .observables import (
    ConductivityEstimate,
    conductivity_timeseries,
    drude_conductivity,
    expectation,
    mean_velocity,
)

__version__ = "0.1.0"
