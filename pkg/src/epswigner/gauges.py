"""Physical scenario: parameters, harmonic drive and the two electromagnetic gauges.

The damped (Kanai) Hamiltonian of a charge in a uniform field is

    H = (p - e A / c)^2 exp(-alpha t) / 2m + e phi exp(alpha t)

and the field is represented either through a time-dependent vector
potential (``A``-gauge, ``phi = 0``) or a linear scalar potential
(``phi``-gauge, ``A = 0``).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class Representation(str, enum.Enum):
    REAL_COSINE = "RealCosine"
    COMPLEX_PHASOR = "ComplexPhasor"


class Gauge(str, enum.Enum):
    A = "A"
    PHI = "phi"


class UndefinedNormalizationError(ValueError):
    """Raised when alpha = omega = 0, where A(t) has no steady antiderivative."""


@dataclass(frozen=True)
class PhysicalParams:
    m: float = 1.0
    e: float = 1.0
    c: float = 1.0
    alpha: float = 0.5
    hbar: float = 1.0
    N: int = 1

    def __post_init__(self):
        if not self.m > 0:
            raise ValueError(f"mass must be positive, got {self.m}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not self.alpha >= 0:
            raise ValueError(f"damping alpha must be >= 0, got {self.alpha}")
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"particle count N must be a positive integer, got {self.N}")
        if not math.isfinite(self.c) or self.c == 0:
            raise ValueError("c must be finite and nonzero")


@dataclass(frozen=True)
class HarmonicDrive:
    """Uniform field ``E0 cos(omega t + phase)`` or its phasor ``E0 exp(i(omega t + phase))``."""

    E0: float = 0.1
    omega: float = 2.0
    phase: float = 0.0
    representation: Representation = Representation.REAL_COSINE

    def __post_init__(self):
        if not math.isfinite(self.E0):
            raise ValueError("E0 must be finite")
        if not self.omega >= 0:
            raise ValueError(f"omega must be >= 0, got {self.omega}")
        object.__setattr__(self, "representation", Representation(self.representation))

    @property
    def is_phasor(self) -> bool:
        return self.representation is Representation.COMPLEX_PHASOR

    @property
    def period(self) -> float:
        return 2 * math.pi / self.omega if self.omega > 0 else math.inf

    def project(self, z):
        """Real part in RealCosine mode, identity in phasor mode."""
        return z if self.is_phasor else np.real(z)

    def phasor(self, t):
        return self.E0 * np.exp(1j * (self.omega * np.asarray(t) + self.phase))

    def field(self, t):
        """E(t)."""
        return self.project(self.phasor(t))

    def with_representation(self, rep) -> "HarmonicDrive":
        return HarmonicDrive(self.E0, self.omega, self.phase, Representation(rep))


def _rate(drive: HarmonicDrive, params: PhysicalParams) -> complex:
    s = complex(params.alpha, drive.omega)
    if s == 0:
        raise UndefinedNormalizationError(
            "alpha = omega = 0: the antiderivative of exp(alpha t) E(t) has no steady normalization"
        )
    return s


def a_gauge_potential(drive: HarmonicDrive, params: PhysicalParams, t):
    """``A(t) = -c * int^t exp(alpha s) E(s) ds`` with no additive constant.

    Phasor closed form ``-c E0 exp((alpha + i omega) t + i phase) / (alpha + i omega)``;
    RealCosine mode returns its real part.
    """
    s = _rate(drive, params)
    t = np.asarray(t, dtype=float)
    z = -params.c * drive.E0 * np.exp(s * t + 1j * drive.phase) / s
    return drive.project(z)


def phi_gauge_potential(drive: HarmonicDrive, q, t):
    """``phi(q, t) = -q E(t)``."""
    return -np.asarray(q) * drive.field(t)


def gauge_momentum_shift(drive: HarmonicDrive, params: PhysicalParams, t):
    """``-(e/c) A(t)``: how far the phi-gauge canonical momentum sits above the A-gauge one."""
    return -(params.e / params.c) * a_gauge_potential(drive, params, t)


def kinetic_velocity_antiderivative(drive: HarmonicDrive, params: PhysicalParams, t):
    """Antiderivative of ``gauge_momentum_shift(s) exp(-alpha s) / m``.

    In phasor form the integrand is ``e E(s) / (m (alpha + i omega))``, so the
    result is ``e E0 exp(i(omega t + phase)) / (m s i omega)`` for omega > 0
    and ``e E0 exp(i phase) t / (m alpha)`` in the DC limit.
    """
    s = _rate(drive, params)
    t = np.asarray(t, dtype=float)
    amp = params.e * drive.E0 * np.exp(1j * drive.phase) / (params.m * s)
    if drive.omega > 0:
        z = amp * np.exp(1j * drive.omega * t) / (1j * drive.omega)
    else:
        z = amp * t + 0j
    return drive.project(z)


def damping_integral(params: PhysicalParams, t0, t1):
    """``int_{t0}^{t1} exp(-alpha s) / m ds``."""
    t0 = np.asarray(t0, dtype=float)
    t1 = np.asarray(t1, dtype=float)
    a = params.alpha
    if a == 0:
        return (t1 - t0) / params.m
    # -expm1 keeps small alpha * dt accurate
    return np.exp(-a * t0) * -np.expm1(-a * (t1 - t0)) / (a * params.m)
