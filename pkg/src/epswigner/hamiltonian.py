"""Extended Hamiltonians built from a (q, p) polynomial Hamiltonian.

``build_sn_hamiltonian`` gives ``H(p + pi_q, q) - H(p, q + pi_p)`` and
``build_wigner_hamiltonian`` gives
``H(p + pi_q/2, q - pi_p/2) - H(p - pi_q/2, q + pi_p/2)``. Shifts are expanded
as commuting Taylor shifts with every momentum factor placed to the right,
which is the finite-series form ``sum_n (1/n!) d^n H ... pi^n``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Tuple, Union

import numpy as np

from .algebra import OperatorPolynomial
from .gauges import (
    Gauge,
    HarmonicDrive,
    PhysicalParams,
    a_gauge_potential,
)


class HamiltonianKind(str, enum.Enum):
    KANAI_A = "KanaiAGauge"
    KANAI_PHI = "KanaiPhiGauge"
    CUSTOM = "CustomPolynomial"


class NonTransportGeneratorError(ValueError):
    pass


QPMonomial = Tuple[int, int]
Coefficient = Union[complex, float, Callable[[float], complex]]


@dataclass(frozen=True)
class HamiltonianSpec:
    """A (q, p) polynomial Hamiltonian with time-dependent coefficients.

    ``coefficients`` maps ``(a, b)`` (meaning ``q^a p^b``) to a constant or a
    callable of time.
    """

    kind: HamiltonianKind
    coefficients: Mapping[QPMonomial, Coefficient]
    params: PhysicalParams = field(default_factory=PhysicalParams)

    def at(self, t: float) -> dict:
        out = {}
        for mono, coef in self.coefficients.items():
            value = complex(coef(t)) if callable(coef) else complex(coef)
            if value != 0:
                out[tuple(mono)] = value
        return out

    def degree(self, t: float = 0.0) -> int:
        return max((a + b for a, b in self.at(t)), default=-1)


def kanai_hamiltonian(gauge, params: PhysicalParams, drive: HarmonicDrive) -> HamiltonianSpec:
    """Kanai Hamiltonian in the requested gauge as a (q, p) polynomial."""
    gauge = Gauge(gauge)
    m, e, c, alpha = params.m, params.e, params.c, params.alpha

    def kinetic(t):
        return math.exp(-alpha * t) / (2 * m)

    if gauge is Gauge.A:
        def linear(t):
            A = complex(a_gauge_potential(drive, params, t))
            return -(e / c) * A * math.exp(-alpha * t) / m

        def constant(t):
            A = complex(a_gauge_potential(drive, params, t))
            return (e / c) ** 2 * A * A * math.exp(-alpha * t) / (2 * m)

        coeffs = {(0, 2): kinetic, (0, 1): linear, (0, 0): constant}
        return HamiltonianSpec(HamiltonianKind.KANAI_A, coeffs, params)

    def potential(t):
        # e phi exp(alpha t) with phi = -q E(t)
        return -e * complex(drive.field(t)) * math.exp(alpha * t)

    coeffs = {(0, 2): kinetic, (1, 0): potential}
    return HamiltonianSpec(HamiltonianKind.KANAI_PHI, coeffs, params)


def custom_hamiltonian(coefficients: Mapping[QPMonomial, Coefficient],
                       params: Optional[PhysicalParams] = None) -> HamiltonianSpec:
    return HamiltonianSpec(HamiltonianKind.CUSTOM, dict(coefficients), params or PhysicalParams())


def _shifted(coeffs: Mapping[QPMonomial, complex], q_shift: float, p_shift: float,
             hbar: float) -> dict:
    """``H(p + p_shift pi_q, q + q_shift pi_p)`` with momenta placed rightmost."""
    out: dict = {}
    for (a, b), h in coeffs.items():
        for j in range(a + 1):
            for l in range(b + 1):
                w = math.comb(a, j) * math.comb(b, l) * q_shift ** j * p_shift ** l
                if w == 0:
                    continue
                mono = (a - j, b - l, l, j)
                out[mono] = out.get(mono, 0j) + h * w
    return out


def _difference(plus: dict, minus: dict, hbar: float) -> OperatorPolynomial:
    out = dict(plus)
    for mono, coef in minus.items():
        out[mono] = out.get(mono, 0j) - coef
    return OperatorPolynomial(out, hbar)


def build_sn_hamiltonian(h: HamiltonianSpec, t: float) -> OperatorPolynomial:
    coeffs = h.at(t)
    hbar = h.params.hbar
    return _difference(_shifted(coeffs, 0.0, 1.0, hbar), _shifted(coeffs, 1.0, 0.0, hbar), hbar)


def build_wigner_hamiltonian(h: HamiltonianSpec, t: float) -> OperatorPolynomial:
    coeffs = h.at(t)
    hbar = h.params.hbar
    return _difference(_shifted(coeffs, -0.5, 0.5, hbar), _shifted(coeffs, 0.5, -0.5, hbar), hbar)


# transport ---------------------------------------------------------------

def _poly_fn(coeffs: Mapping[QPMonomial, complex]):
    coeffs = dict(coeffs)
    real = all(c.imag == 0 for c in coeffs.values())
    if real:
        coeffs = {k: c.real for k, c in coeffs.items()}

    def evaluate(q, p):
        # result keeps the smallest broadcast shape the monomials need
        acc = 0.0 if real else 0j
        for (a, b), c in coeffs.items():
            term = c
            if a:
                term = term * np.asarray(q) ** a
            if b:
                term = term * np.asarray(p) ** b
            acc = acc + term
        return np.asarray(acc)

    return evaluate


@dataclass(frozen=True)
class TransportField:
    """Velocity field of ``dw/dt + vq dw/dq + vp dw/dp = source * w``.

    ``gauge`` tags the Kanai closed forms (``"A"`` / ``"phi"``); ``None``
    means a generic field that must be integrated numerically.
    """

    vq: Callable
    vp: Callable
    gauge: Optional[str] = None
    source: Optional[Callable] = None

    def velocity(self, q, p, t):
        return self.vq(q, p, t), self.vp(q, p, t)


def _split_generator(hw: OperatorPolynomial):
    if hw.pi_degree() > 1:
        raise NonTransportGeneratorError(
            f"generator has momentum degree {hw.pi_degree()} > 1; it is not a first-order "
            "transport operator, check it through a finite-difference residual instead"
        )
    vq, vp, src = {}, {}, {}
    for (a, b, c, d), coef in hw.terms.items():
        if (c, d) == (1, 0):
            vq[(a, b)] = coef
        elif (c, d) == (0, 1):
            vp[(a, b)] = coef
        else:
            # i hbar dw/dt = coef * w  ->  rate coef / (i hbar)
            src[(a, b)] = coef / (1j * hw.hbar)
    return vq, vp, src


def transport_coefficients(hw, gauge: Optional[str] = None) -> TransportField:
    """Advection velocities of ``i hbar dw/dt = H_w w`` with ``pi = -i hbar d``.

    ``hw`` is either a fixed generator or a callable ``t -> OperatorPolynomial``.
    A momentum-free remainder (only produced by ordering of mixed ``q p``
    terms) is returned as ``source``; it is ``None`` when absent.
    """
    if isinstance(hw, OperatorPolynomial):
        vq, vp, src = _split_generator(hw)
        fq, fp = _poly_fn(vq), _poly_fn(vp)
        fs = _poly_fn(src) if src else None
        return TransportField(
            lambda q, p, t: fq(q, p),
            lambda q, p, t: fp(q, p),
            gauge,
            (lambda q, p, t: fs(q, p)) if fs else None,
        )

    build = hw

    def component(index):
        def evaluate(q, p, t):
            parts = _split_generator(build(float(t)))
            return _poly_fn(parts[index])(q, p)
        return evaluate

    return TransportField(component(0), component(1), gauge, component(2))


def kanai_transport_field(gauge, params: PhysicalParams, drive: HarmonicDrive) -> TransportField:
    """Transport field of the Kanai problem, read off the Wigner generator at each time."""
    gauge = Gauge(gauge)
    spec = kanai_hamiltonian(gauge, params, drive)
    return transport_coefficients(lambda t: build_wigner_hamiltonian(spec, t), gauge.value)
