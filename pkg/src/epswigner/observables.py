"""Expectation values, mean velocity and conductivity extraction."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from .dynamics.characteristics import CharacteristicEnsemble
from .dynamics.grid import PhaseGrid
from .gauges import Gauge, HarmonicDrive, PhysicalParams
from .hamiltonian import TransportField, kanai_transport_field

NOISY_FIT = 0.05
TRANSIENT_E_FOLDS = 5.0
MIN_PERIODS = 3.0


class DegenerateStateError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


class DivergentResponseError(ZeroDivisionError):
    pass


class NoisyFitWarning(UserWarning):
    pass


def expectation(observable, grid: PhaseGrid):
    """Mass-normalised midpoint-rule average of ``observable(q, p)`` over ``grid``."""
    mass = grid.mass()
    if not np.real(mass) > 0:
        raise DegenerateStateError(f"grid mass must be positive, got {mass}")
    Q, P = grid.mesh()
    O = observable(Q, P) if callable(observable) else np.asarray(observable)
    return np.sum(O * grid.values) * grid.dq * grid.dp / mass


def mean_velocity(gauge, state, params: PhysicalParams, drive: HarmonicDrive, t=None,
                  field: Optional[TransportField] = None):
    """``<dq/dt>`` at time ``t``: the pi_q coefficient of the Wigner generator, averaged.

    ``state`` is a :class:`PhaseGrid` (``t`` defaults to its time) or a
    :class:`CharacteristicEnsemble`.
    """
    if field is None:
        field = kanai_transport_field(Gauge(gauge), params, drive)
    if isinstance(state, PhaseGrid):
        t = state.t if t is None else t
        return expectation(lambda q, p: field.vq(q, p, t), state)
    if isinstance(state, CharacteristicEnsemble):
        if t is None:
            raise ValueError("an ensemble needs an explicit time")
        return state.mean(lambda q, p: field.vq(q, p, t), t)
    raise TypeError(f"unsupported state {type(state).__name__}")


@dataclass
class ConductivityEstimate:
    sigma: complex
    fit_residual: float
    reference: complex
    gauge: Optional[str] = None
    window: Tuple[float, float] = (0.0, 0.0)
    warnings: list = field(default_factory=list)

    @property
    def magnitude(self) -> float:
        return abs(self.sigma)

    @property
    def phase(self) -> float:
        return math.atan2(self.sigma.imag, self.sigma.real)

    def relative_error(self) -> float:
        return abs(self.sigma - self.reference) / abs(self.reference)

    def summary(self) -> dict:
        return {
            "gauge": self.gauge,
            "sigma_re": self.sigma.real,
            "sigma_im": self.sigma.imag,
            "magnitude": self.magnitude,
            "phase": self.phase,
            "residual": self.fit_residual,
            "reference_re": self.reference.real,
            "reference_im": self.reference.imag,
            "window": list(self.window),
        }


def drude_conductivity(params: PhysicalParams, omega: float) -> complex:
    """``N e^2 / (m (alpha + i omega))``."""
    s = complex(params.alpha, omega)
    if s == 0:
        raise DivergentResponseError("undamped DC response is unbounded (alpha = omega = 0)")
    return params.N * params.e ** 2 / (params.m * s)


def default_window(params: PhysicalParams, drive: HarmonicDrive, horizon: float,
                   burn_in: Optional[float] = None) -> Tuple[float, float]:
    """``[max(5/alpha, 2 periods), horizon]``; ``burn_in`` replaces 5/alpha when alpha = 0."""
    if params.alpha > 0:
        start = TRANSIENT_E_FOLDS / params.alpha
    elif burn_in is not None:
        start = burn_in
    else:
        raise InsufficientDataError("alpha = 0 needs an explicit burn-in")
    if drive.omega > 0:
        start = max(start, 2 * drive.period)
    return (start, horizon)


def minimum_horizon(params: PhysicalParams, drive: HarmonicDrive, burn_in=None,
                    dc_span: float = 10.0) -> float:
    start = default_window(params, drive, 0.0, burn_in)[0]
    return start + (MIN_PERIODS * drive.period if drive.omega > 0 else dc_span)


def conductivity_timeseries(t, velocity, drive: HarmonicDrive, params: PhysicalParams,
                            window=None, gauge=None, burn_in=None) -> ConductivityEstimate:
    """Extract sigma from a sampled ``<dq/dt>(t)``.

    AC: least squares ``<dq/dt> ~ Re[V exp(i(omega t + phase))]`` (or the
    complex model for a phasor drive) and ``sigma = N e V / E0``.
    DC: ``sigma = N e mean(<dq/dt>) / E`` over the window.
    """
    t = np.asarray(t, dtype=float)
    v = np.asarray(velocity)
    if drive.E0 == 0:
        raise InsufficientDataError("a zero drive cannot define a conductivity")
    if window is None:
        window = default_window(params, drive, float(t[-1]), burn_in)
    t0, t1 = window
    mask = (t >= t0) & (t <= t1)
    ts, vs = t[mask], v[mask]
    span = ts[-1] - ts[0] if ts.size else 0.0
    if drive.omega > 0:
        # tolerate sampling jitter of one step at the window ends
        step = np.min(np.diff(ts)) if ts.size > 1 else 0.0
        if ts.size < 8 or span < MIN_PERIODS * drive.period - 2 * step:
            raise InsufficientDataError(
                f"fit window [{t0}, {t1}] covers {span / drive.period:.2f} periods; need {MIN_PERIODS}"
            )
        theta = drive.omega * ts + drive.phase
        if drive.is_phasor:
            basis = np.exp(1j * theta)
            V = np.vdot(basis, vs) / np.vdot(basis, basis)
            model = V * basis
        else:
            X = np.column_stack([np.cos(theta), -np.sin(theta)])
            coef, *_ = np.linalg.lstsq(X, np.real(vs), rcond=None)
            V = complex(coef[0], coef[1])
            model = X @ coef
        scale = params.N * params.e / drive.E0
    else:
        if ts.size < 2:
            raise InsufficientDataError("DC averaging window holds fewer than two samples")
        E = complex(drive.field(0.0))
        V = complex(np.mean(vs))
        model = np.full(vs.shape, V)
        scale = params.N * params.e / E
    sigma = complex(V * scale)
    rms = math.sqrt(np.mean(np.abs(vs) ** 2))
    residual = math.sqrt(np.mean(np.abs(vs - model) ** 2)) / rms if rms > 0 else 0.0
    est = ConductivityEstimate(sigma, residual, drude_conductivity(params, drive.omega),
                               None if gauge is None else Gauge(gauge).value, (float(t0), float(t1)))
    if residual > NOISY_FIT:
        msg = f"phasor fit residual {residual:.3g} exceeds {NOISY_FIT}"
        est.warnings.append(msg)
        warnings.warn(msg, NoisyFitWarning, stacklevel=2)
    return est


def fit_decay_rate(t, velocity, window=None) -> float:
    """Slope of ``log|<dq/dt>|`` against ``t`` (least squares)."""
    t = np.asarray(t, dtype=float)
    v = np.abs(np.asarray(velocity))
    if window is not None:
        mask = (t >= window[0]) & (t <= window[1])
        t, v = t[mask], v[mask]
    if t.size < 2 or np.any(v <= 0):
        raise InsufficientDataError("decay fit needs at least two nonzero samples")
    slope, _ = np.polyfit(t, np.log(v), 1)
    return float(slope)
