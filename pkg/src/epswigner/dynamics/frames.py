"""Moving frames that reduce both gauges to one transport equation, and its
closed-form separable solution.

In either frame the Wigner function obeys

    dw/dtau = -(eta / m) exp(-alpha tau) dw/dxi,

which is solved by ``exp(-(k/alpha) exp(-alpha tau)) exp(-k m xi / a) delta(eta - a)``.
"""
from __future__ import annotations

import math

import numpy as np

from ..gauges import HarmonicDrive, PhysicalParams


class UnsupportedFrameError(ValueError):
    pass


def _check(drive: HarmonicDrive):
    if not drive.is_phasor:
        raise UnsupportedFrameError("moving frames are defined for the complex phasor drive only")
    if not drive.omega > 0:
        raise UnsupportedFrameError("moving frames are singular at omega = 0 (use DC averaging)")


def _xi(q, t, params: PhysicalParams, drive: HarmonicDrive):
    s = complex(params.alpha, drive.omega)
    E = drive.field(t)
    return q - params.e * E / (1j * params.m * drive.omega * s)


def moving_frame_A(q, p, t, params: PhysicalParams, drive: HarmonicDrive):
    """``(xi, eta, tau)`` with ``xi = -e E / (i m omega (alpha + i omega)) + q``, ``eta = p``."""
    _check(drive)
    return _xi(q, t, params, drive), p, t


def moving_frame_phi(q, p, t, params: PhysicalParams, drive: HarmonicDrive):
    """``(xi', eta', tau')`` with ``eta' = p - e E exp(alpha t) / (alpha + i omega)``."""
    _check(drive)
    s = complex(params.alpha, drive.omega)
    eta = p - params.e * drive.field(t) * np.exp(params.alpha * np.asarray(t)) / s
    return _xi(q, t, params, drive), eta, t


def frame_velocity(eta, tau, params: PhysicalParams):
    """Advection speed in xi of the reduced equation."""
    return eta * np.exp(-params.alpha * np.asarray(tau)) / params.m


def mollifier(x, width):
    return np.exp(-0.5 * (x / width) ** 2) / (math.sqrt(2 * math.pi) * width)


def analytic_w(xi, eta, t, c_norm, k, a, params: PhysicalParams, sp=0.05,
               mollify="superposed"):
    """Separable solution of the reduced transport equation.

    ``mollify="literal"`` replaces the delta by a Gaussian of width ``sp`` and
    keeps ``exp(-k m xi / a)``; it only solves the equation as ``sp -> 0``.
    ``mollify="superposed"`` (default) is the same Gaussian superposition of
    delta solutions over ``a``, giving ``exp(-k m xi / eta)``, which is an
    exact solution for every ``sp``. Both coincide on ``eta = a``.
    """
    if not params.alpha > 0:
        raise ValueError("analytic solution requires alpha > 0")
    if a == 0:
        raise ZeroDivisionError("momentum location a must be nonzero")
    time_factor = np.exp(-(k / params.alpha) * np.exp(-params.alpha * np.asarray(t)))
    if mollify == "superposed":
        rate = k * params.m / np.asarray(eta)
    elif mollify == "literal":
        rate = k * params.m / a
    else:
        raise ValueError(f"unknown mollifier {mollify!r}")
    return c_norm * time_factor * np.exp(-rate * xi) * mollifier(np.asarray(eta) - a, sp)


def literal_mollification_defect(xi, eta, t, c_norm, k, a, params: PhysicalParams, sp=0.05):
    """Exact value of ``dW/dtau + (eta/m) exp(-alpha tau) dW/dxi`` for the literal profile."""
    w = analytic_w(xi, eta, t, c_norm, k, a, params, sp, mollify="literal")
    return k * np.exp(-params.alpha * np.asarray(t)) * (1 - np.asarray(eta) / a) * w


def reduced_residual(w_fn, xi, eta, tau, h, params: PhysicalParams):
    """Centred finite-difference value of the reduced operator applied to ``w_fn``.

    Uses step ``h`` in both ``xi`` and ``tau`` (second order).
    """
    dw_dtau = (w_fn(xi, eta, tau + h) - w_fn(xi, eta, tau - h)) / (2 * h)
    dw_dxi = (w_fn(xi + h, eta, tau) - w_fn(xi - h, eta, tau)) / (2 * h)
    return dw_dtau + frame_velocity(eta, tau, params) * dw_dxi
