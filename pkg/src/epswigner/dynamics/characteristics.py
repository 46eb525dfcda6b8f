"""Exact characteristic transport of the Wigner function.

Both Kanai gauges have affine characteristic flows with closed forms. In the
A-gauge ``p`` is conserved and

    q(t1) = q(t0) + p D(t0, t1) + K(t1) - K(t0),

with ``D = int exp(-alpha s)/m ds`` and ``K`` the antiderivative of the
steady kinetic velocity. In the phi-gauge the momentum drifts by the gauge
shift ``S(t) = -(e/c) A(t)``. Generic polynomial fields fall back to an
adaptive ODE integration.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import quad, solve_ivp

from ..gauges import (
    Gauge,
    HarmonicDrive,
    PhysicalParams,
    damping_integral,
    gauge_momentum_shift,
    kinetic_velocity_antiderivative,
)
from ..hamiltonian import TransportField

RTOL = 1e-10


class ExtrapolationWarning(UserWarning):
    pass


def _kanai_flow(q, p, t0, t1, gauge: Gauge, params, drive):
    D = damping_integral(params, t0, t1)
    dK = kinetic_velocity_antiderivative(drive, params, t1) - kinetic_velocity_antiderivative(drive, params, t0)
    if gauge is Gauge.A:
        return q + p * D + dK, p + 0 * D
    S0 = gauge_momentum_shift(drive, params, t0)
    S1 = gauge_momentum_shift(drive, params, t1)
    return q + (p - S0) * D + dK, p + (S1 - S0)


def _quad(fn, t0, t1):
    """Complex-safe adaptive quadrature at relative tolerance RTOL."""
    if t0 == t1:
        return 0.0
    re = quad(lambda s: np.real(fn(s)), t0, t1, epsrel=RTOL, epsabs=0, limit=500)[0]
    if np.iscomplexobj(fn(0.5 * (t0 + t1))):
        im = quad(lambda s: np.imag(fn(s)), t0, t1, epsrel=RTOL, epsabs=0, limit=500)[0]
        return complex(re, im)
    return re


def _kanai_flow_quadrature(q, p, t0, t1, gauge: Gauge, params, drive):
    """Same flow with every time integral done by adaptive quadrature."""
    a, m, e = params.alpha, params.m, params.e

    def shift_rate(s):
        return gauge_momentum_shift(drive, params, s) * math.exp(-a * s) / m

    D = _quad(lambda s: math.exp(-a * s) / m, t0, t1)
    dK = _quad(shift_rate, t0, t1)
    if gauge is Gauge.A:
        return q + p * D + dK, p + 0 * D
    # dp/ds = e E(s) exp(alpha s)
    dP = _quad(lambda s: e * drive.field(s) * math.exp(a * s), t0, t1)
    S0 = gauge_momentum_shift(drive, params, t0)
    # (p - S0 + S(s)) with S(s) - S0 = int_{t0}^{s} e E exp(alpha u) du
    return q + (p - S0) * D + dK, p + dP


def _ode_flow(q, p, t0, t1, field: TransportField, with_source=False):
    q = np.asarray(q)
    p = np.asarray(p)
    shape = np.broadcast(q, p).shape
    qf = np.broadcast_to(q, shape).ravel()
    pf = np.broadcast_to(p, shape).ravel()
    n = qf.size
    if t0 == t1:
        out = (qf.reshape(shape), pf.reshape(shape))
        return out + (np.zeros(shape),) if with_source else out

    def rhs(s, y):
        qq, pp = y[:n], y[n:2 * n]
        vq, vp = field.velocity(qq, pp, s)
        parts = [np.broadcast_to(vq, qq.shape), np.broadcast_to(vp, pp.shape)]
        if with_source:
            src = field.source(qq, pp, s) if field.source is not None else 0.0
            parts.append(np.broadcast_to(src, qq.shape))
        return np.concatenate(parts)

    y0 = np.concatenate([qf, pf] + ([np.zeros(n)] if with_source else []))
    sol = solve_ivp(rhs, (t0, t1), y0, method="DOP853", rtol=RTOL, atol=1e-13)
    if not sol.success:
        raise RuntimeError(f"characteristic integration failed: {sol.message}")
    y = sol.y[:, -1]
    out = (y[:n].reshape(shape), y[n:2 * n].reshape(shape))
    if with_source:
        out = out + (y[2 * n:].reshape(shape),)
    return out


def flow(q, p, t0, t1, field: TransportField, params: PhysicalParams,
         drive: HarmonicDrive, method: str = "auto"):
    """Map phase points at time ``t0`` along characteristics to time ``t1``.

    ``method`` is ``"closed"`` (Kanai closed form), ``"quadrature"`` (Kanai,
    integrals by adaptive quadrature), ``"ode"`` (generic) or ``"auto"``.
    """
    if method == "auto":
        method = "closed" if field.gauge is not None else "ode"
    if method == "ode":
        return _ode_flow(q, p, t0, t1, field)
    gauge = Gauge(field.gauge)
    q = np.asarray(q)
    p = np.asarray(p)
    if method == "closed":
        return _kanai_flow(q, p, t0, t1, gauge, params, drive)
    if method == "quadrature":
        return _kanai_flow_quadrature(q, p, t0, t1, gauge, params, drive)
    raise ValueError(f"unknown characteristic method {method!r}")


def _as_points(query):
    if isinstance(query, tuple) and len(query) == 2:
        return np.asarray(query[0]), np.asarray(query[1])
    arr = np.asarray(query)
    return arr[..., 0], arr[..., 1]


def evolve_characteristics(w0, field: TransportField, params: PhysicalParams,
                           drive: HarmonicDrive, t_final: float, query,
                           trust=None, method: str = "auto", return_flags=False):
    """Evaluate ``w(q, p, t_final)`` by back-tracing each query point to t = 0.

    Parameters
    ----------
    w0 : callable
        Initial Wigner function ``w0(q, p)``.
    query : array (..., 2) or tuple (Q, P)
        Query points.
    trust : (q_min, q_max, p_min, p_max), optional
        Region where ``w0`` is trusted; feet outside trigger an
        :class:`ExtrapolationWarning` and are reported in the flags.
    """
    if t_final < 0:
        raise ValueError("t_final must be >= 0")
    Q, P = _as_points(query)
    if method == "ode" or (method == "auto" and field.gauge is None):
        Qf, Pf, logw = _ode_flow(Q, P, t_final, 0.0, field, with_source=True)
        # integrating the source backwards gives -int_0^t source
        values = w0(Qf, Pf) * np.exp(-logw)
    else:
        Qf, Pf = flow(Q, P, t_final, 0.0, field, params, drive, method)
        values = w0(Qf, Pf)
    flags = np.zeros(np.shape(values), dtype=bool)
    if trust is not None:
        q0, q1, p0, p1 = trust
        Qr, Pr = np.real(Qf), np.real(Pf)
        flags = (Qr < q0) | (Qr > q1) | (Pr < p0) | (Pr > p1)
        if flags.any():
            warnings.warn(
                f"{int(flags.sum())} characteristic feet fall outside the trust domain",
                ExtrapolationWarning, stacklevel=2,
            )
    if return_flags:
        return values, flags
    return values


class CharacteristicEnsemble:
    """Weighted phase points carried exactly along the characteristics.

    Nodes are cell centres of an initial box; weights are ``w0 dq dp``.
    Both Kanai flows are volume preserving, so moments at any time are the
    pushed-forward midpoint sums.
    """

    def __init__(self, w0, box, n, field: TransportField, params, drive, method="auto"):
        q_min, q_max, p_min, p_max = box
        nq, np_ = (n, n) if np.isscalar(n) else n
        dq = (q_max - q_min) / nq
        dp = (p_max - p_min) / np_
        q = q_min + (np.arange(nq) + 0.5) * dq
        p = p_min + (np.arange(np_) + 0.5) * dp
        self.q0, self.p0 = np.meshgrid(q, p, indexing="ij")
        self.weights = w0(self.q0, self.p0) * dq * dp
        self.field = field
        self.params = params
        self.drive = drive
        self.method = method

    def positions(self, t):
        return flow(self.q0, self.p0, 0.0, t, self.field, self.params, self.drive, self.method)

    def mass(self):
        return self.weights.sum()

    def mean(self, observable, t):
        q, p = self.positions(t)
        mass = self.mass()
        if not np.real(mass) > 0:
            raise ValueError("ensemble has non-positive mass")
        return np.sum(observable(q, p) * self.weights) / mass
