"""Phase-space grid container, initial data and snapshot I/O."""
from __future__ import annotations

import csv
import enum
import math
import struct
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

MIN_POINTS = 8

# little-endian: magic, version, nq, np, is_complex, q_min, q_max, p_min, p_max, t
_HEADER = struct.Struct("<4sIIII5d")
_MAGIC = b"EPSW"
_VERSION = 1


@dataclass(frozen=True, eq=False)
class PhaseGrid:
    """Wigner function sampled at cell centres of a rectangular (q, p) box.

    ``values[i, j]`` is ``w(q_i, p_j)`` with ``q_i = q_min + (i + 1/2) dq``.
    Midpoint quadrature is therefore a plain weighted sum.
    """

    q_min: float
    q_max: float
    p_min: float
    p_max: float
    values: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        if not (self.q_min < self.q_max and self.p_min < self.p_max):
            raise ValueError("grid bounds must be strictly ordered")
        values = np.array(self.values, copy=True)
        if values.ndim != 2 or min(values.shape) < MIN_POINTS:
            raise ValueError(f"values must be a 2D array with at least {MIN_POINTS} points per axis")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_function(cls, fn, q_min, q_max, p_min, p_max, nq, np_, t=0.0) -> "PhaseGrid":
        q = _centres(q_min, q_max, nq)
        p = _centres(p_min, p_max, np_)
        Q, P = np.meshgrid(q, p, indexing="ij")
        return cls(q_min, q_max, p_min, p_max, fn(Q, P), t)

    @property
    def nq(self) -> int:
        return self.values.shape[0]

    @property
    def np(self) -> int:
        return self.values.shape[1]

    @property
    def dq(self) -> float:
        return (self.q_max - self.q_min) / self.nq

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np

    @property
    def q(self) -> np.ndarray:
        return _centres(self.q_min, self.q_max, self.nq)

    @property
    def p(self) -> np.ndarray:
        return _centres(self.p_min, self.p_max, self.np)

    def mesh(self):
        return np.meshgrid(self.q, self.p, indexing="ij")

    @property
    def bounds(self):
        return (self.q_min, self.q_max, self.p_min, self.p_max)

    def mass(self):
        return self.values.sum() * self.dq * self.dp

    def with_values(self, values, t=None) -> "PhaseGrid":
        return replace(self, values=values, t=self.t if t is None else t)

    # snapshot I/O --------------------------------------------------------
    def to_csv(self, path):
        Q, P = self.mesh()
        complex_ = np.iscomplexobj(self.values)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["q", "p", "w_re", "w_im"] if complex_ else ["q", "p", "w"])
            for qv, pv, wv in zip(Q.ravel(), P.ravel(), self.values.ravel()):
                row = [repr(float(qv)), repr(float(pv))]
                if complex_:
                    row += [repr(float(wv.real)), repr(float(wv.imag))]
                else:
                    row.append(repr(float(wv)))
                writer.writerow(row)

    def to_bytes(self) -> bytes:
        complex_ = np.iscomplexobj(self.values)
        header = _HEADER.pack(_MAGIC, _VERSION, self.nq, self.np, int(complex_),
                              self.q_min, self.q_max, self.p_min, self.p_max, float(self.t))
        data = self.values.astype("<c16" if complex_ else "<f8", copy=False)
        return header + np.ascontiguousarray(data).tobytes(order="C")

    @classmethod
    def from_bytes(cls, blob: bytes) -> "PhaseGrid":
        magic, version, nq, np_, is_complex, q0, q1, p0, p1, t = _HEADER.unpack_from(blob)
        if magic != _MAGIC or version != _VERSION:
            raise ValueError("not a phase-grid dump (bad magic or version)")
        dtype = "<c16" if is_complex else "<f8"
        values = np.frombuffer(blob, dtype=dtype, offset=_HEADER.size, count=nq * np_)
        return cls(q0, q1, p0, p1, values.reshape(nq, np_).astype(complex if is_complex else float), t)

    def save(self, path):
        Path(path).write_bytes(self.to_bytes())

    @classmethod
    def load(cls, path) -> "PhaseGrid":
        return cls.from_bytes(Path(path).read_bytes())


def _centres(lo, hi, n):
    h = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * h


class InitialKind(str, enum.Enum):
    GAUSSIAN = "GaussianPacket"
    DELTA_LINE = "MollifiedDeltaLine"


@dataclass(frozen=True)
class InitialCondition:
    """Initial Wigner function.

    ``GaussianPacket`` is a unit-mass product Gaussian centred at ``(q0, p0)``.
    ``MollifiedDeltaLine`` is the separable stationary profile
    ``c_norm exp(-k m q / p) G_sp(p - a)`` with ``a = p0`` (see
    :func:`epswigner.dynamics.frames.analytic_w`).
    """

    kind: InitialKind = InitialKind.GAUSSIAN
    q0: float = 0.0
    p0: float = 0.0
    sq: float = 1.0
    sp: float = 1.0
    k: float = 0.0
    c_norm: float = 1.0
    m: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", InitialKind(self.kind))
        if not (self.sq > 0 and self.sp > 0):
            raise ValueError("initial widths must be positive")
        if self.kind is InitialKind.DELTA_LINE and self.p0 == 0:
            raise ZeroDivisionError("MollifiedDeltaLine needs a nonzero momentum location a = p0")

    def shifted(self, dq: float = 0.0, dp: float = 0.0) -> "InitialCondition":
        return replace(self, q0=self.q0 + dq, p0=self.p0 + dp)

    def __call__(self, q, p):
        q = np.asarray(q)
        p = np.asarray(p)
        gp = np.exp(-0.5 * ((p - self.p0) / self.sp) ** 2) / (math.sqrt(2 * math.pi) * self.sp)
        if self.kind is InitialKind.GAUSSIAN:
            gq = np.exp(-0.5 * ((q - self.q0) / self.sq) ** 2) / (math.sqrt(2 * math.pi) * self.sq)
            return gq * gp
        return self.c_norm * np.exp(-self.k * self.m * q / p) * gp

    def support_box(self, nsigma: float = 7.0):
        return (self.q0 - nsigma * self.sq, self.q0 + nsigma * self.sq,
                self.p0 - nsigma * self.sp, self.p0 + nsigma * self.sp)
