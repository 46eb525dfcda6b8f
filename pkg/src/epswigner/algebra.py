"""Normal-ordered polynomial algebra over the extended phase-space operators.

Generators are ``q, p, pi_q, pi_p`` with the only nonvanishing commutators

    [pi_q, q] = -i hbar,    [pi_p, p] = -i hbar.

Every monomial is stored as an exponent tuple ``(a, b, c, d)`` meaning
``q^a p^b pi_q^c pi_p^d``, i.e. with both momenta to the right.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Tuple

Monomial = Tuple[int, int, int, int]

ONE: Monomial = (0, 0, 0, 0)
Q: Monomial = (1, 0, 0, 0)
P: Monomial = (0, 1, 0, 0)
PI_Q: Monomial = (0, 0, 1, 0)
PI_P: Monomial = (0, 0, 0, 1)

_NAMES = ("q", "p", "pi_q", "pi_p")


class AlgebraError(ValueError):
    """Contract violation inside the operator algebra (e.g. mismatched hbar)."""


class SeriesDivergenceError(ArithmeticError):
    pass


def _clean(terms: Mapping[Monomial, complex]) -> dict:
    out = {}
    for mono, coef in terms.items():
        if len(mono) != 4 or any(int(e) != e or e < 0 for e in mono):
            raise AlgebraError(f"invalid monomial exponents {mono!r}")
        coef = complex(coef)
        if coef != 0:
            out[tuple(int(e) for e in mono)] = coef
    return out


@dataclass(frozen=True, eq=False)
class OperatorPolynomial:
    """Immutable polynomial in ``q, p, pi_q, pi_p`` with complex coefficients."""

    terms: Mapping[Monomial, complex] = field(default_factory=dict)
    hbar: float = 1.0

    def __post_init__(self):
        if not self.hbar > 0:
            raise AlgebraError("hbar must be positive")
        object.__setattr__(self, "terms", MappingProxyType(_clean(self.terms)))

    # constructors -------------------------------------------------------
    @classmethod
    def constant(cls, value: complex, hbar: float = 1.0) -> "OperatorPolynomial":
        return cls({ONE: value}, hbar)

    @classmethod
    def monomial(cls, mono: Monomial, coef: complex = 1.0, hbar: float = 1.0) -> "OperatorPolynomial":
        return cls({tuple(mono): coef}, hbar)

    @classmethod
    def generators(cls, hbar: float = 1.0):
        """Return ``(q, p, pi_q, pi_p)`` as polynomials sharing ``hbar``."""
        return tuple(cls.monomial(m, 1.0, hbar) for m in (Q, P, PI_Q, PI_P))

    # structure ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, mono: Monomial) -> complex:
        return self.terms.get(tuple(mono), 0j)

    def pi_degree(self) -> int:
        """Largest total power of ``pi_q, pi_p`` in any term (-1 for zero)."""
        return max((c + d for (_, _, c, d) in self.terms), default=-1)

    def qp_degree(self) -> int:
        return max((a + b for (a, b, _, _) in self.terms), default=-1)

    def max_abs_coefficient(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def sorted_terms(self):
        return sorted(self.terms.items())

    # arithmetic -------------------------------------------------------------
    def _check(self, other: "OperatorPolynomial"):
        if self.hbar != other.hbar:
            raise AlgebraError(f"hbar mismatch: {self.hbar!r} vs {other.hbar!r}")

    def _coerce(self, other) -> "OperatorPolynomial":
        if isinstance(other, OperatorPolynomial):
            self._check(other)
            return other
        if isinstance(other, (int, float, complex)):
            return OperatorPolynomial.constant(other, self.hbar)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for mono, coef in other.terms.items():
            out[mono] = out.get(mono, 0j) + coef
        return OperatorPolynomial(out, self.hbar)

    __radd__ = __add__

    def __neg__(self):
        return OperatorPolynomial({m: -c for m, c in self.terms.items()}, self.hbar)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, factor: complex) -> "OperatorPolynomial":
        return OperatorPolynomial({m: c * factor for m, c in self.terms.items()}, self.hbar)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        if isinstance(other, OperatorPolynomial):
            return multiply(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if n < 0 or int(n) != n:
            raise AlgebraError("only non-negative integer powers are defined")
        result = OperatorPolynomial.constant(1.0, self.hbar)
        for _ in range(int(n)):
            result = multiply(result, self)
        return result

    def __eq__(self, other):
        if not isinstance(other, OperatorPolynomial):
            return NotImplemented
        return self.hbar == other.hbar and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.hbar, frozenset(self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return "OperatorPolynomial(0)"
        parts = []
        for mono, coef in self.sorted_terms():
            factors = [
                n if e == 1 else f"{n}^{e}" for n, e in zip(_NAMES, mono) if e
            ]
            parts.append(f"({coef:.6g})" + ("*" + "*".join(factors) if factors else ""))
        return "OperatorPolynomial(" + " + ".join(parts) + f", hbar={self.hbar})"

    def to_json(self) -> list:
        """Sorted ``[[a, b, c, d], [re, im]]`` pairs, stable for golden files."""
        return [[list(m), [c.real, c.imag]] for m, c in self.sorted_terms()]

    def map_coefficients(self, fn) -> "OperatorPolynomial":
        return OperatorPolynomial({m: fn(c) for m, c in self.terms.items()}, self.hbar)


def _falling(n: int, k: int) -> int:
    return math.perm(n, k)


def _momentum_past_position(c: int, a: int, hbar: float):
    """Expand ``pi^c x^a`` as ``sum_k coef_k x^(a-k) pi^(c-k)``.

    With pi = -i hbar d/dx this is the Leibniz rule.
    """
    out = []
    for k in range(min(a, c) + 1):
        coef = math.comb(c, k) * _falling(a, k) * (-1j * hbar) ** k
        out.append((k, coef))
    return out


def multiply(lhs: OperatorPolynomial, rhs: OperatorPolynomial) -> OperatorPolynomial:
    """Normal-ordered product ``lhs * rhs``."""
    lhs._check(rhs)
    hbar = lhs.hbar
    out: dict = {}
    for (a1, b1, c1, d1), x in lhs.terms.items():
        for (a2, b2, c2, d2), y in rhs.terms.items():
            # pi_q^c1 pi_p^d1 q^a2 p^b2 = (pi_q^c1 q^a2)(pi_p^d1 p^b2)
            for k, cq in _momentum_past_position(c1, a2, hbar):
                for l, cp in _momentum_past_position(d1, b2, hbar):
                    mono = (a1 + a2 - k, b1 + b2 - l, c1 - k + c2, d1 - l + d2)
                    out[mono] = out.get(mono, 0j) + x * y * cq * cp
    return OperatorPolynomial(out, hbar)


def commutator(lhs: OperatorPolynomial, rhs: OperatorPolynomial) -> OperatorPolynomial:
    return multiply(lhs, rhs) - multiply(rhs, lhs)


def relative_deviation(a: OperatorPolynomial, b: OperatorPolynomial) -> float:
    """Max coefficient difference relative to the larger operand's scale."""
    a._check(b)
    keys = set(a.terms) | set(b.terms)
    diff = max((abs(a.coefficient(k) - b.coefficient(k)) for k in keys), default=0.0)
    scale = max(a.max_abs_coefficient(), b.max_abs_coefficient())
    if scale == 0.0:
        return 0.0
    return diff / scale


def substitute(poly: OperatorPolynomial, images) -> OperatorPolynomial:
    """Apply the algebra homomorphism sending ``(q, p, pi_q, pi_p)`` to ``images``.

    Each monomial ``q^a p^b pi_q^c pi_p^d`` maps to the ordered product of
    image powers, renormal-ordered.
    """
    hbar = poly.hbar
    one = OperatorPolynomial.constant(1.0, hbar)
    caches = [{0: one} for _ in range(4)]
    out = OperatorPolynomial({}, hbar)
    for mono, coef in poly.sorted_terms():
        term = one
        for cache, base, n in zip(caches, images, mono):
            top = max(cache)
            while top < n:
                cache[top + 1] = multiply(cache[top], base)
                top += 1
            term = multiply(term, cache[n])
        out = out + term.scale(coef)
    return out


# Wigner unitary -----------------------------------------------------------

def wigner_generator(hbar: float, sign: int = +1) -> OperatorPolynomial:
    """``X = sign * (-i / 2 hbar) pi_q pi_p``; the Wigner unitary is ``exp(X)``."""
    return OperatorPolynomial.monomial((0, 0, 1, 1), sign * (-0.5j / hbar), hbar)


def adjoint_series(a: OperatorPolynomial, generator: OperatorPolynomial,
                   rtol: float = 1e-12, max_terms: int = 64) -> OperatorPolynomial:
    """``exp(X) a exp(-X)`` summed as ``sum_n ad_X^n(a) / n!``.

    Stops once the newest term is below ``rtol`` relative to ``a``.
    """
    scale = a.max_abs_coefficient()
    total = a
    term = a
    for n in range(1, max_terms + 1):
        term = commutator(generator, term).scale(1.0 / n)
        if term.max_abs_coefficient() <= rtol * scale:
            return total
        total = total + term
    raise SeriesDivergenceError(f"adjoint series did not settle within {max_terms} terms")


def conjugate_by_wigner_unitary(a: OperatorPolynomial, sign: int = +1,
                                return_both: bool = False):
    """Adjoint action of ``U = exp(-(i/2 hbar) pi_q pi_p)`` on ``a``.

    Two routes are evaluated: the direct commutator series on ``a``, and the
    automorphism obtained by pushing the series images of the four
    generators through every monomial. They must agree to 1e-12 relative.
    """
    X = wigner_generator(a.hbar, sign)
    images = [adjoint_series(g, X) for g in OperatorPolynomial.generators(a.hbar)]
    via_images = substitute(a, images)
    via_series = adjoint_series(a, X)
    dev = relative_deviation(via_images, via_series)
    if dev > 1e-12:
        raise SeriesDivergenceError(f"conjugation routes disagree (relative deviation {dev:.3e})")
    if return_both:
        return via_images, via_series
    return via_images
