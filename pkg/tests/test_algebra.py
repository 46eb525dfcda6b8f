from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epswigner.algebra import (
    AlgebraError,
    OperatorPolynomial,
    adjoint_series,
    commutator,
    conjugate_by_wigner_unitary,
    multiply,
    relative_deviation,
    substitute,
    wigner_generator,
)

HBAR = 1.0
Q, P, PQ, PP = OperatorPolynomial.generators(HBAR)
ONE = OperatorPolynomial.constant(1.0, HBAR)


# --- brute-force oracle: normal-order words by one adjacent swap at a time ---

def _bracket(later, earlier):
    # [x_later, x_earlier] for generator indices q=0, p=1, pi_q=2, pi_p=3
    if (later, earlier) in ((2, 0), (3, 1)):
        return -1j * HBAR
    return 0


@lru_cache(maxsize=None)
def _normalize(word):
    for i in range(len(word) - 1):
        if word[i] > word[i + 1]:
            swapped = word[:i] + (word[i + 1], word[i]) + word[i + 2:]
            out = dict(_normalize(swapped))
            c = _bracket(word[i], word[i + 1])
            if c:
                for mono, coef in _normalize(word[:i] + word[i + 2:]).items():
                    out[mono] = out.get(mono, 0) + c * coef
            return {m: v for m, v in out.items() if v != 0}
    mono = tuple(word.count(k) for k in range(4))
    return {mono: 1}


def _word(mono):
    return tuple(k for k in range(4) for _ in range(mono[k]))


def brute_multiply(a, b):
    out = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            for mono, c in _normalize(_word(ma) + _word(mb)).items():
                out[mono] = out.get(mono, 0) + ca * cb * c
    return OperatorPolynomial(out, a.hbar)


monomials = st.tuples(*[st.integers(0, 3)] * 4).filter(lambda m: sum(m) <= 3)
gaussian_ints = st.builds(complex, st.integers(-3, 3), st.integers(-3, 3))
polys = st.dictionaries(monomials, gaussian_ints, max_size=4).map(lambda d: OperatorPolynomial(d, HBAR))


def test_pi_q_times_q():
    assert PQ * Q == OperatorPolynomial({(1, 0, 1, 0): 1, (0, 0, 0, 0): -1j * HBAR}, HBAR)


def test_p_and_q_commute():
    assert P * Q == Q * P == OperatorPolynomial.monomial((1, 1, 0, 0), 1, HBAR)


def test_square_reordering():
    expected = OperatorPolynomial({(2, 0, 2, 0): 1, (1, 0, 1, 0): -4j * HBAR, (0, 0, 0, 0): -2 * HBAR ** 2}, HBAR)
    assert (PQ ** 2) * (Q ** 2) == expected
    assert brute_multiply(PQ ** 2, Q ** 2) == expected


def test_canonical_commutators():
    assert commutator(PQ, Q) == ONE.scale(-1j * HBAR)
    assert commutator(PP, P) == ONE.scale(-1j * HBAR)
    for a, b in [(P, Q), (PP, PQ), (PQ, P), (PP, Q)]:
        assert commutator(a, b).is_zero()


def test_mixed_commutator():
    assert commutator(PQ * PP, Q) == PP.scale(-1j * HBAR)


def test_hbar_mismatch_rejected():
    with pytest.raises(AlgebraError):
        multiply(Q, OperatorPolynomial.generators(2.0)[0])


def test_negative_exponent_rejected():
    with pytest.raises(AlgebraError):
        OperatorPolynomial({(-1, 0, 0, 0): 1}, HBAR)


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_multiply_matches_brute_force(a, b):
    assert multiply(a, b) == brute_multiply(a, b)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys)
def test_distributive(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@settings(max_examples=40, deadline=None)
@given(polys, polys, polys, gaussian_ints)
def test_commutator_identities(a, b, c, z):
    assert commutator(a, b) == -commutator(b, a)
    assert commutator(a.scale(z) + b, c) == commutator(a, c).scale(z) + commutator(b, c)
    jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) + commutator(c, commutator(a, b))
    assert jacobi.is_zero()


def test_adjoint_action_on_generators():
    X = wigner_generator(HBAR, +1)
    assert adjoint_series(PQ, X) == PQ
    assert adjoint_series(PP, X) == PP
    assert adjoint_series(Q, X) == Q - PP.scale(0.5)
    assert adjoint_series(P, X) == P - PQ.scale(0.5)
    # the other sign flips the shifts
    assert adjoint_series(Q, wigner_generator(HBAR, -1)) == Q + PP.scale(0.5)


@settings(max_examples=30, deadline=None)
@given(polys)
def test_conjugation_is_a_homomorphism(a):
    direct = conjugate_by_wigner_unitary(a)
    X = wigner_generator(HBAR, +1)
    images = [adjoint_series(g, X) for g in (Q, P, PQ, PP)]
    assert relative_deviation(direct, substitute(a, images)) < 1e-12


def test_to_json_is_sorted_and_stable():
    h = (Q * P + PQ.scale(2j) + ONE).to_json()
    assert h == sorted(h)
    assert h[0] == [[0, 0, 0, 0], [1.0, 0.0]]


def test_polynomials_are_immutable_and_hashable():
    a = Q + P
    with pytest.raises(TypeError):
        a.terms[(0, 0, 0, 0)] = 1
    assert hash(a) == hash(P + Q)
