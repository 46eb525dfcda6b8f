"""Invariant checks of the operator algebra and the extended Hamiltonians."""
from __future__ import annotations

import numpy as np

from .algebra import (
    OperatorPolynomial,
    commutator,
    conjugate_by_wigner_unitary,
    multiply,
    relative_deviation,
)
from .gauges import HarmonicDrive, PhysicalParams, Representation
from .hamiltonian import (
    build_sn_hamiltonian,
    build_wigner_hamiltonian,
    custom_hamiltonian,
    kanai_hamiltonian,
    transport_coefficients,
)


def random_polynomial(rng, hbar=1.0, max_degree=3, n_terms=4, integer=True):
    """Random polynomial of total degree <= ``max_degree``; integer coefficients keep products exact."""
    terms = {}
    for _ in range(n_terms):
        while True:
            mono = tuple(int(x) for x in rng.integers(0, max_degree + 1, size=4))
            if sum(mono) <= max_degree:
                break
        if integer:
            coef = complex(int(rng.integers(-3, 4)), int(rng.integers(-3, 4)))
        else:
            coef = complex(*rng.normal(size=2))
        terms[mono] = terms.get(mono, 0j) + coef
    return OperatorPolynomial(terms, hbar)


def random_quadratic(rng, params: PhysicalParams):
    coeffs = {(a, b): complex(*rng.normal(size=2)) for a in range(3) for b in range(3) if a + b <= 2}
    return custom_hamiltonian(coeffs, params)


def _max_dev(pairs):
    return max((relative_deviation(a, b) for a, b in pairs), default=0.0)


def select_unitary_sign(params: PhysicalParams, drive: HarmonicDrive, t: float = 0.7):
    """Pick the sign of the generator whose conjugation maps the SN to the Wigner Hamiltonian."""
    spec = kanai_hamiltonian("phi", params, drive)
    sn = build_sn_hamiltonian(spec, t)
    target = build_wigner_hamiltonian(spec, t)
    devs = {s: relative_deviation(conjugate_by_wigner_unitary(sn, sign=s), target) for s in (+1, -1)}
    return min(devs, key=devs.get), devs


def _field_samples(field, rng, t):
    q = rng.normal(size=16)
    p = rng.normal(size=16)
    vq = np.broadcast_to(field.vq(q, p, t), q.shape)
    vp = np.broadcast_to(field.vp(q, p, t), q.shape)
    return np.concatenate([vq, vp])


def run_selftest(params: PhysicalParams, drive: HarmonicDrive, seed: int = 0,
                 random_quadratic_count: int = 100, random_times: int = 10,
                 random_triples: int = 25, tol: float = 1e-12) -> dict:
    rng = np.random.default_rng(seed)
    hbar = params.hbar
    q, p, pi_q, pi_p = OperatorPolynomial.generators(hbar)
    zero = OperatorPolynomial({}, hbar)
    one = OperatorPolynomial.constant(1.0, hbar)
    checks = []

    def record(name, deviation, exact=False):
        ok = deviation == 0 if exact else deviation < tol
        checks.append({"name": name, "max_deviation": float(deviation), "passed": bool(ok)})

    record("commutator [pi_q, q] = -i hbar",
           relative_deviation(commutator(pi_q, q), one.scale(-1j * hbar)), exact=True)
    record("commutator [pi_p, p] = -i hbar",
           relative_deviation(commutator(pi_p, p), one.scale(-1j * hbar)), exact=True)
    vanishing = [(q, p), (pi_p, pi_q), (pi_q, p), (pi_p, q), (q, q), (p, p)]
    record("commutators [p,q] = [pi_p,pi_q] = [pi_q,p] = [pi_p,q] = 0",
           max(commutator(a, b).max_abs_coefficient() for a, b in vanishing), exact=True)

    # exact-arithmetic ring axioms on integer polynomials with hbar = 1
    assoc, antisym, jacobi, bilin = [], [], [], []
    for _ in range(random_triples):
        A, B, C = (random_polynomial(rng) for _ in range(3))
        assoc.append((multiply(multiply(A, B), C), multiply(A, multiply(B, C))))
        antisym.append((commutator(A, B), -commutator(B, A)))
        jac = (commutator(A, commutator(B, C)) + commutator(B, commutator(C, A))
               + commutator(C, commutator(A, B)))
        jacobi.append((jac, zero))
        bilin.append((commutator(A.scale(2) + B, C), commutator(A, C).scale(2) + commutator(B, C)))
    record("multiply associative", _max_dev(assoc), exact=True)
    record("commutator antisymmetric", _max_dev(antisym), exact=True)
    record("Jacobi identity", max(j.max_abs_coefficient() for j, _ in jacobi), exact=True)
    record("commutator bilinear", _max_dev(bilin), exact=True)

    sign, sign_devs = select_unitary_sign(params, drive)

    phasor = drive.with_representation(Representation.COMPLEX_PHASOR)
    kanai_pairs = []
    times = rng.uniform(0.0, 10.0, size=random_times)
    for d in (drive, phasor):
        for gauge in ("A", "phi"):
            spec = kanai_hamiltonian(gauge, params, d)
            for t in times:
                sn = build_sn_hamiltonian(spec, float(t))
                kanai_pairs.append((conjugate_by_wigner_unitary(sn, sign=sign),
                                    build_wigner_hamiltonian(spec, float(t))))
    record("Ad_U(H_SN) = H_w, Kanai gauges at random times", _max_dev(kanai_pairs))

    quad_pairs, pi_deg, hbar_dev = [], 0, 0.0
    big = PhysicalParams(params.m, params.e, params.c, params.alpha, 10 * hbar, params.N)
    for _ in range(random_quadratic_count):
        spec = random_quadratic(rng, params)
        sn = build_sn_hamiltonian(spec, 0.0)
        hw = build_wigner_hamiltonian(spec, 0.0)
        quad_pairs.append((conjugate_by_wigner_unitary(sn, sign=sign), hw))
        pi_deg = max(pi_deg, hw.pi_degree())
        spec10 = custom_hamiltonian(spec.coefficients, big)
        f1 = transport_coefficients(hw)
        f10 = transport_coefficients(build_wigner_hamiltonian(spec10, 0.0))
        probe_seed = int(rng.integers(2 ** 31))
        a = _field_samples(f1, np.random.default_rng(probe_seed), 0.0)
        b = _field_samples(f10, np.random.default_rng(probe_seed), 0.0)
        hbar_dev = max(hbar_dev, float(np.max(np.abs(a - b))))
    record("Ad_U(H_SN) = H_w, random quadratic H", _max_dev(quad_pairs))
    checks.append({"name": "quadratic H_w has momentum degree <= 1",
                   "max_deviation": float(max(pi_deg - 1, 0)), "passed": pi_deg <= 1})
    record("transport coefficients invariant under hbar -> 10 hbar", hbar_dev, exact=True)

    return {
        "seed": seed,
        "unitary_sign": sign,
        "unitary_sign_deviations": {str(k): float(v) for k, v in sign_devs.items()},
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }
