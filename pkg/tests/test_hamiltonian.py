import math

import numpy as np
import pytest

from epswigner.algebra import OperatorPolynomial, conjugate_by_wigner_unitary, relative_deviation
from epswigner.gauges import HarmonicDrive, PhysicalParams, Representation, gauge_momentum_shift
from epswigner.hamiltonian import (
    NonTransportGeneratorError,
    build_sn_hamiltonian,
    build_wigner_hamiltonian,
    custom_hamiltonian,
    kanai_hamiltonian,
    kanai_transport_field,
    transport_coefficients,
)
from epswigner.selftest import random_quadratic

Q, P, PQ, PP = OperatorPolynomial.generators(1.0)


def _series_sn(coeffs, hbar=1.0, nmax=6):
    # H(p + pi_q, q) - H(p, q + pi_p) as sum_n (1/n!) d^n H (pi^n), pi rightmost
    out = {}
    for (a, b), c in coeffs.items():
        for n in range(1, max(a, b) + 1):
            if n <= b:
                mono = (a, b - n, n, 0)
                out[mono] = out.get(mono, 0) + c * math.comb(b, n)
            if n <= a:
                mono = (a - n, b, 0, n)
                out[mono] = out.get(mono, 0) - c * math.comb(a, n)
    return OperatorPolynomial(out, hbar)


def test_free_particle_sn():
    h = custom_hamiltonian({(0, 2): 0.5})
    assert build_sn_hamiltonian(h, 0.0) == (P * PQ).scale(1.0) + (PQ * PQ).scale(0.5)


def test_linear_potential():
    h = custom_hamiltonian({(1, 0): 1.0})
    assert build_sn_hamiltonian(h, 0.0) == -PP
    assert build_wigner_hamiltonian(h, 0.0) == -PP


def test_zero_hamiltonian():
    h = custom_hamiltonian({})
    assert build_sn_hamiltonian(h, 1.0).is_zero()
    assert build_wigner_hamiltonian(h, 1.0).is_zero()
    f = transport_coefficients(build_wigner_hamiltonian(h, 1.0))
    assert np.all(f.vq(np.ones(3), np.ones(3), 0.0) == 0)
    assert np.all(f.vp(np.ones(3), np.ones(3), 0.0) == 0)


@pytest.mark.parametrize("seed", range(5))
def test_sn_matches_taylor_series(seed):
    rng = np.random.default_rng(seed)
    coeffs = {(a, b): complex(*rng.normal(size=2)) for a in range(4) for b in range(4) if a + b <= 3}
    h = custom_hamiltonian(coeffs)
    assert relative_deviation(build_sn_hamiltonian(h, 0.0), _series_sn(coeffs)) < 1e-14


@pytest.mark.parametrize("rep", list(Representation))
def test_kanai_a_gauge_wigner_form(params, rep):
    d = HarmonicDrive(E0=0.3, omega=1.5, representation=rep)
    t = 1.7
    hw = build_wigner_hamiltonian(kanai_hamiltonian("A", params, d), t)
    damp = math.exp(-params.alpha * t) / params.m
    shift = complex(gauge_momentum_shift(d, params, t))
    expected = OperatorPolynomial({(0, 1, 1, 0): damp, (0, 0, 1, 0): damp * shift}, 1.0)
    assert relative_deviation(hw, expected) < 1e-14


@pytest.mark.parametrize("rep", list(Representation))
def test_kanai_phi_gauge_wigner_form(params, rep):
    d = HarmonicDrive(E0=0.3, omega=1.5, representation=rep)
    t = 2.3
    hw = build_wigner_hamiltonian(kanai_hamiltonian("phi", params, d), t)
    expected = OperatorPolynomial({
        (0, 1, 1, 0): math.exp(-params.alpha * t) / params.m,
        (0, 0, 0, 1): params.e * complex(d.field(t)) * math.exp(params.alpha * t),
    }, 1.0)
    assert relative_deviation(hw, expected) < 1e-14


def test_transport_velocities(params, drive, rng):
    q, p = rng.normal(size=8), rng.normal(size=8)
    for t in (0.0, 1.2, 6.0):
        fa = kanai_transport_field("A", params, drive)
        fphi = kanai_transport_field("phi", params, drive)
        damp = math.exp(-params.alpha * t) / params.m
        S = gauge_momentum_shift(drive, params, t)
        np.testing.assert_allclose(fa.vq(q, p, t), (p + S) * damp, rtol=1e-13)
        np.testing.assert_allclose(fa.vp(q, p, t) + 0 * q, 0.0)
        np.testing.assert_allclose(fphi.vq(q, p, t), p * damp, rtol=1e-13)
        np.testing.assert_allclose(fphi.vp(q, p, t) + 0 * q,
                                   params.e * drive.field(t) * math.exp(params.alpha * t), rtol=1e-13)


def test_cubic_generator_is_not_transport():
    hw = build_wigner_hamiltonian(custom_hamiltonian({(0, 3): 1.0}), 0.0)
    assert hw.pi_degree() == 3
    with pytest.raises(NonTransportGeneratorError):
        transport_coefficients(hw)


@pytest.mark.parametrize("seed", range(10))
def test_quadratic_properties(seed):
    rng = np.random.default_rng(seed)
    params = PhysicalParams()
    spec = random_quadratic(rng, params)
    hw = build_wigner_hamiltonian(spec, 0.0)
    assert hw.pi_degree() <= 1
    assert relative_deviation(conjugate_by_wigner_unitary(build_sn_hamiltonian(spec, 0.0)), hw) < 1e-12
    big = custom_hamiltonian(spec.coefficients, PhysicalParams(hbar=10.0))
    f1 = transport_coefficients(hw)
    f10 = transport_coefficients(build_wigner_hamiltonian(big, 0.0))
    q, p = rng.normal(size=10), rng.normal(size=10)
    assert np.array_equal(f1.vq(q, p, 0.0), f10.vq(q, p, 0.0))
    assert np.array_equal(f1.vp(q, p, 0.0), f10.vp(q, p, 0.0))


def test_time_dependent_coefficients():
    h = custom_hamiltonian({(0, 2): lambda t: 0.5 * math.exp(-t), (1, 0): 2.0})
    assert h.at(0.0) == {(0, 2): 0.5, (1, 0): 2.0}
    assert h.degree() == 2
    assert build_wigner_hamiltonian(h, 1.0).coefficient((0, 1, 1, 0)) == pytest.approx(math.exp(-1.0))
