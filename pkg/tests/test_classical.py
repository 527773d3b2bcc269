"""Exact eta / theta-at-torsion series and the two classical q-lemmas."""

import random
from fractions import Fraction

import pytest

from pwomega.classical import (EtaQuotient, TorsionPoint,
                               eta_quotient_series, eta_series,
                               finite_jtp_sides, heine_sides,
                               theta_elliptic_shift_reference,
                               theta_series_at_torsion)
from pwomega.cyc8 import Cyc8, I, ONE
from pwomega.errors import NonExpandableDenominator, RootOfUnityOutsideCyc8
from pwomega.qseries import Monomial, QSeries

F = Fraction


def test_eta_sparsity_pentagonal_squares():
    # eta is supported exactly on exponents (6k+-1)^2/24
    s = eta_series(50)
    allowed = {F((6 * k + e) ** 2, 24) for k in range(-15, 16) for e in (1, -1)}
    for exp, _ in s.terms():
        assert exp in allowed


def test_eta_quotient_leading_exponent():
    spec = EtaQuotient.parse("eta(4) / eta(2)^2")
    assert spec.leading_exponent() == F(4 - 2 * 2, 24) == 0
    s = eta_quotient_series(spec, 12)
    assert s.floor_key() == 0 and s[0] == ONE


def test_eta_quotient_text_round_trip():
    spec = EtaQuotient.parse("q^{-1/8} * eta(1)^3 * eta(4) / eta(2)^2")
    assert spec.prefactor.q_exp == F(-1, 8)
    again = EtaQuotient.parse(str(spec))
    assert again.factors == spec.factors
    assert again.prefactor.q_exp == spec.prefactor.q_exp


def test_eta_cubed_jacobi_identity():
    # eta^3 = q^{1/8} sum (-1)^n (2n+1) q^{n(n+1)/2}
    N = 40
    cubed = eta_series(N).pow(3)
    terms = []
    n = 0
    while F(n * (n + 1), 2) + F(1, 8) < N:
        terms.append((F(n * (n + 1), 2) + F(1, 8), Cyc8((-1) ** n * (2 * n + 1))))
        n += 1
    assert cubed == QSeries.from_terms(24, terms, cubed.order_exp())


def test_theta_at_zero_vanishes():
    assert theta_series_at_torsion(TorsionPoint(0, 0), 20).is_zero()


def test_theta_tau_plus_half_eta_quotient():
    # theta(tau + 1/2) = -2 q^{-1/2} eta(2tau)^2 / eta(tau), exact to O(q^30)
    lhs = theta_series_at_torsion(TorsionPoint(1, F(1, 2)), 30)
    rhs = eta_quotient_series(
        EtaQuotient([(2, 2), (1, -1)], Monomial(-2, F(-1, 2))), 30)
    assert lhs == rhs


def test_theta_half_tau_plus_quarter_eta_quotient():
    # theta(tau/2 + 1/4) = e^{-3 pi i/4} q^{-1/8} eta(2tau)^2 / eta(4tau)
    lhs = theta_series_at_torsion(TorsionPoint(F(1, 2), F(1, 4)), 30)
    root = Cyc8.zeta_pow(-3)
    rhs = eta_quotient_series(EtaQuotient([(2, 2), (4, -1)], Monomial(root, F(-1, 8))), 30)
    assert lhs == rhs


def test_theta_elliptic_shifts_exact():
    z = TorsionPoint(F(1, 2), F(1, 4))
    for lam in (-1, 0, 1):
        for mu in (-1, 0, 1):
            shifted = theta_series_at_torsion(z.shifted(lam, mu), 18)
            reference = theta_elliptic_shift_reference(z, lam, mu, 18)
            assert shifted == reference, (lam, mu)


def test_theta_rejects_large_denominator():
    with pytest.raises(RootOfUnityOutsideCyc8):
        theta_series_at_torsion(TorsionPoint(0, F(1, 3)), 10)


def test_finite_jtp_n0_trivial():
    lhs, rhs = finite_jtp_sides(0, 20)
    assert lhs == rhs
    assert lhs.zeta_slice(0) == QSeries.one(1, 20)


@pytest.mark.parametrize("n,N", [(1, 20), (2, 25), (3, 25), (4, 30), (5, 30)])
def test_finite_jtp(n, N):
    lhs, rhs = finite_jtp_sides(n, N)
    assert lhs.first_mismatch(rhs) is None


def test_heine_order_zero_coefficient():
    a = Monomial(I, F(1, 2))
    b = Monomial(-I, F(1, 2))
    c = Monomial(1, 1)
    z = Monomial(1, 1)
    lhs, rhs = heine_sides(a, b, c, z, 10)
    assert lhs[0] == ONE and rhs[0] == ONE


@pytest.mark.parametrize("j", [0, 1, 2])
def test_heine_paper_parameter_family(j):
    # a = i q^{j+1/2}, b = -i q^{j+1/2}, c = q^{2j+1}, z = q
    a = Monomial(I, F(2 * j + 1, 2))
    b = Monomial(-I, F(2 * j + 1, 2))
    c = Monomial(1, 2 * j + 1)
    z = Monomial(1, 1)
    lhs, rhs = heine_sides(a, b, c, z, 25)
    assert lhs.first_mismatch(rhs) is None


def test_heine_random_monomial_parameters():
    rng = random.Random(99)
    done = 0
    while done < 4:
        a = Monomial(Cyc8(rng.randint(-2, 2), rng.randint(-1, 1)), F(rng.randint(1, 4), 2))
        b = Monomial(Cyc8(rng.randint(-2, 2), 0, rng.randint(-1, 1)), F(rng.randint(1, 4), 2))
        c = Monomial(1, F(rng.randint(1, 4), 2) + b.q_exp)
        z = Monomial(1, F(rng.randint(1, 3)))
        if b.coeff.is_zero() or a.coeff.is_zero():
            continue
        lhs, rhs = heine_sides(a, b, c, z, 20)
        assert lhs.first_mismatch(rhs) is None
        done += 1


def test_heine_rejects_bad_parameters():
    with pytest.raises(NonExpandableDenominator):
        heine_sides(Monomial(1, 1), Monomial(1, 1), Monomial(1, 1), Monomial(1, 0), 10)
