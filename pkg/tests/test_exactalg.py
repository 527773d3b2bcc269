"""Exact kernel: cyclotomic field, QSeries, JSeries."""

import random
from fractions import Fraction

import pytest

from pwomega.cyc8 import Cyc8, I, ONE
from pwomega.errors import (DivergentProduct, LatticeMismatch,
                            NonInvertibleLeadingTerm)
from pwomega.jseries import JSeries, jpochhammer
from pwomega.qseries import Monomial, QSeries, geometric, qpochhammer

F = Fraction


# ---------------------------------------------------------------------------
# Cyc8
# ---------------------------------------------------------------------------

def test_zeta8_squared_is_i_and_fourth_power_is_minus_one():
    z = Cyc8.zeta_pow(1)
    assert z * z == I
    assert I * I == Cyc8(-1)
    assert z * z * z * z == Cyc8(-1)


def test_division_by_self_is_one():
    x = Cyc8(1) + I
    assert x / x == ONE


def test_zeta_times_minus_zeta_cubed_reduces_to_one():
    # hand oracle: zeta^4 = -1, so zeta * (-zeta^3) = -zeta^4 = 1
    assert Cyc8.zeta_pow(1) * (-Cyc8.zeta_pow(3)) == ONE


def test_inverse_times_self_reduces_to_canonical_one():
    rng = random.Random(8)
    for _ in range(40):
        x = Cyc8(*[F(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)])
        if x.is_zero():
            continue
        y = x * x.inverse()
        assert (y.c0, y.c1, y.c2, y.c3) == (1, 0, 0, 0)


def test_zero_division_raises():
    with pytest.raises(ZeroDivisionError):
        Cyc8(0).inverse()


def test_roots_of_unity():
    assert Cyc8.from_root_of_unity(F(1, 4)) == I
    assert Cyc8.from_root_of_unity(F(1, 2)) == Cyc8(-1)
    assert Cyc8.from_root_of_unity(F(3, 8)) == Cyc8.zeta_pow(3)
    from pwomega.errors import RootOfUnityOutsideCyc8
    with pytest.raises(RootOfUnityOutsideCyc8):
        Cyc8.from_root_of_unity(F(1, 3))


def test_text_round_trip():
    x = Cyc8(F(1, 2), -2, 0, F(3, 7))
    assert Cyc8.parse(str(x)) == x
    assert str(Cyc8(0)) == "0"


def test_embedding_matches_field_structure():
    from mpmath import mp
    with mp.workprec(80):
        z = Cyc8.zeta_pow(1).to_mpc(mp)
        assert abs(z**8 - 1) < 1e-20
        x = Cyc8(1, 2, F(1, 3), -1)
        y = Cyc8(-2, 0, 1, F(5, 2))
        assert abs((x * y).to_mpc(mp) - x.to_mpc(mp) * y.to_mpc(mp)) < 1e-18


# ---------------------------------------------------------------------------
# QSeries basics
# ---------------------------------------------------------------------------

def rand_series(rng, D=24, order=96, nterms=6, floor=-12):
    terms = {}
    for _ in range(nterms):
        k = rng.randint(floor, order - 1)
        terms[k] = Cyc8(rng.randint(-4, 4), rng.randint(-2, 2),
                        rng.randint(-2, 2), rng.randint(-2, 2))
    return QSeries(D, terms, order)


def test_geometric_inverse():
    D, N = 1, 30
    one_minus_q = QSeries.from_terms(D, [(0, ONE), (1, Cyc8(-1))], N)
    geo = geometric(D, 1, N)
    assert one_minus_q * geo == QSeries.one(D, N)
    assert one_minus_q.invert() == geo


def test_mul_by_zero():
    D, N = 24, 48
    rng = random.Random(1)
    a = rand_series(rng)
    z = QSeries.zero(D, 2)
    assert (a * z).is_zero()


def test_ring_axioms_on_random_sparse_series():
    rng = random.Random(20240)
    for _ in range(25):
        a, b, c = (rand_series(rng) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_invert_contract_and_involution():
    rng = random.Random(7)
    for _ in range(15):
        a = rand_series(rng, nterms=5, floor=-8)
        if a.is_zero():
            continue
        inv = a.invert()
        prod = a * inv
        # contract: a * invert(a) = 1 up to the guaranteed order
        assert prod == QSeries.one(a.D, prod.order_exp())
        back = inv.invert()
        assert back == a  # up to common order


def test_invert_zero_raises():
    with pytest.raises(NonInvertibleLeadingTerm):
        QSeries.zero(1, 5).invert()


def test_lattice_mismatch_is_loud():
    a = QSeries.one(24, 2)
    b = QSeries.one(8, 2)
    with pytest.raises(LatticeMismatch):
        _ = a + b
    with pytest.raises(LatticeMismatch):
        _ = a * b
    assert b.refine(24).D == 24
    with pytest.raises(LatticeMismatch):
        b.refine(12)


def test_laurent_inversion_shifts_floor():
    # invert(q^{1/24}(1 - q - q^2 + q^5 + ...)) has floor -1/24 and
    # partition-number coefficients: 1/((q)_inf) = sum p(n) q^n
    D, N = 24, 20
    eulerish = qpochhammer(D, Monomial(1, 1), None, N).shift(F(1, 24))
    inv = eulerish.invert()
    assert inv.floor_key() == -1
    p = partition_numbers(15)
    for n in range(15):
        assert inv[F(n) - F(1, 24)] == Cyc8(p[n])


def partition_numbers(n_max):
    """Independent oracle: Euler DP for the partition numbers."""
    p = [0] * (n_max + 1)
    p[0] = 1
    for part in range(1, n_max + 1):
        for n in range(part, n_max + 1):
            p[n] += p[n - part]
    return p


# ---------------------------------------------------------------------------
# q-Pochhammer
# ---------------------------------------------------------------------------

def test_empty_product_is_one():
    assert qpochhammer(1, Monomial(1, 1), 0, 12) == QSeries.one(1, 12)


def test_single_factor():
    got = qpochhammer(1, Monomial(1, 2), 1, 12, step=2)
    assert got == QSeries.from_terms(1, [(0, ONE), (2, Cyc8(-1))], 12)


def test_euler_product_pentagonal_sparsity():
    # (q;q)_inf to O(q^6) = 1 - q - q^2 + q^5
    got = qpochhammer(1, Monomial(1, 1), None, 6)
    want = QSeries.from_terms(1, [(0, 1), (1, -1), (2, -1), (5, 1)], 6)
    assert got == want


def test_pentagonal_support_to_50():
    got = qpochhammer(1, Monomial(1, 1), None, 50)
    pent = {k * (3 * k - 1) // 2 for k in range(-10, 11)}
    assert set(got.coeff) <= pent
    for k in range(-6, 7):
        e = k * (3 * k - 1) // 2
        if e < 50:
            assert got[e] == Cyc8((-1) ** k)


def test_divergent_product_raises():
    with pytest.raises(DivergentProduct):
        qpochhammer(1, Monomial(1, 1), None, 10, step=0)
    with pytest.raises(DivergentProduct):
        qpochhammer(1, Monomial(1, 1), None, 10, step=-1)


def test_eta_product_cross_check_double_loop():
    # (q)_inf * (q^2;q^2)_inf against a direct double expansion oracle
    N = 25
    a = qpochhammer(1, Monomial(1, 1), None, N)
    b = qpochhammer(1, Monomial(1, 2), None, N, step=2)
    prod = a * b
    # oracle: expand the doubled product with plain integer convolution
    coeffs = [0] * N
    coeffs[0] = 1
    for m in list(range(1, N)) + list(range(2, N, 2)):
        step_new = list(coeffs)
        for n in range(N - 1, m - 1, -1):
            step_new[n] -= coeffs[n - m]
        coeffs = step_new
    for n in range(N):
        assert prod[n] == Cyc8(coeffs[n])


# ---------------------------------------------------------------------------
# JSeries
# ---------------------------------------------------------------------------

def test_jsubstitute_single_term():
    j = JSeries.from_terms(24, 4, [(1, 2, ONE)], 10)
    assert j.substitute(Monomial(1, 0, 0)) == QSeries.from_terms(24, [(1, ONE)], 10)


def test_jsubstitute_zeta_equals_q():
    # zeta + zeta^{-1} q  at zeta = q  ->  q + 1
    j = JSeries.from_terms(1, 1, [(0, 1, ONE), (1, -1, ONE)], 10)
    got = j.substitute(Monomial(1, 1, 0))
    assert got[1] == ONE and got[0] == ONE
    # zeta + zeta^{-1} q^2 at zeta = q -> 2q
    j2 = JSeries.from_terms(1, 1, [(0, 1, ONE), (2, -1, ONE)], 10)
    assert j2.substitute(Monomial(1, 1, 0))[1] == Cyc8(2)


def test_dzeta_at_one_power_rule():
    j = JSeries.from_terms(1, 4, [(0, F(1, 2), ONE)], 5)
    got = j.dzeta_at("one")
    assert got[0] == Cyc8(F(1, 2))
    j2 = JSeries.from_terms(1, 4, [(0, 1, ONE), (0, -1, ONE)], 5)
    assert j2.dzeta_at("one").is_zero()


def test_zeta_dzeta_at_q_power_rule():
    for r in range(-2, 3):
        j = JSeries.from_terms(1, 1, [(0, r, ONE)], 9)
        got = j.dzeta_at("q")
        if r == 0:
            assert got.is_zero()
        else:
            # [zeta d/dzeta zeta^r]_{zeta=q} = r q^r
            assert got[r] == Cyc8(r)


def test_substitution_is_multiplicative():
    rng = random.Random(5)
    for _ in range(10):
        t1 = [(rng.randint(0, 6), rng.randint(-3, 3), Cyc8(rng.randint(-3, 3)))
              for _ in range(4)]
        t2 = [(rng.randint(0, 6), rng.randint(-3, 3), Cyc8(rng.randint(-3, 3)))
              for _ in range(4)]
        a = JSeries.from_terms(1, 1, t1, 14)
        b = JSeries.from_terms(1, 1, t2, 14)
        for val in (Monomial(1, 0, 0), Monomial(1, 1, 0)):
            lhs = (a * b).substitute(val)
            rhs = a.substitute(val) * b.substitute(val)
            assert lhs == rhs


def test_jpochhammer_matches_qpochhammer_on_zeta_free_base():
    a = jpochhammer(1, 1, Monomial(1, 1, 0), None, 12)
    b = qpochhammer(1, Monomial(1, 1), None, 12)
    assert a.zeta_slice(0) == b
    lo, hi = a.zeta_support()
    assert lo == hi == 0


def test_output_order_meets_contract():
    rng = random.Random(11)
    for _ in range(10):
        a = rand_series(rng, order=60, floor=-10)
        b = rand_series(rng, order=70, floor=-5)
        prod = a * b
        assert prod.order >= min(a.order + b.floor_key(), b.order + a.floor_key())
