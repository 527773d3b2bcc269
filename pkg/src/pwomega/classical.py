"""Exact Dedekind eta, eta quotients, Jacobi theta at torsion points, and the
two classical q-series lemmas (finite Jacobi triple product, Heine).

Everything here is formal: series live on the fractional q-lattice and the
coefficients are 8th cyclotomic rationals.  theta specialized at z = a*tau + b
folds e^(2*pi*i*n*(a*tau + b + 1/2)) into q-powers and roots of unity, which
stays inside Q(zeta8) exactly when the denominator of b divides 4.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Tuple, Union

from .cyc8 import Cyc8, ONE
from .errors import (LatticeMismatch, NonExpandableDenominator,
                     RootOfUnityOutsideCyc8)
from .jseries import JSeries, jpochhammer
from .qseries import DEFAULT_LATTICE, Monomial, QSeries, qpochhammer

F = Fraction
Rat = Union[int, Fraction]


# ---------------------------------------------------------------------------
# eta and eta quotients
# ---------------------------------------------------------------------------

def eta_m_series(m: int, N, D: int = DEFAULT_LATTICE) -> QSeries:
    """eta(m*tau) = q^(m/24) prod (1 - q^(m n)), via the pentagonal expansion."""
    terms = []
    k = 0
    while True:
        exps = [m * (F(kk * (3 * kk - 1), 2) + F(1, 24)) for kk in ((k, -k) if k else (0,))]
        live = [e for e in exps if e < F(N)]
        for e in live:
            terms.append((e, Cyc8((-1) ** k)))
        if not live and k > 0:
            break
        k += 1
    return QSeries.from_terms(D, terms, N)


def eta_series(N, D: int = DEFAULT_LATTICE) -> QSeries:
    """eta(tau) = q^(1/24) prod (1 - q^n)."""
    return eta_m_series(1, N, D)


@dataclass
class EtaQuotient:
    """prod_i eta(m_i * tau)^(r_i), optionally times a monomial prefactor."""

    factors: List[Tuple[int, int]]
    prefactor: Monomial = field(default_factory=lambda: Monomial(1, 0, 0))

    def leading_exponent(self) -> Fraction:
        return sum((F(m * r, 24) for m, r in self.factors), F(0)) + self.prefactor.q_exp

    FORMAT = re.compile(r"eta\((\d+)\)(?:\^(-?\d+))?")

    @staticmethod
    def parse(text: str) -> "EtaQuotient":
        """Parse "eta(1)^3 * eta(4) / eta(2)^2" with optional "q^{k/D}" factor."""
        pre = Monomial(1, 0, 0)
        factors: List[Tuple[int, int]] = []
        # pull out q^{...} prefactors first; their braces may contain '/'
        def grab(m):
            nonlocal pre
            pre = pre * Monomial(1, F(m.group(1) if m.group(1) is not None else m.group(2)), 0)
            return "1"
        text = re.sub(r"q\^\{([^}]*)\}|q\^(-?\d+)", grab, text)
        num, _, den = text.partition("/")
        for side, sign in ((num, 1), (den, -1)):
            for piece in side.split("*"):
                piece = piece.strip()
                if not piece or piece == "1":
                    continue
                m = EtaQuotient.FORMAT.fullmatch(piece)
                if not m:
                    raise ValueError(f"cannot parse eta-quotient factor {piece!r}")
                factors.append((int(m.group(1)), sign * int(m.group(2) or 1)))
        return EtaQuotient(factors, pre)

    def __str__(self) -> str:
        num = [f"eta({m})^{r}" for m, r in self.factors if r > 0]
        den = [f"eta({m})^{-r}" for m, r in self.factors if r < 0]
        s = " * ".join(num) if num else "1"
        if self.prefactor.q_exp:
            s = f"q^{{{self.prefactor.q_exp}}} * " + s
        if den:
            s += " / " + " * ".join(den)
        return s


def eta_quotient_series(spec: EtaQuotient, N, D: int = DEFAULT_LATTICE) -> QSeries:
    # inverted factors each cost 2*m/24 of certified order; pad up front
    pad = sum((F(2 * abs(r) * m, 24) for m, r in spec.factors if r < 0), F(0))
    out = QSeries.one(D, F(N) + pad + 1)
    for m, r in spec.factors:
        out = out * eta_m_series(m, out.order_exp() + (0 if r > 0 else F(2 * abs(r) * m, 24)), D).pow(r)
    out = out.mul_monomial(spec.prefactor)
    if out.order_exp() < F(N):
        raise LatticeMismatch("internal padding failure in eta_quotient_series")
    return out.truncate(N)


# ---------------------------------------------------------------------------
# theta at torsion points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorsionPoint:
    """z = a*tau + b with exact rationals a, b."""

    a: Fraction
    b: Fraction

    def __init__(self, a: Rat, b: Rat):
        object.__setattr__(self, "a", F(a))
        object.__setattr__(self, "b", F(b))

    def shifted(self, lam: int, mu: int) -> "TorsionPoint":
        return TorsionPoint(self.a + lam, self.b + mu)


def theta_series_at_torsion(z: TorsionPoint, N, D: int = DEFAULT_LATTICE) -> QSeries:
    """theta(a*tau+b; tau) = sum_{n in 1/2+Z} q^(n^2/2 + n a) e^(2 pi i n (b + 1/2)).

    Exact to O(q^N); requires denominator(b) | 4 (roots of unity stay in
    Q(zeta8)) and the induced exponents on the 1/D lattice.
    """
    if 4 % z.b.denominator != 0:
        raise RootOfUnityOutsideCyc8(f"b = {z.b} needs a root of unity outside Q(zeta8)")
    terms = []
    k_max = _isqrt_ceil(2 * F(N)) + int(2 * abs(z.a)) + 4
    for k in range(-k_max, k_max + 1):
        n = F(2 * k + 1, 2)
        e = n * n / 2 + n * z.a
        if e < F(N):
            root = Cyc8.from_root_of_unity(_frac_mod1(n * (z.b + F(1, 2))))
            terms.append((e, root))
    return QSeries.from_terms(D, terms, N)


def _frac_mod1(t: Fraction) -> Fraction:
    return t - (t.numerator // t.denominator)


def _isqrt_ceil(x: Fraction) -> int:
    import math
    return math.isqrt(max(0, int(x))) + 1


def theta_elliptic_shift_reference(z: TorsionPoint, lam: int, mu: int, N,
                                   D: int = DEFAULT_LATTICE) -> QSeries:
    """(-1)^(lam+mu) q^(-lam^2/2) zeta^(-lam) theta(z) for zeta = e^(2 pi i z):
    the right-hand side of the elliptic shift law, as an exact series."""
    base = theta_series_at_torsion(z, F(N) + F(lam * lam, 2) + lam * z.a + 2, D)
    sign = Cyc8((-1) ** (lam + mu))
    root = Cyc8.from_root_of_unity(_frac_mod1(F(-lam) * z.b))
    shift = -F(lam * lam, 2) - lam * z.a
    return base.mul_monomial(Monomial(sign * root, shift, 0)).truncate(N)


# ---------------------------------------------------------------------------
# finite Jacobi triple product (two-variable, exact)
# ---------------------------------------------------------------------------

def finite_jtp_sides(n: int, N, D: int = 1, Dz: int = 1) -> Tuple[JSeries, JSeries]:
    """Both sides of the finite triple-product identity

        (zeta; q)_n (zeta^{-1} q; q)_n / (q)_{2n}
            = sum_{j=-n}^{n} (-1)^j zeta^j q^(j(j-1)/2) / ((q)_{n-j} (q)_{n+j})
    """
    lhs = jpochhammer(D, Dz, Monomial(1, 0, 1), n, N)
    lhs = lhs * jpochhammer(D, Dz, Monomial(1, 1, -1), n, N)
    lhs = lhs * qpochhammer(D, Monomial(1, 1), 2 * n, N).invert()

    rhs = JSeries.zero(D, Dz, N)
    for j in range(-n, n + 1):
        t = qpochhammer(D, Monomial(1, 1), n - j, N).invert()
        t = t * qpochhammer(D, Monomial(1, 1), n + j, N).invert()
        e = F(j * (j - 1), 2)
        rhs = rhs + JSeries.from_qseries(t, Dz).mul_monomial(
            Monomial(Cyc8((-1) ** j), e, j)).truncate(N)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Heine transformation (monomial parameters, exact)
# ---------------------------------------------------------------------------

def _neg_floor_of_poch(mono: Monomial) -> Fraction:
    """Lower bound for the floor of (mono; q)_n, uniform in n."""
    pad = F(0)
    j = 0
    while mono.q_exp + j < 0:
        pad += mono.q_exp + j
        j += 1
    return pad


def heine_sides(a: Monomial, b: Monomial, c: Monomial, z: Monomial, N,
                D: int = 2) -> Tuple[QSeries, QSeries]:
    """Both sides of Heine's transformation

        sum_{n>=0} (a)_n (b)_n z^n / ((c)_n (q)_n)
          = (c/b)_inf (b z)_inf / ((c)_inf (z)_inf)
            * sum_{n>=0} (a b z / c)_n (b)_n (c/b)^n / ((b z)_n (q)_n)

    with monomial parameters.  The analytic constraint |c| < |b| becomes the
    formal requirement that c/b, z, c and b*z all carry positive q-exponent.
    """
    cb = c * b.pow(-1)
    bz = b * z
    abz_c = a * b * z * c.pow(-1)
    for name, mono in (("z", z), ("c/b", cb), ("c", c), ("b*z", bz)):
        if mono.q_exp <= 0:
            raise NonExpandableDenominator(
                f"Heine needs positive q-exponent for {name}, got {mono.q_exp}")

    neg_pad = _neg_floor_of_poch(a) + _neg_floor_of_poch(b)
    lhs = QSeries.zero(D, N)
    an = bn = cn = qn = QSeries.one(D, N)
    zn = QSeries.one(D, N)
    n = 0
    while n * z.q_exp + neg_pad < F(N):
        if n > 0:
            an = an * _factor(D, a, n - 1, N)
            bn = bn * _factor(D, b, n - 1, N)
            cn = cn * _factor(D, c, n - 1, N)
            qn = qn * _factor(D, Monomial(1, 1), n - 1, N)
            zn = zn.mul_monomial(z).truncate(N)
        lhs = lhs + (an * bn * zn * (cn * qn).invert()).truncate(N)
        n += 1

    pref = qpochhammer(D, cb, None, N) * qpochhammer(D, bz, None, N)
    pref = pref * (qpochhammer(D, c, None, N) * qpochhammer(D, z, None, N)).invert()
    rhs_sum = QSeries.zero(D, N)
    un = vn = wn = qn2 = QSeries.one(D, N)
    cbn = QSeries.one(D, N)
    neg_pad2 = _neg_floor_of_poch(abz_c) + _neg_floor_of_poch(b)
    n = 0
    while n * cb.q_exp + neg_pad2 < F(N):
        if n > 0:
            un = un * _factor(D, abz_c, n - 1, N)
            vn = vn * _factor(D, b, n - 1, N)
            wn = wn * _factor(D, bz, n - 1, N)
            qn2 = qn2 * _factor(D, Monomial(1, 1), n - 1, N)
            cbn = cbn.mul_monomial(cb).truncate(N)
        rhs_sum = rhs_sum + (un * vn * cbn * (wn * qn2).invert()).truncate(N)
        n += 1
    rhs = (pref * rhs_sum).truncate(N)
    return lhs.truncate(N), rhs


def _factor(D, mono: Monomial, j: int, N) -> QSeries:
    """(1 - mono * q^j) as a series."""
    return QSeries.from_terms(D, [(0, ONE), (mono.q_exp + j, -mono.coeff)], N)
