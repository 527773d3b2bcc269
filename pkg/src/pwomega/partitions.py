"""Brute-force partition enumerators and exact generating functions.

Six counting families are supported:

  spt            partitions weighted by the multiplicity of the smallest part
  p_omega        partitions whose odd parts are all less than twice the
                 smallest part
  spt_omega      the same family, weighted by the smallest-part multiplicity
  pbar_omega     overpartitions with all odd parts less than twice the
                 smallest part and the smallest part overlined
  sptbar_omega   the same overpartitions, weighted by the smallest-part
                 multiplicity
  spt_g2         series-only family (no combinatorial enumerator)

An overpartition may overline the first occurrence of each part size, so a
partition with d distinct part sizes and its smallest part forced to carry an
overline contributes 2^(d-1) overpartitions.  The generating functions are
normative; the enumerators are validated against them in the test suite.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .cyc8 import Cyc8
from .errors import NoCombinatorialDefinition, ResourceBound
from .qseries import Monomial, QSeries, geometric, qpochhammer

FAMILIES = ("spt", "p_omega", "spt_omega", "pbar_omega", "sptbar_omega", "spt_g2")

ENUMERATION_CAP = 50

F = Fraction


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def census(family: str, n: int, cap: int = ENUMERATION_CAP) -> int:
    """Exact count for the family at n, by exhaustive enumeration."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if family == "spt_g2":
        raise NoCombinatorialDefinition("spt_g2 is defined by its series only")
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > cap:
        raise ResourceBound(f"enumeration capped at n <= {cap}")

    if family == "spt":
        return _enumerate(n, constrained=False, weight=lambda m, d: m)
    if family == "p_omega":
        return _enumerate(n, constrained=True, weight=lambda m, d: 1)
    if family == "spt_omega":
        return _enumerate(n, constrained=True, weight=lambda m, d: m)
    if family == "pbar_omega":
        return _enumerate(n, constrained=True, weight=lambda m, d: 2 ** (d - 1))
    if family == "sptbar_omega":
        return _enumerate(n, constrained=True, weight=lambda m, d: m * 2 ** (d - 1))
    raise AssertionError


def _enumerate(n: int, constrained: bool, weight) -> int:
    acc = [0]

    def rec(remaining: int, min_part: int, odd_bound: Optional[int],
            mult_smallest: int, distinct: int):
        """Smallest-part-first descent; odd_bound = 2*smallest once chosen."""
        if remaining == 0:
            acc[0] += weight(mult_smallest, distinct)
            return
        for p in range(min_part, remaining + 1):
            if constrained and odd_bound is not None and p % 2 == 1 and p >= odd_bound:
                continue
            for m in range(1, remaining // p + 1):
                rec(remaining - m * p, p + 1,
                    odd_bound if odd_bound is not None else 2 * p,
                    mult_smallest if odd_bound is not None else m,
                    distinct + 1)

    rec(n, 1, None, 0, 0)
    return acc[0]


# ---------------------------------------------------------------------------
# generating functions
# ---------------------------------------------------------------------------

def _sum_n_qn_over_1_minus_qn(D: int, N) -> QSeries:
    """sum_{n>=1} n q^n / (1-q^n)."""
    out = QSeries.zero(D, N)
    n = 1
    while F(n) < F(N):
        out = out + geometric(D, n, N).shift(n).scale(n)
        n += 1
    return out


def _geom_sq(D: int, exp, N) -> QSeries:
    """1/(1-q^exp)^2 = sum_k (k+1) q^(k exp)."""
    e = F(exp)
    terms = []
    k = 0
    while k * e < F(N):
        terms.append((k * e, Cyc8(k + 1)))
        k += 1
    return QSeries.from_terms(D, terms, N)


def _definition_series(family: str, D: int, N) -> QSeries:
    """The smallest-part-indexed q-factorial sum defining the family."""
    out = QSeries.zero(D, N)
    n = 1
    while n < F(N):
        if family == "spt":
            # q^n/(1-q^n)^2 * 1/(q^{n+1};q)_inf
            term = _geom_sq(D, n, N).shift(n)
            term = term * qpochhammer(D, Monomial(1, n + 1), None, N).invert()
        elif family in ("p_omega", "spt_omega"):
            # q^n/(1-q^n)^e (q^{n+1};q)_n (q^{2n+2};q^2)_inf, e = 1 or 2
            base = geometric(D, n, N) if family == "p_omega" else _geom_sq(D, n, N)
            term = base.shift(n)
            term = term * qpochhammer(D, Monomial(1, n + 1), n, N).invert()
            term = term * qpochhammer(D, Monomial(1, 2 * n + 2), None, N, step=2).invert()
        elif family in ("pbar_omega", "sptbar_omega"):
            # q^n (-q^{n+1};q)_n (-q^{2n+2};q^2)_inf /
            #     ((1-q^n)^e (q^{n+1};q)_n (q^{2n+2};q^2)_inf)
            base = geometric(D, n, N) if family == "pbar_omega" else _geom_sq(D, n, N)
            term = base.shift(n)
            term = term * qpochhammer(D, Monomial(-1, n + 1), n, N)
            term = term * qpochhammer(D, Monomial(-1, 2 * n + 2), None, N, step=2)
            term = term * qpochhammer(D, Monomial(1, n + 1), n, N).invert()
            term = term * qpochhammer(D, Monomial(1, 2 * n + 2), None, N, step=2).invert()
        elif family == "spt_g2":
            # q^n/((1-q^n)^2 (q^{n+1};q)_n^2 (q^{2n+2};q^2)_inf (q^{4n+2};q^4)_inf)
            term = _geom_sq(D, n, N).shift(n)
            term = term * qpochhammer(D, Monomial(1, n + 1), n, N).invert().pow(2)
            term = term * qpochhammer(D, Monomial(1, 2 * n + 2), None, N, step=2).invert()
            term = term * qpochhammer(D, Monomial(1, 4 * n + 2), None, N, step=4).invert()
        else:
            raise ValueError(f"unknown family {family!r}")
        out = out + term.truncate(N)
        n += 1
    return out


def _appell_series(family: str, D: int, N) -> QSeries:
    """The Appell-Lerch-type representation of the family's series."""
    if family == "spt":
        pref = qpochhammer(D, Monomial(1, 1), None, N).invert()
        s1 = _sum_n_qn_over_1_minus_qn(D, N)
        s2 = QSeries.zero(D, N)
        n = 1
        while F(n * (3 * n + 1), 2) < F(N):
            e = F(n * (3 * n + 1), 2)
            block = _geom_sq(D, n, N).shift(e).scale((-1) ** n)
            block = block + _geom_sq(D, n, N).shift(e + n).scale((-1) ** n)
            s2 = s2 + block.truncate(N)
            n += 1
        return (pref * (s1 + s2)).truncate(N)
    if family == "spt_omega":
        pref = qpochhammer(D, Monomial(1, 2), None, N, step=2).invert()
        s1 = _sum_n_qn_over_1_minus_qn(D, N)
        s2 = QSeries.zero(D, N)
        n = 1
        while n * (3 * n + 1) < F(N):
            e = F(n * (3 * n + 1))
            block = _geom_sq(D, 2 * n, N).shift(e).scale((-1) ** n)
            block = block + _geom_sq(D, 2 * n, N).shift(e + 2 * n).scale((-1) ** n)
            s2 = s2 + block.truncate(N)
            n += 1
        return (pref * (s1 + s2)).truncate(N)
    if family == "sptbar_omega":
        pref = qpochhammer(D, Monomial(-1, 2), None, N, step=2)
        pref = pref * qpochhammer(D, Monomial(1, 2), None, N, step=2).invert()
        s1 = _sum_n_qn_over_1_minus_qn(D, N)
        s2 = QSeries.zero(D, N)
        n = 1
        while 2 * n * (n + 1) < F(N):
            s2 = s2 + _geom_sq(D, 2 * n, N).shift(2 * n * (n + 1)).scale(2 * (-1) ** n).truncate(N)
            n += 1
        return (pref * (s1 + s2)).truncate(N)
    if family == "p_omega":
        # q * omega(q), omega(q) = sum_{n>=0} q^{2n(n+1)} / (q;q^2)_{n+1}^2
        out = QSeries.zero(D, N)
        n = 0
        while 2 * n * (n + 1) < F(N):
            t = qpochhammer(D, Monomial(1, 1), n + 1, N, step=2).invert().pow(2)
            out = out + t.shift(2 * n * (n + 1)).truncate(N)
            n += 1
        return out.shift(1).truncate(N)
    raise ValueError(f"family {family!r} has no Appell-Lerch side")


def genfun(family: str, N, side: str = "definition", D: int = 1) -> QSeries:
    """The family's generating function to O(q^N), by the requested route."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if side == "definition":
        return _definition_series(family, D, N)
    if side == "appell":
        return _appell_series(family, D, N)
    raise ValueError("side must be 'definition' or 'appell'")
