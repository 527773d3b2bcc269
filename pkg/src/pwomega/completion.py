"""Numeric machinery for the completed objects: the indefinite triple sum F
and its mu-representation, the completion defect R*, the combined H-hat
functions, the generating kernel FF(z) = q^(-1/8) zeta^(1/2) theta(z)
mu-hat(z, tau/2 + 1/4), and the completed weight-1 object built from its
first two z-derivatives at 0.

All z-differentiation at the removable points 0 and tau splits each
quantity into a holomorphic block (differentiated by exponentially convergent
contour quadrature) and the R-block (differentiated termwise through the
explicit Wirtinger sums in kernels).  Composite results are returned as
Approx(value, err) with a conservative absolute-error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Tuple

from mpmath import mp

from . import kernels
from .errors import ContourThroughPole, PoleProximity
from .kernels import GUARD, qpow, workprec

F = Fraction

DEFAULT_TAUS = ((0.11, 0.93), (-0.23, 1.07), (0.31, 1.49))


@dataclass
class Approx:
    value: object          # mpmath complex
    err: float             # conservative absolute error estimate

    def __abs__(self):
        return abs(self.value)


@dataclass
class PhatContext:
    """Evaluation context for the completed object: point, precision, and the
    z-differentiation contour (radius defaults to 0.1 min(1, v), node count
    doubles from m_start until the quadrature stabilizes)."""

    tau: object
    prec: int = 160
    radius: Optional[float] = None
    m_start: int = 64

    def contour_radius(self):
        return mp.mpf(self.radius) if self.radius is not None else _contour_radius(self.tau)

    def validate(self):
        _assert_contour_clear(mp.mpc(0), self.contour_radius(), mp.mpc(self.tau))


def _prim_err(scale, P: int) -> float:
    """Coarse absolute-error allowance for one primitive evaluated at
    working precision P + GUARD."""
    return float((abs(scale) + 1) * mp.mpf(2) ** (-(P + GUARD - 16)))


# ---------------------------------------------------------------------------
# contour differentiation of holomorphic blocks
# ---------------------------------------------------------------------------

def contour_derivs(f: Callable, center, radius, orders: Tuple[int, ...],
                   P: int, m_start: int = 64, m_max: int = 1024) -> Dict[int, Approx]:
    """Derivatives f^(m)(center) for m in orders, for f holomorphic on the
    closed disk, by trapezoidal quadrature on |z - center| = radius.

    Node count doubles (reusing evaluations) until every requested
    coefficient moves by less than 2^-(P+6) relative, which certifies the
    exponentially small aliasing error.
    """
    radius = mp.mpf(radius)
    tol = mp.mpf(2) ** (-(P + 6))
    cache: Dict[int, object] = {}

    def nodes_vals(M):
        # node j/M equals node (j/2)/(M/2) for even j: doubling reuses values
        for j in range(M):
            key = _reduce_key(j, M, m_start)
            if key not in cache:
                jj, MM = key
                cache[key] = f(center + radius * mp.expjpi(2 * mp.mpf(jj) / MM))
        return [cache[_reduce_key(j, M, m_start)] for j in range(M)]

    prev = None
    M = m_start
    while M <= m_max:
        vals = nodes_vals(M)
        out = {}
        for m in orders:
            acc = mp.mpc(0)
            for j, val in enumerate(vals):
                acc += val * mp.expjpi(-2 * mp.mpf(j * m) / M)
            out[m] = mp.factorial(m) * acc / (M * radius ** m) if m else acc / M
        if prev is not None:
            deltas = {m: abs(out[m] - prev[m]) for m in orders}
            scale = max(max(abs(out[m]) for m in orders), mp.mpf(1))
            if all(d <= tol * scale for d in deltas.values()):
                return {m: Approx(out[m], float(deltas[m] + tol * abs(out[m]) + tol))
                        for m in orders}
        prev = out
        M *= 2
    raise ContourThroughPole(
        f"contour quadrature did not stabilize by {m_max} nodes (radius {radius})")


def _reduce_key(j, M, m_start):
    while j % 2 == 0 and M > m_start:
        j //= 2
        M //= 2
    return (j, M)


def _contour_radius(tau):
    return mp.mpf("0.1") * min(mp.mpf(1), mp.mpc(tau).imag)


def _assert_contour_clear(center, radius, tau):
    """The circle must stay away from Z + Z tau (poles of mu, zeros of theta);
    a lattice point at the center itself (the removable point) is fine."""
    tau = mp.mpc(tau)
    for m in range(-2, 3):
        for n in range(-2, 3):
            d = abs(mp.mpc(center) - (m + n * tau))
            if 1e-12 < d < 2 * radius:
                raise ContourThroughPole(
                    f"lattice point {m}+{n}*tau at distance {d} from contour center")


# ---------------------------------------------------------------------------
# the triple cone sum, numerically
# ---------------------------------------------------------------------------

def F_cone_numeric(z1, z2, z3, tau, P: int = 113):
    """F(z1,z2,z3;tau) by direct two-cone summation; needs |Im z_j| < v/2."""
    with workprec(P):
        z1, z2, z3, tau = (mp.mpc(w) for w in (z1, z2, z3, tau))
        v = tau.imag
        for z in (z1, z2, z3):
            if abs(z.imag) >= v / 2:
                raise PoleProximity("cone sum needs |Im z_j| < v/2")
        logeps = -(mp.prec + 10) * mp.ln(2)
        y1, y2, y3 = z1.imag, z2.imag, z3.imag

        def logmag(k, l, n):
            q_exp = k * (k + 1) / mp.mpf(2) + k * l + k * n + l * n
            return -2 * mp.pi * (v * q_exp + k * y1 + l * y2 + n * y3)

        def term(k, l, n):
            e = k * (k + 1) // 2 + k * l + k * n + l * n
            return (-1) ** k * qpow(tau, e) * mp.expjpi(2 * (k * z1 + l * z2 + n * z3))

        acc = mp.mpc(0)
        k = 1
        while logmag(k, 0, 0) > logeps:
            l = 0
            while logmag(k, l, 0) > logeps:
                n = 0
                while logmag(k, l, n) > logeps:
                    acc += term(k, l, n)
                    n += 1
                l += 1
            k += 1
        k = 0
        while logmag(k, -1, -1) > logeps:
            l = -1
            while logmag(k, l, -1) > logeps:
                n = -1
                while logmag(k, l, n) > logeps:
                    acc += term(k, l, n)
                    n -= 1
                l -= 1
            k -= 1
        pref = qpow(tau, -F(1, 8)) * mp.expjpi(-z1 + z2 + z3)
        return +(pref * acc)


def F_mu_numeric(z1, z2, z3, tau, P: int = 113):
    """F via its Appell-Lerch representation:
    i theta(z1) mu(z1,z2) mu(z1,z3) - eta^3 theta(z2+z3)/(theta(z2) theta(z3))
    * mu(z1, z2+z3); z1 must avoid the lattice (removable singularities)."""
    with workprec(P):
        z1, z2, z3, tau = (mp.mpc(w) for w in (z1, z2, z3, tau))
        eta3 = kernels.eta(tau) ** 3
        t1 = 1j * kernels.theta(z1, tau) * kernels.mu(z1, z2, tau) * kernels.mu(z1, z3, tau)
        t2 = (eta3 * kernels.theta(z2 + z3, tau)
              / (kernels.theta(z2, tau) * kernels.theta(z3, tau))
              * kernels.mu(z1, z2 + z3, tau))
        return +(t1 - t2)


# ---------------------------------------------------------------------------
# R*: the completion defect of F
# ---------------------------------------------------------------------------

def Rstar_numeric(z1, z2, z3, tau, P: int = 113):
    """R*(z1,z2,z3;tau) = F-hat - F.  Generic z1 uses the four-term formula;
    z1 = 0 and z1 = tau (removable 0*inf products) use their closed forms."""
    with workprec(P):
        z1, z2, z3, tau = (mp.mpc(w) for w in (z1, z2, z3, tau))
        if z1 == 0:
            return +_rstar_zero(z2, z3, tau)
        if z1 == tau:
            return +_rstar_tau(z2, z3, tau)
        th1 = kernels.theta(z1, tau)
        eta3 = kernels.eta(tau) ** 3
        out = (-mp.mpf(1) / 2 * th1 * kernels.mu(z1, z2, tau) * kernels.R(z1 - z3, tau)
               - mp.mpf(1) / 2 * th1 * kernels.R(z1 - z2, tau) * kernels.mu(z1, z3, tau)
               - 0.25j * th1 * kernels.R(z1 - z2, tau) * kernels.R(z1 - z3, tau)
               - 0.5j * eta3 * kernels.theta(z2 + z3, tau)
               / (kernels.theta(z2, tau) * kernels.theta(z3, tau))
               * kernels.R(z1 - z2 - z3, tau))
        return +out


def _rstar_zero(z2, z3, tau):
    """(i/2) eta^3 (R(z2)/theta(z3) + R(z3)/theta(z2)
                    - theta(z2+z3) R(z2+z3)/(theta(z2) theta(z3)))."""
    eta3 = kernels.eta(tau) ** 3
    th2, th3 = kernels.theta(z2, tau), kernels.theta(z3, tau)
    return 0.5j * eta3 * (kernels.R(z2, tau) / th3 + kernels.R(z3, tau) / th2
                          - kernels.theta(z2 + z3, tau) * kernels.R(z2 + z3, tau) / (th2 * th3))


def _rstar_tau(z2, z3, tau):
    """Limit of the four-term formula at z1 = tau, where theta(z1) -> 0 and
    mu(z1, w) blows up: theta(z)mu(z,w) -> -i eta^3 e^(-2 pi i w)/theta(w)."""
    eta3 = kernels.eta(tau) ** 3
    th2, th3 = kernels.theta(z2, tau), kernels.theta(z3, tau)
    p2 = -1j * eta3 * mp.expjpi(-2 * z2) / th2
    p3 = -1j * eta3 * mp.expjpi(-2 * z3) / th3
    return (-mp.mpf(1) / 2 * (p2 * kernels.R(tau - z3, tau) + p3 * kernels.R(tau - z2, tau))
            - 0.5j * eta3 * kernels.theta(z2 + z3, tau) / (th2 * th3)
            * kernels.R(tau - z2 - z3, tau))


def rstar_tau_shift_rhs(z2, z3, tau, P: int = 113):
    """Right side of the shift law for R*(tau, z2, z3):

        -q^(1/2) zeta2^{-1} zeta3^{-1} R*(0,z2,z3)
        + i q^(3/8) zeta2^{-1/2} zeta3^{-1/2} eta^3
          (zeta3^{-1/2}/theta(z3) + zeta2^{-1/2}/theta(z2)
           - theta(z2+z3)/(theta(z2) theta(z3)))."""
    with workprec(P):
        z2, z3, tau = (mp.mpc(w) for w in (z2, z3, tau))
        eta3 = kernels.eta(tau) ** 3
        th2, th3 = kernels.theta(z2, tau), kernels.theta(z3, tau)
        a = -qpow(tau, F(1, 2)) * mp.expjpi(-2 * (z2 + z3)) * _rstar_zero(z2, z3, tau)
        b = (1j * qpow(tau, F(3, 8)) * mp.expjpi(-z2 - z3) * eta3
             * (mp.expjpi(-z3) / th3 + mp.expjpi(-z2) / th2
                - kernels.theta(z2 + z3, tau) / (th2 * th3)))
        return +(a + b)


# ---------------------------------------------------------------------------
# F-hat at the removable centers 0 and tau, per quarter-shift pair
# ---------------------------------------------------------------------------

def _w_point(tau, g: int):
    return tau / 2 + mp.mpf(1) / 4 + mp.mpf(g) / 2


def _fhat_center_data(tau, P: int, center_kind: str, want_dz: bool, formal: bool = False):
    """For each (alpha, beta) returns (Fhat(center), dz Fhat(center) or None)
    at center 0 or tau, with holomorphic blocks contour-differentiated and
    R-blocks assembled from closed-form values."""
    tau = mp.mpc(tau)
    v = tau.imag
    center = mp.mpc(0) if center_kind == "zero" else tau
    r = _contour_radius(tau)
    _assert_contour_clear(center, r, tau)

    eta3 = kernels.eta(tau) ** 3
    eta6 = eta3 * eta3
    w = {g: _w_point(tau, g) for g in (0, 1)}
    th_w = {g: kernels.theta(w[g], tau) for g in (0, 1)}
    s_pt = {0: tau + mp.mpf(1) / 2, 2: tau + mp.mpf(3) / 2}
    th_s = {p: kernels.theta(s_pt[p], tau) for p in (0, 2)}

    # the six contoured functions share theta/mu node values; memoize them
    theta_cache: Dict[complex, object] = {}
    mu_cache: Dict[Tuple[complex, int], object] = {}
    second_args = {0: s_pt[0], 1: None, 2: s_pt[2]}

    def cth(z):
        key = complex(z)
        if key not in theta_cache:
            theta_cache[key] = kernels.theta(z, tau)
        return theta_cache[key]

    def cmu(z, tag):
        key = (complex(z), tag)
        if key not in mu_cache:
            w2 = w[tag] if tag in (0, 1) else second_args[tag - 10]
            mu_cache[key] = kernels.mu(z, w2, tau)
        return mu_cache[key]

    def make_fhol(alpha, beta):
        par = (alpha + beta) % 2
        if par == 0:
            c2 = -eta3 * th_s[alpha + beta] / (th_w[alpha] * th_w[beta])
            tag2 = 10 + alpha + beta

            def fhol(z):
                return (1j * cth(z) * cmu(z, alpha) * cmu(z, beta)
                        + c2 * cmu(z, tag2))
        else:
            c2 = 1j * eta6 / (th_w[alpha] * th_w[beta])

            def fhol(z):
                return (1j * cth(z) * cmu(z, alpha) * cmu(z, beta)
                        + c2 * mp.expjpi(-2 * z) / cth(z))
        return fhol

    orders = (0, 1) if want_dz else (0,)
    out = {}
    # p_g(z) = theta(z) mu(z, w_g): value and derivative at the center
    p_data = {}
    for g in (0, 1):
        p_data[g] = contour_derivs(
            lambda z, gg=g: cth(z) * cmu(z, gg), center, r, orders, P)

    thp_center = kernels.theta_dz(center, tau)
    Rv = {}
    Rd = {}

    def R_at(pt):
        key = complex(pt)
        if key not in Rv:
            Rv[key] = kernels.R(pt, tau)
        return Rv[key]

    def Rdz_at(pt):
        key = complex(pt)
        if key not in Rd:
            Rd[key] = kernels.R_dz(pt, tau, formal)
        return Rd[key]

    for alpha in (0, 1):
        for beta in (0, 1):
            par = (alpha + beta) % 2
            hol = contour_derivs(make_fhol(alpha, beta), center, r, orders, P)
            pa, pb = p_data[alpha], p_data[beta]
            za, zb = center - w[alpha], center - w[beta]
            c_ab = (0 if par == 1
                    else th_s[alpha + beta] / (th_w[alpha] * th_w[beta]))
            rstar = (-mp.mpf(1) / 2 * (pa[0].value * R_at(zb) + pb[0].value * R_at(za)))
            if par == 0:
                rstar += -0.5j * eta3 * c_ab * R_at(center - w[alpha] - w[beta])
            err = hol[0].err + pa[0].err + pb[0].err + _prim_err(rstar, P)
            val = hol[0].value + rstar
            dval = None
            if want_dz:
                drstar = (-mp.mpf(1) / 2 * (pa[1].value * R_at(zb) + pa[0].value * Rdz_at(zb)
                                            + pb[1].value * R_at(za) + pb[0].value * Rdz_at(za))
                          - 0.25j * thp_center * R_at(za) * R_at(zb))
                if par == 0:
                    drstar += -0.5j * eta3 * c_ab * Rdz_at(center - w[alpha] - w[beta])
                dval = Approx(hol[1].value + drstar,
                              hol[1].err + pa[1].err + pb[1].err + _prim_err(drstar, P))
            out[(alpha, beta)] = (Approx(val, err), dval)
    return out


# ---------------------------------------------------------------------------
# H-hat and its two combinations
# ---------------------------------------------------------------------------

def Fhat_numeric(z1, z2, z3, tau, P: int = 113):
    """F-hat = F (mu-representation) + R*, at generic z1."""
    with workprec(P):
        return +(F_mu_numeric(z1, z2, z3, tau, P) + Rstar_numeric(z1, z2, z3, tau, P))


def Hhat_numeric(z, tau, P: int = 113):
    """H-hat(z;tau) = q^(-1/4) zeta sum_{a,b} i^(-a-b)
                      F-hat(z, tau/2+1/4+a/2, tau/2+1/4+b/2)."""
    with workprec(P):
        z, tau = mp.mpc(z), mp.mpc(tau)
        acc = mp.mpc(0)
        for alpha in (0, 1):
            for beta in (0, 1):
                weight = (-1j) ** (alpha + beta)
                f = _fhat_generic(z, alpha, beta, tau, P)
                acc += weight * f
        return +(qpow(tau, -F(1, 4)) * mp.expjpi(2 * z) * acc)


def _fhat_generic(z, alpha, beta, tau, P):
    """F-hat(z, w_a, w_b) at generic z, with the continuity form of the second
    term when w_a + w_b lies on the lattice (alpha + beta odd)."""
    w_a, w_b = _w_point(tau, alpha), _w_point(tau, beta)
    eta3 = kernels.eta(tau) ** 3
    th_a, th_b = kernels.theta(w_a, tau), kernels.theta(w_b, tau)
    t1 = 1j * kernels.theta(z, tau) * kernels.muhat(z, w_a, tau) * kernels.muhat(z, w_b, tau)
    if (alpha + beta) % 2 == 0:
        s = w_a + w_b
        t2 = -eta3 * kernels.theta(s, tau) / (th_a * th_b) * kernels.muhat(z, s, tau)
    else:
        t2 = 1j * eta3 * eta3 * mp.expjpi(-2 * z) / (th_a * th_b * kernels.theta(z, tau))
    return t1 + t2


def hhat1_numeric(tau, P: int = 160) -> Approx:
    """H-hat-1 = -(H-hat(0) + q^(-1/2) H-hat(tau)) / 2, via the removable-center
    assembly; the target identity is H-hat-1 = 0."""
    with workprec(P):
        tau = mp.mpc(tau)
        d0 = _fhat_center_data(tau, P, "zero", want_dz=False)
        dt = _fhat_center_data(tau, P, "tau", want_dz=False)
        h11 = mp.mpc(0)
        h12 = mp.mpc(0)
        err = 0.0
        for (alpha, beta), (f0, _) in d0.items():
            weight = (-1j) ** (alpha + beta)
            h11 += weight * f0.value
            err += abs(weight) * f0.err
        for (alpha, beta), (ft, _) in dt.items():
            weight = (-1j) ** (alpha + beta)
            h12 += weight * ft.value
            err += abs(weight) * ft.err
        q14 = qpow(tau, F(1, 4))
        val = -(h11 / q14 + h12 * q14) / 2
        err *= float(max(abs(q14), abs(1 / q14)))
        return Approx(+val, err)


def hhat2_numeric(tau, P: int = 160, formal: bool = False) -> Approx:
    """H-hat-2 = [d/dzeta H-hat(z)]_{zeta=1}
               - [d/dzeta (q^(-1/2) zeta^{-1} H-hat(z+tau))]_{zeta=1}."""
    with workprec(P):
        tau = mp.mpc(tau)
        d0 = _fhat_center_data(tau, P, "zero", want_dz=True, formal=formal)
        dt = _fhat_center_data(tau, P, "tau", want_dz=True, formal=formal)
        two_pi_i = 2j * mp.pi
        h21 = mp.mpc(0)
        h22 = mp.mpc(0)
        err = 0.0
        for (alpha, beta), (f0, df0) in d0.items():
            weight = (-1j) ** (alpha + beta)
            h21 += weight * (f0.value + df0.value / two_pi_i)
            err += f0.err + df0.err
        for (alpha, beta), (ft, dft) in dt.items():
            weight = (-1j) ** (alpha + beta)
            h22 += weight * dft.value / two_pi_i
            err += dft.err
        q14 = qpow(tau, F(1, 4))
        val = h21 / q14 - h22 * q14
        err *= float(max(abs(q14), abs(1 / q14)))
        return Approx(+val, err)


# ---------------------------------------------------------------------------
# FF(z) and the completed weight-1 object
# ---------------------------------------------------------------------------

def fcal_numeric(z, tau, P: int = 113):
    """FF(z;tau) = q^(-1/8) zeta^(1/2) theta(z) mu-hat(z, tau/2 + 1/4)."""
    with workprec(P):
        z, tau = mp.mpc(z), mp.mpc(tau)
        return +(qpow(tau, -F(1, 8)) * mp.expjpi(z) * kernels.theta(z, tau)
                 * kernels.muhat(z, _w_point(tau, 0), tau))


def fcal_derivs(tau, P: int = 160, formal: bool = False,
                ctx: Optional[PhatContext] = None) -> Tuple[Approx, Approx, Approx]:
    """(FF(0), FF'(0), FF''(0)): the holomorphic block q^(-1/8) e^(pi i z)
    theta(z) mu(z, w0) is contour-differentiated; the R-block contributes

        FF'(0)  += (i/2) q^(-1/8) theta'(0) R(-w0)
        FF''(0) += (i/2) q^(-1/8) (2 pi i theta'(0) R(-w0) + 2 theta'(0) R'(-w0))

    using theta(0) = 0 and theta''(0) = 0.
    """
    if ctx is not None:
        tau, P = ctx.tau, ctx.prec
    with workprec(P):
        tau = mp.mpc(tau)
        w0 = _w_point(tau, 0)
        r = ctx.contour_radius() if ctx is not None else _contour_radius(tau)
        _assert_contour_clear(mp.mpc(0), r, tau)
        q18 = qpow(tau, -F(1, 8))

        def hol(z):
            return q18 * mp.expjpi(z) * kernels.theta(z, tau) * kernels.mu(z, w0, tau)

        g = contour_derivs(hol, mp.mpc(0), r, (0, 1, 2), P)
        thp = kernels.theta_dz(0, tau)
        R0 = kernels.R(-w0, tau)
        R1 = kernels.R_dz(-w0, tau, formal)
        f0 = Approx(g[0].value, g[0].err)
        c1 = 0.5j * q18 * thp * R0
        f1 = Approx(g[1].value + c1, g[1].err + _prim_err(c1, P))
        c2 = 0.5j * q18 * (2j * mp.pi * thp * R0 + 2 * thp * R1)
        f2 = Approx(g[2].value + c2, g[2].err + _prim_err(c2, P))
        return f0, f1, f2


def phat_omega_numeric(tau, P: int = 160, formal: bool = False) -> Approx:
    """The completed weight-1 object

        i FF'(0)^2 / (4 pi^2 eta^6)
        + e^(-pi i/4) eta(4 tau) FF''(0) / (4 pi^2 eta^3 eta(2 tau)^2).
    """
    with workprec(P):
        tau = mp.mpc(tau)
        _, f1, f2 = fcal_derivs(tau, P, formal)
        eta1 = kernels.eta(tau)
        eta2 = kernels.eta(2 * tau)
        eta4 = kernels.eta(4 * tau)
        pi2 = mp.pi ** 2
        t1 = 1j * f1.value ** 2 / (4 * pi2 * eta1 ** 6)
        t2 = (mp.expjpi(-F(1, 4)) * eta4 * f2.value
              / (4 * pi2 * eta1 ** 3 * eta2 ** 2))
        err = (2 * abs(f1.value) * f1.err / abs(4 * pi2 * eta1 ** 6)
               + abs(eta4 / (4 * pi2 * eta1 ** 3 * eta2 ** 2)) * f2.err)
        return Approx(+(t1 + t2), float(err) + _prim_err(t1 + t2, P))


# ---------------------------------------------------------------------------
# the f-family, the lowering identity, and the closed tau-bar derivative
# ---------------------------------------------------------------------------

def f_family_numeric(k: int, tau, P: int = 113):
    """f1 = v^(3/2) eta(-4 conj tau)^3, f2 = FF'(0)/eta^3,
    f3 = eta(4 tau)/eta(2 tau)^2,
    f4 = v^(1/2) eta(-2 conj tau)^5 / (eta(-conj tau)^2 eta(-4 conj tau)^2)."""
    with workprec(P):
        tau = mp.mpc(tau)
        v = tau.imag
        tb = mp.conj(tau)
        if k == 1:
            return +(v ** mp.mpf(1.5) * kernels.eta(-4 * tb) ** 3)
        if k == 2:
            return +(fcal_derivs(tau, P)[1].value / kernels.eta(tau) ** 3)
        if k == 3:
            return +(kernels.eta(4 * tau) / kernels.eta(2 * tau) ** 2)
        if k == 4:
            return +(mp.sqrt(v) * kernels.eta(-2 * tb) ** 5
                     / (kernels.eta(-tb) ** 2 * kernels.eta(-4 * tb) ** 2))
        raise ValueError("k must be 1..4")


def lowering_rhs(tau, P: int = 113, corrected: bool = False):
    """Right side of the lowering identity.

    corrected=False is the printed combination
        e^(3 pi i/4) sqrt(2)/pi f1 f2 - e^(pi i/4)/(2 sqrt(2) pi) f3 f4;
    corrected=True replaces the second term by the one following from the
    closed tau-bar derivative of FF''(0),
        - 1/(2 sqrt(2) pi) f3 * v^(1/2) eta(-2 conj tau)^2 / eta(-4 conj tau).
    """
    with workprec(P):
        tau = mp.mpc(tau)
        f1 = f_family_numeric(1, tau, P)
        f2 = f_family_numeric(2, tau, P)
        f3 = f_family_numeric(3, tau, P)
        first = mp.expjpi(F(3, 4)) * mp.sqrt(2) / mp.pi * f1 * f2
        if corrected:
            tb = mp.conj(tau)
            g4 = mp.sqrt(tau.imag) * kernels.eta(-2 * tb) ** 2 / kernels.eta(-4 * tb)
            return +(first - f3 * g4 / (2 * mp.sqrt(2) * mp.pi))
        f4 = f_family_numeric(4, tau, P)
        return +(first - mp.expjpi(F(1, 4)) / (2 * mp.sqrt(2) * mp.pi) * f3 * f4)


def dtaubar_fcal2_closed(tau, P: int = 113):
    """Closed form of d/d(tau-bar) FF''(0) (Wirtinger convention):
    pi e^(-pi i/4) eta^3 v^(-3/2) eta(-2 conj tau)^2 / (sqrt2 eta(-4 conj tau))."""
    with workprec(P):
        tau = mp.mpc(tau)
        tb = mp.conj(tau)
        return +(mp.pi * mp.expjpi(-F(1, 4)) * kernels.eta(tau) ** 3
                 / (mp.sqrt(2) * tau.imag ** mp.mpf(1.5))
                 * kernels.eta(-2 * tb) ** 2 / kernels.eta(-4 * tb))


def nonholo_plateau(tau, P: int = 113):
    """The non-decaying non-holomorphic part of the completed object: the
    difference between the Wirtinger and power-rule-only second derivatives,

        e^(-pi i/4) eta(4 tau)/(4 pi^2 eta^3 eta(2 tau)^2)
            * i q^(-1/8) theta'(0) (R'(-w0) - R'_formal(-w0)),

    whose magnitude approaches sqrt(2/v) eta(4 tau)/(2 pi eta(2 tau)^2)."""
    with workprec(P):
        tau = mp.mpc(tau)
        w0 = _w_point(tau, 0)
        delta = kernels.R_dz(-w0, tau) - kernels.R_dz(-w0, tau, formal=True)
        return +(mp.expjpi(-F(1, 4)) * kernels.eta(4 * tau)
                 / (4 * mp.pi ** 2 * kernels.eta(tau) ** 3 * kernels.eta(2 * tau) ** 2)
                 * 1j * qpow(tau, -F(1, 8)) * kernels.theta_dz(0, tau) * delta)


def dtaubar_fcal1_closed(tau, P: int = 113):
    """Closed form of d/d(tau-bar) FF'(0):
    pi e^(3 pi i/4) sqrt(2) v^(-1/2) eta(tau)^3 eta(-4 conj tau)^3."""
    with workprec(P):
        tau = mp.mpc(tau)
        return +(mp.pi * mp.expjpi(F(3, 4)) * mp.sqrt(2) / mp.sqrt(tau.imag)
                 * kernels.eta(tau) ** 3 * kernels.eta(-4 * mp.conj(tau)) ** 3)


def f2_shadow_closed(tau, P: int = 113):
    """2 sqrt(2) e^(-pi i/4) pi eta(4 tau)^3."""
    with workprec(P):
        tau = mp.mpc(tau)
        return +(2 * mp.sqrt(2) * mp.expjpi(-F(1, 4)) * mp.pi * kernels.eta(4 * tau) ** 3)


def holomorphic_part_numeric(tau, N: int, P: int = 113):
    """P-bar-omega(q) + 1/4 - eta(4 tau)/(2 eta(2 tau)^2), with the series
    summed from its exact coefficients to O(q^N)."""
    from .indefinite import pbar_omega_series

    with workprec(P):
        tau = mp.mpc(tau)
        series = pbar_omega_series(N, method="triple_sum")
        q = qpow(tau, 1)
        val = series.eval_mpc(mp, q)
        return +(val + mp.mpf(1) / 4
                 - kernels.eta(4 * tau) / (2 * kernels.eta(2 * tau) ** 2))
