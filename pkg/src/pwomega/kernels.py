"""Arbitrary-precision numeric kernels: eta, theta, the error-integral factor,
Zwegers' R-function with its z-derivatives, and the Appell-Lerch mu-function.

Conventions:
  * q^x means e^(2 pi i tau x); zeta = e^(2 pi i z); tau = u + i v with v > 0.
  * every function computes at the CURRENT mpmath working precision and
    truncates tails below 2^-(prec+TAIL_GUARD) relative to the largest term,
    so callers get full working accuracy; public wrappers add GUARD bits.
  * R and its z-derivatives treat z as a real-analytic variable: the
    derivative is the Wirtinger d/dz, with the E-factor's dependence on
    y = Im z entering through dy/dz = 1/(2i).
"""

from __future__ import annotations

from mpmath import mp

from .errors import PoleProximity, PrecisionUnreachable

GUARD = 56          # extra working bits used by public wrappers
TAIL_GUARD = 10     # tail cut at 2^-(prec+TAIL_GUARD) * max_term


def workprec(P: int):
    return mp.workprec(P + GUARD)


def _eps():
    return mp.mpf(2) ** (-(mp.prec + TAIL_GUARD))


def qpow(tau, e):
    """e^(2 pi i tau e)."""
    return mp.expjpi(2 * mp.mpc(tau) * e)


# ---------------------------------------------------------------------------
# eta
# ---------------------------------------------------------------------------

def eta(tau):
    """Dedekind eta via the pentagonal-number expansion."""
    tau = mp.mpc(tau)
    v = tau.imag
    if v <= 0:
        raise PrecisionUnreachable("eta needs Im(tau) > 0")
    eps = _eps()
    # |q|^(k(3k-1)/2) < eps  once  pi*v*k^2 > prec*ln2 roughly
    kmax = int(mp.sqrt((mp.prec + TAIL_GUARD + 8) * mp.ln(2) / (3 * mp.pi * v))) + 3
    acc = mp.mpc(1)
    for k in range(1, kmax + 1):
        acc += (-1) ** k * (qpow(tau, k * (3 * k - 1) // 2) + qpow(tau, k * (3 * k + 1) // 2))
    return qpow(tau, mp.mpf(1) / 24) * acc


# ---------------------------------------------------------------------------
# theta
# ---------------------------------------------------------------------------

def _halfint_window(v, y, slack=4):
    """Index window (over n = k + 1/2) outside which
    exp(-pi v n^2 - 2 pi n y) is below the tail cut."""
    L = (mp.prec + TAIL_GUARD + 8) * mp.ln(2)
    root = mp.sqrt(y * y + v * L / mp.pi)
    lo = int(mp.floor((-y - root) / v)) - slack
    hi = int(mp.ceil((-y + root) / v)) + slack
    return lo, hi


def theta(z, tau):
    """Jacobi theta: sum over n in 1/2+Z of e^(pi i n^2 tau + 2 pi i n (z+1/2))."""
    z, tau = mp.mpc(z), mp.mpc(tau)
    v, y = tau.imag, z.imag
    if v <= 0:
        raise PrecisionUnreachable("theta needs Im(tau) > 0")
    lo, hi = _halfint_window(v, y)
    acc = mp.mpc(0)
    for k in range(lo, hi + 1):
        n = k + mp.mpf(1) / 2
        acc += mp.expjpi(n * n * tau + 2 * n * (z + mp.mpf(1) / 2))
    return acc


def theta_dz(z, tau):
    """d/dz of theta (holomorphic derivative)."""
    z, tau = mp.mpc(z), mp.mpc(tau)
    v, y = tau.imag, z.imag
    lo, hi = _halfint_window(v, y)
    acc = mp.mpc(0)
    for k in range(lo, hi + 1):
        n = k + mp.mpf(1) / 2
        acc += 2 * mp.pi * 1j * n * mp.expjpi(n * n * tau + 2 * n * (z + mp.mpf(1) / 2))
    return acc


# ---------------------------------------------------------------------------
# the error-integral factor
# ---------------------------------------------------------------------------

def E_func(w):
    """E(w) = 2 int_0^w e^(-pi t^2) dt = erf(sqrt(pi) w), real w."""
    return mp.erf(mp.sqrt(mp.pi) * w)


def sgn_minus_E(sign_n: int, w):
    """sgn(n) - E(w), via erfc when the signs agree (cancellation-free)."""
    if w == 0:
        return mp.mpf(sign_n)
    if (w > 0) == (sign_n > 0):
        return sign_n * mp.erfc(mp.sqrt(mp.pi) * abs(w))
    return sign_n - E_func(w)


# ---------------------------------------------------------------------------
# R and its z-derivatives
# ---------------------------------------------------------------------------

def _R_terms(z, tau, d_order, formal=False):
    """Common core for R and its first/second z-derivatives.

    formal=False differentiates in the Wirtinger sense (the E-factor's
    dependence on y = Im z enters with dy/dz = 1/(2i)); formal=True applies
    the power rule to the zeta-powers only, treating the E-factors as
    constants (the derivative along the real z-direction).
    """
    z, tau = mp.mpc(z), mp.mpc(tau)
    v, y = tau.imag, z.imag
    if v <= 0:
        raise PrecisionUnreachable("R needs Im(tau) > 0")
    s2v = mp.sqrt(2 * v)
    lo, hi = _halfint_window(v, -y)   # zeta^{-n}: the hump sits at +y/v
    acc = mp.mpc(0)
    inv2i = 0 if formal else 1 / (2j)
    for k in range(lo, hi + 1):
        n = k + mp.mpf(1) / 2
        sign_n = 1 if n > 0 else -1
        w = (n + y / v) * s2v
        c0 = sgn_minus_E(sign_n, w)
        phase = (-1) ** k * mp.expjpi(-n * n * tau - 2 * n * z)
        if d_order == 0:
            acc += c0 * phase
            continue
        dw = mp.sqrt(2 / v)                      # dw/dy
        c1 = -2 * mp.exp(-mp.pi * w * w) * dw    # d/dy of (sgn - E)
        if d_order == 1:
            acc += (-2j * mp.pi * n * c0 + inv2i * c1) * phase
        else:
            c2 = 4 * mp.pi * w * mp.exp(-mp.pi * w * w) * dw * dw
            acc += ((-2j * mp.pi * n) ** 2 * c0
                    + 2 * (-2j * mp.pi * n) * inv2i * c1
                    + inv2i ** 2 * c2) * phase
    return acc


def R(z, tau):
    """Zwegers' non-holomorphic R-function."""
    return _R_terms(z, tau, 0)


def R_dz(z, tau, formal=False):
    """d/dz of R: Wirtinger by default, power-rule-only with formal=True."""
    return _R_terms(z, tau, 1, formal)


def R_dz2(z, tau, formal=False):
    """(d/dz)^2 of R: Wirtinger by default, power-rule-only with formal=True."""
    return _R_terms(z, tau, 2, formal)


# ---------------------------------------------------------------------------
# mu and its completion
# ---------------------------------------------------------------------------

def mu(z1, z2, tau):
    """Appell-Lerch mu(z1, z2; tau) by its defining bilateral sum."""
    z1, z2, tau = mp.mpc(z1), mp.mpc(z2), mp.mpc(tau)
    v = tau.imag
    y1, y2 = z1.imag, z2.imag
    L = (mp.prec + TAIL_GUARD + 8) * mp.ln(2)
    A = int(mp.sqrt(L / (mp.pi * v))) + int((abs(y1) + abs(y2)) / v) + 6
    pole_cut = mp.mpf(2) ** (-(mp.prec - GUARD // 2) / 2)
    acc = mp.mpc(0)
    z1_fac = mp.expjpi(2 * z1)
    for n in range(-A, A + 1):
        qn = qpow(tau, n)
        den = 1 - z1_fac * qn
        if abs(den) < pole_cut * max(1, abs(z1_fac * qn)):
            raise PoleProximity(f"mu denominator at n={n} has modulus {abs(den)}")
        acc += (-1) ** n * mp.expjpi(2 * n * z2 + n * (n + 1) * tau) / den
    return mp.expjpi(z1) / theta(z2, tau) * acc


def muhat(z1, z2, tau):
    """Completed mu: mu + (i/2) R(z1 - z2)."""
    return mu(z1, z2, tau) + 0.5j * R(z1 - z2, tau)
