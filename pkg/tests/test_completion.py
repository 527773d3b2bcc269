"""Completed objects: the triple-sum/Appell-Lerch duality, the completion
defect R*, the combined H-hat functions, the kernel FF and its derivatives,
the weight-1 object, and the f-family."""

from fractions import Fraction

import pytest
from mpmath import mp

from pwomega import completion, kernels
from pwomega.classical import EtaQuotient, eta_quotient_series
from pwomega.errors import PoleProximity
from pwomega.kernels import qpow, workprec
from pwomega.modular import (GroupElement, dtaubar_fd, lowering_fd,
                             psi_multiplier, power_principal, xi_fd)

F = Fraction
P = 160
TAU = mp.mpc("0.11", "0.93")
Z123 = (mp.mpc("0.13", "0.21"), mp.mpc("-0.07", "0.11"), mp.mpc("0.19", "-0.15"))


def test_cone_vs_mu_representation():
    a = completion.F_cone_numeric(*Z123, TAU, P)
    b = completion.F_mu_numeric(*Z123, TAU, P)
    assert abs(a - b) < 1e-40


def test_F_symmetry_in_last_arguments():
    z1, z2, z3 = Z123
    a = completion.F_mu_numeric(z1, z2, z3, TAU, P)
    b = completion.F_mu_numeric(z1, z3, z2, TAU, P)
    assert abs(a - b) < 1e-40


def test_F_removable_at_z1_zero():
    z1, z2, z3 = Z123
    with workprec(P):
        vals = [completion.F_mu_numeric(t * mp.mpc("0.1", "0.05"), z2, z3, TAU, P)
                for t in (mp.mpf(1) / 10, mp.mpf(1) / 40, mp.mpf(1) / 160, mp.mpf(1) / 640)]
        steps = [abs(vals[i + 1] - vals[i]) for i in range(3)]
        # linear convergence in |z1|: successive steps shrink ~4x
        assert steps[0] > 3 * steps[1] > 9 * steps[2]


def test_fhat_equals_f_plus_rstar_matches_direct_evaluation():
    z1, z2, z3 = Z123
    with workprec(P):
        got = completion.Fhat_numeric(z1, z2, z3, TAU, P)
        eta3 = kernels.eta(TAU) ** 3
        want = (1j * kernels.theta(z1, TAU) * kernels.muhat(z1, z2, TAU)
                * kernels.muhat(z1, z3, TAU)
                - eta3 * kernels.theta(z2 + z3, TAU)
                / (kernels.theta(z2, TAU) * kernels.theta(z3, TAU))
                * kernels.muhat(z1, z2 + z3, TAU))
        assert abs(got - want) < 1e-40


def test_rstar_zero_closed_form_is_the_limit():
    z1, z2, z3 = Z123
    with workprec(P):
        closed = completion.Rstar_numeric(mp.mpc(0), z2, z3, TAU, P)
        near = completion.Rstar_numeric(mp.mpc("1e-9", "3e-10"), z2, z3, TAU, P)
        assert abs(closed - near) < 1e-7


def test_rstar_tau_limit_and_shift_law():
    _, z2, z3 = Z123
    with workprec(P):
        lim = completion.Rstar_numeric(TAU, z2, z3, TAU, P)
        rhs = completion.rstar_tau_shift_rhs(z2, z3, TAU, P)
        assert abs(lim - rhs) < 1e-40
        near = completion.Rstar_numeric(TAU + mp.mpc("1e-9", "3e-10"), z2, z3, TAU, P)
        assert abs(lim - near) < 1e-7


def test_fcal_value_closed_form():
    f0, _, _ = completion.fcal_derivs(TAU, P)
    with workprec(P):
        th = kernels.theta(TAU / 2 + mp.mpf(1) / 4, TAU)
        closed = -1j * kernels.eta(TAU) ** 3 * qpow(TAU, -F(1, 8)) / th
        assert abs(f0.value - closed) < 1e-40
        # the constant term of the paired expansion vanishes
        assert abs(f0.value ** 2 + kernels.eta(TAU) ** 6 * qpow(TAU, -F(1, 4)) / th ** 2) < 1e-40


def test_fcal_derivs_match_wirtinger_fd():
    f0, f1, f2 = completion.fcal_derivs(TAU, 200)
    with workprec(200):
        h = mp.mpf(10) ** -6

        def fc(z):
            return completion.fcal_numeric(z, TAU, 200)

        dz = ((fc(h) - fc(-h)) / (2 * h)
              - 1j * (fc(1j * h) - fc(-1j * h)) / (2 * h)) / 2
        assert abs(f1.value - dz) < 1e-8
        fxx = (fc(h) - 2 * f0.value + fc(-h)) / h ** 2
        fyy = (fc(1j * h) - 2 * f0.value + fc(-1j * h)) / h ** 2
        fxy = (fc(h + 1j * h) - fc(h - 1j * h) - fc(-h + 1j * h) + fc(-h - 1j * h)) / (4 * h ** 2)
        assert abs(f2.value - (fxx - fyy - 2j * fxy) / 4) < 1e-8


def test_fcal_pole_on_lattice():
    with pytest.raises(PoleProximity):
        completion.fcal_numeric(0, TAU, P)


def test_phat_context_controls_contour():
    ctx = completion.PhatContext(TAU, prec=128, radius=0.05)
    ctx.validate()
    f0a, _, _ = completion.fcal_derivs(TAU, 128)
    f0b, _, _ = completion.fcal_derivs(None, ctx=ctx)
    assert abs(f0a.value - f0b.value) < 1e-30
    from pwomega.errors import ContourThroughPole
    with pytest.raises(ContourThroughPole):
        completion.PhatContext(TAU, radius=1.2).validate()


def test_hhat1_vanishes():
    val = completion.hhat1_numeric(TAU, P)
    assert abs(val.value) < 1e-40
    assert abs(val.value) < val.err


def test_hhat2_equals_minus_4i_eta3_phat():
    with workprec(P):
        h2 = completion.hhat2_numeric(TAU, P)
        ph = completion.phat_omega_numeric(TAU, P)
        assert abs(h2.value + 4j * kernels.eta(TAU) ** 3 * ph.value) < 1e-40


def test_hhat_shift_by_tau_matches_quarter_shift_rewrite():
    # H-hat(z + tau) = q^(1/4) zeta^2 sum i^(alpha+beta) F-hat(z, w_a, w_b)
    z = mp.mpc("0.23", "0.07")
    with workprec(P):
        lhs = completion.Hhat_numeric(z + TAU, TAU, P)
        acc = mp.mpc(0)
        for alpha in (0, 1):
            for beta in (0, 1):
                acc += (1j) ** (alpha + beta) * completion._fhat_generic(
                    z, alpha, beta, TAU, P)
        rhs = qpow(TAU, F(1, 4)) * mp.expjpi(4 * z) * acc
        assert abs(lhs - rhs) < 1e-38


def test_hhat_weight_32_law():
    # H-hat(z/(c tau+d); M tau) = psi^-3 e^{-pi i (ab + cd/4)/2} (c tau+d)^{3/2}
    #                              e^{-pi i c z^2/(c tau+d)} H-hat(z; tau)
    M = GroupElement(7, 5, 4, 3)
    z = mp.mpc("0.13", "0.02")
    with workprec(P):
        j = M.jfactor(TAU)
        lhs = completion.Hhat_numeric(z / j, M.act(TAU), P)
        mult = (psi_multiplier(M).pow(-3).value()
                * mp.expjpi(-(M.a * M.b + mp.mpf(M.c) * M.d / 4) / 2))
        rhs = (mult * power_principal(j, F(3, 2))
               * mp.expjpi(-M.c * z * z / j) * completion.Hhat_numeric(z, TAU, P))
        assert abs(lhs - rhs) / abs(rhs) < 1e-40


def test_phat_weight1_under_gamma():
    with workprec(P):
        for M in (GroupElement(7, 5, 4, 3), GroupElement(1, 2, 0, 1)):
            left = completion.phat_omega_numeric(M.act(TAU), P).value
            right = completion.phat_omega_numeric(TAU, P).value
            res = abs(left - mp.expjpi(mp.mpf(M.c) / 8) * M.jfactor(TAU) * right)
            assert res / max(abs(left), abs(right)) < 1e-40


def test_error_budgets_are_honest():
    # doubling the precision moves the value by less than the reported budget
    lo = completion.phat_omega_numeric(TAU, 96)
    hi = completion.phat_omega_numeric(TAU, 192)
    assert abs(lo.value - hi.value) < lo.err
    lo1 = completion.hhat1_numeric(TAU, 96)
    assert abs(lo1.value) < lo1.err


def test_f3_dual_route():
    with workprec(P):
        series = eta_quotient_series(EtaQuotient([(4, 1), (2, -2)]), 60)
        via_series = series.eval_mpc(mp, qpow(TAU, 1))
        direct = completion.f_family_numeric(3, TAU, P)
        assert abs(via_series - direct) < 1e-35


def test_f1_f4_reality_structure():
    with workprec(P):
        v = TAU.imag
        f1 = completion.f_family_numeric(1, -mp.conj(TAU), P)
        assert abs(v ** mp.mpf(-1.5) * f1 - kernels.eta(4 * TAU) ** 3) < 1e-35
        f4 = completion.f_family_numeric(4, -mp.conj(TAU), P)
        want = (kernels.eta(2 * TAU) ** 5
                / (kernels.eta(TAU) ** 2 * kernels.eta(4 * TAU) ** 2))
        assert abs(v ** mp.mpf(-0.5) * f4 - want) < 1e-35


def test_chi2_matches_f2_transform():
    # f2 transforms with weight 1/2 and multiplier chi2 on the paper group,
    # in both branch cases (8|c and 4||c) and with negative entries
    from pwomega.modular import chi_multiplier, in_gamma
    with workprec(P):
        for mat in ("1,0,8,1", "1,2,0,1", "7,5,4,3", "3,-1,4,-1"):
            M = GroupElement.parse(mat)
            assert in_gamma(M)
            left = completion.f_family_numeric(2, M.act(TAU), P)
            right = completion.f_family_numeric(2, TAU, P)
            ratio = left / (power_principal(M.jfactor(TAU), F(1, 2)) * right)
            assert abs(ratio - chi_multiplier(2, M).value()) < 1e-40, mat


def test_lowering_identity_corrected_form():
    with workprec(P):
        Lfd = lowering_fd(lambda t: completion.phat_omega_numeric(t, P).value, TAU, P)
        rhs = completion.lowering_rhs(TAU, P, corrected=True)
        assert abs(Lfd - rhs) < 1e-6


def test_dtaubar_fcal_closed_forms():
    with workprec(P):
        d1 = dtaubar_fd(lambda t: completion.fcal_derivs(t, P)[1].value, TAU)
        assert abs(d1 - completion.dtaubar_fcal1_closed(TAU, P)) < 1e-6
        d2 = dtaubar_fd(lambda t: completion.fcal_derivs(t, P)[2].value, TAU)
        assert abs(d2 - completion.dtaubar_fcal2_closed(TAU, P)) < 1e-6


def test_f2_shadow():
    with workprec(P):
        xi = xi_fd(lambda t: completion.f_family_numeric(2, t, P), F(1, 2), TAU, P)
        assert abs(xi - completion.f2_shadow_closed(TAU, P)) < 1e-6


def test_plateau_term_makes_holpart_decay():
    with workprec(P):
        res = {}
        for v in (3, 4):
            t = mp.mpc("0.3", v)
            ph = completion.phat_omega_numeric(t, P).value
            hol = completion.holomorphic_part_numeric(t, 120, P)
            res[v] = abs(ph - completion.nonholo_plateau(t, P) - hol)
        assert res[4] < 1e-8
        assert res[3] > 10 * res[4]
