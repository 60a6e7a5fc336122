"""Hypergeometric building blocks: 2F1/3F2 series, F_m, D_r, Delta_N, asymptotics."""

import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from besselsum import (
    DomainError,
    FmSpec,
    PoleError,
    d_r,
    delta_n,
    digamma,
    eps_derivative_check,
    f_m,
    f_m_asymptotic,
    gamma,
    gauss_2f1,
    hyp3f2,
)


# ----------------------------------------------------------------------
# gauss_2f1
# ----------------------------------------------------------------------

def test_2f1_at_zero():
    assert gauss_2f1(0.7, -2.3, 1.9, 0.0) == 1.0


@pytest.mark.parametrize("mu,nu,chi", [(0.5, 0.25, 0.3), (2.0, 0.0, -0.7), (1.3, 1.1, 0.95)])
def test_2f1_terminating_degree_one(mu, nu, chi):
    got = gauss_2f1(-1.0, -1.0 - mu, 1.0 + nu, chi)
    assert got == pytest.approx(1.0 + (1.0 + mu) * chi / (1.0 + nu), rel=1e-14)


def test_2f1_gauss_summation_at_one():
    got = gauss_2f1(0.3, 0.2, 2.0, 1.0)
    want = gamma(2.0) * gamma(1.5) / (gamma(1.7) * gamma(1.8))
    assert got == pytest.approx(want, rel=1e-13)


def test_2f1_domain_and_pole_errors():
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1.5, 1.2)
    with pytest.raises(DomainError):
        gauss_2f1(0.5, 0.5, 1.5, -1.0)
    with pytest.raises(DomainError):
        gauss_2f1(1.0, 1.0, 1.5, 1.0)  # Gauss form needs c - a - b > 0
    with pytest.raises(PoleError):
        gauss_2f1(0.5, 0.5, -2.0, 0.3)


def test_2f1_vs_scipy():
    rng = np.random.default_rng(7)
    for _ in range(200):
        a = rng.uniform(-3.0, 3.0)
        b = rng.uniform(-3.0, 3.0)
        c = rng.uniform(0.2, 4.0)
        x = rng.uniform(-0.95, 0.95)
        assert gauss_2f1(a, b, c, x) == pytest.approx(
            float(sp.hyp2f1(a, b, c, x)), rel=1e-11, abs=1e-13
        )


def test_2f1_slow_near_one():
    # x close to 1 exercises the capped series plus modelled tail
    a, b, c = 0.4, 0.3, 2.1
    got = gauss_2f1(a, b, c, 1.0 - 2e-8)
    want = float(sp.hyp2f1(a, b, c, 1.0 - 2e-8))
    assert got == pytest.approx(want, rel=1e-9)


# ----------------------------------------------------------------------
# f_m
# ----------------------------------------------------------------------

def test_f_m_basics():
    for mus, nu, chi in [(0.7, 0.2, 0.5), (-1.3, 1.0, -0.8), (2.0, 0.0, 0.25)]:
        assert f_m(FmSpec(0, mus, nu, chi)) == 1.0
    assert f_m(FmSpec(1, 2.0, 0.0, 0.25)) == pytest.approx(1.75, rel=1e-15)


def test_f_m_degree_two_brute_force():
    # 3-term Pochhammer sum written out by hand
    m, mu, nu, chi = 2, 0.5, 0.5, 0.3
    terms = []
    for k in range(m + 1):
        num = math.prod(-m + j for j in range(k)) * math.prod(-m - mu + j for j in range(k))
        den = math.prod(1.0 + nu + j for j in range(k)) * math.factorial(k)
        terms.append(num / den * chi**k)
    want = math.fsum(terms)
    assert f_m(FmSpec(m, mu, nu, chi)) == pytest.approx(want, rel=1e-14)
    assert gauss_2f1(-2.0, -2.0 - mu, 1.0 + nu, chi) == pytest.approx(want, rel=1e-14)


def test_f_m_equals_gauss_2f1_500_random():
    rng = np.random.default_rng(42)
    for _ in range(500):
        m = int(rng.integers(0, 31))
        mus = rng.uniform(-3.0, 3.0)
        nu = rng.uniform(0.0, 3.0)
        chi = rng.uniform(-1.0, 1.0)
        a = f_m(FmSpec(m, mus, nu, chi))
        b = gauss_2f1(float(-m), -m - mus, 1.0 + nu, chi)
        assert a == pytest.approx(b, rel=1e-13, abs=1e-280)


def test_f_m_at_chi_one_gauss_form():
    rng = np.random.default_rng(43)
    for _ in range(50):
        m = int(rng.integers(0, 25))
        mus = rng.uniform(-2.0, 2.0)
        nu = rng.uniform(0.0, 2.0)
        # c - a - b = 1 + nu + 2m + mus > 0 always holds here
        want = (
            gamma(1.0 + nu)
            * gamma(1.0 + nu + 2.0 * m + mus)
            / (gamma(1.0 + nu + m) * gamma(1.0 + nu + m + mus))
        )
        assert f_m(FmSpec(m, mus, nu, 1.0)) == pytest.approx(want, rel=1e-12)


def test_f_m_large_degree_alternating_escalates():
    # doubles alone lose ~60 digits here; the mpmath path must hold 1e-13
    import mpmath as mp

    with mp.workdps(200):
        ref = float(mp.hyp2f1(-200, -201.0, 1.5, -0.5))
    assert f_m(FmSpec(200, 1.0, 0.5, -0.5)) == pytest.approx(ref, rel=1e-13)


# ----------------------------------------------------------------------
# D_r and Delta_N
# ----------------------------------------------------------------------

def test_d_r_examples():
    n, mu = 5, 1.5
    assert d_r(1, n, mu) == pytest.approx(1.0 / n + 1.0 / (n + mu), rel=1e-15)
    # mu = 0: two equal halves
    assert d_r(3, 6, 0.0) == pytest.approx(
        2.0 * math.factorial(3) * (digamma(7.0) - digamma(4.0)), rel=1e-13
    )
    assert d_r(2, 3, 1.0) == pytest.approx(17.0 / 6.0, rel=1e-14)
    with pytest.raises(DomainError):
        d_r(4, 3, 1.0)


@pytest.mark.parametrize("mu", [0.0, 0.5, 1.0, 2.0, 7.3])
def test_d_r_dual_forms(mu):
    for big_n in range(1, 21):
        for r in range(1, big_n + 1):
            psi_form = math.factorial(r) * (
                digamma(big_n + 1.0)
                + digamma(big_n + 1.0 + mu)
                - digamma(big_n + 1.0 - r)
                - digamma(big_n + 1.0 + mu - r)
            )
            assert d_r(r, big_n, mu) == pytest.approx(psi_form, rel=1e-12)


def test_delta_n_mu_zero():
    # second expression vanishes; N = 0 leaves nothing at all
    assert delta_n(0, 0.0, 0.7, 0.4) == 0.0
    got = delta_n(3, 0.0, 0.5, 0.6)
    want = math.fsum(
        math.comb(3, r) * math.comb(3, r) * d_r(r, 3, 0.0)
        / math.prod(1.5 + j for j in range(r)) * 0.6**r
        for r in range(1, 4)
    )
    assert got == pytest.approx(want, rel=1e-13)


def test_delta_n_terminating_3f2():
    # 1 - mu = 0 truncates the 3F2 to 1
    assert delta_n(0, 1.0, 0.0, 0.5) == pytest.approx(0.5, rel=1e-15)


def test_delta_n_section5_closed_form():
    # mu = 2 closed form: the 3F2 collapses to two terms
    nu, chi = 0.0, 0.4
    got = delta_n(1, 2.0, nu, -chi)
    finite = -math.comb(1, 1) * math.comb(3, 1) * d_r(1, 1, 2.0) / (1.0 + nu) * chi
    extra = (
        (-chi) ** 2 * math.factorial(3)
        / ((1.0 + nu) * (2.0 + nu) * 2.0)
        * (1.0 + chi / (3.0 * (3.0 + nu)))
    )
    assert got == pytest.approx(finite + extra, rel=1e-13)


def test_delta_n_domain():
    with pytest.raises(DomainError):
        delta_n(2, 0.7, 0.5, 1.5)


def test_eps_derivative_check_halving():
    for n, mu, nu, chi in [(0, 0.8, 0.3, 0.5), (2, 1.5, 0.5, 0.3), (3, 2.0, 0.4, 0.6)]:
        q1, target = eps_derivative_check(n, mu, nu, chi, 1e-4)
        q2, _ = eps_derivative_check(n, mu, nu, chi, 0.5e-4)
        e1, e2 = abs(q1 - target), abs(q2 - target)
        assert e2 < e1
        assert 1.7 <= e1 / e2 <= 2.3


def test_eps_derivative_check_richardson():
    n, mu, nu, chi = 2, 1.5, 0.5, 0.3
    q1, target = eps_derivative_check(n, mu, nu, chi, 1e-4)
    q2, _ = eps_derivative_check(n, mu, nu, chi, 0.5e-4)
    rich = 2.0 * q2 - q1
    assert rich == pytest.approx(target, abs=1e-6)


# ----------------------------------------------------------------------
# asymptotic estimates (Appendix-B forms)
# ----------------------------------------------------------------------

def test_asymptotic_smooth_ratio():
    spec = FmSpec(200, 1.0, 0.5, 0.25)
    ratio = f_m(spec) / f_m_asymptotic(spec)
    assert abs(ratio - 1.0) < 0.05


def test_asymptotic_ratio_improves():
    for m in (25, 50, 100):
        r1 = f_m(FmSpec(m, 1.0, 0.5, 0.25)) / f_m_asymptotic(FmSpec(m, 1.0, 0.5, 0.25))
        r2 = f_m(FmSpec(2 * m, 1.0, 0.5, 0.25)) / f_m_asymptotic(FmSpec(2 * m, 1.0, 0.5, 0.25))
        assert abs(r2 - 1.0) < abs(r1 - 1.0)


def test_asymptotic_oscillatory_envelope():
    mu, nu, chi = 1.0, 0.5, 0.5
    env_const = gamma(1.0 + nu) / math.sqrt(math.pi) / chi ** (nu / 2.0 + 0.25)
    for m in range(150, 251):
        envelope = env_const * (1.0 + chi) ** (m + (1.0 + nu + mu) / 2.0) / m ** (nu + 0.5)
        assert abs(f_m(FmSpec(m, mu, nu, -chi))) <= 1.05 * envelope


def test_asymptotic_oscillatory_at_extrema():
    # where the cosine is near an extremum the estimate should be close
    mu, nu, chi = 1.0, 0.5, 0.5
    checked = 0
    for m in range(180, 230):
        rho = m + 0.5 * (1.0 + nu + mu)
        phase = 2.0 * rho * math.atan(math.sqrt(chi)) - 0.5 * math.pi * nu - 0.25 * math.pi
        if abs(math.cos(phase)) > 0.9:
            est = f_m_asymptotic(FmSpec(m, mu, nu, -chi))
            assert f_m(FmSpec(m, mu, nu, -chi)) == pytest.approx(est, rel=0.15)
            checked += 1
    assert checked > 5


def test_asymptotic_growth_rate_chi_to_one():
    # (1+sqrt(chi))^(2m) -> 4^m growth at chi -> 1, after removing the
    # known m^-(nu+1/2) prefactor
    chi, nu = 1.0 - 1e-9, 0.5
    l50 = math.log(f_m_asymptotic(FmSpec(50, 1.0, nu, chi))) + (nu + 0.5) * math.log(50)
    l100 = math.log(f_m_asymptotic(FmSpec(100, 1.0, nu, chi))) + (nu + 0.5) * math.log(100)
    assert (l100 - l50) / 50.0 == pytest.approx(2.0 * math.log(2.0), rel=1e-3)


def test_asymptotic_domain():
    with pytest.raises(DomainError):
        f_m_asymptotic(FmSpec(0, 1.0, 0.5, 0.5))
    with pytest.raises(DomainError):
        f_m_asymptotic(FmSpec(10, 1.0, 0.5, 1.5))


# ----------------------------------------------------------------------
# 3F2 closed forms at x = 1 (slow-series route)
# ----------------------------------------------------------------------

@pytest.mark.parametrize("mu,nu", [(0.7, 0.4), (1.6, 0.2), (2.0, 1.0)])
def test_3f2_at_one_closed_forms(mu, nu):
    got2 = hyp3f2(1.0, 1.0, 1.0 - mu, nu + 2.0, 2.0, 1.0)
    want2 = (1.0 + nu) / mu * (digamma(1.0 + mu + nu) - digamma(1.0 + nu))
    assert got2 == pytest.approx(want2, rel=1e-8)
    got3 = hyp3f2(1.0, 1.0, 1.0 - mu, nu + 3.0, 3.0, 1.0)
    want3 = (
        2.0 * (2.0 + nu) * (2.0 + mu + nu) / (mu * (1.0 + mu))
        * (digamma(3.0 + mu + nu) - digamma(2.0 + nu))
        - 2.0 * (2.0 + nu) / mu
    )
    assert got3 == pytest.approx(want3, rel=1e-8)


@given(st.floats(0.3, 2.5), st.floats(0.0, 2.0), st.floats(-0.9, 0.9))
@settings(max_examples=40, deadline=None)
def test_3f2_matches_mpmath(mu, nu, chi):
    import mpmath as mp

    got = hyp3f2(1.0, 1.0, 1.0 - mu, nu + 2.0, 2.0, chi)
    want = float(mp.hyper([1.0, 1.0, 1.0 - mu], [nu + 2.0, 2.0], chi))
    assert got == pytest.approx(want, rel=1e-12, abs=1e-13)
