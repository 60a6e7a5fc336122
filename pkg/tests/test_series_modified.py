"""Modified-Bessel series expansions (K*J and K*I) against oracles."""

import math

import numpy as np
import pytest

from besselsum import (
    DomainError,
    PoleCollisionError,
    SeriesKind,
    SeriesParams,
    TermLedger,
    classify_poles,
    direct_sum,
    evaluate_modified,
    s1,
    s1_special_mu2,
    s2,
    s_modified_alternating,
    zeta,
    zeta_log_deriv_even,
)
from besselsum.series_modified import _g_chi


# ----------------------------------------------------------------------
# pole classification
# ----------------------------------------------------------------------

def test_classify_all_simple():
    lat = classify_poles(SeriesParams(0.5, 0.2, 0.5, 1.0, 0.8))  # alpha-nu = 0.3
    assert lat.all_simple
    assert lat.s_plus[0] == pytest.approx(0.3 + 0.5)
    assert lat.s_minus[1] == pytest.approx(0.3 - 0.5 - 2.0)


def test_classify_mu2_treble():
    lat = classify_poles(SeriesParams(2.0, 0.0, 3.0, 1.0, 0.5))
    kinds = {c.kind for c in lat.collisions}
    assert "treble-at-one" in kinds
    assert "plus-minus-coincidence" in kinds
    assert not lat.all_simple


def test_classify_mu_integer_only():
    lat = classify_poles(SeriesParams(1.0, 0.3, 0.8, 1.0, 0.5))  # alpha-nu = 0.5
    kinds = [c.kind for c in lat.collisions]
    assert kinds == ["plus-minus-coincidence"]


def test_classify_single_hit_at_one():
    # mu non-integer, s_0^+ = 1
    p = SeriesParams(0.5, 0.2, 0.7, 1.0, 0.5)  # alpha - nu + mu = 1
    lat = classify_poles(p)
    assert [c.kind for c in lat.collisions] == ["plus-hits-one"]
    with pytest.raises(PoleCollisionError):
        s1(p)


# ----------------------------------------------------------------------
# simple-pole evaluators vs oracle
# ----------------------------------------------------------------------

def test_s1_vs_oracle():
    p = SeriesParams(0.5, 0.5, 0.25, 1.0, 0.8)
    r = s1(p)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    assert rep.tail_bound < 1e-13
    assert abs(r.value - rep.value) < 1e-10


def test_s1_negative_alpha():
    p = SeriesParams(0.3, 0.0, -1.0, 2.0, 1.0)
    r = s1(p)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_s1_b_to_zero_continuity():
    vals = []
    for b in (1e-6, 1e-7):
        vals.append(s1(SeriesParams(0.5, 0.0, 0.25, 1.0, b)).value)
    assert vals[0] == pytest.approx(vals[1], rel=1e-9)


def test_s1_chi_above_one():
    # b > a is allowed for K*J; exercises the Pfaff route in F(1)
    p = SeriesParams(0.5, 0.5, 0.25, 0.8, 2.0)
    r = s1(p)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_s2_vs_oracle():
    p = SeriesParams(1.5, 0.5, 1.0, 2.0, 1.0)
    r = s2(p)
    rep = direct_sum(SeriesKind.K2, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_s2_equal_arguments_vs_oracle():
    p = SeriesParams(0.4, 0.7, 1.2, 1.0, 1.0)
    r = s2(p)
    rep = direct_sum(SeriesKind.K2, p, 10**6)
    assert abs(r.value - rep.value) < 1e-7


def test_s1_vs_s2_b_to_zero():
    # nu = 0: J_0 and I_0 both tend to 1, the two series share the limit
    diffs = []
    for b in (1e-4, 1e-6):
        pa = SeriesParams(0.5, 0.0, 0.25, 1.0, b)
        diffs.append(abs(s1(pa).value - s2(pa).value))
    assert diffs[1] < diffs[0]
    assert diffs[1] / max(diffs[0], 5e-324) < 1e-2


def test_s2_domain_errors():
    with pytest.raises(DomainError):
        s2(SeriesParams(0.5, 0.5, 1.0, 1.0, 2.0))  # b > a
    with pytest.raises(DomainError):
        s2(SeriesParams(0.5, 0.5, -0.5, 1.0, 1.0))  # a = b needs alpha > 0
    with pytest.raises(DomainError):
        s2(SeriesParams(0.5, 0.5, 1.0, 5.0, 2.0))  # a + b > 2 pi


def test_s1_domain_boundary():
    with pytest.raises(DomainError):
        s1(SeriesParams(0.5, 0.2, 0.5, 6.0, 2.5))  # sqrt(a^2+b^2) > 2 pi
    r = s1(SeriesParams(0.5, 0.2, 0.5, 6.22, 0.5))
    assert any(w.startswith("boundary") for w in r.warnings)


def test_integer_mu_rejected_without_nan():
    for mu in (0.0, 1.0, 3.0):
        with pytest.raises(PoleCollisionError) as exc_info:
            s1(SeriesParams(mu, 0.3, 0.8, 1.0, 0.5))
        assert exc_info.value.lattice is not None


def test_near_integer_mu_warns_but_runs():
    p = SeriesParams(1.0 + 1e-6, 0.3, 0.8, 1.0, 0.5)
    r = s1(p)
    assert math.isfinite(r.value)
    assert any(w.startswith("ill-conditioned") for w in r.warnings)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    # ~6 digits are genuinely lost to the gamma-reflection cancellation
    assert abs(r.value - rep.value) < 1e-6


# ----------------------------------------------------------------------
# the mu=2, alpha-nu=3 treble-pole formula
# ----------------------------------------------------------------------

def test_s1_special_vs_oracle():
    p = SeriesParams(2.0, 0.0, 3.0, 1.0, 0.5)
    r = s1_special_mu2(p)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_s1_special_chi_to_zero_collapse():
    # G -> 0, Delta_m -> 0, F_m -> 1: the formula degenerates continuously
    assert _g_chi(0.5, 0.0) == 0.0
    v1 = s1_special_mu2(SeriesParams(2.0, 0.0, 3.0, 1.0, 1e-5)).value
    v2 = s1_special_mu2(SeriesParams(2.0, 0.0, 3.0, 1.0, 1e-6)).value
    assert v1 == pytest.approx(v2, rel=1e-8)


def test_s1_special_double_pole_coefficient_decay():
    # coefficient zeta(2m) Gamma(2m) / (m! (m+2)!) (a/4pi)^{2m}: the ratio of
    # consecutive coefficients tends to (a/2pi)^2
    a = 1.3
    target = (a / (2.0 * math.pi)) ** 2

    def coef(m):
        return (
            math.log(zeta(2.0 * m)) + math.lgamma(2.0 * m)
            - math.lgamma(m + 1.0) - math.lgamma(m + 3.0)
            + 2.0 * m * math.log(a / (4.0 * math.pi))
        )

    for m in (20, 40):
        ratio = math.exp(coef(m + 1) - coef(m))
        assert ratio == pytest.approx(target, rel=5.0 / m)


def test_s1_special_requires_special_shape():
    with pytest.raises(DomainError):
        s1_special_mu2(SeriesParams(2.0, 0.0, 2.5, 1.0, 0.5))
    with pytest.raises(DomainError):
        s1_special_mu2(SeriesParams(1.5, 0.0, 3.0, 1.0, 0.5))
    with pytest.raises(DomainError):
        s1_special_mu2(SeriesParams(2.0, 0.0, 3.0, 0.5, 1.0))  # b > a


def test_evaluate_modified_routes_special_case():
    p = SeriesParams(2.0, 0.5, 3.5, 1.0, 0.5)
    r = evaluate_modified(1, p)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10
    with pytest.raises(PoleCollisionError):
        evaluate_modified(2, p)  # only S^(1) has the special closed form
    with pytest.raises(DomainError):
        evaluate_modified(3, p)


def test_s1_collision_error_mentions_special_case():
    with pytest.raises(PoleCollisionError, match="s1_special_mu2"):
        s1(SeriesParams(2.0, 0.0, 3.0, 1.0, 0.5))


# ----------------------------------------------------------------------
# alternating variants
# ----------------------------------------------------------------------

def test_alternating_k1_vs_oracle():
    p = SeriesParams(0.5, 0.0, 1.0, 1.0, 0.5)
    r = s_modified_alternating(1, p)
    rep = direct_sum(SeriesKind.K1_ALT, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_alternating_k2_vs_oracle():
    p = SeriesParams(0.4, 0.7, 2.0, 0.5, 0.5)
    r = s_modified_alternating(2, p)
    rep = direct_sum(SeriesKind.K2_ALT, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_alternating_weight_at_alpha_one():
    p = SeriesParams(0.5, 0.3, 1.0, 1.0, 0.6)
    r = s_modified_alternating(1, p)
    want = s1(p).value - s1(p.scaled(2.0)).value
    assert r.value == pytest.approx(want, rel=1e-14)
    assert any("alternating" in w for w in r.warnings)


def test_alternating_special_case_routed():
    p = SeriesParams(2.0, 0.0, 3.0, 1.0, 0.5)
    r = s_modified_alternating(1, p)
    rep = direct_sum(SeriesKind.K1_ALT, p, 10**6)
    assert abs(r.value - rep.value) < 1e-10


def test_alternating_doubled_domain_error():
    with pytest.raises(DomainError, match="doubled"):
        s_modified_alternating(1, SeriesParams(0.5, 0.2, 0.5, 4.0, 1.0))


# ----------------------------------------------------------------------
# bulk oracle equivalence
# ----------------------------------------------------------------------

def test_random_simple_pole_sets():
    rng = np.random.default_rng(55)
    done = 0
    while done < 12:
        mu = float(rng.uniform(0.1, 2.9))
        nu = float(rng.uniform(0.0, 2.0))
        alpha = float(rng.uniform(-1.0, 3.0))
        a = float(rng.uniform(0.4, 3.0))
        b = float(rng.uniform(0.2, 2.0))
        p = SeriesParams(mu, nu, alpha, a, b)
        if not classify_poles(p).all_simple:
            continue
        if math.hypot(a, b) > 5.5 or abs(mu - round(mu)) < 1e-3:
            continue
        r = s1(p)
        rep = direct_sum(SeriesKind.K1, p, 10**6)
        assert abs(r.value - rep.value) < 1e-9
        done += 1


def test_ledger_for_special_case():
    led = TermLedger()
    r = s1_special_mu2(SeriesParams(2.0, 0.0, 3.0, 1.0, 0.5), ledger=led)
    assert led.entries[0].m == -2 and led.entries[1].m == -1
    assert led.entries[-1].cumulative == pytest.approx(r.value, rel=1e-12)
