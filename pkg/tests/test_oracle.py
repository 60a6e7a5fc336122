"""The direct-summation oracle: compensated sums, windows, tail bounds."""

import math

import numpy as np
import pytest

from besselsum import (
    DomainError,
    SeriesKind,
    SeriesParams,
    TruncationPolicy,
    direct_sum,
    neumaier_sum,
    s_equal,
)
from besselsum.oracle import _k_terms


def test_exponential_family_stops_early():
    p = SeriesParams(0.0, 0.0, 0.0, 1.0, 0.5)
    rep = direct_sum(SeriesKind.K1, p, 10**6)
    # terms decay like e^-n: a handful of chunks reaches 1e-14
    assert rep.n_terms <= 120
    assert not rep.heuristic
    assert rep.tail_bound < 1e-14 * abs(rep.value)


def test_self_consistency_two_truncations():
    p = SeriesParams(0.0, 0.0, 2.0, 1.0, 1.0)
    r5 = direct_sum(SeriesKind.JJ, p, 10**5)
    r6 = direct_sum(SeriesKind.JJ, p, 10**6)
    assert abs(r5.value - r6.value) < max(r5.tail_bound, 1e-10)


def test_alternating_identity_within_oracle():
    # direct signed sum vs S(a,b) - 2^(1-theta) S(2a,2b), all by direct sums
    p = SeriesParams(0.5, 0.5, 2.5, 1.1, 0.4)
    th = p.theta
    alt = direct_sum(SeriesKind.JJ_ALT, p, 2_000_000)
    s1r = direct_sum(SeriesKind.JJ, p, 2_000_000)
    s2r = direct_sum(SeriesKind.JJ, p.scaled(2.0), 1_000_000)
    assert abs(alt.value - (s1r.value - 2.0 ** (1.0 - th) * s2r.value)) < 1e-11


def test_permutation_invariance():
    p = SeriesParams(0.5, 0.5, 1.0, 1.0, 0.7)
    n = np.arange(1, 20_001, dtype=np.float64)
    t = _k_terms(SeriesKind.K1, p, n)
    total = neumaier_sum(t)
    rng = np.random.default_rng(3)
    blocks = [t[i : i + 1000] for i in range(0, len(t), 1000)]
    for _ in range(5):
        order = rng.permutation(len(blocks))
        permuted = np.concatenate([blocks[i] for i in order])
        assert abs(neumaier_sum(permuted) - total) < 1e-13 * abs(total)


def test_tail_bound_honesty_k_families():
    rng = np.random.default_rng(99)
    checked = 0
    violations = 0
    while checked < 200:
        kind = SeriesKind.K1 if rng.uniform() < 0.5 else SeriesKind.K2
        mu = float(rng.uniform(0.0, 2.5))
        nu = float(rng.uniform(0.0, 2.5))
        alpha = float(rng.uniform(-1.5, 3.0))
        a = float(rng.uniform(0.3, 3.0))
        if kind is SeriesKind.K2:
            b = float(rng.uniform(0.1, max(a - 0.2, 0.11)))
            if b >= a:
                continue
        else:
            b = float(rng.uniform(0.1, 3.0))
        p = SeriesParams(mu, nu, alpha, a, b)
        short = direct_sum(kind, p, 40)
        long = direct_sum(kind, p, 80)
        if abs(long.value - short.value) > short.tail_bound:
            violations += 1
        checked += 1
    assert violations <= 2  # >= 99% of cases honest


def test_window_average_beats_raw():
    # truth from the exactly-terminating expansion (theta = 2N)
    p = SeriesParams(0.5, 0.5, 3.0, 1.1, 1.1)
    truth = s_equal(p).value
    raw = direct_sum(SeriesKind.JJ, p, 10**5, window=False)
    win = direct_sum(SeriesKind.JJ, p, 10**5, window=True)
    assert abs(win.value - truth) < abs(raw.value - truth)
    assert abs(win.value - truth) < 1e-11


def test_resonant_boundary_value():
    # a = pi: the 2a-frequency component is resonant and must be corrected
    p = SeriesParams(1.0, 0.5, 0.8, math.pi, math.pi)
    rep = direct_sum(SeriesKind.JJ, p, 2_000_000)
    fine = direct_sum(SeriesKind.JJ, p, 4_000_000)
    assert abs(rep.value - fine.value) < 1e-12


def test_jj_low_alpha_is_heuristic():
    p = SeriesParams(0.5, 0.0, -0.5, 1.3, 0.7)
    rep = direct_sum(SeriesKind.JJ, p, 10**5)
    assert rep.heuristic


def test_domain_errors():
    with pytest.raises(DomainError):
        direct_sum(SeriesKind.JJ, SeriesParams(0.0, 0.0, -0.5, 1.0, 1.0), 1000)
    with pytest.raises(DomainError):
        direct_sum(SeriesKind.JJ, SeriesParams(0.0, 0.0, -1.5, 1.0, 0.5), 1000)
    with pytest.raises(DomainError):
        direct_sum(SeriesKind.K2, SeriesParams(0.0, 0.0, 1.0, 0.5, 1.0), 1000)
    with pytest.raises(DomainError):
        direct_sum(SeriesKind.JJ, SeriesParams(0.0, 0.0, 2.0, 1.0, 1.0), 0)


def test_k2_smooth_path_tail_model():
    # a - b tiny but nonzero: the exp(-(a-b) n) factor matters in the tail
    p = SeriesParams(0.4, 0.7, 1.2, 1.0, 1.0 - 1e-4)
    r1 = direct_sum(SeriesKind.K2, p, 10**5)
    r2 = direct_sum(SeriesKind.K2, p, 10**6)
    assert abs(r1.value - r2.value) < max(2.0 * r1.tail_bound, 1e-12)


def test_neumaier_sum_is_accurate():
    vals = [1.0, 1e100, 1.0, -1e100] * 1000
    assert neumaier_sum(vals) == 2000.0
