"""Hypergeometric building blocks for the residue coefficients.

Everything here is a real-argument series evaluation: terminating 2F1
polynomials (the F_m factors), generic 2F1/3F2 sums, the first-order
eps-expansion data D_r and Delta_N of a 2F1 near negative-integer upper
parameters, and the large-m asymptotic estimates used as truncation
predictors.

Terminating alternating sums (argument < 0) cancel catastrophically at
large degree: the largest term exceeds the result by a factor that grows
like ((1+sqrt(|x|))^2/(1+|x|))^m, so beyond ~12 lost digits the sum is
re-run in mpmath at a working precision sized to the observed cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import DomainError, PoleError
from .kernel import digamma, gamma, zeta_tail

__all__ = [
    "FmSpec",
    "d_r",
    "delta_n",
    "eps_derivative_check",
    "f_m",
    "f_m_asymptotic",
    "gauss_2f1",
    "hyp3f2",
]

_SERIES_RTOL = 1e-16
_SERIES_MAX_TERMS = 400_000
_ESCALATE_RATIO = 1e3  # max|term| / |sum| beyond which doubles are retried in mpmath


@dataclass(frozen=True)
class FmSpec:
    """Parameters of the terminating polynomial 2F1(-m, -m-mu; 1+nu; chi).

    ``mu_signed`` is the signed order (+mu or -mu as it appears in the
    second upper parameter), ``chi`` the argument (may be negative).
    """

    m: int
    mu_signed: float
    nu: float
    chi: float

    def __post_init__(self):
        if self.m < 0 or self.m != int(self.m):
            raise DomainError(f"degree m must be a non-negative integer (got {self.m})")
        if not 1.0 + self.nu > 0.0:
            raise DomainError(f"lower parameter 1+nu must be positive (got nu={self.nu})")


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


# ----------------------------------------------------------------------
# terminating sums
# ----------------------------------------------------------------------

def _hyp2f1_terminating(m: int, b: float, c: float, x: float) -> float:
    """2F1(-m, b; c; x) summed exactly over its m+1 terms."""
    t = 1.0
    terms = [t]
    max_abs = 1.0
    for k in range(m):
        den = (c + k) * (k + 1.0)
        if den == 0.0:
            raise PoleError(f"2F1 lower-parameter pole hit at k={k + 1} (c={c})")
        t *= (k - m) * (b + k) * x / den
        terms.append(t)
        max_abs = max(max_abs, abs(t))
    total = math.fsum(terms)
    if max_abs > _ESCALATE_RATIO * max(abs(total), 5e-324) and x < 0.0:
        return _hyp2f1_terminating_mp(m, b, c, x, max_abs, total)
    return total


def _hyp2f1_terminating_mp(m, b, c, x, max_abs, total) -> float:
    lost = math.log10(max_abs / abs(total)) if total != 0.0 else 0.5 * m + 20
    with mp.workdps(int(25 + lost)):
        return float(mp.hyp2f1(-m, b, c, x))


# ----------------------------------------------------------------------
# generic convergent pFq series
# ----------------------------------------------------------------------

def _pfq_series(nums, dens, x, max_terms=_SERIES_MAX_TERMS):
    """Sum pFq(nums; dens; x) for |x| <= 1 by its defining series.

    Terms are generated by the exact ratio recurrence in vectorized blocks;
    if the cap is reached (x close to 1 with algebraic decay), the remainder
    is added from the power-law tail model, cf. _model_tail.
    """
    p_exp = math.fsum(nums) - math.fsum(dens) - 1.0
    if abs(x) > 1.0 or (abs(x) == 1.0 and p_exp >= -1.0 - 1e-12):
        raise DomainError(
            f"non-terminating series requires |x| < 1 (or |x| = 1 with parameter "
            f"excess {p_exp:.3g} < -1)"
        )
    block = 2048
    t_cur = 1.0
    k0 = 0
    partials = [1.0]
    total = 1.0
    samples = []  # (k, t_k) at block boundaries, for the tail-model fit
    while k0 < max_terms:
        k = np.arange(k0, k0 + block, dtype=np.float64)
        ratio = np.full(block, x)
        for a in nums:
            ratio *= a + k
        for b in dens:
            ratio /= b + k
        ratio /= k + 1.0
        terms = t_cur * np.cumprod(ratio)
        partials.append(float(np.sum(terms)))
        total = math.fsum(partials)
        t_cur = float(terms[-1])
        k0 += block
        samples.append((k0, t_cur))
        if np.max(np.abs(terms)) < _SERIES_RTOL * max(abs(total), 5e-324):
            return total
    # cap reached: x is near 1 and the decay is algebraic
    tail, _ = _model_tail(t_cur, k0, samples[:-1], p_exp, x)
    return total + tail


def _model_tail(t_k, k, samples, p_exp, x):
    """Remaining sum of terms modelled as C * m^p * x^m * (1 + c1/m + c2/m^2).

    ``t_k`` is the last computed term (index ``k``); ``samples`` is a list of
    earlier (index, term) pairs used to fit the 1/m corrections (pass an
    empty list for the bare model).  Returns (tail, error_estimate).  Only
    meaningful for eventually one-signed, smoothly decaying terms.
    """
    if t_k == 0.0:
        return 0.0, 0.0
    lam = -math.log(x) if x < 1.0 else 0.0

    def power_tail(p):
        # sum_{m>k} m^p x^m / (k^p x^k), via incomplete gamma or pure EM
        if lam * k > 700.0:
            return x / (1.0 - x)
        if lam < 1e-14:
            if p >= -1.0:
                raise DomainError("tail model diverges: parameter excess >= -1 at x=1")
            return zeta_tail(-p, int(k)) * float(k) ** (-p)
        integral = float(
            mp.exp(lam * k) * mp.power(lam, -p - 1.0) * mp.gammainc(p + 1.0, lam * k)
        ) * float(k) ** (-p)
        return integral - 0.5 - (p / k - lam) / 12.0

    t0, t1, t2 = power_tail(p_exp), power_tail(p_exp - 1.0), power_tail(p_exp - 2.0)
    tails = [t_k * t0]  # successively refined estimates
    picks = _fit_samples(t_k, k, samples)
    if len(picks) >= 1:
        c1 = _fit_corrections(t_k, k, picks[:1], p_exp, x, orders=1)
        if c1 is not None:
            (c1v,) = c1
            tails.append(t_k * (t0 + c1v / k * t1) / (1.0 + c1v / k))
    if len(picks) >= 2:
        c2 = _fit_corrections(t_k, k, picks[:2], p_exp, x, orders=2)
        if c2 is not None:
            c1v, c2v = c2
            den = 1.0 + c1v / k + c2v / (k * k)
            tails.append(t_k * (t0 + c1v / k * t1 + c2v / (k * k) * t2) / den)
    tail = tails[-1]
    spread = abs(tails[-1] - tails[-2]) if len(tails) >= 2 else abs(tail) * (8.0 / k)
    err = spread + abs(tail) * 2.0 / (k * k) + abs(t_k) * 1e-16
    return tail, err


def _fit_samples(t_k, k, samples):
    # earlier same-sign samples nearest 2k/3 and k/3, farthest first
    picks = []
    for target in (2 * k // 3, k // 3):
        best = None
        for m, t in samples:
            if m >= k or t == 0.0 or t * t_k <= 0.0 or any(m == q[0] for q in picks):
                continue
            if best is None or abs(m - target) < abs(best[0] - target):
                best = (m, t)
        if best is not None:
            picks.append(best)
    return picks


def _fit_corrections(t_k, k, picks, p_exp, x, orders):
    # the ratio G_i of sample i to the bare model gives an exactly linear
    # system: c1 (1/m_i - G_i/k) + c2 (1/m_i^2 - G_i/k^2) = G_i - 1
    lnx = math.log(x)
    gs = []
    for m, t in picks:
        lg = math.log(abs(t / t_k)) + p_exp * math.log(k / m) + (k - m) * lnx
        if abs(lg) > 30.0:
            return None
        gs.append((m, math.exp(lg)))
    if orders == 1:
        m1, g1 = gs[0]
        den = 1.0 / m1 - g1 / k
        if den == 0.0:
            return None
        c = [(g1 - 1.0) / den]
    else:
        (m1, g1), (m2, g2) = gs
        a = [
            [1.0 / m1 - g1 / k, 1.0 / m1**2 - g1 / k**2],
            [1.0 / m2 - g2 / k, 1.0 / m2**2 - g2 / k**2],
        ]
        b = [g1 - 1.0, g2 - 1.0]
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if det == 0.0:
            return None
        c = [
            (b[0] * a[1][1] - b[1] * a[0][1]) / det,
            (a[0][0] * b[1] - a[1][0] * b[0]) / det,
        ]
    if any(not math.isfinite(cv) for cv in c) or abs(c[0]) > 0.5 * k:
        return None
    if orders == 2 and abs(c[1]) > 0.1 * k * k:
        return None
    return c


def gauss_2f1(a: float, b: float, c: float, x: float) -> float:
    """Gauss hypergeometric 2F1(a, b; c; x) by direct series.

    Terminating cases (a or b a non-positive integer) are summed exactly;
    x = 1 uses the Gauss summation closed form (requires c - a - b > 0);
    otherwise |x| < 1 is required.
    """
    a_term = _is_nonpositive_integer(a)
    b_term = _is_nonpositive_integer(b)
    if _is_nonpositive_integer(c):
        stops = min((-int(v) for v in (a, b) if _is_nonpositive_integer(v)), default=None)
        if stops is None or stops > -int(c):
            raise PoleError(f"2F1 pole: lower parameter c={c} is a non-positive integer")
    if a_term or b_term:
        if b_term and not (a_term and -a <= -b):
            a, b = b, a
        return _hyp2f1_terminating(-int(a), b, c, x)
    if x == 1.0:
        if not c - a - b > 0.0:
            raise DomainError(f"2F1 at x=1 requires c-a-b > 0 (got {c - a - b})")
        return gamma(c) * gamma(c - a - b) / (gamma(c - a) * gamma(c - b))
    if abs(x) >= 1.0:
        raise DomainError(f"non-terminating 2F1 requires |x| < 1 (got x={x})")
    return _pfq_series((a, b), (c,), x)


def hyp3f2(a1: float, a2: float, a3: float, b1: float, b2: float, x: float) -> float:
    """3F2(a1, a2, a3; b1, b2; x) by direct series (terminating or |x| <= 1)."""
    uppers = (a1, a2, a3)
    degrees = [-int(v) for v in uppers if _is_nonpositive_integer(v)]
    if degrees:
        m = min(degrees)
        t = 1.0
        terms = [t]
        for k in range(m):
            den = (b1 + k) * (b2 + k) * (k + 1.0)
            if den == 0.0:
                raise PoleError(f"3F2 lower-parameter pole hit at k={k + 1}")
            t *= (a1 + k) * (a2 + k) * (a3 + k) * x / den
            terms.append(t)
        return math.fsum(terms)
    return _pfq_series(uppers, (b1, b2), x)


# ----------------------------------------------------------------------
# F_m and its large-m behaviour
# ----------------------------------------------------------------------

def f_m(spec: FmSpec) -> float:
    """The residue polynomial 2F1(-m, -m-mu; 1+nu; chi); F_0 = 1."""
    return _hyp2f1_terminating(spec.m, -spec.m - spec.mu_signed, 1.0 + spec.nu, spec.chi)


def _f_m_sign_log(spec: FmSpec) -> tuple[float, float]:
    # (sign, log|F_m|) for evaluators that assemble terms in log space
    v = f_m(spec)
    if v == 0.0:
        return 0.0, -math.inf
    if math.isfinite(v):
        return math.copysign(1.0, v), math.log(abs(v))
    with mp.workdps(30):
        fv = mp.hyp2f1(-spec.m, -spec.m - spec.mu_signed, 1.0 + spec.nu, spec.chi)
        return float(mp.sign(fv)), float(mp.log(abs(fv)))


def f_m_asymptotic(spec: FmSpec) -> float:
    """Leading large-m estimate of F_m.

    For 0 < chi < 1 this is the smooth exponential-growth form; for
    chi < 0 the oscillatory Jacobi-polynomial form with the factor
    cos(2*rho*phi - pi*nu/2 - pi/4), rho = m + (1+nu+mu)/2,
    phi = arctan(sqrt(|chi|)).
    """
    m, mus, nu, chi = spec.m, spec.mu_signed, spec.nu, spec.chi
    if m < 1:
        raise DomainError("asymptotic estimate needs m >= 1")
    if chi > 0.0:
        if not chi < 1.0:
            raise DomainError("smooth-form estimate needs 0 < chi < 1")
        lg = (
            math.lgamma(1.0 + nu)
            - math.log(2.0 * math.sqrt(math.pi))
            - (nu + 0.5) * math.log(m)
            + (2.0 * m + 1.0 + nu + mus) * math.log1p(math.sqrt(chi))
            - (0.5 * nu + 0.25) * math.log(chi)
        )
        return math.exp(lg)
    if chi < 0.0:
        c = -chi
        rho = m + 0.5 * (1.0 + nu + mus)
        phi = math.atan(math.sqrt(c))
        lg = (
            math.lgamma(1.0 + nu)
            - math.log(math.sqrt(math.pi))
            - (nu + 0.5) * math.log(m)
            + (m + 0.5 * (1.0 + nu + mus)) * math.log1p(c)
            - (0.5 * nu + 0.25) * math.log(c)
        )
        return math.exp(lg) * math.cos(2.0 * rho * phi - 0.5 * math.pi * nu - 0.25 * math.pi)
    raise DomainError("asymptotic estimate undefined at chi = 0")


# ----------------------------------------------------------------------
# Appendix-C eps-expansion data
# ----------------------------------------------------------------------

def d_r(r: int, N: int, mu: float) -> float:
    """D_r(N, mu) = r! * sum_{k=0}^{r-1} (1/(N-k) + 1/(N+mu-k)); needs 1 <= r <= N."""
    if r < 1 or r != int(r):
        raise DomainError(f"d_r needs a positive integer r (got {r})")
    if r > N:
        raise DomainError(f"d_r needs r <= N (got r={r}, N={N})")
    if mu < 0.0:
        raise DomainError("d_r needs mu >= 0")
    s = math.fsum(1.0 / (N - k) + 1.0 / (N + mu - k) for k in range(int(r)))
    return math.factorial(int(r)) * s


def delta_n(N: int, mu: float, nu: float, chi: float) -> float:
    """First-order eps coefficient Delta_N(chi) of the 2F1 expansion.

    Finite double-binomial sum plus, for mu > 0, the 3F2 continuation term;
    the 3F2 terminates when mu is a positive integer, otherwise |chi| < 1
    is required.
    """
    if N < 0 or N != int(N):
        raise DomainError(f"delta_n needs a non-negative integer N (got {N})")
    if mu < 0.0 or nu < 0.0:
        raise DomainError("delta_n needs mu, nu >= 0")
    mu_int = mu == round(mu)
    if abs(chi) > 1.0 and not mu_int:
        raise DomainError("delta_n with non-integer mu needs |chi| <= 1")
    if abs(chi) == 1.0 and not mu_int and chi > 0:
        # 3F2 parameter excess is -2-mu-nu < -1, convergent; allowed
        pass
    N = int(N)
    terms = []
    binom_n = 1.0
    binom_mu = 1.0
    poch_nu = 1.0
    chi_r = 1.0
    max_abs = 0.0
    for r in range(1, N + 1):
        binom_n *= (N - r + 1) / r
        binom_mu *= (N + mu - r + 1) / r
        poch_nu *= nu + r
        chi_r *= chi
        t = binom_n * binom_mu * d_r(r, N, mu) / poch_nu * chi_r
        terms.append(t)
        max_abs = max(max_abs, abs(t))
    total = math.fsum(terms)
    if mu != 0.0:
        poch_mu = 1.0
        poch_nu_full = 1.0
        for j in range(N + 1):
            poch_mu *= mu + j
            poch_nu_full *= 1.0 + nu + j
        lead = poch_mu * chi ** (N + 1) / (poch_nu_full * (N + 1))
        total += lead * hyp3f2(1.0, 1.0, 1.0 - mu, N + nu + 2.0, N + 2.0, chi)
    if chi < 0.0 and max_abs > _ESCALATE_RATIO * max(abs(total), 5e-324):
        return _delta_n_mp(N, mu, nu, chi, max_abs, total)
    return total


def _delta_n_mp(N, mu, nu, chi, max_abs, total) -> float:
    lost = math.log10(max_abs / abs(total)) if total != 0.0 else 0.5 * N + 20
    with mp.workdps(int(25 + lost)):
        tot = mp.mpf(0)
        for r in range(1, N + 1):
            dr = mp.factorial(r) * (
                mp.digamma(N + 1) + mp.digamma(N + 1 + mu)
                - mp.digamma(N + 1 - r) - mp.digamma(N + 1 + mu - r)
            )
            tot += (
                mp.binomial(N, r) * mp.binomial(N + mu, r) * dr
                / mp.rf(1 + mp.mpf(nu), r) * mp.mpf(chi) ** r
            )
        if mu != 0.0:
            tot += (
                mp.rf(mp.mpf(mu), N + 1) * mp.mpf(chi) ** (N + 1)
                / (mp.rf(1 + mp.mpf(nu), N + 1) * (N + 1))
                * mp.hyper([1, 1, 1 - mu], [N + nu + 2, N + 2], chi)
            )
        return float(tot)


def eps_derivative_check(
    N: int, mu: float, nu: float, chi: float, eps: float
) -> tuple[float, float]:
    """Difference quotient of 2F1(-N+eps, -N-mu+eps; 1+nu; chi) vs -Delta_N.

    Returns ``(quotient, -delta_n(...))``; the quotient tends to the second
    entry as eps -> 0.  Exposed for diagnostics; the acceptance suite uses
    Richardson-extrapolated central differences built on gauss_2f1 directly.
    """
    if not 0.0 < eps <= 1e-3:
        raise DomainError("eps must lie in (0, 1e-3]")
    base = f_m(FmSpec(N, mu, nu, chi))
    shifted = gauss_2f1(-N + eps, -N - mu + eps, 1.0 + nu, chi)
    return (shifted - base) / eps, -delta_n(N, mu, nu, chi)
