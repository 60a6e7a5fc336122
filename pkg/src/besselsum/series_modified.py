"""Expansions for the modified-Bessel series K*J and K*I.

Both families share one pole lattice s_m^{+-} = alpha - nu +- mu - 2m.  The
expansions hold when every pole is simple; integer mu merges the two half
lattices into double poles, and a lattice point landing on s = 1 collides
with the zeta pole.  The one multiple-pole configuration implemented in
closed form is mu = 2, alpha - nu = 3 (a treble pole at s = 1 with double
poles below), which carries the Stieltjes-constant and log^2 terms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError, PoleCollisionError, PoleError
from .hypergeo import FmSpec, _f_m_sign_log, delta_n, f_m, gauss_2f1, hyp3f2
from .kernel import (
    EULER_GAMMA,
    STIELTJES_1,
    digamma,
    gamma_sign_log,
    zeta,
    zeta_log_deriv_even,
    zeta_sign_log,
)
from .series_jj import INT_SNAP, _sum_residues
from .types import EvalResult, Method, SeriesParams, TermLedger, TruncationPolicy

__all__ = [
    "Collision",
    "PoleLattice",
    "classify_poles",
    "evaluate_modified",
    "s1",
    "s1_special_mu2",
    "s2",
    "s_modified_alternating",
]

_TWO_PI = 2.0 * math.pi
_BOUNDARY_FRACTION = 0.99
_NEAR_COLLISION_WINDOW = 1e-3


@dataclass(frozen=True)
class Collision:
    kind: str  # "plus-hits-one" | "minus-hits-one" | "plus-minus-coincidence" | "treble-at-one"
    m: int


@dataclass
class PoleLattice:
    """The two residue lattices and their coincidence report."""

    s_plus: list[float]
    s_minus: list[float]
    collisions: list[Collision] = field(default_factory=list)

    @property
    def all_simple(self) -> bool:
        return not self.collisions


def _snap_nonneg_int(x: float) -> int | None:
    r = round(x)
    if abs(x - r) < INT_SNAP and r >= 0:
        return int(r)
    return None


def classify_poles(p: SeriesParams, n_terms: int = 32) -> PoleLattice:
    """Report every pole coincidence of the K-family integrand.

    Evaluators refuse configurations that are not all-simple, except the
    implemented mu = 2, alpha - nu = 3 treble case.
    """
    c_plus = p.alpha - p.nu + p.mu
    c_minus = p.alpha - p.nu - p.mu
    lat = PoleLattice(
        s_plus=[c_plus - 2.0 * m for m in range(n_terms)],
        s_minus=[c_minus - 2.0 * m for m in range(n_terms)],
    )
    m_plus_one = _snap_nonneg_int(0.5 * (c_plus - 1.0))
    m_minus_one = _snap_nonneg_int(0.5 * (c_minus - 1.0))
    mu_int = _snap_nonneg_int(p.mu)
    if m_plus_one is not None:
        lat.collisions.append(Collision("plus-hits-one", m_plus_one))
    if m_minus_one is not None:
        lat.collisions.append(Collision("minus-hits-one", m_minus_one))
    if mu_int is not None:
        # s_m^+ coincides with s_{m-mu}^- for every m >= mu
        lat.collisions.append(Collision("plus-minus-coincidence", mu_int))
        if m_minus_one is not None:
            lat.collisions.append(Collision("treble-at-one", m_minus_one))
    return lat


def _is_mu2_special(p: SeriesParams) -> bool:
    return abs(p.mu - 2.0) < INT_SNAP and abs(p.alpha - p.nu - 3.0) < INT_SNAP


def _near_collision_warnings(p: SeriesParams) -> list[str]:
    out = []
    dist_mu = abs(p.mu - round(p.mu))
    if INT_SNAP <= dist_mu < _NEAR_COLLISION_WINDOW:
        out.append(
            f"ill-conditioned: mu={p.mu!r} is within {dist_mu:.1e} of an integer; the "
            "gamma-reflection pair cancels and costs roughly |log10(distance)| digits"
        )
    for c0 in (p.alpha - p.nu + p.mu, p.alpha - p.nu - p.mu):
        k = round(0.5 * (c0 - 1.0))
        dist = abs(0.5 * (c0 - 1.0) - k)
        if k >= 0 and INT_SNAP <= dist < _NEAR_COLLISION_WINDOW:
            out.append(
                f"ill-conditioned: a residue pole lies within {2.0 * dist:.1e} of s=1; "
                "the zeta factor is large and cancels against the F(1) term"
            )
    return out


def _require_simple(p: SeriesParams) -> None:
    lat = classify_poles(p)
    if lat.all_simple:
        return
    hint = (
        " (this is the implemented mu=2, alpha-nu=3 case: use s1_special_mu2)"
        if _is_mu2_special(p)
        else ""
    )
    kinds = ", ".join(f"{c.kind}@m={c.m}" for c in lat.collisions)
    raise PoleCollisionError(
        f"unsupported pole collision: {kinds}{hint}", lattice=lat
    )


# ----------------------------------------------------------------------
# shared pieces
# ----------------------------------------------------------------------

def _hyp2f1_any_neg(A: float, B: float, C: float, x: float) -> float:
    # 2F1 at a possibly large negative argument via the Pfaff map to (0, 1)
    if x >= -1.0 or (A <= 0.0 and A == math.floor(A)) or (B <= 0.0 and B == math.floor(B)):
        return gauss_2f1(A, B, C, x)
    w = x / (x - 1.0)
    return (1.0 - x) ** (-A) * gauss_2f1(A, C - B, C, w)


def _f1_term(p: SeriesParams, z: float) -> float:
    # residue of the zeta pole at s = 1; z is the 2F1 argument (-chi or +chi)
    mu, nu, alpha, a, b = p.mu, p.nu, p.alpha, p.a, p.b
    c1 = 0.5 * (1.0 - alpha + nu - mu)
    c2 = 0.5 * (1.0 - alpha + nu + mu)
    s1g, l1 = gamma_sign_log(c1)
    s2g, l2 = gamma_sign_log(c2)
    if s1g == 0.0 or s2g == 0.0:
        raise PoleError("F(1) gamma pole: a residue lattice point collides with s=1")
    hyp = _hyp2f1_any_neg(c1, c2, 1.0 + nu, z)
    if hyp == 0.0:
        return 0.0
    lg = (
        nu * math.log(b)
        + alpha * math.log(0.5 * a)
        - math.log(2.0)
        - (1.0 + nu) * math.log(a)
        - math.lgamma(1.0 + nu)
        + l1
        + l2
        + math.log(abs(hyp))
    )
    return s1g * s2g * math.copysign(1.0, hyp) * math.exp(lg)


def _lattice_term(p: SeriesParams, m: int, z: float) -> float:
    # combined m-th term of the two half-lattice sums, assembled in log space
    mu, nu, alpha, a, b = p.mu, p.nu, p.alpha, p.a, p.b
    log_pref = (
        nu * math.log(b)
        - (1.0 + nu) * math.log(2.0)
        - math.lgamma(1.0 + nu)
        - math.lgamma(m + 1.0)
    )
    log_half_a = math.log(0.5 * a)
    out = 0.0
    for pm in (+1.0, -1.0):
        gs, gl = gamma_sign_log(pm * mu - m)
        zs, zl = zeta_sign_log(alpha - nu + pm * mu - 2.0 * m)
        if gs == 0.0 or zs == 0.0:
            continue
        fs, fl = _f_m_sign_log(FmSpec(m, -pm * mu, nu, z))
        if fs == 0.0:
            continue
        sign = (-1.0) ** m * gs * zs * fs
        out += sign * math.exp(log_pref + gl + zl + fl + (2.0 * m - pm * mu) * log_half_a)
    return out


def _domain_check_s1(p: SeriesParams) -> list[str]:
    rho = math.hypot(p.a, p.b)
    if p.alpha > 0.0:
        if rho > _TWO_PI * (1.0 + 1e-12):
            raise DomainError(f"expansion domain requires sqrt(a^2+b^2) <= 2*pi (got {rho})")
    elif rho >= _TWO_PI:
        raise DomainError(
            f"expansion domain requires sqrt(a^2+b^2) < 2*pi for alpha <= 0 (got {rho})"
        )
    warns = []
    if rho >= _BOUNDARY_FRACTION * _TWO_PI:
        warns.append(
            "boundary: sqrt(a^2+b^2) is within 1% of 2*pi; truncation error grows "
            "towards the boundary and max_terms governs the attainable accuracy"
        )
    return warns


def s1(
    p: SeriesParams,
    policy: TruncationPolicy | None = None,
    ledger: TermLedger | None = None,
) -> EvalResult:
    """Expansion of sum K_mu(an) J_nu(bn) / n^alpha (all poles simple).

    alpha is unrestricted; the domain is sqrt(a^2+b^2) <= 2*pi (strict for
    alpha <= 0).  Raises PoleCollisionError on non-simple lattices.
    """
    policy = policy or TruncationPolicy()
    warnings = _domain_check_s1(p)
    _require_simple(p)
    warnings.extend(_near_collision_warnings(p))
    f1 = _f1_term(p, -p.chi)
    if ledger is not None:
        ledger.add(-1, f1, f1)
    q2 = (p.a * p.a + p.b * p.b) / (_TWO_PI * _TWO_PI)
    total, count, err, extra = _sum_residues(
        lambda m: _lattice_term(p, m, -p.chi),
        policy, q2, max(p.alpha, 0.1), f1, smooth=False, ledger=ledger,
    )
    warnings.extend(extra)
    return EvalResult(f1 + total, err, count + 1, Method.EXPANSION, warnings)


def s2(
    p: SeriesParams,
    policy: TruncationPolicy | None = None,
    ledger: TermLedger | None = None,
) -> EvalResult:
    """Expansion of sum K_mu(an) I_nu(bn) / n^alpha (all poles simple).

    Needs a > b (alpha unrestricted) or a = b with alpha > 0, and
    a + b <= 2*pi (strict for alpha <= 0).
    """
    policy = policy or TruncationPolicy()
    if p.b > p.a:
        raise DomainError("s2 needs a >= b (the K*I series diverges for b > a)")
    if p.a == p.b and p.alpha <= 0.0:
        raise DomainError("s2 with a = b needs alpha > 0")
    if p.alpha > 0.0:
        if p.a + p.b > _TWO_PI * (1.0 + 1e-12):
            raise DomainError(f"expansion domain requires a + b <= 2*pi (got {p.a + p.b})")
    elif p.a + p.b >= _TWO_PI:
        raise DomainError(
            f"expansion domain requires a + b < 2*pi for alpha <= 0 (got {p.a + p.b})"
        )
    warnings = []
    if p.a + p.b >= _BOUNDARY_FRACTION * _TWO_PI:
        warnings.append(
            "boundary: a + b is within 1% of 2*pi; truncation error grows towards "
            "the boundary and max_terms governs the attainable accuracy"
        )
    _require_simple(p)
    warnings.extend(_near_collision_warnings(p))
    f1 = _f1_term(p, p.chi)
    if ledger is not None:
        ledger.add(-1, f1, f1)
    q2 = ((p.a + p.b) / _TWO_PI) ** 2
    total, count, err, extra = _sum_residues(
        lambda m: _lattice_term(p, m, p.chi),
        policy, q2, max(p.alpha, 0.1), f1, smooth=True, ledger=ledger,
    )
    warnings.extend(extra)
    return EvalResult(f1 + total, err, count + 1, Method.EXPANSION, warnings)


# ----------------------------------------------------------------------
# the mu = 2, alpha - nu = 3 treble-pole case
# ----------------------------------------------------------------------

def _g_chi(nu: float, chi: float) -> float:
    # G(chi) of the treble-pole residue; the 3F2 is alternating in -chi
    w = chi / (1.0 + nu) * (1.0 + chi / (2.0 * (2.0 + nu)))
    tail = (
        2.0 * chi**3 / (3.0 * (1.0 + nu) * (2.0 + nu) * (3.0 + nu))
        * hyp3f2(1.0, 1.0, 3.0, 4.0 + nu, 4.0, -chi)
    )
    return w + tail


def _h_m(m: int, a: float) -> float:
    return (
        0.5 * digamma(m + 1.0)
        + 0.5 * digamma(m + 3.0)
        - digamma(2.0 * m)
        - zeta_log_deriv_even(m)
        - math.log(a / (4.0 * math.pi))
    )


def s1_special_mu2(
    p: SeriesParams,
    policy: TruncationPolicy | None = None,
    ledger: TermLedger | None = None,
) -> EvalResult:
    """Closed-form treble-pole expansion of the K*J series at mu=2, alpha-nu=3.

    The s = 1 treble residue brings in gamma^2, the first Stieltjes constant
    and log^2(a/2); the poles at s = -1, -3, ... are double and carry the
    h_m / Delta_m logarithmic data.  Requires b <= a on top of the usual
    sqrt(a^2+b^2) <= 2*pi domain.
    """
    policy = policy or TruncationPolicy()
    if not _is_mu2_special(p):
        raise DomainError(
            f"s1_special_mu2 needs mu=2 and alpha-nu=3 (got mu={p.mu}, alpha-nu={p.alpha - p.nu})"
        )
    if p.b > p.a:
        raise DomainError("s1_special_mu2 needs b <= a (|chi| <= 1 for the G series)")
    warnings = _domain_check_s1(p)
    nu, a, b = p.nu, p.a, p.b
    chi = p.chi
    lg_nu = math.lgamma(1.0 + nu)
    half_b_nu = nu * math.log(0.5 * b)

    head = (
        math.exp(half_b_nu - lg_nu - math.log(2.0) - 2.0 * math.log(0.5 * a))
        * (zeta(5.0) - 0.25 * a * a * zeta(3.0) * (1.0 + chi / (1.0 + nu)))
    )
    L = math.log(0.5 * a)
    w = chi / (1.0 + nu) * (1.0 + chi / (2.0 * (2.0 + nu)))
    braces = (
        7.0 / 8.0
        - EULER_GAMMA**2
        - 2.0 * STIELTJES_1
        - 1.5 * L
        + L * L
        + math.pi**2 / 12.0
        + 2.0 * w * (0.75 - L)
        - 0.5 * _g_chi(nu, chi)
    )
    r1 = 0.25 * math.exp(2.0 * math.log(0.5 * a) + half_b_nu - lg_nu) * braces
    if ledger is not None:
        ledger.add(-2, head, head)
        ledger.add(-1, r1, head + r1)

    log_pref = math.log(2.0) + 2.0 * math.log(0.5 * a) + half_b_nu - lg_nu
    log_a4pi = math.log(a / (4.0 * math.pi))

    def dbl_term(m: int) -> float:
        mm = m + 1  # the double poles start at s = -1, i.e. m >= 1
        lg = (
            log_pref
            + math.log(zeta(2.0 * mm))
            + math.lgamma(2.0 * mm)
            - math.lgamma(mm + 1.0)
            - math.lgamma(mm + 3.0)
            + 2.0 * mm * log_a4pi
        )
        brace = _h_m(mm, a) * f_m(FmSpec(mm, 2.0, nu, -chi)) - 0.5 * delta_n(mm, 2.0, nu, -chi)
        return (-1.0) ** mm * math.exp(lg) * brace

    q2 = (a * a + b * b) / (_TWO_PI * _TWO_PI)
    base = head + r1
    total, count, err, extra = _sum_residues(
        dbl_term, policy, q2, p.alpha, base, smooth=False, ledger=ledger,
    )
    warnings.extend(extra)
    return EvalResult(base + total, err, count + 2, Method.EXPANSION, warnings)


# ----------------------------------------------------------------------
# dispatch and alternating variants
# ----------------------------------------------------------------------

def evaluate_modified(
    kind: int,
    p: SeriesParams,
    policy: TruncationPolicy | None = None,
    ledger: TermLedger | None = None,
) -> EvalResult:
    """Evaluate S^(1) or S^(2), routing the mu=2 special case automatically."""
    if kind not in (1, 2):
        raise DomainError(f"kind must be 1 (K*J) or 2 (K*I), got {kind}")
    if kind == 1:
        if _is_mu2_special(p):
            return s1_special_mu2(p, policy, ledger)
        return s1(p, policy, ledger)
    return s2(p, policy, ledger)


def s_modified_alternating(
    kind: int,
    p: SeriesParams,
    policy: TruncationPolicy | None = None,
) -> EvalResult:
    """Alternating modified series via S^(k)(a,b) - 2^(1-alpha) S^(k)(2a,2b)."""
    policy = policy or TruncationPolicy()
    weight = 2.0 ** (1.0 - p.alpha)
    r1 = evaluate_modified(kind, p, policy)
    try:
        r2 = evaluate_modified(kind, p.scaled(2.0), policy)
    except DomainError as exc:
        raise DomainError(f"doubled arguments leave the expansion domain: {exc}") from exc
    value = r1.value - weight * r2.value
    warnings = list(dict.fromkeys(r1.warnings + r2.warnings))
    note = (
        "alternating: the zeta pole contribution at s=1 is absent "
        "((1-2^(1-s)) zeta(s) is regular there)"
    )
    if not _is_mu2_special(p):
        z = -p.chi if kind == 1 else p.chi
        c1 = _f1_term(p, z)
        c2 = _f1_term(p.scaled(2.0), z)
        resid = abs(c1 - weight * c2) / max(abs(c1), 5e-324)
        note += f"; numerical cancellation check residual {resid:.2e}"
    warnings.append(note)
    return EvalResult(
        value,
        r1.abs_err_est + weight * r2.abs_err_est,
        r1.terms_used + r2.terms_used,
        Method.EXPANSION,
        warnings,
    )
