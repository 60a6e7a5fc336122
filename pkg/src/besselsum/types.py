"""Shared data records: series parameters, policies, and evaluation results."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError


class SeriesKind(enum.Enum):
    """The six series families the package evaluates."""

    JJ = "jj"            # sum J_mu(na) J_nu(nb) / n^alpha, with prefactor Lambda
    JJ_ALT = "jj-alt"    # alternating version of JJ
    K1 = "k1"            # sum K_mu(an) J_nu(bn) / n^alpha
    K1_ALT = "k1-alt"
    K2 = "k2"            # sum K_mu(an) I_nu(bn) / n^alpha
    K2_ALT = "k2-alt"

    @property
    def alternating(self) -> bool:
        return self.value.endswith("-alt")

    @property
    def base(self) -> "SeriesKind":
        return SeriesKind(self.value.removesuffix("-alt"))


class Method(enum.Enum):
    EXPANSION = "expansion"
    CLOSED_FORM = "closed-form"
    DIRECT_ORACLE = "direct-oracle"


@dataclass(frozen=True)
class SeriesParams:
    """The tuple (mu, nu, alpha, a, b) common to every series family.

    ``mu`` and ``nu`` are the Bessel orders (both >= 0), ``alpha`` the
    exponent of n, and ``a``, ``b`` the two positive argument scales.
    """

    mu: float
    nu: float
    alpha: float
    a: float
    b: float

    def __post_init__(self):
        if not (self.mu >= 0.0 and self.nu >= 0.0):
            raise DomainError(f"orders must satisfy mu, nu >= 0 (got mu={self.mu}, nu={self.nu})")
        if not (self.a > 0.0 and self.b > 0.0):
            raise DomainError(f"scales must satisfy a, b > 0 (got a={self.a}, b={self.b})")
        for name in ("mu", "nu", "alpha", "a", "b"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite (got {v})")

    @property
    def theta(self) -> float:
        """alpha - mu - nu, the combination that drives formula dispatch."""
        return self.alpha - self.mu - self.nu

    @property
    def chi(self) -> float:
        """(b/a)^2, the squared scale ratio."""
        return (self.b / self.a) ** 2

    def swapped(self) -> "SeriesParams":
        """Exchange the roles (mu, a) <-> (nu, b)."""
        return SeriesParams(self.nu, self.mu, self.alpha, self.b, self.a)

    def scaled(self, factor: float) -> "SeriesParams":
        return SeriesParams(self.mu, self.nu, self.alpha, factor * self.a, factor * self.b)


@dataclass(frozen=True)
class TruncationPolicy:
    """Stopping rule for the infinite residue sums.

    Summation stops once ``consecutive_below`` successive terms fall below
    ``rel_tol`` times the running partial sum, or at ``max_terms``.
    """

    rel_tol: float = 1e-14
    max_terms: int = 500
    consecutive_below: int = 3

    def __post_init__(self):
        if not self.rel_tol > 0.0:
            raise DomainError("rel_tol must be positive")
        if self.max_terms < 10:
            raise DomainError("max_terms must be at least 10")
        if self.consecutive_below < 1:
            raise DomainError("consecutive_below must be at least 1")


@dataclass
class TermEntry:
    """One recorded term of a residue sum; m = -1 marks the s = 1 residue."""

    m: int
    term: float
    cumulative: float


@dataclass
class TermLedger:
    """Optional per-term record for diagnostics and CSV export."""

    entries: list[TermEntry] = field(default_factory=list)

    def add(self, m: int, term: float, cumulative: float) -> None:
        self.entries.append(TermEntry(m, term, cumulative))

    def write_csv(self, stream) -> None:
        stream.write("m,term,cumulative\n")
        for e in self.entries:
            stream.write(f"{e.m},{e.term!r},{e.cumulative!r}\n")


@dataclass
class EvalResult:
    """Outcome of one series evaluation.

    ``abs_err_est`` is an upper *estimate* from the stopping rule, not a
    guarantee.  ``warnings`` is non-empty whenever evaluation happened at or
    near a convergence-domain boundary.
    """

    value: float
    abs_err_est: float
    terms_used: int
    method: Method
    warnings: list[str] = field(default_factory=list)
