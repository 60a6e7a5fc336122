"""Exception hierarchy shared by all besselsum modules."""

from __future__ import annotations


class BesselSumError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BesselSumError):
    """Arguments outside the validity domain of a function or expansion."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole (gamma, zeta, or a residue)."""


class PoleCollisionError(DomainError):
    """Pole lattice of a modified-Bessel series is not all-simple.

    Carries the offending lattice report so callers can inspect which
    coincidences occurred (and whether the implemented special case applies).
    """

    def __init__(self, message, lattice=None):
        super().__init__(message)
        self.lattice = lattice


class UsageError(BesselSumError):
    """Malformed command line or configuration."""
