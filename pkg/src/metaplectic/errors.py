"""Exception taxonomy shared across the package.

Every computational failure mode is loud: operations either return an exact
value or raise one of these.
"""


class MetaplecticError(Exception):
    """Base class for all package errors."""


class DivisionByZero(MetaplecticError):
    """Inversion or division of an exact zero."""


class PrecisionExhausted(MetaplecticError):
    """Fewer than one significant base-p digit survives an operation."""


class NotInDomain(MetaplecticError):
    """Input violates a stated precondition (wrong congruence class etc.)."""


class NotAUnit(MetaplecticError):
    """A unit was required but the valuation is nonzero."""


class DepthExceeded(MetaplecticError):
    """Additive character evaluated below the configured depth."""


class OracleUnstable(MetaplecticError):
    """A stabilizing brute-force oracle failed to settle."""


class NotInvertible(MetaplecticError):
    """Ring element has no inverse in the carried representation."""


class PoleAtEvaluationPoint(MetaplecticError):
    """Numeric evaluation hit a vanishing denominator."""


class NotInMaximalCompact(MetaplecticError):
    """Matrix is not integral with determinant one."""


class LatticeOverflow(MetaplecticError):
    """Lattice parameters exceeded the configured capacity."""


class MeshUnstable(MetaplecticError):
    """Coset-mesh refinement failed to stabilize within bounds."""


class SatakeDegenerate(MetaplecticError):
    """Satake parameter equals 1; torus values are undefined."""


class TailNotCertified(MetaplecticError):
    """A shell sum ran out of range without a certified geometric tail."""


class SupportNotCovered(MetaplecticError):
    """Requested shell ranges do not cover the integrand support."""


class OracleMismatch(MetaplecticError):
    """Two independent computations of the same quantity disagree."""


class BoundsViolated(MetaplecticError):
    """Level parameters violate the constructive admissibility bounds."""
