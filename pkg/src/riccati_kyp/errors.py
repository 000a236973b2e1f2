"""Exception hierarchy shared by all modules.

Every failure mode raised by the library derives from :class:`RiccatiKypError`
so callers (including the CLI) can map error categories to exit codes.
"""

from __future__ import annotations

__all__ = [
    "RiccatiKypError",
    "DimensionMismatch",
    "NotHermitian",
    "NotPSD",
    "NotPD",
    "NotNonneg",
    "RangeViolation",
    "SingularResolvent",
    "PoleOnCircle",
    "DeltaNotPSD",
    "C3Violation",
    "InconsistentRoutes",
    "NotInRI",
    "NotScalar",
    "NotMinimal",
    "NoConvergence",
    "IterationDiverged",
    "CertificateFailed",
    "ParseError",
]


class RiccatiKypError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(RiccatiKypError):
    """Operands have inconsistent shapes."""


class NotHermitian(RiccatiKypError):
    """A matrix required to be Hermitian deviates beyond tolerance."""


class NotPSD(RiccatiKypError):
    """A matrix required to be positive semidefinite has an eigenvalue below
    the admissible floor."""


class NotPD(RiccatiKypError):
    """A matrix required to be positive definite is singular or indefinite."""


class NotNonneg(RiccatiKypError):
    """An assembled block operator required to be nonnegative is not."""


class RangeViolation(RiccatiKypError):
    """The off-diagonal block of a nonnegative block operator does not factor
    through the diagonal square roots to working precision."""


class SingularResolvent(RiccatiKypError):
    """The resolvent is numerically singular at the requested point."""

    def __init__(self, lam: complex, message: str | None = None):
        self.lam = complex(lam)
        super().__init__(message or f"resolvent singular at lambda={self.lam}")


class PoleOnCircle(RiccatiKypError):
    """A transfer-function pole lies on (or too close to) the unit circle."""

    def __init__(self, angle: float, message: str | None = None):
        self.angle = float(angle)
        super().__init__(message or f"pole near the unit circle at angle={self.angle}")


class DeltaNotPSD(RiccatiKypError):
    """The input-side residual operator fails positive semidefiniteness."""


class C3Violation(RiccatiKypError):
    """The cross term does not map into the range of the input-side residual
    operator."""


class InconsistentRoutes(RiccatiKypError):
    """Two independent computational routes disagree beyond the boundary band;
    signals a tolerance or rank-decision bug, not a mathematical fact."""


class NotInRI(RiccatiKypError):
    """The candidate storage operator does not satisfy the inequality
    conditions required by the operation."""


class NotScalar(RiccatiKypError):
    """Operation requires a system with one-dimensional state, input and
    output spaces."""


class NotMinimal(RiccatiKypError):
    """Operation requires a minimal (controllable and observable) system."""


class NoConvergence(RiccatiKypError):
    """No solver start converged; carries the best residual reached."""

    def __init__(self, best_residual: float, message: str | None = None):
        self.best_residual = float(best_residual)
        super().__init__(
            message or f"no start converged (best residual {self.best_residual:.3e})"
        )


class IterationDiverged(RiccatiKypError):
    """The fixed-point iteration left the admissible region or exceeded its
    iteration budget."""


class CertificateFailed(RiccatiKypError):
    """A sampled certificate contradicts the computed extremal solution."""


class ParseError(RiccatiKypError):
    """A system document is malformed."""
