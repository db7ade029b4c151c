"""Exception types shared across the package.

Every failure that a caller can reasonably branch on gets its own class;
plain ValueError/TypeError are reserved for programming mistakes.
"""


class CarlitzError(Exception):
    """Base class for all package errors."""


class DivisionByZero(CarlitzError, ZeroDivisionError):
    """Inversion or division by a zero element."""


# series arithmetic uses the same condition under its own name
ZeroDivision = DivisionByZero


class PrecisionExhausted(CarlitzError):
    """A series operation would return a value with no known terms."""


class NoRoot(CarlitzError):
    """Leading coefficient is not an r-th power in the residue field."""


class RamifiedRoot(CarlitzError):
    """r-th root requested of a series whose valuation r does not divide."""


class Inconsistent(CarlitzError):
    """Linear solve without a solution."""


class ParseError(CarlitzError):
    """Malformed text input (polynomials, field elements, curve files)."""


class InvariantViolation(CarlitzError):
    """A structural invariant of a loaded package failed.

    The first argument names the invariant.
    """

    def __init__(self, name, detail=""):
        self.name = name
        self.detail = detail
        msg = name if not detail else f"{name}: {detail}"
        super().__init__(msg)


class WindowTooSmall(CarlitzError):
    """Cohomology window auto-grow exceeded the hard cap."""


class WildOrSingular(CarlitzError):
    """Expansion at infinity failed (wild ramification or a singular model)."""


class NonzeroClass(CarlitzError):
    """Chart decomposition requested for an element with nonzero H1 class.

    Carries the coordinates of the obstruction in the echelon H1 basis.
    """

    def __init__(self, coords):
        self.coords = coords
        super().__init__(f"class is nonzero in H1: {coords}")


class OutOfDomain(CarlitzError):
    """Argument outside the convergence domain of the logarithm."""


class NoSolutionFound(CarlitzError):
    """Exponential preimage search stalled.

    Carries the peeling depth reached. Means "not found at this
    precision/depth", never a proof of non-existence.
    """

    def __init__(self, depth, detail=""):
        self.depth = depth
        msg = f"no preimage found after {depth} peeling steps"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class ExactnessFailure(CarlitzError):
    """A windowed exactness check failed; carries a witness vector."""

    def __init__(self, stage, witness=None):
        self.stage = stage
        self.witness = witness
        super().__init__(f"exactness check failed at stage: {stage}")


class IdentityFailure(CarlitzError):
    """A truncated-series identity check failed; carries the first mismatch."""

    def __init__(self, which, term=None):
        self.which = which
        self.term = term
        super().__init__(f"identity failed: {which}, first mismatch {term}")


class InvalidPackage(CarlitzError):
    """Computed invariants contradict what a valid curve package forces."""


class RealizationFailed(CarlitzError):
    """Analytic realization of a unit missed the residual target."""

    def __init__(self, place, residual):
        self.place = place
        self.residual = residual
        super().__init__(
            f"realization residual {residual} too small at place {place}"
        )


class MismatchAcrossTwists(CarlitzError):
    """Module invariants differ between twists; signals a pipeline bug."""
