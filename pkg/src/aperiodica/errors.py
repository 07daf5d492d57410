"""Exception hierarchy shared across the package."""


class AperiodicaError(Exception):
    """Base class for all package errors."""


class NotSquarefreeError(AperiodicaError):
    """Polynomial shares a nontrivial factor with its derivative."""


class PrecisionUnreachableError(AperiodicaError):
    """Root refinement stalled before reaching the requested precision."""


class FieldMismatchError(AperiodicaError):
    """Arithmetic between elements of different number fields."""


class ZeroElementError(AperiodicaError):
    """Inversion of the zero element."""


class NotAUnitError(AperiodicaError):
    """Element is invertible in the field but not in the ring of integers."""


class NotPrimitiveError(AperiodicaError):
    """Substitution matrix has no strictly positive power."""


class MergeIllegalError(AperiodicaError):
    """Letter pair cannot be merged into a single tile."""


class NoLegalSeedError(AperiodicaError):
    """No two-letter seed generates a fixed point of the substitution."""


class NonExpandingError(AperiodicaError):
    """Inflation factor is not larger than one."""


class NotPisotError(AperiodicaError):
    """Inflation factor is not a Pisot number; starred maps would not contract."""


class NotInvertibleError(AperiodicaError):
    """Contraction cannot be inverted exactly in the ring (non-unimodular)."""


class NotIntervalError(AperiodicaError):
    """Attractor components are not a tuple of intervals."""


class SeedNotNestedError(AperiodicaError):
    """Seed point set is not contained in its own substitution image."""


class SelfIntersectingError(AperiodicaError):
    """Polygon boundary intersects itself."""


class SubstitutionFileError(AperiodicaError):
    """Malformed substitution input file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownLetterError(SubstitutionFileError):
    """Rule references a letter missing from the alphabet."""


class MissingRuleError(SubstitutionFileError):
    """Alphabet letter has no rewrite rule."""
