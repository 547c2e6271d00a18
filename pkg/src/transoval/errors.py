"""Exception hierarchy shared by every module of the package."""


class GeometryError(Exception):
    """Base class for all errors raised by transoval."""


class DomainError(GeometryError, ValueError):
    """An argument lies outside the domain of the operation."""


class DimensionError(GeometryError, ValueError):
    """A subspace has the wrong projective dimension."""


class InvalidExponent(DomainError):
    """The translation-oval exponent does not yield an arc."""


class NotCompletable(GeometryError):
    """A q-arc does not have exactly two completion points."""


class NotAffinePlane(GeometryError):
    """The C-planes do not form an affine plane of order q."""


class InconsistentClass(GeometryError):
    """Planes of one parallel class do not share a common line at infinity."""


class StructureViolation(GeometryError):
    """A derived structure (plus points, Klein arc, ...) has the wrong shape."""


class NotTranslationType(GeometryError):
    """A permutation of PG(1,q) is not projectively a power map."""


class ReconstructionFailed(GeometryError):
    """The reconstruction pipeline could not finish.

    ``stage`` names the pipeline step that failed and ``detail`` carries
    any witness data gathered on the way.
    """

    def __init__(self, message, stage=None, detail=None):
        super().__init__(message)
        self.stage = stage
        self.detail = detail


class SearchExhausted(GeometryError):
    """An exhaustive search finished without finding a qualifying object."""


class FormatError(GeometryError, ValueError):
    """A JSON document is malformed or does not match the expected schema."""
