"""Exception and warning types shared across the package."""


class Ca3dError(Exception):
    """Base class for every error raised by ca3d."""


# ingest
class MalformedSgml(Ca3dError):
    pass


class EncodingError(Ca3dError):
    pass


class MissingLabel(Ca3dError):
    pass


class EmptyCorpus(Ca3dError):
    pass


class OutOfRange(Ca3dError):
    pass


# reduce
class EmptyMatrix(Ca3dError):
    pass


class UnlabeledDocument(Ca3dError):
    pass


# proximity
class DimensionMismatch(Ca3dError):
    pass


class InvalidOrder(Ca3dError):
    pass


class ZeroVector(Ca3dError):
    pass


class BackendUnavailable(Ca3dError):
    pass


# ca_engine
class GridFull(Ca3dError):
    pass


class IllegalTransition(Ca3dError):
    pass


# evaluate
class EmptyOverlap(Ca3dError):
    pass


class EmptyCluster(Ca3dError):
    pass


class EmptyClass(Ca3dError):
    pass


# pipeline / service
class InvalidSpec(Ca3dError):
    pass


class TextTooShortWarning(UserWarning):
    """Text shorter than the n-gram window; the document vectorizes to nothing."""


class DegenerateMatrixWarning(UserWarning):
    """All off-diagonal similarities coincide; threshold levels collapse."""
