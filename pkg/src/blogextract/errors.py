"""Exception types shared across the package."""


class BlogExtractError(Exception):
    """Base class for all errors raised by this package."""


class EmptyDocument(BlogExtractError):
    """The input document contains no element content at all."""


class InvalidPath(BlogExtractError):
    """A node path does not resolve against the tree it was applied to.

    ``depth`` is the zero-based index of the first path component that
    failed to resolve.
    """

    def __init__(self, message: str, depth: int):
        super().__init__(message)
        self.depth = depth


class SchemaError(BlogExtractError):
    """A structured input (sidecar, manifest, model file) is malformed."""


class PathMismatch(SchemaError):
    """A sidecar node path does not exist in the parsed tree."""

    def __init__(self, message: str, depth: int):
        super().__init__(message)
        self.depth = depth


class MissingGeometry(BlogExtractError):
    """A node required by feature computation has no geometry entry."""


class SingleClassInput(BlogExtractError):
    """Training data contains only one class label."""


class DegenerateData(BlogExtractError):
    """Training data cannot be separated even in principle.

    Raised when rows of both classes are identical after standardization.
    """


class TooFewRows(BlogExtractError):
    """Fewer than two rows were given where statistics are required."""


class DimensionMismatch(BlogExtractError):
    """A vector's width does not match what the model expects."""


class CorruptModel(SchemaError):
    """A model file cannot be decoded into a usable model."""


class UnknownVersion(CorruptModel):
    """A model file declares a format version this code does not support."""


class UnknownSchema(CorruptModel):
    """A model file declares a feature schema this code does not know."""


class SchemaMismatch(BlogExtractError):
    """A model trained for one feature schema was passed where another is required."""


class MissingFile(BlogExtractError):
    """A file referenced by a manifest does not exist."""


class UnresolvedLabel(BlogExtractError):
    """A label in a corpus manifest does not resolve to a valid candidate."""


class InsufficientPages(BlogExtractError):
    """An experiment was asked to use more pages than the corpus provides."""
