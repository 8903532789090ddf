"""Exception hierarchy shared across the package.

Every error raised by uiminer derives from UiminerError so callers can
catch one type at the CLI boundary. Analysis-stage failures that are
expected outcomes (timeouts, unresolved points of interest) are not
exceptions; they are recorded as data on the result objects.
"""

from __future__ import annotations


class UiminerError(Exception):
    """Base class for all package errors."""


# ---------------------------------------------------------------- container


class NotAZipError(UiminerError):
    """The file does not start with a PKZIP signature."""


class TruncatedArchiveError(UiminerError):
    """Central directory or entry data lies outside the file."""


class MissingManifestError(UiminerError):
    """The archive has no AndroidManifest.xml entry."""


class UnsupportedCompressionError(UiminerError):
    """An entry uses a compression method other than stored/deflate."""


# ------------------------------------------------------------------- binres


class BadChunkError(UiminerError):
    """A chunk header is malformed or its sizes are inconsistent."""


class IndexOutOfPoolError(UiminerError):
    """A string reference points outside its string pool."""


class StringEncodingError(UiminerError):
    """String bytes cannot be decoded with the pool's encoding."""


class UnbalancedElementsError(UiminerError):
    """Start/end element chunks of a binary XML document do not nest."""


class UnknownAttributeTypeError(UiminerError):
    """An attribute value record is structurally undecodable.

    Unknown value *type codes* decode to a raw value with a warning;
    this error is reserved for records whose size field is wrong.
    """


class ResourceNotFoundError(UiminerError):
    """No entry exists for a resource id."""


class CyclicReferenceError(UiminerError):
    """Reference chain in the resource table revisits an id."""


class TruncatedEntryError(UiminerError):
    """A resource entry record extends past its chunk."""


# ------------------------------------------------------------------- layout


class MalformedManifestError(UiminerError):
    """AndroidManifest.xml lacks required elements or attributes."""


class IncludeCycleError(UiminerError):
    """Layout include expansion revisited a template."""


class UnknownLayoutReferenceError(UiminerError):
    """An include points at a layout that is not in the registry."""


# ----------------------------------------------------------------------- ir


class IrSyntaxError(UiminerError):
    """Program text violates the grammar."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.line = line
        self.column = column
        if line:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownTypeError(UiminerError):
    """A referenced type is neither defined nor a framework stub."""


class DuplicateMethodError(UiminerError):
    """A class defines two methods with the same name and arity."""


# ------------------------------------------------------------------ queries


class InvalidQueryError(UiminerError):
    """A points-to or dataset query is not well formed."""


class EmptyPatternSetError(InvalidQueryError):
    """A label query was issued with no patterns."""


class SchemaMismatchError(UiminerError):
    """Stored schema version differs from the library's version."""
