"""Domain errors with stable machine-readable codes.

Every error carries a short ``code`` (stable, snake_case), a human
``message`` and an optional ``detail`` payload. The HTTP layer renders
these verbatim as ``{code, message, detail}`` bodies; the CLI prints the
same rendering and exits 1.
"""

from __future__ import annotations

from typing import Any


class ScribeViewError(Exception):
    """Base class for all domain errors."""

    code = "error"
    http_status = 400

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def to_body(self) -> dict:
        return {"code": self.code, "message": self.message, "detail": self.detail}


class ParseError(ScribeViewError):
    """Vendor document is not well-formed. ``detail`` carries the byte offset."""

    code = "parse_error"


class RangeError(ScribeViewError):
    """A numeric value is outside its allowed range. ``detail`` carries the item index."""

    code = "range_error"


class SpeakerLimitError(ScribeViewError):
    code = "speaker_limit_exceeded"


class SegmentationConflictError(ScribeViewError):
    code = "segmentation_conflict"


class EmptyTranscriptError(ScribeViewError):
    code = "empty_transcript"


class EmptySegmentError(ScribeViewError):
    code = "empty_segment"


class InvalidTimeError(ScribeViewError):
    code = "invalid_time"


class DegenerateTranscriptError(ScribeViewError):
    code = "degenerate_transcript"


class ViewportError(ScribeViewError):
    code = "invalid_viewport"


class EmptyQueryError(ScribeViewError):
    code = "empty_query"


class MultiTokenQueryError(ScribeViewError):
    code = "multi_token_query"


class NoMatchesError(ScribeViewError):
    code = "no_matches"
    http_status = 404


class KeywordNotFoundError(ScribeViewError):
    code = "keyword_not_found"
    http_status = 404


class InvalidDepthError(ScribeViewError):
    code = "invalid_depth"


class NotANeighborError(ScribeViewError):
    code = "not_a_neighbor"
    http_status = 404


class InconsistentDictionaryError(ScribeViewError):
    code = "inconsistent_dictionary"


class InvalidGroupError(ScribeViewError):
    code = "invalid_group"


class UnencodableError(ScribeViewError):
    code = "unencodable"


class RevisionConflictError(ScribeViewError):
    code = "revision_conflict"
    http_status = 409


class BadCoordinatesError(ScribeViewError):
    code = "bad_coordinates"


class WouldEmptySegmentError(ScribeViewError):
    code = "would_empty_segment"


class InvalidEditError(ScribeViewError):
    code = "invalid_edit"


class NothingToUndoError(ScribeViewError):
    code = "nothing_to_undo"
    http_status = 409


class SessionCorruptError(ScribeViewError):
    code = "session_corrupt"


class NotFoundError(ScribeViewError):
    code = "not_found"
    http_status = 404


class NotReadyError(ScribeViewError):
    code = "not_ready"
    http_status = 409


class IoError(ScribeViewError):
    code = "io_error"


class BackendUnavailableError(ScribeViewError):
    """Transient transport failure; safe to retry."""

    code = "backend_unavailable"
    http_status = 503
    retryable = True


class ConfigError(ScribeViewError):
    code = "config_error"
