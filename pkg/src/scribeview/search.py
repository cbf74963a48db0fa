"""Keyword search over a transcript, with instance navigation.

Single-token queries only. Token-exact matching compares the case-folded,
punctuation-stripped token content against the case-folded term; prefix mode
matches contents that start with the term. Punctuation tokens never match.

The index is an immutable derivative of one transcript revision; edits
produce a new transcript and therefore a new index. Transcripts are small,
so a full rebuild is cheaper than incremental maintenance would be worth.
"""

from __future__ import annotations

import string
from dataclasses import dataclass

from .errors import EmptyQueryError, MultiTokenQueryError, NoMatchesError
from .model import Transcript

TOKEN_EXACT = "token-exact"
PREFIX = "prefix"
MODES = (TOKEN_EXACT, PREFIX)

NEXT = "next"
PREV = "prev"

_PUNCT = string.punctuation


def strip_punctuation(content: str) -> str:
    """Drop leading/trailing ASCII punctuation (attached apostrophes, quotes)."""
    return content.strip(_PUNCT)


@dataclass(frozen=True)
class SearchQuery:
    term: str
    mode: str = TOKEN_EXACT
    case_sensitive: bool = False

    def __post_init__(self):
        if not self.term:
            raise EmptyQueryError("empty query")
        if any(c.isspace() for c in self.term):
            raise MultiTokenQueryError("multi-token query unsupported")
        if self.mode not in MODES:
            raise ValueError(f"unknown search mode {self.mode!r}")


@dataclass(frozen=True)
class SearchHit:
    segment_index: int
    token_index: int
    content: str
    confidence: float


class TranscriptIndex:
    """Case-folded stripped content mapped to hit positions, in document order."""

    def __init__(self, transcript: Transcript):
        self.transcript_id = transcript.id
        self.revision = transcript.revision
        self._buckets: dict[str, list[tuple[SearchHit, str]]] = {}
        for seg in transcript.segments:
            for ti, tok in enumerate(seg.tokens):
                if not tok.is_pronunciation:
                    continue
                stripped = strip_punctuation(tok.content)
                if not stripped:
                    continue
                hit = SearchHit(seg.index, ti, tok.content, tok.confidence)
                self._buckets.setdefault(stripped.casefold(), []).append((hit, stripped))

    def search(self, query: SearchQuery) -> list[SearchHit]:
        folded_term = query.term.casefold()
        if query.mode == TOKEN_EXACT:
            candidates = self._buckets.get(folded_term, [])
        else:
            candidates = [
                entry
                for key, entries in self._buckets.items()
                if key.startswith(folded_term)
                for entry in entries
            ]
        hits = [hit for hit, stripped in candidates if _matches(stripped, query)]
        hits.sort(key=lambda h: (h.segment_index, h.token_index))
        return hits


def _matches(stripped: str, query: SearchQuery) -> bool:
    if query.case_sensitive:
        subject, term = stripped, query.term
    else:
        subject, term = stripped.casefold(), query.term.casefold()
    if query.mode == TOKEN_EXACT:
        return subject == term
    return subject.startswith(term)


def search(transcript: Transcript, query: SearchQuery) -> list[SearchHit]:
    return TranscriptIndex(transcript).search(query)


def navigate(hits: list[SearchHit], current: int | None, direction: str) -> int:
    """Step through hit indices with wraparound at both ends."""
    if not hits:
        raise NoMatchesError("no matches")
    if direction not in (NEXT, PREV):
        raise ValueError(f"unknown direction {direction!r}")
    if current is None:
        return 0 if direction == NEXT else len(hits) - 1
    if not 0 <= current < len(hits):
        raise ValueError(f"current index {current} out of range")
    step = 1 if direction == NEXT else -1
    return (current + step) % len(hits)


def keyword_confidence(hits: list[SearchHit]) -> float:
    if not hits:
        raise NoMatchesError("no matches")
    return sum(h.confidence for h in hits) / len(hits)
