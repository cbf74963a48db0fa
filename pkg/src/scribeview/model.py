"""Canonical transcript data model.

A transcript is an immutable snapshot: an ordered list of speaker-homogeneous
segments, each a list of word tokens carrying the recognizer's confidence in
[0, 1]. All mutation happens in :mod:`scribeview.edits`, which returns a new
snapshot at the next revision; snapshots are safe to share across threads.

The canonical JSON form (``transcript_to_dict`` / ``transcript_from_dict``)
is versioned and round-trips losslessly; the layout is documented in
``docs/transcript-format.md``.
"""

from __future__ import annotations

import json
import string
from dataclasses import dataclass, replace

from .errors import EmptySegmentError, InvalidTimeError, SessionCorruptError

PRONUNCIATION = "pronunciation"
PUNCTUATION = "punctuation"

MAX_SPEAKERS = 10

#: Colorblind-safe display palette; SpeakerId.color_index points into it.
SPEAKER_PALETTE = (
    "#0072b2", "#e69f00", "#009e73", "#cc79a7", "#56b4e9",
    "#d55e00", "#f0e442", "#999999", "#882255", "#44aa99",
)

CANONICAL_FORMAT = "scribeview.transcript.v1"

# Absolute tolerance for confidence/timing comparisons. Confidences arrive as
# short decimal strings ("0.52") and parse exactly; the tolerance only guards
# derived float arithmetic.
EPS = 1e-9

_PUNCT_CHARS = set(string.punctuation)


@dataclass(frozen=True)
class Alternative:
    """One candidate word with the recognizer's confidence in it."""

    content: str
    confidence: float


@dataclass(frozen=True)
class WordToken:
    """A pronunciation or punctuation item within a segment.

    Pronunciation tokens carry timings (seconds); punctuation tokens attach
    to the preceding word and have none. ``human_verified`` marks tokens an
    analyst has confirmed or edited; those always carry confidence 1.0.
    """

    kind: str
    content: str
    confidence: float
    start_time: float | None = None
    end_time: float | None = None
    alternatives: tuple[Alternative, ...] = ()
    human_verified: bool = False

    @property
    def is_pronunciation(self) -> bool:
        return self.kind == PRONUNCIATION


@dataclass(frozen=True)
class Segment:
    """One speaker-homogeneous line of the transcript."""

    index: int
    speaker: str
    start_time: float
    end_time: float
    tokens: tuple[WordToken, ...]

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time

    def pronunciation_tokens(self) -> list[WordToken]:
        return [t for t in self.tokens if t.is_pronunciation]


@dataclass(frozen=True)
class SpeakerId:
    """A diarization label ("spk_0".."spk_9") plus its stable display color slot."""

    label: str
    color_index: int


@dataclass(frozen=True)
class AudioRef:
    """Reference to the source audio. ``uri`` may be empty when no audio is attached."""

    uri: str
    duration: float
    media_type: str = "application/octet-stream"


@dataclass(frozen=True)
class Transcript:
    id: str
    audio: AudioRef
    speakers: tuple[SpeakerId, ...]
    segments: tuple[Segment, ...]
    revision: int = 0

    def token(self, segment_index: int, token_index: int) -> WordToken:
        return self.segments[segment_index].tokens[token_index]


@dataclass(frozen=True)
class Violation:
    """One invariant violation found by :func:`validate`."""

    code: str
    message: str
    segment_index: int | None = None
    token_index: int | None = None


def classify_kind(content: str) -> str:
    """Token kind implied by content: all-punctuation strings are punctuation."""
    if content and all(c in _PUNCT_CHARS for c in content):
        return PUNCTUATION
    return PRONUNCIATION


def is_speaker_label(label: str) -> bool:
    return (
        len(label) == 5 and label.startswith("spk_") and label[4] in string.digits
    )


def validate(transcript: Transcript) -> list[Violation]:
    """Check every model invariant; an empty list means the transcript is valid.

    Pure: never raises on bad data, never mutates. Violations carry
    segment/token coordinates where they apply.
    """
    out: list[Violation] = []

    def bad(code: str, message: str, si: int | None = None, ti: int | None = None):
        out.append(Violation(code, message, si, ti))

    if transcript.revision < 0:
        bad("negative_revision", f"revision {transcript.revision} is negative")

    labels = [s.label for s in transcript.speakers]
    if len(labels) > MAX_SPEAKERS:
        bad("speaker_limit", f"{len(labels)} speakers exceeds the limit of {MAX_SPEAKERS}")
    if len(set(labels)) != len(labels):
        bad("duplicate_speaker", "speaker labels are not unique")
    for s in transcript.speakers:
        if not is_speaker_label(s.label):
            bad("bad_speaker_label", f"speaker label {s.label!r} is not of the form spk_N")

    known = set(labels)
    prev_end = None
    last_end = 0.0
    for si, seg in enumerate(transcript.segments):
        if seg.index != si:
            bad("bad_segment_index", f"segment index {seg.index} at position {si}", si)
        if seg.speaker not in known:
            bad("unknown_speaker", f"segment speaker {seg.speaker!r} not in roster", si)
        if seg.end_time <= seg.start_time:
            bad("non_positive_duration", "non-positive duration", si)
        if seg.start_time < 0:
            bad("negative_time", "segment start_time is negative", si)
        if prev_end is not None and seg.start_time < prev_end - EPS:
            bad("overlapping_segments", "segment starts before the previous one ends", si)
        prev_end = seg.end_time
        last_end = max(last_end, seg.end_time)

        if not seg.tokens:
            bad("empty_segment", "segment has no tokens", si)
            continue
        if not any(t.is_pronunciation for t in seg.tokens):
            bad("no_pronunciation", "segment has no pronunciation token", si)

        prev_time = seg.start_time
        for ti, tok in enumerate(seg.tokens):
            if tok.kind not in (PRONUNCIATION, PUNCTUATION):
                bad("bad_kind", f"unknown token kind {tok.kind!r}", si, ti)
            if not tok.content:
                bad("empty_content", "token content is empty", si, ti)
            if not (-EPS <= tok.confidence <= 1 + EPS):
                bad("confidence_range", "confidence out of [0,1]", si, ti)
            if tok.human_verified and abs(tok.confidence - 1.0) > EPS:
                bad("unverified_confidence", "human-verified token must have confidence 1.0", si, ti)
            if tok.kind == PUNCTUATION:
                if tok.start_time is not None or tok.end_time is not None:
                    bad("punctuation_timed", "punctuation token carries timings", si, ti)
                if not tok.human_verified and abs(tok.confidence) > EPS:
                    bad("punctuation_confidence", "punctuation confidence must be 0", si, ti)
            elif tok.kind == PRONUNCIATION:
                if tok.start_time is None or tok.end_time is None:
                    bad("missing_timing", "pronunciation token lacks timings", si, ti)
                else:
                    if tok.start_time < seg.start_time - EPS or tok.end_time > seg.end_time + EPS:
                        bad("timing_out_of_segment", "token timings outside segment", si, ti)
                    if tok.end_time < tok.start_time:
                        bad("timing_order", "token ends before it starts", si, ti)
                    if tok.start_time < prev_time - EPS:
                        bad("timing_not_monotone", "token timings are not non-decreasing", si, ti)
                    prev_time = max(prev_time, tok.end_time)
            confs = [a.confidence for a in tok.alternatives]
            if any(c2 > c1 + EPS for c1, c2 in zip(confs, confs[1:])):
                bad("alternatives_unsorted", "alternatives not sorted by confidence descending", si, ti)

    if transcript.segments and transcript.audio.duration < last_end - EPS:
        bad("audio_too_short", "audio duration is shorter than the last segment end")

    return out


def segment_text(segment: Segment) -> str:
    """Detokenize a segment: words joined by single spaces, punctuation glued on."""
    if not segment.tokens:
        raise EmptySegmentError("empty segment")
    parts: list[str] = []
    for tok in segment.tokens:
        if tok.kind == PUNCTUATION and parts:
            parts[-1] += tok.content
        else:
            parts.append(tok.content)
    return " ".join(parts)


def token_at(transcript: Transcript, t: float) -> tuple[int, int] | None:
    """Locate the pronunciation token playing at time ``t`` (seconds).

    Returns the first token whose [start_time, end_time) contains ``t``; if
    ``t`` falls in silence, the next token in time order; None once ``t`` is
    past the final token's end.
    """
    if t < 0:
        raise InvalidTimeError("invalid time", detail={"t": t})
    for si, seg in enumerate(transcript.segments):
        for ti, tok in enumerate(seg.tokens):
            if tok.is_pronunciation and tok.end_time is not None and t < tok.end_time:
                return (si, ti)
    return None


# -- canonical serialization -------------------------------------------------


def _token_to_dict(tok: WordToken) -> dict:
    d: dict = {"kind": tok.kind, "content": tok.content, "confidence": tok.confidence}
    if tok.start_time is not None:
        d["start_time"] = tok.start_time
    if tok.end_time is not None:
        d["end_time"] = tok.end_time
    d["alternatives"] = [{"content": a.content, "confidence": a.confidence} for a in tok.alternatives]
    d["human_verified"] = tok.human_verified
    return d


def _token_from_dict(d: dict) -> WordToken:
    return WordToken(
        kind=d["kind"],
        content=d["content"],
        confidence=d["confidence"],
        start_time=d.get("start_time"),
        end_time=d.get("end_time"),
        alternatives=tuple(Alternative(a["content"], a["confidence"]) for a in d["alternatives"]),
        human_verified=d["human_verified"],
    )


def transcript_to_dict(transcript: Transcript) -> dict:
    return {
        "format": CANONICAL_FORMAT,
        "id": transcript.id,
        "revision": transcript.revision,
        "audio": {
            "uri": transcript.audio.uri,
            "duration": transcript.audio.duration,
            "media_type": transcript.audio.media_type,
        },
        "speakers": [
            {"label": s.label, "color_index": s.color_index} for s in transcript.speakers
        ],
        "segments": [
            {
                "index": seg.index,
                "speaker": seg.speaker,
                "start_time": seg.start_time,
                "end_time": seg.end_time,
                "tokens": [_token_to_dict(t) for t in seg.tokens],
            }
            for seg in transcript.segments
        ],
    }


def transcript_from_dict(d: dict) -> Transcript:
    try:
        if d["format"] != CANONICAL_FORMAT:
            raise SessionCorruptError(f"unsupported format {d.get('format')!r}")
        return Transcript(
            id=d["id"],
            audio=AudioRef(
                uri=d["audio"]["uri"],
                duration=d["audio"]["duration"],
                media_type=d["audio"]["media_type"],
            ),
            speakers=tuple(SpeakerId(s["label"], s["color_index"]) for s in d["speakers"]),
            segments=tuple(
                Segment(
                    index=seg["index"],
                    speaker=seg["speaker"],
                    start_time=seg["start_time"],
                    end_time=seg["end_time"],
                    tokens=tuple(_token_from_dict(t) for t in seg["tokens"]),
                )
                for seg in d["segments"]
            ),
            revision=d["revision"],
        )
    except (KeyError, TypeError) as exc:
        raise SessionCorruptError(f"malformed transcript document: {exc!r}") from exc


def dumps(transcript: Transcript) -> str:
    return json.dumps(transcript_to_dict(transcript), ensure_ascii=False, separators=(",", ":"))


def loads(text: str) -> Transcript:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SessionCorruptError(f"not valid JSON: {exc.msg}") from exc
    return transcript_from_dict(d)


def with_revision(transcript: Transcript, revision: int) -> Transcript:
    return replace(transcript, revision=revision)
