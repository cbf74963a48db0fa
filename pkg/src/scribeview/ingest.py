"""Parsing of vendor ASR output into canonical transcripts.

The input format is the cloud transcription service's result document:
``results.transcripts`` (the flat text), ``results.items`` (word and
punctuation items with string-encoded timings/confidences) and an optional
``results.speaker_labels`` block with diarized speaker spans. Unknown fields
are ignored.

Segmentation either trusts the vendor's speaker spans verbatim or re-derives
lines from pauses and speaker changes; the fixture corpus is constructed so
both strategies agree on it.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import model
from .errors import (
    ConfigError,
    EmptyTranscriptError,
    ParseError,
    RangeError,
    SegmentationConflictError,
    SpeakerLimitError,
)
from .model import Alternative, AudioRef, Segment, SpeakerId, Transcript, WordToken

VENDOR_SEGMENTS = "vendor-segments"
DERIVED = "derived"

DEFAULT_PAUSE_THRESHOLD = 1.0
DEFAULT_SPEAKER = "spk_0"


@dataclass(frozen=True)
class RawItem:
    """One vendor item, numerics already decoded from their string encodings."""

    kind: str
    content: str
    confidence: float
    start_time: float | None
    end_time: float | None
    alternatives: tuple[Alternative, ...]
    speaker_label: str | None


@dataclass(frozen=True)
class RawSpeakerSegment:
    speaker_label: str
    start_time: float
    end_time: float


@dataclass(frozen=True)
class RawAsrResult:
    job_name: str
    transcript_text: str
    items: tuple[RawItem, ...]
    speaker_segments: tuple[RawSpeakerSegment, ...]
    checksum: str  # sha256 of the source bytes; seeds deterministic transcript ids


@dataclass(frozen=True)
class SegmentationPolicy:
    mode: str = VENDOR_SEGMENTS
    pause_threshold: float = DEFAULT_PAUSE_THRESHOLD
    split_on_speaker_change: bool = True

    def __post_init__(self):
        if self.mode not in (VENDOR_SEGMENTS, DERIVED):
            raise ConfigError(f"unknown segmentation mode {self.mode!r}")
        if self.pause_threshold <= 0:
            raise ConfigError("pause_threshold must be positive")


def _decimal(raw: object, where: str) -> float:
    if not isinstance(raw, str):
        raise ParseError(f"{where}: expected a string-encoded decimal, got {type(raw).__name__}")
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"{where}: unparseable decimal {raw!r}") from None


def parse_vendor_json(data: bytes) -> RawAsrResult:
    """Decode a vendor result document.

    Raises ParseError (with a byte offset in ``detail``) for malformed
    documents and RangeError (with the item index) for confidences outside
    [0, 1].
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ParseError("parse error: not UTF-8", detail={"byte_offset": exc.start}) from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8"))
        raise ParseError(f"parse error: {exc.msg}", detail={"byte_offset": offset}) from exc

    if not isinstance(doc, dict) or not isinstance(doc.get("results"), dict):
        raise ParseError("parse error: missing results object")
    results = doc["results"]

    transcripts = results.get("transcripts") or []
    transcript_text = ""
    if transcripts and isinstance(transcripts[0], dict):
        transcript_text = transcripts[0].get("transcript", "")

    raw_items = results.get("items")
    if not isinstance(raw_items, list):
        raise ParseError("parse error: results.items missing or not a list")

    items: list[RawItem] = []
    for idx, it in enumerate(raw_items):
        where = f"item {idx}"
        if not isinstance(it, dict):
            raise ParseError(f"{where}: not an object")
        kind = it.get("type")
        if kind not in (model.PRONUNCIATION, model.PUNCTUATION):
            raise ParseError(f"{where}: unknown item type {kind!r}")
        alts_raw = it.get("alternatives")
        if not isinstance(alts_raw, list) or not alts_raw:
            raise ParseError(f"{where}: alternatives missing or empty")
        alternatives = []
        for a in alts_raw:
            if not isinstance(a, dict) or "content" not in a:
                raise ParseError(f"{where}: malformed alternative")
            conf = _decimal(a.get("confidence"), f"{where} confidence")
            if not 0.0 <= conf <= 1.0:
                raise RangeError(
                    f"{where}: confidence {conf} out of [0,1]", detail={"item_index": idx}
                )
            alternatives.append(Alternative(content=str(a["content"]), confidence=conf))
        chosen = alternatives[0]  # vendor order: first alternative is the emitted word
        ordered = tuple(sorted(alternatives, key=lambda a: -a.confidence))

        if kind == model.PRONUNCIATION:
            start = _decimal(it.get("start_time"), f"{where} start_time")
            end = _decimal(it.get("end_time"), f"{where} end_time")
        else:
            start = end = None

        speaker = it.get("speaker_label")
        if speaker is not None and not isinstance(speaker, str):
            raise ParseError(f"{where}: speaker_label not a string")
        items.append(
            RawItem(
                kind=kind,
                content=chosen.content,
                confidence=chosen.confidence if kind == model.PRONUNCIATION else 0.0,
                start_time=start,
                end_time=end,
                alternatives=ordered,
                speaker_label=speaker,
            )
        )

    speaker_segments: list[RawSpeakerSegment] = []
    labels_block = results.get("speaker_labels")
    if isinstance(labels_block, dict):
        for si, seg in enumerate(labels_block.get("segments") or []):
            if not isinstance(seg, dict) or "speaker_label" not in seg:
                raise ParseError(f"speaker segment {si}: malformed")
            speaker_segments.append(
                RawSpeakerSegment(
                    speaker_label=str(seg["speaker_label"]),
                    start_time=_decimal(seg.get("start_time"), f"speaker segment {si} start_time"),
                    end_time=_decimal(seg.get("end_time"), f"speaker segment {si} end_time"),
                )
            )

    return RawAsrResult(
        job_name=str(doc.get("jobName", "")),
        transcript_text=transcript_text,
        items=tuple(items),
        speaker_segments=tuple(speaker_segments),
        checksum=hashlib.sha256(data).hexdigest(),
    )


def _to_token(item: RawItem) -> WordToken:
    return WordToken(
        kind=item.kind,
        content=item.content,
        confidence=item.confidence,
        start_time=item.start_time,
        end_time=item.end_time,
        alternatives=item.alternatives,
    )


def derive_segments(
    items: tuple[RawItem, ...] | list[RawItem], policy: SegmentationPolicy | None = None
) -> list[Segment]:
    """Split items into segments on speaker changes and long pauses.

    Punctuation attaches to the segment of the preceding token; an item
    without a speaker label inherits the previous token's speaker (the very
    first defaults to spk_0).
    """
    policy = policy or SegmentationPolicy(mode=DERIVED)
    if not any(i.kind == model.PRONUNCIATION for i in items):
        raise EmptyTranscriptError("empty transcript: no pronunciation items")

    groups: list[tuple[str, list[RawItem]]] = []
    current: list[RawItem] = []
    group_speaker: str | None = None  # speaker of the group's first pronunciation
    current_speaker: str | None = None
    prev_end: float | None = None

    for item in items:
        if item.kind == model.PUNCTUATION:
            current.append(item)
            continue
        speaker = item.speaker_label or current_speaker or DEFAULT_SPEAKER
        split = False
        if current_speaker is not None:
            if policy.split_on_speaker_change and speaker != current_speaker:
                split = True
            elif prev_end is not None and item.start_time is not None:
                if item.start_time - prev_end > policy.pause_threshold:
                    split = True
        if split:
            groups.append((group_speaker, current))
            current = []
            group_speaker = None
        current.append(item)
        if group_speaker is None:
            group_speaker = speaker
        current_speaker = speaker
        prev_end = item.end_time
    if current:
        groups.append((group_speaker or DEFAULT_SPEAKER, current))

    segments = []
    for index, (speaker, group) in enumerate(groups):
        pron = [i for i in group if i.kind == model.PRONUNCIATION]
        segments.append(
            Segment(
                index=index,
                speaker=speaker,
                start_time=pron[0].start_time,
                end_time=pron[-1].end_time,
                tokens=tuple(_to_token(i) for i in group),
            )
        )
    return segments


def _vendor_segments(raw: RawAsrResult) -> list[Segment]:
    spans = raw.speaker_segments
    if not spans:
        raise SegmentationConflictError("vendor-segments mode but input has no speaker spans")
    for a, b in zip(spans, spans[1:]):
        if b.start_time < a.end_time - model.EPS:
            raise SegmentationConflictError(
                "segmentation conflict: overlapping speaker spans",
                detail={"spans": [[a.start_time, a.end_time], [b.start_time, b.end_time]]},
            )

    buckets: list[list[RawItem]] = [[] for _ in spans]
    cursor = 0
    for idx, item in enumerate(raw.items):
        if item.kind == model.PUNCTUATION:
            buckets[cursor].append(item)
            continue
        while cursor < len(spans) and item.start_time > spans[cursor].end_time + model.EPS:
            cursor += 1
        if cursor >= len(spans) or item.start_time < spans[cursor].start_time - model.EPS:
            raise SegmentationConflictError(
                "segmentation conflict: item outside every speaker span",
                detail={"item_index": idx},
            )
        if item.end_time is not None and item.end_time > spans[cursor].end_time + model.EPS:
            raise SegmentationConflictError(
                "segmentation conflict: item extends past its speaker span",
                detail={"item_index": idx},
            )
        buckets[cursor].append(item)

    segments = []
    for index, (span, bucket) in enumerate(zip(spans, buckets)):
        if not any(i.kind == model.PRONUNCIATION for i in bucket):
            raise SegmentationConflictError(
                "segmentation conflict: speaker span contains no items",
                detail={"span_index": index},
            )
        segments.append(
            Segment(
                index=index,
                speaker=span.speaker_label,
                start_time=span.start_time,
                end_time=span.end_time,
                tokens=tuple(_to_token(i) for i in bucket),
            )
        )
    return segments


def build_transcript(
    raw: RawAsrResult,
    policy: SegmentationPolicy | None = None,
    *,
    transcript_id: str | None = None,
    audio: AudioRef | None = None,
) -> Transcript:
    """Assemble a canonical Transcript from a parsed vendor result.

    With no explicit policy, vendor speaker spans are used when present and
    segmentation is derived otherwise. The result always passes
    :func:`model.validate` cleanly.
    """
    if policy is None:
        mode = VENDOR_SEGMENTS if raw.speaker_segments else DERIVED
    else:
        mode = policy.mode

    if mode == VENDOR_SEGMENTS:
        segments = _vendor_segments(raw)
    else:
        segments = derive_segments(raw.items, policy or SegmentationPolicy(mode=DERIVED))

    roster: list[str] = []
    for seg in segments:
        if seg.speaker not in roster:
            roster.append(seg.speaker)
    if len(roster) > model.MAX_SPEAKERS:
        raise SpeakerLimitError(
            f"speaker limit exceeded: {len(roster)} speakers, maximum {model.MAX_SPEAKERS}"
        )
    for label in roster:
        if not model.is_speaker_label(label):
            raise ParseError(f"invalid speaker label {label!r}")

    last_end = segments[-1].end_time
    if audio is None:
        audio = AudioRef(uri="", duration=last_end)
    elif audio.duration < last_end:
        # tolerate imprecise container metadata; the transcript is the floor
        audio = AudioRef(uri=audio.uri, duration=last_end, media_type=audio.media_type)

    transcript = Transcript(
        id=transcript_id or f"t-{raw.checksum[:12]}",
        audio=audio,
        speakers=tuple(SpeakerId(label, i) for i, label in enumerate(roster)),
        segments=tuple(segments),
        revision=0,
    )
    violations = model.validate(transcript)
    if violations:
        raise ParseError(
            "ingest produced an invalid transcript",
            detail=[v.__dict__ for v in violations],
        )
    return transcript


def ingest_bytes(
    data: bytes,
    policy: SegmentationPolicy | None = None,
    *,
    transcript_id: str | None = None,
    audio: AudioRef | None = None,
) -> Transcript:
    """parse_vendor_json + build_transcript in one step."""
    return build_transcript(
        parse_vendor_json(data), policy, transcript_id=transcript_id, audio=audio
    )
