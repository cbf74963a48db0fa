"""Auditable single-token corrections with undo.

Every operation here touches exactly one token; there is deliberately no
bulk replacement anywhere in the system. Edits are optimistic: a request
carries the revision it was built against and fails loudly on a mismatch
rather than silently clobbering concurrent work.

An edited token is treated as ground truth: the analyst listened to the
audio, so it gets confidence 1.0 and a human_verified flag the UI can style
differently from natively confident words.
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path

from . import model
from .errors import (
    BadCoordinatesError,
    InvalidEditError,
    IoError,
    NothingToUndoError,
    RevisionConflictError,
    SessionCorruptError,
    WouldEmptySegmentError,
)
from .model import Alternative, Segment, Transcript, WordToken, classify_kind

INSERT = "insert"
DELETE = "delete"
REPLACE = "replace"
KINDS = (INSERT, DELETE, REPLACE)

MANUAL = "manual"
ALTERNATIVE = "alternative"
SOURCES = (MANUAL, ALTERNATIVE)

SESSION_FORMAT = "scribeview.session.v1"


@dataclass(frozen=True)
class EditRequest:
    """What a client submits: the op minus its prior-token snapshot."""

    kind: str
    segment_index: int
    token_index: int
    content: str | None = None  # required for insert/replace
    source: str = MANUAL
    expected_revision: int = 0


@dataclass(frozen=True)
class EditOp:
    """One applied edit, as recorded in the audit log."""

    kind: str
    segment_index: int
    token_index: int
    content: str | None
    prior_token: WordToken | None  # present iff kind is delete or replace
    source: str
    timestamp: float
    resulting_revision: int


@dataclass(frozen=True)
class EditLog:
    base_revision: int
    ops: tuple[EditOp, ...] = ()


def _check_request(transcript: Transcript, req: EditRequest) -> Segment:
    if req.kind not in KINDS:
        raise InvalidEditError(f"invalid edit: unknown kind {req.kind!r}")
    if req.source not in SOURCES:
        raise InvalidEditError(f"invalid edit: unknown source {req.source!r}")
    if req.expected_revision != transcript.revision:
        raise RevisionConflictError(
            "revision conflict",
            detail={"expected": req.expected_revision, "actual": transcript.revision},
        )
    if not 0 <= req.segment_index < len(transcript.segments):
        raise BadCoordinatesError(
            f"bad coordinates: segment {req.segment_index} out of range"
        )
    segment = transcript.segments[req.segment_index]
    limit = len(segment.tokens) + 1 if req.kind == INSERT else len(segment.tokens)
    if not 0 <= req.token_index < limit:
        raise BadCoordinatesError(
            f"bad coordinates: token {req.token_index} out of range"
        )
    if req.kind in (INSERT, REPLACE):
        if not req.content:
            raise InvalidEditError("invalid edit: content required")
        if any(c.isspace() for c in req.content):
            raise InvalidEditError("invalid edit: content must be a single token")
    return segment


def _sole_pronunciation(segment: Segment, token_index: int) -> bool:
    tok = segment.tokens[token_index]
    return tok.is_pronunciation and len(segment.pronunciation_tokens()) == 1


def _interpolated_timing(segment: Segment, insert_at: int) -> tuple[float, float]:
    """Zero-width midpoint of the gap between the neighboring words.

    A synthesized timestamp is a guess; giving it zero extent keeps every
    real token's span intact and the timeline monotone.
    """
    prev_end = segment.start_time
    for tok in reversed(segment.tokens[:insert_at]):
        if tok.is_pronunciation:
            prev_end = tok.end_time
            break
    next_start = segment.end_time
    for tok in segment.tokens[insert_at:]:
        if tok.is_pronunciation:
            next_start = tok.start_time
            break
    mid = (prev_end + next_start) / 2.0
    return mid, mid


def _edited_alternatives(content: str, prior: WordToken | None) -> tuple[Alternative, ...]:
    # keep the vendor's list for audit; the accepted content leads at 1.0
    kept = tuple(a for a in prior.alternatives if a.content != content) if prior else ()
    return (Alternative(content=content, confidence=1.0),) + kept


def _with_tokens(transcript: Transcript, segment_index: int, tokens: tuple[WordToken, ...]) -> Transcript:
    segment = replace(transcript.segments[segment_index], tokens=tokens)
    segments = (
        transcript.segments[:segment_index] + (segment,) + transcript.segments[segment_index + 1 :]
    )
    return replace(transcript, segments=segments, revision=transcript.revision + 1)


def apply_edit(
    transcript: Transcript, log: EditLog, request: EditRequest
) -> tuple[Transcript, EditLog]:
    """Apply one single-token edit, returning the new snapshot and log.

    The input transcript is never mutated. Raises RevisionConflictError when
    the request was built against a different revision.
    """
    segment = _check_request(transcript, request)
    tokens = segment.tokens
    ti = request.token_index
    prior: WordToken | None = None

    if request.kind == DELETE:
        if _sole_pronunciation(segment, ti):
            raise WouldEmptySegmentError(
                f"would empty segment: segment {request.segment_index} needs one word"
            )
        prior = tokens[ti]
        new_tokens = tokens[:ti] + tokens[ti + 1 :]
    elif request.kind == REPLACE:
        prior = tokens[ti]
        kind = classify_kind(request.content)
        if prior.is_pronunciation and kind == model.PUNCTUATION:
            if _sole_pronunciation(segment, ti):
                raise WouldEmptySegmentError(
                    f"would empty segment: segment {request.segment_index} needs one word"
                )
        if kind == model.PRONUNCIATION:
            if prior.is_pronunciation:
                start, end = prior.start_time, prior.end_time
            else:
                start, end = _interpolated_timing(segment, ti)
        else:
            start = end = None
        new_tokens = (
            tokens[:ti]
            + (
                WordToken(
                    kind=kind,
                    content=request.content,
                    confidence=1.0,
                    start_time=start,
                    end_time=end,
                    alternatives=_edited_alternatives(request.content, prior),
                    human_verified=True,
                ),
            )
            + tokens[ti + 1 :]
        )
    else:
        kind = classify_kind(request.content)
        if kind == model.PRONUNCIATION:
            start, end = _interpolated_timing(segment, ti)
        else:
            start = end = None
        new_tokens = (
            tokens[:ti]
            + (
                WordToken(
                    kind=kind,
                    content=request.content,
                    confidence=1.0,
                    start_time=start,
                    end_time=end,
                    alternatives=(),
                    human_verified=True,
                ),
            )
            + tokens[ti:]
        )

    edited = _with_tokens(transcript, request.segment_index, new_tokens)
    violations = model.validate(edited)
    if violations:
        raise InvalidEditError(
            "invalid edit: result fails validation",
            detail=[v.__dict__ for v in violations],
        )
    op = EditOp(
        kind=request.kind,
        segment_index=request.segment_index,
        token_index=ti,
        content=request.content,
        prior_token=prior,
        source=request.source,
        timestamp=time.time(),
        resulting_revision=edited.revision,
    )
    return edited, EditLog(base_revision=log.base_revision, ops=log.ops + (op,))


def undo(transcript: Transcript, log: EditLog) -> tuple[Transcript, EditLog]:
    """Invert the log's last op. The undo itself is a new revision."""
    if not log.ops:
        raise NothingToUndoError("nothing to undo")
    op = log.ops[-1]
    tokens = transcript.segments[op.segment_index].tokens
    ti = op.token_index
    if op.kind == INSERT:
        new_tokens = tokens[:ti] + tokens[ti + 1 :]
    elif op.kind == DELETE:
        new_tokens = tokens[:ti] + (op.prior_token,) + tokens[ti:]
    else:
        new_tokens = tokens[:ti] + (op.prior_token,) + tokens[ti + 1 :]
    restored = _with_tokens(transcript, op.segment_index, new_tokens)
    return restored, EditLog(base_revision=log.base_revision, ops=log.ops[:-1])


def list_alternatives(
    transcript: Transcript, segment_index: int, token_index: int
) -> list[Alternative]:
    """The token's candidate words, current content first, then by confidence."""
    if not 0 <= segment_index < len(transcript.segments):
        raise BadCoordinatesError(f"bad coordinates: segment {segment_index} out of range")
    segment = transcript.segments[segment_index]
    if not 0 <= token_index < len(segment.tokens):
        raise BadCoordinatesError(f"bad coordinates: token {token_index} out of range")
    tok = segment.tokens[token_index]
    if not tok.alternatives:
        return [Alternative(content=tok.content, confidence=tok.confidence)]
    ordered = sorted(tok.alternatives, key=lambda a: -a.confidence)
    current = next((a for a in ordered if a.content == tok.content), None)
    if current is None:
        return [Alternative(content=tok.content, confidence=tok.confidence), *ordered]
    return [current, *[a for a in ordered if a is not current]]


def _op_to_dict(op: EditOp) -> dict:
    return {
        "kind": op.kind,
        "segment_index": op.segment_index,
        "token_index": op.token_index,
        "content": op.content,
        "prior_token": model._token_to_dict(op.prior_token) if op.prior_token else None,
        "source": op.source,
        "timestamp": op.timestamp,
        "resulting_revision": op.resulting_revision,
    }


def _op_from_dict(d: dict) -> EditOp:
    op = EditOp(
        kind=d["kind"],
        segment_index=d["segment_index"],
        token_index=d["token_index"],
        content=d["content"],
        prior_token=model._token_from_dict(d["prior_token"]) if d["prior_token"] else None,
        source=d["source"],
        timestamp=d["timestamp"],
        resulting_revision=d["resulting_revision"],
    )
    if op.kind not in KINDS or (op.prior_token is None) != (op.kind == INSERT):
        raise SessionCorruptError("session corrupt: malformed edit op")
    return op


def save_session(transcript: Transcript, log: EditLog, path: str | Path) -> None:
    """Persist transcript + log atomically (write-then-rename)."""
    path = Path(path)
    doc = {
        "format": SESSION_FORMAT,
        "transcript": model.transcript_to_dict(transcript),
        "log": {"base_revision": log.base_revision, "ops": [_op_to_dict(o) for o in log.ops]},
    }
    tmp = path.with_name(path.name + ".tmp")
    try:
        tmp.write_text(json.dumps(doc, separators=(",", ":")), encoding="utf-8")
        os.replace(tmp, path)
    except OSError as exc:
        raise IoError(f"cannot write session {path}: {exc}") from exc


def load_session(path: str | Path) -> tuple[Transcript, EditLog]:
    """Load a saved session; state is stored materialized, nothing replays."""
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise IoError(f"cannot read session {path}: {exc}") from exc
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise SessionCorruptError(f"session corrupt: {exc}") from exc
    try:
        if doc["format"] != SESSION_FORMAT:
            raise SessionCorruptError(f"session corrupt: unsupported format {doc.get('format')!r}")
        transcript = model.transcript_from_dict(doc["transcript"])
        log = EditLog(
            base_revision=doc["log"]["base_revision"],
            ops=tuple(_op_from_dict(o) for o in doc["log"]["ops"]),
        )
    except SessionCorruptError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise SessionCorruptError(f"session corrupt: {exc}") from exc
    violations = model.validate(transcript)
    if violations:
        raise SessionCorruptError(
            "session corrupt: transcript fails validation",
            detail=[v.__dict__ for v in violations],
        )
    return transcript, log
