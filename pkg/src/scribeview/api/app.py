"""HTTP facade over the core package.

Every analytic lives behind GET endpoints that are pure functions of the
stored revision, so identical requests return identical bytes. The only
routes that write are single-token edits, their undo, and the two ingestion
paths (vendor JSON, audio job). There is intentionally no endpoint that can
touch more than one token per call.
"""

from __future__ import annotations

import re
from pathlib import Path

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from starlette.exceptions import HTTPException as StarletteHTTPException
from fastapi.responses import JSONResponse, Response
from fastapi.staticfiles import StaticFiles
from typing import Literal

from .. import analytics, model
from ..config import ServiceConfig
from ..edits import EditLog, EditRequest, apply_edit, list_alternatives, undo
from ..errors import (
    NotFoundError,
    RevisionConflictError,
    ScribeViewError,
)
from ..homophones import (
    bundled_dictionary,
    homophones_of,
    load_dictionary,
    phonetic_key,
    phonetic_matches,
)
from ..ingest import build_transcript, parse_vendor_json
from ..model import AudioRef, Transcript
from ..search import SearchQuery, TranscriptIndex, keyword_confidence
from ..store import TranscriptStore, media_type_for, wav_duration
from ..transcribe import COMPLETED, JobConfig, make_client
from ..wordtree import build_tree, collect_contexts
from . import schemas

_RANGE_RE = re.compile(r"^bytes=(\d*)-(\d*)$")


def _parse_range(header: str, size: int):
    """Decode a single byte range. Returns (start, end) inclusive, None for
    an unsatisfiable range, or the string "ignore" for malformed headers
    (which are served as a full response, per HTTP semantics)."""
    m = _RANGE_RE.match(header.strip())
    if not m:
        return "ignore"
    first, last = m.group(1), m.group(2)
    if first == "" and last == "":
        return "ignore"
    if first == "":
        suffix = int(last)
        if suffix == 0:
            return None
        return max(0, size - suffix), size - 1
    start = int(first)
    if start >= size:
        return None
    if last == "":
        return start, size - 1
    end = int(last)
    if end < start:
        return "ignore"
    return start, min(end, size - 1)


def _summary(transcript: Transcript) -> schemas.TranscriptSummaryOut:
    return schemas.TranscriptSummaryOut(
        id=transcript.id,
        revision=transcript.revision,
        segments=len(transcript.segments),
        duration=transcript.audio.duration,
        speakers=len(transcript.speakers),
    )


def _token_out(tok: model.WordToken) -> schemas.TokenOut:
    return schemas.TokenOut(
        kind=tok.kind,
        content=tok.content,
        confidence=tok.confidence,
        start_time=tok.start_time,
        end_time=tok.end_time,
        alternatives=[
            schemas.AlternativeOut(content=a.content, confidence=a.confidence)
            for a in tok.alternatives
        ],
        human_verified=tok.human_verified,
    )


def _op_out(op) -> schemas.EditOpOut:
    return schemas.EditOpOut(
        kind=op.kind,
        segment_index=op.segment_index,
        token_index=op.token_index,
        content=op.content,
        prior_token=_token_out(op.prior_token) if op.prior_token else None,
        source=op.source,
        timestamp=op.timestamp,
        resulting_revision=op.resulting_revision,
    )


def _tree_out(node) -> schemas.TreeNodeOut:
    return schemas.TreeNodeOut(
        word=node.word, count=node.count, children=[_tree_out(c) for c in node.children]
    )


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    store = TranscriptStore(config.data_dir)
    dictionary = (
        load_dictionary(config.homophones_path)
        if config.homophones_path
        else bundled_dictionary()
    )

    app = FastAPI(title="scribeview", version="0.1.0", docs_url=None, redoc_url=None)
    app.state.store = store
    app.state.dictionary = dictionary
    app.state.client = None
    app.state.job_transcripts = {}
    app.state.job_audio = {}

    def get_client():
        if app.state.client is None:
            app.state.client = make_client(
                config.backend,
                stub_dir=config.stub_dir,
                region=config.aws_region,
                bucket=config.aws_bucket,
                polls_to_complete=config.polls_to_complete,
            )
        return app.state.client

    if config.cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(config.cors_origins),
            allow_methods=["*"],
            allow_headers=["*"],
        )

    @app.exception_handler(ScribeViewError)
    async def domain_error(request: Request, exc: ScribeViewError):
        return JSONResponse(status_code=exc.http_status, content=exc.to_body())

    # keep the error body shape uniform for unmatched routes and bad methods
    @app.exception_handler(StarletteHTTPException)
    async def http_error(request: Request, exc: StarletteHTTPException):
        codes = {404: "not_found", 405: "method_not_allowed"}
        return JSONResponse(
            status_code=exc.status_code,
            content={
                "code": codes.get(exc.status_code, "http_error"),
                "message": str(exc.detail),
            },
        )

    @app.exception_handler(RequestValidationError)
    async def validation_error(request: Request, exc: RequestValidationError):
        detail = [
            {"loc": [str(p) for p in e.get("loc", [])], "msg": str(e.get("msg", ""))}
            for e in exc.errors()
        ]
        return JSONResponse(
            status_code=400,
            content={"code": "invalid_request", "message": "invalid request", "detail": detail},
        )

    @app.get("/v1/transcripts", response_model=schemas.TranscriptListOut)
    def list_transcripts():
        summaries = []
        for tid in store.list_ids():
            transcript, _ = store.get(tid)
            summaries.append(_summary(transcript))
        return schemas.TranscriptListOut(transcripts=summaries)

    @app.post("/v1/transcripts", response_model=schemas.IngestOut, status_code=201)
    async def ingest_transcript(request: Request):
        data = await request.body()
        transcript = build_transcript(parse_vendor_json(data))
        created = store.add_new(transcript)
        stored, _ = store.get(transcript.id)
        return schemas.IngestOut(
            transcript_id=stored.id, revision=stored.revision, created=created
        )

    @app.get("/v1/transcripts/{transcript_id}")
    def get_transcript(transcript_id: str):
        transcript, _ = store.get(transcript_id)
        # canonical serialization, byte-stable for a given revision
        return Response(content=model.dumps(transcript), media_type="application/json")

    @app.get("/v1/transcripts/{transcript_id}/stats", response_model=schemas.StatsOut)
    def get_stats(transcript_id: str, low_threshold: float = analytics.DEFAULT_LOW_THRESHOLD):
        transcript, _ = store.get(transcript_id)
        stats = analytics.transcript_stats(transcript, low_threshold)
        pron = sum(len(s.pronunciation_tokens()) for s in transcript.segments)
        total = sum(len(s.tokens) for s in transcript.segments)
        return schemas.StatsOut(
            transcript_id=transcript.id,
            revision=transcript.revision,
            global_mean=stats.global_mean,
            segment_means=list(stats.segment_means),
            histogram=list(stats.histogram),
            low_confidence_segments=list(stats.low_confidence_segments),
            low_threshold=low_threshold,
            segments=len(transcript.segments),
            pronunciation_tokens=pron,
            punctuation_tokens=total - pron,
            duration=transcript.audio.duration,
            speakers=[s.label for s in transcript.speakers],
        )

    @app.get("/v1/transcripts/{transcript_id}/overview", response_model=schemas.OverviewOut)
    def get_overview(transcript_id: str, viewport: int):
        transcript, _ = store.get(transcript_id)
        rects = analytics.overview_geometry(transcript, viewport)
        return schemas.OverviewOut(
            transcript_id=transcript.id,
            revision=transcript.revision,
            viewport=viewport,
            rects=[
                schemas.RectOut(
                    segment_index=r.segment_index,
                    x=r.x,
                    width=r.width,
                    opacity=r.opacity,
                    tooltip=schemas.TooltipOut(
                        line=r.tooltip.line,
                        mean_confidence=r.tooltip.mean_confidence,
                        text=r.tooltip.text,
                    ),
                )
                for r in rects
            ],
        )

    @app.get("/v1/transcripts/{transcript_id}/search", response_model=schemas.SearchOut)
    def search_transcript(
        transcript_id: str,
        q: str,
        mode: Literal["token-exact", "prefix"] = "token-exact",
        case: bool = False,
    ):
        transcript, _ = store.get(transcript_id)
        query = SearchQuery(term=q, mode=mode, case_sensitive=case)
        hits = TranscriptIndex(transcript).search(query)
        return schemas.SearchOut(
            transcript_id=transcript.id,
            revision=transcript.revision,
            term=q,
            mode=mode,
            case_sensitive=case,
            hits=[
                schemas.HitOut(
                    segment_index=h.segment_index,
                    token_index=h.token_index,
                    content=h.content,
                    confidence=h.confidence,
                )
                for h in hits
            ],
            keyword_confidence=keyword_confidence(hits) if hits else None,
        )

    @app.get("/v1/transcripts/{transcript_id}/wordtree", response_model=schemas.WordTreeOut)
    def get_wordtree(
        transcript_id: str,
        q: str,
        dir: Literal["following", "preceding"] = "following",
        depth: int = 5,
    ):
        transcript, _ = store.get(transcript_id)
        contexts = collect_contexts(transcript, q)
        tree = build_tree(contexts, dir, depth)
        return schemas.WordTreeOut(
            transcript_id=transcript.id,
            revision=transcript.revision,
            keyword=tree.word,
            direction=dir,
            max_depth=depth,
            tree=_tree_out(tree),
            keyword_confidence=keyword_confidence([c.hit for c in contexts]),
            homophones=homophones_of(dictionary, tree.word),
        )

    @app.get("/v1/homophones/{word}", response_model=schemas.HomophonesOut)
    def get_homophones(word: str, fallback: bool = False):
        out = schemas.HomophonesOut(word=word, homophones=homophones_of(dictionary, word))
        if fallback:
            out.fallback = schemas.FallbackOut(
                phonetic_key=phonetic_key(word),
                matches=phonetic_matches(dictionary, word),
            )
        return out

    @app.post("/v1/transcripts/{transcript_id}/edits", response_model=schemas.EditOut)
    def post_edit(transcript_id: str, body: schemas.EditIn):
        with store.lock(transcript_id):
            transcript, log = store.get(transcript_id)
            edited, new_log = apply_edit(
                transcript,
                log,
                EditRequest(
                    kind=body.kind,
                    segment_index=body.segment_index,
                    token_index=body.token_index,
                    content=body.content,
                    source=body.source,
                    expected_revision=body.expected_revision,
                ),
            )
            store.put(edited, new_log)
        return schemas.EditOut(
            transcript_id=edited.id, revision=edited.revision, op=_op_out(new_log.ops[-1])
        )

    @app.post("/v1/transcripts/{transcript_id}/undo", response_model=schemas.UndoOut)
    def post_undo(transcript_id: str, body: schemas.UndoIn | None = None):
        with store.lock(transcript_id):
            transcript, log = store.get(transcript_id)
            expected = body.expected_revision if body else None
            if expected is not None and expected != transcript.revision:
                raise RevisionConflictError(
                    "revision conflict",
                    detail={"expected": expected, "actual": transcript.revision},
                )
            popped = log.ops[-1] if log.ops else None
            restored, new_log = undo(transcript, log)
            store.put(restored, new_log)
        return schemas.UndoOut(
            transcript_id=restored.id, revision=restored.revision, undone=_op_out(popped)
        )

    @app.get("/v1/transcripts/{transcript_id}/audio")
    def get_audio(transcript_id: str, request: Request):
        store.get(transcript_id)
        path = store.audio_path(transcript_id)
        if path is None:
            raise NotFoundError(f"not found: transcript {transcript_id} has no audio")
        data = path.read_bytes()
        size = len(data)
        media = media_type_for(path)
        base_headers = {"accept-ranges": "bytes"}
        header = request.headers.get("range")
        if header:
            parsed = _parse_range(header, size)
            if parsed is None:
                return Response(
                    status_code=416,
                    headers={**base_headers, "content-range": f"bytes */{size}"},
                )
            if parsed != "ignore":
                start, end = parsed
                return Response(
                    content=data[start : end + 1],
                    status_code=206,
                    media_type=media,
                    headers={
                        **base_headers,
                        "content-range": f"bytes {start}-{end}/{size}",
                    },
                )
        return Response(content=data, media_type=media, headers=base_headers)

    @app.post("/v1/jobs", response_model=schemas.JobOut, status_code=202)
    async def submit_job(
        file: UploadFile = File(...),
        language_code: str = Form("en-US"),
        max_speakers: int = Form(model.MAX_SPEAKERS),
    ):
        data = await file.read()
        media = file.content_type or "application/octet-stream"
        path = store.save_upload(data, file.filename, media)
        job_config = JobConfig(language_code=language_code, max_speakers=max_speakers)
        duration = wav_duration(data) or 0.0
        audio = AudioRef(uri=str(path), duration=duration, media_type=media_type_for(path))
        handle = get_client().submit_job(audio, job_config)
        app.state.job_audio[handle.job_id] = audio
        return schemas.JobOut(job_id=handle.job_id, state="queued")

    @app.get("/v1/jobs/{job_id}", response_model=schemas.JobOut)
    def get_job(job_id: str):
        client = get_client()
        status = client.poll_job(job_id)
        out = schemas.JobOut(
            job_id=job_id, state=status.state, failure_reason=status.failure_reason
        )
        if status.state != COMPLETED:
            return out
        tid = app.state.job_transcripts.get(job_id)
        if tid is None:
            result = client.fetch_result(job_id)
            raw = parse_vendor_json(result)
            tid = f"t-{raw.checksum[:12]}"
            audio_ref = None
            source = app.state.job_audio.get(job_id)
            if source is not None:
                audio_bytes = Path(source.uri).read_bytes()
                uri = store.attach_audio(tid, audio_bytes, source.media_type)
                audio_ref = AudioRef(
                    uri=uri, duration=source.duration, media_type=source.media_type
                )
            transcript = build_transcript(raw, transcript_id=tid, audio=audio_ref)
            store.add_new(transcript)
            app.state.job_transcripts[job_id] = tid
        out.transcript_id = tid
        return out

    # surfaced here so the UI can offer replacement suggestions without
    # re-deriving ordering rules client-side
    @app.get(
        "/v1/transcripts/{transcript_id}/alternatives",
        response_model=list[schemas.AlternativeOut],
    )
    def get_alternatives(transcript_id: str, segment: int, token: int):
        transcript, _ = store.get(transcript_id)
        return [
            schemas.AlternativeOut(content=a.content, confidence=a.confidence)
            for a in list_alternatives(transcript, segment, token)
        ]

    if config.static_dir and Path(config.static_dir).is_dir():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
