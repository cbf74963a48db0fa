"""Request and response bodies for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

PHONETIC_MATCH_LABEL = "phonetic-key match"


class EditIn(BaseModel):
    kind: Literal["insert", "delete", "replace"]
    segment_index: int = Field(ge=0)
    token_index: int = Field(ge=0)
    content: Optional[str] = None
    source: Literal["manual", "alternative"] = "manual"
    expected_revision: int = Field(ge=0)


class UndoIn(BaseModel):
    expected_revision: Optional[int] = None


class AlternativeOut(BaseModel):
    content: str
    confidence: float


class TokenOut(BaseModel):
    kind: str
    content: str
    confidence: float
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    alternatives: list[AlternativeOut] = []
    human_verified: bool = False


class TranscriptSummaryOut(BaseModel):
    id: str
    revision: int
    segments: int
    duration: float
    speakers: int


class TranscriptListOut(BaseModel):
    transcripts: list[TranscriptSummaryOut]


class IngestOut(BaseModel):
    transcript_id: str
    revision: int
    created: bool


class TooltipOut(BaseModel):
    line: int
    mean_confidence: float
    text: str


class RectOut(BaseModel):
    segment_index: int
    x: int
    width: int
    opacity: float
    tooltip: TooltipOut


class OverviewOut(BaseModel):
    transcript_id: str
    revision: int
    viewport: int
    rects: list[RectOut]


class StatsOut(BaseModel):
    transcript_id: str
    revision: int
    global_mean: float
    segment_means: list[float]
    histogram: list[int]
    low_confidence_segments: list[int]
    low_threshold: float
    segments: int
    pronunciation_tokens: int
    punctuation_tokens: int
    duration: float
    speakers: list[str]


class HitOut(BaseModel):
    segment_index: int
    token_index: int
    content: str
    confidence: float


class SearchOut(BaseModel):
    transcript_id: str
    revision: int
    term: str
    mode: str
    case_sensitive: bool
    hits: list[HitOut]
    keyword_confidence: Optional[float]


class TreeNodeOut(BaseModel):
    word: str
    count: int
    children: list["TreeNodeOut"] = []


TreeNodeOut.model_rebuild()


class WordTreeOut(BaseModel):
    transcript_id: str
    revision: int
    keyword: str
    direction: str
    max_depth: int
    tree: TreeNodeOut
    keyword_confidence: float
    homophones: list[str]


class FallbackOut(BaseModel):
    label: str = PHONETIC_MATCH_LABEL
    phonetic_key: str
    matches: list[str]


class HomophonesOut(BaseModel):
    word: str
    homophones: list[str]
    fallback: Optional[FallbackOut] = None


class EditOpOut(BaseModel):
    kind: str
    segment_index: int
    token_index: int
    content: Optional[str]
    prior_token: Optional[TokenOut]
    source: str
    timestamp: float
    resulting_revision: int


class EditOut(BaseModel):
    transcript_id: str
    revision: int
    op: EditOpOut


class UndoOut(BaseModel):
    transcript_id: str
    revision: int
    undone: EditOpOut


class JobOut(BaseModel):
    job_id: str
    state: str
    failure_reason: Optional[str] = None
    transcript_id: Optional[str] = None
