"""Confidence aggregation and the geometry behind the overview strip.

Everything here is a pure function over an immutable transcript snapshot.
Layout units are abstract; the UI decides what a unit maps to on screen.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import (
    DegenerateTranscriptError,
    EmptySegmentError,
    EmptyTranscriptError,
    RangeError,
    ViewportError,
)
from .model import Segment, Transcript, segment_text

OPACITY_FLOOR = 0.15
HISTOGRAM_BINS = 10
DEFAULT_LOW_THRESHOLD = 0.8


@dataclass(frozen=True)
class RectTooltip:
    line: int  # 1-based segment line number, as shown in the editor gutter
    mean_confidence: float
    text: str


@dataclass(frozen=True)
class OverviewRect:
    segment_index: int
    x: int
    width: int
    opacity: float
    tooltip: RectTooltip


@dataclass(frozen=True)
class TranscriptStats:
    global_mean: float
    segment_means: tuple[float, ...]
    histogram: tuple[int, ...]
    low_confidence_segments: tuple[int, ...]


def segment_confidence(segment: Segment) -> float:
    """Arithmetic mean confidence over the segment's pronunciation tokens."""
    pron = segment.pronunciation_tokens()
    if not pron:
        raise EmptySegmentError(f"empty segment: segment {segment.index} has no words")
    return sum(t.confidence for t in pron) / len(pron)


def opacity(conf: float) -> float:
    """Map a confidence to a rect opacity; never fully transparent.

    A rect at opacity 0 could not be seen or clicked, which would defeat
    click-to-seek, so confidence 0 still renders at the floor.
    """
    if not 0.0 <= conf <= 1.0:
        raise RangeError(f"range error: confidence {conf} out of [0,1]")
    return OPACITY_FLOOR + (1.0 - OPACITY_FLOOR) * conf


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def overview_geometry(transcript: Transcript, viewport_width: int) -> list[OverviewRect]:
    """Lay out one rect per segment, width proportional to duration.

    Widths are integers that sum to viewport_width exactly. Rounding works on
    cumulative boundaries rather than per-segment values, which keeps every
    width within one unit of its exact proportional share. A segment whose
    share rounds to zero is bumped to one unit, paid for by the currently
    most over-allocated rect.
    """
    if viewport_width <= 0:
        raise ViewportError(f"invalid viewport: width {viewport_width} must be positive")
    segments = transcript.segments
    if viewport_width < len(segments):
        raise ViewportError(
            f"invalid viewport: width {viewport_width} cannot fit {len(segments)} segments"
        )
    durations = [s.duration for s in segments]
    total = sum(durations)
    if total <= 0.0:
        raise DegenerateTranscriptError("degenerate transcript: zero total duration")

    widths = []
    prev_boundary = 0
    cumulative = 0.0
    for d in durations:
        cumulative += d
        boundary = _round_half_up(viewport_width * cumulative / total)
        widths.append(boundary - prev_boundary)
        prev_boundary = boundary
    # the last cumulative share is the full viewport, so the sum is exact;
    # force the final boundary anyway in case of float noise near .5
    widths[-1] += viewport_width - prev_boundary

    exact = [viewport_width * d / total for d in durations]
    while any(w <= 0 for w in widths):
        i = next(i for i, w in enumerate(widths) if w <= 0)
        donors = [j for j, w in enumerate(widths) if w > 1]
        donor = max(donors, key=lambda j: widths[j] - exact[j])
        widths[donor] -= 1
        widths[i] += 1

    rects = []
    x = 0
    for seg, width in zip(segments, widths):
        mean = segment_confidence(seg)
        rects.append(
            OverviewRect(
                segment_index=seg.index,
                x=x,
                width=width,
                opacity=opacity(mean),
                tooltip=RectTooltip(
                    line=seg.index + 1,
                    mean_confidence=mean,
                    text=segment_text(seg),
                ),
            )
        )
        x += width
    return rects


def transcript_stats(
    transcript: Transcript, low_threshold: float = DEFAULT_LOW_THRESHOLD
) -> TranscriptStats:
    """Token-weighted global mean, per-segment means, histogram, low list.

    The global mean averages over all pronunciation tokens, not over segment
    means, so long segments weigh more.
    """
    confidences = [
        t.confidence for s in transcript.segments for t in s.pronunciation_tokens()
    ]
    if not confidences:
        raise EmptyTranscriptError("empty transcript: no pronunciation tokens")
    histogram = [0] * HISTOGRAM_BINS
    for c in confidences:
        histogram[min(int(c * HISTOGRAM_BINS), HISTOGRAM_BINS - 1)] += 1
    means = tuple(segment_confidence(s) for s in transcript.segments)
    return TranscriptStats(
        global_mean=sum(confidences) / len(confidences),
        segment_means=means,
        histogram=tuple(histogram),
        low_confidence_segments=tuple(
            i for i, m in enumerate(means) if m < low_threshold
        ),
    )
