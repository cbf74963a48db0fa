import dataclasses

import pytest

from scribeview import model
from scribeview.errors import SessionCorruptError
from scribeview.model import (
    Alternative,
    AudioRef,
    Segment,
    SpeakerId,
    Transcript,
    WordToken,
)


def make_segment(tokens, index=0, speaker="spk_0", start=0.0, end=10.0):
    return Segment(index=index, speaker=speaker, start_time=start, end_time=end,
                   tokens=tuple(tokens))


def make_transcript(segments, speakers=None, duration=None):
    if speakers is None:
        speakers = (SpeakerId("spk_0", 0),)
    if duration is None:
        duration = max(s.end_time for s in segments)
    return Transcript(
        id="t-abc123abc123",
        audio=AudioRef(uri="", duration=duration),
        speakers=tuple(speakers),
        segments=tuple(segments),
    )


def pron(content, confidence, start, end, **kw):
    return WordToken(kind="pronunciation", content=content, confidence=confidence,
                     start_time=start, end_time=end, **kw)


def punct(content=".", confidence=0.0, **kw):
    return WordToken(kind="punctuation", content=content, confidence=confidence, **kw)


class TestClassifyKind:
    def test_words_are_pronunciation(self):
        assert model.classify_kind("hello") == "pronunciation"
        assert model.classify_kind("1972") == "pronunciation"
        assert model.classify_kind("don't") == "pronunciation"

    def test_marks_are_punctuation(self):
        for mark in (".", ",", "?", "!", "...", "--"):
            assert model.classify_kind(mark) == "punctuation"


def test_is_speaker_label():
    assert model.is_speaker_label("spk_0")
    assert model.is_speaker_label("spk_9")
    assert not model.is_speaker_label("spk_10")
    assert not model.is_speaker_label("speaker_1")
    assert not model.is_speaker_label("spk_")


def test_fixture_validates_clean(nixon):
    assert model.validate(nixon) == []


def test_pronunciation_tokens_excludes_punctuation(nixon):
    seg = nixon.segments[0]
    assert len(seg.tokens) == 6
    assert len(seg.pronunciation_tokens()) == 5
    assert all(t.is_pronunciation for t in seg.pronunciation_tokens())


class TestValidate:
    def violation_codes(self, transcript):
        return {v.code for v in model.validate(transcript)}

    def test_token_ends_before_start(self):
        seg = make_segment([pron("a", 0.5, 2.0, 1.0)])
        assert "timing_order" in self.violation_codes(make_transcript([seg]))

    def test_zero_width_token_is_fine(self):
        seg = make_segment([pron("a", 0.5, 2.0, 2.0)])
        assert model.validate(make_transcript([seg])) == []

    def test_unverified_punctuation_confidence_must_be_zero(self):
        seg = make_segment([pron("a", 0.5, 0.0, 1.0), punct(confidence=0.5)])
        assert "punctuation_confidence" in self.violation_codes(make_transcript([seg]))

    def test_verified_punctuation_carries_full_confidence(self):
        seg = make_segment(
            [pron("a", 0.5, 0.0, 1.0), punct(confidence=1.0, human_verified=True)]
        )
        assert model.validate(make_transcript([seg])) == []

    def test_verified_token_must_have_confidence_one(self):
        seg = make_segment([pron("a", 0.5, 0.0, 1.0, human_verified=True)])
        assert "unverified_confidence" in self.violation_codes(make_transcript([seg]))

    def test_alternatives_must_be_confidence_descending(self):
        tok = pron("a", 0.5, 0.0, 1.0,
                   alternatives=(Alternative("a", 0.5), Alternative("b", 0.9)))
        assert "alternatives_unsorted" in self.violation_codes(
            make_transcript([make_segment([tok])])
        )

    def test_segment_speaker_must_be_in_roster(self):
        seg = make_segment([pron("a", 0.5, 0.0, 1.0)], speaker="spk_3")
        assert "unknown_speaker" in self.violation_codes(make_transcript([seg]))

    def test_speaker_limit(self):
        speakers = [SpeakerId(f"spk_{i}", i) for i in range(10)]
        speakers.append(SpeakerId("spk_9", 9))  # over the cap and duplicated
        seg = make_segment([pron("a", 0.5, 0.0, 1.0)])
        codes = self.violation_codes(make_transcript([seg], speakers=speakers))
        assert "speaker_limit" in codes
        assert "duplicate_speaker" in codes

    def test_segment_without_pronunciation(self):
        seg = make_segment([punct()])
        assert "no_pronunciation" in self.violation_codes(make_transcript([seg]))

    def test_overlapping_segments(self):
        a = make_segment([pron("a", 0.5, 0.0, 4.0)], index=0, start=0.0, end=4.0)
        b = make_segment([pron("b", 0.5, 3.0, 5.0)], index=1, start=3.0, end=5.0)
        assert "overlapping_segments" in self.violation_codes(make_transcript([a, b]))

    def test_audio_shorter_than_transcript(self):
        seg = make_segment([pron("a", 0.5, 0.0, 9.0)], end=9.0)
        assert "audio_too_short" in self.violation_codes(
            make_transcript([seg], duration=5.0)
        )

    def test_timings_outside_segment(self):
        seg = make_segment([pron("a", 0.5, 0.0, 11.0)], end=10.0)
        assert "timing_out_of_segment" in self.violation_codes(make_transcript([seg]))


class TestSerialization:
    def test_roundtrip_equality(self, nixon):
        assert model.loads(model.dumps(nixon)) == nixon

    def test_dumps_is_deterministic(self, nixon):
        assert model.dumps(nixon) == model.dumps(nixon)

    def test_dumps_is_compact(self, nixon):
        text = model.dumps(nixon)
        assert ": " not in text and ", " not in text

    def test_punctuation_omits_timing_keys(self, nixon):
        d = model.transcript_to_dict(nixon)
        dot = d["segments"][0]["tokens"][5]
        assert dot["kind"] == "punctuation"
        assert "start_time" not in dot and "end_time" not in dot

    def test_loads_rejects_unknown_format(self, nixon):
        d = model.transcript_to_dict(nixon)
        d["format"] = "something.else.v9"
        with pytest.raises(SessionCorruptError):
            model.transcript_from_dict(d)

    def test_loads_rejects_non_json(self):
        with pytest.raises(SessionCorruptError):
            model.loads("{nope")

    def test_loads_rejects_missing_fields(self, nixon):
        d = model.transcript_to_dict(nixon)
        del d["segments"]
        with pytest.raises(SessionCorruptError):
            model.transcript_from_dict(d)


def test_with_revision(nixon):
    bumped = model.with_revision(nixon, 7)
    assert bumped.revision == 7
    assert bumped.segments == nixon.segments
    assert nixon.revision == 0  # original untouched


def test_token_accessor(nixon):
    assert nixon.token(2, 0).content == "pan"
    with pytest.raises(IndexError):
        nixon.token(9, 0)


def test_token_at(nixon):
    assert model.token_at(nixon, 0.6) == (0, 1)  # inside "pandas"
    assert model.token_at(nixon, 4.9) == (1, 0)  # silence snaps to the next token
    assert model.token_at(nixon, 99.0) is None
    with pytest.raises(model.InvalidTimeError):
        model.token_at(nixon, -0.1)


def test_segment_text_glues_punctuation(nixon):
    assert model.segment_text(nixon.segments[0]) == "the pandas arrive April first."
    assert model.segment_text(nixon.segments[2]) == "pan handle"


def test_tokens_are_immutable(nixon):
    with pytest.raises(dataclasses.FrozenInstanceError):
        nixon.segments[0].tokens[0].content = "x"
