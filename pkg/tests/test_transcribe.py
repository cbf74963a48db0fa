import datetime
import hashlib
import json

import pytest

from conftest import NIXON_WAV, STUB_DIR
from scribeview.errors import (
    ConfigError,
    IoError,
    NotFoundError,
    NotReadyError,
    SpeakerLimitError,
)
from scribeview.model import AudioRef
from scribeview.transcribe import (
    COMPLETED,
    FAILED,
    FORCED_FAILURE_REASON,
    IN_PROGRESS,
    QUEUED,
    JobConfig,
    JobStatus,
    StubTranscriptionClient,
    make_client,
    sign_request,
    with_retries,
)

WAV_SHA = hashlib.sha256(NIXON_WAV.read_bytes()).hexdigest()
AUDIO = AudioRef(uri=str(NIXON_WAV), duration=10.0, media_type="audio/wav")


class TestJobConfig:
    def test_defaults(self):
        cfg = JobConfig()
        assert cfg.language_code == "en-US" and cfg.max_speakers == 10

    def test_speaker_cap(self):
        with pytest.raises(SpeakerLimitError):
            JobConfig(max_speakers=11)
        with pytest.raises(ConfigError):
            JobConfig(max_speakers=0)


class TestJobStatus:
    def test_failure_reason_required_iff_failed(self):
        assert JobStatus(FAILED, failure_reason="why").failure_reason == "why"
        with pytest.raises(ValueError):
            JobStatus(FAILED)
        with pytest.raises(ValueError):
            JobStatus(COMPLETED, failure_reason="why")


class TestStubClient:
    def test_job_id_derives_from_audio_checksum(self):
        client = StubTranscriptionClient(STUB_DIR)
        handle = client.submit_job(AUDIO)
        assert handle.job_id == f"stub-{WAV_SHA[:16]}"

    def test_submit_is_idempotent(self):
        client = StubTranscriptionClient(STUB_DIR)
        assert client.submit_job(AUDIO).job_id == client.submit_job(AUDIO).job_id
        assert len(client.list_jobs()) == 1

    def test_poll_progression(self):
        client = StubTranscriptionClient(STUB_DIR, polls_to_complete=3)
        handle = client.submit_job(AUDIO)
        states = [client.poll_job(handle).state for _ in range(4)]
        assert states == [IN_PROGRESS, IN_PROGRESS, COMPLETED, COMPLETED]

    def test_fetch_before_completion(self):
        client = StubTranscriptionClient(STUB_DIR, polls_to_complete=2)
        handle = client.submit_job(AUDIO)
        with pytest.raises(NotReadyError):
            client.fetch_result(handle)

    def test_fetch_returns_mapped_fixture_bytes(self, nixon_bytes):
        client = StubTranscriptionClient(STUB_DIR)
        handle = client.submit_job(AUDIO)
        client.poll_job(handle)
        assert client.fetch_result(handle) == nixon_bytes

    def test_forced_failure(self):
        client = StubTranscriptionClient(STUB_DIR, fail=True)
        handle = client.submit_job(AUDIO)
        status = client.poll_job(handle)
        assert status.state == FAILED
        assert status.failure_reason == FORCED_FAILURE_REASON

    def test_unmapped_checksum_fails_with_reason(self, tmp_path):
        other = tmp_path / "other.wav"
        other.write_bytes(b"not in the manifest")
        checksum = hashlib.sha256(other.read_bytes()).hexdigest()
        client = StubTranscriptionClient(STUB_DIR)
        handle = client.submit_job(AudioRef(uri=str(other), duration=1.0))
        status = client.poll_job(handle)
        assert status.state == FAILED
        assert checksum in status.failure_reason

    def test_cancel(self):
        client = StubTranscriptionClient(STUB_DIR, polls_to_complete=10)
        handle = client.submit_job(AUDIO)
        status = client.cancel_job(handle)
        assert status.state == FAILED and status.failure_reason == "cancelled"
        # cancellation is sticky
        assert client.poll_job(handle).state == FAILED

    def test_cancel_after_completion_is_a_no_op(self):
        client = StubTranscriptionClient(STUB_DIR)
        handle = client.submit_job(AUDIO)
        client.poll_job(handle)
        assert client.cancel_job(handle).state == COMPLETED

    def test_unknown_job(self):
        client = StubTranscriptionClient(STUB_DIR)
        with pytest.raises(NotFoundError):
            client.poll_job("stub-0000000000000000")

    def test_missing_audio_file(self):
        client = StubTranscriptionClient(STUB_DIR)
        with pytest.raises(IoError):
            client.submit_job(AudioRef(uri="/nonexistent.wav", duration=1.0))

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(ConfigError):
            StubTranscriptionClient(tmp_path)

    def test_broken_manifest(self, tmp_path):
        (tmp_path / "manifest.json").write_text("{oops")
        with pytest.raises(ConfigError):
            StubTranscriptionClient(tmp_path)


class Transient(Exception):
    retryable = True


class Permanent(Exception):
    retryable = False


class TestWithRetries:
    def test_retries_transient_failures(self):
        calls = []
        delays = []

        def flaky():
            calls.append(1)
            if len(calls) < 3:
                raise Transient("blip")
            return "ok"

        assert with_retries(flaky, sleep=delays.append) == "ok"
        assert len(calls) == 3
        assert delays == [0.5, 1.0]  # exponential from the base delay

    def test_gives_up_after_attempts(self):
        calls = []

        def hopeless():
            calls.append(1)
            raise Transient("blip")

        with pytest.raises(Transient):
            with_retries(hopeless, attempts=4, sleep=lambda _: None)
        assert len(calls) == 4

    def test_permanent_errors_raise_immediately(self):
        calls = []

        def broken():
            calls.append(1)
            raise Permanent("no")

        with pytest.raises(Permanent):
            with_retries(broken, sleep=lambda _: None)
        assert len(calls) == 1


class TestSignRequest:
    # the published reference vector for GET iam.amazonaws.com ListUsers
    def test_reference_vector(self):
        timestamp = datetime.datetime(2015, 8, 30, 12, 36, 0,
                                      tzinfo=datetime.timezone.utc)
        headers = sign_request(
            "GET",
            "https://iam.amazonaws.com/?Action=ListUsers&Version=2010-05-08",
            {"content-type": "application/x-www-form-urlencoded; charset=utf-8"},
            b"",
            access_key="AKIDEXAMPLE",
            secret_key="wJalrXUtnFEMI/K7MDENG+bPxRfiCYEXAMPLEKEY",
            region="us-east-1",
            service="iam",
            timestamp=timestamp,
        )
        assert headers["x-amz-date"] == "20150830T123600Z"
        assert headers["host"] == "iam.amazonaws.com"
        assert headers["authorization"] == (
            "AWS4-HMAC-SHA256 "
            "Credential=AKIDEXAMPLE/20150830/us-east-1/iam/aws4_request, "
            "SignedHeaders=content-type;host;x-amz-date, "
            "Signature=5d672d79c15b13162d9279b0855cfba6789a8edb4c82c400e06b5924a6f2b5d7"
        )

    def test_session_token_is_signed(self):
        headers = sign_request(
            "GET", "https://example.amazonaws.com/", {}, b"",
            access_key="k", secret_key="s", region="us-east-1", service="s3",
            session_token="TOKEN",
        )
        assert headers["x-amz-security-token"] == "TOKEN"
        assert "x-amz-security-token" in headers["authorization"]


class TestMakeClient:
    def test_stub(self):
        client = make_client("stub", stub_dir=STUB_DIR)
        assert isinstance(client, StubTranscriptionClient)

    def test_stub_requires_directory(self):
        with pytest.raises(ConfigError):
            make_client("stub")

    def test_real_requires_credentials(self, monkeypatch):
        for var in ("AWS_ACCESS_KEY_ID", "AWS_SECRET_ACCESS_KEY"):
            monkeypatch.delenv(var, raising=False)
        with pytest.raises(ConfigError):
            make_client("real", region="us-east-1", bucket="b")

    def test_unknown_backend(self):
        with pytest.raises(ConfigError):
            make_client("imaginary")


def test_stub_manifest_matches_fixture():
    manifest = json.loads((STUB_DIR / "manifest.json").read_text())
    assert WAV_SHA in manifest
