"""Transcription backends: submit audio, poll for completion, fetch results.

Two implementations share one interface. The stub replays canned vendor
documents from a local directory keyed by audio checksum, so the entire
system runs offline and bit-deterministically. The real backend talks to the
cloud service over signed HTTP and is only constructed when configured
explicitly; nothing else in the package performs network I/O.
"""

from __future__ import annotations

import datetime
import hashlib
import hmac
import json
import threading
import time
import urllib.parse
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional

import httpx

from .errors import (
    BackendUnavailableError,
    ConfigError,
    IoError,
    NotFoundError,
    NotReadyError,
    SpeakerLimitError,
)
from .model import MAX_SPEAKERS, AudioRef

QUEUED = "queued"
IN_PROGRESS = "in_progress"
COMPLETED = "completed"
FAILED = "failed"

RETRY_ATTEMPTS = 5
RETRY_BASE_DELAY = 0.5

STUB_MANIFEST = "manifest.json"
FORCED_FAILURE_REASON = "stub: forced failure"


@dataclass(frozen=True)
class JobConfig:
    language_code: str = "en-US"
    max_speakers: int = MAX_SPEAKERS

    def __post_init__(self):
        if self.max_speakers > MAX_SPEAKERS:
            raise SpeakerLimitError(
                f"speaker limit exceeded: {self.max_speakers} > {MAX_SPEAKERS}"
            )
        if self.max_speakers < 1:
            raise ConfigError("max_speakers must be at least 1")


@dataclass(frozen=True)
class JobHandle:
    job_id: str
    submitted_at: float
    audio: AudioRef


@dataclass(frozen=True)
class JobStatus:
    state: str
    failure_reason: Optional[str] = None

    def __post_init__(self):
        if (self.failure_reason is not None) != (self.state == FAILED):
            raise ValueError("failure_reason present iff state is failed")


def with_retries(
    fn: Callable,
    *,
    attempts: int = RETRY_ATTEMPTS,
    base_delay: float = RETRY_BASE_DELAY,
    sleep: Callable[[float], None] = time.sleep,
):
    """Run fn, retrying with exponential backoff on retryable errors only."""
    for attempt in range(attempts):
        try:
            return fn()
        except Exception as exc:
            if not getattr(exc, "retryable", False) or attempt == attempts - 1:
                raise
            sleep(base_delay * (2**attempt))


def _read_audio(audio: AudioRef) -> bytes:
    try:
        return Path(audio.uri).read_bytes()
    except OSError as exc:
        raise IoError(f"io error: cannot read audio {audio.uri}: {exc}") from exc


@dataclass
class _StubJob:
    handle: JobHandle
    checksum: str
    polls: int = 0
    status: JobStatus = JobStatus(state=QUEUED)


class StubTranscriptionClient:
    """Deterministic local backend.

    ``stub_dir`` holds a ``manifest.json`` mapping sha256(audio bytes) to a
    result file path (relative paths resolve against the stub dir). Jobs
    complete after ``polls_to_complete`` polls; ``fail`` forces every job to
    fail at that point instead, for error-path testing.
    """

    def __init__(self, stub_dir: str | Path, *, polls_to_complete: int = 1, fail: bool = False):
        self.stub_dir = Path(stub_dir)
        if polls_to_complete < 1:
            raise ConfigError("polls_to_complete must be at least 1")
        self.polls_to_complete = polls_to_complete
        self.fail = fail
        self._jobs: dict[str, _StubJob] = {}
        self._lock = threading.Lock()
        manifest_path = self.stub_dir / STUB_MANIFEST
        try:
            self._manifest: dict[str, str] = json.loads(manifest_path.read_text("utf-8"))
        except OSError as exc:
            raise ConfigError(f"stub directory has no readable {STUB_MANIFEST}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"stub manifest is not valid JSON: {exc}") from exc

    def submit_job(self, audio: AudioRef, config: JobConfig | None = None) -> JobHandle:
        config = config or JobConfig()
        checksum = hashlib.sha256(_read_audio(audio)).hexdigest()
        job_id = f"stub-{checksum[:16]}"
        with self._lock:
            job = self._jobs.get(job_id)
            if job is None:
                job = _StubJob(
                    handle=JobHandle(job_id=job_id, submitted_at=time.time(), audio=audio),
                    checksum=checksum,
                )
                self._jobs[job_id] = job
            return job.handle

    def _job(self, handle: JobHandle | str) -> _StubJob:
        job_id = handle if isinstance(handle, str) else handle.job_id
        job = self._jobs.get(job_id)
        if job is None:
            raise NotFoundError(f"not found: job {job_id}")
        return job

    def poll_job(self, handle: JobHandle | str) -> JobStatus:
        with self._lock:
            job = self._job(handle)
            if job.status.state in (COMPLETED, FAILED):
                return job.status
            job.polls += 1
            if job.polls < self.polls_to_complete:
                job.status = JobStatus(state=IN_PROGRESS)
            elif self.fail:
                job.status = JobStatus(state=FAILED, failure_reason=FORCED_FAILURE_REASON)
            elif job.checksum not in self._manifest:
                job.status = JobStatus(
                    state=FAILED,
                    failure_reason=f"stub: no result mapped for checksum {job.checksum}",
                )
            else:
                job.status = JobStatus(state=COMPLETED)
            return job.status

    def fetch_result(self, handle: JobHandle | str) -> bytes:
        with self._lock:
            job = self._job(handle)
            if job.status.state != COMPLETED:
                raise NotReadyError(f"not ready: job {job.handle.job_id} is {job.status.state}")
            mapped = Path(self._manifest[job.checksum])
        path = mapped if mapped.is_absolute() else self.stub_dir / mapped
        try:
            return path.read_bytes()
        except OSError as exc:
            raise IoError(f"io error: cannot read stub result {path}: {exc}") from exc

    def cancel_job(self, handle: JobHandle | str) -> JobStatus:
        with self._lock:
            job = self._job(handle)
            if job.status.state not in (COMPLETED, FAILED):
                job.status = JobStatus(state=FAILED, failure_reason="cancelled")
            return job.status

    def list_jobs(self) -> list[tuple[JobHandle, JobStatus]]:
        with self._lock:
            return [(j.handle, j.status) for j in self._jobs.values()]


def sign_request(
    method: str,
    url: str,
    headers: dict[str, str],
    body: bytes,
    *,
    access_key: str,
    secret_key: str,
    region: str,
    service: str,
    session_token: str | None = None,
    timestamp: datetime.datetime | None = None,
) -> dict[str, str]:
    """Sign an HTTP request (AWS signature v4), returning the final headers."""
    now = timestamp or datetime.datetime.now(datetime.timezone.utc)
    amz_date = now.strftime("%Y%m%dT%H%M%SZ")
    date_stamp = now.strftime("%Y%m%d")
    parsed = urllib.parse.urlsplit(url)

    headers = {k.lower(): v for k, v in headers.items()}
    headers["host"] = parsed.netloc
    headers["x-amz-date"] = amz_date
    if session_token:
        headers["x-amz-security-token"] = session_token
    payload_hash = hashlib.sha256(body).hexdigest()

    canonical_path = urllib.parse.quote(parsed.path or "/", safe="/")
    pairs = urllib.parse.parse_qsl(parsed.query, keep_blank_values=True)
    canonical_query = "&".join(
        f"{urllib.parse.quote(k, safe='-_.~')}={urllib.parse.quote(v, safe='-_.~')}"
        for k, v in sorted(pairs)
    )
    signed_names = sorted(headers)
    canonical_headers = "".join(f"{k}:{headers[k].strip()}\n" for k in signed_names)
    signed_headers = ";".join(signed_names)
    canonical_request = "\n".join(
        [method, canonical_path, canonical_query, canonical_headers, signed_headers, payload_hash]
    )

    scope = f"{date_stamp}/{region}/{service}/aws4_request"
    string_to_sign = "\n".join(
        [
            "AWS4-HMAC-SHA256",
            amz_date,
            scope,
            hashlib.sha256(canonical_request.encode()).hexdigest(),
        ]
    )

    def _hmac(key: bytes, msg: str) -> bytes:
        return hmac.new(key, msg.encode(), hashlib.sha256).digest()

    k_date = _hmac(f"AWS4{secret_key}".encode(), date_stamp)
    k_region = _hmac(k_date, region)
    k_service = _hmac(k_region, service)
    k_signing = _hmac(k_service, "aws4_request")
    signature = hmac.new(k_signing, string_to_sign.encode(), hashlib.sha256).hexdigest()

    headers["authorization"] = (
        f"AWS4-HMAC-SHA256 Credential={access_key}/{scope}, "
        f"SignedHeaders={signed_headers}, Signature={signature}"
    )
    return headers


class AwsTranscriptionClient:
    """Real cloud backend: upload to object storage, then run a job.

    Credentials come from the standard environment variables
    (AWS_ACCESS_KEY_ID, AWS_SECRET_ACCESS_KEY, optionally AWS_SESSION_TOKEN);
    region and bucket come from service configuration. Calls retry with
    exponential backoff on transport failures and 5xx responses.
    """

    def __init__(self, *, region: str, bucket: str, env: dict | None = None):
        import os

        env = env if env is not None else dict(os.environ)
        self.region = region
        self.bucket = bucket
        self.access_key = env.get("AWS_ACCESS_KEY_ID", "")
        self.secret_key = env.get("AWS_SECRET_ACCESS_KEY", "")
        self.session_token = env.get("AWS_SESSION_TOKEN")
        if not self.access_key or not self.secret_key:
            raise ConfigError(
                "real backend requires AWS_ACCESS_KEY_ID and AWS_SECRET_ACCESS_KEY"
            )
        self._http = httpx.Client(timeout=30.0)
        self._handles: dict[str, JobHandle] = {}
        self._lock = threading.Lock()

    def _request(self, method: str, url: str, headers: dict, body: bytes, service: str):
        signed = sign_request(
            method,
            url,
            headers,
            body,
            access_key=self.access_key,
            secret_key=self.secret_key,
            region=self.region,
            service=service,
            session_token=self.session_token,
        )

        def attempt():
            try:
                resp = self._http.request(method, url, headers=signed, content=body)
            except httpx.TransportError as exc:
                raise BackendUnavailableError(f"backend unavailable: {exc}") from exc
            if resp.status_code >= 500:
                raise BackendUnavailableError(
                    f"backend unavailable: HTTP {resp.status_code}", detail=resp.text[:500]
                )
            if resp.status_code >= 400:
                raise IoError(f"backend rejected request: HTTP {resp.status_code}",
                              detail=resp.text[:500])
            return resp

        return with_retries(attempt)

    def _transcribe_call(self, target: str, payload: dict) -> dict:
        url = f"https://transcribe.{self.region}.amazonaws.com/"
        body = json.dumps(payload).encode()
        headers = {
            "content-type": "application/x-amz-json-1.1",
            "x-amz-target": f"Transcribe.{target}",
        }
        return self._request("POST", url, headers, body, "transcribe").json()

    def submit_job(self, audio: AudioRef, config: JobConfig | None = None) -> JobHandle:
        config = config or JobConfig()
        data = _read_audio(audio)
        checksum = hashlib.sha256(data).hexdigest()
        job_id = f"sv-{checksum[:16]}"
        with self._lock:
            if job_id in self._handles:
                return self._handles[job_id]
        key = f"uploads/{checksum}{Path(audio.uri).suffix}"
        s3_url = f"https://{self.bucket}.s3.{self.region}.amazonaws.com/{key}"
        self._request("PUT", s3_url, {"content-type": audio.media_type}, data, "s3")
        self._transcribe_call(
            "StartTranscriptionJob",
            {
                "TranscriptionJobName": job_id,
                "LanguageCode": config.language_code,
                "Media": {"MediaFileUri": f"s3://{self.bucket}/{key}"},
                "Settings": {
                    "ShowSpeakerLabels": True,
                    "MaxSpeakerLabels": config.max_speakers,
                },
            },
        )
        handle = JobHandle(job_id=job_id, submitted_at=time.time(), audio=audio)
        with self._lock:
            self._handles[job_id] = handle
        return handle

    def _get_job(self, job_id: str) -> dict:
        doc = self._transcribe_call("GetTranscriptionJob", {"TranscriptionJobName": job_id})
        return doc.get("TranscriptionJob", {})

    def poll_job(self, handle: JobHandle | str) -> JobStatus:
        job_id = handle if isinstance(handle, str) else handle.job_id
        job = self._get_job(job_id)
        state = job.get("TranscriptionJobStatus", "")
        if state == "COMPLETED":
            return JobStatus(state=COMPLETED)
        if state == "FAILED":
            return JobStatus(state=FAILED, failure_reason=job.get("FailureReason", "unknown"))
        if state == "IN_PROGRESS":
            return JobStatus(state=IN_PROGRESS)
        return JobStatus(state=QUEUED)

    def fetch_result(self, handle: JobHandle | str) -> bytes:
        job_id = handle if isinstance(handle, str) else handle.job_id
        job = self._get_job(job_id)
        if job.get("TranscriptionJobStatus") != "COMPLETED":
            raise NotReadyError(f"not ready: job {job_id}")
        uri = job.get("Transcript", {}).get("TranscriptFileUri")
        if not uri:
            raise IoError(f"io error: job {job_id} has no transcript uri")

        def attempt():
            try:
                resp = self._http.get(uri)
            except httpx.TransportError as exc:
                raise BackendUnavailableError(f"backend unavailable: {exc}") from exc
            if resp.status_code >= 500:
                raise BackendUnavailableError(f"backend unavailable: HTTP {resp.status_code}")
            if resp.status_code >= 400:
                raise IoError(f"io error: result fetch HTTP {resp.status_code}")
            return resp.content

        return with_retries(attempt)

    def cancel_job(self, handle: JobHandle | str) -> JobStatus:
        job_id = handle if isinstance(handle, str) else handle.job_id
        self._transcribe_call("DeleteTranscriptionJob", {"TranscriptionJobName": job_id})
        return JobStatus(state=FAILED, failure_reason="cancelled")

    def list_jobs(self) -> list[tuple[JobHandle, JobStatus]]:
        with self._lock:
            handles = list(self._handles.values())
        return [(h, self.poll_job(h)) for h in handles]


def make_client(
    backend: str,
    *,
    stub_dir: str | Path | None = None,
    region: str | None = None,
    bucket: str | None = None,
    polls_to_complete: int = 1,
    fail: bool = False,
):
    """Construct the configured backend; never auto-detects."""
    if backend == "stub":
        if not stub_dir:
            raise ConfigError("stub backend requires a stub directory")
        return StubTranscriptionClient(
            stub_dir, polls_to_complete=polls_to_complete, fail=fail
        )
    if backend == "real":
        if not region or not bucket:
            raise ConfigError("real backend requires region and bucket")
        return AwsTranscriptionClient(region=region, bucket=bucket)
    raise ConfigError(f"unknown transcription backend {backend!r}")
