"""On-disk transcript store: one session file per transcript, plus audio.

Layout under the data directory:

    transcripts/{id}.json   versioned session (transcript + edit log)
    audio/{id}{ext}         the source audio, served with range support
    uploads/{sha256}{ext}   raw uploads awaiting transcription

Writes go through per-transcript locks and land atomically, so readers
always see a complete session at some revision.
"""

from __future__ import annotations

import contextlib
import hashlib
import io
import os
import threading
import wave
from pathlib import Path

from .edits import EditLog, load_session, save_session
from .errors import ConfigError, NotFoundError
from .model import Transcript

_EXT_BY_MEDIA_TYPE = {
    "audio/wav": ".wav",
    "audio/x-wav": ".wav",
    "audio/wave": ".wav",
    "audio/mpeg": ".mp3",
    "audio/mp3": ".mp3",
    "audio/ogg": ".ogg",
    "audio/flac": ".flac",
    "audio/mp4": ".m4a",
}
_MEDIA_TYPE_BY_EXT = {
    ".wav": "audio/wav",
    ".mp3": "audio/mpeg",
    ".ogg": "audio/ogg",
    ".flac": "audio/flac",
    ".m4a": "audio/mp4",
}
DEFAULT_MEDIA_TYPE = "application/octet-stream"


def extension_for(media_type: str, filename: str | None = None) -> str:
    if filename:
        suffix = Path(filename).suffix.lower()
        if suffix in _MEDIA_TYPE_BY_EXT:
            return suffix
    return _EXT_BY_MEDIA_TYPE.get(media_type, ".bin")


def media_type_for(path: str | Path) -> str:
    return _MEDIA_TYPE_BY_EXT.get(Path(path).suffix.lower(), DEFAULT_MEDIA_TYPE)


def wav_duration(data: bytes) -> float | None:
    """Duration in seconds if the bytes are a readable WAV file."""
    try:
        with wave.open(io.BytesIO(data)) as w:
            rate = w.getframerate()
            if rate <= 0:
                return None
            return w.getnframes() / rate
    except (wave.Error, EOFError, OSError):
        return None


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


class TranscriptStore:
    def __init__(self, data_dir: str | Path):
        self.data_dir = Path(data_dir)
        self.transcripts_dir = self.data_dir / "transcripts"
        self.audio_dir = self.data_dir / "audio"
        self.uploads_dir = self.data_dir / "uploads"
        try:
            for d in (self.transcripts_dir, self.audio_dir, self.uploads_dir):
                d.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"data directory {self.data_dir} is not writable: {exc}") from exc
        if not os.access(self.data_dir, os.W_OK):
            raise ConfigError(f"data directory {self.data_dir} is not writable")
        self._locks: dict[str, threading.RLock] = {}
        self._locks_guard = threading.Lock()

    def _session_path(self, transcript_id: str) -> Path:
        return self.transcripts_dir / f"{transcript_id}.json"

    @contextlib.contextmanager
    def lock(self, transcript_id: str):
        """Serialize writes per transcript; different ids stay independent."""
        with self._locks_guard:
            lock = self._locks.setdefault(transcript_id, threading.RLock())
        with lock:
            yield

    def list_ids(self) -> list[str]:
        return sorted(p.stem for p in self.transcripts_dir.glob("*.json"))

    def exists(self, transcript_id: str) -> bool:
        return self._session_path(transcript_id).is_file()

    def get(self, transcript_id: str) -> tuple[Transcript, EditLog]:
        path = self._session_path(transcript_id)
        if not path.is_file():
            raise NotFoundError(f"not found: transcript {transcript_id}")
        return load_session(path)

    def put(self, transcript: Transcript, log: EditLog) -> None:
        with self.lock(transcript.id):
            save_session(transcript, log, self._session_path(transcript.id))

    def add_new(self, transcript: Transcript) -> bool:
        """Store a freshly ingested transcript; re-ingesting the same id is a
        no-op so accumulated edit history survives."""
        with self.lock(transcript.id):
            if self.exists(transcript.id):
                return False
            self.put(transcript, EditLog(base_revision=transcript.revision))
            return True

    def attach_audio(self, transcript_id: str, data: bytes, media_type: str) -> str:
        """Write the audio beside the session; returns the data-dir-relative uri."""
        ext = extension_for(media_type)
        path = self.audio_dir / f"{transcript_id}{ext}"
        path.write_bytes(data)
        return f"audio/{transcript_id}{ext}"

    def audio_path(self, transcript_id: str) -> Path | None:
        matches = sorted(self.audio_dir.glob(f"{transcript_id}.*"))
        return matches[0] if matches else None

    def save_upload(self, data: bytes, filename: str | None, media_type: str) -> Path:
        ext = extension_for(media_type, filename)
        path = self.uploads_dir / f"{sha256_hex(data)}{ext}"
        if not path.is_file():
            path.write_bytes(data)
        return path
