"""Transcription confidence analytics over vendor ASR output."""

__version__ = "0.1.0"
