#!/usr/bin/env python3
"""Regenerate fixtures/nixon_mini.wav and the stub manifest.

The waveform is a fully deterministic 12 s, 8 kHz, 8-bit mono tone sweep, so
the file's SHA-256 is stable and can be committed in the stub manifest.
"""

import hashlib
import json
import math
import wave
from pathlib import Path

RATE = 8000
SECONDS = 12.0

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def samples() -> bytes:
    n = int(RATE * SECONDS)
    out = bytearray(n)
    for i in range(n):
        t = i / RATE
        # quiet two-tone hum, amplitude 0.2 around the 8-bit midpoint 128
        v = 0.1 * math.sin(2 * math.pi * 220 * t) + 0.1 * math.sin(2 * math.pi * 331 * t)
        out[i] = max(0, min(255, int(round(128 + 127 * v))))
    return bytes(out)


def main() -> None:
    wav_path = FIXTURES / "nixon_mini.wav"
    with wave.open(str(wav_path), "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(1)
        w.setframerate(RATE)
        w.writeframes(samples())

    checksum = hashlib.sha256(wav_path.read_bytes()).hexdigest()
    manifest_path = FIXTURES / "stub" / "manifest.json"
    manifest_path.parent.mkdir(parents=True, exist_ok=True)
    manifest_path.write_text(json.dumps({checksum: "../nixon_mini.json"}, indent=2) + "\n")
    print(f"wrote {wav_path} ({wav_path.stat().st_size} bytes), sha256 {checksum}")


if __name__ == "__main__":
    main()
