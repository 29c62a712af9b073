"""WAV read/write: PCM 16-bit little-endian mono."""

import wave

import numpy as np

from .errors import AudioFormatError


def _target(path_or_file):
    # wave.open takes file objects as-is; anything else is a path
    if hasattr(path_or_file, "read") or hasattr(path_or_file, "write"):
        return path_or_file
    return str(path_or_file)


def write_wav(path, samples: np.ndarray, sr: int) -> None:
    """Write mono float samples in [-1, 1] as 16-bit PCM.

    `path` may also be a binary file object (for in-memory encoding).
    """
    x = np.clip(np.asarray(samples, dtype=float), -1.0, 1.0)
    pcm = np.round(x * 32767.0).astype("<i2")
    with wave.open(_target(path), "wb") as wf:
        wf.setnchannels(1)
        wf.setsampwidth(2)
        wf.setframerate(sr)
        wf.writeframes(pcm.tobytes())


def read_wav(path):
    """Read a mono 16-bit PCM WAV; returns (samples in [-1, 1], sr)."""
    try:
        with wave.open(_target(path), "rb") as wf:
            if wf.getsampwidth() != 2:
                raise AudioFormatError("only 16-bit PCM is supported")
            if wf.getnchannels() != 1:
                raise AudioFormatError("only mono files are supported")
            sr = wf.getframerate()
            raw = wf.readframes(wf.getnframes())
    except (wave.Error, EOFError) as e:
        raise AudioFormatError(f"unreadable WAV: {e}") from e
    x = np.frombuffer(raw, dtype="<i2").astype(float) / 32767.0
    return x, sr
