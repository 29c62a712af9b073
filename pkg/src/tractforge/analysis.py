"""Offline measurement: magnitude spectrum and LPC formant estimates.

Formants come from the autocorrelation method: pre-emphasized 40 ms Hann
frames at 50% overlap, prediction order 2 + sr/1000, roots of the
prediction polynomial with bandwidth under 400 Hz count as formants, and
the per-frame lists are reduced by a median across frames.
"""

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_toeplitz
from scipy.signal import resample_poly

from .errors import TooShort, UnstableFrame

PREEMPHASIS = 0.97
FRAME_MS = 40.0
MIN_FORMANT_HZ = 90.0
MAX_BANDWIDTH_HZ = 400.0

# LPC at a high sample rate spends most of its poles above the speech band,
# so formant inputs get decimated to roughly this rate first
ANALYSIS_SR = 11025


def to_analysis_rate(samples: np.ndarray, sr: int):
    """Integer-factor decimation toward ANALYSIS_SR; no-op at or below it.

    Returns (samples, new_sr).
    """
    if sr <= ANALYSIS_SR:
        return np.asarray(samples, dtype=float), sr
    q = int(round(sr / ANALYSIS_SR))
    return resample_poly(np.asarray(samples, dtype=float), 1, q), int(round(sr / q))


@dataclass
class FormantEstimate:
    """Formant frequencies/bandwidths (Hz) with the analysis geometry."""

    frequencies: list
    bandwidths: list
    frames: int
    frame_ms: float
    sr: int

    def to_dict(self) -> dict:
        d = {"f1_hz": None, "f2_hz": None, "frames": self.frames}
        if len(self.frequencies) > 0:
            d["f1_hz"] = float(self.frequencies[0])
        if len(self.frequencies) > 1:
            d["f2_hz"] = float(self.frequencies[1])
        d["formants"] = [
            {"frequency_hz": float(f), "bandwidth_hz": float(b)}
            for f, b in zip(self.frequencies, self.bandwidths)
        ]
        return d


def spectrum(samples: np.ndarray, sr: int):
    """Hann-windowed magnitude spectrum, transform length = next power of 2.

    Returns (freqs_hz, magnitudes).
    """
    x = np.asarray(samples, dtype=float)
    if len(x) < 256:
        raise TooShort(f"need at least 256 samples, got {len(x)}")
    nfft = 1 << (len(x) - 1).bit_length()
    win = np.hanning(len(x))
    mags = np.abs(np.fft.rfft(x * win, nfft))
    freqs = np.fft.rfftfreq(nfft, 1.0 / sr)
    return freqs, mags


def _frame_formants(frame: np.ndarray, sr: int, order: int):
    """LPC roots of one frame as (freq, bw) pairs sorted by frequency."""
    win = frame * np.hanning(len(frame))
    r = np.correlate(win, win, mode="full")[len(win) - 1:len(win) + order]
    if r[0] <= 1e-12:
        return []
    try:
        a = solve_toeplitz(r[:order], -r[1:order + 1])
    except (np.linalg.LinAlgError, ValueError):
        return []
    roots = np.roots(np.concatenate(([1.0], a)))
    roots = roots[np.imag(roots) > 1e-9]
    freqs = np.angle(roots) * sr / (2.0 * np.pi)
    mags = np.abs(roots)
    with np.errstate(divide="ignore"):
        bws = -np.log(np.maximum(mags, 1e-12)) * sr / np.pi
    keep = (freqs > MIN_FORMANT_HZ) & (freqs < 0.95 * sr / 2.0) & (bws < MAX_BANDWIDTH_HZ)
    pairs = sorted(zip(freqs[keep], bws[keep]))
    return pairs


def estimate_formants(samples: np.ndarray, sr: int, count: int = 2) -> FormantEstimate:
    """Median LPC formants over all analysis frames.

    Raises UnstableFrame when no frame yields a qualifying root, which is
    normal for silence or pure noise.
    """
    if not 1 <= count <= 5:
        raise ValueError("count must be in 1..5")
    x = np.asarray(samples, dtype=float)
    if len(x) < int(0.030 * sr):
        raise TooShort("need at least 30 ms of audio")

    x = np.append(x[0], x[1:] - PREEMPHASIS * x[:-1])
    flen = int(FRAME_MS / 1000.0 * sr)
    hop = flen // 2
    order = int(2 + sr / 1000)

    slots = [[] for _ in range(count)]
    bw_slots = [[] for _ in range(count)]
    n_frames = 0
    for start in range(0, len(x) - flen + 1, hop):
        pairs = _frame_formants(x[start:start + flen], sr, order)
        if not pairs:
            continue
        n_frames += 1
        for i, (f, b) in enumerate(pairs[:count]):
            slots[i].append(f)
            bw_slots[i].append(b)
    if n_frames == 0 or not slots[0]:
        raise UnstableFrame("no analysis frame produced a usable resonance")

    freqs, bws = [], []
    for fs, bs in zip(slots, bw_slots):
        if not fs:
            break
        f = float(np.median(fs))
        if freqs and f <= freqs[-1]:
            continue
        freqs.append(f)
        bws.append(float(np.median(bs)))
    return FormantEstimate(
        frequencies=freqs, bandwidths=bws, frames=n_frames,
        frame_ms=FRAME_MS, sr=sr,
    )
