"""Raw glove frames to articulatory state.

An 18-channel frame is calibrated to [0,1] per channel, then a small layout
table picks out the wrist and fingertip channels: wrist flexion becomes the
radius r (jaw opening), wrist deviation becomes theta (tongue front/back),
and the five fingertip channels become finger elevations with the base
"gripping a ball" posture reading as zero.
"""

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_LAYOUT
from .errors import (
    DegenerateChannel,
    EmptySequence,
    LayoutMismatch,
    ParseError,
)

N_CHANNELS = 18

# dead-sensor floor, as a fraction of the full raw scale seen in the data
EPS_CAL_FRACTION = 1e-6


@dataclass
class SensorFrame:
    """One timestamped raw glove reading.

    t is milliseconds since session start; channels holds the 18 raw bend
    values in glove order.
    """

    t: float
    channels: np.ndarray

    def __post_init__(self):
        self.channels = np.asarray(self.channels, dtype=float)
        if self.channels.shape != (N_CHANNELS,):
            raise ParseError(
                f"expected {N_CHANNELS} channels, got {self.channels.shape}"
            )


@dataclass
class Calibration:
    """Per-channel raw (min, max) ranges. min < max holds for every channel."""

    lo: np.ndarray
    hi: np.ndarray

    def to_dict(self) -> dict:
        return {"channels": [[float(a), float(b)] for a, b in zip(self.lo, self.hi)]}

    @classmethod
    def from_dict(cls, d: dict) -> "Calibration":
        try:
            pairs = d["channels"]
            lo = np.array([p[0] for p in pairs], dtype=float)
            hi = np.array([p[1] for p in pairs], dtype=float)
        except (KeyError, TypeError, IndexError) as e:
            raise ParseError(f"bad calibration structure: {e}") from e
        if lo.shape != (N_CHANNELS,):
            raise ParseError(f"calibration must cover {N_CHANNELS} channels")
        if np.any(hi <= lo):
            bad = int(np.argmax(hi <= lo))
            raise DegenerateChannel(bad, float(hi[bad] - lo[bad]))
        return cls(lo=lo, hi=hi)

    @classmethod
    def identity(cls) -> "Calibration":
        """Pass-through map for gesture files already recorded in [0,1]."""
        return cls(lo=np.zeros(N_CHANNELS), hi=np.ones(N_CHANNELS))


@dataclass
class ArticulatoryState:
    """Control variables driving the tract geometry.

    r in [0,1]: 0 = closed jaw / full wrist extension, 1 = open.
    theta in [-1,1]: -1 = retraction (radial deviation), +1 = protrusion.
    fingers: five elevations in [0,1], thumb to pinky, 0 = base grip.
    """

    r: float = 0.5
    theta: float = 0.0
    fingers: np.ndarray = field(default_factory=lambda: np.zeros(5))

    def __post_init__(self):
        self.fingers = np.asarray(self.fingers, dtype=float)
        if self.fingers.shape != (5,):
            raise ValueError("need exactly 5 finger elevations")

    def clamped(self) -> "ArticulatoryState":
        return ArticulatoryState(
            r=float(np.clip(self.r, 0.0, 1.0)),
            theta=float(np.clip(self.theta, -1.0, 1.0)),
            fingers=np.clip(self.fingers, 0.0, 1.0),
        )


def calibrate(frames) -> Calibration:
    """Derive per-channel (min, max) from a recorded sweep.

    The sweep should exercise every sensor through its full range; channels
    whose span stays below a small fraction of the overall raw scale are
    reported as dead rather than silently producing unstable normals.
    """
    frames = list(frames)
    if len(frames) < 2:
        raise EmptySequence("need at least 2 frames to calibrate")
    data = np.stack([f.channels for f in frames])
    lo = data.min(axis=0)
    hi = data.max(axis=0)
    scale = max(1.0, float(data.max() - data.min()))
    eps = EPS_CAL_FRACTION * scale
    spans = hi - lo
    for i in range(N_CHANNELS):
        if spans[i] < eps:
            raise DegenerateChannel(i, float(spans[i]))
    return Calibration(lo=lo, hi=hi)


def normalize_frame(frame: SensorFrame, calib: Calibration) -> np.ndarray:
    """Map raw channels affinely onto [0,1] and clamp.

    Out-of-range raw values (drift past the calibration sweep) clamp rather
    than error, so a live session cannot be killed by one hot sample.
    """
    x = (frame.channels - calib.lo) / (calib.hi - calib.lo)
    return np.clip(x, 0.0, 1.0)


def validate_layout(layout: dict) -> dict:
    """Check a channel-layout table and fill defaults.

    Layout maps roles to channel indices: {"flexion": i, "deviation": j,
    "fingertips": [5 ints]}. An optional "triples" table of 3 channels per
    finger plus "average_triples": true switches elevation to the mean of
    each triple instead of the tip alone.
    """
    merged = dict(DEFAULT_LAYOUT)
    merged.update(layout or {})
    idx = [merged["flexion"], merged["deviation"], *merged["fingertips"]]
    if merged.get("average_triples"):
        for triple in merged.get("triples", []):
            idx.extend(triple)
    if len(merged["fingertips"]) != 5:
        raise LayoutMismatch("layout needs exactly 5 fingertip channels")
    for i in idx:
        if not isinstance(i, int) or not (0 <= i < N_CHANNELS):
            raise LayoutMismatch(f"channel index {i} out of range 0..{N_CHANNELS - 1}")
    return merged


def frame_to_articulation(frame: np.ndarray, layout: dict | None = None) -> ArticulatoryState:
    """Normalized frame to (r, theta, fingers).

    Monotone by construction: more flexion never lowers r, more ulnar
    deviation never lowers theta. A neutral wrist (0.5, 0.5) lands on
    r=0.5, theta=0, the mid-radius rest point of the control plane.
    """
    lay = validate_layout(layout or {})
    frame = np.asarray(frame, dtype=float)
    r = float(frame[lay["flexion"]])
    theta = 2.0 * float(frame[lay["deviation"]]) - 1.0
    if lay.get("average_triples") and lay.get("triples"):
        fingers = np.array([frame[list(t)].mean() for t in lay["triples"]])
    else:
        fingers = frame[list(lay["fingertips"])].copy()
    return ArticulatoryState(r=r, theta=theta, fingers=fingers).clamped()


def parse_gesture_csv(text: str) -> list[SensorFrame]:
    """Parse gesture CSV: header t_ms,s1,...,s18, one frame per row.

    Timestamps must be non-negative and non-decreasing. Raises ParseError
    with the 1-based line number of the first offending row.
    """
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty gesture file") from None
    expected = ["t_ms"] + [f"s{i}" for i in range(1, N_CHANNELS + 1)]
    if [h.strip() for h in header] != expected:
        raise ParseError(f"bad header, expected {','.join(expected)}", line=1)
    frames = []
    prev_t = -1.0
    for lineno, row in enumerate(reader, start=2):
        if not row or (len(row) == 1 and not row[0].strip()):
            continue
        if len(row) != N_CHANNELS + 1:
            raise ParseError(f"expected {N_CHANNELS + 1} columns, got {len(row)}", line=lineno)
        try:
            t = float(row[0])
            vals = np.array([float(v) for v in row[1:]], dtype=float)
        except ValueError as e:
            raise ParseError(str(e), line=lineno) from e
        if t < 0:
            raise ParseError("negative timestamp", line=lineno)
        if t < prev_t:
            raise ParseError("timestamps must be non-decreasing", line=lineno)
        prev_t = t
        frames.append(SensorFrame(t=t, channels=vals))
    if not frames:
        raise ParseError("gesture file has a header but no frames")
    return frames


def read_gesture_file(path) -> list[SensorFrame]:
    with open(path, encoding="utf-8") as fh:
        return parse_gesture_csv(fh.read())


def load_calibration(path) -> Calibration:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad calibration JSON: {e}") from e
    return Calibration.from_dict(d)


def load_layout(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        try:
            d = json.load(fh)
        except json.JSONDecodeError as e:
            raise ParseError(f"bad layout JSON: {e}") from e
    return validate_layout(d)
