"""Palate/tongue geometry to the 1D area function and constriction info."""

from dataclasses import dataclass

import numpy as np

from .config import AreaConfig
from .errors import BadDimension, DomainMismatch
from .geometry import PalateCurve, TongueCurve

_CLASSES = ("open", "fricative", "occluded")


@dataclass
class Constriction:
    """Narrowest station of the tract and what it means acoustically."""

    index: int
    area: float
    classification: str


def station_centers(length: float, n: int) -> np.ndarray:
    """Cell centers of n uniform tube sections spanning [0, length]."""
    return (np.arange(n) + 0.5) * (length / n)


def compute_diameters(palate: PalateCurve, tongue: TongueCurve, n: int) -> np.ndarray:
    """Sagittal gap palate minus tongue at n stations, floored at zero."""
    if n < 8:
        raise BadDimension(f"need at least 8 stations, got {n}")
    if abs(palate.length - tongue.length) > 1e-9:
        raise DomainMismatch(
            f"palate spans {palate.length} cm but tongue spans {tongue.length} cm"
        )
    xs = station_centers(palate.length, n)
    d = palate.height(xs) - tongue.evaluate(xs)
    return np.maximum(d, 0.0)


def diameters_to_areas(d: np.ndarray) -> np.ndarray:
    """Square law a = d^2.

    The constant factor of a circular cross-section is irrelevant here: the
    waveguide only consumes area ratios, which any constant cancels out of.
    """
    d = np.asarray(d, dtype=float)
    return d * d


def detect_constriction(a: np.ndarray, a_stop: float | None = None,
                        a_fric: float | None = None) -> Constriction:
    """Find the narrowest station and classify it.

    Ties on the minimum go to the most anterior station (largest index).
    occluded iff min <= a_stop, fricative iff a_stop < min <= a_fric.
    """
    cfg = AreaConfig()
    a_stop = cfg.a_stop if a_stop is None else a_stop
    a_fric = cfg.a_fric if a_fric is None else a_fric
    a = np.asarray(a, dtype=float)
    amin = a.min()
    idx = int(np.nonzero(a == amin)[0][-1])
    if amin <= a_stop:
        cls = "occluded"
    elif amin <= a_fric:
        cls = "fricative"
    else:
        cls = "open"
    return Constriction(index=idx, area=float(amin), classification=cls)


def write_area_trace(fh, times_ms, areas) -> None:
    """CSV trace `t_ms,a_0,...,a_{N-1}`, one row per block."""
    areas = np.atleast_2d(np.asarray(areas, dtype=float))
    n = areas.shape[1]
    fh.write("t_ms," + ",".join(f"a_{i}" for i in range(n)) + "\n")
    for t, row in zip(times_ms, areas):
        fh.write(f"{t:.3f}," + ",".join(f"{v:.6g}" for v in row) + "\n")
