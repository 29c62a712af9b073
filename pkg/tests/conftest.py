import numpy as np
import pytest

from tractforge.config import GeometryConfig
from tractforge.geometry import default_palate
from tractforge.kinematics import N_CHANNELS


def gesture_csv(rows) -> str:
    """Build a gesture CSV from (t_ms, channels) pairs."""
    header = "t_ms," + ",".join(f"s{i}" for i in range(1, N_CHANNELS + 1))
    lines = [header]
    for t, ch in rows:
        lines.append(f"{t}," + ",".join(f"{v:g}" for v in ch))
    return "\n".join(lines) + "\n"


def neutral_channels(overrides=None) -> np.ndarray:
    """An 18-channel frame at mid-range; overrides maps index to value."""
    ch = np.full(N_CHANNELS, 0.5)
    for i, v in (overrides or {}).items():
        ch[i] = v
    return ch


@pytest.fixture(scope="session")
def geo_cfg():
    return GeometryConfig()


@pytest.fixture(scope="session")
def palate(geo_cfg):
    return default_palate(geo_cfg.palate_stations, geo_cfg.tract_length_cm, geo_cfg)
