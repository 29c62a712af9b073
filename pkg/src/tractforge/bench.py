"""Single-core render benchmark for the real-time budget."""

import time
from dataclasses import dataclass

from .config import EngineConfig
from .engine import VoiceEngine


@dataclass
class BenchResult:
    rendered_s: float
    wall_s: float
    sr: int
    n_sections: int

    @property
    def realtime_factor(self) -> float:
        return self.wall_s / self.rendered_s

    def to_dict(self) -> dict:
        return {
            "rendered_s": self.rendered_s,
            "wall_s": round(self.wall_s, 4),
            "sr": self.sr,
            "n_sections": self.n_sections,
            "realtime_factor": round(self.realtime_factor, 4),
        }


def render_benchmark(seconds: float = 1.0, config: EngineConfig | None = None,
                     seed: int = 0) -> BenchResult:
    """Wall time to render `seconds` of audio, after a warmup block.

    The warmup pays one-time costs (kernel JIT, filter design) that a
    long-running voice never sees again; the steady-state cost is what the
    real-time budget is about.
    """
    cfg = config or EngineConfig()
    engine = VoiceEngine(cfg, seed=seed)
    engine.render(1)

    n_blocks = max(1, round(seconds * cfg.sr / cfg.block))
    t0 = time.perf_counter()
    engine.render(n_blocks)
    wall = time.perf_counter() - t0
    return BenchResult(
        rendered_s=n_blocks * cfg.block / cfg.sr,
        wall_s=wall,
        sr=cfg.sr,
        n_sections=cfg.area.n_sections,
    )
