"""Block renderer tying controls, geometry, excitation and waveguide together.

Per block: consume the latest control snapshot (wait-free mailbox), move
the smoothed control state one one-pole step toward it, rebuild the tongue
spline and area function, retarget the waveguide, then run two waveguide
ticks per output sample and decimate by averaging tick pairs. The tract
therefore ticks at 2 sr, which puts the quarter-wave modes of the default
44-section tube in the right place for a ~17.5 cm tract.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import area as area_mod
from . import geometry, waveguide
from .config import EngineConfig
from .errors import CalibrationMissing
from .glottis import GlottalControls, GlottalSource, lf_shape
from .kinematics import (
    ArticulatoryState,
    frame_to_articulation,
    normalize_frame,
)

TICKS_PER_SAMPLE = 2


@dataclass
class ControlSnapshot:
    articulation: ArticulatoryState = field(default_factory=ArticulatoryState)
    glottal: GlottalControls = field(default_factory=GlottalControls)
    t: float = 0.0


@dataclass
class AudioBlock:
    sr: int
    samples: np.ndarray


@dataclass
class BlockInfo:
    """Per-block diagnostics for the service protocol and trace export."""

    areas: np.ndarray
    constriction: area_mod.Constriction
    rms: float
    t_ms: float


def concat_blocks(blocks) -> np.ndarray:
    return np.concatenate([b.samples for b in blocks]) if blocks else np.zeros(0)


class VoiceEngine:
    """One synthesis voice. Single producer may push controls while a
    single consumer renders; push_control is an atomic reference swap so
    the producer never blocks on the audio side."""

    def __init__(self, config: EngineConfig | None = None, seed: int = 0):
        self.cfg = config or EngineConfig()
        self.sr = self.cfg.sr
        self.block = self.cfg.block
        self.tick_sr = self.sr * TICKS_PER_SAMPLE
        self.seed = seed

        g = self.cfg.geometry
        self.palate = geometry.default_palate(g.palate_stations, g.tract_length_cm, g)

        self._mailbox = None
        self._seen = None

        gl = self.cfg.glottal
        self._target = {
            "r": 0.5, "theta": 0.0,
            "fingers": np.zeros(5),
            "f0": gl.f0_default, "tenseness": gl.tenseness_default,
            "gate": 1.0,
        }
        self._state = {k: (v.copy() if isinstance(v, np.ndarray) else v)
                       for k, v in self._target.items()}

        self.source = GlottalSource(gl, rng=np.random.default_rng([seed, 0]),
                                    sr=self.tick_sr)

        areas = self._areas_for(self._current_articulation())[0]
        self.tract = waveguide.init_state(
            areas, self.cfg.waveguide,
            ticks_per_block=self.block * TICKS_PER_SAMPLE,
            tick_sr=self.tick_sr,
            rng=np.random.default_rng([seed, 1]),
        )
        self._n_blocks = 0

    # ---- control side ----

    def push_control(self, snapshot: ControlSnapshot) -> None:
        """Latest-wins handoff; safe to call from another thread."""
        self._mailbox = snapshot

    def _consume(self) -> None:
        m = self._mailbox
        if m is None or m is self._seen:
            return
        self._seen = m
        art = m.articulation.clamped()
        gl = m.glottal.clamped()
        self._target["r"] = art.r
        self._target["theta"] = art.theta
        self._target["fingers"] = art.fingers
        self._target["f0"] = gl.f0
        self._target["tenseness"] = gl.tenseness
        self._target["gate"] = 1.0 if gl.voiced else 0.0

    def _smooth(self) -> None:
        a = 1.0 - math.exp(-self.block / (self.sr * self.cfg.tau_ctl))
        for key, tgt in self._target.items():
            cur = self._state[key]
            nxt = cur + (tgt - cur) * a
            # snap when close so holds settle exactly (true silence, no denormals)
            if isinstance(nxt, np.ndarray):
                close = np.abs(tgt - nxt) < 1e-4
                nxt[close] = tgt[close]
            elif abs(tgt - nxt) < 1e-4:
                nxt = tgt
            self._state[key] = nxt

    def _current_articulation(self) -> ArticulatoryState:
        s = self._state
        return ArticulatoryState(r=s["r"], theta=s["theta"], fingers=s["fingers"].copy())

    def _areas_for(self, art: ArticulatoryState):
        g = self.cfg.geometry
        pts = geometry.control_points(art, self.palate, g)
        curve = geometry.fit_spline(pts, cfg=g)
        d = area_mod.compute_diameters(self.palate, curve, self.cfg.area.n_sections)
        areas = area_mod.diameters_to_areas(d)
        con = area_mod.detect_constriction(areas, self.cfg.area.a_stop, self.cfg.area.a_fric)
        return areas, con

    # ---- audio side ----

    def render_block(self):
        """Render one block; returns (AudioBlock, BlockInfo)."""
        self._consume()
        self._smooth()

        areas, con = self._areas_for(self._current_articulation())
        waveguide.retarget_areas(self.tract, areas, self.cfg.ramp_blocks,
                                 constriction=con, a_stop=self.cfg.area.a_stop)
        if con.classification == "fricative":
            afr = self.cfg.area.a_fric
            gain = self.cfg.waveguide.turb_gain * (afr - con.area) / afr
            waveguide.set_turbulence(self.tract, con.index, gain)
        else:
            waveguide.set_turbulence(self.tract, -1, 0.0)

        s = self._state
        controls = GlottalControls(f0=s["f0"], tenseness=s["tenseness"], voiced=True)
        shape = lf_shape(controls, self.cfg.glottal)
        noise_gain = self.cfg.glottal.aspiration_gain * (1.0 - s["tenseness"])
        n_ticks = self.block * TICKS_PER_SAMPLE
        exc = self.source.excitation_block(controls, shape, n_ticks,
                                           noise_gain=noise_gain,
                                           voiced_gain=s["gate"])
        exc = exc * self.cfg.exc_gain

        y = waveguide.run_block(self.tract, exc)
        out = 0.5 * (y[0::2] + y[1::2])
        out = np.tanh(out)

        t_ms = self._n_blocks * self.block / self.sr * 1000.0
        self._n_blocks += 1
        rms = float(np.sqrt(np.mean(out * out)))
        return (AudioBlock(sr=self.sr, samples=out),
                BlockInfo(areas=areas, constriction=con, rms=rms, t_ms=t_ms))

    def render(self, n_blocks: int):
        """n blocks as a list of AudioBlock."""
        return [self.render_block()[0] for _ in range(n_blocks)]

    def render_samples(self, n_blocks: int) -> np.ndarray:
        return concat_blocks(self.render(n_blocks))

    def replay(self, frames, calib=None, layout=None, on_block=None):
        """Render recorded gesture frames with zero-order hold.

        Output spans the last frame timestamp rounded up to whole blocks
        (at least one block). Glottal controls stay at their defaults.
        `on_block`, if given, receives the BlockInfo of every block.
        """
        if calib is None:
            raise CalibrationMissing("replay needs a calibration file")
        frames = list(frames)
        times = np.array([f.t for f in frames])
        arts = [frame_to_articulation(normalize_frame(f, calib), layout) for f in frames]

        last_ms = times[-1]
        block_ms = self.block / self.sr * 1000.0
        n_blocks = max(1, int(math.ceil(last_ms / block_ms)))
        blocks = []
        for b in range(n_blocks):
            t_ms = b * block_ms
            idx = int(np.searchsorted(times, t_ms, side="right") - 1)
            idx = max(idx, 0)
            self.push_control(ControlSnapshot(
                articulation=arts[idx],
                glottal=GlottalControls(f0=self.cfg.glottal.f0_default,
                                        tenseness=self.cfg.glottal.tenseness_default,
                                        voiced=True),
                t=t_ms,
            ))
            block, info = self.render_block()
            blocks.append(block)
            if on_block is not None:
                on_block(info)
        return blocks
