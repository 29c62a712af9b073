"""LF-model glottal flow derivative plus aspiration noise.

One period on phase t in [0,1): an exponentially growing sinusoid
E(t) = E0 e^(alpha t) sin(pi t / tp) up to the closure instant te, then an
exponential return phase that decays to exactly zero at the period end.
epsilon is solved per shape so the period integrates to zero net flow
change; E0 is chosen so E(te) = -Ee.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import butter, lfilter

from .config import GlottalConfig
from .errors import ConvergenceFailure


@dataclass
class GlottalControls:
    f0: float = 140.0
    tenseness: float = 0.6
    voiced: bool = True

    def clamped(self) -> "GlottalControls":
        return GlottalControls(
            f0=float(np.clip(self.f0, 20.0, 1000.0)),
            tenseness=float(np.clip(self.tenseness, 0.0, 1.0)),
            voiced=bool(self.voiced),
        )


@dataclass(frozen=True)
class LFShape:
    """Timing and shape constants of one LF period (phase units)."""

    tp: float
    te: float
    alpha: float
    epsilon: float
    e0: float
    ee: float = 1.0


def _open_integral(alpha, omega, t):
    # antiderivative of e^(alpha t) sin(omega t)
    return math.exp(alpha * t) * (alpha * math.sin(omega * t) - omega * math.cos(omega * t)) \
        / (alpha * alpha + omega * omega)


def lf_shape(controls: GlottalControls, cfg: GlottalConfig | None = None) -> LFShape:
    """Map tenseness to LF timing and solve the return-phase constant.

    tp/te interpolate between the breathy and pressed presets; higher
    tenseness means later, sharper closure (te rises toward the pressed
    value as tenseness falls, so the monotone rule is te decreasing in
    tenseness). alpha grows with tenseness, within the window that keeps
    the waveform maximum at te and the open-phase integral positive.
    """
    cfg = cfg or GlottalConfig()
    st = controls.clamped()
    s = st.tenseness
    tp = cfg.breathy_tp + (cfg.pressed_tp - cfg.breathy_tp) * s
    te = cfg.breathy_te + (cfg.pressed_te - cfg.breathy_te) * s
    alpha = cfg.alpha_lo + cfg.alpha_slope * s
    omega = math.pi / tp

    ee = 1.0
    e0 = -ee / (math.exp(alpha * te) * math.sin(omega * te))
    a_open = e0 * (_open_integral(alpha, omega, te) - _open_integral(alpha, omega, 0.0))

    # balance: the return phase must remove a_open of flow over (te, 1)
    tr = 1.0 - te
    target = a_open / ee
    if not (0.0 < target < tr / 2.0):
        raise ConvergenceFailure(
            f"open-phase area {a_open:g} not balanceable over return span {tr:g}"
        )

    def effective_ta(eps):
        s_ = math.exp(-eps * tr)
        return 1.0 / eps - tr * s_ / (1.0 - s_)

    lo, hi = 1e-3, 1e6
    eps = lo
    for _ in range(cfg.eps_max_iter):
        eps = 0.5 * (lo + hi)
        f = effective_ta(eps) - target
        if abs(f) < cfg.eps_tol:
            break
        if f > 0:
            lo = eps
        else:
            hi = eps
    else:
        raise ConvergenceFailure("epsilon bisection hit the iteration cap")
    return LFShape(tp=tp, te=te, alpha=alpha, epsilon=eps, e0=e0, ee=ee)


def lf_waveform(shape: LFShape, phases: np.ndarray) -> np.ndarray:
    """Vectorized LF flow derivative at the given phases in [0,1)."""
    t = np.asarray(phases, dtype=float)
    omega = math.pi / shape.tp
    tr = 1.0 - shape.te
    s_ = math.exp(-shape.epsilon * tr)
    open_part = shape.e0 * np.exp(shape.alpha * t) * np.sin(omega * t)
    ret = np.exp(-shape.epsilon * (t - shape.te))
    ret_part = -shape.ee * (ret - s_) / (1.0 - s_)
    return np.where(t <= shape.te, open_part, ret_part)


def lf_sample(shape: LFShape, phase: float) -> float:
    return float(lf_waveform(shape, np.array([phase % 1.0]))[0])


class GlottalSource:
    """Block generator owning the phase accumulator and noise state.

    Single-threaded per instance; safe to move between threads between
    blocks. All randomness comes from the injected generator so renders
    are reproducible from the seed.
    """

    def __init__(self, cfg: GlottalConfig | None = None, rng=None, sr: int = 96000):
        self.cfg = cfg or GlottalConfig()
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self.phase = 0.0
        self._sr = None
        self._ba = None
        self._zi = None
        self._set_sr(sr)

    def _set_sr(self, sr):
        if sr == self._sr:
            return
        self._sr = sr
        wn = min(self.cfg.aspiration_lp_hz / (sr / 2.0), 0.99)
        self._ba = butter(2, wn)
        self._zi = np.zeros(2)

    def excitation_block(self, controls: GlottalControls, shape: LFShape, n: int,
                         sr: int | None = None, noise_gain: float | None = None,
                         voiced_gain: float | None = None) -> np.ndarray:
        """n excitation samples at rate sr.

        Aspiration gain defaults to the config rule 0.2 (1 - tenseness);
        the noise is low-passed, clipped to [-1, 1], and modulated toward
        the open phase. voiced_gain, when given, crossfades the LF part
        instead of the hard voiced gate (the engine feeds its smoothed
        gate through here to avoid clicks).
        """
        if n <= 0:
            raise ValueError("n must be positive")
        st = controls.clamped()
        if sr is not None:
            self._set_sr(sr)
        if noise_gain is None:
            noise_gain = self.cfg.aspiration_gain * (1.0 - st.tenseness)

        phases = (self.phase + np.arange(n) * (st.f0 / self._sr)) % 1.0
        self.phase = float((self.phase + n * st.f0 / self._sr) % 1.0)

        gate = (1.0 if st.voiced else 0.0) if voiced_gain is None else float(voiced_gain)

        out = np.zeros(n)
        if gate > 0.0:
            out = gate * lf_waveform(shape, phases)

        if noise_gain > 0.0:
            b, a = self._ba
            white = self.rng.uniform(-1.0, 1.0, n)
            noise, self._zi = lfilter(b, a, white, zi=self._zi)
            noise = np.clip(noise, -1.0, 1.0)
            if gate > 0.0:
                # stronger breath while the glottis is open
                fl = self.cfg.noise_floor
                mod = fl + (1.0 - fl) * np.sin(
                    np.pi * np.clip(phases / shape.te, 0.0, 1.0)
                )
            else:
                mod = 1.0
            out = out + noise_gain * mod * noise
        return out
