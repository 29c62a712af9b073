"""Kelly-Lochbaum waveguide over N cylindrical tube sections.

Two traveling-wave buffers (right = toward lips, left = toward glottis)
scatter at junctions whose coefficients come from neighbouring area ratios:
k_i = (a_i - a_{i+1}) / (a_i + a_{i+1}). One tick is one full scattering
pass; the engine runs two ticks per output sample, so the per-section
transit delay matches a ~17.5 cm tract at audio rates.

Junction update (one-multiply form):
    w     = k (f_in + b_in)
    f_out = f_in - w        = f_in (1 - k) - k b_in
    b_out = b_in + w        = b_in (1 + k) + k f_in
"""

from dataclasses import dataclass, field

import numba
import numpy as np
from scipy.signal import butter, lfilter

from .config import AreaConfig, WaveguideConfig

# coefficients snap to this grid: a uniform rescale of the area function
# perturbs the inputs by double rounding, and the raw quotient would jitter
# in its last bits; the snap absorbs that so scaled tracts are bit-equal.
# 1e-9 in a reflection coefficient is far below audibility.
K_GRID = 1e-9


def reflection_coefficients(a: np.ndarray) -> np.ndarray:
    """Junction coefficients from adjacent area ratios, in [-1, 1].

    A 0/0 junction (inside a sealed stretch) maps to 0: transmission
    blocking at a closure is handled by the retarget rule at the closure
    boundary, where the formula itself already gives +1.
    """
    a = np.asarray(a, dtype=float)
    num = a[:-1] - a[1:]
    den = a[:-1] + a[1:]
    k = np.divide(num, den, out=np.zeros_like(num), where=den > 0)
    k = np.round(k / K_GRID) * K_GRID
    return np.clip(k, -1.0, 1.0)


def junction_scatter(f_in: float, b_in: float, k: float):
    """Scatter one junction; returns (f_out, b_out)."""
    w = k * (f_in + b_in)
    return f_in - w, b_in + w


@dataclass
class TractState:
    """Wave buffers plus the coefficient ramp and turbulence hookup.

    Owned by exactly one rendering context; hand it between threads only
    between blocks. Reproducible given the seed of `rng`.
    """

    right: np.ndarray
    left: np.ndarray
    k_cur: np.ndarray
    k_tgt: np.ndarray
    ramp: np.ndarray  # int64[1], ticks left on the linear coefficient ramp
    k_glottis: float
    k_lip: float
    damping: float
    ticks_per_block: int
    tick_sr: float
    turb_site: int = -1
    turb_gain: float = 0.0
    rng: object = None
    _turb_ba: tuple = None
    _turb_zi: np.ndarray = None
    n_ticks: int = field(default=0)

    @property
    def n(self) -> int:
        return len(self.right)


def init_state(areas: np.ndarray, cfg: WaveguideConfig | None = None,
               ticks_per_block: int = 1024, tick_sr: float = 96000.0,
               rng=None) -> TractState:
    cfg = cfg or WaveguideConfig()
    areas = np.asarray(areas, dtype=float)
    n = len(areas)
    k = reflection_coefficients(areas)
    lo = min(cfg.turb_low_hz / (tick_sr / 2), 0.95)
    hi = min(cfg.turb_high_hz / (tick_sr / 2), 0.98)
    ba = butter(2, [lo, hi], btype="band")
    return TractState(
        right=np.zeros(n),
        left=np.zeros(n),
        k_cur=k.copy(),
        k_tgt=k.copy(),
        ramp=np.zeros(1, dtype=np.int64),
        k_glottis=cfg.k_glottis,
        k_lip=cfg.k_lip,
        damping=cfg.damping,
        ticks_per_block=ticks_per_block,
        tick_sr=tick_sr,
        rng=rng if rng is not None else np.random.default_rng(0),
        _turb_ba=ba,
        _turb_zi=np.zeros(4),
    )


def retarget_areas(state: TractState, areas: np.ndarray, blocks_to_reach: int = 1,
                   constriction=None, a_stop: float | None = None) -> None:
    """Point the coefficient ramp at a new area function.

    Coefficients move linearly over blocks_to_reach blocks of ticks. When
    the constriction is occluded, the junction entering the sealed zone is
    pinned to +1 so no excitation transmits past it even if smoothing left
    the minimum area slightly above zero.
    """
    areas = np.asarray(areas, dtype=float)
    k = reflection_coefficients(areas)
    if constriction is not None and constriction.classification == "occluded":
        if a_stop is None:
            a_stop = AreaConfig().a_stop
        z = constriction.index
        while z > 0 and areas[z - 1] <= a_stop:
            z -= 1
        if z > 0:
            k[z - 1] = 1.0
    state.k_tgt = k
    state.ramp[0] = max(1, blocks_to_reach * state.ticks_per_block)


def set_turbulence(state: TractState, site: int, gain: float) -> None:
    state.turb_site = int(site)
    state.turb_gain = float(gain)


@numba.njit(cache=True)
def _kernel(right, left, k_cur, k_tgt, ramp, kg, kl, damp, exc, turb, site, gain, out):
    n = right.shape[0]
    for t in range(exc.shape[0]):
        if ramp[0] > 0:
            inv = 1.0 / ramp[0]
            for j in range(n - 1):
                k_cur[j] += (k_tgt[j] - k_cur[j]) * inv
            ramp[0] -= 1
        new_r0 = left[0] * kg + exc[t]
        new_ln = right[n - 1] * kl
        prev_r = right[0]
        right[0] = new_r0 * damp
        for j in range(1, n):
            w = k_cur[j - 1] * (prev_r + left[j])
            out_r = prev_r - w
            out_l = left[j] + w
            prev_r = right[j]
            right[j] = out_r * damp
            left[j - 1] = out_l * damp
        left[n - 1] = new_ln * damp
        if site >= 0 and gain != 0.0:
            flow = right[site] + left[site]
            if flow > 2.0:
                flow = 2.0
            elif flow < -2.0:
                flow = -2.0
            inj = 0.5 * gain * turb[t] * flow
            right[site] += inj
            left[site] += inj
        out[t] = right[n - 1]
    return out


def _reference_tick(right, left, k, kg, kl, damp, exc):
    """Plain numpy mirror of one kernel tick, used to cross-check it."""
    n = len(right)
    jr = np.empty(n)
    jl = np.empty(n)
    jr[0] = left[0] * kg + exc
    w = k * (right[:-1] + left[1:])
    jr[1:] = right[:-1] - w
    jl[:-1] = left[1:] + w
    jl[-1] = right[-1] * kl
    new_right = jr * damp
    new_left = jl * damp
    return new_right, new_left, new_right[-1]


def run_block(state: TractState, exc: np.ndarray) -> np.ndarray:
    """Advance one tick per excitation sample; returns lip output per tick.

    Turbulence noise (band-passed white, clipped) is injected at the
    constriction site scaled by the gain and the instantaneous local flow.
    """
    exc = np.asarray(exc, dtype=float)
    if state.turb_site >= 0 and state.turb_gain != 0.0:
        b, a = state._turb_ba
        white = state.rng.uniform(-1.0, 1.0, len(exc))
        turb, state._turb_zi = lfilter(b, a, white, zi=state._turb_zi)
        turb = np.clip(turb, -1.0, 1.0)
    else:
        turb = np.zeros(len(exc))
    out = np.empty(len(exc))
    _kernel(state.right, state.left, state.k_cur, state.k_tgt, state.ramp,
            state.k_glottis, state.k_lip, state.damping, exc, turb,
            state.turb_site, state.turb_gain, out)
    state.n_ticks += len(exc)
    return out


def step(state: TractState, excitation: float) -> float:
    """One tick. Same path as run_block so behaviour cannot diverge."""
    return float(run_block(state, np.array([excitation]))[0])
