"""Tunable constants for geometry, source, waveguide and engine.

All numbers that shape the instrument live here so experiments stay out of
the algorithm code. Frozen dataclasses: build a new config to change one.
"""

from dataclasses import dataclass, field


@dataclass(frozen=True)
class GeometryConfig:
    tract_length_cm: float = 17.5
    palate_stations: int = 64

    # palate dome, highest at mid-palate, sine fall-off to each end with
    # its own end height (C1 at the join since both halves peak there).
    # The glottal end must stay high enough that an open tract's first
    # stations sit above the fricative area threshold, or every state
    # would read as a permanent constriction; the lip end must be higher
    # still or the mouth cannot open wide enough for the low vowels.
    palate_h_back: float = 0.85
    palate_h_front: float = 1.9
    palate_h_max: float = 2.5

    # smoothing weight exposed to callers; lam_scale converts it to the
    # solver's internal units (cm^3). With the default 0.05 a single wild
    # control point is detected and rejected while consonant ridges built
    # from coupled neighbours survive.
    smoothing: float = 0.05
    lam_scale: float = 10.0
    tau_out: float = 2.5  # robust cut in scaled residual units

    g_min: float = 0.1    # required neutral gap under the palate, cm
    d_fric: float = 0.15  # point gap that counts as a fricative-grade closure
    d_stop: float = 0.0   # point gap that counts as contact

    # control point stations as fractions of tract length:
    # glottis anchor, tongue root, then thumb/index/middle/ring/pinky
    # regions ordered back to front.
    point_frac: tuple = (0.0, 0.13, 0.34, 0.48, 0.62, 0.75, 0.88)
    rest_heights: tuple = (0.10, 0.45, 0.60, 0.55, 0.50, 0.45, 0.30)

    # a raised finger presses its point toward the palate with overshoot
    # so full elevation clamps hard against it, and drags its neighbours
    # along; this widens stop closures relative to fricative channels.
    press_overshoot: float = 2.0
    press_coupling: float = 0.35

    # wrist mapping: r retracts the tongue into the pharynx and opens the
    # jaw, (1 - r) lifts a body hump that theta slides front/back.
    # Retraction pulls each back point toward a constant gap below the
    # dome, fading out by the palatal region, so the narrowing spans the
    # whole pharyngeal column (a broad ridge the smoothing fit tracks;
    # a raise at the root point alone would be cut as an outlier).
    body_reach: float = 0.72
    pharynx_gap_cm: float = 0.62
    pharynx_blend: tuple = (0.55, 1.0, 0.9, 0.3, 0.0, 0.0, 0.0)
    jaw_drop: float = 0.55

    # wrist-back with a closed jaw rounds the lips: the taper target
    # rises toward the palate, saturating so nearby states sound alike
    lip_round_rate: float = 2.0
    lip_round_depth: float = 0.84
    hump_lo_frac: float = 0.30
    hump_hi_frac: float = 0.75
    hump_sigma_frac: float = 0.13
    root_shift_frac: float = 0.02

    # beyond the last control point the surface tapers to a fixed lip
    # height instead of extrapolating the spline; the target is reached
    # within lip_ramp_frac of the remaining span and held flat after,
    # so a rounded mouth forms a short tube rather than a point pinch.
    lip_taper_height: float = 0.15
    lip_ramp_frac: float = 0.30

    # fit weights: pressed fingers become firmer constraints
    weight_rest: float = 0.55
    weight_gain: float = 0.45


@dataclass(frozen=True)
class AreaConfig:
    n_sections: int = 44
    a_stop: float = 0.005  # cm^2, at or below: occluded
    a_fric: float = 0.3    # cm^2, at or below (but above a_stop): fricative


@dataclass(frozen=True)
class GlottalConfig:
    f0_default: float = 140.0
    tenseness_default: float = 0.6

    # timing presets interpolated affinely in tenseness
    breathy_tp: float = 0.45
    breathy_te: float = 0.70
    pressed_tp: float = 0.40
    pressed_te: float = 0.55

    # growth rate of the open-phase sinusoid. The lower end is the
    # smallest value that keeps the waveform maximum at t_e for the
    # breathy preset; the upper end must keep the open-phase integral
    # positive or the return phase cannot balance it.
    alpha_lo: float = 1.3
    alpha_slope: float = 1.7

    eps_tol: float = 1e-10
    eps_max_iter: int = 200

    aspiration_gain: float = 0.2   # scaled by (1 - tenseness)
    aspiration_lp_hz: float = 4000.0
    noise_floor: float = 0.3       # closed-phase share of aspiration


@dataclass(frozen=True)
class WaveguideConfig:
    k_glottis: float = 0.75
    k_lip: float = -0.85
    damping: float = 0.9995  # per junction pass, keeps modes from ringing forever
    turb_low_hz: float = 1000.0
    turb_high_hz: float = 8000.0
    turb_gain: float = 0.25


@dataclass(frozen=True)
class EngineConfig:
    sr: int = 48000
    block: int = 512
    tau_ctl: float = 0.020  # one-pole smoothing of incoming controls, s
    ramp_blocks: int = 1    # reflection coefficient ramp horizon
    exc_gain: float = 0.4
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    area: AreaConfig = field(default_factory=AreaConfig)
    glottal: GlottalConfig = field(default_factory=GlottalConfig)
    waveguide: WaveguideConfig = field(default_factory=WaveguideConfig)


# Wrist positions whose rendered formants sit inside the standard F1/F2
# ranges for the three corner vowels; tuned against the default geometry
# at 44.1 kHz and frozen. Retune if GeometryConfig changes. Fingers stay
# at rest for all three.
VOWEL_PRESETS = {
    "i": {"r": 0.05, "theta": 0.70},
    "a": {"r": 0.95, "theta": -0.25},
    "u": {"r": 0.12, "theta": -0.64},
}

DEFAULT_LAYOUT = {
    "flexion": 15,
    "deviation": 16,
    "fingertips": [2, 5, 8, 11, 14],
}
