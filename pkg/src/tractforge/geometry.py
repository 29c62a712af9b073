"""Fixed palate and dynamic tongue spline in the mid-sagittal plane.

The palate is a static dome sampled once per session. The tongue is a
cubic smoothing spline through 7 control points built from the wrist and
finger state: an anchor at the glottis, a root point the wrist shapes, and
five finger-pressed regions from velar (thumb) forward to alveolar (pinky).
Heights are in cm above the tract floor datum, x runs glottis to lips.
"""

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline, make_smoothing_spline

from .config import GeometryConfig
from .errors import BadDimension, OutOfDomain, ParseError, TooFewPoints
from .kinematics import ArticulatoryState

K_POINTS = 7
MAD_FLOOR_CM = 0.25


@dataclass
class PalateCurve:
    """Upper tract surface, sampled at uniform stations on [0, length]."""

    x: np.ndarray
    y: np.ndarray
    length: float

    def height(self, xs):
        return np.interp(xs, self.x, self.y)


def default_palate(stations: int, length: float, cfg: GeometryConfig | None = None) -> PalateCurve:
    """Analytic palate dome sampled at `stations` uniform points.

    y(x) = h_end + (h_max - h_end) * sin(pi x / L), where h_end is the
    glottal end height on the back half and the larger lip end height on
    the front half; both halves meet the dome top at mid-palate with zero
    slope, so the profile stays smooth.
    """
    cfg = cfg or GeometryConfig()
    if stations < 8:
        raise BadDimension(f"need at least 8 palate stations, got {stations}")
    if length <= 0:
        raise BadDimension("tract length must be positive")
    x = np.linspace(0.0, length, stations)
    h_end = np.where(x <= length / 2.0, cfg.palate_h_back, cfg.palate_h_front)
    y = h_end + (cfg.palate_h_max - h_end) * np.sin(np.pi * x / length)
    return PalateCurve(x=x, y=np.maximum(y, h_end), length=length)


def palate_from_csv(text: str, stations: int = 64) -> PalateCurve:
    """Palate override: CSV rows `x_cm,y_cm`, strictly increasing x."""
    reader = csv.reader(io.StringIO(text))
    xs, ys = [], []
    for lineno, row in enumerate(reader, start=1):
        if not row or row[0].strip().startswith("x"):
            continue
        try:
            xs.append(float(row[0]))
            ys.append(float(row[1]))
        except (ValueError, IndexError) as e:
            raise ParseError(str(e), line=lineno) from e
    if len(xs) < 2:
        raise ParseError("palate override needs at least 2 points")
    xs = np.array(xs)
    ys = np.array(ys)
    if np.any(np.diff(xs) <= 0):
        raise ParseError("palate x values must be strictly increasing")
    if np.any(ys <= 0):
        raise ParseError("palate heights must be positive")
    length = float(xs[-1])
    grid = np.linspace(0.0, length, stations)
    return PalateCurve(x=grid, y=np.interp(grid, xs, ys), length=length)


@dataclass
class ControlPointSet:
    """K spline inputs (x strictly increasing) with fit weights in (0,1]."""

    x: np.ndarray
    y: np.ndarray
    w: np.ndarray
    palate: PalateCurve | None = None
    # lip taper target past the last point; None means the resting height
    lip_height: float | None = None


@dataclass
class TongueCurve:
    """Fitted lower tract surface, evaluable on [0, length].

    Beyond the last control point the surface tapers linearly toward a
    fixed lip height instead of extrapolating the cubic. residuals holds
    y_k - s(x_k) from the final fit, weights the post-rejection weights.
    """

    spline: object
    length: float
    x_last: float
    y_at_last: float
    taper_height: float
    residuals: np.ndarray
    weights: np.ndarray
    palate: PalateCurve | None = None
    # fraction of the remaining span over which the taper reaches its
    # target; the rest runs flat so rounding forms a tube, not a point
    taper_ramp: float = 1.0

    def evaluate(self, xs):
        xs = np.asarray(xs, dtype=float)
        if np.any(xs < -1e-9) or np.any(xs > self.length + 1e-9):
            raise OutOfDomain(f"stations must lie in [0, {self.length}]")
        y = np.asarray(self.spline(np.minimum(xs, self.x_last)), dtype=float)
        past = xs > self.x_last
        if np.any(past):
            span = max(self.length - self.x_last, 1e-9)
            u = (xs[past] - self.x_last) / (span * self.taper_ramp)
            u = np.minimum(u, 1.0)
            y[past] = self.y_at_last * (1.0 - u) + self.taper_height * u
        y = np.maximum(y, 0.0)
        if self.palate is not None:
            y = np.minimum(y, self.palate.height(xs))
        return y


def evaluate(curve: TongueCurve, stations):
    return curve.evaluate(stations)


def control_points(state: ArticulatoryState, palate: PalateCurve,
                   cfg: GeometryConfig | None = None) -> ControlPointSet:
    """Articulatory state to 7 spline control points.

    The wrist sets a tongue-body hump: theta slides its center between the
    velar and palato-alveolar regions and (1 - r) lifts it toward the
    palate, while r opens the jaw and retracts the tongue so the whole
    pharyngeal column narrows.
    Fingers press their regional points toward the palate with overshoot
    and drag their neighbours along, so a full press clamps flat against
    the palate while a partial press leaves a narrow channel.
    """
    cfg = cfg or GeometryConfig()
    st = state.clamped()
    L = palate.length

    xs = np.array(cfg.point_frac, dtype=float) * L
    xs[1] = (cfg.point_frac[1] + cfg.root_shift_frac * st.theta) * L
    h = np.array(cfg.rest_heights, dtype=float)
    pal = palate.height(xs)

    # jaw opening flattens the oral points, then retraction narrows the
    # pharyngeal column: back points blend toward a constant gap below
    # the dome, fading out frontward. Points only rise, never drop.
    h[2:] *= 1.0 - cfg.jaw_drop * st.r
    blend = np.array(cfg.pharynx_blend, dtype=float)
    lift = np.maximum(pal - cfg.pharynx_gap_cm - h, 0.0)
    h += st.r * blend * lift

    # tongue-body hump from the wrist
    lo, hi = cfg.hump_lo_frac, cfg.hump_hi_frac
    x_body = (lo + (hi - lo) * (st.theta + 1.0) / 2.0) * L
    rest_body = float(np.interp(x_body, xs, h))
    peak = cfg.body_reach * (1.0 - st.r) * (palate.height(x_body) - rest_body)
    sigma = cfg.hump_sigma_frac * L
    h[1:] += peak * np.exp(-((xs[1:] - x_body) ** 2) / (2.0 * sigma * sigma))

    # finger presses with neighbour coupling
    e = st.fingers
    coup = e.copy()
    coup[:-1] += cfg.press_coupling * e[1:]
    coup[1:] += cfg.press_coupling * e[:-1]
    coup = np.clip(coup, 0.0, 1.0)
    press = cfg.press_overshoot * coup
    h[2:] += press * (pal[2:] - h[2:])
    h[1] += cfg.press_overshoot * cfg.press_coupling * e[0] * (pal[1] - h[1])

    h = np.clip(h, 0.0, pal)

    # lip rounding: wrist back with a closed jaw raises the taper target
    round_amt = math.tanh(cfg.lip_round_rate * (1.0 - st.r) * max(0.0, -st.theta))
    pal_lip = float(palate.height(L))
    lip = cfg.lip_taper_height + round_amt * cfg.lip_round_depth * (
        pal_lip - cfg.lip_taper_height)

    w = np.full(K_POINTS, 0.85)
    w[0] = 0.9
    w[2:] = cfg.weight_rest + cfg.weight_gain * coup
    return ControlPointSet(x=xs, y=h, w=w, palate=palate, lip_height=lip)


def _penalty_matrix(x):
    """K with g^T K g = integral g''^2 for a natural cubic spline on knots x."""
    n = len(x)
    h = np.diff(x)
    q = np.zeros((n, n - 2))
    r = np.zeros((n - 2, n - 2))
    for j in range(1, n - 1):
        q[j - 1, j - 1] = 1.0 / h[j - 1]
        q[j, j - 1] = -1.0 / h[j - 1] - 1.0 / h[j]
        q[j + 1, j - 1] = 1.0 / h[j]
        r[j - 1, j - 1] = (h[j - 1] + h[j]) / 3.0
        if j < n - 2:
            r[j - 1, j] = h[j] / 6.0
            r[j, j - 1] = h[j] / 6.0
    return q @ np.linalg.solve(r, q.T)


def _solve_smoothing(x, y, w, lam):
    """Natural cubic smoothing spline, weighted.

    scipy handles n >= 5; for n == 4 solve the same objective densely
    (Green-Silverman form) and interpolate the smoothed values, which is
    the exact solution for a natural spline.
    """
    if len(x) >= 5:
        return make_smoothing_spline(x, y, w=w, lam=lam)
    kmat = _penalty_matrix(x)
    g = np.linalg.solve(np.diag(w) + lam * kmat, w * y)
    return CubicSpline(x, g, bc_type="natural")


def _hat_diagonal(x, w, lam):
    """Leverages of the smoother: diag of S with g = S y at the knots."""
    smat = np.linalg.solve(np.diag(w) + lam * _penalty_matrix(x), np.diag(w))
    return np.diag(smat).copy()


def fit_spline(points: ControlPointSet, lam: float | None = None,
               cfg: GeometryConfig | None = None) -> TongueCurve:
    """Robust smoothing spline through the control points.

    Minimizes sum w_k (y_k - s(x_k))^2 + lam * integral s''^2 (lam in the
    caller scale, converted by cfg.lam_scale). One reweighting pass: points
    whose residual exceeds tau_out robust standard deviations get a Tukey
    biweight cut, then the fit repeats once. Evaluation clamps into
    [0, palate] when the point set carries its palate.
    """
    cfg = cfg or GeometryConfig()
    if lam is None:
        lam = cfg.smoothing
    if lam < 0:
        raise ValueError("lam must be >= 0")
    x = np.asarray(points.x, dtype=float)
    y = np.asarray(points.y, dtype=float)
    w = np.asarray(points.w, dtype=float).copy()
    if len(x) < 4:
        raise TooFewPoints(f"need at least 4 control points, got {len(x)}")
    if np.any(np.diff(x) <= 0):
        raise ValueError("control point x must be strictly increasing")

    lam_eff = lam * cfg.lam_scale
    sp = _solve_smoothing(x, y, w, lam_eff)
    resid = y - sp(x)

    # High-leverage points (endpoints especially) drag the fit with them,
    # so their raw residuals under-report how wild they are: studentize
    # by the smoother diagonal first. The scale uses the lower quartile
    # rather than the MAD because a wild point smears residue onto its
    # neighbours, and on 7 points that can be half of them; 0.3186 makes
    # the quartile consistent for normal errors. The absolute floor keeps
    # legitimate sharp gestures (scaled residuals under a quarter cm)
    # from ever reading as outliers against a near-perfect fit.
    hat = _hat_diagonal(x, w, lam_eff)
    stud = resid / np.sqrt(np.maximum(1.0 - hat, 1e-6))
    dev = np.abs(stud - np.median(stud))
    scale = max(np.quantile(dev, 0.25) / 0.3186, MAD_FLOOR_CM)
    u = np.abs(stud) / (cfg.tau_out * scale)
    keep = u < 1.0
    if not np.all(keep):
        # biweight falls to zero at the cut; floor keeps the system posed
        w = np.where(keep, w, 1e-6)
        sp = _solve_smoothing(x, y, w, lam_eff)
        resid = y - sp(x)

    length = points.palate.length if points.palate is not None else float(x[-1])
    y_last = float(sp(x[-1]))
    if points.lip_height is not None:
        taper = max(points.lip_height, 0.0)
    else:
        taper = min(cfg.lip_taper_height, y_last)
    return TongueCurve(
        spline=sp,
        length=length,
        x_last=float(x[-1]),
        y_at_last=y_last,
        taper_height=taper,
        residuals=resid,
        weights=w,
        palate=points.palate,
        taper_ramp=cfg.lip_ramp_frac,
    )


def roughness(curve: TongueCurve, n: int = 512) -> float:
    """Integrated squared second derivative over the fitted span."""
    xs = np.linspace(0.0, curve.x_last, n)
    d2 = curve.spline.derivative(2)(xs)
    return float(np.trapezoid(d2 * d2, xs))
