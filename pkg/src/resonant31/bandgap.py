"""Dispersion sweeps over the Brillouin triangle, resonant curves and bandgap widths."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from skimage import measure

from .bnf import quartic_coeffs
from .errors import Rejection
from .freq import FrequencyPair, amplitudes_to_chart, frequencies_nonresonant, frequencies_resonant
from .modal import M_POINT, SQRT3, X_POINT, HoneycombParams, diagonalize, honeycomb_system, in_triangle
from .portrait import ZoneLabel

PI = math.pi
LEG_GX = 4.0 * PI / 3.0
LEG_XM = 2.0 * PI / 3.0
LEG_MG = 2.0 * PI / SQRT3
PERIMETER = LEG_GX + LEG_XM + LEG_MG
S_X = LEG_GX
S_M = LEG_GX + LEG_XM
GAMMA_NUDGE = 1e-7
TOUCH_TOL = 2e-4
MERGE_GAP = 0.05


@dataclass(frozen=True)
class Thresholds:
    """Smallness parameter and the two constants of the regime conditions."""

    eps: float = 6.5e-4
    C1: float = 5e-4
    C2: float = 2.5e-3

    def __post_init__(self):
        if not (self.eps > 0 and self.C1 > 0 and self.C2 > 0):
            raise Rejection("bad_thresholds", repr(self))

    def regime(self, sigma: float) -> str:
        edge = self.C1 * math.sqrt(abs(sigma))
        if self.eps <= edge:
            return "nonresonant"
        if self.eps <= self.C2:
            return "resonant"
        return "rejected"


# ---------------------------------------------------------------- boundary path

def boundary_point(s: float) -> tuple:
    """Wave numbers at arc length s along Gamma -> X -> M -> Gamma."""
    if not 0.0 <= s <= PERIMETER:
        raise Rejection("outside_path", f"s={s!r}")
    if s <= S_X:
        return (s, 0.0)
    if s <= S_M:
        t = (s - S_X) / LEG_XM
        return (X_POINT[0] + t * (M_POINT[0] - X_POINT[0]), t * M_POINT[1])
    t = (s - S_M) / LEG_MG
    return ((1.0 - t) * M_POINT[0], (1.0 - t) * M_POINT[1])


def boundary_path(n: int = 600, nudge: float = GAMMA_NUDGE) -> np.ndarray:
    """Arc lengths of n uniform samples; both Gamma endpoints are moved in by ``nudge``
    since the plate stiffness vanishes there."""
    s = np.linspace(0.0, PERIMETER, n)
    s[0], s[-1] = nudge, PERIMETER - nudge
    return s


# ---------------------------------------------------------------- linear frequencies on grids

def linear_omegas(Mtilde: float, Ktilde: float, k1, k2, D12=0.0815599, D22=12.48, D66=0.0000247357,
                  mass_model: str = "total"):
    """Vectorized (omega_-, omega_+) of the honeycomb cell at arrays of wave numbers."""
    k1 = np.asarray(k1, dtype=float)
    k2 = np.asarray(k2, dtype=float)
    mh = 0.5 * SQRT3 * np.sinc(0.5 * k1 / PI) * np.sinc(0.25 * (k1 + SQRT3 * k2) / PI)
    kh = mh * (k1 ** 4 + 2.0 * k1 ** 2 * k2 ** 2 * (D12 + 2.0 * D66) + k2 ** 4 * D22)
    m11 = mh + Mtilde if mass_model == "total" else mh
    m12 = m22 = Mtilde
    a = m11 * m22 - m12 * m12
    bb = kh * m22 + Ktilde * m11
    root = np.sqrt((kh * m22 - Ktilde * m11) ** 2 + 4.0 * kh * Ktilde * m12 * m12)
    lp = (bb + root) / (2.0 * a)
    lm = 2.0 * kh * Ktilde / (bb + root)
    return np.sqrt(lm), np.sqrt(lp)


def sigma_field(Mtilde: float, Ktilde: float, k1, k2, **kw):
    wm, wp = linear_omegas(Mtilde, Ktilde, k1, k2, **kw)
    return wp - 3.0 * wm


def _triangle_mask(K1, K2):
    return (K2 >= -1e-12) & (K2 <= K1 / SQRT3 + 1e-12) & (K2 <= SQRT3 * (LEG_GX - K1) + 1e-12)


def resonant_curves(Mtilde: float, Ktilde: float, grid: int = 400, **kw) -> list:
    """Polylines (k1, k2) of sigma = 0 inside the Brillouin triangle."""
    k1 = np.linspace(0.0, LEG_GX, grid)
    k2 = np.linspace(0.0, M_POINT[1], grid)
    K1, K2 = np.meshgrid(k1, k2, indexing="ij")
    sig = sigma_field(Mtilde, Ktilde, np.maximum(K1, 1e-9), K2, **kw)
    mask = _triangle_mask(K1, K2)
    curves = []
    for c in measure.find_contours(sig, 0.0, mask=mask):
        pts = np.column_stack([np.interp(c[:, 0], np.arange(grid), k1), np.interp(c[:, 1], np.arange(grid), k2)])
        if len(pts) >= 2:
            curves.append(pts)
    return curves


def boundary_intersections(Mtilde: float, Ktilde: float, n: int = 4000, touch_tol: float = TOUCH_TOL,
                           **kw) -> list:
    """Arc lengths where a resonant curve meets the boundary path.

    Sign changes of sigma count as crossings; local minima of |sigma| with
    |sigma| < touch_tol * omega_+ count as tangencies (for instance at the
    corner X when sigma(X) vanishes).  Events closer than MERGE_GAP merge.
    """
    s = boundary_path(n)
    pts = np.array([boundary_point(v) for v in s])
    wm, wp = linear_omegas(Mtilde, Ktilde, pts[:, 0], pts[:, 1], **kw)
    sig = wp - 3.0 * wm
    events = []
    for i in np.nonzero(np.sign(sig[1:]) != np.sign(sig[:-1]))[0]:
        events.append(s[i] - sig[i] * (s[i + 1] - s[i]) / (sig[i + 1] - sig[i]))
    a = np.abs(sig)
    for i in range(1, n - 1):
        if a[i] <= a[i - 1] and a[i] <= a[i + 1] and a[i] < touch_tol * wp[i]:
            events.append(s[i])
    events.sort()
    merged = []
    for e in events:
        if not merged or e - merged[-1] > MERGE_GAP:
            merged.append(e)
    return merged


def curve_R(mt_range=(0.05, 0.3), kt_range=(1.0, 20.0), grid: int = 200, **kw) -> list:
    """Polylines (Mtilde, Ktilde) along which sigma(X) = 0."""
    mt = np.linspace(*mt_range, grid)
    kt = np.linspace(*kt_range, grid)
    MT, KT = np.meshgrid(mt, kt, indexing="ij")
    sig = np.empty_like(MT)
    for i, m in enumerate(mt):
        sig[i] = sigma_field(m, kt, X_POINT[0], X_POINT[1], **kw)
    out = []
    for c in measure.find_contours(sig, 0.0):
        out.append(np.column_stack([np.interp(c[:, 0], np.arange(grid), mt), np.interp(c[:, 1], np.arange(grid), kt)]))
    return out


def sigma_at_X(Mtilde: float, Ktilde: float, **kw) -> float:
    return float(sigma_field(Mtilde, Ktilde, X_POINT[0], X_POINT[1], **kw))


# ---------------------------------------------------------------- dispersion sweep

@dataclass(frozen=True)
class SweepConfig:
    Mtilde: float
    Ktilde: float
    N3: float
    a_minus: float
    a_plus: float
    thresholds: Thresholds = field(default_factory=Thresholds)
    mass_model: str = "total"
    area_term: bool = True


@dataclass(frozen=True)
class DispersionPoint:
    s: float
    k1: float
    k2: float
    w_lin: tuple
    w_nl: FrequencyPair | None
    regime: str
    zone: ZoneLabel | None = None
    reason: str = ""

    def row(self) -> dict:
        nl = self.w_nl
        return {
            "s": self.s, "k1": self.k1, "k2": self.k2,
            "w_minus_lin": self.w_lin[0], "w_plus_lin": self.w_lin[1],
            "w_minus_nl": nl.w_minus_nlr if nl else math.nan,
            "w_plus_nl": nl.w_plus_nlr if nl else math.nan,
            "regime": self.regime, "zone": self.zone.tag if self.zone else "",
        }


def dispersion_point(cfg: SweepConfig, s: float) -> DispersionPoint:
    k1, k2 = boundary_point(s)
    hp = HoneycombParams(cfg.Mtilde, cfg.Ktilde, k1, k2, N3=cfg.N3, mass_model=cfg.mass_model)
    m = diagonalize(honeycomb_system(hp))
    regime = cfg.thresholds.regime(m.sigma)
    q = quartic_coeffs(m, 0.0, cfg.N3)
    if regime == "nonresonant":
        fp = frequencies_nonresonant(q, m, cfg.a_minus, cfg.a_plus)
        return DispersionPoint(s, k1, k2, m.omegas, fp, regime)
    if regime == "rejected":
        return DispersionPoint(s, k1, k2, m.omegas, None, regime, reason="eps_above_C2")
    try:
        E, I2, reg, p, summ = amplitudes_to_chart(cfg.a_minus, cfg.a_plus, q, m)
        fp = frequencies_resonant(p, E, reg, m.omega_minus, summ, area_term=cfg.area_term)
    except Rejection as exc:
        return DispersionPoint(s, k1, k2, m.omegas, None, "rejected", reason=exc.reason)
    return DispersionPoint(s, k1, k2, m.omegas, fp, "resonant", summ.zone)


def _point_task(args):
    cfg, s = args
    return dispersion_point(cfg, s)


def dispersion_sweep(cfg: SweepConfig, n: int = 600, workers: int = 1) -> list:
    """Linear and nonlinear dispersion at n arc-length samples of the boundary path."""
    s = boundary_path(n)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(_point_task, [(cfg, v) for v in s], chunksize=max(1, n // (4 * workers))))
    return [dispersion_point(cfg, v) for v in s]


# ---------------------------------------------------------------- bandgap

@dataclass(frozen=True)
class Extremum:
    value: float
    s: float
    k: tuple
    regime: str = "linear"


@dataclass(frozen=True)
class BandgapReport:
    acoustic_max_lin: Extremum
    optical_min_lin: Extremum
    acoustic_max_nl: Extremum
    optical_min_nl: Extremum
    width_lin: float
    width_nl: float
    pct_increment: float
    case_tag: str
    x_regime: str
    rejected: int

    def as_dict(self) -> dict:
        return asdict(self)


def _golden(f, a: float, c: float, maximize: bool, iters: int = 60):
    g = (math.sqrt(5.0) - 1.0) / 2.0
    sign = -1.0 if maximize else 1.0
    x1, x2 = c - g * (c - a), a + g * (c - a)
    f1, f2 = sign * f(x1), sign * f(x2)
    for _ in range(iters):
        if f1 < f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - g * (c - a)
            f1 = sign * f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (c - a)
            f2 = sign * f(x2)
        if c - a < 1e-10:
            break
    return (x1, sign * f1) if f1 < f2 else (x2, sign * f2)


def _refine(cfg: SweepConfig, pts: list, idx: int, which: int, maximize: bool) -> Extremum:
    s = [p.s for p in pts]
    lo = s[max(idx - 1, 0)]
    hi = s[min(idx + 1, len(s) - 1)]

    def f(v):
        p = dispersion_point(cfg, v)
        if p.w_nl is None:
            return -math.inf if maximize else math.inf
        return (p.w_nl.w_minus_nlr, p.w_nl.w_plus_nlr)[which]

    best_s, best = _golden(f, lo, hi, maximize)
    base = pts[idx]
    base_val = (base.w_nl.w_minus_nlr, base.w_nl.w_plus_nlr)[which]
    if (maximize and base_val >= best) or (not maximize and base_val <= best):
        best_s, best = base.s, base_val
    fin = dispersion_point(cfg, best_s)
    return Extremum(best, best_s, (fin.k1, fin.k2), fin.regime)


def bandgap_report(cfg: SweepConfig, pts: list | None = None, n: int = 600, workers: int = 1,
                   far_from_x: float = 0.1) -> BandgapReport:
    """Linear and nonlinear gaps between the acoustic maximum and the optical minimum."""
    if pts is None:
        pts = dispersion_sweep(cfg, n, workers)
    wl_m = np.array([p.w_lin[0] for p in pts])
    wl_p = np.array([p.w_lin[1] for p in pts])
    i_am, i_om = int(np.argmax(wl_m)), int(np.argmin(wl_p))
    # the linear acoustic maximum is at the corner X, which the uniform grid may miss
    xk = X_POINT
    wx = linear_omegas(cfg.Mtilde, cfg.Ktilde, xk[0], xk[1], mass_model=cfg.mass_model)
    am_lin = Extremum(float(wx[0]), S_X, xk) if wx[0] >= wl_m[i_am] else Extremum(float(wl_m[i_am]), pts[i_am].s,
                                                                                    (pts[i_am].k1, pts[i_am].k2))
    om_lin = Extremum(float(wl_p[i_om]), pts[i_om].s, (pts[i_om].k1, pts[i_om].k2))
    ok = [i for i, p in enumerate(pts) if p.w_nl is not None]
    if not ok:
        raise Rejection("empty_sweep", "every point rejected")
    i_nm = max(ok, key=lambda i: pts[i].w_nl.w_minus_nlr)
    i_np = min(ok, key=lambda i: pts[i].w_nl.w_plus_nlr)
    am_nl = _refine(cfg, pts, i_nm, 0, True)
    xp = dispersion_point(cfg, S_X)
    if xp.w_nl is not None and xp.w_nl.w_minus_nlr > am_nl.value:
        am_nl = Extremum(xp.w_nl.w_minus_nlr, S_X, (xp.k1, xp.k2), xp.regime)
    om_nl = _refine(cfg, pts, i_np, 1, False)
    width_lin = om_lin.value - am_lin.value
    width_nl = om_nl.value - am_nl.value
    pct = 100.0 * (width_nl / width_lin - 1.0) if width_lin > 0 else math.nan
    if xp.regime == "resonant":
        tag = "ii"
    elif am_nl.regime == "resonant" and abs(am_nl.s - S_X) > far_from_x:
        tag = "iii"
    else:
        tag = "i"
    rejected = sum(1 for p in pts if p.w_nl is None)
    return BandgapReport(am_lin, om_lin, am_nl, om_nl, width_lin, width_nl, pct, tag, xp.regime, rejected)


def linear_max_at_X(Mtilde: float, Ktilde: float, n: int = 600) -> bool:
    """True when the linear acoustic maximum over the boundary path sits at X
    and the optical minimum at Gamma."""
    s = boundary_path(n)
    pts = np.array([boundary_point(v) for v in s])
    wm, wp = linear_omegas(Mtilde, Ktilde, pts[:, 0], pts[:, 1])
    wx = linear_omegas(Mtilde, Ktilde, *X_POINT)[0]
    om_at_gamma = int(np.argmin(wp)) in (0, len(s) - 1)
    return bool(wx >= wm.max() - 1e-12 and om_at_gamma)


def in_brillouin(k1: float, k2: float) -> bool:
    return in_triangle(k1, k2)
