"""Zones of the (a1, a2) plane, critical points of F and the region catalogue."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bnf import EffectiveParams, b, d2b, db
from .errors import Rejection
from .quartic import QuarticRoots, roots_x

PI = math.pi
TAU_ZONE = 1e-9
TAU_E = 1e-9

ZONES = ("Z10", "Z01", "Z12plus", "Z12minus", "Z21plus", "Z21minus")
DEGENERATE = ("OnLineA1A2", "OnG", "OnGneg", "OnGtilde")


# ---------------------------------------------------------------- boundaries

def g_boundary(a1: float) -> float:
    """Upper tangency curve: a2 = g(a1) is where the psi=pi line gains a critical pair."""
    s = math.sqrt(9.0 + 4.0 * a1 * a1)
    lead = s - 2.0 * a1 if a1 <= 0 else 9.0 / (s + 2.0 * a1)
    return lead * (9.0 - 4.0 * a1 * a1 - 4.0 * a1 * s) / 27.0


def gneg_boundary(a1: float) -> float:
    """h(a1) = -g(-a1), the lower tangency curve."""
    return -g_boundary(-a1)


def gtilde_boundary(a1: float) -> float:
    """Curve on which the saddle sits at energy zero."""
    return -2.0 / 27.0 * a1 * (4.0 * a1 * a1 + 27.0)


@dataclass(frozen=True)
class ZoneLabel:
    tag: str

    @property
    def degenerate(self) -> bool:
        return self.tag in DEGENERATE

    @property
    def family(self) -> str:
        return self.tag[:3] if not self.degenerate else self.tag

    def __str__(self):
        return self.tag


def classify(a1: float, a2: float, tau_zone: float = TAU_ZONE) -> ZoneLabel:
    g = g_boundary(a1)
    h = gneg_boundary(a1)
    if abs(a2 + a1) < tau_zone:
        return ZoneLabel("OnLineA1A2")
    if abs(a2 - g) < tau_zone:
        return ZoneLabel("OnG")
    if abs(a2 - h) < tau_zone:
        return ZoneLabel("OnGneg")
    if a2 < h:
        return ZoneLabel("Z10")
    if a2 > g:
        return ZoneLabel("Z01")
    gt = gtilde_boundary(a1)
    if abs(a2 - gt) < tau_zone:
        return ZoneLabel("OnGtilde")
    fam = "Z12" if a2 < -a1 else "Z21"
    return ZoneLabel(fam + ("plus" if a2 > gt else "minus"))


# ---------------------------------------------------------------- critical points

@dataclass(frozen=True)
class CriticalPoint:
    psi: float
    x: float
    kind: str
    energy: float


def _solve_monotone(fun, target, increasing=True):
    # root of fun(x) = target for fun monotone on (0,1) with infinite limits
    lo, hi = 0.5, 0.5
    sgn = 1.0 if increasing else -1.0
    while sgn * (fun(lo) - target) > 0:
        lo *= 0.5
        if lo < 1e-300:
            raise Rejection("bracket_failure", "monotone solve, lower end")
    k = 1
    while sgn * (fun(hi) - target) < 0:
        k += 1
        hi = 1.0 - 0.5 ** k
        if k > 1000 or hi == 1.0:
            raise Rejection("bracket_failure", "monotone solve, upper end")
    if lo == hi:
        return lo
    return brentq(lambda x: fun(x) - target, lo, hi, xtol=1e-300, rtol=8.9e-16, maxiter=500)


def _polish(d, dd, x):
    for _ in range(3):
        v = d(x)
        der = dd(x)
        if der == 0:
            break
        xn = x - v / der
        if 0.0 < xn < 1.0 and abs(d(xn)) < abs(v):
            x = xn
        else:
            break
    return x


def _line_roots(a1: float, a2: float, s: float):
    """Roots of d(x) = b'(x) - s (a2 x + a1) on (0,1); d is convex with d(0+) = +inf."""
    def d(x):
        return float(db(x)) - s * (a2 * x + a1)

    def dd(x):
        return float(d2b(x)) - s * a2

    d1 = -s * (a2 + a1)
    xstar = _solve_monotone(lambda x: float(d2b(x)), s * a2)
    lo = min(0.25, 0.5 * xstar)
    while d(lo) <= 0:
        lo *= 0.5
        if lo < 1e-300:
            raise Rejection("bracket_failure", "critical point lower bracket")
    if d1 == 0.0:
        # the second root sits on the edge x = 1 and is not a critical point
        if xstar >= 1.0 or d(xstar) >= 0:
            return []
        r = brentq(d, lo, xstar, xtol=1e-300, rtol=8.9e-16, maxiter=500)
        return [_polish(d, dd, r)]
    if d1 < 0:
        r = brentq(d, lo, 1.0 - 1e-16 if d(1.0 - 1e-16) < 0 else 1.0, xtol=1e-300, rtol=8.9e-16, maxiter=500)
        return [_polish(d, dd, r)]
    dm = d(xstar)
    if dm >= 0:
        return []
    r1 = brentq(d, lo, xstar, xtol=1e-300, rtol=8.9e-16, maxiter=500)
    hi = xstar
    k = 1
    while d(hi) <= 0:
        hi = 1.0 - (1.0 - xstar) * 0.5 ** k
        k += 1
        if k > 200:
            raise Rejection("bracket_failure", "critical point upper bracket")
    r2 = brentq(d, xstar, hi, xtol=1e-300, rtol=8.9e-16, maxiter=500)
    return [_polish(d, dd, r1), _polish(d, dd, r2)]


def critical_points(p: EffectiveParams) -> list:
    out = []
    for psi, s in ((0.0, -1.0), (PI, 1.0)):
        roots = _line_roots(p.a1, p.a2, s)
        for i, x in enumerate(roots):
            if psi == 0.0:
                kind = "max" if i == 0 else "saddle"
            else:
                kind = "min" if i == 0 else "saddle"
            out.append(CriticalPoint(psi, x, kind, float(p.F(psi, x))))
    return out


# ---------------------------------------------------------------- summary

@dataclass(frozen=True)
class RegionInfo:
    """One open region of the cylinder: its energy range and boundary-line tags.

    ``tags`` gives the lines met by a level curve at its smaller and larger
    x-endpoints.  ``winding`` is "contractible" (a loop around a center) or
    "wrapping" (a curve going once around the cylinder).
    """

    name: str
    e_lo: float
    e_hi: float
    tags: tuple

    @property
    def winding(self) -> str:
        return "contractible" if self.tags[0] == self.tags[1] else "wrapping"

    @property
    def area_sign(self) -> int:
        """Sign s in dA/dE = s * integral of W over the component."""
        return -1 if self.tags[1] == 0.0 else 1


@dataclass(frozen=True)
class PortraitSummary:
    zone: ZoneLabel
    a1: float
    a2: float
    criticals: list
    e_max: float | None
    e_min: float | None
    e_sad: float | None
    e_plus: float
    e_minus: float
    a_one: float
    regions: list = field(default_factory=list)

    def region(self, name: str) -> RegionInfo:
        for r in self.regions:
            if r.name == name:
                return r
        raise Rejection("no_such_region", f"{name} not in {self.zone.tag}")

    def critical_energies(self) -> list:
        es = [0.0]
        for e in (self.e_max, self.e_min, self.e_sad):
            if e is not None:
                es.append(e)
        return es

    def tau_E(self, tau: float = TAU_E) -> float:
        return tau * max(1.0, abs(self.e_sad) if self.e_sad is not None else 1.0)

    def check_energy(self, E: float, tau: float = TAU_E):
        t = self.tau_E(tau)
        for ec in self.critical_energies():
            if abs(E - ec) < t:
                raise Rejection("singular_level_set", f"E={E!r} within {t:g} of critical energy {ec!r}")

    def regions_at(self, E: float) -> list:
        return [r for r in self.regions if r.e_lo < E < r.e_hi]


def _regions(tag: str, emax, emin, esad, a1v) -> list:
    Z, P = 0.0, PI
    R = RegionInfo
    if tag == "Z10":
        return [R("I", 0.0, emax, (Z, Z)), R("II", a1v, 0.0, (P, Z))]
    if tag == "Z01":
        return [R("II", 0.0, a1v, (Z, P)), R("III", emin, 0.0, (P, P))]
    if tag == "Z21plus":
        return [R("I", esad, emax, (Z, Z)), R("II", 0.0, esad, (Z, P)),
                R("III", emin, 0.0, (P, P)), R("IV", esad, a1v, (Z, P))]
    if tag == "Z21minus":
        return [R("I", 0.0, emax, (Z, Z)), R("II", esad, 0.0, (P, Z)),
                R("III", emin, esad, (P, P)), R("IV", esad, a1v, (Z, P))]
    if tag == "Z12plus":
        return [R("I", esad, emax, (Z, Z)), R("II", 0.0, esad, (Z, P)),
                R("III", emin, 0.0, (P, P)), R("IV", a1v, esad, (P, Z))]
    if tag == "Z12minus":
        return [R("I", 0.0, emax, (Z, Z)), R("II", esad, 0.0, (P, Z)),
                R("III", emin, esad, (P, P)), R("IV", a1v, esad, (P, Z))]
    return []


def portrait_summary(p: EffectiveParams, tau_zone: float = TAU_ZONE) -> PortraitSummary:
    zone = classify(p.a1, p.a2, tau_zone)
    a1v = 0.5 * p.a2 + p.a1
    if zone.degenerate:
        return PortraitSummary(zone, p.a1, p.a2, [], None, None, None, math.nan, math.nan, a1v, [])
    crit = critical_points(p)
    kinds = sorted(c.kind for c in crit)
    expected = {"Z10": ["max"], "Z01": ["min"]}.get(zone.tag, ["max", "min", "saddle"])
    if kinds != expected:
        raise Rejection("zone_mismatch", f"{zone.tag} with critical kinds {kinds}")
    emax = next((c.energy for c in crit if c.kind == "max"), None)
    emin = next((c.energy for c in crit if c.kind == "min"), None)
    esad = next((c.energy for c in crit if c.kind == "saddle"), None)
    fam = zone.tag[:3]
    if fam == "Z10":
        ep, em = emax, a1v
    elif fam == "Z01":
        ep, em = a1v, emin
    elif fam == "Z21":
        ep, em = max(a1v, emax), emin
    else:
        ep, em = emax, min(a1v, emin)
    regs = [r for r in _regions(zone.tag, emax, emin, esad, a1v) if r.e_lo < r.e_hi]
    return PortraitSummary(zone, p.a1, p.a2, crit, emax, emin, esad, ep, em, a1v, regs)


# ---------------------------------------------------------------- level sets

def component(p: EffectiveParams, E: float, region: RegionInfo, summary: PortraitSummary | None = None,
              roots: QuarticRoots | None = None):
    """x-bounds of the region's level curve at energy E, with the roots used."""
    if summary is not None:
        summary.check_energy(E)
    if not region.e_lo < E < region.e_hi:
        raise Rejection("energy_outside_region", f"E={E!r} not in ({region.e_lo!r}, {region.e_hi!r})")
    if roots is None:
        roots = roots_x(p.a1, p.a2, E)
    hits = [pr for pr, tg in roots.pairs() if tg == region.tags]
    if len(hits) != 1:
        raise Rejection("region_mismatch",
                        f"region {region.name} tags {region.tags} vs roots {roots.xs} lines {roots.line_of}")
    return hits[0], roots


def region_of_point(p: EffectiveParams, summary: PortraitSummary, E: float, x: float,
                    psi: float | None = None) -> RegionInfo:
    """Region whose level curve at energy E passes over abscissa x.

    With ``psi`` on a line (0 or pi) the point is a turning point of its curve,
    so x is itself a root; the component is then the one owning the nearest
    root on that line.
    """
    summary.check_energy(E)
    roots = roots_x(p.a1, p.a2, E)
    pairs = roots.pairs()
    cand = []
    if psi is not None and psi in (0.0, PI):
        best = None
        for (lo, hi), tg in pairs:
            for xr, line in ((lo, tg[0]), (hi, tg[1])):
                if line == psi and (best is None or abs(xr - x) < best[0]):
                    best = (abs(xr - x), tg)
        if best is not None and best[0] <= 1e-8 * max(1.0, abs(x)):
            cand = [best[1]]
    else:
        cand = [tg for (lo, hi), tg in pairs if lo <= x <= hi]
    for tg in cand:
        for r in summary.regions_at(E):
            if r.tags == tg:
                return r
    raise Rejection("region_not_found", f"E={E!r}, x={x!r}, roots={roots.xs}")


@dataclass(frozen=True)
class LevelCurve:
    x: np.ndarray
    psi: np.ndarray
    E: float
    region: str


def level_curve(p: EffectiveParams, E: float, region: str | RegionInfo, n: int = 512,
                summary: PortraitSummary | None = None) -> LevelCurve:
    """Upper half psi(x) in [0, pi] of the region's level curve; the full curve is
    completed by psi -> 2 pi - psi."""
    if summary is None:
        summary = portrait_summary(p)
    reg = summary.region(region) if isinstance(region, str) else region
    (lo, hi), _ = component(p, E, reg, summary)
    th = np.linspace(0.0, 0.5 * PI, n)
    x = lo + (hi - lo) * np.sin(th) ** 2
    x[0], x[-1] = lo, hi
    ratio = (E - p.a(x)) / b(x)
    over = np.abs(ratio) - 1.0
    if np.any(over[1:-1] > 1e-12):
        raise Rejection("level_curve_clamp", f"max overshoot {over.max():.3g}")
    psi = np.arccos(np.clip(ratio, -1.0, 1.0))
    psi[0], psi[-1] = reg.tags
    return LevelCurve(x, psi, E, reg.name)
