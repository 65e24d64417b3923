"""Areas enclosed by level curves of F, their derivatives and the nonlinear frequencies.

The action of a level curve is I1 = I2 A(E; I2) / 3, with A the area swept in
the (psi, x) cylinder normalized by 2 pi.  All quantities are computed in the
(E, I2) coordinates.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from . import elliptic
from .bnf import EffectiveParams, QuarticCoeffs, effective_params
from .errors import Rejection
from .modal import ModalData
from .portrait import PortraitSummary, RegionInfo, ZoneLabel, component, portrait_summary, region_of_point
from .quartic import QuarticRoots, poly_x

PI = math.pi
AREA_TOL = 1e-13
TAU_SIGMA = 1e-12


# ---------------------------------------------------------------- quadrature

def _tanh_sinh_nodes(level: int):
    h = 2.0 ** -level
    t = np.arange(-int(3.2 / h), int(3.2 / h) + 1) * h
    u = 0.5 * PI * np.sinh(t)
    ch = np.cosh(u)
    # nodes on (0, 1) measured from both ends to keep the endpoint gaps exact
    left = 1.0 / (np.exp(2.0 * u) + 1.0)
    w = h * 0.5 * PI * np.cosh(t) / (2.0 * ch * ch)
    return left, w


def tanh_sinh(f, a: float, b: float, tol: float = AREA_TOL, max_level: int = 9):
    """Double-exponential quadrature of a vectorized f on (a, b); returns (value, error estimate)."""
    prev = None
    for level in range(2, max_level + 1):
        s, w = _tanh_sinh_nodes(level)
        keep = (s > 0.0) & (s < 1.0)
        s, w = s[keep], w[keep]
        val = (b - a) * float(np.sum(w * f(a + (b - a) * s)))
        if prev is not None and abs(val - prev) <= tol * max(1.0, abs(val)):
            return val, abs(val - prev)
        prev = val
    return prev, math.inf


# ---------------------------------------------------------------- component data

@dataclass(frozen=True)
class _Component:
    lo: float
    hi: float
    others: tuple
    lead: float
    roots: QuarticRoots


def _component(p: EffectiveParams, E: float, region: RegionInfo, summary: PortraitSummary) -> _Component:
    (lo, hi), roots = component(p, E, region, summary)
    allx = [complex(z) for z in np.roots(poly_x(p.a1, p.a2, E))]
    for target in (lo, hi):
        j = min(range(len(allx)), key=lambda i: abs(allx[i] - target))
        allx.pop(j)
    return _Component(lo, hi, tuple(allx), 1.0 + 0.25 * p.a2 * p.a2, roots)


def _lq(c: _Component, x):
    # L * (x - x3)(x - x4) for the two roots off the component; real and positive on it
    o1, o2 = c.others
    return (c.lead * (x - o1) * (x - o2)).real


def _psi_integral(p: EffectiveParams, E: float, c: _Component) -> float:
    """(1/pi) int psi(x; E) dx over the component, psi in [0, pi]."""
    d = c.hi - c.lo

    def f(s):
        # x = lo + d sin^2(theta), s = theta / (pi/2)
        th = 0.5 * PI * s
        sn, cs = np.sin(th), np.cos(th)
        x = c.lo + d * sn * sn
        root = d * sn * cs * np.sqrt(_lq(c, x))
        psi = np.arctan2(root, E - p.a(x))
        return psi * 2.0 * d * sn * cs * 0.5 * PI

    val, err = tanh_sinh(f, 0.0, 1.0)
    if not math.isfinite(err):
        # a root off the component sits close to an end point: adaptive fallback
        val, err = integrate.quad(lambda s: float(f(np.array([s]))[0]), 0.0, 1.0,
                                  epsabs=0.0, epsrel=1e-12, limit=500)
        if not err <= 1e-9 * max(1.0, abs(val)):
            raise Rejection("quadrature_failed", f"area at E={E!r}")
    return val / PI


def _area_from(c: _Component, region: RegionInfo, integral: float) -> float:
    t_lo, t_hi = region.tags
    if t_lo == 0.0 and t_hi == 0.0:
        return integral
    if t_lo == PI and t_hi == PI:
        return (c.hi - c.lo) - integral
    if t_lo == PI:
        return c.lo + integral
    return c.hi - integral


def _resolve(p: EffectiveParams, region, summary: PortraitSummary | None):
    if summary is None:
        summary = portrait_summary(p)
    if summary.zone.degenerate:
        raise Rejection("degenerate_zone", summary.zone.tag)
    reg = summary.region(region) if isinstance(region, str) else region
    return reg, summary


def area(p: EffectiveParams, E: float, region, summary: PortraitSummary | None = None) -> float:
    """Normalized area A(E) of the region's level curve at energy E."""
    reg, summary = _resolve(p, region, summary)
    c = _component(p, E, reg, summary)
    return _area_from(c, reg, _psi_integral(p, E, c))


def w_integrals_quad(c: _Component):
    """(int W, int x W) over the component by the sin^2 substitution."""
    d = c.hi - c.lo

    def fw(s):
        th = 0.5 * PI * s
        x = c.lo + d * np.sin(th) ** 2
        return 2.0 / (PI * np.sqrt(_lq(c, x))) * 0.5 * PI

    def fx(s):
        th = 0.5 * PI * s
        x = c.lo + d * np.sin(th) ** 2
        return x * 2.0 / (PI * np.sqrt(_lq(c, x))) * 0.5 * PI

    w, e1 = tanh_sinh(fw, 0.0, 1.0)
    xw, e2 = tanh_sinh(fx, 0.0, 1.0)
    if not (math.isfinite(e1) and math.isfinite(e2)):
        raise Rejection("quadrature_failed", "W integrals")
    return w, xw


def _w_integrals(c: _Component):
    """Closed-form W integrals, falling back to quadrature near coincident roots."""
    reals = sorted(z.real for z in (complex(c.lo), complex(c.hi), *c.others)
                   if abs(z.imag) <= 1e-9 * max(1.0, abs(z)))
    try:
        if len(reals) == 4:
            return (*elliptic.w_integrals((), reals, (c.lo, c.hi), c.lead), False)
        if len(reals) == 2:
            return (*elliptic.w_integrals((c.lo, c.hi, *c.others), [c.lo, c.hi], (c.lo, c.hi), c.lead), False)
    except Rejection as exc:
        if exc.reason not in ("coincident_roots", "pi_parameter"):
            raise
    return (*w_integrals_quad(c), True)


# ---------------------------------------------------------------- charts

@dataclass(frozen=True)
class ActionChart:
    """Region, energy and action of one level curve with the area and its derivatives."""

    region: str
    zone: ZoneLabel
    E: float
    I2: float
    area: float
    dA_dE: float
    dA_dI2: float
    sign_used: int
    int_W: float
    int_xW: float
    degraded: bool = False

    @property
    def mean_x(self) -> float:
        return self.int_xW / self.int_W


def dA(p: EffectiveParams, E: float, region, summary: PortraitSummary | None = None):
    """(dA/dE, dA/dI2) at fixed I2 and E respectively."""
    ch = action_chart(p, E, region, summary)
    return ch.dA_dE, ch.dA_dI2


def action_chart(p: EffectiveParams, E: float, region, summary: PortraitSummary | None = None,
                 with_area: bool = True) -> ActionChart:
    reg, summary = _resolve(p, region, summary)
    c = _component(p, E, reg, summary)
    w, xw, degraded = _w_integrals(c)
    s = reg.area_sign
    a = _area_from(c, reg, _psi_integral(p, E, c)) if with_area else math.nan
    da_di2 = s * p.sigma / (3.0 * p.chi * p.J2 ** 2) * xw
    return ActionChart(reg.name, summary.zone, E, p.J2, a, s * w, da_di2, s, w, xw, degraded)


# ---------------------------------------------------------------- frequencies

@dataclass(frozen=True)
class FrequencyPair:
    w_minus_nlr: float
    w_plus_nlr: float
    regime: str
    source: tuple
    w_slow: float = math.nan
    chart: ActionChart | None = None

    def as_dict(self) -> dict:
        out = {
            "w_minus_nlr": self.w_minus_nlr,
            "w_plus_nlr": self.w_plus_nlr,
            "regime": self.regime,
            "source": list(self.source),
            "w_slow": self.w_slow,
        }
        if self.chart is not None:
            ch = self.chart
            out["chart"] = {
                "zone": ch.zone.tag, "region": ch.region, "E": ch.E, "I2": ch.I2, "area": ch.area,
                "dA_dE": ch.dA_dE, "dA_dI2": ch.dA_dI2, "sign_used": ch.sign_used, "degraded": ch.degraded,
            }
        return out


def slow_frequency(p: EffectiveParams, ch: ActionChart) -> float:
    """Frequency of the slow angle: 3 chi I2 / dA/dE."""
    return 3.0 * p.chi * p.J2 / ch.dA_dE


def exact_V(ch: ActionChart) -> float:
    """Exact-resonance correction V(E) = 1 / (2 dA/dE), with the chart's sign."""
    return 1.0 / (2.0 * ch.dA_dE)


def frequencies_resonant(p: EffectiveParams, E: float, region, omega_minus: float,
                         summary: PortraitSummary | None = None, area_term: bool = True,
                         tau_sigma: float = TAU_SIGMA) -> FrequencyPair:
    """Nonlinear frequencies of the level curve (E, I2 = p.J2) in ``region``.

    With I1 = I2 A / 3, the acoustic frequency dE/dI2 at fixed I1 is

        omega_- + 2 chi I2 (E + a0) - chi I2 (A + I2 dA/dI2) / dA/dE

    and omega_+^nlr = 3 omega_-^nlr + omega_1 with omega_1 = 3 chi I2 / dA/dE.
    This equals the time average of dH/dJ2 along the orbit.  ``area_term=False``
    drops the -chi I2 A / dA/dE part, which leaves a form that is linear in E
    at exact resonance.
    """
    ch = action_chart(p, E, region, summary, with_area=area_term)
    I2, chi = p.J2, p.chi
    w1 = 3.0 * chi * I2 / ch.dA_dE
    exact = abs(p.sigma) < tau_sigma * omega_minus
    if exact:
        wm = omega_minus + 2.0 * I2 * (chi * E + chi * p.a0)
        regime = "resonant_exact"
    else:
        wm = omega_minus + 2.0 * chi * I2 * (E + p.a0) - chi * I2 * I2 * ch.dA_dI2 / ch.dA_dE
        regime = "resonant_generic"
    if area_term:
        wm -= chi * I2 * ch.area / ch.dA_dE
    return FrequencyPair(wm, 3.0 * wm + w1, regime, (E, I2), w1, ch)


def frequencies_nonresonant(q: QuarticCoeffs, m: ModalData, a_minus: float, a_plus: float,
                            N3: float | None = None) -> FrequencyPair:
    """Away from resonance: omega_-^nl = omega_- + 2 G2020 I1 + G1111 I2 and
    omega_+^nl = omega_+ + G1111 I1 + 2 G0202 I2 with I = omega a^2 / 2.

    With ``N3`` given, the closed form for a cubic spring on the resonator
    coordinate alone is used instead; both agree when M3 = 0.
    """
    if a_minus < 0 or a_plus < 0:
        raise Rejection("negative_amplitude", f"({a_minus!r}, {a_plus!r})")
    wm, wp = m.omega_minus, m.omega_plus
    if N3 is None:
        i1 = 0.5 * wm * a_minus ** 2
        i2 = 0.5 * wp * a_plus ** 2
        wmn = wm + 2.0 * q.g2020 * i1 + q.g1111 * i2
        wpn = wp + q.g1111 * i1 + 2.0 * q.g0202 * i2
    else:
        p21, p22 = m.phi[1]
        am2, ap2 = a_minus ** 2, a_plus ** 2
        mix = p21 ** 2 * p22 ** 2
        wmn = wm + N3 * (3.0 / (8.0 * wm) * p21 ** 4 * am2 + 3.0 / (4.0 * wm) * mix * ap2)
        wpn = wp + N3 * (3.0 / (8.0 * wp) * p22 ** 4 * ap2 + 3.0 / (4.0 * wp) * mix * am2)
    return FrequencyPair(wmn, wpn, "nonresonant", (a_minus, a_plus))


def amplitudes_to_chart(a_minus: float, a_plus: float, q: QuarticCoeffs, m: ModalData,
                        summary: PortraitSummary | None = None):
    """(E, I2, region, params) of the orbit started at amplitudes (a_-, a_+) with zero phases."""
    if a_minus < 0 or a_plus < 0 or (a_minus == 0 and a_plus == 0):
        raise Rejection("bad_amplitudes", f"({a_minus!r}, {a_plus!r})")
    wm, wp = m.omega_minus, m.omega_plus
    lo, hi = wm * a_minus ** 2, 3.0 * wp * a_plus ** 2
    I2 = 0.5 * (lo + hi)
    x = hi / (lo + hi)
    p = effective_params(q, m, I2)
    if not 0.0 < x < 1.0:
        raise Rejection("boundary_start", f"x={x!r} on the boundary of the cylinder")
    E = float(p.F(0.0, x))
    if summary is None:
        summary = portrait_summary(p)
    if summary.zone.degenerate:
        raise Rejection("degenerate_zone", summary.zone.tag)
    reg = region_of_point(p, summary, E, x, psi=0.0)
    return E, I2, reg, p, summary
