"""Real roots in (0,1) of P(x;E) = (a(x) - E)^2 - (1-x)^3 x.

The closed form works with the substitution x = t^2/(1+t^2), under which the
two branches a(x) -+ b(x) = E become the depressed quartic
t^4 + p t^2 + q t + r = 0; the sign of a real root t tells the line
(t < 0: psi = 0, t > 0: psi = pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import Rejection

PI = math.pi
TAU_LEAD = 1e-10
TAU_DELTA = 1e-10
IMAG_TOL = 1e-7


@dataclass(frozen=True)
class QuarticRoots:
    """Real roots x1 < x2 (< x3 < x4) with the line psi in {0, pi} each one lies on.

    ``complex_xs`` holds all four roots of P(x) (real ones included) as complex
    numbers, which the two-real-root elliptic reduction needs.
    """

    xs: tuple
    line_of: tuple
    count: int
    deltas: tuple = (math.nan, math.nan)
    s_star: float = math.nan
    ts: tuple = ()
    complex_xs: tuple = ()
    near_degenerate: bool = False
    source: str = "closed_form"

    def pairs(self):
        """Consecutive root pairs (x1,x2), (x3,x4) with their line tags."""
        out = []
        for i in range(0, self.count - 1, 2):
            out.append(((self.xs[i], self.xs[i + 1]), (self.line_of[i], self.line_of[i + 1])))
        return out


def poly_x(a1: float, a2: float, E: float) -> np.ndarray:
    """Coefficients of P(x;E), highest degree first."""
    return np.array([
        1.0 + 0.25 * a2 * a2,
        a1 * a2 - 3.0,
        a1 * a1 - a2 * E + 3.0,
        -2.0 * a1 * E - 1.0,
        E * E,
    ])


def eval_P(a1, a2, E, x):
    return (0.5 * a2 * x * x + a1 * x - E) ** 2 - (1.0 - x) ** 3 * x


def _x_of_t(t):
    t2 = t * t
    return t2 / (1.0 + t2)


def _quadratic_case(a1: float, a2: float, E: float) -> tuple:
    # leading coefficient vanishes: (a1 - 2E) t^2 - t - E = 0
    c2, c1, c0 = a1 - 2.0 * E, -1.0, -E
    if abs(c2) < 1e-300:
        return (complex(-c0 / c1),)
    disc = c1 * c1 - 4.0 * c2 * c0
    sq = np.sqrt(complex(disc))
    qq = -0.5 * (c1 + math.copysign(1.0, c1) * sq)
    return (qq / c2, c0 / qq)


def roots_t(a1: float, a2: float, E: float):
    """t-roots of the depressed quartic with the discriminant pair and resolvent root.

    Returns (roots, (delta_plus, delta_minus), s_star); roots is a 4-tuple of
    complex numbers ordered (t_+^+, t_+^-, t_-^+, t_-^-), or a shorter tuple in
    the leading-coefficient special case (deltas are then nan).
    """
    if E == 0.0:
        raise Rejection("zero_energy", "t = 0 is a root at E = 0")
    lead = 0.5 * a2 + a1 - E
    if abs(lead) < TAU_LEAD * (1.0 + abs(E)):
        return _quadratic_case(a1, a2, E), (math.nan, math.nan), math.nan
    rts, dp, dm, s = kernels.quartic_t(a1, a2, E)
    return tuple(rts), (dp, dm), s


def roots_oracle(a1: float, a2: float, E: float) -> QuarticRoots:
    """Companion-matrix eigenvalues of P(x), filtered to real roots in (0,1)."""
    allx = np.roots(poly_x(a1, a2, E))
    real = sorted(float(z.real) for z in allx
                  if abs(z.imag) <= IMAG_TOL * max(1.0, abs(z)) and 0.0 < z.real < 1.0)
    lines = []
    for x in real:
        lines.append(0.0 if E - (0.5 * a2 * x * x + a1 * x) > 0 else PI)
    cx = tuple(complex(z) for z in sorted(allx, key=lambda z: (abs(z.imag) > IMAG_TOL, z.real, z.imag)))
    return QuarticRoots(tuple(real), tuple(lines), len(real), complex_xs=cx, source="oracle",
                        near_degenerate=_clustered(allx))


def _clustered(zs, gap: float = 1e-6) -> bool:
    zs = list(zs)
    return any(abs(zs[i] - zs[j]) < gap for i in range(len(zs)) for j in range(i + 1, len(zs)))


def roots_x(a1: float, a2: float, E: float, fallback: bool = True) -> QuarticRoots:
    """Ordered real roots of P(x;E) in (0,1) with line tags, from the closed form.

    Near-degenerate discriminants (|delta| < TAU_DELTA) defer to the oracle when
    ``fallback`` is set; the result then carries ``near_degenerate=True``.
    """
    ts, (dp, dm), s = roots_t(a1, a2, E)
    if len(ts) < 4:
        real = [t.real for t in ts if abs(t.imag) <= IMAG_TOL * max(1.0, abs(t))]
        cx = tuple(_x_of_t(t) for t in ts)
        near = False
    else:
        near = abs(dp) < TAU_DELTA or abs(dm) < TAU_DELTA
        if near and fallback:
            o = roots_oracle(a1, a2, E)
            return QuarticRoots(o.xs, o.line_of, o.count, (dp, dm), s, ts, o.complex_xs, True, "oracle")
        real = []
        if dp >= 0:
            real += [ts[0].real, ts[1].real]
        if dm >= 0:
            real += [ts[2].real, ts[3].real]
        cx = tuple(_x_of_t(t) for t in ts)
    real.sort(key=abs)
    xs = tuple(_x_of_t(t) for t in real)
    lines = tuple(0.0 if t < 0 else PI for t in real)
    order = sorted(range(len(xs)), key=lambda i: xs[i])
    xs = tuple(xs[i] for i in order)
    lines = tuple(lines[i] for i in order)
    cx_sorted = tuple(sorted(cx, key=lambda z: (abs(z.imag) > IMAG_TOL, z.real, z.imag)))
    return QuarticRoots(xs, lines, len(xs), (dp, dm), s, tuple(ts), cx_sorted, near, "closed_form")


def roots_x_batch(a1, a2, E):
    """Closed-form t-roots for arrays of (a1, a2, E); returns kernel arrays.

    Only the generic case (nonzero leading coefficient and E != 0) is handled.
    """
    return kernels.quartic_t_batch(a1, a2, E)
