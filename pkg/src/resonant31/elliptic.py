"""Complete elliptic integrals and the Moebius reductions of the W-integrals.

W(x) = 1 / (pi sqrt(-P(x))) with P(x) = lead * prod (x - x_j).  A fractional
linear map T sends the roots of P to +-1, +-1/k, after which the integrals of W
and x W between consecutive real roots become complete integrals of the first
and third kind.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import kernels
from .errors import Rejection

PI = math.pi
GAP_MIN = 1e-8
C_ZERO_TOL = 1e-13
SMALL_N = 1e-3


def elliptic_K(m: float) -> float:
    """K(m) = int_0^1 ds / sqrt((1-s^2)(1-m s^2)) for m < 1."""
    if not m < 1.0:
        raise Rejection("elliptic_domain", f"m={m!r} >= 1")
    return kernels.carlson_rf(0.0, 1.0 - m, 1.0)


def elliptic_Pi(n: float, m: float) -> float:
    """Pi(n, m) = int_0^1 ds / ((1-n s^2) sqrt((1-s^2)(1-m s^2))) for n, m < 1."""
    if not (m < 1.0 and n < 1.0):
        raise Rejection("elliptic_domain", f"n={n!r}, m={m!r}")
    return kernels.carlson_rf(0.0, 1.0 - m, 1.0) + n / 3.0 * kernels.carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n)


def _pi_minus_k_over_n(n: float, m: float) -> float:
    # (Pi(n,m) - K(m)) / n, finite as n -> 0
    return kernels.carlson_rj(0.0, 1.0 - m, 1.0, 1.0 - n) / 3.0


# ---------------------------------------------------------------- four real roots

@dataclass(frozen=True)
class MoebiusReal4:
    """T(z) = (A z + B)/(C z + D) with T(1/k)=x1, T(1)=x2, T(-1)=x3, T(-1/k)=x4."""

    A: float
    B: float
    C: float
    D: float
    k: float
    lam: float
    c: float
    roots: tuple

    @property
    def m1(self) -> float:
        return 1.0 - self.k * self.k

    @property
    def c_is_zero(self) -> bool:
        x1, x2, x3, x4 = self.roots
        lhs = (x2 - x1) * (x3 - x1)
        rhs = (x4 - x2) * (x4 - x3)
        return abs(lhs - rhs) <= C_ZERO_TOL * max(abs(lhs), abs(rhs))

    @property
    def a_shift(self) -> float:
        return self.D / self.C

    @property
    def b_scale(self) -> float:
        return (self.B * self.C - self.A * self.D) / self.C ** 2

    @property
    def n1(self) -> float:
        a = self.a_shift
        return self.m1 * a * a / (a * a - 1.0)

    def T(self, z):
        return (self.A * z + self.B) / (self.C * z + self.D)


def moebius_real4(x1: float, x2: float, x3: float, x4: float, lead: float = 1.0) -> MoebiusReal4:
    if not (x1 < x2 < x3 < x4):
        raise Rejection("root_order", f"{(x1, x2, x3, x4)}")
    if min(x2 - x1, x3 - x2, x4 - x3) < GAP_MIN:
        raise Rejection("coincident_roots", f"{(x1, x2, x3, x4)}")
    lam = (x2 - x1) * (x4 - x3) / ((x3 - x1) * (x4 - x2))
    sl = math.sqrt(lam)
    k = (1.0 - sl) / (1.0 + sl)
    k2 = k * k
    A = -k * x1 * x3 - k2 * x1 * x3 + 2 * k * x1 * x4 - k * x3 * x4 + k2 * x3 * x4
    B = -x1 * x3 - k * x1 * x3 + 2 * k * x1 * x4 + x3 * x4 - k * x3 * x4
    C = k * x1 - k2 * x1 - 2 * k * x3 + k * x4 + k2 * x4
    D = -x1 + k * x1 - 2 * k * x3 + x4 + k * x4
    lhs = (x2 - x1) * (x3 - x1)
    rhs = (x4 - x2) * (x4 - x3)
    if abs(lhs - rhs) <= C_ZERO_TOL * max(abs(lhs), abs(rhs)):
        C = 0.0
    prod = 1.0
    for xj in (x1, x2, x3, x4):
        prod *= A - C * xj
    c = lead * prod / k2
    return MoebiusReal4(A, B, C, D, k, lam, c, (x1, x2, x3, x4))


def _branch(mob: MoebiusReal4, branch) -> int:
    x1, x2, x3, x4 = mob.roots
    if branch in (0, (x1, x2)):
        return 0
    if branch in (1, (x3, x4)):
        return 1
    raise Rejection("bad_branch", repr(branch))


def int_W_real4(mob: MoebiusReal4, branch=0) -> float:
    """Integral of W over (x1,x2) or (x3,x4); both branches share one value."""
    _branch(mob, branch)
    return (mob.B * mob.C - mob.A * mob.D) / (PI * math.sqrt(mob.c)) * elliptic_K(mob.m1)


def int_xW_real4(mob: MoebiusReal4, branch=0) -> float:
    """Integral of x W over (x1,x2) (branch 0) or (x3,x4) (branch 1)."""
    br = _branch(mob, branch)
    A, B, C, D, k = mob.A, mob.B, mob.C, mob.D, mob.k
    m1 = mob.m1
    kk = elliptic_K(m1)
    pref = (B * C - A * D) / (PI * math.sqrt(mob.c))
    if C == 0.0:
        tail = A * A / (2.0 * k * math.sqrt(mob.c))
        return -A * B / (PI * math.sqrt(mob.c)) * kk + (-tail if br == 0 else tail)
    a = mob.a_shift
    bs = mob.b_scale
    n1 = mob.n1
    mid = PI * bs / (2.0 * math.sqrt((a * a - 1.0) * (a * a * k * k - 1.0)))
    # partial fractions of 1/(z -+ a) over (1, 1/k): the Pi term enters with a plus sign
    third = n1 * bs / (m1 * a ** 3) * elliptic_Pi(n1, m1)
    return pref * (B / D * kk + (-mid if br == 0 else mid) + third)


# ---------------------------------------------------------------- two real roots

@dataclass(frozen=True)
class MoebiusComplex2:
    """T*(z) = (A z + B)/(C z + D) with T*(1)=x1, T*(-1)=x2 and T*(+-1/k*) the conjugate pair."""

    A: float
    B: float
    C: float
    D: float
    k: complex
    c: float
    roots: tuple

    @property
    def k2(self) -> float:
        return (self.k * self.k).real

    @property
    def n(self) -> float:
        return (self.C / self.D) ** 2

    def T(self, z):
        return (self.A * z + self.B) / (self.C * z + self.D)


def moebius_complex2(x1: float, x2: float, x3: complex, x4: complex, lead: float = 1.0) -> MoebiusComplex2:
    if not x1 < x2:
        raise Rejection("root_order", f"{(x1, x2)}")
    if x2 - x1 < GAP_MIN:
        raise Rejection("coincident_roots", f"{(x1, x2)}")
    x3, x4 = complex(x3), complex(x4)
    scale = max(1.0, abs(x3))
    if abs(x3 - x4.conjugate()) > 1e-10 * scale:
        raise Rejection("not_conjugate", f"{x3!r}, {x4!r}")
    if abs(x3.imag) < GAP_MIN:
        raise Rejection("coincident_roots", "conjugate pair nearly real")
    # symmetrize the pair, upper half-plane root first
    re, im = 0.5 * (x3.real + x4.real), 0.5 * (abs(x3.imag) + abs(x4.imag))
    x3, x4 = complex(re, im), complex(re, -im)
    w = (x1 - x4) * (x2 - x3)
    sl = abs(w) / w
    k = (1.0 - sl) / (1.0 + sl)
    k = complex(0.0, k.imag)
    dx = x4 - x3
    A = -x2 * (x3 + x4) + k * x2 * dx + 2.0 * x3 * x4
    B = -x2 * (x3 + x4) + x2 * dx / k + 2.0 * x3 * x4
    C = -2.0 * x2 + x3 + x4 + k * dx
    D = -2.0 * x2 + x3 + x4 + dx / k
    for v in (A, B, C, D):
        if abs(v.imag) > 1e-9 * max(1.0, abs(v)):
            raise Rejection("complex_coefficients", f"{(A, B, C, D)}")
    A, B, C, D = A.real, B.real, C.real, D.real
    prod = 1.0 + 0j
    for xj in (x1, x2, x3, x4):
        prod *= A - C * xj
    c = (-lead * prod / (k * k)).real
    return MoebiusComplex2(A, B, C, D, k, c, (x1, x2, x3, x4))


def int_W_complex2(mob: MoebiusComplex2) -> float:
    return 2.0 * (mob.B * mob.C - mob.A * mob.D) / (PI * math.sqrt(mob.c)) * elliptic_K(mob.k2)


def _xw_bracket_complex2(mob: MoebiusComplex2) -> float:
    # 2 A/C K + 2 (BC-AD)/(CD) Pi(C^2/D^2, k*^2), in a form that stays finite as C -> 0
    A, B, C, D = mob.A, mob.B, mob.C, mob.D
    m = mob.k2
    n = mob.n
    if not n < 1.0:
        raise Rejection("pi_parameter", f"n = C*^2/D*^2 = {n!r} >= 1")
    kk = elliptic_K(m)
    if n < SMALL_N:
        return 2.0 * B / D * kk - 2.0 * C * (A * D - B * C) / D ** 3 * _pi_minus_k_over_n(n, m)
    return 2.0 * A / C * kk + 2.0 * (B * C - A * D) / (C * D) * elliptic_Pi(n, m)


def int_xW_complex2(mob: MoebiusComplex2) -> float:
    return (mob.B * mob.C - mob.A * mob.D) / (PI * math.sqrt(mob.c)) * _xw_bracket_complex2(mob)


def mean_x_complex2(mob: MoebiusComplex2) -> float:
    """Ratio of the x W and W integrals over (x1, x2): the bracket of the
    frequency correction term divided by 2 K(k*^2)."""
    return _xw_bracket_complex2(mob) / (2.0 * elliptic_K(mob.k2))


# ---------------------------------------------------------------- dispatch

def w_integrals(complex_xs, real_xs, pair, lead: float):
    """(int W, int x W) over the root pair ``pair`` given all four roots of P."""
    lo, hi = pair
    if len(real_xs) == 4:
        mob = moebius_real4(*real_xs, lead=lead)
        br = 0 if (lo, hi) == tuple(real_xs[:2]) else 1
        return int_W_real4(mob, br), int_xW_real4(mob, br)
    if len(real_xs) == 2:
        cpx = [z for z in complex_xs if abs(z.imag) > 0.0 and not any(abs(z - r) < 1e-12 for r in real_xs)]
        if len(cpx) != 2:
            raise Rejection("root_structure", f"{complex_xs}")
        up = cpx[0] if cpx[0].imag > 0 else cpx[1]
        mob = moebius_complex2(lo, hi, up, up.conjugate(), lead=lead)
        return int_W_complex2(mob), int_xW_complex2(mob)
    raise Rejection("root_structure", f"{len(real_xs)} real roots")
