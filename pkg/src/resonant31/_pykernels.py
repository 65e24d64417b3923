"""Pure-Python hot kernels.

Same names and signatures as the compiled ``_ckernels`` module; ``kernels``
picks one at import time.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

_RF_TOL = 1e-16
_RJ_TOL = 1e-16

# Yoshida composition weights for the symmetric midpoint step.
_W4 = (1.0 / (2.0 - 2.0 ** (1.0 / 3.0)),)
_W4 = (_W4[0], 1.0 - 2.0 * _W4[0], _W4[0])
_Y6 = (0.784513610477560, 0.235573213359357, -1.17767998417887)
_W6 = _Y6 + (1.0 - 2.0 * sum(_Y6),) + _Y6[::-1]


def carlson_rf(x: float, y: float, z: float) -> float:
    """Carlson's R_F by duplication (Carlson 1995, Algorithm 1)."""
    a0 = (x + y + z) / 3.0
    q = (3.0 * _RF_TOL) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    a = a0
    xm, ym, zm = x, y, z
    f = 1.0
    while f * q >= abs(a):
        sx, sy, sz = math.sqrt(xm), math.sqrt(ym), math.sqrt(zm)
        lam = sx * sy + sx * sz + sy * sz
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        a = 0.25 * (a + lam)
        f *= 0.25
    X = (a0 - x) * f / a
    Y = (a0 - y) * f / a
    Z = -X - Y
    e2 = X * Y - Z * Z
    e3 = X * Y * Z
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / math.sqrt(a)


def _rc_one(e: float) -> float:
    # R_C(1, 1+e) for e > -1
    if abs(e) < 1e-4:
        return 1.0 - e / 3.0 + e * e / 5.0 - e ** 3 / 7.0 + e ** 4 / 9.0
    if e > 0:
        r = math.sqrt(e)
        return math.atan(r) / r
    r = math.sqrt(-e)
    return math.atanh(r) / r


def carlson_rj(x: float, y: float, z: float, p: float) -> float:
    """Carlson's R_J for p > 0 by duplication (Carlson 1995, Algorithm 3)."""
    a0 = (x + y + z + 2.0 * p) / 5.0
    delta = (p - x) * (p - y) * (p - z)
    q = (0.25 * _RJ_TOL) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z), abs(a0 - p))
    a = a0
    xm, ym, zm, pm = x, y, z, p
    f = 1.0
    f3 = 1.0
    acc = 0.0
    while f * q >= abs(a):
        sx, sy, sz, sp = math.sqrt(xm), math.sqrt(ym), math.sqrt(zm), math.sqrt(pm)
        lam = sx * sy + sx * sz + sy * sz
        d = (sp + sx) * (sp + sy) * (sp + sz)
        e = delta * f3 / (d * d)
        acc += f * _rc_one(e) / d
        xm = 0.25 * (xm + lam)
        ym = 0.25 * (ym + lam)
        zm = 0.25 * (zm + lam)
        pm = 0.25 * (pm + lam)
        a = 0.25 * (a + lam)
        f *= 0.25
        f3 *= 1.0 / 64.0
    X = (a0 - x) * f / a
    Y = (a0 - y) * f / a
    Z = (a0 - z) * f / a
    P = -(X + Y + Z) / 2.0
    e2 = X * Y + X * Z + Y * Z - 3.0 * P * P
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P ** 3
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P ** 3) * P
    e5 = X * Y * Z * P * P
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
              - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (a * math.sqrt(a)) + 6.0 * acc


# ---------------------------------------------------------------- quartic

def _cbrt(v: float) -> float:
    return math.copysign(abs(v) ** (1.0 / 3.0), v)


def _polish(t: complex, p: float, q: float, r: float) -> complex:
    # two guarded Newton steps on t^4 + p t^2 + q t + r
    for _ in range(2):
        t2 = t * t
        val = (t2 + p) * t2 + q * t + r
        der = 4.0 * t2 * t + 2.0 * p * t + q
        if der == 0:
            break
        tn = t - val / der
        tn2 = tn * tn
        if abs((tn2 + p) * tn2 + q * tn + r) < abs(val):
            t = tn
        else:
            break
    return t


def quartic_t(a1: float, a2: float, E: float):
    """Roots of the depressed quartic t^4 + p t^2 + q t + r by the resolvent cubic.

    Returns (roots, delta_plus, delta_minus, s_star) with roots a tuple of
    four complex numbers ordered (t_+^+, t_+^-, t_-^+, t_-^-).
    """
    lead = 0.5 * a2 + a1 - E
    p = (a1 - 2.0 * E) / lead
    q = -1.0 / lead
    r = -E / lead
    ps = -(p * p + 12.0 * r) / 3.0
    qs = -(2.0 * p ** 3 - 72.0 * p * r + 27.0 * q * q) / 27.0
    disc = -4.0 * ps ** 3 - 27.0 * qs * qs
    if disc <= 0.0:
        sq = math.sqrt(-disc / 108.0)
        h = -0.5 * qs
        u = _cbrt(h + sq) if h >= 0 else _cbrt(h - sq)
        y = u - ps / (3.0 * u) if u != 0.0 else _cbrt(-qs)
    else:
        arg = -0.5 * qs * math.sqrt((-3.0 / ps) ** 3)
        arg = min(1.0, max(-1.0, arg))
        y = 2.0 * math.sqrt(-ps / 3.0) * math.cos(math.acos(arg) / 3.0)
    s = y - 2.0 * p / 3.0
    # Newton polish of the resolvent s^3 + 2p s^2 + (p^2-4r) s - q^2
    c1 = p * p - 4.0 * r
    for _ in range(3):
        f = ((s + 2.0 * p) * s + c1) * s - q * q
        df = (3.0 * s + 4.0 * p) * s + c1
        if df == 0:
            break
        sn = s - f / df
        if sn > 0 and abs(((sn + 2.0 * p) * sn + c1) * sn - q * q) < abs(f):
            s = sn
        else:
            break
    rs = math.sqrt(s)
    deltas = []
    roots = []
    for vs in (1.0, -1.0):
        d = vs * 2.0 * q / rs - 2.0 * p - s
        deltas.append(d)
        sd = cmath.sqrt(d)
        for sg in (1.0, -1.0):
            t = 0.5 * (-vs * rs + sg * sd)
            roots.append(_polish(t, p, q, r))
    return tuple(roots), deltas[0], deltas[1], s


def quartic_t_batch(a1, a2, E):
    """Vectorized ``quartic_t`` over equal-length arrays."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    E = np.asarray(E, dtype=float)
    n = a1.shape[0]
    roots = np.empty((n, 4), dtype=complex)
    dp = np.empty(n)
    dm = np.empty(n)
    ss = np.empty(n)
    for i in range(n):
        rt, dp[i], dm[i], ss[i] = quartic_t(float(a1[i]), float(a2[i]), float(E[i]))
        roots[i] = rt
    return roots, dp, dm, ss


# ---------------------------------------------------------------- integrators

def _cubic_force(cc, q1, q2):
    m0, m1, m2, m3 = q1 ** 3, q1 * q1 * q2, q1 * q2 * q2, q2 ** 3
    return (cc[0][0] * m0 + cc[0][1] * m1 + cc[0][2] * m2 + cc[0][3] * m3,
            cc[1][0] * m0 + cc[1][1] * m1 + cc[1][2] * m2 + cc[1][3] * m3)


def _strang_step(y, cc, w1, w2, h, rot):
    c1, s1, c2, s2 = rot
    q1, q2, p1, p2 = y
    q1, p1 = q1 * c1 + p1 * s1 / w1, -q1 * w1 * s1 + p1 * c1
    q2, p2 = q2 * c2 + p2 * s2 / w2, -q2 * w2 * s2 + p2 * c2
    f1, f2 = _cubic_force(cc, q1, q2)
    p1 += h * f1
    p2 += h * f2
    q1, p1 = q1 * c1 + p1 * s1 / w1, -q1 * w1 * s1 + p1 * c1
    q2, p2 = q2 * c2 + p2 * s2 / w2, -q2 * w2 * s2 + p2 * c2
    return q1, q2, p1, p2


def strang_run(w1, w2, cc, state, dt, nsteps, stride, scheme):
    """Integrate q'' + diag(w1^2, w2^2) q = c(q).

    ``cc`` is the 2x4 table of cubic coefficients of c(q) on the monomials
    (q1^3, q1^2 q2, q1 q2^2, q2^3).  ``scheme`` 0 is kick-drift-kick Stormer-Verlet,
    1 is the Strang splitting with the exact harmonic flow and 2 its fourth-order
    triple-jump composition.  Returns the states sampled every ``stride`` steps,
    first row being the initial state.
    """
    cc = [[float(v) for v in row] for row in np.asarray(cc)]
    q1, q2, p1, p2 = (float(v) for v in state)
    nout = nsteps // stride + 1
    out = np.empty((nout, 4))
    out[0] = (q1, q2, p1, p2)
    ww1, ww2 = w1 * w1, w2 * w2
    h2 = 0.5 * dt
    cbrt2 = 2.0 ** (1.0 / 3.0)
    hs = [dt] if scheme == 1 else [dt / (2.0 - cbrt2), -cbrt2 * dt / (2.0 - cbrt2), dt / (2.0 - cbrt2)]
    rots = [(math.cos(0.5 * w1 * h), math.sin(0.5 * w1 * h), math.cos(0.5 * w2 * h), math.sin(0.5 * w2 * h))
            for h in hs]
    k = 1
    for n in range(1, nsteps + 1):
        if scheme == 0:
            f1, f2 = _cubic_force(cc, q1, q2)
            p1 += h2 * (f1 - ww1 * q1)
            p2 += h2 * (f2 - ww2 * q2)
            q1 += dt * p1
            q2 += dt * p2
            f1, f2 = _cubic_force(cc, q1, q2)
            p1 += h2 * (f1 - ww1 * q1)
            p2 += h2 * (f2 - ww2 * q2)
        else:
            y = (q1, q2, p1, p2)
            for h, rot in zip(hs, rots):
                y = _strang_step(y, cc, w1, w2, h, rot)
            q1, q2, p1, p2 = y
        if n % stride == 0:
            if not (abs(q1) < 1e6 and abs(q2) < 1e6 and abs(p1) < 1e6 and abs(p2) < 1e6):
                raise FloatingPointError("trajectory blow-up at step %d" % n)
            out[k] = (q1, q2, p1, p2)
            k += 1
    return out


def _reduced_field(x, psi, a1, a2, kap):
    omx = 1.0 - x
    sx = math.sqrt(x)
    so = math.sqrt(omx)
    b = omx * so * sx
    db = (1.0 - 4.0 * x) * so / (2.0 * sx)
    d2b = (8.0 * x * x - 4.0 * x - 1.0) / (4.0 * x * sx * so)
    c, s = math.cos(psi), math.sin(psi)
    fx = kap * b * s
    fp = kap * (a2 * x + a1 + db * c)
    return fx, fp, kap * db * s, kap * b * c, kap * (a2 + d2b * c), -kap * db * s


def _midpoint(x, psi, h, a1, a2, kap):
    fx, fp = _reduced_field(x, psi, a1, a2, kap)[:2]
    xn, pn = x + h * fx, psi + h * fp
    for _ in range(50):
        xm, pm = 0.5 * (x + xn), 0.5 * (psi + pn)
        if not 0.0 < xm < 1.0:
            raise FloatingPointError("reduced flow left 0<x<1")
        fx, fp, jxx, jxp, jpx, jpp = _reduced_field(xm, pm, a1, a2, kap)
        g1 = xn - x - h * fx
        g2 = pn - psi - h * fp
        m11, m12 = 1.0 - 0.5 * h * jxx, -0.5 * h * jxp
        m21, m22 = -0.5 * h * jpx, 1.0 - 0.5 * h * jpp
        det = m11 * m22 - m12 * m21
        dx = (g1 * m22 - g2 * m12) / det
        dp = (m11 * g2 - m21 * g1) / det
        xn -= dx
        pn -= dp
        if abs(dx) <= 1e-16 * max(1.0, abs(xn)) and abs(dp) <= 1e-16 * max(1.0, abs(pn)):
            break
    return xn, pn


def reduced_run(a1, a2, kap, x0, psi0, dt, nsteps, order):
    """Integrate x' = kap b(x) sin psi, psi' = kap (a2 x + a1 + b'(x) cos psi).

    Symmetric composition of implicit midpoint steps of order 2, 4 or 6.
    Returns an (nsteps+1, 2) array of (x, psi) with psi unwrapped.
    """
    weights = {2: (1.0,), 4: _W4, 6: _W6}[order]
    out = np.empty((nsteps + 1, 2))
    x, psi = float(x0), float(psi0)
    out[0] = (x, psi)
    for n in range(1, nsteps + 1):
        for w in weights:
            x, psi = _midpoint(x, psi, w * dt, a1, a2, kap)
        out[n] = (x, psi)
    return out
