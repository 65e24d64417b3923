# cython: language_level=3
"""Compiled hot kernels; mirrors ``_pykernels`` name for name."""
import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs, cos, sin, acos, atan, atanh, pow, copysign, hypot

cnp.import_array()

cdef double _RF_TOL = 1e-16
cdef double _RJ_TOL = 1e-16


cpdef double carlson_rf(double x, double y, double z):
    cdef double a0 = (x + y + z) / 3.0
    cdef double q = pow(3.0 * _RF_TOL, -1.0 / 6.0) * max(fabs(a0 - x), fabs(a0 - y), fabs(a0 - z))
    cdef double a = a0, xm = x, ym = y, zm = z, f = 1.0
    cdef double sx, sy, sz, lam, X, Y, Z, e2, e3
    while f * q >= fabs(a):
        sx = sqrt(xm); sy = sqrt(ym); sz = sqrt(zm)
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
    return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / sqrt(a)


cdef inline double _rc_one(double e):
    cdef double r
    if fabs(e) < 1e-4:
        return 1.0 - e / 3.0 + e * e / 5.0 - e * e * e / 7.0 + e * e * e * e / 9.0
    if e > 0:
        r = sqrt(e)
        return atan(r) / r
    r = sqrt(-e)
    return atanh(r) / r


cpdef double carlson_rj(double x, double y, double z, double p):
    cdef double a0 = (x + y + z + 2.0 * p) / 5.0
    cdef double delta = (p - x) * (p - y) * (p - z)
    cdef double q = pow(0.25 * _RJ_TOL, -1.0 / 6.0) * max(fabs(a0 - x), fabs(a0 - y), fabs(a0 - z), fabs(a0 - p))
    cdef double a = a0, xm = x, ym = y, zm = z, pm = p, f = 1.0, f3 = 1.0, acc = 0.0
    cdef double sx, sy, sz, sp, lam, d, e, X, Y, Z, P, e2, e3, e4, e5, series
    while f * q >= fabs(a):
        sx = sqrt(xm); sy = sqrt(ym); sz = sqrt(zm); sp = sqrt(pm)
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
    e3 = X * Y * Z + 2.0 * e2 * P + 4.0 * P * P * P
    e4 = (2.0 * X * Y * Z + e2 * P + 3.0 * P * P * P) * P
    e5 = X * Y * Z * P * P
    series = (1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
              - 9.0 * e2 * e3 / 52.0 + 3.0 * e5 / 26.0)
    return f * series / (a * sqrt(a)) + 6.0 * acc


cdef inline double _cbrt(double v):
    return copysign(pow(fabs(v), 1.0 / 3.0), v)


cdef inline double complex _polish(double complex t, double p, double q, double r):
    cdef int it
    cdef double complex t2, val, der, tn, tn2, valn
    for it in range(2):
        t2 = t * t
        val = (t2 + p) * t2 + q * t + r
        der = 4.0 * t2 * t + 2.0 * p * t + q
        if der.real == 0.0 and der.imag == 0.0:
            break
        tn = t - val / der
        tn2 = tn * tn
        valn = (tn2 + p) * tn2 + q * tn + r
        if hypot(valn.real, valn.imag) < hypot(val.real, val.imag):
            t = tn
        else:
            break
    return t


def quartic_t(double a1, double a2, double E):
    cdef double complex rts[4]
    cdef double d[3]
    _quartic_impl(a1, a2, E, rts, d)
    return (rts[0], rts[1], rts[2], rts[3]), d[0], d[1], d[2]


cdef void _quartic_impl(double a1, double a2, double E, double complex* rts, double* d):
    cdef double lead = 0.5 * a2 + a1 - E
    cdef double p = (a1 - 2.0 * E) / lead
    cdef double q = -1.0 / lead
    cdef double r = -E / lead
    cdef double ps = -(p * p + 12.0 * r) / 3.0
    cdef double qs = -(2.0 * p * p * p - 72.0 * p * r + 27.0 * q * q) / 27.0
    cdef double disc = -4.0 * ps * ps * ps - 27.0 * qs * qs
    cdef double sq, h, u, y, arg, s, c1, fv, df, sn, rs, dd, vs, sg
    cdef double complex sd, t
    cdef int it, i, j
    if disc <= 0.0:
        sq = sqrt(-disc / 108.0)
        h = -0.5 * qs
        if h >= 0:
            u = _cbrt(h + sq)
        else:
            u = _cbrt(h - sq)
        if u != 0.0:
            y = u - ps / (3.0 * u)
        else:
            y = _cbrt(-qs)
    else:
        arg = -0.5 * qs * sqrt((-3.0 / ps) * (-3.0 / ps) * (-3.0 / ps))
        if arg > 1.0:
            arg = 1.0
        elif arg < -1.0:
            arg = -1.0
        y = 2.0 * sqrt(-ps / 3.0) * cos(acos(arg) / 3.0)
    s = y - 2.0 * p / 3.0
    c1 = p * p - 4.0 * r
    for it in range(3):
        fv = ((s + 2.0 * p) * s + c1) * s - q * q
        df = (3.0 * s + 4.0 * p) * s + c1
        if df == 0:
            break
        sn = s - fv / df
        if sn > 0 and fabs(((sn + 2.0 * p) * sn + c1) * sn - q * q) < fabs(fv):
            s = sn
        else:
            break
    rs = sqrt(s)
    for i in range(2):
        vs = 1.0 if i == 0 else -1.0
        dd = vs * 2.0 * q / rs - 2.0 * p - s
        d[i] = dd
        if dd >= 0:
            sd = sqrt(dd)
        else:
            sd = 1j * sqrt(-dd)
        for j in range(2):
            sg = 1.0 if j == 0 else -1.0
            t = 0.5 * (-vs * rs + sg * sd)
            rts[2 * i + j] = _polish(t, p, q, r)
    d[2] = s


def quartic_t_batch(a1, a2, E):
    cdef double[:] A1 = np.ascontiguousarray(a1, dtype=float)
    cdef double[:] A2 = np.ascontiguousarray(a2, dtype=float)
    cdef double[:] EE = np.ascontiguousarray(E, dtype=float)
    cdef Py_ssize_t n = A1.shape[0], i, j
    roots = np.empty((n, 4), dtype=complex)
    dp = np.empty(n)
    dm = np.empty(n)
    ss = np.empty(n)
    cdef double complex[:, :] R = roots
    cdef double[:] DP = dp, DM = dm, SS = ss
    cdef double complex rts[4]
    cdef double d[3]
    for i in range(n):
        _quartic_impl(A1[i], A2[i], EE[i], rts, d)
        for j in range(4):
            R[i, j] = rts[j]
        DP[i] = d[0]
        DM[i] = d[1]
        SS[i] = d[2]
    return roots, dp, dm, ss


cdef inline void _strang_step(double* y, double[:, :] C, double w1, double w2, double h,
                              double c1, double s1, double c2, double s2) noexcept:
    # exact half-step rotations around a cubic kick of length h
    cdef double q1 = y[0], q2 = y[1], p1 = y[2], p2 = y[3], tq, m0, m1, m2, m3
    tq = q1 * c1 + p1 * s1 / w1
    p1 = -q1 * w1 * s1 + p1 * c1
    q1 = tq
    tq = q2 * c2 + p2 * s2 / w2
    p2 = -q2 * w2 * s2 + p2 * c2
    q2 = tq
    m0 = q1 * q1 * q1; m1 = q1 * q1 * q2; m2 = q1 * q2 * q2; m3 = q2 * q2 * q2
    p1 += h * (C[0, 0] * m0 + C[0, 1] * m1 + C[0, 2] * m2 + C[0, 3] * m3)
    p2 += h * (C[1, 0] * m0 + C[1, 1] * m1 + C[1, 2] * m2 + C[1, 3] * m3)
    tq = q1 * c1 + p1 * s1 / w1
    p1 = -q1 * w1 * s1 + p1 * c1
    q1 = tq
    tq = q2 * c2 + p2 * s2 / w2
    p2 = -q2 * w2 * s2 + p2 * c2
    q2 = tq
    y[0] = q1; y[1] = q2; y[2] = p1; y[3] = p2


def strang_run(double w1, double w2, cc, state, double dt, long nsteps, long stride, int scheme):
    cdef double[:, :] C = np.ascontiguousarray(cc, dtype=float)
    cdef double y[4]
    y[0] = state[0]; y[1] = state[1]; y[2] = state[2]; y[3] = state[3]
    cdef long nout = nsteps // stride + 1, n, k = 1
    cdef int j
    out = np.empty((nout, 4))
    cdef double[:, :] O = out
    O[0, 0] = y[0]; O[0, 1] = y[1]; O[0, 2] = y[2]; O[0, 3] = y[3]
    cdef double ww1 = w1 * w1, ww2 = w2 * w2, h2 = 0.5 * dt
    cdef double f1, f2, m0, m1, m2, m3
    cdef double hs[3]
    cdef double cs[3][4]
    cdef double cbrt2 = 2.0 ** (1.0 / 3.0)
    hs[0] = dt / (2.0 - cbrt2); hs[1] = -cbrt2 * dt / (2.0 - cbrt2); hs[2] = hs[0]
    if scheme == 1:
        hs[0] = dt
    for j in range(3):
        cs[j][0] = cos(0.5 * w1 * hs[j]); cs[j][1] = sin(0.5 * w1 * hs[j])
        cs[j][2] = cos(0.5 * w2 * hs[j]); cs[j][3] = sin(0.5 * w2 * hs[j])
    for n in range(1, nsteps + 1):
        if scheme == 0:
            m0 = y[0] * y[0] * y[0]; m1 = y[0] * y[0] * y[1]; m2 = y[0] * y[1] * y[1]; m3 = y[1] * y[1] * y[1]
            f1 = C[0, 0] * m0 + C[0, 1] * m1 + C[0, 2] * m2 + C[0, 3] * m3
            f2 = C[1, 0] * m0 + C[1, 1] * m1 + C[1, 2] * m2 + C[1, 3] * m3
            y[2] += h2 * (f1 - ww1 * y[0])
            y[3] += h2 * (f2 - ww2 * y[1])
            y[0] += dt * y[2]
            y[1] += dt * y[3]
            m0 = y[0] * y[0] * y[0]; m1 = y[0] * y[0] * y[1]; m2 = y[0] * y[1] * y[1]; m3 = y[1] * y[1] * y[1]
            f1 = C[0, 0] * m0 + C[0, 1] * m1 + C[0, 2] * m2 + C[0, 3] * m3
            f2 = C[1, 0] * m0 + C[1, 1] * m1 + C[1, 2] * m2 + C[1, 3] * m3
            y[2] += h2 * (f1 - ww1 * y[0])
            y[3] += h2 * (f2 - ww2 * y[1])
        elif scheme == 1:
            _strang_step(y, C, w1, w2, dt, cs[0][0], cs[0][1], cs[0][2], cs[0][3])
        else:
            for j in range(3):
                _strang_step(y, C, w1, w2, hs[j], cs[j][0], cs[j][1], cs[j][2], cs[j][3])
        if n % stride == 0:
            if not (fabs(y[0]) < 1e6 and fabs(y[1]) < 1e6 and fabs(y[2]) < 1e6 and fabs(y[3]) < 1e6):
                raise FloatingPointError("trajectory blow-up at step %d" % n)
            O[k, 0] = y[0]; O[k, 1] = y[1]; O[k, 2] = y[2]; O[k, 3] = y[3]
            k += 1
    return out


cdef int _midpoint(double* x, double* psi, double h, double a1, double a2, double kap):
    cdef double x0 = x[0], p0 = psi[0], xn, pn, xm, pm, omx, sx, so, b, db, d2b, c, s
    cdef double fx, fp, jxx, jxp, jpx, jpp, g1, g2, m11, m12, m21, m22, det, dx, dp
    cdef int it
    omx = 1.0 - x0; sx = sqrt(x0); so = sqrt(omx)
    b = omx * so * sx
    db = (1.0 - 4.0 * x0) * so / (2.0 * sx)
    xn = x0 + h * kap * b * sin(p0)
    pn = p0 + h * kap * (a2 * x0 + a1 + db * cos(p0))
    for it in range(50):
        xm = 0.5 * (x0 + xn)
        pm = 0.5 * (p0 + pn)
        if not (0.0 < xm < 1.0):
            return -1
        omx = 1.0 - xm; sx = sqrt(xm); so = sqrt(omx)
        b = omx * so * sx
        db = (1.0 - 4.0 * xm) * so / (2.0 * sx)
        d2b = (8.0 * xm * xm - 4.0 * xm - 1.0) / (4.0 * xm * sx * so)
        c = cos(pm); s = sin(pm)
        fx = kap * b * s
        fp = kap * (a2 * xm + a1 + db * c)
        jxx = kap * db * s; jxp = kap * b * c
        jpx = kap * (a2 + d2b * c); jpp = -kap * db * s
        g1 = xn - x0 - h * fx
        g2 = pn - p0 - h * fp
        m11 = 1.0 - 0.5 * h * jxx; m12 = -0.5 * h * jxp
        m21 = -0.5 * h * jpx; m22 = 1.0 - 0.5 * h * jpp
        det = m11 * m22 - m12 * m21
        dx = (g1 * m22 - g2 * m12) / det
        dp = (m11 * g2 - m21 * g1) / det
        xn -= dx
        pn -= dp
        if fabs(dx) <= 1e-16 * max(1.0, fabs(xn)) and fabs(dp) <= 1e-16 * max(1.0, fabs(pn)):
            break
    x[0] = xn
    psi[0] = pn
    return 0


def reduced_run(double a1, double a2, double kap, double x0, double psi0, double dt, long nsteps, int order):
    cdef double w4 = 1.0 / (2.0 - pow(2.0, 1.0 / 3.0))
    cdef double y1 = 0.784513610477560, y2 = 0.235573213359357, y3 = -1.17767998417887
    cdef double[7] ws
    cdef int nw, j
    if order == 2:
        ws[0] = 1.0; nw = 1
    elif order == 4:
        ws[0] = w4; ws[1] = 1.0 - 2.0 * w4; ws[2] = w4; nw = 3
    elif order == 6:
        ws[0] = y1; ws[1] = y2; ws[2] = y3; ws[3] = 1.0 - 2.0 * (y1 + y2 + y3)
        ws[4] = y3; ws[5] = y2; ws[6] = y1; nw = 7
    else:
        raise KeyError(order)
    out = np.empty((nsteps + 1, 2))
    cdef double[:, :] O = out
    cdef double x = x0, psi = psi0
    cdef long n
    O[0, 0] = x; O[0, 1] = psi
    for n in range(1, nsteps + 1):
        for j in range(nw):
            if _midpoint(&x, &psi, ws[j] * dt, a1, a2, kap) != 0:
                raise FloatingPointError("reduced flow left 0<x<1")
        O[n, 0] = x; O[n, 1] = psi
    return out
