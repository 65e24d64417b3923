import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import ellipk, ellippi, real_roots_in_unit, w_moment, w_moment_roots
from resonant31 import Rejection
from resonant31.elliptic import (
    elliptic_K, elliptic_Pi, int_W_complex2, int_W_real4, int_xW_complex2, int_xW_real4, mean_x_complex2,
    moebius_complex2, moebius_real4, w_integrals,
)
from resonant31.quartic import roots_x


def test_K_reference_values():
    assert elliptic_K(0.5) == pytest.approx(1.854074677301372, abs=1e-14)
    assert elliptic_K(0.0) == pytest.approx(0.5 * math.pi, abs=1e-15)
    for m in (-3.0, 0.2, 0.9):
        assert elliptic_Pi(0.0, m) == pytest.approx(elliptic_K(m), rel=1e-14)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20.0, 0.999))
def test_K_matches_mpmath(m):
    assert elliptic_K(m) == pytest.approx(ellipk(m), rel=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.floats(-20.0, 0.99), st.floats(-20.0, 0.999))
def test_Pi_matches_mpmath(n, m):
    assert elliptic_Pi(n, m) == pytest.approx(ellippi(n, m), rel=1e-12)


def test_domain_rejected():
    with pytest.raises(Rejection):
        elliptic_K(1.0)
    with pytest.raises(Rejection):
        elliptic_Pi(1.2, 0.3)


def test_symmetric_roots():
    mob = moebius_real4(0.1, 0.3, 0.7, 0.9)
    assert mob.lam == pytest.approx(1.0 / 9.0, rel=1e-14)
    assert mob.k == pytest.approx(0.5, rel=1e-14)
    assert mob.C == 0.0 and mob.c_is_zero


ROOTS = [(0.1, 0.25, 0.6, 0.95), (0.02, 0.03, 0.5, 0.9), (0.3, 0.6, 0.61, 0.99), (0.1, 0.3, 0.7, 0.9)]


@pytest.mark.parametrize("rs", ROOTS)
def test_real4_map_and_signs(rs):
    mob = moebius_real4(*rs, lead=1.7)
    k = mob.k
    got = [mob.T(z) for z in (1.0 / k, 1.0, -1.0, -1.0 / k)]
    np.testing.assert_allclose(got, rs, atol=1e-13)
    assert mob.A * mob.D - mob.B * mob.C < 0
    assert mob.c > 0
    if mob.C != 0.0:
        assert abs(mob.a_shift) > 1.0 / k


@pytest.mark.parametrize("rs", ROOTS)
def test_real4_pushforward(rs):
    # -P(T z) (C z + D)^4 = c (z^2 - 1)(1 - k^2 z^2)
    lead = 1.7
    mob = moebius_real4(*rs, lead=lead)
    for z in (1.1, 1.7, -1.3, 0.4, 5.0):
        x = mob.T(z)
        lhs = -lead * np.prod([x - r for r in rs]) * (mob.C * z + mob.D) ** 4
        assert lhs == pytest.approx(mob.c * (z * z - 1.0) * (1.0 - mob.k ** 2 * z * z), rel=1e-10)


@pytest.mark.parametrize("rs", ROOTS)
def test_real4_integrals_match_quadrature(rs):
    mob = moebius_real4(*rs, lead=1.7)
    for br, (lo, hi) in enumerate((rs[:2], rs[2:])):
        assert int_W_real4(mob, br) == pytest.approx(w_moment_roots(rs, 1.7, lo, hi), rel=1e-11)
        assert int_xW_real4(mob, br) == pytest.approx(w_moment_roots(rs, 1.7, lo, hi, 1), rel=1e-11)


def test_near_symmetric_continuity():
    base = int_xW_real4(moebius_real4(0.1, 0.3, 0.7, 0.9), 0)
    off = int_xW_real4(moebius_real4(0.1, 0.3, 0.7, 0.9 + 1e-9), 0)
    assert off == pytest.approx(base, rel=1e-7)


def test_coincident_roots_rejected():
    with pytest.raises(Rejection):
        moebius_real4(0.1, 0.1 + 1e-10, 0.5, 0.9)
    with pytest.raises(Rejection):
        moebius_real4(0.5, 0.1, 0.6, 0.9)


PAIRS = [(0.2, 0.7, 0.5 + 0.3j), (0.05, 0.9, -0.4 + 1.1j), (0.3, 0.35, 0.9 + 0.01j), (0.1, 0.6, 0.35 + 0.2j)]


@pytest.mark.parametrize("x1,x2,z", PAIRS)
def test_complex2_map(x1, x2, z):
    mob = moebius_complex2(x1, x2, z, z.conjugate(), lead=1.3)
    assert mob.k.real == 0.0 and mob.k.imag != 0.0
    assert mob.n < 1.0 and mob.c > 0
    assert mob.T(1.0) == pytest.approx(x1, abs=1e-13)
    assert mob.T(-1.0) == pytest.approx(x2, abs=1e-13)
    pair = sorted([mob.T(1.0 / mob.k), mob.T(-1.0 / mob.k)], key=lambda w: w.imag)
    np.testing.assert_allclose(pair, [z.conjugate(), z], atol=1e-12)
    for s in (0.1, 0.5, -0.7, 2.0):
        x = mob.T(s)
        lhs = (-1.3 * np.prod([x - r for r in mob.roots]) * (mob.C * s + mob.D) ** 4).real
        assert lhs == pytest.approx(mob.c * (1.0 - s * s) * (1.0 - mob.k2 * s * s), rel=1e-10)


@pytest.mark.parametrize("x1,x2,z", PAIRS)
def test_complex2_integrals_match_quadrature(x1, x2, z):
    rs = (x1, x2, z, z.conjugate())
    mob = moebius_complex2(*rs, lead=1.3)
    w0 = w_moment_roots(rs, 1.3, x1, x2)
    w1 = w_moment_roots(rs, 1.3, x1, x2, 1)
    assert int_W_complex2(mob) == pytest.approx(w0, rel=1e-11)
    assert int_xW_complex2(mob) == pytest.approx(w1, rel=1e-11)
    assert mean_x_complex2(mob) == pytest.approx(w1 / w0, rel=1e-11)


def test_complex2_small_n_branch():
    # pair placed so that C* is tiny: the series form must agree with quadrature
    rs = (0.2, 0.6, 0.4 + 0.3j, 0.4 - 0.3j)
    mob = moebius_complex2(*rs)
    assert mob.n < 1e-3
    assert int_xW_complex2(mob) == pytest.approx(w_moment_roots(rs, 1.0, 0.2, 0.6, 1), rel=1e-11)


@settings(max_examples=150, deadline=None)
@given(st.floats(-4, 4), st.floats(-4, 4), st.floats(-1.5, 1.5))
def test_level_polynomial_integrals(a1, a2, E):
    assume(abs(E) > 1e-3)
    try:
        r = roots_x(a1, a2, E)
    except Rejection:
        return
    assume(r.count in (2, 4))
    ref = real_roots_in_unit(a1, a2, E)
    assume(len(ref) == r.count and min(np.diff([0.0, *ref, 1.0])) > 1e-3)
    lead = 0.25 * a2 * a2 + 1.0
    for lo, hi in zip(r.xs[::2], r.xs[1::2]):
        try:
            w0, w1 = w_integrals(r.complex_xs, r.xs, (lo, hi), lead)
        except Rejection:
            return
        assert w0 == pytest.approx(w_moment(a1, a2, E, lo, hi), rel=1e-8)
        assert w1 == pytest.approx(w_moment(a1, a2, E, lo, hi, 1), rel=1e-8)
