import math

import numpy as np
import pytest

from oracles import enclosed_area
from resonant31 import Rejection
from resonant31.bnf import EffectiveParams, effective_params, quartic_coeffs
from resonant31.freq import (
    action_chart, amplitudes_to_chart, area, exact_V, frequencies_nonresonant, frequencies_resonant,
    slow_frequency, tanh_sinh,
)
from resonant31.modal import X_POINT, HoneycombParams, OscillatorSystem, diagonalize, honeycomb_system
from resonant31.portrait import portrait_summary

FIXTURES = [(-1.0, -2.0), (1.0, 2.0), (-1.0, 3.0), (-1.0, 2.0), (1.0, -2.0), (1.0, -3.0)]


def _detuned(a1, a2, J2=1.0, sigma=0.05, chi=1.0):
    return EffectiveParams(a0=0.2, a1=a1, a2=a2, J2=J2, sigma=sigma, chi=chi,
                           a1_static=a1 - sigma / (3.0 * J2 * chi))


def _sample(s, fracs=(0.1, 0.5, 0.9)):
    for r in s.regions:
        for f in fracs:
            yield r, r.e_lo + f * (r.e_hi - r.e_lo)


def test_tanh_sinh_on_endpoint_singularity():
    val, _ = tanh_sinh(lambda s: np.sqrt(s * (1.0 - s)), 0.0, 1.0)
    assert val == pytest.approx(math.pi / 8.0, rel=1e-13)


@pytest.mark.parametrize("a", FIXTURES)
def test_area_matches_oracle(a):
    p = EffectiveParams.direct(*a)
    s = portrait_summary(p)
    for r, E in _sample(s):
        ch = action_chart(p, E, r, s)
        lo, hi = _ends(p, E, r, s)
        assert ch.area == pytest.approx(enclosed_area(a[0], a[1], E, lo, hi, r.tags), rel=1e-10, abs=1e-13)


def _ends(p, E, r, s):
    from resonant31.portrait import level_curve
    lc = level_curve(p, E, r, 8, s)
    return float(lc.x[0]), float(lc.x[-1])


@pytest.mark.parametrize("a", FIXTURES)
def test_area_derivatives_by_finite_differences(a):
    base = _detuned(*a)
    s = portrait_summary(base)
    h = dJ = 1e-6
    for r, E in _sample(s):
        ch = action_chart(base, E, r, s)
        fd = (area(base, E + h, r.name, s) - area(base, E - h, r.name, s)) / (2 * h)
        assert ch.dA_dE == pytest.approx(fd, rel=1e-6)
        pp, pm = base.at_action(1 + dJ), base.at_action(1 - dJ)
        fdi = (area(pp, E, r.name, portrait_summary(pp)) - area(pm, E, r.name, portrait_summary(pm))) / (2 * dJ)
        assert ch.dA_dI2 == pytest.approx(fdi, rel=1e-5)


def test_dA_dI2_vanishes_at_exact_resonance():
    p = EffectiveParams.direct(-1.0, 3.0)
    for r, E in _sample(portrait_summary(p)):
        assert action_chart(p, E, r).dA_dI2 == 0.0


@pytest.mark.parametrize("a", FIXTURES)
def test_area_is_monotone_in_energy(a):
    p = EffectiveParams.direct(*a)
    s = portrait_summary(p)
    for r in s.regions:
        Es = np.linspace(r.e_lo, r.e_hi, 9)[1:-1]
        A = [area(p, E, r, s) for E in Es]
        d = np.diff(A)
        assert np.all(d > 0) or np.all(d < 0)
        assert np.all(np.sign(d) == r.area_sign)


@pytest.mark.parametrize("a", FIXTURES)
def test_frequency_identity(a):
    p = _detuned(*a, J2=1e-4, sigma=0.01, chi=-1200.0)
    s = portrait_summary(p)
    for r, E in _sample(s):
        fp = frequencies_resonant(p, E, r, 1.0, s)
        assert fp.w_plus_nlr - 3.0 * fp.w_minus_nlr == pytest.approx(slow_frequency(p, fp.chart), rel=1e-12)
        assert fp.w_slow == pytest.approx(3.0 * p.chi * p.J2 / fp.chart.dA_dE, rel=1e-14)


def test_printed_form_is_linear_in_energy_at_exact_resonance():
    p = EffectiveParams(a0=0.1, a1=-1.0, a2=3.0, J2=1e-3, sigma=0.0, chi=-50.0, a1_static=-1.0)
    s = portrait_summary(p)
    r = s.region("I")
    Es = np.linspace(r.e_lo, r.e_hi, 7)[1:-1]
    w = [frequencies_resonant(p, E, r, 2.0, s, area_term=False).w_minus_nlr for E in Es]
    assert np.max(np.abs(np.diff(w, 2))) < 1e-12
    fp = frequencies_resonant(p, Es[0], r, 2.0, s, area_term=False)
    assert fp.regime == "resonant_exact"
    assert exact_V(fp.chart) == pytest.approx(0.5 / fp.chart.dA_dE)


def test_area_term_changes_acoustic_frequency():
    p = _detuned(-1.0, 3.0, J2=1e-4, sigma=0.01, chi=-1200.0)
    s = portrait_summary(p)
    r, E = next(_sample(s))
    a = frequencies_resonant(p, E, r, 1.0, s)
    b = frequencies_resonant(p, E, r, 1.0, s, area_term=False)
    assert a.w_minus_nlr - b.w_minus_nlr == pytest.approx(-p.chi * p.J2 * a.chart.area / a.chart.dA_dE, rel=1e-12)


def test_slow_frequency_vanishes_logarithmically_near_separatrix():
    p = EffectiveParams.direct(-1.0, 3.0)
    s = portrait_summary(p)
    r = next(r for r in s.regions if r.e_hi == s.e_sad)
    gaps = [1e-3, 1e-5, 1e-7]
    dAs = [abs(action_chart(p, s.e_sad - g, r, s).dA_dE) for g in gaps]
    steps = np.diff(dAs)
    assert np.all(steps > 0)
    # equal increments per decade of the gap
    assert steps[1] == pytest.approx(steps[0], rel=0.05)


@pytest.fixture(scope="module")
def xpoint():
    s = honeycomb_system(HoneycombParams(0.146, 5.73, *X_POINT, N3=-1e4))
    m = diagonalize(s)
    return s, m, quartic_coeffs(m, s.cubic_v, s.cubic_y)


def test_nonresonant_routes_agree(xpoint):
    s, m, q = xpoint
    a = frequencies_nonresonant(q, m, 0.002, 0.0012)
    b = frequencies_nonresonant(q, m, 0.002, 0.0012, N3=s.cubic_y)
    assert (a.w_minus_nlr, a.w_plus_nlr) == pytest.approx((b.w_minus_nlr, b.w_plus_nlr), rel=1e-13)


def test_nonresonant_shift_is_linear_in_N3(xpoint):
    _, m, q = xpoint
    lin = m.omega_minus
    s1 = frequencies_nonresonant(q, m, 0.002, 0.0012, N3=-1e4).w_minus_nlr - lin
    s2 = frequencies_nonresonant(q, m, 0.002, 0.0012, N3=-2e4).w_minus_nlr - lin
    assert s2 == pytest.approx(2.0 * s1, rel=1e-13)
    z = frequencies_nonresonant(q, m, 0.0, 0.0)
    assert (z.w_minus_nlr, z.w_plus_nlr) == m.omegas


def test_amplitudes_to_chart(xpoint):
    _, m, q = xpoint
    E, I2, reg, p, s = amplitudes_to_chart(0.002, 0.0012, q, m)
    assert I2 == pytest.approx(0.5 * (m.omega_minus * 0.002 ** 2 + 3 * m.omega_plus * 0.0012 ** 2))
    assert reg.name in [r.name for r in s.regions_at(E)]
    with pytest.raises(Rejection):
        amplitudes_to_chart(0.0, 0.0, q, m)
    with pytest.raises(Rejection):
        amplitudes_to_chart(0.002, 0.0, q, m)


def test_x_point_acoustic_frequency(xpoint):
    # the modal ODE at these amplitudes gives a mean acoustic phase rate of 5.90095
    _, m, q = xpoint
    E, _, reg, p, s = amplitudes_to_chart(0.002, 0.0012, q, m)
    fp = frequencies_resonant(p, E, reg, m.omega_minus, s)
    assert fp.w_minus_nlr == pytest.approx(5.904102, abs=2e-6)
    assert fp.w_minus_nlr == pytest.approx(5.90095, rel=1e-3)
    printed = frequencies_resonant(p, E, reg, m.omega_minus, s, area_term=False)
    assert abs(printed.w_minus_nlr - 5.90095) > 0.05


def test_degenerate_zone_rejected():
    with pytest.raises(Rejection):
        area(EffectiveParams.direct(0.0, 1.0), 0.1, "I")


def test_exact_resonance_system():
    # unit mass coupling with frequencies exactly 1 and 3
    k = math.sqrt(56.25 - 27.0)
    s = OscillatorSystem(1.0, 0.5, 1.0, 0.5 * (7.5 + k), 0.5 * (7.5 - k), cubic_v=-0.5, cubic_y=-1.0)
    m = diagonalize(s)
    q = quartic_coeffs(m, s.cubic_v, s.cubic_y)
    E, _, reg, p, summ = amplitudes_to_chart(0.01, 0.004, q, m)
    fp = frequencies_resonant(p, E, reg, m.omega_minus, summ)
    assert fp.regime == "resonant_exact"
    assert abs(fp.chart.dA_dI2) < 1e-6
