"""The ten acceptance criteria, each at its stated tolerance and time budget.

Every test records one PASS/FAIL line; the lines are collected in the
"acceptance criteria" section of the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from oracles import companion_roots_batch, real_roots_in_unit, w_moment
from resonant31 import Rejection
from resonant31.bandgap import (
    PERIMETER, SweepConfig, Thresholds, bandgap_report, boundary_intersections, boundary_point,
)
from resonant31.bnf import EffectiveParams, b, effective_params, quartic_coeffs, reduced_hamiltonian
from resonant31.freq import action_chart, area, frequencies_nonresonant, frequencies_resonant
from resonant31.modal import (
    X_POINT, HoneycombParams, OscillatorSystem, diagonalize, honeycomb_system, in_triangle,
)
from resonant31.portrait import classify, component, g_boundary, gtilde_boundary, portrait_summary
from resonant31.quartic import roots_x
from resonant31.verify import DRIFT_BOUND, integrate_exact, measure_period, modal_model, modal_spectrum

FIXTURES = {
    (-1.0, -2.0): "Z10",
    (1.0, 2.0): "Z01",
    (-1.0, 3.0): "Z21plus",
    (-1.0, 2.0): "Z21minus",
    (1.0, -2.0): "Z12plus",
    (1.0, -3.0): "Z12minus",
}

# Spectral remainder constant: twice the largest ratio |rel err| / eps^4 over
# 12 nonresonant points of the (0.09, 8) boundary path at a = (0.002, 0.0014)
# (largest ratio 8.87e6).  Frozen here; not a published value.
SPECTRAL_C = 1.8e7


def _detuned(a1, a2, J2, sigma, chi):
    return EffectiveParams(a0=0.2, a1=a1, a2=a2, J2=J2, sigma=sigma, chi=chi,
                           a1_static=a1 - sigma / (3.0 * J2 * chi))


def test_criterion_01_diagonalization(acceptance_line):
    rng = np.random.default_rng(101)
    t0 = time.perf_counter()
    worst_o = worst_d = 0.0
    done = 0
    while done < 1000:
        A = rng.normal(size=(2, 2))
        M = A @ A.T + 0.2 * np.eye(2)
        k1, k2 = rng.uniform(0.1, 20.0, 2)
        try:
            m = diagonalize(OscillatorSystem(M[0, 0], M[0, 1], M[1, 1], k1, k2))
        except Rejection:
            continue
        phi = m.phi
        worst_o = max(worst_o, np.max(np.abs(phi.T @ M @ phi - np.eye(2))))
        lam = np.diag([m.omega_minus ** 2, m.omega_plus ** 2])
        worst_d = max(worst_d, np.max(np.abs(phi.T @ np.diag([k1, k2]) @ phi - lam)))
        done += 1
    dt = time.perf_counter() - t0
    ok = worst_o < 1e-12 and worst_d < 1e-12 and dt < 1.0
    acceptance_line(1, "diagonalization", ok, f"ortho {worst_o:.1e}, diag {worst_d:.1e}, {dt:.2f} s")
    assert ok


def test_criterion_02_reduced_identity(acceptance_line):
    rng = np.random.default_rng(102)
    t0 = time.perf_counter()
    worst = 0.0
    # admissible: cells whose detuning puts them in the resonant regime
    systems = []
    while len(systems) < 10:
        k = rng.uniform(0.0, 4.0 * math.pi / 3.0), rng.uniform(0.0, 2.0 * math.pi / 3.0)
        if not in_triangle(*k) or k[0] < 1e-3:
            continue
        s = honeycomb_system(HoneycombParams(rng.uniform(0.05, 0.3), rng.uniform(1.0, 20.0), *k,
                                             N3=rng.uniform(-2e4, 2e4)))
        m = diagonalize(s)
        q = quartic_coeffs(m, 0.0, s.cubic_y)
        if Thresholds().regime(m.sigma) == "resonant" and abs(m.sigma) < 30.0 * abs(q.chi) * 1e-3:
            systems.append((m, q))
    for i in range(1000):
        m, q = systems[i % 10]
        # and actions at which the detuning is at most ten times the nonlinear shift
        j_lo = max(1e-6, abs(m.sigma) / (30.0 * abs(q.chi)))
        x, psi = rng.uniform(0.001, 0.999), rng.uniform(-math.pi, math.pi)
        J2 = 10 ** rng.uniform(math.log10(j_lo), -2)
        p = effective_params(q, m, J2)
        lhs = p.chi * J2 ** 2 * (p.F(psi, x) + p.a0)
        rhs = reduced_hamiltonian(x * J2 / 3.0, psi, J2, q)
        worst = max(worst, abs(lhs - rhs) / (abs(p.chi) * J2 ** 2))
    dt = time.perf_counter() - t0
    ok = worst < 1e-12 and dt < 1.0
    acceptance_line(2, "reduced Hamiltonian identity", ok, f"max scaled residual {worst:.1e}, {dt:.2f} s")
    assert ok


def test_criterion_03_zone_fixtures(acceptance_line):
    got = {a: classify(*a).tag for a in FIXTURES}
    e_g = abs(g_boundary(2.0) + 47.0 / 27.0)
    e_gt = abs(gtilde_boundary(1.0) + 62.0 / 27.0)
    ok = got == FIXTURES and e_g < 1e-14 and e_gt < 1e-14
    acceptance_line(3, "zone fixtures", ok, f"{sum(got[a] == z for a, z in FIXTURES.items())}/6 zones, "
                                            f"g(2) err {e_g:.1e}, g~(1) err {e_gt:.1e}")
    assert ok


def test_criterion_04_quartic_roots(acceptance_line):
    rng = np.random.default_rng(104)
    t0 = time.perf_counter()
    n = 130000
    a1, a2 = rng.uniform(-4, 4, (2, n))
    x0, psi0 = rng.uniform(0.01, 0.99, n), rng.uniform(0, 2 * math.pi, n)
    E = 0.5 * a2 * x0 ** 2 + a1 * x0 + b(x0) * np.cos(psi0)
    zs = companion_roots_batch(a1, a2, E)
    gaps = np.min([np.abs(zs[:, i] - zs[:, j]) for i in range(4) for j in range(i + 1, 4)], axis=0)
    keep = np.nonzero((gaps > 1e-4) & (np.abs(E) > 1e-6))[0][:100000]
    worst_root = worst_line = 0.0
    bad_count = 0
    for i in keep:
        z = zs[i]
        ref = np.sort(z.real[(np.abs(z.imag) < 1e-9) & (z.real > 0.0) & (z.real < 1.0 - 1e-6)])
        r = roots_x(a1[i], a2[i], E[i])
        if r.count != len(ref):
            bad_count += 1
            continue
        if r.count:
            worst_root = max(worst_root, float(np.max(np.abs(np.array(r.xs) - ref))))
        for x, line in zip(r.xs, r.line_of):
            F = 0.5 * a2[i] * x * x + a1[i] * x + b(x) * math.cos(line)
            worst_line = max(worst_line, abs(F - E[i]))
    dt = time.perf_counter() - t0
    ok = len(keep) == 100000 and bad_count == 0 and worst_root < 1e-9 and worst_line < 1e-10 and dt < 30.0
    acceptance_line(4, "quartic roots", ok, f"{len(keep)} cases, count mismatches {bad_count}, "
                                            f"root err {worst_root:.1e}, line residual {worst_line:.1e}, {dt:.1f} s")
    assert ok


def _elliptic_instances(rng):
    pts = list(FIXTURES)
    while len(pts) < 80:
        a = (float(rng.uniform(-4, 4)), float(rng.uniform(-6, 6)))
        if not classify(*a).degenerate:
            pts.append(a)
    for a in pts:
        p = EffectiveParams.direct(*a)
        s = portrait_summary(p)
        for r in s.regions:
            for f in np.linspace(0.05, 0.95, 6):
                yield a, p, s, r, float(r.e_lo + f * (r.e_hi - r.e_lo))


def test_criterion_05_elliptic_closed_forms(acceptance_line):
    rng = np.random.default_rng(105)
    t0 = time.perf_counter()
    worst = worst_branch = 0.0
    paths = {2: 0, 4: 0}
    zones = set()
    n = 0
    for a, p, s, r, E in _elliptic_instances(rng):
        if n == 1000:
            break
        ref_roots = real_roots_in_unit(a[0], a[1], E)
        if len(ref_roots) not in (2, 4) or min(np.diff([0.0, *ref_roots, 1.0])) < 1e-6:
            continue
        ch = action_chart(p, E, r, s, with_area=False)
        if ch.degraded:
            continue
        (lo, hi), _ = component(p, E, r, s)
        w0, w1 = w_moment(*a, E, lo, hi), w_moment(*a, E, lo, hi, 1)
        worst = max(worst, abs(ch.int_W / w0 - 1), abs(ch.int_xW / w1 - 1))
        if len(ref_roots) == 4:
            other = (ref_roots[2], ref_roots[3]) if lo == ref_roots[0] or abs(lo - ref_roots[0]) < 1e-9 \
                else (ref_roots[0], ref_roots[1])
            worst_branch = max(worst_branch, abs(w_moment(*a, E, *other) / w0 - 1))
        paths[len(ref_roots)] += 1
        zones.add(s.zone.family)
        n += 1
    dt = time.perf_counter() - t0
    ok = n == 1000 and worst < 1e-8 and worst_branch < 1e-11 and min(paths.values()) > 0 and dt < 60.0
    acceptance_line(5, "elliptic closed forms", ok,
                    f"{n} instances ({paths[4]} four-real, {paths[2]} two-real, zones {sorted(zones)}), "
                    f"rel err {worst:.1e}, branch equality {worst_branch:.1e}, {dt:.1f} s")
    assert ok


def test_criterion_06_area_derivatives(acceptance_line):
    worst = 0.0
    pairs = 0
    h = 1e-6
    for a in FIXTURES:
        p = _detuned(*a, J2=1.0, sigma=0.05, chi=1.0)
        s = portrait_summary(p)
        for r in s.regions:
            for f in (0.1, 0.5, 0.9):
                E = r.e_lo + f * (r.e_hi - r.e_lo)
                fd = (area(p, E + h, r, s) - area(p, E - h, r, s)) / (2 * h)
                worst = max(worst, abs(action_chart(p, E, r, s).dA_dE / fd - 1))
            pairs += 1
    worst_i2 = 0.0
    for a in FIXTURES:
        p = EffectiveParams.direct(*a)
        s = portrait_summary(p)
        for r in s.regions:
            E = 0.5 * (r.e_lo + r.e_hi)
            pp, pm = p.at_action(1.0 + h), p.at_action(1.0 - h)
            fd = (area(pp, E, r.name, portrait_summary(pp)) - area(pm, E, r.name, portrait_summary(pm))) / (2 * h)
            worst_i2 = max(worst_i2, abs(action_chart(p, E, r, s).dA_dI2), abs(fd))
    ok = worst < 1e-5 and worst_i2 < 1e-12 and pairs == 20
    acceptance_line(6, "area derivatives", ok, f"{pairs} (zone, region) pairs, dA/dE rel err {worst:.1e}, "
                                               f"dA/dI2 at sigma = 0 {worst_i2:.1e}")
    assert ok


def test_criterion_07_dynamics(acceptance_line):
    t0 = time.perf_counter()
    worst = 0.0
    windings = True
    for a in FIXTURES:
        p = _detuned(*a, J2=1e-4, sigma=0.01, chi=-1200.0)
        s = portrait_summary(p)
        for r in s.regions:
            for f in (0.1, 0.5, 0.9):
                E = r.e_lo + f * (r.e_hi - r.e_lo)
                T = 2.0 * math.pi / abs(frequencies_resonant(p, E, r, 1.0, s).w_slow)
                pm = measure_period(p, E, r, s)
                worst = max(worst, abs(pm.period / T - 1))
                windings &= pm.winding == r.winding
    s = honeycomb_system(HoneycombParams(0.146, 5.73, *X_POINT, N3=-1e4))
    m = diagonalize(s)
    dt = 2.0 * math.pi / (40.0 * m.omega_plus)
    traj = integrate_exact(s, [0.002, 0.0012, 0.0, 0.0], 1_000_000 * dt, dt, stride=100)
    drift = traj.energy_drift()
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-4 and windings and drift < DRIFT_BOUND and elapsed < 300.0
    acceptance_line(7, "dynamics cross-check", ok, f"period rel err {worst:.1e}, windings match {windings}, "
                                                   f"drift over 1e6 steps {drift:.1e}, {elapsed:.1f} s")
    assert ok


def _spectral_error(mt, kt, s_arc, am, ap):
    s = honeycomb_system(HoneycombParams(mt, kt, *boundary_point(s_arc), N3=-1e4))
    m = diagonalize(s)
    if Thresholds().regime(m.sigma) != "nonresonant":
        return None
    fp = frequencies_nonresonant(quartic_coeffs(m, 0.0, -1e4), m, am, ap)
    dt = 2.0 * math.pi / (40.0 * m.omega_plus)
    traj = integrate_exact(modal_model(s, m), [am, ap, 0.0, 0.0], 600.0, dt)
    got = modal_spectrum(traj, m.omegas)
    return max(abs(g / r - 1) for g, r in zip(got, (fp.w_minus_nlr, fp.w_plus_nlr)))


def test_criterion_08_nonresonant_spectrum(acceptance_line):
    worst_ratio = 0.0
    checked = 0
    cases = [(0.09, 8.0, s) for s in np.linspace(0.5, PERIMETER - 0.5, 8)]
    cases += [(0.146, 10.79, s) for s in np.linspace(0.5, PERIMETER - 0.5, 4)]
    for mt, kt, s_arc in cases:
        for am, ap in ((0.0036, 0.0025), (0.001, 0.0007), (0.0005, 0.00035)):
            err = _spectral_error(mt, kt, s_arc, am, ap)
            if err is None:
                continue
            bound = max(1e-4, SPECTRAL_C * math.hypot(am, ap) ** 4)
            worst_ratio = max(worst_ratio, err / bound)
            checked += 1
    ok = checked >= 20 and worst_ratio < 1.0
    acceptance_line(8, "nonresonant spectral check", ok,
                    f"{checked} runs, worst error / max(1e-4, C eps^4) = {worst_ratio:.2f}, C = {SPECTRAL_C:.1e}")
    assert ok


SWEEPS = [
    ("(0.09, 8)", SweepConfig(Mtilde=0.09, Ktilde=8.0, N3=-1e4, a_minus=0.0036, a_plus=0.0025)),
    ("(0.146, 5.73)", SweepConfig(Mtilde=0.146, Ktilde=5.73, N3=-1e4, a_minus=0.002, a_plus=0.0012)),
    ("(0.2, 1.1)", SweepConfig(Mtilde=0.2, Ktilde=1.1, N3=-1e4, a_minus=0.002, a_plus=0.001)),
]


def test_criterion_09_bandgap_anchors(acceptance_line):
    reports, times = [], []
    for _, cfg in SWEEPS:
        t0 = time.perf_counter()
        reports.append(bandgap_report(cfg, n=600))
        times.append(time.perf_counter() - t0)
    r1, r2, r3 = reports
    parts = [
        25.0 <= r1.pct_increment <= 35.0,
        r2.pct_increment < 0 and r2.case_tag == "ii",
        r3.pct_increment < 0 and r3.case_tag == "iii",
    ]
    ok = all(parts) and max(times) < 120.0
    detail = "; ".join(f"{name} {r.pct_increment:+.2f}% tag {r.case_tag} [{'ok' if good else 'no'}]"
                       for (name, _), r, good in zip(SWEEPS, reports, parts))
    acceptance_line(9, "bandgap anchors", ok, f"{detail}; slowest sweep {max(times):.1f} s")
    assert ok


def test_criterion_10_intersection_counts(acceptance_line):
    t0 = time.perf_counter()
    expected = {2.0: 4, 3.6: 6, 5.0: 4, 5.73: 3, 10.79: 2}
    got = {kt: len(boundary_intersections(0.146, kt)) for kt in expected}
    dt = time.perf_counter() - t0
    ok = got == expected and dt < 60.0
    acceptance_line(10, "boundary intersection counts", ok,
                    f"{[got[k] for k in expected]} vs {list(expected.values())}, {dt:.2f} s")
    assert ok
