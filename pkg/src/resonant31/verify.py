"""Dynamical oracles: symplectic runs of the modal ODE and of the reduced slow flow,
period measurement and spectral peak extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bnf import EffectiveParams, b
from .errors import Rejection
from .modal import CubicField, ModalData, OscillatorSystem, diagonalize, modal_cubic
from .portrait import PortraitSummary, RegionInfo, component, portrait_summary

PI = math.pi
TWO_PI = 2.0 * PI
SCHEMES = {"verlet": 0, "strang": 1, "strang4": 2}
DRIFT_BOUND = 1e-8


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    energies: np.ndarray
    scheme: dict = field(default_factory=dict)

    def energy_drift(self, window: float = 0.05) -> float:
        """Relative secular drift: change of the windowed mean energy from the
        first to the last ``window`` fraction of the samples."""
        n = max(1, int(window * len(self.energies)))
        e0 = float(np.mean(self.energies[:n]))
        e1 = float(np.mean(self.energies[-n:]))
        return abs(e1 - e0) / abs(e0)

    def energy_spread(self) -> float:
        """Largest relative deviation of any sample from the initial energy."""
        e = self.energies
        return float(np.max(np.abs(e - e[0])) / abs(e[0]))


# ---------------------------------------------------------------- full modal ODE

@dataclass(frozen=True)
class ModalModel:
    omegas: tuple
    field: CubicField
    phi: np.ndarray
    cubic: tuple

    def energy(self, states: np.ndarray) -> np.ndarray:
        q1, q2, p1, p2 = states.T
        w1, w2 = self.omegas
        u = self.phi[0, 0] * q1 + self.phi[0, 1] * q2
        v = self.phi[1, 0] * q1 + self.phi[1, 1] * q2
        quartic = 0.25 * (self.cubic[0] * u ** 4 + self.cubic[1] * v ** 4)
        return 0.5 * (p1 ** 2 + p2 ** 2 + (w1 * q1) ** 2 + (w2 * q2) ** 2) + quartic


def modal_model(s: OscillatorSystem, m: ModalData | None = None) -> ModalModel:
    m = diagonalize(s) if m is None else m
    return ModalModel(m.omegas, modal_cubic(s, m), m.phi, (s.cubic_v, s.cubic_y))


def integrate_exact(s: OscillatorSystem | ModalModel, init, T: float, dt: float, stride: int = 1,
                    scheme: str = "strang4") -> Trajectory:
    """Modal coordinates (q1, q2, p1, p2) of q'' + Lambda q = c(q) up to time T."""
    model = s if isinstance(s, ModalModel) else modal_model(s)
    w1, w2 = model.omegas
    if dt > TWO_PI / (40.0 * w2) * (1.0 + 1e-12):
        raise Rejection("step_too_large", f"dt={dt!r} > 2 pi / (40 omega_+)")
    if scheme not in SCHEMES:
        raise Rejection("bad_scheme", scheme)
    nsteps = int(round(T / dt))
    try:
        states = kernels.strang_run(w1, w2, model.field.coeffs, np.asarray(init, float), dt, nsteps,
                                    stride, SCHEMES[scheme])
    except FloatingPointError as exc:
        raise Rejection("blow_up", str(exc)) from None
    times = np.arange(states.shape[0]) * dt * stride
    meta = {"scheme": scheme, "dt": dt, "stride": stride, "order": 4 if scheme == "strang4" else 2,
            "backend": kernels.BACKEND}
    return Trajectory(times, states, model.energy(states), meta)


def linear_solution(omegas, init, times) -> np.ndarray:
    """Closed-form harmonic motion in modal coordinates."""
    q1, q2, p1, p2 = init
    out = np.empty((len(times), 4))
    for j, (q, p, w) in enumerate(((q1, p1, omegas[0]), (q2, p2, omegas[1]))):
        c, sn = np.cos(w * times), np.sin(w * times)
        out[:, j] = q * c + p / w * sn
        out[:, j + 2] = -q * w * sn + p * c
    return out


# ---------------------------------------------------------------- reduced flow

def _reduced_energy(p: EffectiveParams, x, psi):
    return p.chi * p.J2 ** 2 * (p.F(psi, x) + p.a0)


def integrate_reduced(p: EffectiveParams, init, T: float, dt: float, order: int = 6) -> Trajectory:
    """Slow flow of sigma J1 + H4res at J2 = p.J2, started at init = (J1, psi1).

    States are stored as (J1, psi1) with psi1 unwrapped.
    """
    J2 = p.J2
    J1, psi = init
    x0 = 3.0 * J1 / J2
    if not 0.0 < x0 < 1.0:
        raise Rejection("action_cone", f"x={x0!r}")
    if order not in (2, 4, 6):
        raise Rejection("bad_order", str(order))
    nsteps = int(round(T / dt))
    kap = 3.0 * p.chi * J2
    try:
        xs = kernels.reduced_run(p.a1, p.a2, kap, x0, psi, dt, nsteps, order)
    except FloatingPointError as exc:
        raise Rejection("left_cylinder", str(exc)) from None
    states = np.column_stack([xs[:, 0] * J2 / 3.0, xs[:, 1]])
    energies = _reduced_energy(p, xs[:, 0], xs[:, 1])
    times = np.arange(states.shape[0]) * dt
    return Trajectory(times, states, energies, {"scheme": "implicit_midpoint", "dt": dt, "order": order,
                                                "backend": kernels.BACKEND})


def _section(region: RegionInfo) -> float:
    # loops are cut where they meet their line, wrapping curves at psi = 0
    return region.tags[0] if region.winding == "contractible" else 0.0


def crossing_times(traj: Trajectory, p: EffectiveParams, level: float) -> tuple[np.ndarray, int]:
    """Times at which the unwrapped slow angle passes level + 2 pi n, in the
    dominant direction of motion, with cubic Hermite interpolation."""
    t = traj.times
    psi = traj.states[:, 1]
    x = 3.0 * traj.states[:, 0] / p.J2
    dpsi = 3.0 * p.chi * p.J2 * p.F_x(psi, x)
    u = (psi - level) / TWO_PI
    k = np.floor(u)
    idx = np.nonzero(k[1:] != k[:-1])[0]
    ups = idx[k[idx + 1] > k[idx]]
    downs = idx[k[idx + 1] < k[idx]]
    direction = 1 if len(ups) >= len(downs) else -1
    sel = ups if direction > 0 else downs
    out = []
    for i in sel:
        target = level + TWO_PI * max(k[i], k[i + 1])
        h = t[i + 1] - t[i]
        y0, y1 = psi[i] - target, psi[i + 1] - target
        m0, m1 = dpsi[i] * h, dpsi[i + 1] * h
        s = y0 / (y0 - y1)
        for _ in range(30):
            h00 = 2 * s ** 3 - 3 * s ** 2 + 1
            h10 = s ** 3 - 2 * s ** 2 + s
            h01 = -2 * s ** 3 + 3 * s ** 2
            h11 = s ** 3 - s ** 2
            val = h00 * y0 + h10 * m0 + h01 * y1 + h11 * m1
            der = ((6 * s * s - 6 * s) * y0 + (3 * s * s - 4 * s + 1) * m0
                   + (-6 * s * s + 6 * s) * y1 + (3 * s * s - 2 * s) * m1)
            step = val / der
            s -= step
            if abs(step) < 1e-15:
                break
        out.append(t[i] + s * h)
    return np.array(out), direction


@dataclass(frozen=True)
class PeriodMeasurement:
    period: float
    crossings: int
    winding: str
    energy_error: float
    net_turns: float


def measure_period(p: EffectiveParams, E: float, region, summary: PortraitSummary | None = None,
                   n_periods: int = 12, steps_per_period: int = 1500, order: int = 6,
                   period_guess: float | None = None) -> PeriodMeasurement:
    """Period of the slow orbit at energy E in ``region``, measured from section crossings."""
    if summary is None:
        summary = portrait_summary(p)
    reg = summary.region(region) if isinstance(region, str) else region
    (lo, hi), _ = component(p, E, reg, summary)
    x0 = 0.5 * (lo + hi)
    c = (E - p.a(x0)) / b(x0)
    psi0 = math.acos(max(-1.0, min(1.0, c)))
    if period_guess is None:
        from .freq import action_chart
        period_guess = abs(TWO_PI * action_chart(p, E, reg, summary, with_area=False).dA_dE
                           / (3.0 * p.chi * p.J2))
    dt = period_guess / steps_per_period
    traj = integrate_reduced(p, (x0 * p.J2 / 3.0, psi0), n_periods * period_guess, dt, order)
    level = _section(reg)
    times, _ = crossing_times(traj, p, level)
    if len(times) < 2:
        raise Rejection("no_crossings", f"{len(times)} section crossings")
    period = (times[-1] - times[0]) / (len(times) - 1)
    turns = (traj.states[-1, 1] - traj.states[0, 1]) / TWO_PI
    winding = "wrapping" if abs(turns) > 0.5 * (n_periods - 1) else "contractible"
    e = traj.energies
    return PeriodMeasurement(period, len(times), winding, float(np.max(np.abs(e - e[0])) / abs(e[0])), turns)


# ---------------------------------------------------------------- spectra

@dataclass(frozen=True)
class Spectrum:
    peaks: tuple
    amplitudes: tuple
    resolution: float


def _refine_peak(yw: np.ndarray, dt: float, w: float, dw: float) -> float:
    # golden-section maximum of the windowed transform magnitude near w
    n = np.arange(len(yw)) * dt

    def mag(v):
        return abs(np.dot(yw, np.exp(-1j * v * n)))

    g = 0.5 * (math.sqrt(5.0) - 1.0)
    a, c = w - 0.5 * dw, w + 0.5 * dw
    x1, x2 = c - g * (c - a), a + g * (c - a)
    f1, f2 = mag(x1), mag(x2)
    for _ in range(50):
        if f1 > f2:
            c, x2, f2 = x2, x1, f1
            x1 = c - g * (c - a)
            f1 = mag(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + g * (c - a)
            f2 = mag(x2)
    return 0.5 * (a + c)


def extract_frequencies(signal, dt: float, n_peaks: int = 1, min_separation: float | None = None,
                        floor: float = 1e-6, strict: bool = True) -> Spectrum:
    """Angular frequencies of the largest spectral peaks of a uniformly sampled signal.

    Hann window, a parabola through the log-magnitudes of the three bins
    around each local maximum, then a golden-section search of the windowed
    transform within half a bin.  With ``strict=False`` fewer peaks than
    ``n_peaks`` may be returned.
    """
    y = np.asarray(signal, dtype=float)
    n = len(y)
    if n < 16:
        raise Rejection("signal_too_short", str(n))
    win = np.hanning(n)
    yw = (y - y.mean()) * win
    spectrum = np.abs(np.fft.rfft(yw))
    dw = TWO_PI / (n * dt)
    if min_separation is None:
        min_separation = 4.0 * dw
    mags = np.log(np.maximum(spectrum, 1e-300))
    cand = [i for i in range(1, len(spectrum) - 1) if spectrum[i] >= spectrum[i - 1] and spectrum[i] > spectrum[i + 1]]
    cand.sort(key=lambda i: -spectrum[i])
    top = spectrum[cand[0]] if cand else 0.0
    peaks, amps = [], []
    for i in cand:
        if spectrum[i] < floor * top or top == 0.0:
            break
        a, bb, c = mags[i - 1], mags[i], mags[i + 1]
        den = a - 2.0 * bb + c
        delta = 0.5 * (a - c) / den if den != 0 else 0.0
        w = _refine_peak(yw, dt, (i + delta) * dw, dw)
        if all(abs(w - q) >= min_separation for q in peaks):
            peaks.append(w)
            amps.append(float(spectrum[i]))
        if len(peaks) == n_peaks:
            break
    if len(peaks) < (n_peaks if strict else 1):
        raise Rejection("no_dominant_peak", f"found {len(peaks)} of {n_peaks}")
    return Spectrum(tuple(peaks), tuple(amps), dw)


def mean_phase_rates(traj: Trajectory, omegas) -> tuple:
    """Average angular velocity of each mode's phase arg(omega q - i p) over the run."""
    w = np.asarray(omegas, dtype=float)
    z = w * traj.states[:, :2] - 1j * traj.states[:, 2:]
    ph = np.unwrap(np.angle(z), axis=0)
    span = traj.times[-1] - traj.times[0]
    return tuple(float(v) for v in (ph[-1] - ph[0]) / span)


def modal_spectrum(traj: Trajectory, omegas) -> tuple:
    """Dominant frequency of each modal coordinate, near its linear value."""
    dt = traj.times[1] - traj.times[0]
    out = []
    for j, w in enumerate(omegas):
        sp = extract_frequencies(traj.states[:, j], dt, n_peaks=3, strict=False)
        out.append(min(sp.peaks, key=lambda v: abs(v - w)))
    return tuple(out)
