"""Two-oscillator systems, the honeycomb resonator model and modal decomposition."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import Rejection

SQRT3 = math.sqrt(3.0)
GAMMA = (0.0, 0.0)
X_POINT = (4.0 * math.pi / 3.0, 0.0)
M_POINT = (math.pi, math.pi / SQRT3)

_SINC_CUT = 1e-8
_GAP_TOL = 1e-10


@dataclass(frozen=True)
class OscillatorSystem:
    """Mass/stiffness pair with componentwise cubic terms.

    Equations of motion: M x'' + K x + (cubic_v v^3, cubic_y y^3) = 0 with x = (v, y).
    """

    m11: float
    m12: float
    m22: float
    k1: float
    k2: float
    cubic_v: float = 0.0
    cubic_y: float = 0.0

    def __post_init__(self):
        det = self.m11 * self.m22 - self.m12 ** 2
        if not (self.m11 > 0 and det > 0):
            raise Rejection("mass_not_spd", f"m11={self.m11!r}, det={det!r}")
        if not (self.k1 > 0 and self.k2 > 0):
            raise Rejection("stiffness_not_pd", f"k1={self.k1!r}, k2={self.k2!r}")

    @property
    def mass(self) -> np.ndarray:
        return np.array([[self.m11, self.m12], [self.m12, self.m22]])

    @property
    def stiffness(self) -> np.ndarray:
        return np.diag([self.k1, self.k2])


@dataclass(frozen=True)
class HoneycombParams:
    """Plate with one local resonator per cell, at Bloch wave numbers (k1, k2).

    ``mass_model`` picks the (1,1) entry of the mass matrix: ``"total"`` uses
    M_H + Mtilde (plate plus resonator inertia, which reproduces the published
    dispersion and resonance maps), ``"plate"`` uses M_H alone.
    """

    Mtilde: float
    Ktilde: float
    k1: float
    k2: float
    D12: float = 0.0815599
    D22: float = 12.48
    D66: float = 0.0000247357
    N3: float = 0.0
    mass_model: str = "total"

    def __post_init__(self):
        if not (self.Mtilde > 0 and self.Ktilde > 0):
            raise Rejection("bad_resonator", f"Mtilde={self.Mtilde!r}, Ktilde={self.Ktilde!r}")
        if self.mass_model not in ("total", "plate"):
            raise Rejection("bad_mass_model", self.mass_model)
        if not in_triangle(self.k1, self.k2):
            raise Rejection("outside_brillouin", f"({self.k1!r}, {self.k2!r})")


def in_triangle(k1: float, k2: float, tol: float = 1e-9) -> bool:
    """Closed irreducible Brillouin triangle Gamma-X-M."""
    if k2 < -tol:
        return False
    # edge Gamma-M: k2 <= k1/sqrt3 ; edge X-M: k2 <= sqrt3 (4pi/3 - k1)
    if k2 > k1 / SQRT3 + tol:
        return False
    return k2 <= SQRT3 * (4.0 * math.pi / 3.0 - k1) + tol


def _sinc(x: float) -> float:
    if abs(x) < _SINC_CUT:
        return 1.0 - x * x / 6.0
    return math.sin(x) / x


def plate_mass(k1: float, k2: float) -> float:
    """Modal plate mass M_H(k1, k2); removable singularities use the series limit."""
    u = k1 + SQRT3 * k2
    return 0.5 * SQRT3 * _sinc(0.5 * k1) * _sinc(0.25 * u)


def plate_stiffness(k1: float, k2: float, D12: float, D22: float, D66: float) -> float:
    quart = k1 ** 4 + 2.0 * k1 ** 2 * k2 ** 2 * (D12 + 2.0 * D66) + k2 ** 4 * D22
    return plate_mass(k1, k2) * quart


def honeycomb_system(p: HoneycombParams) -> OscillatorSystem:
    mh = plate_mass(p.k1, p.k2)
    kh = plate_stiffness(p.k1, p.k2, p.D12, p.D22, p.D66)
    m11 = mh + p.Mtilde if p.mass_model == "total" else mh
    if kh <= 0:
        # only at Gamma, where the acoustic branch is the rigid mode
        raise Rejection("zero_plate_stiffness", f"K_H={kh!r} at ({p.k1!r}, {p.k2!r})")
    return OscillatorSystem(m11, p.Mtilde, p.Mtilde, kh, p.Ktilde, 0.0, p.N3)


@dataclass(frozen=True)
class ModalData:
    phi: np.ndarray
    omega_minus: float
    omega_plus: float
    sigma: float

    @property
    def omegas(self) -> tuple[float, float]:
        return self.omega_minus, self.omega_plus


def _eigvec(lam: float, m11: float, m12: float, m22: float, k1: float, k2: float) -> np.ndarray:
    r1 = np.array([lam * m12, k1 - lam * m11])
    r2 = np.array([k2 - lam * m22, lam * m12])
    v = r1 if np.hypot(*r1) >= np.hypot(*r2) else r2
    if not np.any(v):
        v = np.array([1.0, 0.0]) if abs(k1 - lam * m11) <= abs(k2 - lam * m22) else np.array([0.0, 1.0])
    nrm = v @ np.array([[m11, m12], [m12, m22]]) @ v
    return v / math.sqrt(nrm)


def diagonalize(s: OscillatorSystem) -> ModalData:
    """Closed-form solution of K phi = omega^2 M phi with M-orthonormal columns."""
    m11, m12, m22, k1, k2 = s.m11, s.m12, s.m22, s.k1, s.k2
    a = m11 * m22 - m12 * m12
    b = k1 * m22 + k2 * m11
    disc = (k1 * m22 - k2 * m11) ** 2 + 4.0 * k1 * k2 * m12 * m12
    root = math.sqrt(disc)
    lp = (b + root) / (2.0 * a)
    lm = 2.0 * k1 * k2 / (b + root)
    wp, wm = math.sqrt(lp), math.sqrt(lm)
    if (wp - wm) / wp < _GAP_TOL:
        raise Rejection("double_frequency", f"omega_-={wm!r}, omega_+={wp!r}")
    cols = []
    for lam in (lm, lp):
        v = _eigvec(lam, m11, m12, m22, k1, k2)
        if v[1] < 0 or (v[1] == 0 and v[0] < 0):
            v = -v
        cols.append(v)
    phi = np.column_stack(cols)
    return ModalData(phi, wm, wp, wp - 3.0 * wm)


@dataclass(frozen=True)
class CubicField:
    """c(q) = -Phi^T (M3 u^3, N3 w^3) with (u, w) = Phi q, stored on the monomials
    (q1^3, q1^2 q2, q1 q2^2, q2^3)."""

    coeffs: np.ndarray

    def __call__(self, q) -> np.ndarray:
        q1, q2 = q[0], q[1]
        mono = np.array([q1 ** 3, q1 * q1 * q2, q1 * q2 * q2, q2 ** 3])
        return self.coeffs @ mono


def modal_cubic(s: OscillatorSystem, m: ModalData) -> CubicField:
    phi = m.phi
    binom = np.array([1.0, 3.0, 3.0, 1.0])
    coeffs = np.zeros((2, 4))
    for row, g in ((0, s.cubic_v), (1, s.cubic_y)):
        a, b = phi[row]
        cube = binom * np.array([a ** 3, a * a * b, a * b * b, b ** 3]) * g
        coeffs[0] -= phi[row, 0] * cube
        coeffs[1] -= phi[row, 1] * cube
    return CubicField(coeffs)
