"""Quartic Hamiltonian coefficients, resonant normal form and the reduced Hamiltonian F."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import Rejection
from .modal import ModalData

SQRT3 = math.sqrt(3.0)
CHI_TOL = 1e-14


@dataclass(frozen=True)
class QuarticCoeffs:
    f: dict
    g2020: float
    g1111: float
    g0202: float
    f31: float
    chi: float
    omega_minus: float
    omega_plus: float
    sigma: float

    @property
    def degenerate(self) -> bool:
        """True when the resonant coupling vanishes and the resonant path is undefined."""
        return abs(self.chi) < CHI_TOL


def quartic_coeffs(m: ModalData, M3: float, N3: float) -> QuarticCoeffs:
    (p1m, p1p), (p2m, p2p) = m.phi
    f = {}
    for i in range(5):
        j = 4 - i
        w = 6.0 / (math.factorial(i) * math.factorial(j))
        f[(i, j)] = w * (p1m ** i * p1p ** j * M3 + p2m ** i * p2p ** j * N3)
    wm, wp = m.omega_minus, m.omega_plus
    return QuarticCoeffs(
        f=f,
        g2020=3.0 * f[(4, 0)] / (2.0 * wm * wm),
        g1111=f[(2, 2)] / (wm * wp),
        g0202=3.0 * f[(0, 4)] / (2.0 * wp * wp),
        f31=f[(3, 1)],
        chi=f[(3, 1)] / (2.0 * SQRT3 * wm ** 1.5 * wp ** 0.5),
        omega_minus=wm,
        omega_plus=wp,
        sigma=m.sigma,
    )


def modal_potential(q: QuarticCoeffs, q1, q2):
    """Quartic part f(q) = sum f_ij q1^i q2^j of the modal Hamiltonian."""
    return sum(c * q1 ** i * q2 ** j for (i, j), c in q.f.items())


# ---------------------------------------------------------------- b(x) and F

def b(x):
    return np.sqrt((1.0 - x) ** 3 * x)


def db(x):
    return (1.0 - 4.0 * x) * np.sqrt(1.0 - x) / (2.0 * np.sqrt(x))


def d2b(x):
    return (8.0 * x * x - 4.0 * x - 1.0) / (4.0 * x ** 1.5 * np.sqrt(1.0 - x))


@dataclass(frozen=True)
class SlowState:
    x: float
    psi: float

    def __post_init__(self):
        if not 0.0 < self.x < 1.0:
            raise Rejection("x_out_of_range", f"x={self.x!r}")


@dataclass(frozen=True)
class EffectiveParams:
    """Coefficients of F(psi, x) = a2 x^2/2 + a1 x + b(x) cos psi at action J2.

    The coefficients are ratios G/chi, so F is the same function for either
    sign of the coupling; only the prefactor chi J2^2 of the reduced
    Hamiltonian carries that sign.
    """

    a0: float
    a1: float
    a2: float
    J2: float
    sigma: float
    chi: float
    a1_static: float = 0.0

    @property
    def sign(self) -> float:
        return 1.0 if self.chi > 0 else -1.0

    def a(self, x):
        return 0.5 * self.a2 * x * x + self.a1 * x

    def F(self, psi, x):
        return self.a(x) + b(x) * np.cos(psi)

    def F_x(self, psi, x):
        return self.a2 * x + self.a1 + db(x) * np.cos(psi)

    def at_action(self, J2: float) -> "EffectiveParams":
        if not J2 > 0:
            raise Rejection("nonpositive_action", f"J2={J2!r}")
        return replace(self, J2=J2, a1=self.a1_static + self.sigma / (3.0 * J2 * self.chi))

    @classmethod
    def direct(cls, a1: float, a2: float, a0: float = 0.0) -> "EffectiveParams":
        """Portrait-only parameters with unit coupling and no detuning."""
        return cls(a0=a0, a1=a1, a2=a2, J2=1.0, sigma=0.0, chi=1.0, a1_static=a1)


def effective_params(q: QuarticCoeffs, m: ModalData, J2: float) -> EffectiveParams:
    if q.degenerate:
        raise Rejection("degenerate_coupling", f"chi={q.chi!r}")
    if not J2 > 0:
        raise Rejection("nonpositive_action", f"J2={J2!r}")
    chi, sigma = q.chi, m.sigma
    g20, g11, g02 = q.g2020, q.g1111, q.g0202
    a1_static = -2.0 * g20 / chi + g11 / (3.0 * chi)
    return EffectiveParams(
        a0=g20 / chi,
        a1=a1_static + sigma / (3.0 * J2 * chi),
        a2=2.0 * g20 / chi - 2.0 * g11 / (3.0 * chi) + 2.0 * g02 / (9.0 * chi),
        J2=J2,
        sigma=sigma,
        chi=chi,
        a1_static=a1_static,
    )


def F_eval(p: EffectiveParams, s: SlowState) -> float:
    return float(p.F(s.psi, s.x))


# ---------------------------------------------------------------- energies

def hamiltonian_energy(z, q: QuarticCoeffs) -> float:
    """Exact modal Hamiltonian N + G at complex coordinates z = (Q + iP)/sqrt2."""
    z = np.asarray(z, dtype=complex)
    w = np.array([q.omega_minus, q.omega_plus])
    qq = math.sqrt(2.0) * z.real / np.sqrt(w)
    quad = float(np.sum(w * np.abs(z) ** 2))
    return quad + float(modal_potential(q, qq[0], qq[1]))


def _check_cone(J1, J2):
    if not (np.all(J1 > 0) and np.all(J2 > 3.0 * J1)):
        raise Rejection("action_cone", "need J2 > 3 J1 > 0")


def resonant_quartic(J1, J2, psi1, q: QuarticCoeffs):
    """Resonant quartic normal form in the actions (J1, J2) and slow angle psi1."""
    u = J2 - 3.0 * J1
    return (q.g2020 * u * u + q.g1111 * u * J1 + q.g0202 * J1 * J1
            + SQRT3 * q.chi * np.sqrt(u ** 3 * J1) * np.cos(psi1))


def reduced_hamiltonian(J1, psi1, J2, q: QuarticCoeffs):
    """sigma J1 plus the resonant quartic part, at fixed J2."""
    J1 = np.asarray(J1, dtype=float)
    _check_cone(J1, J2)
    return q.sigma * J1 + resonant_quartic(J1, J2, psi1, q)


def truncated_resonant_energy(J1, J2, psi1, q: QuarticCoeffs):
    return q.omega_minus * J2 + reduced_hamiltonian(J1, psi1, J2, q)


def reduced_vector_field(J1, psi1, J2, q: QuarticCoeffs):
    """(dJ1/dt, dpsi1/dt) of the reduced Hamiltonian."""
    J1 = np.asarray(J1, dtype=float)
    _check_cone(J1, J2)
    u = J2 - 3.0 * J1
    root = np.sqrt(u ** 3 * J1)
    dJ1 = SQRT3 * q.chi * root * np.sin(psi1)
    droot = (u ** 3 - 9.0 * u * u * J1) / (2.0 * root)
    dpsi = (q.sigma - 6.0 * q.g2020 * u + q.g1111 * (u - 3.0 * J1) + 2.0 * q.g0202 * J1
            + SQRT3 * q.chi * droot * np.cos(psi1))
    return dJ1, dpsi
