"""Relative equilibria of the reduced system and their stability.

Critical points of the effective potential

    V_eff = (mu1^2 I1^-1 + mu2^2 I2^-1)/2 + V,
    I1^-1 = (q1^2/nu2 + q3^2/nu1)/(4 A^2),
    I2^-1 = (q2^2/nu2 + q4^2/nu1)/(4 A^2)

are relative equilibria.  For two equal masses the isosceles family is
solved in closed form (parametrised by the mass ratio n = m1/m and the
shape parameter t with rho = q1/q4 = 4t/(1-t^2)); for general masses a
power-series seed in the small momentum ratio feeds a damped Newton solver.
Stability is decided by the 8x8 Hessian of the reduced Hamiltonian, which
at p = 0 splits into the Hessian of V_eff and the momentum block
diag(1/nu) + 2*c2_comb * (dL3/dp)(dL3/dp)^t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    ChartSingular,
    DegenerateMomenta,
    DegenerateHessian,
    NoConvergence,
    NoRealMomenta,
)
from .model import (
    MassTriple,
    ScalarProducts,
    potential_derivatives,
    potential_hessian_s,
)
from .dynamics import potential_gradient_q
from . import reduction

EQUILATERAL_T = 2.0 - math.sqrt(3.0)


# --- effective potential: value, gradient, Hessian --------------------------

def _area(q) -> float:
    return 0.5 * (q[0] * q[3] - q[1] * q[2])


def moments_of_inertia_inv(masses: MassTriple, q) -> tuple[float, float]:
    """(I1^-1, I2^-1) from the 4 A^2 form (no solvability assumption)."""
    a = _area(q)
    if abs(a) < reduction.AREA_TOL:
        raise ChartSingular(f"oriented area A = {a} too small")
    t1 = q[0] ** 2 / masses.nu2 + q[2] ** 2 / masses.nu1
    t2 = q[1] ** 2 / masses.nu2 + q[3] ** 2 / masses.nu1
    return t1 / (4 * a * a), t2 / (4 * a * a)


def effective_potential(masses: MassTriple, q, mu1: float, mu2: float) -> float:
    i1inv, i2inv = moments_of_inertia_inv(masses, q)
    s = ScalarProducts(q[0] ** 2 + q[1] ** 2, q[2] ** 2 + q[3] ** 2,
                       q[0] * q[2] + q[1] * q[3])
    v = potential_derivatives(masses, s)[0]
    return 0.5 * (mu1 * mu1 * i1inv + mu2 * mu2 * i2inv) + v


def effective_potential_gradient(masses: MassTriple, q, mu1: float,
                                 mu2: float) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    a = _area(q)
    if abs(a) < reduction.AREA_TOL:
        raise ChartSingular(f"oriented area A = {a} too small")
    nu1, nu2 = masses.nu1, masses.nu2
    t1 = q[0] ** 2 / nu2 + q[2] ** 2 / nu1
    t2 = q[1] ** 2 / nu2 + q[3] ** 2 / nu1
    num = mu1 * mu1 * t1 + mu2 * mu2 * t2
    dt1 = np.array([2 * q[0] / nu2, 0.0, 2 * q[2] / nu1, 0.0])
    dt2 = np.array([0.0, 2 * q[1] / nu2, 0.0, 2 * q[3] / nu1])
    da = 0.5 * np.array([q[3], -q[2], -q[1], q[0]])
    grad_cf = (mu1 * mu1 * dt1 + mu2 * mu2 * dt2) / (8 * a * a) \
        - num / (4 * a ** 3) * da
    return grad_cf + potential_gradient_q(masses, q)


_D2A = 0.5 * np.array([
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
    [0.0, -1.0, 0.0, 0.0],
    [1.0, 0.0, 0.0, 0.0],
])


def effective_potential_hessian(masses: MassTriple, q, mu1: float,
                                mu2: float) -> np.ndarray:
    """Analytic 4x4 Hessian of V_eff with respect to q."""
    q = np.asarray(q, dtype=float)
    a = _area(q)
    if abs(a) < reduction.AREA_TOL:
        raise ChartSingular(f"oriented area A = {a} too small")
    nu1, nu2 = masses.nu1, masses.nu2
    t1 = q[0] ** 2 / nu2 + q[2] ** 2 / nu1
    t2 = q[1] ** 2 / nu2 + q[3] ** 2 / nu1
    num = mu1 * mu1 * t1 + mu2 * mu2 * t2
    dt1 = np.array([2 * q[0] / nu2, 0.0, 2 * q[2] / nu1, 0.0])
    dt2 = np.array([0.0, 2 * q[1] / nu2, 0.0, 2 * q[3] / nu1])
    dnum = mu1 * mu1 * dt1 + mu2 * mu2 * dt2
    d2num = np.diag([2 * mu1 * mu1 / nu2, 2 * mu2 * mu2 / nu2,
                     2 * mu1 * mu1 / nu1, 2 * mu2 * mu2 / nu1])
    da = 0.5 * np.array([q[3], -q[2], -q[1], q[0]])
    hess = d2num / (8 * a * a) \
        - (np.outer(dnum, da) + np.outer(da, dnum)) / (4 * a ** 3) \
        + 3 * num / (4 * a ** 4) * np.outer(da, da) \
        - num / (4 * a ** 3) * _D2A

    s = ScalarProducts(q[0] ** 2 + q[1] ** 2, q[2] ** 2 + q[3] ** 2,
                       q[0] * q[2] + q[1] * q[3])
    _, v1, v2, v3 = potential_derivatives(masses, s)
    vss = potential_hessian_s(masses, s)
    js = np.array([
        [2 * q[0], 2 * q[1], 0.0, 0.0],
        [0.0, 0.0, 2 * q[2], 2 * q[3]],
        [q[2], q[3], q[0], q[1]],
    ])
    hess += js.T @ vss @ js
    hess += v1 * np.diag([2.0, 2.0, 0.0, 0.0]) + v2 * np.diag([0.0, 0.0, 2.0, 2.0])
    hess += v3 * np.array([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0, 0.0],
        [0.0, 1.0, 0.0, 0.0],
    ])
    return hess


def keff_correction(masses: MassTriple, q, mu1: float, mu2: float) -> float:
    """Coefficient of L3^2 in K_eff: (-mu1^2 I1^-1 + mu2^2 I2^-1)/(2(mu1^2-mu2^2)).

    Positive value is the sufficient condition for the momentum block of the
    Hessian to be positive definite (it is not necessary).
    """
    if mu1 == mu2:
        raise DegenerateMomenta("keff correction undefined for mu1 == mu2")
    i1inv, i2inv = moments_of_inertia_inv(masses, q)
    return (-mu1 * mu1 * i1inv + mu2 * mu2 * i2inv) / (2 * (mu1 * mu1 - mu2 * mu2))


def momentum_block(masses: MassTriple, q, mu1: float, mu2: float) -> np.ndarray:
    """4x4 Hessian of H in p at p = 0: diag(1/nu) + 2 c2_comb v v^t, v = dL3/dp."""
    nu1, nu2 = masses.nu1, masses.nu2
    gamma = keff_correction(masses, q, mu1, mu2)
    v = np.array([-q[1], q[0], -q[3], q[2]])
    return np.diag([1 / nu1, 1 / nu1, 1 / nu2, 1 / nu2]) + 2 * gamma * np.outer(v, v)


def hamiltonian_hessian(masses: MassTriple, q, mu1: float, mu2: float) -> np.ndarray:
    """8x8 Hessian of the reduced Hamiltonian at (q, p=0); block diagonal."""
    out = np.zeros((8, 8))
    out[0:4, 0:4] = effective_potential_hessian(masses, q, mu1, mu2)
    out[4:8, 4:8] = momentum_block(masses, q, mu1, mu2)
    return out


# --- equilibrium reports -----------------------------------------------------

@dataclass
class EquilibriumReport:
    q: np.ndarray
    mu1: float
    mu2: float
    masses: MassTriple
    hessian: np.ndarray
    eigenvalues: np.ndarray
    classification: str
    omega1: float
    omega2: float
    h: float
    b: float
    gradient_norm: float
    keff_coefficient: float
    energy: float

    def to_dict(self) -> dict:
        return {
            "q": [float(v) for v in self.q],
            "mu1": self.mu1,
            "mu2": self.mu2,
            "masses": [self.masses.m1, self.masses.m2, self.masses.m3],
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "classification": self.classification,
            "omega1": self.omega1,
            "omega2": self.omega2,
            "h": self.h,
            "b": self.b,
            "gradient_norm": self.gradient_norm,
            "keff_coefficient": self.keff_coefficient,
            "energy": self.energy,
            "kepler1": self.omega1 ** 2 * self.q[3] ** 3 / self.masses.total,
            "kepler2": self.omega2 ** 2 * self.q[0] ** 3
                       / (self.masses.m2 + self.masses.m3),
        }


def _classify(vq_eigs: np.ndarray, kin_eigs: np.ndarray) -> str:
    if np.all(vq_eigs > 0) and np.all(kin_eigs > 0):
        return "minimum"
    if np.all(vq_eigs > 0):
        return "indefinite-K"
    return "saddle"


def frequencies(masses: MassTriple, report_or_q, mu1: Optional[float] = None,
                mu2: Optional[float] = None):
    """(omega1, omega2) = mu_i / I_i with the solvability-simplified inertia.

    omega1 = mu1/(nu2 q4^2 + nu1 q2^2), omega2 = mu2/(nu1 q1^2 + nu2 q3^2);
    also returns the Kepler diagnostics omega1^2 q4^3 / M and
    omega2^2 q1^3 / (m2 + m3), both -> 1 in the small-mu2 limit.
    """
    if isinstance(report_or_q, EquilibriumReport):
        q = report_or_q.q
        mu1, mu2 = report_or_q.mu1, report_or_q.mu2
    else:
        q = np.asarray(report_or_q, dtype=float)
    nu1, nu2 = masses.nu1, masses.nu2
    om1 = mu1 / (nu2 * q[3] ** 2 + nu1 * q[1] ** 2)
    om2 = mu2 / (nu1 * q[0] ** 2 + nu2 * q[2] ** 2)
    kep1 = om1 ** 2 * q[3] ** 3 / masses.total
    kep2 = om2 ** 2 * q[0] ** 3 / (masses.m2 + masses.m3)
    return om1, om2, kep1, kep2


def _build_report(masses: MassTriple, q, mu1: float, mu2: float) -> EquilibriumReport:
    q = np.asarray(q, dtype=float)
    hess = hamiltonian_hessian(masses, q, mu1, mu2)
    vq_eigs = np.linalg.eigvalsh(hess[0:4, 0:4])
    kin_eigs = np.linalg.eigvalsh(hess[4:8, 4:8])
    energy = effective_potential(masses, q, mu1, mu2)
    h = (mu1 + mu2) ** 2 * energy
    b = mu1 * mu2 / (mu1 + mu2) ** 2
    om1, om2, _, _ = frequencies(masses, q, mu1, mu2)
    gnorm = float(np.linalg.norm(effective_potential_gradient(masses, q, mu1, mu2)))
    return EquilibriumReport(
        q=q, mu1=mu1, mu2=mu2, masses=masses, hessian=hess,
        eigenvalues=np.concatenate([vq_eigs, kin_eigs]),
        classification=_classify(vq_eigs, kin_eigs),
        omega1=om1, omega2=om2, h=h, b=b,
        gradient_norm=gnorm,
        keff_coefficient=keff_correction(masses, q, mu1, mu2),
        energy=energy,
    )


# --- isosceles family (m2 = m3 = m) ------------------------------------------

def rho_from_t(t: float) -> float:
    return 4.0 * t / (1.0 - t * t)


def isosceles_momenta(n: float, t: float, m: float = 1.0,
                      q4: float = 1.0) -> tuple[float, float, float]:
    """(mu1^2, mu2^2, q1) solving the two isosceles equilibrium conditions.

    m^2/q1^2 + 4 m m1 q1 (q1^2+4 q4^2)^(-3/2) = mu2^2/(nu1 q1^3),
    16 m m1 q4 (q1^2+4 q4^2)^(-3/2) = mu1^2/(nu2 q4^3).
    """
    if not 0.0 < t < 1.0:
        raise ValueError(f"shape parameter t must be in (0, 1), got {t}")
    if n <= 0:
        raise ValueError(f"mass ratio n must be positive, got {n}")
    m1 = n * m
    nu1 = m / 2.0
    nu2 = 2.0 * m * m1 / (2.0 * m + m1)
    q1 = rho_from_t(t) * q4
    r32 = (q1 * q1 + 4.0 * q4 * q4) ** 1.5
    mu2sq = nu1 * q1 ** 3 * (m * m / (q1 * q1) + 4.0 * m * m1 * q1 / r32)
    mu1sq = 16.0 * m * m1 * nu2 * q4 ** 4 / r32
    if mu1sq <= 0.0 or mu2sq <= 0.0:
        raise NoRealMomenta(f"mu^2 = ({mu1sq}, {mu2sq}) not positive")
    return mu1sq, mu2sq, q1


def isosceles_equilibrium(n: float, t: float, m: float = 1.0,
                          q4: float = 1.0) -> EquilibriumReport:
    """Isosceles relative equilibrium for m2 = m3 = m, normalised to q4.

    q2 = q3 = 0, p = 0; mu_i^2 are rational in (n, t) up to the m^3 q4
    scaling.  Note mu1 > mu2 only holds below the P2 = 0 curve; above it the
    report still describes the critical point but with the labels swapped
    into mu1 < mu2 (the Hessian formulas stay valid as written).
    """
    mu1sq, mu2sq, q1 = isosceles_momenta(n, t, m, q4)
    masses = MassTriple(n * m, m, m)
    q = np.array([q1, 0.0, 0.0, q4])
    return _build_report(masses, q, math.sqrt(mu1sq), math.sqrt(mu2sq))


def isosceles_hessian_blocks(n: float, t: float, m: float = 1.0, q4: float = 1.0):
    """The three 2x2 blocks of the Hessian plus the explicit 1/nu eigenvalues.

    Returns (q23_block, q14_block, p23_block, 1/nu1, 1/nu2) in the variable
    pairs (q2,q3), (q1,q4), (p2,p3); the remaining directions p1, p4 are
    eigenvectors with eigenvalues 1/nu1, 1/nu2.
    """
    mu1sq, mu2sq, q1 = isosceles_momenta(n, t, m, q4)
    m1 = n * m
    nu1 = m / 2.0
    nu2 = 2.0 * m * m1 / (2.0 * m + m1)
    r = q1 * q1 + 4.0 * q4 * q4
    r52 = r ** 2.5

    q23 = np.empty((2, 2))
    q23[0, 0] = mu2sq / (nu2 * q1 ** 2 * q4 ** 2) + m * m / q1 ** 3 \
        + 4 * m * m1 * (q1 ** 2 - 8 * q4 ** 2) / r52
    q23[0, 1] = mu1sq / (nu2 * q1 * q4 ** 3) + mu2sq / (nu1 * q1 ** 3 * q4) \
        - 48 * m * m1 * q1 * q4 / r52
    q23[1, 0] = q23[0, 1]
    q23[1, 1] = mu1sq / (nu1 * q1 ** 2 * q4 ** 2) \
        - 32 * m * m1 * (q1 ** 2 - 2 * q4 ** 2) / r52

    q14 = np.empty((2, 2))
    q14[0, 0] = 3 * mu2sq / (nu1 * q1 ** 4) - 2 * m * m / q1 ** 3 \
        - 8 * m * m1 * (q1 ** 2 - 2 * q4 ** 2) / r52
    q14[0, 1] = -48 * m * m1 * q1 * q4 / r52
    q14[1, 0] = q14[0, 1]
    q14[1, 1] = 3 * mu1sq / (nu2 * q4 ** 4) \
        + 16 * m * m1 * (q1 ** 2 - 8 * q4 ** 2) / r52

    p23 = np.empty((2, 2))
    dmu = mu1sq - mu2sq
    p23[0, 0] = mu1sq * (1 / nu1 - q1 ** 2 / (nu2 * q4 ** 2)) / dmu
    p23[0, 1] = (mu1sq * q1 / (nu2 * q4) - mu2sq * q4 / (nu1 * q1)) / dmu
    p23[1, 0] = p23[0, 1]
    p23[1, 1] = mu2sq * (q4 ** 2 / (nu1 * q1 ** 2) - 1 / nu2) / dmu

    return q23, q14, p23, 1.0 / nu1, 1.0 / nu2


def isosceles_eigenvalue_series(n: float, t: float) -> dict:
    """Leading small-t expansions of the block eigenvalues (m = q4 = 1 scale).

    The q-blocks are scaled by m^2/q4^3 and the (p2,p3) block by 1/m.
    """
    return {
        "q23": (n * n / ((2 * n + 4) * t * t) - 1 / (4 * t)
                - 2 * (7 * n * n + 2 * n) / (n + 2),
                1 / (64 * t ** 3) + (17 / 64 + 1 / (8 * n)) / t
                + (11 * n * n + 6 * n) / (n + 2)),
        "q14": (1 / (64 * t ** 3) - 3 / (64 * t) + 2 * n,
                2 * n + 12 * n * t * t),
        "p23": (2 - 8 * (3 * n - 2) * t * t / n,
                (n + 2) / (16 * n * n * t) + (n + 2) ** 2 / (32 * n ** 4)),
    }


def isosceles_frequency_ratio_sq(n: float, t: float) -> float:
    """(omega2/omega1)^2 = ((1+t^2)^3 + 32 n t^3) / (32 (2+n) t^3)."""
    return ((1 + t * t) ** 3 + 32 * n * t ** 3) / (32 * (2 + n) * t ** 3)


def stability_polynomials(n: float, t: float) -> tuple[float, float]:
    """(P1, P2): sign carriers for the (q2,q3)-block and for mu1^2 - mu2^2.

    P1 = 32 t^3 (3n(t^4-6t^2+1) + 2(t^4-10t^2+1)) - (t^2+1)^5
    P2 = 2 n^2 (t^4-6t^2+1)(t^2+1)^2 - n t (64t^3 + (t^2+1)^3) - 2t(t^2+1)^3
    """
    t2 = t * t
    p1 = 32 * t ** 3 * (3 * n * (t2 * t2 - 6 * t2 + 1)
                        + 2 * (t2 * t2 - 10 * t2 + 1)) - (t2 + 1) ** 5
    p2 = 2 * n * n * (t2 * t2 - 6 * t2 + 1) * (t2 + 1) ** 2 \
        - n * t * (64 * t ** 3 + (t2 + 1) ** 3) - 2 * t * (t2 + 1) ** 3
    return p1, p2


@dataclass(frozen=True)
class RegionLabel:
    sign_p1: int
    sign_p2: int
    sign_t: int           # sign of (2 - sqrt(3)) - t
    name: str
    minimum: bool         # all eight Hessian eigenvalues positive
    adjacent_to_n_axis: bool  # the canonical mu1 > mu2 minimum region
    boundary: bool


def region_classification(n: float, t: float, tol: float = 1e-6) -> RegionLabel:
    """Region of the (n, t) quadrant by the signs of P1, P2 and t - (2-sqrt 3).

    sign(P2) tracks sign(mu1^2 - mu2^2).  The (q2,q3)-block is positive
    definite iff sign(P2) * P1 < 0 (P1 -> -1 as t -> 0, where all
    eigenvalues are positive) and the (p2,p3)-block iff
    sign(P2) * ((2 - sqrt 3) - t) > 0.  `minimum` marks an all-positive
    Hessian; `adjacent_to_n_axis` additionally requires mu1 > mu2, which
    singles out the strip along the n-axis.
    """
    p1, p2 = stability_polynomials(n, t)
    dt = EQUILATERAL_T - t
    boundary = abs(p1) < tol or abs(p2) < tol or abs(dt) < tol
    s1 = 1 if p1 > 0 else -1
    s2 = 1 if p2 > 0 else -1
    st = 1 if dt > 0 else -1
    minimum = (s2 * s1 < 0 and s2 * st > 0)
    name = "boundary" if boundary else \
        f"P1{'+' if s1 > 0 else '-'}P2{'+' if s2 > 0 else '-'}T{'+' if st > 0 else '-'}"
    return RegionLabel(s1, s2, st, name, minimum, minimum and s2 > 0, boundary)


def predicted_negative_count(n: float, t: float) -> int:
    """Negative Hessian eigenvalues predicted from P1, P2 and the t-line.

    The (q1,q4) block and the p1, p4 directions are always positive; the
    (q2,q3) block contributes one negative eigenvalue when
    sign(mu1^2-mu2^2) * P1 > 0 and the (p2,p3) block one when
    sign(mu1^2-mu2^2) * ((2-sqrt 3) - t) < 0.
    """
    p1, p2 = stability_polynomials(n, t)
    s = 1.0 if p2 > 0 else -1.0
    neg = 0
    if s * p1 > 0:
        neg += 1
    if s * (EQUILATERAL_T - t) < 0:
        neg += 1
    return neg


# --- general masses -----------------------------------------------------------

def solvability_residual(masses: MassTriple, q) -> float:
    """q1 q2 nu1 + q3 q4 nu2; vanishes at every critical point of V_eff."""
    q = np.asarray(q, dtype=float)
    return float(q[0] * q[1] * masses.nu1 + q[2] * q[3] * masses.nu2)


def simplified_equilibrium_residual(masses: MassTriple, q, mu1: float,
                                    mu2: float) -> np.ndarray:
    """The four solvability-simplified equilibrium equations as residuals.

    Uses the simplified moments of inertia I1 = nu2 q4^2 + nu1 q2^2,
    I2 = nu1 q1^2 + nu2 q3^2; the zero set contains the critical points of
    V_eff.  Better conditioned than the raw gradient as mu2 -> 0.
    """
    q = np.asarray(q, dtype=float)
    nu1, nu2 = masses.nu1, masses.nu2
    a = _area(q)
    if abs(a) < reduction.AREA_TOL:
        raise ChartSingular(f"oriented area A = {a} too small")
    i1 = nu2 * q[3] ** 2 + nu1 * q[1] ** 2
    i2 = nu1 * q[0] ** 2 + nu2 * q[2] ** 2
    s = ScalarProducts(q[0] ** 2 + q[1] ** 2, q[2] ** 2 + q[3] ** 2,
                       q[0] * q[2] + q[1] * q[3])
    _, v1, v2, v3 = potential_derivatives(masses, s)
    pref = 1.0 / (8.0 * a ** 3 * nu1 * nu2)
    return np.array([
        2 * q[0] * v1 + q[2] * v3 - i1 * mu2 * mu2 * q[3] * pref,
        2 * q[1] * v1 + q[3] * v3 + i2 * mu1 * mu1 * q[2] * pref,
        2 * q[2] * v2 + q[0] * v3 + i1 * mu2 * mu2 * q[1] * pref,
        2 * q[3] * v2 + q[1] * v3 - i2 * mu1 * mu1 * q[0] * pref,
    ])


@dataclass(frozen=True)
class SeriesSeed:
    q: np.ndarray
    mu1: float
    mu2: float
    u: float
    kappa: float


def expansion_parameters(masses: MassTriple, mu1: float, mu2: float):
    """(kappa, u) for the small-momentum expansion; u is dimensionless."""
    kappa = masses.total / (masses.m1 ** 2 * (masses.m2 + masses.m3) ** 2)
    mu = mu2 / mu1
    u = mu / (masses.m2 * masses.m3 * math.sqrt(kappa / (masses.m2 + masses.m3)))
    return kappa, u


def general_series_equilibrium(masses: MassTriple, u: float,
                               mu1: Optional[float] = None) -> SeriesSeed:
    """Power-series equilibrium location for small u.

    Series through orders u^8 (q1), u^14 (q2), u^16 (q3), u^4 (q4), scaled by
    kappa mu1^2.  With mu1 = None the normalisation kappa mu1^2 = 1 is used.
    """
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    msum = m2 + m3
    kappa = masses.total / (m1 ** 2 * msum ** 2)
    if mu1 is None:
        mu1 = 1.0 / math.sqrt(kappa)
    mu = u * m2 * m3 * math.sqrt(kappa / msum)
    scale = kappa * mu1 * mu1
    u2 = u * u
    u4 = u2 * u2
    q1 = u2 - m1 / msum * u4 * u4
    q2 = (3 * u4 * u4 * u2 * m1 * (m2 - m3) / (2 * msum ** 2)) \
        * (1 - u4 * (5 * m2 * m2 + 24 * m2 * m3 + 5 * m3 * m3) / (4 * msum ** 2))
    q3 = (-3 * u4 * u4 * u4 * masses.total * m2 * m3 * (m2 - m3) / (2 * msum ** 4)) \
        * (1 - 5 * u4 * (m2 * m2 + 6 * m2 * m3 + m3 * m3) / (4 * msum ** 2))
    q4 = 1 + 3 * u4 * m2 * m3 / (2 * msum ** 2)
    return SeriesSeed(q=scale * np.array([q1, q2, q3, q4]),
                      mu1=mu1, mu2=mu * mu1, u=u, kappa=kappa)


def general_hessian_eigen_asymptotics(masses: MassTriple, u: float) -> np.ndarray:
    """Four predicted eigenvalues of the V_eff Hessian, scaled by m2 m3/q4^3.

    Laurent expansions in u, ordered from the O(1) eigenvalue up to the two
    1/u^6 ones.
    """
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    msum = m2 + m3
    u2 = u * u
    lam1 = m1 * msum / (m2 * m3)
    lam2 = m1 ** 2 * msum ** 3 / (m2 ** 2 * m3 ** 2 * masses.total * u2 * u2) \
        - 1.0 / u2
    lam3 = 1.0 / u2 ** 3 + (1 + 11 * m2 * m3 / (2 * msum ** 2)
                            + m2 * m3 / (m1 * msum)) / u2
    lam4 = 1.0 / u2 ** 3 + 9 * m2 * m3 / (2 * msum ** 2 * u2) + 7 * m1 / msum
    return np.array([lam1, lam2, lam3, lam4])


def newton_equilibrium(masses: MassTriple, mu1: float, mu2: float, seed,
                       tol: float = 1e-12, max_iter: int = 60,
                       dps: Optional[int] = None) -> EquilibriumReport:
    """Damped Newton refinement of a relative equilibrium from a seed.

    The residual is the solvability-simplified system (finite-difference
    Jacobian); after convergence the raw V_eff gradient is cross-checked and
    polished if needed.  `tol` bounds the scaled gradient norm.  With `dps`
    set, the solve runs in mpmath arbitrary precision, which is what resolves
    the q2, q3 components (of order u^10, u^12) below double precision.
    """
    if mu1 <= mu2:
        raise DegenerateMomenta(f"need mu1 > mu2, got ({mu1}, {mu2})")
    if dps is not None:
        q = _newton_mp(masses, mu1, mu2, np.asarray(seed, dtype=float), tol, max_iter, dps)
    else:
        q = _newton_fp(masses, mu1, mu2, np.asarray(seed, dtype=float), tol, max_iter)
    report = _build_report(masses, np.asarray(q, dtype=float), mu1, mu2)
    hdet = abs(np.linalg.det(report.hessian[0:4, 0:4]))
    if hdet < 1e-300:
        raise DegenerateHessian("V_eff Hessian determinant below tolerance")
    return report


def _scaled_norm(masses, q, mu1, mu2, grad):
    """Gradient norm over the natural stiffness scale |Hessian| * |q|.

    The V_eff Hessian spans ~u^-6 decades near the collision limit, so the
    raw gradient norm is not a resolution measure; this ratio is roughly the
    relative position error of the critical point.
    """
    hscale = float(np.max(np.abs(effective_potential_hessian(masses, q, mu1, mu2))))
    scale = max(hscale * float(np.max(np.abs(q))), 1e-300)
    return float(np.linalg.norm(grad)) / scale


def _newton_fp(masses, mu1, mu2, q, tol, max_iter):
    # The four simplified equations obey -q2 e1 + q1 e2 - q4 e3 + q3 e4 == 0
    # identically, so their zero set is a curve; closing the system with the
    # solvability condition (in place of the q4-weighted third equation)
    # makes the root isolated again.
    def resid(qv):
        e = simplified_equilibrium_residual(masses, qv, mu1, mu2)
        e[2] = solvability_residual(masses, qv)
        return e

    q = q.copy()
    for _ in range(max_iter):
        r = resid(q)
        jac = np.zeros((4, 4))
        for k in range(4):
            hk = 1e-7 * max(abs(q[k]), 1e-3 * abs(q[3]))
            qp, qm = q.copy(), q.copy()
            qp[k] += hk
            qm[k] -= hk
            jac[:, k] = (resid(qp) - resid(qm)) / (2 * hk)
        try:
            step = np.linalg.solve(jac, -r)
        except np.linalg.LinAlgError as exc:
            raise NoConvergence(f"singular Newton Jacobian: {exc}") from exc
        base = float(np.linalg.norm(r))
        lam = 1.0
        qn = None
        while lam > 1e-9:
            cand = q + lam * step
            try:
                rn = float(np.linalg.norm(resid(cand)))
            except ValueError:
                lam *= 0.5
                continue
            if rn < base or lam <= 2e-9:
                qn = cand
                break
            lam *= 0.5
        if qn is None:
            qn = q + 1e-9 * step
        q = qn
        grad = effective_potential_gradient(masses, q, mu1, mu2)
        if _scaled_norm(masses, q, mu1, mu2, grad) < tol:
            return q
    grad = effective_potential_gradient(masses, q, mu1, mu2)
    if _scaled_norm(masses, q, mu1, mu2, grad) < 100 * tol:
        return q
    raise NoConvergence(
        f"Newton did not reach tolerance {tol}; scaled gradient "
        f"{_scaled_norm(masses, q, mu1, mu2, grad)}")


def _newton_mp(masses, mu1, mu2, seed, tol, max_iter, dps):
    """High-precision Newton on the exact V_eff gradient via mpmath.

    The simplified system has spurious roots that deviate from the critical
    point at the q2, q3 orders (they violate the solvability identity), so
    at extended precision the raw gradient is the only correct residual.
    """
    import mpmath as mp

    with mp.workdps(dps):
        m1, m2, m3 = mp.mpf(masses.m1), mp.mpf(masses.m2), mp.mpf(masses.m3)
        nu1 = m2 * m3 / (m2 + m3)
        nu2 = m1 * (m2 + m3) / (m1 + m2 + m3)
        a2 = m2 / (m2 + m3)
        a3 = m3 / (m2 + m3)
        mu1_, mu2_ = mp.mpf(mu1), mp.mpf(mu2)
        three_half = mp.mpf(3) / 2

        def resid(q):
            q1, q2, q3, q4 = q
            a = (q1 * q4 - q2 * q3) / 2
            s11 = q1 * q1 + q2 * q2
            s22 = q3 * q3 + q4 * q4
            s12 = q1 * q3 + q2 * q4
            d1 = s11
            d2 = a2 * a2 * s11 + 2 * a2 * s12 + s22
            d3 = a3 * a3 * s11 - 2 * a3 * s12 + s22
            v1 = (m2 * m3) / (2 * d1 ** three_half) \
                + (m3 * m1 * a2 * a2) / (2 * d2 ** three_half) \
                + (m1 * m2 * a3 * a3) / (2 * d3 ** three_half)
            v2 = (m3 * m1) / (2 * d2 ** three_half) \
                + (m1 * m2) / (2 * d3 ** three_half)
            v3 = (m3 * m1 * a2) / (d2 ** three_half) \
                - (m1 * m2 * a3) / (d3 ** three_half)
            # centrifugal part of grad V_eff from (mu1^2 T1 + mu2^2 T2)/(8 A^2)
            t1 = q1 * q1 / nu2 + q3 * q3 / nu1
            t2 = q2 * q2 / nu2 + q4 * q4 / nu1
            num = mu1_ ** 2 * t1 + mu2_ ** 2 * t2
            dt1 = (2 * q1 / nu2, mp.mpf(0), 2 * q3 / nu1, mp.mpf(0))
            dt2 = (mp.mpf(0), 2 * q2 / nu2, mp.mpf(0), 2 * q4 / nu1)
            da = (q4 / 2, -q3 / 2, -q2 / 2, q1 / 2)
            vq = (2 * q1 * v1 + q3 * v3, 2 * q2 * v1 + q4 * v3,
                  2 * q3 * v2 + q1 * v3, 2 * q4 * v2 + q2 * v3)
            return [
                (mu1_ ** 2 * dt1[k] + mu2_ ** 2 * dt2[k]) / (8 * a * a)
                - num / (4 * a ** 3) * da[k] + vq[k]
                for k in range(4)
            ]

        q = [mp.mpf(float(v)) for v in seed]
        # balance FD truncation against rounding at the working precision
        steps = [mp.mpf(10) ** (-(dps // 3)) * (abs(v) if v != 0 else mp.mpf(float(seed[3])))
                 for v in q]
        mp_tol = mp.mpf(10) ** (-(dps - 15))
        converged = False
        for _ in range(max_iter):
            r = resid(q)
            jac = mp.matrix(4, 4)
            for k in range(4):
                qp = list(q)
                qm = list(q)
                qp[k] += steps[k]
                qm[k] -= steps[k]
                rp, rm = resid(qp), resid(qm)
                for i in range(4):
                    jac[i, k] = (rp[i] - rm[i]) / (2 * steps[k])
            dq = mp.lu_solve(jac, mp.matrix([-ri for ri in r]))
            q = [qi + dqi for qi, dqi in zip(q, dq)]
            if max(abs(ri) for ri in resid(q)) < mp_tol:
                converged = True
                break
        if not converged:
            raise NoConvergence(f"mp Newton did not reach {mp_tol} in {max_iter} steps")
        return np.array([float(v) for v in q])


# --- energy-momentum scans ----------------------------------------------------

@dataclass
class ScanRow:
    param: float
    mu1: float = math.nan
    mu2: float = math.nan
    h: float = math.nan
    b: float = math.nan
    neg_inv_h: float = math.nan
    classification: str = "error"
    eigenvalues: np.ndarray = field(default_factory=lambda: np.full(8, math.nan))
    error: Optional[str] = None


@dataclass
class ScanTable:
    rows: list

    HEADER = ["param", "mu1", "mu2", "h", "b", "neg_inv_h", "class"] \
        + [f"eig{i}" for i in range(1, 9)]

    def to_csv(self, fh):
        fh.write(",".join(self.HEADER) + "\n")
        for r in self.rows:
            vals = [f"{r.param:.17g}", f"{r.mu1:.17g}", f"{r.mu2:.17g}",
                    f"{r.h:.17g}", f"{r.b:.17g}", f"{r.neg_inv_h:.17g}",
                    r.classification] + [f"{e:.17g}" for e in r.eigenvalues]
            fh.write(",".join(vals) + "\n")

    def to_json(self, fh):
        import json
        obj = [{
            "param": r.param, "mu1": r.mu1, "mu2": r.mu2, "h": r.h, "b": r.b,
            "neg_inv_h": r.neg_inv_h, "class": r.classification,
            "eigenvalues": [float(e) for e in r.eigenvalues],
            "error": r.error,
        } for r in self.rows]
        json.dump(obj, fh)


def _isosceles_scan_point(args) -> ScanRow:
    n, t = args
    try:
        rep = isosceles_equilibrium(n, float(t))
        return ScanRow(
            param=float(t), mu1=rep.mu1, mu2=rep.mu2, h=rep.h, b=rep.b,
            neg_inv_h=-1.0 / rep.h, classification=rep.classification,
            eigenvalues=rep.eigenvalues)
    except (NoRealMomenta, ValueError) as exc:
        return ScanRow(param=float(t), error=str(exc))


def _general_scan_point(args) -> ScanRow:
    m1, m2, m3, u, dps = args
    mm = MassTriple(m1, m2, m3)
    try:
        seed = general_series_equilibrium(mm, float(u))
        rep = newton_equilibrium(mm, seed.mu1, seed.mu2, seed.q, dps=dps)
        return ScanRow(
            param=float(u), mu1=rep.mu1, mu2=rep.mu2, h=rep.h, b=rep.b,
            neg_inv_h=-1.0 / rep.h, classification=rep.classification,
            eigenvalues=rep.eigenvalues)
    except (NoRealMomenta, NoConvergence, DegenerateHessian, ValueError) as exc:
        return ScanRow(param=float(u), error=str(exc))


def _run_scan(point_fn, jobs, workers: int) -> list:
    if workers > 1:
        import multiprocessing
        with multiprocessing.Pool(workers) as pool:
            return pool.map(point_fn, jobs)  # map keeps grid order
    return [point_fn(job) for job in jobs]


def isosceles_scan(n: float, t_grid, workers: int = 1) -> ScanTable:
    """Energy-momentum data of the isosceles family over a t grid.

    Per-point failures are recorded in the row and the scan continues; grid
    points are pure and independent, so `workers > 1` fans them out over a
    process pool (ordering and output are identical either way).
    """
    jobs = [(n, float(t)) for t in t_grid]
    return ScanTable(_run_scan(_isosceles_scan_point, jobs, workers))


def general_scan(masses: MassTriple, u_grid, pair: tuple[int, int] = (2, 3),
                 dps: Optional[int] = None, workers: int = 1) -> ScanTable:
    """Energy-momentum data of a general-mass family over a u grid.

    `pair` names the binary (which bodies collide as u -> 0); the masses are
    permuted accordingly before solving.
    """
    mm = masses.permuted(pair)
    jobs = [(mm.m1, mm.m2, mm.m3, float(u), dps) for u in u_grid]
    return ScanTable(_run_scan(_general_scan_point, jobs, workers))
