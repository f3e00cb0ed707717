"""Masses, Jacobi vectors, the Newtonian potential, and angular momentum.

Everything here lives on the translation-reduced phase space: two position
vectors x1, x2 in R^4 and their conjugate momenta y1, y2 (the centre of mass
and total linear momentum are split off and set to zero).  The gravitational
constant is fixed to 1.  The potential is evaluated through the scalar
products of x1 and x2 only, which is what makes the later rotation reduction
possible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError

# squared-distance floor; below this the potential refuses to evaluate
COLLISION_TOL = 1e-24


@dataclass(frozen=True)
class MassTriple:
    """The three masses with the derived reduced masses and ratios."""

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        if not (self.m1 > 0 and self.m2 > 0 and self.m3 > 0):
            raise ValueError(f"masses must be positive, got {(self.m1, self.m2, self.m3)}")

    @property
    def total(self) -> float:
        return self.m1 + self.m2 + self.m3

    @property
    def nu1(self) -> float:
        return self.m2 * self.m3 / (self.m2 + self.m3)

    @property
    def nu2(self) -> float:
        return self.m1 * (self.m2 + self.m3) / self.total

    @property
    def a2(self) -> float:
        return self.m2 / (self.m2 + self.m3)

    @property
    def a3(self) -> float:
        return self.m3 / (self.m2 + self.m3)

    @property
    def n(self) -> float:
        """Mass ratio m1/m; meaningful when m2 == m3 == m."""
        return self.m1 / self.m2

    def permuted(self, pair: tuple[int, int]) -> "MassTriple":
        """Masses reordered so that the bodies `pair` (1-based) form the binary.

        The Jacobi construction singles out bodies 2 and 3 as the binary;
        choosing a different pair is done by permuting the masses.
        """
        i, j = sorted(pair)
        if (i, j) == (2, 3):
            return self
        if (i, j) == (1, 3):
            return MassTriple(self.m2, self.m1, self.m3)
        if (i, j) == (1, 2):
            return MassTriple(self.m3, self.m1, self.m2)
        raise ValueError(f"pair must name two distinct bodies in 1..3, got {pair}")


@dataclass(frozen=True)
class ScalarProducts:
    """s11 = |x1|^2, s22 = |x2|^2, s12 = x1.x2."""

    s11: float
    s22: float
    s12: float

    def __post_init__(self):
        if self.s11 < 0 or self.s22 < 0:
            raise ValueError("squared norms must be non-negative")
        slack = 1e-9 * (self.s11 * self.s22) + 1e-300
        if self.s12 * self.s12 > self.s11 * self.s22 + slack:
            raise ValueError("s12^2 exceeds s11*s22 (Cauchy-Schwarz violated)")


@dataclass(frozen=True)
class FullState:
    """Translation-reduced phase point (x1, x2, y1, y2), vectors in R^4."""

    x1: np.ndarray
    x2: np.ndarray
    y1: np.ndarray
    y2: np.ndarray

    def __post_init__(self):
        for name in ("x1", "x2", "y1", "y2"):
            v = np.asarray(getattr(self, name), dtype=float)
            if v.shape != (4,):
                raise ValueError(f"{name} must be a 4-vector, got shape {v.shape}")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} has non-finite entries")
            object.__setattr__(self, name, v)

    def scalar_products(self) -> ScalarProducts:
        return ScalarProducts(
            float(self.x1 @ self.x1),
            float(self.x2 @ self.x2),
            float(self.x1 @ self.x2),
        )

    def rotated(self, m: np.ndarray) -> "FullState":
        return FullState(m @ self.x1, m @ self.x2, m @ self.y1, m @ self.y2)

    def rescaled(self, s: float) -> "FullState":
        """Image under the scaling symmetry r -> s r, t -> s^(3/2) t.

        Positions scale by s and momenta by s^(-1/2); H scales by 1/s.
        Exposed as a test utility only.
        """
        c = s ** -0.5
        return FullState(s * self.x1, s * self.x2, c * self.y1, c * self.y2)


@dataclass(frozen=True)
class AngularMomentum:
    """Antisymmetric angular momentum tensor with its spectral pair.

    The eigenvalues of L are +-i*mu1, +-i*mu2 with mu1 >= |mu2|; mu2 carries
    the sign of the Pfaffian so that Pf(L) = mu1*mu2 holds exactly.  States
    aligned with the positive normal form mu1*B12 + mu2*B34 have mu2 >= 0.
    """

    matrix: np.ndarray
    mu1: float
    mu2: float

    @property
    def pfaffian(self) -> float:
        return pfaffian4(self.matrix)

    @property
    def trace_square(self) -> float:
        return float(np.trace(self.matrix @ self.matrix))


def jacobi_from_positions(masses: MassTriple, r1, r2, r3, v1, v2, v3) -> FullState:
    """Jacobi vectors and conjugate momenta from raw positions/velocities.

    x1 = r2 - r3 (the binary), x2 = r1 - centre of mass of the binary.
    The conjugate momenta are y1 = nu1 * dx1/dt and y2 = nu2 * dx2/dt; with
    these the kinetic energy splits as |y1|^2/(2 nu1) + |y2|^2/(2 nu2) plus
    the centre-of-mass term, which is dropped (it can always be removed by a
    frame shift, see `centre_of_mass`).
    """
    r1 = np.asarray(r1, dtype=float)
    r2 = np.asarray(r2, dtype=float)
    r3 = np.asarray(r3, dtype=float)
    v1 = np.asarray(v1, dtype=float)
    v2 = np.asarray(v2, dtype=float)
    v3 = np.asarray(v3, dtype=float)
    a2, a3 = masses.a2, masses.a3
    x1 = r2 - r3
    x2 = r1 - (masses.m2 * r2 + masses.m3 * r3) / (masses.m2 + masses.m3)
    y1 = masses.nu1 * (v2 - v3)
    y2 = masses.nu2 * (v1 - a2 * v2 - a3 * v3)
    return FullState(x1, x2, y1, y2)


def centre_of_mass(masses: MassTriple, r1, r2, r3, v1, v2, v3):
    """The dropped pair (x3, y3): centre of mass and total linear momentum."""
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    x3 = (m1 * np.asarray(r1) + m2 * np.asarray(r2) + m3 * np.asarray(r3)) / masses.total
    y3 = m1 * np.asarray(v1) + m2 * np.asarray(v2) + m3 * np.asarray(v3)
    return x3, y3


def mutual_distances_sq(masses: MassTriple, s: ScalarProducts) -> tuple[float, float, float]:
    """Squared mutual distances (d1, d2, d3) = (|r2-r3|, |r3-r1|, |r1-r2|).

    In Jacobi coordinates d1 = |x1|, d2 = |a2 x1 + x2|, d3 = |a3 x1 - x2|.
    """
    a2, a3 = masses.a2, masses.a3
    d1 = s.s11
    d2 = a2 * a2 * s.s11 + 2.0 * a2 * s.s12 + s.s22
    d3 = a3 * a3 * s.s11 - 2.0 * a3 * s.s12 + s.s22
    return d1, d2, d3


def potential_derivatives(masses: MassTriple, s: ScalarProducts):
    """Newtonian potential V and its partials (V1, V2, V3) wrt (s11, s22, s12)."""
    d1, d2, d3 = mutual_distances_sq(masses, s)
    if min(d1, d2, d3) <= COLLISION_TOL:
        raise CollisionError(f"squared distance below tolerance: {(d1, d2, d3)}")
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    a2, a3 = masses.a2, masses.a3
    c1, c2, c3 = -m2 * m3, -m3 * m1, -m1 * m2
    # d(dk^2)/d(s11, s22, s12) are constant vectors g_k
    g = ((1.0, 0.0, 0.0), (a2 * a2, 1.0, 2.0 * a2), (a3 * a3, 1.0, -2.0 * a3))
    v = 0.0
    grad = [0.0, 0.0, 0.0]
    for ck, dk, gk in zip((c1, c2, c3), (d1, d2, d3), g):
        inv = dk ** -0.5
        v += ck * inv
        w = -0.5 * ck * inv / dk  # d(ck/dk)/d(dk^2)
        for i in range(3):
            grad[i] += w * gk[i]
    return v, grad[0], grad[1], grad[2]


def potential_hessian_s(masses: MassTriple, s: ScalarProducts) -> np.ndarray:
    """3x3 Hessian of V with respect to (s11, s22, s12)."""
    d = mutual_distances_sq(masses, s)
    if min(d) <= COLLISION_TOL:
        raise CollisionError(f"squared distance below tolerance: {d}")
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    a2, a3 = masses.a2, masses.a3
    cs = (-m2 * m3, -m3 * m1, -m1 * m2)
    g = np.array([[1.0, 0.0, 0.0], [a2 * a2, 1.0, 2.0 * a2], [a3 * a3, 1.0, -2.0 * a3]])
    h = np.zeros((3, 3))
    for ck, dk, gk in zip(cs, d, g):
        h += 0.75 * ck * dk ** -2.5 * np.outer(gk, gk)
    return h


def newtonian_potential(masses: MassTriple, s: ScalarProducts) -> float:
    """V = -m2 m3/d1 - m3 m1/d2 - m1 m2/d3 as a function of scalar products."""
    return potential_derivatives(masses, s)[0]


def hamiltonian_full(masses: MassTriple, state: FullState) -> float:
    """H = |y1|^2/(2 nu1) + |y2|^2/(2 nu2) + V(scalar products of x)."""
    kin = float(state.y1 @ state.y1) / (2.0 * masses.nu1) \
        + float(state.y2 @ state.y2) / (2.0 * masses.nu2)
    return kin + newtonian_potential(masses, state.scalar_products())


def wedge(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """x ^ y = x y^t - y x^t."""
    return np.outer(x, y) - np.outer(y, x)


def pfaffian4(l: np.ndarray) -> float:
    """Pfaffian of a 4x4 antisymmetric matrix by the closed formula."""
    return float(l[0, 1] * l[2, 3] - l[0, 2] * l[1, 3] + l[0, 3] * l[1, 2])


def spectral_pair(l: np.ndarray) -> tuple[float, float]:
    """(mu1, mu2) from tr L^2 and Pf L, solving the quadratic in mu^2.

    mu1 >= |mu2| >= 0 and sign(mu2) = sign(Pf L), so that both invariants
    Pf L = mu1 mu2 and tr L^2 = -2(mu1^2 + mu2^2) are reproduced exactly.
    """
    pf = pfaffian4(l)
    ssum = -0.5 * float(np.trace(l @ l))  # mu1^2 + mu2^2
    ssum = max(ssum, 0.0)
    disc = max(ssum * ssum - 4.0 * pf * pf, 0.0)
    root = math.sqrt(disc)
    z1 = 0.5 * (ssum + root)
    z2 = 0.5 * (ssum - root)
    mu1 = math.sqrt(max(z1, 0.0))
    mu2 = math.sqrt(max(z2, 0.0))
    if pf < 0.0:
        mu2 = -mu2
    return mu1, mu2


def angular_momentum(state: FullState) -> AngularMomentum:
    """L = x1 ^ y1 + x2 ^ y2 with its spectral pair."""
    l = wedge(state.x1, state.y1) + wedge(state.x2, state.y2)
    mu1, mu2 = spectral_pair(l)
    return AngularMomentum(l, mu1, mu2)
