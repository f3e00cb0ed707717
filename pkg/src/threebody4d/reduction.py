"""Rotation reduction: the SO(4) chart, partial and fully reduced Hamiltonians.

The chart writes x1 = M (q1,q2,0,0)^t, x2 = M (q3,q4,0,0)^t with
M = exp(B12 th1) exp(B34 th2) exp(B13 ps1) exp(B24 ps2), and extends this to
phase space by cotangent lift.  Two conserved momenta p_theta1, p_theta2
appear (the theta angles are cyclic), and on the invariant set where the
angular momentum tensor takes its normal form the system restricts to a
4-degree-of-freedom Hamiltonian in (q, p) alone.

Conventions fixed here (they make all the cross checks in the test suite
close to machine precision):

* the momenta conjugate to theta satisfy L_12 = -p_theta1, L_34 = -p_theta2
  identically, so on the invariant set with p_theta = (mu1, mu2) the space
  angular momentum is -(mu1 B12 + mu2 B34);
* the invariant set is cut out by p_psi1 = p_psi2 = 0 together with
  Sigma cos(delta) + L3 = 0 and Delta cos(sigma) + L3 = 0, where
  sigma = psi1 + psi2, delta = psi1 - psi2, Sigma = mu1 + mu2,
  Delta = mu1 - mu2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ChartSingular,
    DegenerateMomenta,
    DegeneratePlane,
    KineticDomainError,
)
from .model import FullState, MassTriple, ScalarProducts, potential_derivatives, wedge

# chart-validity floors
AREA_TOL = 1e-12
PSI_TOL = 1e-10


@dataclass(frozen=True)
class RotationAngles:
    """The four angles of the rotation factor M = M_theta * M_psi."""

    psi1: float
    psi2: float
    theta1: float = 0.0
    theta2: float = 0.0

    @property
    def sigma(self) -> float:
        return self.psi1 + self.psi2

    @property
    def delta(self) -> float:
        return self.psi1 - self.psi2

    def require_valid(self):
        if abs(math.cos(2 * self.psi1) - math.cos(2 * self.psi2)) < PSI_TOL:
            raise ChartSingular(
                f"cos(2 psi1) == cos(2 psi2) at psi = ({self.psi1}, {self.psi2})")


@dataclass(frozen=True)
class PartialState:
    """Point of the partially reduced system: (q, p, angles, p_psi, p_theta)."""

    q: np.ndarray
    p: np.ndarray
    angles: RotationAngles
    p_psi: np.ndarray
    p_theta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        object.__setattr__(self, "p_psi", np.asarray(self.p_psi, dtype=float))
        object.__setattr__(self, "p_theta", np.asarray(self.p_theta, dtype=float))

    @property
    def area(self) -> float:
        q = self.q
        return 0.5 * (q[0] * q[3] - q[1] * q[2])

    @property
    def l3(self) -> float:
        q, p = self.q, self.p
        return q[0] * p[1] - q[1] * p[0] + q[2] * p[3] - q[3] * p[2]

    @property
    def sigma_momentum(self) -> float:
        return float(self.p_theta[0] + self.p_theta[1])

    @property
    def delta_momentum(self) -> float:
        return float(self.p_theta[0] - self.p_theta[1])


@dataclass(frozen=True)
class ReducedState:
    """Point of the fully reduced system with fixed momenta mu1 > mu2 >= 0."""

    q: np.ndarray
    p: np.ndarray
    mu1: float
    mu2: float

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "p", np.asarray(self.p, dtype=float))
        if self.mu2 < 0:
            raise ValueError(f"mu2 must be >= 0, got {self.mu2}")
        if self.mu1 <= self.mu2:
            raise DegenerateMomenta(f"need mu1 > mu2, got ({self.mu1}, {self.mu2})")

    @property
    def area(self) -> float:
        q = self.q
        return 0.5 * (q[0] * q[3] - q[1] * q[2])

    @property
    def l3(self) -> float:
        q, p = self.q, self.p
        return q[0] * p[1] - q[1] * p[0] + q[2] * p[3] - q[3] * p[2]


def plane_rotation(i: int, j: int, t: float) -> np.ndarray:
    """exp(B_ij t): rotation by t in the oriented (i, j) plane (0-based)."""
    m = np.eye(4)
    c, s = math.cos(t), math.sin(t)
    m[i, i] = c
    m[j, j] = c
    m[i, j] = s
    m[j, i] = -s
    return m


def rotation_matrix(angles: RotationAngles) -> np.ndarray:
    """M = exp(B12 th1) exp(B34 th2) exp(B13 ps1) exp(B24 ps2)."""
    return (plane_rotation(0, 1, angles.theta1)
            @ plane_rotation(2, 3, angles.theta2)
            @ plane_rotation(0, 2, angles.psi1)
            @ plane_rotation(1, 3, angles.psi2))


def theta_rotation(angles: RotationAngles) -> np.ndarray:
    return plane_rotation(0, 1, angles.theta1) @ plane_rotation(2, 3, angles.theta2)


def _bc_coefficients(q, l3, p_theta, psi1, psi2):
    """The linear-in-momenta coefficients B and C of the cotangent lift."""
    area = 0.5 * (q[0] * q[3] - q[1] * q[2])
    if abs(area) < AREA_TOL:
        raise ChartSingular(f"oriented area A = {area} too small")
    e = math.cos(2 * psi1) - math.cos(2 * psi2)
    if abs(e) < PSI_TOL:
        raise ChartSingular("cos(2 psi1) == cos(2 psi2)")
    den = 2.0 * area * e
    s1, c1 = math.sin(psi1), math.cos(psi1)
    s2, c2 = math.sin(psi2), math.cos(psi2)
    b = (l3 * math.sin(2 * psi1) + 2.0 * (p_theta[0] * s1 * c2 + p_theta[1] * c1 * s2)) / den
    c = (l3 * math.sin(2 * psi2) + 2.0 * (p_theta[0] * c1 * s2 + p_theta[1] * s1 * c2)) / den
    return b, c, area


def lift_to_full(partial: PartialState) -> FullState:
    """Chart point -> (x1, x2, y1, y2); the exact cotangent lift."""
    q, p = partial.q, partial.p
    ang = partial.angles
    b, c, area = _bc_coefficients(q, partial.l3, partial.p_theta, ang.psi1, ang.psi2)
    pp1, pp2 = partial.p_psi
    inv2a = 0.5 / area
    a1 = q[2] * b - q[3] * pp1 * inv2a
    a2 = -q[3] * c + q[2] * pp2 * inv2a
    a3 = -q[0] * b + q[1] * pp1 * inv2a
    a4 = q[1] * c - q[0] * pp2 * inv2a
    m = rotation_matrix(ang)
    x1 = m @ np.array([q[0], q[1], 0.0, 0.0])
    x2 = m @ np.array([q[2], q[3], 0.0, 0.0])
    y1 = m @ np.array([p[0], p[1], a1, a2])
    y2 = m @ np.array([p[2], p[3], a3, a4])
    return FullState(x1, x2, y1, y2)


def configuration_jacobian(partial: PartialState) -> np.ndarray:
    """The 8x8 factor U with d(x1,x2)/d(q,psi,theta) = diag(M,M) U.

    Column order (q1, q2, q3, q4, psi1, psi2, theta1, theta2).  Its
    determinant is 2 A^2 (cos 2psi1 - cos 2psi2).
    """
    q = partial.q
    ps1, ps2 = partial.angles.psi1, partial.angles.psi2
    s1, c1 = math.sin(ps1), math.cos(ps1)
    s2, c2 = math.sin(ps2), math.cos(ps2)
    u = np.zeros((8, 8))
    for row, (qa, qb) in enumerate(((q[0], q[1]), (q[2], q[3]))):
        r = 4 * row
        u[r + 0, 2 * row + 0] = 1.0
        u[r + 1, 2 * row + 1] = 1.0
        u[r + 0, 6] = qb * c1 * c2
        u[r + 0, 7] = qb * s1 * s2
        u[r + 1, 6] = -qa * c1 * c2
        u[r + 1, 7] = -qa * s1 * s2
        u[r + 2, 4] = -qa
        u[r + 2, 6] = qb * s1 * c2
        u[r + 2, 7] = -qb * c1 * s2
        u[r + 3, 5] = -qb
        u[r + 3, 6] = -qa * c1 * s2
        u[r + 3, 7] = qa * s1 * c2
    return u


def configuration_jacobian_det(partial: PartialState) -> float:
    """det U = 2 A^2 (cos 2psi1 - cos 2psi2), in closed form."""
    a = partial.area
    return 2.0 * a * a * (math.cos(2 * partial.angles.psi1)
                          - math.cos(2 * partial.angles.psi2))


def lift_jacobian(partial: PartialState, step: float = 1e-4) -> np.ndarray:
    """Richardson-extrapolated 16x16 Jacobian of the lift (O(step^4) accurate).

    Row order (x1, x2, y1, y2); column order
    (q1..q4, psi1, psi2, theta1, theta2, p1..p4, p_psi1, p_psi2, p_th1, p_th2).
    """
    base = partial_to_array(partial)

    def column(k, hk):
        zp = base.copy()
        zm = base.copy()
        zp[k] += hk
        zm[k] -= hk
        fp = full_to_array(lift_to_full(array_to_partial(zp)))
        fm = full_to_array(lift_to_full(array_to_partial(zm)))
        return (fp - fm) / (2.0 * hk)

    jac = np.zeros((16, 16))
    for k in range(16):
        hk = step * max(1.0, abs(base[k]))
        jac[:, k] = (4.0 * column(k, hk / 2.0) - column(k, hk)) / 3.0
    return jac


def partial_to_array(partial: PartialState) -> np.ndarray:
    """(q, psi, theta, p, p_psi, p_theta) as a flat 16-vector."""
    ang = partial.angles
    return np.concatenate([
        partial.q,
        [ang.psi1, ang.psi2, ang.theta1, ang.theta2],
        partial.p,
        partial.p_psi,
        partial.p_theta,
    ])


def array_to_partial(z: np.ndarray) -> PartialState:
    z = np.asarray(z, dtype=float)
    return PartialState(
        q=z[0:4],
        p=z[8:12],
        angles=RotationAngles(z[4], z[5], z[6], z[7]),
        p_psi=z[12:14],
        p_theta=z[14:16],
    )


def full_to_array(state: FullState) -> np.ndarray:
    return np.concatenate([state.x1, state.x2, state.y1, state.y2])


def array_to_full(z: np.ndarray) -> FullState:
    z = np.asarray(z, dtype=float)
    return FullState(z[0:4], z[4:8], z[8:12], z[12:16])


def project_to_partial(state: FullState) -> PartialState:
    """Inverse chart: recover (q, p, angles, conjugate momenta) from (x, y).

    The angles come from a rotation-only SVD of the 2x2 block ratio of the
    configuration and the q from undoing the rotations.  The conjugate
    momenta follow from exact identities: p = first components of M^t y,
    p_theta = -(L_12, L_34) and p_psi = -(Lhat_13, Lhat_24) with
    Lhat = M_theta^t L M_theta.  The returned point is one of the finitely
    many chart preimages; `lift_to_full` maps it back onto `state`.
    """
    ptop = np.column_stack([state.x1[0:2], state.x2[0:2]])
    pbot = np.column_stack([state.x1[2:4], state.x2[2:4]])
    gram = wedge(state.x1, state.x2)
    scale = float(np.linalg.norm(state.x1) * np.linalg.norm(state.x2))
    if np.max(np.abs(gram)) < AREA_TOL * max(scale, 1e-30):
        raise DegeneratePlane("x1 and x2 are collinear (A = 0)")
    if abs(np.linalg.det(ptop)) < AREA_TOL * max(scale, 1e-30):
        raise ChartSingular("configuration orthogonal to the (1,2)-plane")
    # with R(t) = [[cos t, sin t], [-sin t, cos t]] (the convention of the
    # elementary rotations): -G = R(theta2) diag(tan psi1, tan psi2) R(-theta1)
    g = -pbot @ np.linalg.inv(ptop)
    uu, sv, vt = np.linalg.svd(g)
    d = sv.copy()
    if np.linalg.det(uu) < 0:
        uu[:, 1] *= -1.0
        d[1] *= -1.0
    if np.linalg.det(vt) < 0:
        vt[1, :] *= -1.0
        d[1] *= -1.0
    theta2 = math.atan2(uu[0, 1], uu[0, 0])
    theta1 = math.atan2(vt[1, 0], vt[0, 0])  # vt = R(-theta1)
    psi1 = math.atan(d[0])
    psi2 = math.atan(d[1])
    ang = RotationAngles(psi1, psi2, theta1, theta2)
    cinv = np.diag([1.0 / math.cos(psi1), 1.0 / math.cos(psi2)])
    rm1 = np.array([[math.cos(theta1), -math.sin(theta1)],
                    [math.sin(theta1), math.cos(theta1)]])  # R(-theta1)
    qmat = cinv @ rm1 @ ptop
    q = np.array([qmat[0, 0], qmat[1, 0], qmat[0, 1], qmat[1, 1]])
    area = 0.5 * (q[0] * q[3] - q[1] * q[2])
    if abs(area) < AREA_TOL:
        raise DegeneratePlane("recovered chart point has A = 0")

    m = rotation_matrix(ang)
    yh1 = m.T @ state.y1
    yh2 = m.T @ state.y2
    p = np.array([yh1[0], yh1[1], yh2[0], yh2[1]])
    lmat = wedge(state.x1, state.y1) + wedge(state.x2, state.y2)
    mth = theta_rotation(ang)
    lhat = mth.T @ lmat @ mth
    p_theta = np.array([-lmat[0, 1], -lmat[2, 3]])
    p_psi = np.array([-lhat[0, 2], -lhat[1, 3]])
    return PartialState(q=q, p=p, angles=ang, p_psi=p_psi, p_theta=p_theta)


def chart_images(partial: PartialState) -> list[PartialState]:
    """Discrete chart symmetries: equivalent preimages of the same full state.

    Shifting psi_i by pi flips the sign of the corresponding q/p column;
    shifting both thetas by pi flips all q and p.  Used to align projected
    trajectories with a reference branch.
    """
    out = []
    ang = partial.angles
    for f1 in (False, True):
        for f2 in (False, True):
            for ft in (False, True):
                q = partial.q.copy()
                p = partial.p.copy()
                psi1, psi2 = ang.psi1, ang.psi2
                th1, th2 = ang.theta1, ang.theta2
                if f1:
                    psi1 += math.pi
                    q[0], q[2], p[0], p[2] = -q[0], -q[2], -p[0], -p[2]
                if f2:
                    psi2 += math.pi
                    q[1], q[3], p[1], p[3] = -q[1], -q[3], -p[1], -p[3]
                if ft:
                    th1 += math.pi
                    th2 += math.pi
                    q, p = -q, -p
                out.append(PartialState(q=q, p=p,
                                        angles=RotationAngles(psi1, psi2, th1, th2),
                                        p_psi=partial.p_psi.copy(),
                                        p_theta=partial.p_theta.copy()))
    return out


def kinetic_tilde(qi: float, qj: float, b: float, c: float, pp1: float,
                  pp2: float, area: float) -> float:
    """f~(qi, qj) = (qi B - qj p_psi1/(2A))^2 + (-qj C + qi p_psi2/(2A))^2."""
    inv2a = 0.5 / area
    t1 = qi * b - qj * pp1 * inv2a
    t2 = -qj * c + qi * pp2 * inv2a
    return t1 * t1 + t2 * t2


def hamiltonian_partial(masses: MassTriple, partial: PartialState,
                        potential=None) -> float:
    """Partially reduced Hamiltonian (6 degrees of freedom, theta cyclic).

    H = (p1^2 + p2^2 + f~(q3,q4))/(2 nu1) + (p3^2 + p4^2 + f~(q1,q2))/(2 nu2)
        + V(q1^2+q2^2, q3^2+q4^2, q1 q3 + q2 q4).

    The reduction holds for any potential through the scalar products;
    `potential` (a callable on ScalarProducts) replaces the Newtonian one.
    """
    q, p = partial.q, partial.p
    ang = partial.angles
    b, c, area = _bc_coefficients(q, partial.l3, partial.p_theta, ang.psi1, ang.psi2)
    pp1, pp2 = partial.p_psi
    f34 = kinetic_tilde(q[2], q[3], b, c, pp1, pp2, area)
    f12 = kinetic_tilde(q[0], q[1], b, c, pp1, pp2, area)
    s = ScalarProducts(q[0] ** 2 + q[1] ** 2, q[2] ** 2 + q[3] ** 2,
                       q[0] * q[2] + q[1] * q[3])
    v = potential(s) if potential is not None else potential_derivatives(masses, s)[0]
    return ((p[0] ** 2 + p[1] ** 2 + f34) / (2.0 * masses.nu1)
            + (p[2] ** 2 + p[3] ** 2 + f12) / (2.0 * masses.nu2) + v)


def angular_momentum_partial(partial: PartialState) -> np.ndarray:
    """The conjugated angular momentum M_theta^t L M_theta in closed form.

    Equals -B12 p_th1 - B34 p_th2 - B13 p_psi1 - B24 p_psi2
    + (1/2)(v1/sin delta)(B23 + B14) + (1/2)(v2/sin sigma)(B23 - B14)
    with v1 = L3 + Sigma cos delta, v2 = L3 + Delta cos sigma.
    """
    ang = partial.angles
    sig, dlt = ang.sigma, ang.delta
    sd, ss = math.sin(dlt), math.sin(sig)
    if abs(sd) < PSI_TOL or abs(ss) < PSI_TOL:
        raise ChartSingular("sin(sigma) or sin(delta) vanishes")
    l3 = partial.l3
    v1 = l3 + partial.sigma_momentum * math.cos(dlt)
    v2 = l3 + partial.delta_momentum * math.cos(sig)
    l23 = 0.5 * (v1 / sd + v2 / ss)
    l14 = 0.5 * (v1 / sd - v2 / ss)
    pt1, pt2 = partial.p_theta
    pp1, pp2 = partial.p_psi
    out = np.zeros((4, 4))
    out[0, 1], out[1, 0] = -pt1, pt1
    out[2, 3], out[3, 2] = -pt2, pt2
    out[0, 2], out[2, 0] = -pp1, pp1
    out[1, 3], out[3, 1] = -pp2, pp2
    out[1, 2], out[2, 1] = l23, -l23
    out[0, 3], out[3, 0] = l14, -l14
    return out


def invariant_set_residual(partial: PartialState, mu1: float, mu2: float) -> np.ndarray:
    """(c1, c2, c3, c4) whose zero level is the invariant set for p_theta = mu.

    c1 = p_psi1, c2 = p_psi2,
    c3 = (mu1 + mu2) cos(delta) + L3, c4 = (mu1 - mu2) cos(sigma) + L3.
    """
    ang = partial.angles
    l3 = partial.l3
    return np.array([
        partial.p_psi[0],
        partial.p_psi[1],
        (mu1 + mu2) * math.cos(ang.delta) + l3,
        (mu1 - mu2) * math.cos(ang.sigma) + l3,
    ])


def restriction_matrix_A(partial: PartialState) -> tuple[np.ndarray, float]:
    """Bracket matrix A_ij = {g_i, g_j} of the four constraint functions.

    The g_i are the off-normal-plane components of the conjugated angular
    momentum: g1 = -p_psi1, g2 = -p_psi2, g3 = L23, g4 = L14 (see
    `angular_momentum_partial`).  Hard-coded closed forms; a finite-difference
    bracket oracle covers them in the test suite.  Restricted to the invariant
    set the only non-zero entries are +-p_theta_i and the determinant is
    (mu1^2 - mu2^2)^2.
    """
    ang = partial.angles
    sig, dlt = ang.sigma, ang.delta
    sd, ss = math.sin(dlt), math.sin(sig)
    if abs(sd) < PSI_TOL or abs(ss) < PSI_TOL:
        raise ChartSingular("sin(sigma) or sin(delta) vanishes")
    cd, cs = math.cos(dlt), math.cos(sig)
    l3 = partial.l3
    pt1, pt2 = partial.p_theta
    v1 = l3 + (pt1 + pt2) * cd
    v2 = l3 + (pt1 - pt2) * cs
    w1 = 0.5 * v1 * cd / (sd * sd)
    w2 = 0.5 * v2 * cs / (ss * ss)
    a13 = -pt1 - w1 - w2
    a14 = -pt2 - w1 + w2
    mat = np.array([
        [0.0, 0.0, a13, a14],
        [0.0, 0.0, -a14, -a13],
        [-a13, a14, 0.0, 0.0],
        [-a14, a13, 0.0, 0.0],
    ])
    return mat, float(np.linalg.det(mat))


def restriction_matrix_det_closed(partial: PartialState) -> float:
    """det A = (Sigma + L3 cos delta)^2 (Delta + L3 cos sigma)^2 / (sin^4 delta sin^4 sigma)."""
    ang = partial.angles
    sd, ss = math.sin(ang.delta), math.sin(ang.sigma)
    l3 = partial.l3
    num = ((partial.sigma_momentum + l3 * math.cos(ang.delta))
           * (partial.delta_momentum + l3 * math.cos(ang.sigma)))
    return num * num / (sd ** 4 * ss ** 4)


def kinetic_f(qi: float, qj: float, l3: float, mu1: float, mu2: float,
              area: float) -> float:
    """Restricted kinetic function f on the invariant set.

    f = ((L_d + L_s)^2 qi^2 + (L_d - L_s)^2 qj^2) / (16 A^2) with
    L_d = sqrt(Delta^2 - L3^2), L_s = sqrt(Sigma^2 - L3^2) (principal roots;
    f only uses their squares, so the branch does not matter).
    """
    sig = mu1 + mu2
    dlt = mu1 - mu2
    ld2 = dlt * dlt - l3 * l3
    ls2 = sig * sig - l3 * l3
    if ld2 < 0.0 or ls2 < 0.0:
        raise KineticDomainError(
            f"L3^2 = {l3 * l3} exceeds Delta^2 = {dlt * dlt} or Sigma^2 = {sig * sig}")
    ld = math.sqrt(ld2)
    ls = math.sqrt(ls2)
    return ((ld + ls) ** 2 * qi * qi + (ld - ls) ** 2 * qj * qj) / (16.0 * area * area)


def hamiltonian_reduced(masses: MassTriple, state: ReducedState,
                        potential=None) -> float:
    """Fully reduced Hamiltonian on the 8-dimensional phase space.

    H = (p1^2 + p2^2 + f(q3,q4))/(2 nu1) + (p3^2 + p4^2 + f(q1,q2))/(2 nu2)
        + V(q1^2+q2^2, q3^2+q4^2, q1 q3 + q2 q4).

    `potential` (a callable on ScalarProducts) replaces the Newtonian one;
    the kinetic reduction is potential-agnostic.
    """
    q, p = state.q, state.p
    area = state.area
    if abs(area) < AREA_TOL:
        raise ChartSingular(f"oriented area A = {area} too small")
    l3 = state.l3
    f34 = kinetic_f(q[2], q[3], l3, state.mu1, state.mu2, area)
    f12 = kinetic_f(q[0], q[1], l3, state.mu1, state.mu2, area)
    s = ScalarProducts(q[0] ** 2 + q[1] ** 2, q[2] ** 2 + q[3] ** 2,
                       q[0] * q[2] + q[1] * q[3])
    v = potential(s) if potential is not None else potential_derivatives(masses, s)[0]
    return ((p[0] ** 2 + p[1] ** 2 + f34) / (2.0 * masses.nu1)
            + (p[2] ** 2 + p[3] ** 2 + f12) / (2.0 * masses.nu2) + v)


def embed_reduced(state: ReducedState, theta1: float = 0.0,
                  theta2: float = 0.0) -> PartialState:
    """Canonical section of the invariant set over a reduced state.

    Picks delta = arccos(-L3/Sigma), sigma = arccos(-L3/Delta) in (0, pi)
    (the smaller-angle branch keeps sin > 0), sets p_psi = 0 and
    p_theta = (mu1, mu2).  The theta values are free parameters.
    """
    sig_m = state.mu1 + state.mu2
    dlt_m = state.mu1 - state.mu2
    l3 = state.l3
    if abs(l3) > sig_m or abs(l3) > dlt_m:
        raise KineticDomainError(
            f"|L3| = {abs(l3)} exceeds Sigma = {sig_m} or Delta = {dlt_m}")
    delta = math.acos(-l3 / sig_m)
    sigma = math.acos(-l3 / dlt_m)
    psi1 = 0.5 * (sigma + delta)
    psi2 = 0.5 * (sigma - delta)
    ang = RotationAngles(psi1, psi2, theta1, theta2)
    ang.require_valid()
    return PartialState(
        q=state.q.copy(),
        p=state.p.copy(),
        angles=ang,
        p_psi=np.zeros(2),
        p_theta=np.array([state.mu1, state.mu2]),
    )
