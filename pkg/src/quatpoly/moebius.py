"""Three models of hyperbolic 5-space and the 2x2 quaternionic action.

Points live in one of:

* the quaternionic projective line (homogeneous pairs [q1 : q2], the
  boundary sphere S^4),
* the upper half-space {(x1..x4, x5) : x5 > 0} with boundary chart
  v = x1 + x2*i + x3*j + x4*k plus a tagged point at infinity,
* the open unit ball in R^5 with boundary S^4.

S^4 and ball points are plain length-5 numpy arrays.  The half-space
boundary chart uses `INFINITY` as the tagged value for the missing
point.  Group elements act by [q1 : q2] -> [a q1 + b q2 : c q1 + d q2];
on the half-space chart this is v -> (a v + b)(c v + d)^-1, and the
interior action divides the height x5 by

    |x|^2 |c|^2 + 2 Re(c v conj(d)) + |d|^2

which also rescales the chart numerator.  All actions are mutually
compatible, which the test-suite checks by round-tripping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .quaternions import (DEFAULT_TOL, ONE, Quaternion, QuatMatrix, SL2H,
                          as_rng, dieudonne_det, random_quaternion,
                          random_symplectic)


class _Infinity:
    """Tagged point at infinity of the half-space boundary chart."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()

#: Distance from the unit sphere below which a 5-vector counts as boundary.
BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class HP1Point:
    """Homogeneous pair [q1 : q2], canonicalized on construction.

    The representative is scaled so |q1|^2 + |q2|^2 = 1 and the first
    nonzero coordinate, checked in the order (q2, q1), is real and
    positive.  Two points are the same element of the projective line
    when they agree up to right multiplication by a unit quaternion;
    use `is_same_point`, which ignores the gauge.
    """

    q1: Quaternion
    q2: Quaternion

    def __post_init__(self):
        n = math.sqrt(self.q1.norm_sq() + self.q2.norm_sq())
        if n < 1e-300:
            raise ValueError("[0 : 0] is not a point of the projective line")
        q1, q2 = self.q1 * (1.0 / n), self.q2 * (1.0 / n)
        anchor = q2 if abs(q2) > 1e-12 else q1
        h = anchor.conj() * (1.0 / abs(anchor))
        object.__setattr__(self, "q1", q1 * h)
        object.__setattr__(self, "q2", q2 * h)

    @classmethod
    def from_chart(cls, v: Quaternion | _Infinity) -> "HP1Point":
        if v is INFINITY:
            return cls(ONE, Quaternion())
        return cls(v, ONE)

    def chart(self) -> Quaternion | _Infinity:
        """The affine coordinate q1 * q2^-1, or INFINITY."""
        if abs(self.q2) <= 1e-14:
            return INFINITY
        return self.q1 * self.q2.inverse()

    def is_same_point(self, other: "HP1Point", tol: float = DEFAULT_TOL) -> bool:
        return bool(np.linalg.norm(hp1_to_s4(self) - hp1_to_s4(other)) <= tol)


# -- model conversions ------------------------------------------------


def as_s4_point(u, tol: float = 1e-9) -> np.ndarray:
    u = np.asarray(u, dtype=float)
    if u.shape != (5,):
        raise ValueError("an S^4 point is a length-5 vector")
    n = np.linalg.norm(u)
    if abs(n - 1.0) > tol:
        raise ValueError(f"not a unit vector: |u| = {n!r}")
    return u / n


def hp1_to_s4(p: HP1Point) -> np.ndarray:
    """Boundary sphere coordinates of a projective point.

    With |q1|^2 + |q2|^2 = 1 the first four coordinates are the
    quadruple of 2 q1 conj(q2) and the fifth is |q2|^2 - |q1|^2, which
    is the stereographic image of the affine chart.
    """
    vec = p.q1 * p.q2.conj() * 2.0
    return np.array([vec.w, vec.x, vec.y, vec.z,
                     p.q2.norm_sq() - p.q1.norm_sq()])


def s4_to_hp1(u) -> HP1Point:
    u = np.asarray(u, dtype=float)
    t = 1.0 + u[4]
    if t < 1e-14:
        return HP1Point(ONE, Quaternion())
    q1 = Quaternion(u[0], u[1], u[2], u[3]) * (1.0 / math.sqrt(2.0 * t))
    q2 = Quaternion(math.sqrt(t / 2.0))
    return HP1Point(q1, q2)


def s4_to_chart(u) -> Quaternion | _Infinity:
    """Stereographic chart of a boundary point; south pole -> INFINITY."""
    u = np.asarray(u, dtype=float)
    t = 1.0 + u[4]
    if t < 1e-14:
        return INFINITY
    return Quaternion(u[0] / t, u[1] / t, u[2] / t, u[3] / t)


def chart_to_s4(v: Quaternion | _Infinity) -> np.ndarray:
    if v is INFINITY:
        return np.array([0.0, 0.0, 0.0, 0.0, -1.0])
    d = 1.0 + v.norm_sq()
    return np.array([2 * v.w / d, 2 * v.x / d, 2 * v.y / d, 2 * v.z / d,
                     (1.0 - v.norm_sq()) / d])


def ball_to_halfspace(y) -> np.ndarray:
    """Interior ball point -> (x1..x4, x5) with x5 > 0.

    The models are identified by the inversion through the sphere of
    radius sqrt(2) centered at the south pole, the unique conformal
    correspondence fixing the boundary chart; it sends the ball origin
    to (0, 0, 0, 0, 1) and is an involution, so the inverse map has the
    same shape.
    """
    y = np.asarray(y, dtype=float)
    r2 = float(y @ y)
    if r2 >= 1.0:
        raise ValueError("point is not in the open unit ball")
    d = r2 + 2.0 * y[4] + 1.0
    x = np.empty(5)
    x[:4] = 2.0 * y[:4] / d
    x[4] = (1.0 - r2) / d
    return x


def halfspace_to_ball(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x[4] <= 0.0:
        raise ValueError("half-space height must be positive")
    r2 = float(x @ x)
    d = r2 + 2.0 * x[4] + 1.0
    y = np.empty(5)
    y[:4] = 2.0 * x[:4] / d
    y[4] = (1.0 - r2) / d
    return y


# -- group actions ----------------------------------------------------


def mobius_hp1(g: SL2H, p: HP1Point) -> HP1Point:
    return HP1Point(g.a * p.q1 + g.b * p.q2, g.c * p.q1 + g.d * p.q2)


def mobius_s4(g: SL2H, u) -> np.ndarray:
    out = hp1_to_s4(mobius_hp1(g, s4_to_hp1(u)))
    return out / np.linalg.norm(out)


def lft_chart(g: SL2H, v: Quaternion | _Infinity) -> Quaternion | _Infinity:
    """(a v + b)(c v + d)^-1 on the boundary chart.

    Falls back to the homogeneous (inverted) chart when |c v + d| is
    below 1e-8, where the closed form would cancel catastrophically.
    """
    if v is INFINITY:
        if abs(g.c) <= 1e-14:
            return INFINITY
        return g.a * g.c.inverse()
    den = g.c * v + g.d
    if abs(den) >= 1e-8:
        return (g.a * v + g.b) * den.inverse()
    return mobius_hp1(g, HP1Point.from_chart(v)).chart()


def boundary_limit_chart(g: SL2H, v: Quaternion) -> Quaternion | _Infinity:
    """The x5 -> 0 limit of the interior action, in closed form."""
    a, b, c, d = g.a, g.b, g.c, g.d
    vv = v.norm_sq()
    den = vv * c.norm_sq() + 2.0 * (c * v * d.conj()).w + d.norm_sq()
    if den < 1e-16:
        return INFINITY
    num = a * c.conj() * vv + b * v.conj() * c.conj() + a * v * d.conj() + b * d.conj()
    return num * (1.0 / den)


def mobius_halfspace(g: SL2H, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x[4] <= 0.0:
        raise ValueError("half-space height must be positive")
    a, b, c, d = g.a, g.b, g.c, g.d
    v = Quaternion(x[0], x[1], x[2], x[3])
    xx = v.norm_sq() + x[4] * x[4]
    den = xx * c.norm_sq() + 2.0 * (c * v * d.conj()).w + d.norm_sq()
    num = a * c.conj() * xx + b * v.conj() * c.conj() + a * v * d.conj() + b * d.conj()
    w = num * (1.0 / den)
    return np.array([w.w, w.x, w.y, w.z, x[4] / den])


def mobius_ball(g: SL2H, y) -> np.ndarray:
    """Action on the closed ball; dispatches on interior vs boundary."""
    y = np.asarray(y, dtype=float)
    r = np.linalg.norm(y)
    if r > 1.0 + 1e-9:
        raise ValueError("point lies outside the closed unit ball")
    if abs(r - 1.0) <= BOUNDARY_TOL:
        return mobius_s4(g, y / r)
    return halfspace_to_ball(mobius_halfspace(g, ball_to_halfspace(y)))


# -- explicit elements ------------------------------------------------


def rotation_to_pole(u) -> SL2H:
    """An origin-fixing element carrying the boundary point u to e5.

    Elements with g* g = 1 act on the ball as linear rotations, so the
    same element carries the ray through u onto the positive fifth
    axis.
    """
    m = s4_to_chart(as_s4_point(u))
    if m is INFINITY:
        return SL2H(Quaternion(), ONE, -ONE, Quaternion())
    f = 1.0 / math.sqrt(1.0 + m.norm_sq())
    return SL2H(ONE * f, -m * f, m.conj() * f, ONE * f)


def translation_along_axis(beta: float) -> SL2H:
    """The dilation diag(s, 1/s) that carries (0,0,0,0,beta) to the origin.

    The ball point (0,..,beta) sits at half-space height (1-beta)/(1+beta)
    and the dilation scales heights by s^2, so s^2 = (1+beta)/(1-beta).
    """
    if not -1.0 < beta < 1.0:
        raise ValueError("|beta| must be < 1")
    s = math.sqrt((1.0 + beta) / (1.0 - beta))
    return SL2H.diagonal(s)


def random_sp2(rng) -> SL2H:
    return SL2H.from_matrix(random_symplectic(2, as_rng(rng)))


def random_sl2h(rng, spread: float = 1.0) -> SL2H:
    """A Haar-ish random element, normalized to determinant 1.

    `spread` scales a Gaussian in the Lie algebra direction away from
    the compact part; moderate values keep test geometry
    well-conditioned.
    """
    rng = as_rng(rng)
    g = SL2H(random_quaternion(rng), random_quaternion(rng, spread),
             random_quaternion(rng, spread), random_quaternion(rng))
    d = g.det()
    if d < 1e-3:  # nearly singular draw: try again
        return random_sl2h(rng, spread)
    return g.normalized()
