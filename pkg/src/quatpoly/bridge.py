"""The quaternionic locus inside complex matrices and line configurations.

The block matrix J = [[0, I], [-I, 0]] defines the involution
C -> -J conj(C) J on even-dimensional complex matrices, whose fixed
points are exactly the embedded quaternionic matrices; the same J
gives an involution of 2-plane configurations in C^4 whose fixed
planes are the quaternionic lines (q_i = z_i + j z_{i+n}).  A closed
polygon maps into this picture as the traceless-Hermitian n-tuple
A_i = embed(edge block of r_i u_i): the A_i sum to zero, each has
spectrum (r_i, r_i, -r_i, -r_i), and each is fixed by the involution.

The module also implements the stability test for weighted line
configurations in CP^3: a configuration with weights summing to 2 is
stable when (i) weights of lines through any point sum below 1,
(ii) weights of lines meeting any line, counting coincident lines
twice, sum below 2, and (iii) weights of lines inside any plane sum
below 1.  Conditions quantify over all of CP^3; the checker evaluates
them on a finite candidate set (pairwise intersection points, the
configuration lines, transversals through candidate points, and common
transversals of skew 4-tuples via the quadric through three lines), so
reported violations are sound while "stable" means stable relative to
that candidate set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import ClosureError, InvariantViolation, UsageError
from .gt import edge_to_traceless, jacobi_eigenvalues
from .polygons import PolygonConfig
from .quaternions import QuatMatrix

#: Relative singular-value gap for incidence decisions on lines.
INCIDENCE_TOL = 1e-8

#: Slack around the GIT thresholds 1 and 2 for weight-sum comparisons.
WEIGHT_MARGIN = 1e-9


def _block_j(two_n: int) -> np.ndarray:
    n = two_n // 2
    j = np.zeros((two_n, two_n))
    j[:n, n:] = np.eye(n)
    j[n:, :n] = -np.eye(n)
    return j


def theta_matrix(c: np.ndarray) -> np.ndarray:
    """The involution -J conj(C) J; fixed points are the quaternionic matrices."""
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1] or c.shape[0] % 2:
        raise UsageError("expected a square matrix of even dimension")
    j = _block_j(c.shape[0])
    return -j @ c.conj() @ j


def is_theta_fixed(c: np.ndarray, tol: float = 1e-12) -> bool:
    c = np.asarray(c, dtype=complex)
    return bool(np.linalg.norm(theta_matrix(c) - c)
                <= tol * max(1.0, np.linalg.norm(c)))


def theta_grassmann(basis: np.ndarray) -> np.ndarray:
    """The involution on 2-planes in C^4: a basis of J conj(span)."""
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != (4, 2):
        raise UsageError("expected a 4 x 2 basis matrix")
    if np.linalg.matrix_rank(basis, tol=1e-10) != 2:
        raise UsageError("basis does not have rank 2")
    return _block_j(4) @ basis.conj()


def same_span(b1: np.ndarray, b2: np.ndarray, tol: float = INCIDENCE_TOL) -> bool:
    stacked = np.hstack([_orthonormal(b1), _orthonormal(b2)])
    sv = np.linalg.svd(stacked, compute_uv=False)
    return bool(sv[b1.shape[1]] <= tol * sv[0])


def _orthonormal(b: np.ndarray) -> np.ndarray:
    q, _ = np.linalg.qr(np.asarray(b, dtype=complex))
    return q


# -- polygons as traceless Hermitian 4x4 tuples ------------------------


@dataclass(frozen=True)
class Su4Configuration:
    """Traceless Hermitian 4x4 matrices A_i with sum zero, plus weights."""

    matrices: np.ndarray  # (n, 4, 4) complex
    weights: np.ndarray

    def sum_residual(self) -> float:
        return float(np.linalg.norm(self.matrices.sum(axis=0)))

    def spectra(self) -> np.ndarray:
        return np.stack([jacobi_eigenvalues(m) for m in self.matrices])

    def validate(self, sum_tol: float = 1e-9, spec_tol: float = 1e-8,
                 theta_tol: float = 1e-12) -> None:
        if self.sum_residual() > sum_tol:
            raise InvariantViolation("matrices do not sum to zero")
        target = np.stack([np.array([r, r, -r, -r]) for r in self.weights])
        if np.abs(self.spectra() - target).max() > spec_tol:
            raise InvariantViolation("spectra differ from (r, r, -r, -r)")
        for m in self.matrices:
            if not is_theta_fixed(m, theta_tol):
                raise InvariantViolation("matrix is not involution-fixed")


def psi_map(p: PolygonConfig, closure_tol: float = 1e-8) -> Su4Configuration:
    """Embed a closed polygon's scaled edge blocks into 4x4 matrices."""
    res = p.closure_residual()
    if res > closure_tol:
        raise ClosureError(f"polygon is not closed: residual {res:.3e}")
    mats = np.stack([
        edge_to_traceless(r * u).to_complex()
        for r, u in zip(p.weights, p.edges)])
    return Su4Configuration(mats, np.asarray(p.weights, dtype=float))


# -- weighted line configurations in CP^3 ------------------------------


@dataclass(frozen=True)
class ComplexLineConfig:
    """n lines in CP^3 as 4x2 column-span bases, weights normalized to 2."""

    lines: tuple  # of (4, 2) complex arrays
    weights: np.ndarray

    def __post_init__(self):
        lines = tuple(np.asarray(l, dtype=complex) for l in self.lines)
        w = np.asarray(self.weights, dtype=float).ravel()
        if len(lines) != w.size:
            raise ValueError("need one weight per line")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        for l in lines:
            if l.shape != (4, 2):
                raise ValueError("each line is a 4 x 2 basis matrix")
            sv = np.linalg.svd(l, compute_uv=False)
            if sv[1] <= 1e-10 * sv[0]:
                raise ValueError("line basis must have rank 2")
        object.__setattr__(self, "lines", tuple(_orthonormal(l) for l in lines))
        object.__setattr__(self, "weights", w * (2.0 / w.sum()))

    @property
    def size(self) -> int:
        return self.weights.size

    def transform(self, g: np.ndarray) -> "ComplexLineConfig":
        g = np.asarray(g, dtype=complex)
        return ComplexLineConfig(tuple(g @ l for l in self.lines),
                                 self.weights.copy())


@dataclass(frozen=True)
class StabilityReport:
    stable: bool
    semistable: bool
    witnesses: tuple
    candidates: dict = field(default_factory=dict, repr=False)


def lines_coincident(l1, l2, tol: float = INCIDENCE_TOL) -> bool:
    return same_span(l1, l2, tol)


def lines_intersect(l1, l2, tol: float = INCIDENCE_TOL) -> bool:
    """True when the spans meet nontrivially (includes coincident)."""
    sv = np.linalg.svd(np.hstack([l1, l2]), compute_uv=False)
    return bool(sv[3] <= tol * sv[0])


def intersection_point(l1, l2) -> np.ndarray:
    """A common point of two intersecting, non-coincident lines."""
    stacked = np.hstack([l1, l2])
    _, _, vh = np.linalg.svd(stacked)
    coeff = vh[-1].conj()
    p = l1 @ coeff[:2]
    if np.linalg.norm(p) < 1e-12:  # numerical fallback through the other line
        p = -l2 @ coeff[2:]
    return p / np.linalg.norm(p)

def point_on_line(p, l, tol: float = INCIDENCE_TOL) -> bool:
    sv = np.linalg.svd(np.hstack([l, p.reshape(4, 1)]), compute_uv=False)
    return bool(sv[2] <= tol * sv[0])


def plane_span(basis_list) -> np.ndarray | None:
    """Orthonormal basis of the plane spanned by the stacked columns."""
    stacked = np.hstack(basis_list)
    u, s, _ = np.linalg.svd(stacked)
    rank = int(np.sum(s > INCIDENCE_TOL * s[0]))
    if rank != 3:
        return None
    return u[:, :3]


def line_in_plane(l, plane, tol: float = INCIDENCE_TOL) -> bool:
    sv = np.linalg.svd(np.hstack([plane, l]), compute_uv=False)
    return bool(sv[3] <= tol * sv[0])


def planes_meet_in_line(p1: np.ndarray, p2: np.ndarray) -> np.ndarray | None:
    """Intersection line of two distinct planes in C^4."""
    n1 = np.linalg.svd(p1)[0][:, 3]
    n2 = np.linalg.svd(p2)[0][:, 3]
    normals = np.column_stack([n1, n2])
    u, s, _ = np.linalg.svd(normals)
    if s[1] <= INCIDENCE_TOL * s[0]:
        return None  # same plane
    return u[:, 2:]  # orthogonal complement of both normals


def quadric_through_lines(l1, l2, l3) -> np.ndarray | None:
    """Symmetric 4x4 matrix of the quadric containing three skew lines."""
    sym_idx = [(a, b) for a in range(4) for b in range(a, 4)]

    def row(x, y):
        return np.array([x[a] * y[b] + (x[b] * y[a] if a != b else 0.0)
                         for a, b in sym_idx])

    rows = []
    for l in (l1, l2, l3):
        u, v = l[:, 0], l[:, 1]
        rows.extend([row(u, u), row(v, v), row(u, v)])
    system = np.stack(rows)
    _, s, vh = np.linalg.svd(system)
    if s[8] <= 1e-8 * s[0]:  # nullity > 1: degenerate triple
        return None
    null = vh[-1].conj()
    q = np.zeros((4, 4), dtype=complex)
    for coeff, (a, b) in zip(null, sym_idx):
        q[a, b] += coeff
        q[b, a] += coeff * (a != b)
    return q


def _line_quadric_points(l, q) -> list[np.ndarray]:
    u, v = l[:, 0], l[:, 1]
    a = u @ q @ u
    b = u @ q @ v
    c = v @ q @ v
    coeffs = np.array([a, 2.0 * b, c])
    scale = np.abs(coeffs).max()
    if scale < 1e-14:
        return []  # whole line on the quadric
    pts = []
    if abs(a) <= 1e-12 * scale:
        pts.append(u)
        if abs(b) > 1e-12 * scale:
            pts.append(u * (-c / (2.0 * b)) + v)
    else:
        for t in np.roots(coeffs):
            pts.append(u * t + v)
    return [p / np.linalg.norm(p) for p in pts]


def transversal_through_point(p, l1, l2) -> np.ndarray | None:
    """The unique line through p meeting both l1 and l2 (p off both)."""
    if point_on_line(p, l1) or point_on_line(p, l2):
        return None
    p1 = plane_span([l1, p.reshape(4, 1)])
    p2 = plane_span([l2, p.reshape(4, 1)])
    if p1 is None or p2 is None:
        return None
    return planes_meet_in_line(p1, p2)


def common_transversals(l1, l2, l3, l4) -> list[np.ndarray]:
    """Lines meeting four pairwise-skew lines (generically two)."""
    q = quadric_through_lines(l1, l2, l3)
    if q is None:
        return []
    out = []
    for p in _line_quadric_points(l4, q):
        t = transversal_through_point(p, l1, l2)
        if t is None:
            continue
        if lines_intersect(t, l3) and lines_intersect(t, l4):
            out.append(_orthonormal(t))
    return out


def _dedupe_points(points: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in points:
        if not any(abs(np.vdot(p, q)) > 1.0 - 1e-9 for q in out):
            out.append(p)
    return out


def _dedupe_lines(lines: list[np.ndarray]) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for l in lines:
        if not any(lines_coincident(l, m) for m in out):
            out.append(l)
    return out


def line_stability(cfg: ComplexLineConfig, incidence_tol: float = INCIDENCE_TOL,
                   margin: float = WEIGHT_MARGIN) -> StabilityReport:
    """Evaluate the three weighted incidence conditions on candidates.

    A witness is recorded whenever a candidate's weight sum reaches the
    threshold up to `margin`; strict excess beyond the threshold also
    destroys semistability.  Candidate enumeration cost grows as
    n choose 4 through the common-transversal search.
    """
    lines = list(cfg.lines)
    w = cfg.weights
    n = cfg.size
    witnesses = []

    coincident = {(i, j): lines_coincident(lines[i], lines[j], incidence_tol)
                  for i in range(n) for j in range(i + 1, n)}
    meet = {(i, j): lines_intersect(lines[i], lines[j], incidence_tol)
            for i in range(n) for j in range(i + 1, n)}

    # condition (i): points
    points = []
    for (i, j), meets in meet.items():
        if meets and not coincident[(i, j)]:
            points.append(intersection_point(lines[i], lines[j]))
    for i in range(n):  # a single heavy line violates (i) on its own
        if w[i] >= 1.0 - margin:
            points.append(lines[i][:, 0])
    points = _dedupe_points(points)
    for p in points:
        members = [k for k in range(n) if point_on_line(p, lines[k], incidence_tol)]
        total = float(w[members].sum())
        if total >= 1.0 - margin:
            witnesses.append({
                "condition": "i", "kind": "point", "weight_sum": total,
                "members": members, "witness": p})

    # condition (ii): lines
    cand_lines = [l.copy() for l in lines]
    for p in points:
        off = [k for k in range(n) if not point_on_line(p, lines[k], incidence_tol)]
        for a, b in combinations(off, 2):
            t = transversal_through_point(p, lines[a], lines[b])
            if t is not None:
                cand_lines.append(t)
    for quad in combinations(range(n), 4):
        sub = [lines[k] for k in quad]
        if all(not meet[key] for key in combinations(sorted(quad), 2)):
            cand_lines.extend(common_transversals(*sub))
    cand_lines = _dedupe_lines(cand_lines)
    for l in cand_lines:
        total = 0.0
        members = []
        for k in range(n):
            if lines_coincident(l, lines[k], incidence_tol):
                total += 2.0 * w[k]
                members.append(k)
            elif lines_intersect(l, lines[k], incidence_tol):
                total += w[k]
                members.append(k)
        if total >= 2.0 - margin:
            witnesses.append({
                "condition": "ii", "kind": "line", "weight_sum": float(total),
                "members": members, "witness": l})

    # condition (iii): planes
    planes = []
    for (i, j), meets in meet.items():
        if meets and not coincident[(i, j)]:
            span = plane_span([lines[i], lines[j]])
            if span is not None:
                planes.append(span)
    for i in range(n):
        if w[i] >= 1.0 - margin:
            filler = np.zeros((4, 1), dtype=complex)
            filler[np.argmin(np.abs(lines[i]).sum(axis=1))] = 1.0
            span = plane_span([lines[i], filler])
            if span is not None:
                planes.append(span)
    for plane in planes:
        members = [k for k in range(n) if line_in_plane(lines[k], plane, incidence_tol)]
        total = float(w[members].sum())
        if total >= 1.0 - margin:
            witnesses.append({
                "condition": "iii", "kind": "plane", "weight_sum": total,
                "members": members, "witness": plane})

    stable = not witnesses
    semistable = all(wit["weight_sum"] <= {"i": 1.0, "ii": 2.0, "iii": 1.0}[
        wit["condition"]] + margin for wit in witnesses)
    return StabilityReport(stable, semistable, tuple(witnesses),
                           {"points": len(points), "lines": len(cand_lines),
                            "planes": len(planes)})
