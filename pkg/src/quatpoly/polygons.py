"""Closed polygons in R^5 with fixed side lengths.

A polygon is an n-tuple of unit edge directions u_i together with side
lengths r_i such that sum r_i u_i = 0.  Vertices start at the origin:
v_1 = 0, v_{k+1} = v_k + r_k u_k.  The module covers weight
admissibility, sampling of closed polygons, classification of the
degenerate strata by the dimension of the edge span, diagonals and
bending deformations, the canonical planar representative, and the
rotation-invariant quadratics attached to the rank-3 stratum.

Degeneracy bookkeeping: edges spanning k dimensions leave an
SO(5 - k) stabilizer.  Rank 3 spans ("type 2") sit on a stratum whose
transverse slice is the cone (R^2)^(n-4)/SO(2) with a trivial factor
of dimension 2n - 6; rank 2 spans ("type 3", planar polygons) carry
the cone (R^3)^(n-3)/SO(3) with trivial factor n - 3.  Rank 4 and 5
spans have trivial stabilizer and are smooth points of the
(4n - 15)-dimensional moduli space.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClosureError, GenericityError, NonConvergenceError, UsageError
from .quaternions import as_rng

#: Residual |sum r_i u_i| below which a polygon counts as closed.
CLOSURE_TOL = 1e-10

#: Relative singular-value threshold for the numerical span rank.
RANK_TOL = 1e-8

#: Largest n for which the exhaustive signed-sum scan is allowed.
MAX_SIGNED_SUM_N = 24


@dataclass(frozen=True)
class WeightCheck:
    admissible: bool
    nondegenerate: bool


def check_weights(r, tol: float = 1e-12) -> WeightCheck:
    """Admissibility and trivial-nondegeneracy of a side-length vector.

    Admissible means twice the largest side does not exceed the
    perimeter (a closed polygon exists); nondegenerate means no signed
    sum +-r_1 +- ... +- r_n vanishes, which rules out weight vectors
    supporting segment-shaped polygons.  The signed-sum scan is
    exhaustive over 2^(n-1) patterns and refuses n > 24.
    """
    r = np.asarray(r, dtype=float).ravel()
    if r.size < 3:
        raise UsageError("need at least 3 sides")
    if np.any(r <= 0):
        raise UsageError("side lengths must be positive")
    admissible = 2.0 * r.max() <= r.sum() + tol
    n = r.size
    if n > MAX_SIGNED_SUM_N:
        raise UsageError(
            f"signed-sum scan needs 2^{n - 1} patterns; refusing n > {MAX_SIGNED_SUM_N}")
    nondegenerate = True
    # fix the sign of r_1, enumerate the rest in chunks
    rest = r[1:]
    total = 1 << (n - 1)
    chunk = 1 << 18
    for start in range(0, total, chunk):
        codes = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        bits = (codes[:, None] >> np.arange(n - 1, dtype=np.uint64)) & 1
        sums = r[0] + (1.0 - 2.0 * bits.astype(float)) @ rest
        if np.any(np.abs(sums) <= tol):
            nondegenerate = False
            break
    return WeightCheck(bool(admissible), bool(nondegenerate))


@dataclass(frozen=True)
class PolygonConfig:
    """Side lengths and unit edge directions of a closed n-gon."""

    weights: np.ndarray
    edges: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        e = np.atleast_2d(np.asarray(self.edges, dtype=float))
        if e.shape != (w.size, 5):
            raise ValueError("edges must be (n, 5) matching n side lengths")
        if np.any(w <= 0):
            raise ValueError("side lengths must be positive")
        norms = np.linalg.norm(e, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("edge directions must be unit vectors")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "edges", e / norms[:, None])

    @property
    def size(self) -> int:
        return self.weights.size

    def closure_residual(self) -> float:
        return float(np.linalg.norm(self.weights @ self.edges))

    def require_closed(self, tol: float = CLOSURE_TOL) -> None:
        res = self.closure_residual()
        if res > tol:
            raise ClosureError(f"polygon is not closed: residual {res:.3e}")

    def vertices(self) -> np.ndarray:
        """(n, 5) array of vertices, v_1 at the origin."""
        steps = self.weights[:, None] * self.edges
        v = np.zeros((self.size, 5))
        v[1:] = np.cumsum(steps[:-1], axis=0)
        return v


@dataclass(frozen=True)
class LocalModel:
    trivial_factor_dim: int
    cone: str


@dataclass(frozen=True)
class DegeneracyReport:
    span_rank: int
    kind: str  # nondegenerate | type2 | type3 | linear
    local_model: LocalModel


@dataclass(frozen=True)
class DiagonalData:
    """Diagonals v_{i+2} - v_1 for i = 1..n-3 and their lengths."""

    diagonals: np.ndarray
    lengths: np.ndarray


def sample_closed(r, seed, max_attempts: int = 50, tol: float = CLOSURE_TOL,
                  dim: int = 5) -> PolygonConfig:
    """Sample a closed polygon with the given side lengths.

    Edges start uniform on the sphere and are driven onto the closure
    locus by a damped tangent-space Gauss-Newton iteration on
    |sum r_i u_i|^2; a draw that stalls is rejected and resampled.
    `dim` restricts the edges to the first `dim` coordinates, which is
    how the degenerate test fixtures are produced.
    """
    r = np.asarray(r, dtype=float).ravel()
    if not check_weights(r).admissible:
        raise UsageError("side lengths are not admissible: no closed polygon exists")
    if not 2 <= dim <= 5:
        raise UsageError("dim must be between 2 and 5")
    rng = as_rng(seed)
    n = r.size
    for _ in range(max_attempts):
        u = np.zeros((n, 5))
        u[:, :dim] = rng.normal(size=(n, dim))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        u = _project_to_closure(u, r, tol, dim)
        if u is not None:
            return PolygonConfig(r, u)
    raise NonConvergenceError(
        f"no closed polygon found after {max_attempts} attempts")


def _project_to_closure(u: np.ndarray, r: np.ndarray, tol: float,
                        dim: int, max_iter: int = 500) -> np.ndarray | None:
    """Drive unit edges onto sum r_i u_i = 0; None when stalled."""
    res_vec = r @ u
    res = np.linalg.norm(res_vec)
    for _ in range(max_iter):
        if res < tol:
            return u
        # least-norm tangent update: u_i += r_i * (t - (t.u_i) u_i)
        proj = (r**2).sum() * np.eye(5) - np.einsum("i,ij,ik->jk", r**2, u, u)
        proj = proj[:dim, :dim]
        try:
            t = np.linalg.solve(proj, -res_vec[:dim])
        except np.linalg.LinAlgError:
            return None
        t5 = np.zeros(5)
        t5[:dim] = t
        step = 1.0
        while step > 1e-14:
            cand = u + step * r[:, None] * (t5 - u @ t5[:, None] * u)
            cand /= np.linalg.norm(cand, axis=1, keepdims=True)
            cand_vec = r @ cand
            cand_res = np.linalg.norm(cand_vec)
            if cand_res < res:
                u, res_vec, res = cand, cand_vec, cand_res
                break
            step *= 0.5
        else:
            return None
    return None


def span_rank(p: PolygonConfig, rank_tol: float = RANK_TOL) -> int:
    sv = np.linalg.svd(p.edges, compute_uv=False)
    return int(np.sum(sv > rank_tol * sv[0]))


def classify(p: PolygonConfig, rank_tol: float = RANK_TOL) -> DegeneracyReport:
    """Degeneracy type from the numerical rank of the edge matrix."""
    n = p.size
    k = span_rank(p, rank_tol)
    if k >= 4:
        return DegeneracyReport(k, "nondegenerate",
                                LocalModel(4 * n - 15, "smooth"))
    if k == 3:
        return DegeneracyReport(k, "type2",
                                LocalModel(2 * n - 6, f"(R^2)^{n - 4}/SO(2)"))
    if k == 2:
        return DegeneracyReport(k, "type3",
                                LocalModel(n - 3, f"(R^3)^{n - 3}/SO(3)"))
    return DegeneracyReport(k, "linear", LocalModel(0, "segment"))


def diagonal_lengths(p: PolygonConfig) -> DiagonalData:
    """The n-3 diagonals from the first vertex to v_3 .. v_{n-1}."""
    v = p.vertices()
    diags = v[2:p.size - 1] - v[0]
    return DiagonalData(diags, np.linalg.norm(diags, axis=1))


def closure_jacobian_rank(p: PolygonConfig, tol: float = 1e-8) -> int:
    """Rank of the closure map restricted to the edge-sphere tangents.

    Full rank 5 at a sample certifies that the closed-polygon locus is
    cut out transversally there, so the moduli space has dimension
    5(n-1) - n - 10 = 4n - 15 nearby.
    """
    cols = []
    for i in range(p.size):
        basis = _tangent_basis(p.edges[i])
        cols.append(p.weights[i] * basis)
    jac = np.hstack(cols)
    sv = np.linalg.svd(jac, compute_uv=False)
    return int(np.sum(sv > tol * sv[0]))


def _tangent_basis(u: np.ndarray) -> np.ndarray:
    """(5, 4) orthonormal basis of the tangent space of S^4 at u."""
    q, _ = np.linalg.qr(np.column_stack([u, np.eye(5)]))
    return q[:, 1:5]


def rotation_fixing_axis(axis: np.ndarray, rng) -> np.ndarray:
    """A random SO(5) element fixing the given axis vector."""
    axis = np.asarray(axis, dtype=float)
    nrm = np.linalg.norm(axis)
    if nrm < 1e-14:
        raise UsageError("axis must be nonzero")
    basis = np.column_stack([axis / nrm, _tangent_basis(axis / nrm)])
    rng = as_rng(rng)
    q, rdiag = np.linalg.qr(rng.normal(size=(4, 4)))
    q *= np.sign(np.diag(rdiag))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    block = np.eye(5)
    block[1:, 1:] = q
    return basis @ block @ basis.T


def bend(p: PolygonConfig, i: int, k: np.ndarray, tol: float = 1e-10) -> PolygonConfig:
    """Rotate the vertex chain v_2..v_{i+1} about the i-th diagonal.

    `i` is 1-based like the diagonal index; `k` must be a special
    orthogonal 5x5 matrix fixing the diagonal vector v_{i+2} - v_1.
    Side lengths, all diagonal lengths, and closure are preserved.
    """
    n = p.size
    if not 1 <= i <= n - 3:
        raise UsageError(f"diagonal index must be in 1..{n - 3}")
    k = np.asarray(k, dtype=float)
    if k.shape != (5, 5) or np.linalg.norm(k.T @ k - np.eye(5)) > 1e-8:
        raise UsageError("bending map must be orthogonal 5x5")
    if np.linalg.det(k) < 0:
        raise UsageError("bending map must preserve orientation")
    v = p.vertices()
    d = v[i + 1] - v[0]
    if np.linalg.norm(k @ d - d) > tol * max(1.0, np.linalg.norm(d)):
        raise UsageError("bending map does not fix the diagonal")
    # rotating the chain v_2..v_{i+1} rotates edges 1..i and reseats the
    # edge from the chain end back to the fixed vertex v_{i+2}
    edges = p.edges.copy()
    edges[:i] = p.edges[:i] @ k.T
    edges[i] = (v[i + 1] - k @ v[i]) / p.weights[i]
    return PolygonConfig(p.weights, edges)


def is_generic(p: PolygonConfig, tol: float = 1e-9):
    """Check the genericity needed by the canonical planar construction.

    Requires every diagonal length nonzero and no flat outward triangle
    l_i + r_{i+2} = l_{i+1}.  Returns (ok, reason).
    """
    ell = diagonal_lengths(p).lengths
    scale = max(1.0, float(p.weights.max()))
    for idx, l in enumerate(ell, start=1):
        if l <= tol * scale:
            return False, f"diagonal {idx} has zero length"
    for idx in range(len(ell) - 1):
        if abs(ell[idx] + p.weights[idx + 2] - ell[idx + 1]) <= tol * scale:
            return False, f"flat triangle at diagonal {idx + 1}"
    return True, ""


def canonical_planar(p: PolygonConfig, tol: float = 1e-9) -> PolygonConfig:
    """Fold a generic polygon into its canonical planar representative.

    Triangles (l_i, r_{i+2}, l_{i+1}) are laid out in the span of the
    first two coordinates; each new vertex is placed on the opposite
    side of the line through its diagonal from the previous vertex, so
    consecutive vertex segments cross the diagonal lines.  Side lengths
    and diagonal lengths are preserved exactly; the output polygon
    spans at most 2 dimensions.
    """
    p.require_closed(1e-8)
    ok, reason = is_generic(p, tol)
    if not ok:
        raise GenericityError(reason)
    n = p.size
    r = p.weights
    ell = diagonal_lengths(p).lengths
    radii = np.concatenate([[r[0]], ell, [r[n - 1]]])  # |v_2|, |v_3|, .., |v_n|
    steps = np.concatenate([r[1:n - 1]])  # |v_{k+1} - v_k| for k = 2..n-1
    verts = np.zeros((n, 2))
    # v_3 pinned on the positive first axis, v_2 above it
    verts[2] = [radii[1], 0.0]
    verts[1] = _third_vertex(verts[2], radii[1], radii[0], r[1], above=True)
    for m in range(3, n):
        prev, prev2 = verts[m - 1], verts[m - 2]
        cand_up = _circle_intersection(prev, np.linalg.norm(prev), radii[m - 1],
                                       steps[m - 2], True)
        cand_dn = _circle_intersection(prev, np.linalg.norm(prev), radii[m - 1],
                                       steps[m - 2], False)
        # opposite side of the line through 0 and prev from prev2
        side_prev2 = _side(prev, prev2)
        verts[m] = cand_dn if _side(prev, cand_up) == side_prev2 else cand_up
    edges5 = np.zeros((n, 5))
    closing = np.vstack([verts[1:] - verts[:-1], -verts[-1][None, :]])
    edges5[:, :2] = closing / r[:, None]
    return PolygonConfig(r, edges5)


def _side(axis_pt: np.ndarray, q: np.ndarray) -> int:
    return int(np.sign(axis_pt[0] * q[1] - axis_pt[1] * q[0]))


def _circle_intersection(center2: np.ndarray, c_norm: float, rho: float,
                         step: float, above: bool) -> np.ndarray:
    """Point at distance rho from 0 and step from center2 (two choices)."""
    # coordinates along/perpendicular to center2
    axis = center2 / c_norm
    perp = np.array([-axis[1], axis[0]])
    along = (c_norm**2 + rho**2 - step**2) / (2.0 * c_norm)
    h2 = rho**2 - along**2
    h = np.sqrt(h2) if h2 > 0 else 0.0
    return along * axis + (h if above else -h) * perp


def _third_vertex(base: np.ndarray, base_len: float, rho: float, step: float,
                  above: bool) -> np.ndarray:
    return _circle_intersection(base, base_len, rho, step, above)


def so2_invariants(x, y) -> tuple[float, float, float, float]:
    """The four quadratic invariants of the hyperbolic circle action.

    For the action (h . X, h^-1 . Y) of SO(2) on R^2 x R^2 the ring of
    invariants is generated by

        p1 = x1^2 + x2^2        p2 = y1^2 + y2^2
        p3 = x1 y1 - x2 y2      p4 = x2 y1 + x1 y2

    subject to the single relation p1 p2 = p3^2 + p4^2; the zero set is
    the quadratic cone transverse to the rank-3 stratum.
    """
    x1, x2 = (float(v) for v in x)
    y1, y2 = (float(v) for v in y)
    return (x1 * x1 + x2 * x2, y1 * y1 + y2 * y2,
            x1 * y1 - x2 * y2, x2 * y1 + x1 * y2)


def angle_chart_dims(n: int) -> dict[str, int]:
    """Dimension bookkeeping of the generalized action-angle chart.

    Bending about the first diagonal contributes one angle, the second
    diagonal a closed-disk pair, and each remaining diagonal three,
    giving 1 + 2 + 3(n-5) = 3n - 12 angles; the n - 3 diagonal lengths
    are the actions, for a total of 4n - 15.
    """
    if n < 5:
        raise UsageError("the generic angle chart needs at least 5 sides")
    angles = 3 * n - 12
    actions = n - 3
    return {"angles": angles, "actions": actions, "total": angles + actions}


def polygon_to_configuration(p: PolygonConfig):
    """View a closed polygon's edges as a weighted boundary configuration."""
    from .barycenter import WeightedConfiguration

    p.require_closed(1e-8)
    return WeightedConfiguration(p.edges, p.weights * (2.0 / p.weights.sum()))
