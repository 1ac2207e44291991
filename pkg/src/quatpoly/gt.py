"""Eigenvalues of quaternionic Hermitian matrices and their corner patterns.

A quaternionic Hermitian matrix has a well-defined list of real
eigenvalues: its complex embedding is Hermitian of doubled size and
every eigenvalue appears exactly twice, so the list is read off by
pairing.  Eigenvalues of all upper-left corner submatrices assemble
into a triangular pattern obeying the interlacing inequalities

    lam_i^(j) >= lam_i^(j-1) >= lam_{i+1}^(j),

the quaternionic counterpart of the classical corner-eigenvalue
coordinates.

The module also houses the rank-2 frame geometry that ties Hermitian
matrices to polygons: points of the quaternionic Grassmannian of
2-planes in H^n are stored as n x 2 matrices whose rows generate the
plane under the right column action, the row-norm map and the total
Gram matrix give the two commuting reductions, and each row's 2x2 Gram
block decomposes into a trace part (a side length) plus a traceless
part (an edge vector in R^5).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (ClosureError, InterlacingError, InvariantViolation,
                     PairingError, UsageError)
from .polygons import PolygonConfig
from .quaternions import (Quaternion, QuatMatrix, as_rng,
                          inverse_sqrt_hermitian2, random_quat_matrix)

#: Relative gap above which embedded eigenvalues refuse to pair.
PAIR_TOL = 1e-6

#: Relative interlacing slack tolerated in a pattern.
INTERLACE_TOL = 1e-8


def jacobi_eigenvalues(h: np.ndarray, tol: float = 1e-12,
                       max_sweeps: int = 60) -> np.ndarray:
    """Eigenvalues of a complex Hermitian matrix by cyclic Jacobi rotations.

    Sweeps annihilate one off-diagonal entry at a time with a unitary
    plane rotation until the off-diagonal Frobenius norm drops below
    `tol` relative to the matrix norm.  Convergence is unconditional on
    Hermitian input.  Returns eigenvalues sorted non-increasing.
    """
    h = np.array(h, dtype=complex)
    m = h.shape[0]
    if h.shape != (m, m):
        raise UsageError("expected a square matrix")
    scale = np.linalg.norm(h)
    if scale == 0.0:
        return np.zeros(m)
    for _ in range(max_sweeps):
        off = np.linalg.norm(h - np.diag(np.diag(h)))
        if off <= tol * scale:
            break
        skip = tol * scale / (10.0 * m)  # small enough to never stall convergence
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = h[p, q]
                mag = abs(apq)
                if mag <= skip:
                    continue
                phase = apq / mag
                tau = (h[q, q].real - h[p, p].real) / (2.0 * mag)
                t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau)) if tau != 0 else 1.0
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # columns, then rows, of the plane rotation
                col_p = c * h[:, p] - s * np.conj(phase) * h[:, q]
                col_q = s * phase * h[:, p] + c * h[:, q]
                h[:, p], h[:, q] = col_p, col_q
                row_p = c * h[p, :] - s * phase * h[q, :]
                row_q = s * np.conj(phase) * h[p, :] + c * h[q, :]
                h[p, :], h[q, :] = row_p, row_q
                h[p, q] = h[q, p] = 0.0
    else:
        raise InvariantViolation("Jacobi sweeps failed to converge")
    return np.sort(np.diag(h).real)[::-1]


def quat_hermitian_eigenvalues(a: QuatMatrix, herm_tol: float = 1e-10,
                               pair_tol: float = PAIR_TOL) -> np.ndarray:
    """The n real eigenvalues of a quaternionic Hermitian matrix.

    Diagonalizes the doubled complex embedding and collapses the
    coincident pairs.  A pair gap beyond `pair_tol` (relative) means
    the input was not Hermitian to working precision and raises
    PairingError.
    """
    if not a.is_hermitian(herm_tol):
        raise UsageError("matrix is not Hermitian within tolerance")
    ev = jacobi_eigenvalues(a.to_complex())
    first, second = ev[0::2], ev[1::2]
    gaps = np.abs(first - second) / np.maximum(1.0, np.abs(first))
    if np.any(gaps > pair_tol):
        raise PairingError(
            f"embedded eigenvalues fail to pair: worst gap {gaps.max():.3e}")
    return 0.5 * (first + second)


@dataclass(frozen=True)
class GTPattern:
    """Triangular array of corner eigenvalues, levels[j][i] = lam_{i+1}^(j+1)."""

    levels: tuple

    @property
    def size(self) -> int:
        return len(self.levels)

    def validate(self, tol: float = INTERLACE_TOL) -> None:
        scale = max(1.0, max(abs(v) for lv in self.levels for v in lv))
        for j in range(1, self.size):
            upper, lower = self.levels[j], self.levels[j - 1]
            for i in range(len(lower)):
                if upper[i] < lower[i] - tol * scale or lower[i] < upper[i + 1] - tol * scale:
                    raise InterlacingError(
                        f"interlacing fails at level {j + 1}, entry {i + 1}")

    def to_lists(self):
        return [list(map(float, lv)) for lv in self.levels]


def gt_pattern(a: QuatMatrix, tol: float = INTERLACE_TOL) -> GTPattern:
    """Corner eigenvalue pattern of a Hermitian matrix, interlacing-checked."""
    n = a.rows
    levels = tuple(quat_hermitian_eigenvalues(a[:j, :j]) for j in range(1, n + 1))
    pattern = GTPattern(levels)
    pattern.validate(tol)
    return pattern


# -- Grassmannian frames ----------------------------------------------


@dataclass(frozen=True)
class GrassmannPoint:
    """A 2-plane in H^n spanned by the columns of an n x 2 matrix."""

    mat: QuatMatrix

    def __post_init__(self):
        if self.mat.cols != 2 or self.mat.rows < 2:
            raise ValueError("expected an n x 2 matrix with n >= 2")
        sv = np.linalg.svd(self.mat.to_complex(), compute_uv=False)
        if sv[3] <= 1e-10 * sv[0]:
            raise ValueError("matrix does not have quaternionic rank 2")

    @property
    def size(self) -> int:
        return self.mat.rows

    def total_gram(self) -> QuatMatrix:
        return self.mat.H @ self.mat

    def row(self, i: int) -> tuple[Quaternion, Quaternion]:
        return self.mat[i, 0], self.mat[i, 1]


def random_grassmann_point(n: int, rng) -> GrassmannPoint:
    return GrassmannPoint(random_quat_matrix(n, 2, as_rng(rng)))


def grassmann_on_level_set(m: GrassmannPoint | QuatMatrix) -> GrassmannPoint:
    """Polar-normalize a frame so its total Gram is the identity."""
    mat = m.mat if isinstance(m, GrassmannPoint) else m
    return GrassmannPoint(mat @ inverse_sqrt_hermitian2(mat.H @ mat))


def tri_momentum(m: GrassmannPoint) -> np.ndarray:
    """Row-wise squared norms |a_i|^2 + |b_i|^2.

    Invariant under right multiplication of each row by a unit
    quaternion and under the right 2x2 unitary action on the frame.
    """
    d = m.mat.data
    return np.einsum("ijk->i", d * d)


def gram_map(points: QuatMatrix) -> QuatMatrix:
    """Total Gram matrix of n homogeneous points in HP^(p-1).

    Rows are the points' coordinate vectors; the (a, b) entry is
    sum_i conj(w_a^(i)) w_b^(i), Hermitian positive semidefinite of
    rank at most p, and conjugates under the right unitary action.
    """
    norms = np.sqrt(np.einsum("ijk->i", points.data * points.data))
    if np.any(norms < 1e-14):
        raise UsageError("homogeneous coordinates must be nonzero")
    return points.H @ points


# -- edges as traceless 2x2 blocks -------------------------------------


def edge_to_traceless(v) -> QuatMatrix:
    """R^5 vector -> [[t, q], [conj(q), -t]] with t = v_0, q = quadruple(v_1..v_4)."""
    v = np.asarray(v, dtype=float)
    t = Quaternion(v[0])
    q = Quaternion(v[1], v[2], v[3], v[4])
    return QuatMatrix.from_entries([[t, q], [q.conj(), -t]])


def traceless_to_edge(b: QuatMatrix, tol: float = 1e-9) -> np.ndarray:
    if b.shape != (2, 2) or not b.is_hermitian(tol):
        raise UsageError("expected a 2x2 Hermitian matrix")
    if abs(b.trace().w) > tol * max(1.0, b.norm()):
        raise UsageError("matrix is not traceless")
    q = b[0, 1]
    return np.array([b[0, 0].w, q.w, q.x, q.y, q.z])


def row_gram_block(a: Quaternion, b: Quaternion) -> QuatMatrix:
    """The rank-one 2x2 Gram block of a frame row (a, b)."""
    return QuatMatrix.from_entries([
        [Quaternion(a.norm_sq()), a.conj() * b],
        [b.conj() * a, Quaternion(b.norm_sq())]])


def polygon_from_grassmann(m: GrassmannPoint, tol: float = 1e-8) -> PolygonConfig:
    """Read a closed polygon off a frame on the closure level set.

    Requires the total Gram to be a positive multiple of the identity;
    each row's Gram block then splits into half its trace (the side
    length) plus a traceless part whose R^5 vector is the scaled edge.
    Closure of the polygon is exactly the level-set condition.
    """
    g = m.total_gram()
    c = g.trace().w / 2.0
    if c <= 0:
        raise ClosureError("total Gram is not positive")
    resid = (g - QuatMatrix.identity(2).scale(c)).norm()
    if resid > tol * max(1.0, g.norm()):
        raise ClosureError(
            f"total Gram is not a multiple of the identity: residual {resid:.3e}")
    n = m.size
    weights = np.empty(n)
    edges = np.empty((n, 5))
    for i in range(n):
        a, b = m.row(i)
        na, nb = a.norm_sq(), b.norm_sq()
        weights[i] = 0.5 * (na + nb)
        if weights[i] < 1e-14:
            raise UsageError(f"frame row {i} is zero")
        q = a.conj() * b
        edges[i] = np.array([0.5 * (na - nb), q.w, q.x, q.y, q.z]) / weights[i]
    return PolygonConfig(weights, edges)


def partial_gram_spectra(m: GrassmannPoint, check_tol: float = 1e-9
                         ) -> np.ndarray:
    """Eigenvalue pairs of the truncated 2x2 Grams, cross-checked.

    Row i of the result holds the eigenvalues (lam1 >= lam2) of the
    2x2 Gram of the first i+1 rows.  The nonzero spectrum of the
    transposed i x i Gram is computed independently and must agree
    within `check_tol`; a mismatch raises InvariantViolation.
    """
    n = m.size
    out = np.empty((n, 2))
    for i in range(1, n + 1):
        mi = m.mat[:i]
        small = quat_hermitian_eigenvalues(mi.H @ mi)
        out[i - 1] = small
        big = quat_hermitian_eigenvalues(mi @ mi.H)
        scale = max(1.0, abs(small).max())
        nz_small = np.sort(small[np.abs(small) > check_tol * scale])[::-1]
        nz_big = np.sort(big[np.abs(big) > check_tol * scale])[::-1]
        if len(nz_small) != len(nz_big) or (
                len(nz_small) and np.abs(nz_small - nz_big).max() > check_tol * scale):
            raise InvariantViolation(
                f"nonzero spectra of the two Grams disagree at truncation {i}")
    return out
