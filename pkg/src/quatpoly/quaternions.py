"""Scalar and matrix arithmetic over the quaternions.

Quaternions are stored as (w, x, y, z) coefficient quadruples of
1, i, j, k.  Matrices over H use the right-module convention: scalars
multiply vectors on the right, so the column span of a matrix is
invariant under right multiplication by an invertible 2x2 block.

Every quaternion q = w + xi + yj + zk splits as q = a + b*j with
complex a = w + xi, b = y + zi, and an n x m quaternionic matrix
embeds into the complex 2n x 2m matrix

    [[ A,        B      ],
     [ -conj(B), conj(A) ]]

This embedding is an algebra homomorphism and sends adjoints to
adjoints; it is the workhorse behind the determinant and eigenvalue
routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ReconstructionError

#: Default absolute tolerance for scalar comparisons.
DEFAULT_TOL = 1e-10


def as_rng(seed) -> np.random.Generator:
    """Coerce an int seed or an existing Generator into a Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


@dataclass(frozen=True)
class Quaternion:
    """A quaternion w + x*i + y*j + z*k with float coefficients."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    @classmethod
    def from_array(cls, arr) -> "Quaternion":
        w, x, y, z = (float(v) for v in arr)
        return cls(w, x, y, z)

    @classmethod
    def from_vector(cls, v) -> "Quaternion":
        """Pure-vector part embedding of a 4-vector (w, x, y, z)."""
        return cls.from_array(v)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm_sq(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm_sq())

    def inverse(self) -> "Quaternion":
        n2 = self.norm_sq()
        if n2 == 0.0:
            raise ZeroDivisionError("zero quaternion has no inverse")
        return Quaternion(self.w / n2, -self.x / n2, -self.y / n2, -self.z / n2)

    def __add__(self, other):
        other = _coerce(other)
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return Quaternion(self.w - other.w, self.x - other.x,
                          self.y - other.y, self.z - other.z)

    def __rsub__(self, other):
        return _coerce(other).__sub__(self)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return Quaternion(self.w * other, self.x * other,
                              self.y * other, self.z * other)
        p, q = self, _coerce(other)
        return Quaternion(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )

    def __rmul__(self, other):
        if isinstance(other, (int, float)):
            return self.__mul__(other)
        return _coerce(other).__mul__(self)

    def __truediv__(self, other):
        if isinstance(other, (int, float)):
            return self * (1.0 / other)
        return self * _coerce(other).inverse()

    def is_close(self, other, tol: float = DEFAULT_TOL) -> bool:
        return abs(self - _coerce(other)) <= tol

    def __repr__(self):
        return f"Quaternion({self.w:.17g}, {self.x:.17g}, {self.y:.17g}, {self.z:.17g})"


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0)
J = Quaternion(0.0, 0.0, 1.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)


def _coerce(v) -> Quaternion:
    if isinstance(v, Quaternion):
        return v
    if isinstance(v, (int, float)):
        return Quaternion(float(v))
    raise TypeError(f"cannot interpret {type(v).__name__} as a quaternion")


def qmul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Quaternion product with i^2 = j^2 = k^2 = ijk = -1."""
    return _coerce(p) * _coerce(q)


# Array kernels: operate on (..., 4) float arrays of (w, x, y, z).

def qmul_array(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w = p[..., 0] * q[..., 0] - p[..., 1] * q[..., 1] - p[..., 2] * q[..., 2] - p[..., 3] * q[..., 3]
    x = p[..., 0] * q[..., 1] + p[..., 1] * q[..., 0] + p[..., 2] * q[..., 3] - p[..., 3] * q[..., 2]
    y = p[..., 0] * q[..., 2] - p[..., 1] * q[..., 3] + p[..., 2] * q[..., 0] + p[..., 3] * q[..., 1]
    z = p[..., 0] * q[..., 3] + p[..., 1] * q[..., 2] - p[..., 2] * q[..., 1] + p[..., 3] * q[..., 0]
    return np.stack([w, x, y, z], axis=-1)


def qconj_array(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return q * np.array([1.0, -1.0, -1.0, -1.0])


def qnorm_array(q: np.ndarray) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    return np.sqrt(np.sum(q * q, axis=-1))


class QuatMatrix:
    """A matrix over H stored as an (rows, cols, 4) array of quadruples."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.asarray(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError("expected an array of shape (rows, cols, 4)")
        self.data = arr

    # -- constructors -------------------------------------------------

    @classmethod
    def from_entries(cls, entries) -> "QuatMatrix":
        """Build from a nested list of Quaternion / real entries."""
        rows = [[_coerce(e).to_array() for e in row] for row in entries]
        return cls(np.array(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QuatMatrix":
        return cls(np.zeros((rows, cols, 4)))

    @classmethod
    def identity(cls, n: int) -> "QuatMatrix":
        m = np.zeros((n, n, 4))
        m[np.arange(n), np.arange(n), 0] = 1.0
        return cls(m)

    @classmethod
    def from_complex_pair(cls, a: np.ndarray, b: np.ndarray) -> "QuatMatrix":
        a = np.asarray(a, dtype=complex)
        b = np.asarray(b, dtype=complex)
        return cls(np.stack([a.real, a.imag, b.real, b.imag], axis=-1))

    @classmethod
    def from_complex(cls, c: np.ndarray, tol: float = 1e-9) -> "QuatMatrix":
        """Invert the complex embedding.

        Raises ReconstructionError when `c` is not (within `tol`,
        relative) in the image of the embedding, i.e. not fixed by the
        involution C -> -J conj(C) J.
        """
        c = np.asarray(c, dtype=complex)
        if c.ndim != 2 or c.shape[0] % 2 or c.shape[1] % 2:
            raise ValueError("expected a 2n x 2m complex matrix")
        n, m = c.shape[0] // 2, c.shape[1] // 2
        cand = cls.from_complex_pair(c[:n, :m], c[:n, m:])
        resid = np.linalg.norm(cand.to_complex() - c)
        scale = max(1.0, np.linalg.norm(c))
        if resid > tol * scale:
            raise ReconstructionError(
                f"matrix is not in the quaternionic locus: residual {resid:.3e}")
        return cand

    # -- views --------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape[:2]

    def complex_pair(self):
        d = self.data
        return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]

    def to_complex(self) -> np.ndarray:
        """Embed into C^(2r x 2c) as [[A, B], [-conj(B), conj(A)]]."""
        a, b = self.complex_pair()
        return np.block([[a, b], [-b.conj(), a.conj()]])

    def __getitem__(self, key):
        if isinstance(key, tuple) and len(key) == 2 and all(isinstance(k, int) for k in key):
            return Quaternion.from_array(self.data[key])
        sub = self.data[key]
        if sub.ndim == 2:
            sub = sub[np.newaxis, ...]
        return QuatMatrix(sub)

    # -- algebra ------------------------------------------------------

    def __add__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.data + other.data)

    def __sub__(self, other: "QuatMatrix") -> "QuatMatrix":
        return QuatMatrix(self.data - other.data)

    def __neg__(self) -> "QuatMatrix":
        return QuatMatrix(-self.data)

    def scale(self, t: float) -> "QuatMatrix":
        return QuatMatrix(self.data * float(t))

    def __matmul__(self, other: "QuatMatrix") -> "QuatMatrix":
        a1, b1 = self.complex_pair()
        a2, b2 = other.complex_pair()
        return QuatMatrix.from_complex_pair(
            a1 @ a2 - b1 @ b2.conj(), a1 @ b2 + b1 @ a2.conj())

    @property
    def H(self) -> "QuatMatrix":
        """Adjoint (conjugate transpose)."""
        a, b = self.complex_pair()
        return QuatMatrix.from_complex_pair(a.conj().T, -b.T)

    def trace(self) -> Quaternion:
        n = min(self.rows, self.cols)
        return Quaternion.from_array(self.data[np.arange(n), np.arange(n)].sum(axis=0))

    def norm(self) -> float:
        return float(np.linalg.norm(self.data))

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return (self - self.H).norm() <= tol * max(1.0, self.norm())

    def allclose(self, other: "QuatMatrix", tol: float = DEFAULT_TOL) -> bool:
        return (self - other).norm() <= tol

    def __repr__(self):
        return f"QuatMatrix(shape={self.shape})"


def random_quaternion(rng, scale: float = 1.0) -> Quaternion:
    rng = as_rng(rng)
    return Quaternion.from_array(rng.normal(scale=scale, size=4))


def random_unit_quaternion(rng) -> Quaternion:
    """Uniform on S^3: four independent Gaussians, normalized."""
    rng = as_rng(rng)
    v = rng.normal(size=4)
    return Quaternion.from_array(v / np.linalg.norm(v))


def random_quat_matrix(rows: int, cols: int, rng, scale: float = 1.0) -> QuatMatrix:
    rng = as_rng(rng)
    return QuatMatrix(rng.normal(scale=scale, size=(rows, cols, 4)))


def random_hermitian(n: int, rng, scale: float = 1.0) -> QuatMatrix:
    m = random_quat_matrix(n, n, rng, scale)
    return (m + m.H).scale(0.5)


def random_symplectic(n: int, rng) -> QuatMatrix:
    """Draw U with U* U = I by Gram-Schmidt over H on Gaussian columns.

    Columns are orthonormalized with respect to <u, v> = sum conj(u_i) v_i,
    scalars applied on the right.  Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = as_rng(rng)
    cols: list[np.ndarray] = []  # each (n, 4)
    while len(cols) < n:
        v = rng.normal(size=(n, 4))
        for u in cols:
            # v <- v - u * <u, v>
            inner = qmul_array(qconj_array(u), v).sum(axis=0)
            v = v - qmul_array(u, np.broadcast_to(inner, (n, 4)))
        nv = np.sqrt((v * v).sum())
        if nv < 1e-8:  # resample on near-dependence
            continue
        cols.append(v / nv)
    data = np.stack(cols, axis=1)
    return QuatMatrix(data)


# -- 2x2 group elements ----------------------------------------------


@dataclass(frozen=True)
class SL2H:
    """A 2x2 quaternionic matrix acting by linear fractional transformations.

    Group elements are normalized to Dieudonne determinant 1; the
    determinant is checked lazily by `is_normalized`, not enforced on
    construction, so intermediate products can be formed freely.
    """

    a: Quaternion
    b: Quaternion
    c: Quaternion
    d: Quaternion

    @classmethod
    def identity(cls) -> "SL2H":
        return cls(ONE, Quaternion(), Quaternion(), ONE)

    @classmethod
    def from_matrix(cls, m: QuatMatrix) -> "SL2H":
        if m.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @classmethod
    def diagonal(cls, s: float) -> "SL2H":
        """diag(s, 1/s): the hyperbolic dilation one-parameter family."""
        if s <= 0:
            raise ValueError("s must be positive")
        return cls(Quaternion(s), Quaternion(), Quaternion(), Quaternion(1.0 / s))

    def to_matrix(self) -> QuatMatrix:
        return QuatMatrix.from_entries([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "SL2H") -> "SL2H":
        return SL2H.from_matrix(self.to_matrix() @ other.to_matrix())

    def adjoint(self) -> "SL2H":
        return SL2H(self.a.conj(), self.c.conj(), self.b.conj(), self.d.conj())

    def inverse(self) -> "SL2H":
        a, b, c, d = self.a, self.b, self.c, self.d
        # pivot on the larger of |a|, |c| to avoid dividing by ~0
        if abs(a) >= abs(c):
            if abs(a) == 0.0:
                raise ZeroDivisionError("singular group element")
            s = d - c * a.inverse() * b  # Schur complement
            si = s.inverse()
            ai = a.inverse()
            return SL2H(ai + ai * b * si * c * ai, -(ai * b * si),
                        -(si * c * ai), si)
        # row-swapped pivot: inverse of [[c, d], [-a, -b]] times the swap
        swapped = SL2H(c, d, -a, -b).inverse()
        return SL2H(swapped.b, -swapped.a, swapped.d, -swapped.c).flip_sign()

    def flip_sign(self) -> "SL2H":
        return SL2H(-self.a, -self.b, -self.c, -self.d)

    def det(self) -> float:
        return dieudonne_det(self.to_matrix())

    def normalized(self) -> "SL2H":
        """Rescale to Dieudonne determinant 1."""
        dd = self.det()
        if dd <= 0:
            raise ZeroDivisionError("singular group element")
        f = 1.0 / math.sqrt(dd)
        return SL2H(self.a * f, self.b * f, self.c * f, self.d * f)

    def is_normalized(self, tol: float = 1e-8) -> bool:
        return abs(self.det() - 1.0) <= tol

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        m = self.to_matrix()
        return (m.H @ m).allclose(QuatMatrix.identity(2), tol)


def dieudonne_det(g: QuatMatrix | SL2H) -> float:
    """Dieudonne determinant of a 2x2 quaternionic matrix.

    Computed by quaternionic row reduction: |a| * |d - c a^-1 b| with
    pivoting, which agrees with |det C|^(1/2) for the complex embedding
    C of g.  Nonnegative, zero exactly on singular matrices, and
    multiplicative.
    """
    if isinstance(g, SL2H):
        a, b, c, d = g.a, g.b, g.c, g.d
    else:
        if g.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        a, b, c, d = g[0, 0], g[0, 1], g[1, 0], g[1, 1]
    if abs(a) >= abs(c):
        if abs(a) == 0.0:
            return 0.0
        return abs(a) * abs(d - c * a.inverse() * b)
    return abs(c) * abs(b - a * c.inverse() * d)


def inverse_sqrt_hermitian2(g: QuatMatrix) -> QuatMatrix:
    """G^(-1/2) for a positive-definite 2x2 quaternionic Hermitian G.

    Uses the split G = s*I + T with T traceless; T^2 = |T|^2 * I, so the
    two spectral projectors are (I +- T/|T|)/2 and any scalar function
    of G has a closed form.
    """
    if g.shape != (2, 2):
        raise ValueError("expected a 2x2 matrix")
    if not g.is_hermitian(1e-8):
        raise ValueError("matrix is not Hermitian")
    s = g.trace().w / 2.0
    t = g - QuatMatrix.identity(2).scale(s)
    tnorm = t.norm() / math.sqrt(2.0)  # |T| with T^2 = |T|^2 I
    lo, hi = s - tnorm, s + tnorm
    if lo <= 0:
        raise ValueError("matrix is not positive definite")
    if tnorm < 1e-15 * max(1.0, s):
        return QuatMatrix.identity(2).scale(1.0 / math.sqrt(s))
    fp, fm = 1.0 / math.sqrt(hi), 1.0 / math.sqrt(lo)
    unit = t.scale(1.0 / tnorm)
    half = QuatMatrix.identity(2).scale(0.5)
    return (half + unit.scale(0.5)).scale(fp) + (half - unit.scale(0.5)).scale(fm)
