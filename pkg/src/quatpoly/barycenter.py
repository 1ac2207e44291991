"""Weighted point configurations on S^4 and their conformal barycenter.

A configuration is a list of unit vectors u_i with positive weights
r_i, normalized so the weights sum to 2; it doubles as the discrete
measure (1/2) sum r_i delta_{u_i} of total mass 1.  For stable
configurations (no near-coincident cluster carrying half the mass or
more) the barycenter vector field

    xi(y) = (1/2) sum_i r_i [ (1 - |y|^2) (u_i - y) / |y - u_i|^2  -  y ]

has a unique zero in the open ball, the conformal barycenter.  The
field averages the boundary atoms after re-centering the ball at y
(equivalently, it is a negative multiple of the Euclidean gradient of
the weighted Busemann average), which is what makes the zero move
equivariantly under the ball action: pushing the measure forward by a
group element g moves the barycenter by g.  At the origin xi equals
the Euclidean center of mass, so a configuration is balanced exactly
when its barycenter sits at the origin, and solving for the barycenter
is what normalizes a configuration to zero center of mass.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NonConvergenceError, UnstableConfigurationError
from .moebius import mobius_ball, mobius_s4, rotation_to_pole, translation_along_axis
from .quaternions import SL2H

#: Chordal distance below which two atoms merge for the stability test.
ATOM_MERGE_TOL = 1e-9


@dataclass(frozen=True)
class WeightedConfiguration:
    """Unit points on S^4 with positive weights normalized to sum 2."""

    points: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        pts = np.atleast_2d(np.asarray(self.points, dtype=float))
        w = np.asarray(self.weights, dtype=float).ravel()
        if pts.shape != (w.size, 5):
            raise ValueError("points must be (n, 5) matching n weights")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        norms = np.linalg.norm(pts, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-8):
            raise ValueError("configuration points must lie on the unit sphere")
        object.__setattr__(self, "points", pts / norms[:, None])
        object.__setattr__(self, "weights", w * (2.0 / w.sum()))

    @property
    def size(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class BarycenterResult:
    barycenter: np.ndarray
    residual: float
    iterations: int
    history: tuple = field(default=(), repr=False)


def center_of_mass(cfg: WeightedConfiguration) -> np.ndarray:
    """(1/2) sum r_i u_i, a point of the closed ball."""
    return 0.5 * cfg.weights @ cfg.points


def atom_clusters(cfg: WeightedConfiguration, merge_tol: float = ATOM_MERGE_TOL):
    """Group points within `merge_tol` chordal distance into atoms."""
    n = cfg.size
    labels = list(range(n))

    def find(i):
        while labels[i] != i:
            labels[i] = labels[labels[i]]
            i = labels[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if np.linalg.norm(cfg.points[i] - cfg.points[j]) < merge_tol:
                labels[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def is_stable(cfg: WeightedConfiguration, merge_tol: float = ATOM_MERGE_TOL) -> bool:
    """True iff every coincident cluster has summed weight < 1 (strict)."""
    return all(cfg.weights[idx].sum() < 1.0 for idx in atom_clusters(cfg, merge_tol))


def xi_field(cfg: WeightedConfiguration, y) -> np.ndarray:
    """The barycenter vector field at an interior point."""
    y = np.asarray(y, dtype=float)
    r2 = float(y @ y)
    if r2 >= 1.0:
        raise ValueError("xi is defined on the open ball only")
    diff = cfg.points - y
    rho = np.einsum("ij,ij->i", diff, diff)
    half_mass = 0.5 * cfg.weights.sum()
    return 0.5 * (1.0 - r2) * ((cfg.weights / rho) @ diff) - half_mass * y


def xi_jacobian(cfg: WeightedConfiguration, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    r2 = float(y @ y)
    diff = cfg.points - y
    rho = np.einsum("ij,ij->i", diff, diff)
    avg = (cfg.weights / rho) @ diff
    d_avg = (np.einsum("i,ij,ik->jk", 2.0 * cfg.weights / rho**2, diff, diff)
             - (cfg.weights / rho).sum() * np.eye(5))
    half_mass = 0.5 * cfg.weights.sum()
    return (0.5 * (1.0 - r2) * d_avg - np.outer(avg, y)
            - half_mass * np.eye(5))


def conformal_barycenter(cfg: WeightedConfiguration, tol: float = 1e-10,
                         max_iter: int = 200) -> BarycenterResult:
    """Locate the zero of the barycenter field by damped Newton.

    Steps are halved until the residual decreases and the iterate stays
    in the open ball; an ill-conditioned Jacobian falls back to the
    fixed-point direction (1 - |y|^2) xi(y).  Raises
    UnstableConfigurationError when the input has no barycenter and
    NonConvergenceError when progress stalls (typically a configuration
    that is barely stable).
    """
    if not is_stable(cfg):
        raise UnstableConfigurationError(
            "configuration has an atom of mass >= 1/2")
    y = center_of_mass(cfg)
    r = np.linalg.norm(y)
    if r > 0.9:
        y = y * (0.9 / r)
    f = xi_field(cfg, y)
    res = float(np.linalg.norm(f))
    history = [res]
    for it in range(1, max_iter + 1):
        if res < tol:
            return BarycenterResult(y, res, it - 1, tuple(history))
        directions = []
        jac = xi_jacobian(cfg, y)
        if np.isfinite(jac).all() and np.linalg.cond(jac) < 1e12:
            directions.append(np.linalg.solve(jac, -f))
        directions.append((1.0 - float(y @ y)) * f)
        accepted = False
        for delta in directions:
            alpha = 1.0
            while alpha > 1e-18:
                cand = y + alpha * delta
                if float(cand @ cand) < 1.0:
                    f_cand = xi_field(cfg, cand)
                    res_cand = float(np.linalg.norm(f_cand))
                    if res_cand < res:
                        y, f, res = cand, f_cand, res_cand
                        history.append(res)
                        accepted = True
                        break
                alpha *= 0.5
            if accepted:
                break
        if not accepted:
            raise NonConvergenceError(
                f"barycenter stalled at residual {res:.3e} after {it} steps")
    raise NonConvergenceError(
        f"barycenter did not reach {tol:.1e} in {max_iter} iterations")


def pushforward(g: SL2H, cfg: WeightedConfiguration) -> WeightedConfiguration:
    """Move every atom by the boundary action; weights are untouched."""
    moved = np.stack([mobius_s4(g, u) for u in cfg.points])
    return WeightedConfiguration(moved, cfg.weights.copy())


def normalizing_element(barycenter: np.ndarray) -> SL2H:
    """The element carrying the given interior point to the origin.

    Rotate the point onto the positive fifth axis, translate along the
    axis, rotate back.
    """
    beta = float(np.linalg.norm(barycenter))
    rot = rotation_to_pole(np.asarray(barycenter) / beta)
    return rot.adjoint() @ translation_along_axis(beta) @ rot


def normalize_configuration(cfg: WeightedConfiguration, tol: float = 1e-9,
                            max_rounds: int = 8):
    """Find g with the pushed-forward center of mass below `tol`.

    Returns (g, pushforward(g, cfg)).  The identity is returned
    untouched when the input is already centered.  Each round solves
    for the barycenter and applies the normalizing element; rounds
    repeat on the image until the center-of-mass residual is met.
    """
    g_total = SL2H.identity()
    current = cfg
    solver_tol = min(1e-12, tol * 1e-2)
    for _ in range(max_rounds):
        com = center_of_mass(current)
        if np.linalg.norm(com) < tol:
            return g_total, current
        result = conformal_barycenter(current, tol=solver_tol)
        beta = np.linalg.norm(result.barycenter)
        if beta < 1e-15:
            return g_total, current
        step = normalizing_element(result.barycenter)
        current = pushforward(step, current)
        g_total = step @ g_total
    raise NonConvergenceError(
        f"normalization stalled with |C| = {np.linalg.norm(center_of_mass(current)):.3e}")


def random_stable_configuration(n: int, rng, equal_weights: bool = False
                                ) -> WeightedConfiguration:
    """Random points on S^4 with weights bounded away from instability.

    Weights are drawn from [0.8, 1.2] before normalization, which caps
    any single normalized weight at 2*1.2/(1.2 + 0.8(n-1)) < 1 for
    n >= 3, so the result is always stable.
    """
    from .quaternions import as_rng

    if n < 3:
        raise ValueError("a stable configuration needs at least 3 atoms")
    rng = as_rng(rng)
    pts = rng.normal(size=(n, 5))
    pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    w = np.full(n, 2.0 / n) if equal_weights else rng.uniform(0.8, 1.2, size=n)
    return WeightedConfiguration(pts, w)
