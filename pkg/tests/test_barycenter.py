import numpy as np
import pytest

from quatpoly.barycenter import (WeightedConfiguration, center_of_mass,
                                 conformal_barycenter, is_stable,
                                 normalize_configuration, pushforward,
                                 random_stable_configuration, xi_field,
                                 xi_jacobian)
from quatpoly.errors import NonConvergenceError, UnstableConfigurationError
from quatpoly.moebius import mobius_ball, mobius_s4, random_sl2h
from quatpoly.quaternions import SL2H

CROSS = WeightedConfiguration(np.vstack([np.eye(5), -np.eye(5)]),
                              np.full(10, 0.2))


def test_weights_normalized_to_two():
    cfg = WeightedConfiguration(np.eye(5)[:4], np.array([1.0, 2.0, 3.0, 4.0]))
    assert cfg.weights.sum() == pytest.approx(2.0)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        WeightedConfiguration(np.eye(5)[:3] * 2.0, np.ones(3))
    with pytest.raises(ValueError):
        WeightedConfiguration(np.eye(5)[:3], np.array([1.0, -1.0, 1.0]))


# -- stability ----------------------------------------------------------


def test_distinct_points_with_half_weights_are_stable():
    cfg = WeightedConfiguration(np.eye(5)[:4], np.full(4, 0.5))
    assert is_stable(cfg)


def test_coincident_pair_with_mass_one_is_unstable():
    pts = np.vstack([np.eye(5)[0], np.eye(5)[0], np.eye(5)[1], np.eye(5)[2]])
    cfg = WeightedConfiguration(pts, np.array([0.5, 0.5, 0.5, 0.5]))
    assert not is_stable(cfg)


def test_near_coincident_points_merge():
    base = np.eye(5)[0]
    wiggled = base + np.array([0, 1e-11, 0, 0, 0])
    wiggled /= np.linalg.norm(wiggled)
    pts = np.vstack([base, wiggled, np.eye(5)[1], -np.eye(5)[1]])
    cfg = WeightedConfiguration(pts, np.array([0.5, 0.5, 0.5, 0.5]))
    assert not is_stable(cfg)


def test_closed_polygon_edges_are_stable():
    from quatpoly.polygons import polygon_to_configuration, sample_closed

    for seed in range(10):
        p = sample_closed(np.ones(6), seed)
        assert is_stable(polygon_to_configuration(p))


# -- the vector field ----------------------------------------------------


def xi_reference(cfg, y):
    """Independent re-implementation with explicit loops."""
    y = np.asarray(y, dtype=float)
    total = np.zeros(5)
    for u, r in zip(cfg.points, cfg.weights):
        total += r * ((1.0 - y @ y) * (u - y) / ((y - u) @ (y - u)) - y)
    return 0.5 * total


def test_xi_at_origin_is_center_of_mass():
    rng = np.random.default_rng(0)
    for _ in range(50):
        cfg = random_stable_configuration(int(rng.integers(3, 20)), rng)
        assert np.linalg.norm(xi_field(cfg, np.zeros(5))
                              - center_of_mass(cfg)) < 1e-14


def test_xi_vanishes_for_antipodal_pair():
    cfg = WeightedConfiguration(np.vstack([np.eye(5)[0], -np.eye(5)[0]]),
                                np.array([1.0, 1.0]))
    assert np.linalg.norm(xi_field(cfg, np.zeros(5))) == 0.0


def test_xi_matches_reference_implementation():
    rng = np.random.default_rng(1)
    for _ in range(100):
        cfg = random_stable_configuration(int(rng.integers(3, 15)), rng)
        y = rng.normal(size=5)
        y *= rng.uniform(0, 0.95) / np.linalg.norm(y)
        assert np.linalg.norm(xi_field(cfg, y) - xi_reference(cfg, y)) < 1e-12


def test_xi_domain_error():
    with pytest.raises(ValueError):
        xi_field(CROSS, np.array([1.0, 0, 0, 0, 0]))


def test_xi_jacobian_matches_finite_differences():
    rng = np.random.default_rng(2)
    cfg = random_stable_configuration(8, rng)
    y = np.array([0.2, -0.1, 0.05, 0.3, -0.2])
    jac = xi_jacobian(cfg, y)
    fd = np.zeros((5, 5))
    h = 1e-6
    for k in range(5):
        e = np.zeros(5)
        e[k] = h
        fd[:, k] = (xi_field(cfg, y + e) - xi_field(cfg, y - e)) / (2 * h)
    assert np.abs(jac - fd).max() < 1e-8


# -- the solver ----------------------------------------------------------


def test_cross_polytope_barycenter_is_origin():
    result = conformal_barycenter(CROSS)
    assert np.linalg.norm(result.barycenter) < 1e-12
    assert result.residual < 1e-12


def test_unstable_input_rejected():
    pts = np.vstack([np.eye(5)[0], np.eye(5)[0], np.eye(5)[1], np.eye(5)[2]])
    cfg = WeightedConfiguration(pts, np.array([0.6, 0.6, 0.4, 0.4]))
    with pytest.raises(UnstableConfigurationError):
        conformal_barycenter(cfg)


def test_residual_history_decreases():
    rng = np.random.default_rng(3)
    for _ in range(20):
        cfg = random_stable_configuration(int(rng.integers(4, 30)), rng)
        result = conformal_barycenter(cfg, tol=1e-11)
        assert result.residual < 1e-11
        hist = np.array(result.history)
        assert np.all(np.diff(hist) < 0)


def test_pushforward_of_symmetric_configuration():
    rng = np.random.default_rng(4)
    for _ in range(20):
        g = random_sl2h(rng, 0.8)
        pushed = pushforward(g, CROSS)
        b = conformal_barycenter(pushed, tol=1e-12).barycenter
        assert np.linalg.norm(b - mobius_ball(g, np.zeros(5))) < 1e-9


def test_equivariance():
    rng = np.random.default_rng(5)
    for _ in range(50):
        cfg = random_stable_configuration(int(rng.integers(3, 20)), rng)
        g = random_sl2h(rng, 0.8)
        b1 = conformal_barycenter(cfg, tol=1e-12).barycenter
        b2 = conformal_barycenter(pushforward(g, cfg), tol=1e-12).barycenter
        assert np.linalg.norm(mobius_ball(g, b1) - b2) < 1e-7


# -- pushforward ---------------------------------------------------------


def test_pushforward_identity_and_composition():
    rng = np.random.default_rng(6)
    cfg = random_stable_configuration(9, rng)
    same = pushforward(SL2H.identity(), cfg)
    assert np.abs(same.points - cfg.points).max() < 1e-14
    g, h = random_sl2h(rng), random_sl2h(rng)
    lhs = pushforward(g, pushforward(h, cfg))
    rhs = pushforward(g @ h, cfg)
    assert np.abs(lhs.points - rhs.points).max() < 1e-10


def test_pushforward_preserves_stability():
    rng = np.random.default_rng(7)
    cfg = random_stable_configuration(7, rng)
    for _ in range(20):
        cfg = pushforward(random_sl2h(rng, 0.6), cfg)
        assert is_stable(cfg)


# -- normalization -------------------------------------------------------


def test_already_centered_returns_identity():
    g, out = normalize_configuration(CROSS, tol=1e-9)
    assert (g.to_matrix() - SL2H.identity().to_matrix()).norm() == 0.0
    assert out is CROSS


def test_normalization_recenters():
    rng = np.random.default_rng(8)
    for _ in range(30):
        cfg = random_stable_configuration(int(rng.integers(3, 21)), rng)
        moved = pushforward(random_sl2h(rng, 0.9), cfg)
        g, out = normalize_configuration(moved, tol=1e-9)
        assert np.linalg.norm(center_of_mass(out)) < 1e-9
        direct = pushforward(g, moved)
        assert np.abs(direct.points - out.points).max() < 1e-9


def test_normalization_is_idempotent():
    rng = np.random.default_rng(9)
    cfg = random_stable_configuration(12, rng)
    _, once = normalize_configuration(cfg, tol=1e-9)
    g2, _ = normalize_configuration(once, tol=1e-9)
    assert (g2.to_matrix() - SL2H.identity().to_matrix()).norm() == 0.0


def test_normalization_round_trip_large():
    rng = np.random.default_rng(10)
    cfg = random_stable_configuration(20, rng)
    g, out = normalize_configuration(pushforward(random_sl2h(rng), cfg), 1e-9)
    assert np.linalg.norm(center_of_mass(out)) < 1e-9
    assert g.is_normalized(1e-6)


def test_pushforward_points_stay_on_sphere():
    rng = np.random.default_rng(11)
    cfg = random_stable_configuration(6, rng)
    out = pushforward(random_sl2h(rng, 1.2), cfg)
    assert np.abs(np.linalg.norm(out.points, axis=1) - 1.0).max() < 1e-12
