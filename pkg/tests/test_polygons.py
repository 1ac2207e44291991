import numpy as np
import pytest

from quatpoly.errors import (ClosureError, GenericityError,
                             NonConvergenceError, UsageError)
from quatpoly.polygons import (CLOSURE_TOL, DiagonalData, PolygonConfig,
                               angle_chart_dims, bend, canonical_planar,
                               check_weights, classify, closure_jacobian_rank,
                               diagonal_lengths, is_generic,
                               polygon_to_configuration, rotation_fixing_axis,
                               sample_closed, so2_invariants, span_rank)


def planar_regular_hexagon():
    ang = np.arange(6) * np.pi / 3
    edges = np.zeros((6, 5))
    edges[:, 0] = np.cos(ang)
    edges[:, 1] = np.sin(ang)
    return PolygonConfig(np.ones(6), edges)


def unit_square():
    edges = np.zeros((4, 5))
    edges[0, 0] = 1.0
    edges[1, 1] = 1.0
    edges[2, 0] = -1.0
    edges[3, 1] = -1.0
    return PolygonConfig(np.ones(4), edges)


def rotation_in_first3_fixing(axis, theta):
    a3 = np.asarray(axis[:3], dtype=float)
    a3 /= np.linalg.norm(a3)
    seed = np.zeros(3)
    seed[int(np.argmin(np.abs(a3)))] = 1.0
    b1 = seed - (seed @ a3) * a3
    b1 /= np.linalg.norm(b1)
    b2 = np.cross(a3, b1)
    r3 = (np.eye(3) + np.sin(theta) * (np.outer(b2, b1) - np.outer(b1, b2))
          + (np.cos(theta) - 1.0) * (np.outer(b1, b1) + np.outer(b2, b2)))
    rot = np.eye(5)
    rot[:3, :3] = r3
    return rot


# -- weights -------------------------------------------------------------


def test_equilateral_square_weights():
    res = check_weights([1, 1, 1, 1])
    assert res.admissible and not res.nondegenerate


def test_long_side_weights():
    res = check_weights([2, 1, 1, 1])
    assert res.admissible and res.nondegenerate


def test_inadmissible_weights():
    res = check_weights([3, 1, 1, 0.5])
    assert not res.admissible


def test_weights_guardrails():
    with pytest.raises(UsageError):
        check_weights([1, -1, 1])
    with pytest.raises(UsageError):
        check_weights(np.ones(25))
    assert check_weights(np.ones(11)).nondegenerate  # odd equilateral


# -- sampling ------------------------------------------------------------


def test_sampler_residual_and_determinism():
    p1 = sample_closed(np.ones(6), seed=7)
    p2 = sample_closed(np.ones(6), seed=7)
    assert p1.closure_residual() < CLOSURE_TOL
    assert np.abs(p1.edges - p2.edges).max() == 0.0
    p3 = sample_closed(np.ones(6), seed=8)
    assert np.abs(p1.edges - p3.edges).max() > 1e-3


def test_four_gons_span_at_most_three_dims():
    for seed in range(50):
        p = sample_closed([1.0, 1.1, 0.9, 1.2], seed)
        assert span_rank(p) <= 3


def test_equilateral_hexagons_exist():
    p = sample_closed(np.ones(6), seed=0)
    assert p.closure_residual() < CLOSURE_TOL


def test_sampler_rejects_inadmissible():
    with pytest.raises(UsageError):
        sample_closed([3, 1, 1, 0.5], seed=0)


def test_restricted_dimension_sampling():
    p = sample_closed(np.ones(6), seed=1, dim=2)
    assert span_rank(p) == 2
    assert np.abs(p.edges[:, 2:]).max() == 0.0


# -- classification ------------------------------------------------------


def test_planar_hexagon_is_type3():
    rep = classify(planar_regular_hexagon())
    assert rep.kind == "type3"
    assert rep.span_rank == 2
    assert rep.local_model.trivial_factor_dim == 3
    assert rep.local_model.cone == "(R^3)^3/SO(3)"


def test_rank3_hexagon_is_type2():
    hexp = planar_regular_hexagon()
    d = diagonal_lengths(hexp)
    rot = rotation_in_first3_fixing(d.diagonals[0], 0.8)
    bent = bend(hexp, 1, rot)
    rep = classify(bent)
    assert rep.kind == "type2"
    assert rep.span_rank == 3
    assert rep.local_model.trivial_factor_dim == 6
    assert rep.local_model.cone == "(R^2)^2/SO(2)"


def test_generic_hexagon_is_nondegenerate():
    rep = classify(sample_closed(np.ones(6), seed=3))
    assert rep.kind == "nondegenerate"
    assert rep.span_rank == 5


def test_segment_is_linear():
    edges = np.zeros((4, 5))
    edges[:, 0] = [1, -1, 1, -1]
    rep = classify(PolygonConfig(np.ones(4), edges))
    assert rep.kind == "linear"
    assert rep.span_rank == 1


# -- diagonals -----------------------------------------------------------


def test_square_diagonal():
    d = diagonal_lengths(unit_square())
    assert d.lengths.shape == (1,)
    assert d.lengths[0] == pytest.approx(np.sqrt(2.0))


def test_pentagon_has_two_diagonals():
    p = sample_closed(np.ones(5), seed=2)
    d = diagonal_lengths(p)
    assert isinstance(d, DiagonalData)
    assert d.lengths.shape == (2,)


def test_degenerate_segment_diagonal():
    edges = np.zeros((4, 5))
    edges[:, 0] = [1, -1, 1, -1]
    p = PolygonConfig(np.ones(4), edges)
    d = diagonal_lengths(p)
    # v_3 = (1 - 1) e_1 = 0 after two opposite unit steps... v_3 = v_1 + u_1 + u_2
    assert d.lengths[0] == pytest.approx(np.linalg.norm(p.vertices()[2]))
    assert d.lengths[0] == pytest.approx(0.0, abs=1e-14)


def test_consecutive_diagonals_interlace():
    rng = np.random.default_rng(3)
    for _ in range(30):
        n = int(rng.integers(5, 10))
        p = sample_closed(rng.uniform(0.6, 1.4, size=n), rng)
        ell = diagonal_lengths(p).lengths
        for i in range(len(ell) - 1):
            r = p.weights[i + 2]
            assert abs(ell[i] - r) - 1e-10 <= ell[i + 1] <= ell[i] + r + 1e-10


# -- bending -------------------------------------------------------------


def test_identity_bend():
    p = sample_closed(np.ones(6), seed=4)
    q = bend(p, 2, np.eye(5))
    assert np.abs(q.edges - p.edges).max() < 1e-14


def test_bend_preserves_lengths_and_closure():
    rng = np.random.default_rng(5)
    for _ in range(100):
        n = int(rng.integers(5, 9))
        p = sample_closed(rng.uniform(0.7, 1.3, size=n), rng)
        ell = diagonal_lengths(p)
        i = int(rng.integers(1, n - 2))
        rot = rotation_fixing_axis(ell.diagonals[i - 1], rng)
        q = bend(p, i, rot)
        assert q.closure_residual() < 1e-10
        assert np.abs(diagonal_lengths(q).lengths - ell.lengths).max() < 1e-10
        assert np.abs(q.weights - p.weights).max() == 0.0


def test_planar_square_bends_out_of_plane():
    p = unit_square()
    d = diagonal_lengths(p)
    rot = rotation_fixing_axis(d.diagonals[0], np.random.default_rng(6))
    q = bend(p, 1, rot)
    assert np.abs(diagonal_lengths(q).lengths - d.lengths).max() < 1e-12
    assert span_rank(q) == 3


def test_bend_composition_is_product():
    p = sample_closed(np.ones(6), seed=7)
    d = diagonal_lengths(p).diagonals[1]
    rng = np.random.default_rng(8)
    k1 = rotation_fixing_axis(d, rng)
    k2 = rotation_fixing_axis(d, rng)
    lhs = bend(bend(p, 2, k1), 2, k2)
    rhs = bend(p, 2, k2 @ k1)
    assert np.abs(lhs.edges - rhs.edges).max() < 1e-10


def test_bend_rejects_wrong_axis():
    p = sample_closed(np.ones(6), seed=9)
    rot = rotation_fixing_axis(np.array([1, 0, 0, 0, 0.0]), 1)
    with pytest.raises(UsageError):
        bend(p, 2, rot)


# -- canonical planar -----------------------------------------------------


def _congruent(p: PolygonConfig, q: PolygonConfig) -> bool:
    dist = lambda poly: np.sort(np.linalg.norm(
        poly.vertices()[None, :, :] - poly.vertices()[:, None, :], axis=-1).ravel())
    return bool(np.abs(dist(p) - dist(q)).max() < 1e-9)


def test_spatial_polygon_folds_flat():
    rng = np.random.default_rng(10)
    for _ in range(20):
        n = int(rng.integers(5, 9))
        p = sample_closed(rng.uniform(0.7, 1.3, size=n), rng)
        flat = canonical_planar(p)
        assert span_rank(flat) <= 2
        assert flat.closure_residual() < 1e-12
        assert np.abs(diagonal_lengths(flat).lengths
                      - diagonal_lengths(p).lengths).max() < 1e-10
        assert np.abs(flat.weights - p.weights).max() == 0.0


def test_canonical_input_reproduced_up_to_congruence():
    p = sample_closed(np.array([1.0, 1.2, 0.8, 1.1, 0.9]), seed=11)
    flat = canonical_planar(p)
    again = canonical_planar(flat)
    assert _congruent(flat, again)


def test_genericity_violation_reported():
    edges = np.zeros((4, 5))
    edges[:, 0] = [1, -1, 1, -1]
    segment = PolygonConfig(np.ones(4), edges)
    ok, reason = is_generic(segment)
    assert not ok and "diagonal 1" in reason
    with pytest.raises(GenericityError):
        canonical_planar(segment)


# -- invariants of the circle action --------------------------------------


def test_so2_invariants_fixture():
    p1, p2, p3, p4 = so2_invariants((1, 0), (1, 0))
    assert (p1, p2, p3, p4) == (1, 1, 1, 0)
    assert p1 * p2 == p3**2 + p4**2


def test_so2_invariants_attained():
    rng = np.random.default_rng(12)
    for _ in range(100):
        x, y = rng.normal(size=2), rng.normal(size=2)
        p1, p2, p3, p4 = so2_invariants(x, y)
        lift_x = (np.sqrt(p1), 0.0)
        lift_y = (p3 / np.sqrt(p1), p4 / np.sqrt(p1))
        q = so2_invariants(lift_x, lift_y)
        assert np.abs(np.array(q) - np.array([p1, p2, p3, p4])).max() < 1e-10


def test_so2_invariants_invariant_under_action():
    rng = np.random.default_rng(13)
    for _ in range(200):
        x, y = rng.normal(size=2), rng.normal(size=2)
        t = rng.uniform(0, 2 * np.pi)
        c, s = np.cos(t), np.sin(t)
        rot = np.array([[c, -s], [s, c]])
        base = np.array(so2_invariants(x, y))
        acted = np.array(so2_invariants(rot @ x, rot.T @ y))
        assert np.abs(base - acted).max() < 1e-12


# -- chart bookkeeping -----------------------------------------------------


def test_angle_chart_dims():
    assert angle_chart_dims(5) == {"angles": 3, "actions": 2, "total": 5}
    assert angle_chart_dims(6) == {"angles": 6, "actions": 3, "total": 9}
    with pytest.raises(UsageError):
        angle_chart_dims(4)


def test_closure_jacobian_rank_five():
    for n in (5, 6, 7):
        p = sample_closed(np.ones(n), seed=20 + n)
        assert closure_jacobian_rank(p) == 5


def test_polygon_to_configuration_requires_closure():
    edges = np.zeros((4, 5))
    edges[0, 0] = 1.0
    edges[1, 1] = 1.0
    edges[2, 0] = -1.0
    edges[3, 1] = 1.0  # does not close
    with pytest.raises(ClosureError):
        polygon_to_configuration(PolygonConfig(np.ones(4), edges))
