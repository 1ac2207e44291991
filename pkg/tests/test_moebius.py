import numpy as np
import pytest

from quatpoly.moebius import (HP1Point, INFINITY, ball_to_halfspace,
                              boundary_limit_chart, chart_to_s4,
                              halfspace_to_ball, hp1_to_s4, lft_chart,
                              mobius_ball, mobius_halfspace, mobius_hp1,
                              mobius_s4, random_sl2h, random_sp2,
                              rotation_to_pole, s4_to_chart, s4_to_hp1,
                              translation_along_axis)
from quatpoly.quaternions import ONE, Quaternion, QuatMatrix, SL2H

E5 = np.array([0.0, 0.0, 0.0, 0.0, 1.0])


def random_boundary_point(rng):
    v = rng.normal(size=5)
    return v / np.linalg.norm(v)


def random_interior_point(rng, rmax=0.9):
    v = rng.normal(size=5)
    return v * (rng.uniform(0.05, rmax) / np.linalg.norm(v))


# -- coordinates -------------------------------------------------------


def test_projective_chart_fixtures():
    assert np.allclose(hp1_to_s4(HP1Point(Quaternion(), ONE)), E5)
    assert np.allclose(hp1_to_s4(HP1Point(ONE, ONE)),
                       np.array([1.0, 0, 0, 0, 0]))
    assert np.allclose(hp1_to_s4(HP1Point(ONE, Quaternion())), -E5)


def test_canonicalization_gauge():
    p = HP1Point(Quaternion(0.3, -0.2, 0.5, 0.1), Quaternion(-1.0, 2.0, 0.4, -0.3))
    assert p.q1.norm_sq() + p.q2.norm_sq() == pytest.approx(1.0)
    assert p.q2.x == pytest.approx(0.0, abs=1e-14)
    assert p.q2.w > 0
    h = Quaternion(0.1, -0.4, 0.8, 0.2)
    h = h * (1.0 / abs(h))
    gauged = HP1Point(p.q1 * h, p.q2 * h)
    assert gauged.is_same_point(p)


def test_zero_pair_rejected():
    with pytest.raises(ValueError):
        HP1Point(Quaternion(), Quaternion())


def test_sphere_roundtrips():
    rng = np.random.default_rng(0)
    for _ in range(300):
        u = random_boundary_point(rng)
        assert np.linalg.norm(hp1_to_s4(s4_to_hp1(u)) - u) < 1e-12
    south = np.array([0, 0, 0, 0, -1.0])
    assert np.allclose(hp1_to_s4(s4_to_hp1(south)), south)
    assert s4_to_chart(south) is INFINITY
    assert np.allclose(chart_to_s4(INFINITY), south)


def test_model_roundtrips_interior():
    rng = np.random.default_rng(1)
    for _ in range(300):
        y = random_interior_point(rng, rmax=0.999)
        x = ball_to_halfspace(y)
        assert x[4] > 0
        assert np.linalg.norm(halfspace_to_ball(x) - y) < 1e-10
    assert np.allclose(ball_to_halfspace(np.zeros(5)), E5)


def test_ball_to_halfspace_rejects_exterior():
    with pytest.raises(ValueError):
        ball_to_halfspace(np.array([0.7, 0.7, 0.2, 0.0, 0.0]))
    with pytest.raises(ValueError):
        halfspace_to_ball(np.array([0.0, 0.0, 0.0, 0.0, -0.1]))


# -- projective action -------------------------------------------------


def test_identity_acts_trivially():
    rng = np.random.default_rng(2)
    p = s4_to_hp1(random_boundary_point(rng))
    assert mobius_hp1(SL2H.identity(), p).is_same_point(p)


def test_quarter_turn_fixture():
    g = SL2H(Quaternion(), ONE, -ONE, Quaternion())
    image = mobius_hp1(g, HP1Point(ONE, ONE))
    assert image.is_same_point(HP1Point(ONE, -ONE))


def test_dilation_acts_as_square_on_chart():
    rng = np.random.default_rng(3)
    for s in (0.5, 1.7, 3.0):
        g = SL2H.diagonal(s)
        v = Quaternion.from_array(rng.normal(size=4))
        image = mobius_hp1(g, HP1Point.from_chart(v)).chart()
        assert abs(image - v * s**2) < 1e-12


def test_group_law_on_all_models():
    rng = np.random.default_rng(4)
    for _ in range(100):
        g, h = random_sl2h(rng, 0.8), random_sl2h(rng, 0.8)
        p = s4_to_hp1(random_boundary_point(rng))
        lhs = hp1_to_s4(mobius_hp1(g, mobius_hp1(h, p)))
        rhs = hp1_to_s4(mobius_hp1(g @ h, p))
        assert np.linalg.norm(lhs - rhs) < 1e-10
        y = random_interior_point(rng)
        assert np.linalg.norm(mobius_ball(g, mobius_ball(h, y))
                              - mobius_ball(g @ h, y)) < 1e-10
        x = ball_to_halfspace(y)
        assert np.linalg.norm(mobius_halfspace(g, mobius_halfspace(h, x))
                              - mobius_halfspace(g @ h, x)) < 1e-9


# -- half-space action -------------------------------------------------


def test_halfspace_dilation_fixture():
    g = SL2H.diagonal(np.sqrt(2.0))
    out = mobius_halfspace(g, E5)
    assert np.allclose(out, 2.0 * E5)


def test_halfspace_positive_height():
    rng = np.random.default_rng(5)
    for _ in range(200):
        g = random_sl2h(rng, 1.0)
        x = np.append(rng.normal(size=4), rng.uniform(0.01, 5.0))
        assert mobius_halfspace(g, x)[4] > 0


def test_boundary_limit_matches_lft():
    rng = np.random.default_rng(6)
    worst_near, worst_exact = 0.0, 0.0
    for _ in range(500):
        g = random_sl2h(rng, 0.8)
        v = Quaternion.from_array(rng.normal(size=4))
        w = lft_chart(g, v)
        if w is INFINITY:
            continue
        near = mobius_halfspace(g, np.array([v.w, v.x, v.y, v.z, 1e-6]))
        worst_near = max(worst_near, float(np.linalg.norm(near[:4] - w.to_array())))
        worst_exact = max(worst_exact, abs(boundary_limit_chart(g, v) - w))
    assert worst_near < 1e-4
    assert worst_exact < 1e-10


def test_lft_fallback_near_pole():
    g = SL2H.diagonal(2.0)
    flip = SL2H(Quaternion(), ONE, -ONE, Quaternion())
    h = g @ flip  # sends v to -4 v^{-1}; pole at v = 0 for the inverse chart
    pole = (h.inverse() @ SL2H.identity()).to_matrix()  # silence unused warn
    del pole
    v = Quaternion(1e-12)
    out = lft_chart(h, v)
    assert out is INFINITY or abs(out) > 1e8
    assert lft_chart(flip, INFINITY).is_close(Quaternion())


# -- ball action -------------------------------------------------------


def test_dilation_moves_origin_down_axis():
    g = SL2H.diagonal(np.sqrt(2.0))
    out = mobius_ball(g, np.zeros(5))
    assert np.allclose(out, np.array([0, 0, 0, 0, -1.0 / 3.0]))


def test_sp2_fixes_origin_and_norms():
    rng = np.random.default_rng(7)
    for _ in range(100):
        g = random_sp2(rng)
        assert np.linalg.norm(mobius_ball(g, np.zeros(5))) < 1e-10
        y = random_interior_point(rng)
        assert np.linalg.norm(mobius_ball(g, y)) == pytest.approx(
            np.linalg.norm(y), abs=1e-10)
        u = random_boundary_point(rng)
        assert np.linalg.norm(mobius_s4(g, u)) == pytest.approx(1.0, abs=1e-12)


def test_boundary_and_interior_actions_agree():
    rng = np.random.default_rng(8)
    for _ in range(50):
        g = random_sl2h(rng, 0.8)
        u = random_boundary_point(rng)
        inner = mobius_ball(g, u * (1.0 - 1e-9))
        assert np.linalg.norm(inner - mobius_s4(g, u)) < 1e-6


def test_action_compatibility_hp1_vs_ball():
    rng = np.random.default_rng(9)
    for _ in range(200):
        g = random_sl2h(rng, 0.8)
        p = s4_to_hp1(random_boundary_point(rng))
        lhs = hp1_to_s4(mobius_hp1(g, p))
        rhs = mobius_ball(g, hp1_to_s4(p))
        assert np.linalg.norm(lhs - rhs) < 1e-9


def test_interior_stays_interior_boundary_stays_boundary():
    rng = np.random.default_rng(10)
    g = random_sl2h(rng, 1.0)
    y = random_interior_point(rng)
    assert np.linalg.norm(mobius_ball(g, y)) < 1.0
    u = random_boundary_point(rng)
    assert np.linalg.norm(mobius_ball(g, u)) == pytest.approx(1.0, abs=1e-12)


def test_ball_rejects_exterior():
    with pytest.raises(ValueError):
        mobius_ball(SL2H.identity(), np.array([1.1, 0, 0, 0, 0.2]))


# -- explicit elements -------------------------------------------------


def test_rotation_to_pole():
    rng = np.random.default_rng(11)
    for _ in range(100):
        u = random_boundary_point(rng)
        g = rotation_to_pole(u)
        assert g.is_unitary(1e-10)
        assert np.linalg.norm(mobius_s4(g, u) - E5) < 1e-10
    south = np.array([0, 0, 0, 0, -1.0])
    assert np.linalg.norm(mobius_s4(rotation_to_pole(south), south) - E5) < 1e-12


def test_translation_along_axis():
    for beta in (-0.9, -0.3, 0.2, 0.8):
        g = translation_along_axis(beta)
        moved = mobius_ball(g, beta * E5)
        assert np.linalg.norm(moved) < 1e-12
    with pytest.raises(ValueError):
        translation_along_axis(1.0)
