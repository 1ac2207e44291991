import numpy as np
import pytest

from quatpoly import serialization as ser
from quatpoly.barycenter import random_stable_configuration
from quatpoly.bridge import ComplexLineConfig, line_stability
from quatpoly.errors import UsageError
from quatpoly.gt import grassmann_on_level_set, gt_pattern, random_grassmann_point
from quatpoly.moebius import random_sl2h
from quatpoly.polygons import classify, sample_closed
from quatpoly.quaternions import Quaternion, random_hermitian, random_quat_matrix


def test_quaternion_roundtrip():
    q = Quaternion(1.0, -0.25, 1e-17, 3.7)
    data = ser.loads(ser.dumps(ser.quaternion_to_json(q)))
    assert ser.quaternion_from_json(data) == q


def test_quat_matrix_roundtrip():
    m = random_quat_matrix(3, 2, np.random.default_rng(0))
    data = ser.loads(ser.dumps(ser.quat_matrix_to_json(m)))
    assert (ser.quat_matrix_from_json(data) - m).norm() == 0.0


def test_group_element_roundtrip():
    g = random_sl2h(np.random.default_rng(1))
    data = ser.loads(ser.dumps(ser.sl2h_to_json(g)))
    back = ser.sl2h_from_json(data)
    assert (back.to_matrix() - g.to_matrix()).norm() == 0.0


def test_configuration_roundtrip():
    cfg = random_stable_configuration(7, np.random.default_rng(2))
    data = ser.loads(ser.dumps(ser.configuration_to_json(cfg)))
    back = ser.configuration_from_json(data)
    assert np.abs(back.points - cfg.points).max() == 0.0
    assert np.abs(back.weights - cfg.weights).max() == 0.0


def test_polygon_and_report_roundtrip():
    p = sample_closed(np.ones(6), seed=3)
    data = ser.loads(ser.dumps(ser.polygon_to_json(p)))
    back = ser.polygon_from_json(data)
    assert np.abs(back.edges - p.edges).max() == 0.0
    rep = classify(p)
    rep_back = ser.report_from_json(ser.loads(ser.dumps(ser.report_to_json(rep))))
    assert rep_back == rep


def test_pattern_roundtrip():
    pat = gt_pattern(random_hermitian(4, np.random.default_rng(4)))
    data = ser.loads(ser.dumps(ser.gt_pattern_to_json(pat)))
    back = ser.gt_pattern_from_json(data)
    for a, b in zip(back.levels, pat.levels):
        assert np.abs(np.asarray(a) - np.asarray(b)).max() == 0.0


def test_grassmann_roundtrip():
    m = grassmann_on_level_set(random_grassmann_point(5, np.random.default_rng(5)))
    data = ser.loads(ser.dumps(ser.grassmann_to_json(m)))
    back = ser.grassmann_from_json(data)
    assert (back.mat - m.mat).norm() == 0.0


def test_line_config_roundtrip_and_stability_report():
    rng = np.random.default_rng(6)
    cfg = ComplexLineConfig(
        tuple(rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
              for _ in range(4)),
        np.full(4, 0.5))
    data = ser.loads(ser.dumps(ser.line_config_to_json(cfg)))
    back = ser.line_config_from_json(data)
    for a, b in zip(back.lines, cfg.lines):
        assert np.abs(a - b).max() < 1e-15
    rep = line_stability(cfg)
    text = ser.dumps(ser.stability_to_json(rep))
    parsed = ser.loads(text)
    assert parsed["stable"] == rep.stable


def test_dumps_is_deterministic():
    cfg = random_stable_configuration(6, np.random.default_rng(7))
    a = ser.dumps(ser.configuration_to_json(cfg))
    b = ser.dumps(ser.configuration_to_json(cfg))
    assert a == b


def test_bad_payloads_raise_usage_errors():
    with pytest.raises(UsageError):
        ser.polygon_from_json({"edges": [[1, 0, 0, 0, 0]]})
    with pytest.raises(UsageError):
        ser.configuration_from_json({"points": [[1, 0, 0, 0, 0]]})
    with pytest.raises(UsageError):
        ser.sl2h_from_json([[1, 0, 0, 0]])
    with pytest.raises(UsageError):
        ser.complex_array_from_json([[1.0, 2.0]])


def test_csv_export_shape():
    p = sample_closed(np.ones(6), seed=8)
    rows = [{"index": 0, "kind": "nondegenerate", "span_rank": 5,
             "lengths": np.array([1.0, 2.0, 3.0])}]
    text = ser.ell_csv(rows, 6)
    lines = text.strip().split("\n")
    assert lines[0] == "index,kind,span_rank,l1,l2,l3"
    assert lines[1].startswith("0,nondegenerate,5,1,2,3")
