"""JSON and CSV interchange for every value the CLI reads or writes.

Conventions: quaternions are [w, x, y, z] quadruples, quaternionic
matrices nested arrays of quadruples, group elements the four quadruples
[a, b, c, d], points length-5 real arrays, complex numbers [re, im]
pairs.  `dumps` is deterministic (sorted keys, no whitespace variation)
and floats round-trip exactly, so identical inputs give byte-identical
artifacts.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .barycenter import WeightedConfiguration
from .bridge import ComplexLineConfig, StabilityReport, Su4Configuration
from .errors import UsageError
from .gt import GrassmannPoint, GTPattern
from .polygons import DegeneracyReport, DiagonalData, LocalModel, PolygonConfig
from .quaternions import Quaternion, QuatMatrix, SL2H


def _roundtrip_float(x) -> float:
    # 17 significant digits pin the double exactly
    return float(format(float(x), ".17g"))


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _roundtrip_float(obj)
    if isinstance(obj, complex):
        return [_roundtrip_float(obj.real), _roundtrip_float(obj.imag)]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return _clean([complex(v) for v in obj] if obj.ndim == 1
                          else [row for row in obj])
        return _clean(obj.tolist())
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, separators=(",", ": "),
                      indent=1)


def loads(text: str):
    return json.loads(text)


# -- encoders ----------------------------------------------------------


def quaternion_to_json(q: Quaternion):
    return [q.w, q.x, q.y, q.z]


def quaternion_from_json(data) -> Quaternion:
    return Quaternion.from_array(data)


def quat_matrix_to_json(m: QuatMatrix):
    return m.data.tolist()


def quat_matrix_from_json(data) -> QuatMatrix:
    return QuatMatrix(np.asarray(data, dtype=float))


def sl2h_to_json(g: SL2H):
    return [quaternion_to_json(v) for v in (g.a, g.b, g.c, g.d)]


def sl2h_from_json(data) -> SL2H:
    if len(data) != 4:
        raise UsageError("a group element is four quadruples [a, b, c, d]")
    return SL2H(*(Quaternion.from_array(v) for v in data))


def configuration_to_json(cfg: WeightedConfiguration):
    return {"weights": cfg.weights, "points": cfg.points}


def configuration_from_json(data) -> WeightedConfiguration:
    try:
        return WeightedConfiguration(np.asarray(data["points"], dtype=float),
                                     np.asarray(data["weights"], dtype=float))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad configuration payload: {exc}") from exc


def polygon_to_json(p: PolygonConfig):
    return {"r": p.weights, "edges": p.edges}


def polygon_from_json(data) -> PolygonConfig:
    try:
        return PolygonConfig(np.asarray(data["r"], dtype=float),
                             np.asarray(data["edges"], dtype=float))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad polygon payload: {exc}") from exc


def report_to_json(rep: DegeneracyReport):
    return {"span_rank": rep.span_rank, "kind": rep.kind,
            "local_model": {"trivial_factor_dim": rep.local_model.trivial_factor_dim,
                            "cone": rep.local_model.cone}}


def report_from_json(data) -> DegeneracyReport:
    lm = data["local_model"]
    return DegeneracyReport(int(data["span_rank"]), data["kind"],
                            LocalModel(int(lm["trivial_factor_dim"]), lm["cone"]))


def diagonals_to_json(d: DiagonalData):
    return {"diagonals": d.diagonals, "lengths": d.lengths}


def gt_pattern_to_json(p: GTPattern):
    return p.to_lists()


def gt_pattern_from_json(data) -> GTPattern:
    return GTPattern(tuple(np.asarray(level, dtype=float) for level in data))


def grassmann_to_json(m: GrassmannPoint):
    return quat_matrix_to_json(m.mat)


def grassmann_from_json(data) -> GrassmannPoint:
    try:
        return GrassmannPoint(quat_matrix_from_json(data))
    except ValueError as exc:
        raise UsageError(f"bad frame payload: {exc}") from exc


def complex_array_to_json(m: np.ndarray):
    m = np.asarray(m, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def complex_array_from_json(data) -> np.ndarray:
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise UsageError("complex matrices are nested [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def line_config_to_json(cfg: ComplexLineConfig):
    return {"weights": cfg.weights,
            "lines": [complex_array_to_json(l) for l in cfg.lines]}


def line_config_from_json(data) -> ComplexLineConfig:
    try:
        lines = tuple(complex_array_from_json(l) for l in data["lines"])
        return ComplexLineConfig(lines, np.asarray(data["weights"], dtype=float))
    except (KeyError, ValueError) as exc:
        raise UsageError(f"bad line configuration payload: {exc}") from exc


def stability_to_json(rep: StabilityReport):
    witnesses = []
    for wit in rep.witnesses:
        entry = dict(wit)
        entry["witness"] = complex_array_to_json(np.atleast_2d(wit["witness"]).T
                                                 if wit["witness"].ndim == 1
                                                 else wit["witness"])
        witnesses.append(entry)
    return {"stable": rep.stable, "semistable": rep.semistable,
            "witnesses": witnesses, "candidates": rep.candidates}


def su4_to_json(cfg: Su4Configuration):
    return {"weights": cfg.weights,
            "matrices": [complex_array_to_json(m) for m in cfg.matrices]}


def ell_csv(rows: list[dict], n: int) -> str:
    """CSV of diagonal-length vectors with classification columns."""
    n_diag = n - 3
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "kind", "span_rank"]
                    + [f"l{i}" for i in range(1, n_diag + 1)])
    for row in rows:
        writer.writerow([row["index"], row["kind"], row["span_rank"]]
                        + [format(v, ".17g") for v in row["lengths"]])
    return buf.getvalue()
