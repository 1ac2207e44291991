"""Command-line front end.

Subcommands: sample, classify, normalize, gt, stability, bend, report,
verify.  Every JSON artifact embeds the command, the seed, and the
tolerances that produced it, and identical invocations write
byte-identical artifacts.  Exit codes: 2 for usage problems, 3 for
numerical non-convergence, 4 for violated invariants.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import barycenter as bc
from . import bridge, gt, polygons as pg
from . import serialization as ser
from . import verify as vfy
from .errors import InvariantViolation, NonConvergenceError, UsageError


def _threads() -> int:
    raw = os.environ.get("QUATPOLY_THREADS", "")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise UsageError(f"QUATPOLY_THREADS must be an integer: {raw!r}") from exc
    return min(8, os.cpu_count() or 1)


def _parallel_map(fn, items):
    """Index-ordered map over independent items, fanned out on threads."""
    workers = _threads()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit(args, text: str) -> None:
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise UsageError(f"input file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from exc


def _tolerances(args) -> dict:
    return {"closure": args.tol_closure, "rank": args.tol_rank,
            "solver": args.tol_solver}


def _envelope(args, command: str) -> dict:
    return {"command": command, "seed": args.seed,
            "tolerances": _tolerances(args)}


def _parse_weights(spec: str, n: int) -> np.ndarray:
    if spec == "equal":
        return np.ones(n)
    try:
        vals = np.array([float(v) for v in spec.split(",")])
    except ValueError as exc:
        raise UsageError(f"bad weight list: {spec!r}") from exc
    if vals.size != n:
        raise UsageError(f"expected {n} weights, got {vals.size}")
    return vals


# -- subcommands -------------------------------------------------------


def cmd_sample(args) -> int:
    r = _parse_weights(args.weights, args.n)
    seeds = np.random.SeedSequence(args.seed).spawn(args.count)

    def one(item):
        idx, seq = item
        p = pg.sample_closed(r, np.random.default_rng(seq),
                             tol=args.tol_closure, dim=args.dim)
        entry = ser.polygon_to_json(p)
        entry["index"] = idx
        entry["closure_residual"] = p.closure_residual()
        return entry

    polys = _parallel_map(one, list(enumerate(seeds)))
    artifact = _envelope(args, "sample")
    artifact.update({"n": args.n, "count": args.count, "dim": args.dim,
                     "r": r, "polygons": polys})
    _emit(args, ser.dumps(artifact))
    return 0


def _load_polygons(payload):
    if "polygons" in payload:
        return [ser.polygon_from_json(entry) for entry in payload["polygons"]]
    return [ser.polygon_from_json(payload)]


def cmd_classify(args) -> int:
    polys = _load_polygons(_read_json(args.input))
    reports = [pg.classify(p, rank_tol=args.tol_rank) for p in polys]
    artifact = _envelope(args, "classify")
    counts: dict[str, int] = {}
    for rep in reports:
        counts[rep.kind] = counts.get(rep.kind, 0) + 1
    artifact["counts"] = counts
    artifact["residuals"] = {"closure": [p.closure_residual() for p in polys]}
    if len(reports) == 1:
        artifact["report"] = ser.report_to_json(reports[0])
    else:
        artifact["reports"] = [ser.report_to_json(rep) for rep in reports]
    _emit(args, ser.dumps(artifact))
    return 0


def cmd_normalize(args) -> int:
    cfg = ser.configuration_from_json(_read_json(args.input))
    g, centered = bc.normalize_configuration(cfg, tol=args.tol_solver)
    artifact = _envelope(args, "normalize")
    artifact.update({
        "element": ser.sl2h_to_json(g),
        "configuration": ser.configuration_to_json(centered),
        "residuals": {
            "center_of_mass": float(np.linalg.norm(bc.center_of_mass(centered))),
            "input_center_of_mass": float(np.linalg.norm(bc.center_of_mass(cfg)))}})
    _emit(args, ser.dumps(artifact))
    return 0


def cmd_gt(args) -> int:
    payload = _read_json(args.input)
    artifact = _envelope(args, "gt")
    if "matrix" in payload:
        mat = ser.quat_matrix_from_json(payload["matrix"])
        pattern = gt.gt_pattern(mat)
        artifact["pattern"] = ser.gt_pattern_to_json(pattern)
    elif "frame" in payload:
        frame = ser.grassmann_from_json(payload["frame"])
        spectra = gt.partial_gram_spectra(frame)
        artifact["partial_spectra"] = spectra
        artifact["tri_momentum"] = gt.tri_momentum(frame)
        artifact["pattern"] = ser.gt_pattern_to_json(
            gt.gt_pattern(frame.mat @ frame.mat.H))
    else:
        raise UsageError('gt input needs a "matrix" or a "frame" key')
    _emit(args, ser.dumps(artifact))
    return 0


def cmd_stability(args) -> int:
    cfg = ser.line_config_from_json(_read_json(args.input))
    rep = bridge.line_stability(cfg)
    artifact = _envelope(args, "stability")
    artifact.update(ser.stability_to_json(rep))
    _emit(args, ser.dumps(artifact))
    return 0


def cmd_bend(args) -> int:
    polys = _load_polygons(_read_json(args.input))
    if len(polys) != 1:
        raise UsageError("bend expects a single polygon, not an ensemble")
    p = polys[0]
    diag = pg.diagonal_lengths(p)
    if not 1 <= args.diagonal <= len(diag.lengths):
        raise UsageError(f"diagonal index must be in 1..{len(diag.lengths)}")
    rot = pg.rotation_fixing_axis(diag.diagonals[args.diagonal - 1],
                                  np.random.default_rng(args.seed))
    bent = pg.bend(p, args.diagonal, rot)
    artifact = _envelope(args, "bend")
    artifact.update({
        "diagonal": args.diagonal,
        "polygon": ser.polygon_to_json(bent),
        "residuals": {
            "closure": bent.closure_residual(),
            "length_drift": float(np.abs(
                pg.diagonal_lengths(bent).lengths - diag.lengths).max())}})
    _emit(args, ser.dumps(artifact))
    return 0


def cmd_report(args) -> int:
    payload = _read_json(args.input)
    polys = _load_polygons(payload)
    rows = []
    counts: dict[str, int] = {}
    for idx, p in enumerate(polys):
        rep = pg.classify(p, rank_tol=args.tol_rank)
        counts[rep.kind] = counts.get(rep.kind, 0) + 1
        rows.append({"index": idx, "kind": rep.kind, "span_rank": rep.span_rank,
                     "lengths": pg.diagonal_lengths(p).lengths})
    if args.format == "csv":
        _emit(args, ser.ell_csv(rows, polys[0].size))
        sys.stderr.write(ser.dumps({"counts": counts}) + "\n")
    else:
        artifact = _envelope(args, "report")
        artifact.update({"counts": counts, "rows": [
            {"index": row["index"], "kind": row["kind"],
             "span_rank": row["span_rank"], "lengths": row["lengths"]}
            for row in rows]})
        _emit(args, ser.dumps(artifact))
    return 0


def cmd_verify(args) -> int:
    results = vfy.run_all(seed=args.seed,
                          inject_non_hermitian=args.inject_non_hermitian)
    lines = [res.line() for res in results]
    _emit(args, "\n".join(lines))
    if not all(res.passed for res in results):
        failed = ", ".join(res.name for res in results if not res.passed)
        sys.stderr.write(f"failed invariants: {failed}\n")
        return 4
    return 0


# -- argument plumbing -------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quatpoly",
        description="Closed polygons in R^5 and their quaternionic models.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol-closure", type=float, default=pg.CLOSURE_TOL)
        p.add_argument("--tol-rank", type=float, default=pg.RANK_TOL)
        p.add_argument("--tol-solver", type=float, default=1e-9)
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", default=None)

    p = sub.add_parser("sample", help="sample an ensemble of closed polygons")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--weights", default="equal",
                   help='"equal" or a comma-separated list of side lengths')
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--dim", type=int, default=5,
                   help="restrict edges to the first dim coordinates")
    common(p)
    p.set_defaults(fn=cmd_sample)

    p = sub.add_parser("classify", help="degeneracy report for polygons")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(fn=cmd_classify)

    p = sub.add_parser("normalize",
                       help="move a configuration to zero center of mass")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(fn=cmd_normalize)

    p = sub.add_parser("gt", help="corner eigenvalue pattern / frame spectra")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(fn=cmd_gt)

    p = sub.add_parser("stability", help="GIT stability of weighted lines")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(fn=cmd_stability)

    p = sub.add_parser("bend", help="bend a polygon about a diagonal")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--diagonal", type=int, required=True)
    common(p)
    p.set_defaults(fn=cmd_bend)

    p = sub.add_parser("report", help="ensemble CSV of diagonal lengths")
    p.add_argument("--in", dest="input", required=True)
    common(p)
    p.set_defaults(fn=cmd_report)

    p = sub.add_parser("verify", help="run the invariant battery")
    p.add_argument("--inject-non-hermitian", action="store_true")
    common(p)
    p.set_defaults(fn=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except NonConvergenceError as exc:
        sys.stderr.write(f"non-convergence: {exc}\n")
        return 3
    except InvariantViolation as exc:
        sys.stderr.write(f"invariant violation ({type(exc).__name__}): {exc}\n")
        return 4


if __name__ == "__main__":
    sys.exit(main())
