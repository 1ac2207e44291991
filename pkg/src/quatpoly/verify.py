"""Property battery behind `quatpoly verify` and the acceptance tests.

Each check draws its own seeded generator, exercises one family of
invariants at the advertised sample counts, and reports the worst
measured residual against the stated threshold.  Checks are pure
functions of the seed, so the battery is reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import barycenter as bc
from . import bridge, gt, moebius as mb, polygons as pg
from .errors import PairingError
from .quaternions import (Quaternion, QuatMatrix, dieudonne_det, qconj_array,
                          qmul_array, qnorm_array, random_hermitian,
                          random_quat_matrix)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: measured {self.measured:.3e}"
                f" vs threshold {self.threshold:.3e}"
                + (f" ({self.detail})" if self.detail else ""))


def check_algebra_suite(seed=0, cases: int = 1000) -> CheckResult:
    """Associativity, norm multiplicativity, embedding homomorphism,
    determinant multiplicativity."""
    rng = np.random.default_rng(seed)
    t0 = time.perf_counter()
    p, q, r = (rng.normal(size=(cases, 4)) for _ in range(3))
    assoc = np.abs(qmul_array(qmul_array(p, q), r)
                   - qmul_array(p, qmul_array(q, r))).max()
    norm_mult = np.abs(qnorm_array(qmul_array(p, q))
                       - qnorm_array(p) * qnorm_array(q)).max()
    conj_anti = np.abs(qconj_array(qmul_array(p, q))
                       - qmul_array(qconj_array(q), qconj_array(p))).max()
    hom = 0.0
    det_mult = 0.0
    for _ in range(cases):
        a = random_quat_matrix(2, 2, rng)
        b = random_quat_matrix(2, 2, rng)
        hom = max(hom, float(np.abs((a @ b).to_complex()
                                    - a.to_complex() @ b.to_complex()).max()))
        da, db, dab = dieudonne_det(a), dieudonne_det(b), dieudonne_det(a @ b)
        det_mult = max(det_mult, abs(dab - da * db) / max(1.0, da * db))
    elapsed = time.perf_counter() - t0
    worst = max(assoc, norm_mult, conj_anti, hom, det_mult)
    return CheckResult("algebra suite", worst < 1e-10 and elapsed < 5.0, worst,
                       1e-10, f"{cases} cases in {elapsed:.2f}s")


def check_boundary_extension(seed=1, cases: int = 500) -> CheckResult:
    """Interior action at height 1e-6 vs the boundary transformation,
    and the closed-form boundary limit vs the same."""
    rng = np.random.default_rng(seed)
    worst_near = 0.0
    worst_exact = 0.0
    for _ in range(cases):
        g = mb.random_sl2h(rng, 0.8)
        v = Quaternion.from_array(rng.normal(size=4))
        image = mb.lft_chart(g, v)
        if image is mb.INFINITY:
            continue
        near = mb.mobius_halfspace(g, np.array([v.w, v.x, v.y, v.z, 1e-6]))
        worst_near = max(worst_near, float(np.linalg.norm(near[:4] - image.to_array())))
        exact = mb.boundary_limit_chart(g, v)
        worst_exact = max(worst_exact, abs(exact - image))
    ok = worst_near < 1e-4 and worst_exact < 1e-10
    return CheckResult("boundary extension", ok, max(worst_near, worst_exact),
                       1e-4, f"near {worst_near:.2e}, exact {worst_exact:.2e}")


def check_barycenter(seed=2, cases: int = 200) -> CheckResult:
    """Solver residual and speed, equivariance, normalization, and the
    symmetric fixture."""
    rng = np.random.default_rng(seed)
    worst_res, worst_ms = 0.0, 0.0
    for _ in range(cases):
        cfg = bc.random_stable_configuration(int(rng.integers(3, 51)), rng)
        t0 = time.perf_counter()
        result = bc.conformal_barycenter(cfg, tol=1e-10)
        worst_ms = max(worst_ms, (time.perf_counter() - t0) * 1e3)
        worst_res = max(worst_res, result.residual)
    worst_eq = 0.0
    worst_norm = 0.0
    for _ in range(cases):
        cfg = bc.random_stable_configuration(int(rng.integers(3, 25)), rng)
        g = mb.random_sl2h(rng, 0.8)
        pushed = bc.pushforward(g, cfg)
        b1 = bc.conformal_barycenter(cfg, tol=1e-12).barycenter
        b2 = bc.conformal_barycenter(pushed, tol=1e-12).barycenter
        worst_eq = max(worst_eq, float(np.linalg.norm(mb.mobius_ball(g, b1) - b2)))
        _, centered = bc.normalize_configuration(pushed, tol=1e-9)
        worst_norm = max(worst_norm, float(np.linalg.norm(bc.center_of_mass(centered))))
    cross = bc.WeightedConfiguration(np.vstack([np.eye(5), -np.eye(5)]),
                                     np.full(10, 0.2))
    fixture = float(np.linalg.norm(bc.conformal_barycenter(cross).barycenter))
    ok = (worst_res < 1e-10 and worst_ms < 50.0 and worst_eq < 1e-7
          and worst_norm < 1e-9 and fixture < 1e-12)
    return CheckResult(
        "barycenter", ok, worst_eq, 1e-7,
        f"residual {worst_res:.2e}, {worst_ms:.1f}ms, |C| {worst_norm:.2e},"
        f" fixture {fixture:.2e}")


def check_dimensions(seed=3) -> CheckResult:
    """Closure-map rank 5, stratum dimensions, angle-chart counts."""
    rng = np.random.default_rng(seed)
    ok = True
    detail = []
    for n in (5, 6, 7):
        p = pg.sample_closed(np.ones(n), rng)
        rank = pg.closure_jacobian_rank(p)
        ok &= rank == 5
        detail.append(f"n={n} rank {rank}")
        counts = pg.angle_chart_dims(n)
        ok &= counts["angles"] == 3 * n - 12
        ok &= counts["total"] == 4 * n - 15
        planar = _planar_polygon(n, rng)
        rep3 = pg.classify(planar)
        ok &= rep3.kind == "type3" and rep3.local_model.trivial_factor_dim == n - 3
        spatial = _rank3_polygon(planar, rng)
        rep2 = pg.classify(spatial)
        ok &= rep2.kind == "type2" and rep2.local_model.trivial_factor_dim == 2 * n - 6
    return CheckResult("dimension checks", bool(ok), 0.0 if ok else 1.0, 0.5,
                       ", ".join(detail))


def _planar_polygon(n: int, rng) -> pg.PolygonConfig:
    return pg.sample_closed(np.ones(n), rng, dim=2)


def _rank3_polygon(planar: pg.PolygonConfig, rng) -> pg.PolygonConfig:
    """Bend a planar polygon inside R^3 until the edges span rank 3."""
    d = pg.diagonal_lengths(planar)
    for attempt in range(20):
        axis = d.diagonals[0]
        a3 = np.zeros(3)
        a3[:] = axis[:3]
        a3 /= np.linalg.norm(a3)
        seed_vec = np.zeros(3)
        seed_vec[int(np.argmin(np.abs(a3)))] = 1.0
        b1 = seed_vec - (seed_vec @ a3) * a3
        b1 /= np.linalg.norm(b1)
        b2 = np.cross(a3, b1)
        theta = rng.uniform(0.3, 2.8)
        r3 = (np.eye(3) + np.sin(theta) * (np.outer(b2, b1) - np.outer(b1, b2))
              + (np.cos(theta) - 1.0) * (np.outer(b1, b1) + np.outer(b2, b2)))
        rot = np.eye(5)
        rot[:3, :3] = r3
        bent = pg.bend(planar, 1, rot)
        if pg.span_rank(bent) == 3:
            return bent
    raise RuntimeError("could not produce a rank-3 polygon")


def check_four_gons(seed=4, cases: int = 500) -> CheckResult:
    """Every closed 4-gon spans at most 3 dimensions."""
    rng = np.random.default_rng(seed)
    worst = 0
    for k in range(cases):
        r = rng.uniform(0.7, 1.3, size=4)  # always admissible
        p = pg.sample_closed(r, rng)
        worst = max(worst, pg.span_rank(p))
    return CheckResult("4-gon degeneracy", worst <= 3, float(worst), 3.0,
                       f"{cases} samples, max rank {worst}")


def check_closure_stability(seed=5, cases: int = 100) -> CheckResult:
    """The closing condition implies the strict stability inequality."""
    rng = np.random.default_rng(seed)
    all_stable = True
    for _ in range(cases):
        n = int(rng.integers(4, 11))
        p = pg.sample_closed(rng.uniform(0.5, 1.5, size=n) if n > 4 else np.ones(4),
                             rng)
        all_stable &= bc.is_stable(pg.polygon_to_configuration(p))
    return CheckResult("closure implies stability", all_stable,
                       0.0 if all_stable else 1.0, 0.5, f"{cases} polygons")


def check_gt_interlacing(seed=6, cases: int = 500) -> CheckResult:
    """Interlacing across corner patterns and eigenvalue doubling."""
    rng = np.random.default_rng(seed)
    violations = 0
    worst_gap = 0.0
    for n in range(2, 7):
        for _ in range(cases):
            a = random_hermitian(n, rng)
            ev = gt.jacobi_eigenvalues(a.to_complex())
            gap = np.abs(ev[0::2] - ev[1::2]).max() / max(1.0, np.abs(ev).max())
            worst_gap = max(worst_gap, float(gap))
            try:
                gt.gt_pattern(a, tol=1e-8)
            except gt.InterlacingError:
                violations += 1
    ok = violations == 0 and worst_gap < 1e-9
    return CheckResult("gt interlacing", ok, worst_gap, 1e-9,
                       f"{cases} matrices per size 2..6, {violations} violations")


def check_grassmann_link(seed=7, cases: int = 100) -> CheckResult:
    """Truncated-Gram spectra match row-Gram spectra and diagonal lengths."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(4, 8))
        frame = gt.grassmann_on_level_set(gt.random_grassmann_point(n, rng))
        spectra = gt.partial_gram_spectra(frame, check_tol=1e-9)
        poly = gt.polygon_from_grassmann(frame)
        partial = np.array([
            np.linalg.norm((poly.weights[:i, None] * poly.edges[:i]).sum(axis=0))
            for i in range(1, n + 1)])
        worst = max(worst, float(np.abs(0.5 * (spectra[:, 0] - spectra[:, 1])
                                        - partial).max()))
    return CheckResult("grassmann-polygon link", worst < 1e-9, worst, 1e-9,
                       f"{cases} frames")


def check_psi_theta(seed=8, cases: int = 100) -> CheckResult:
    """Zero-sum, doubled spectra, and involution-fixedness of the image."""
    rng = np.random.default_rng(seed)
    worst_sum, worst_spec, worst_theta = 0.0, 0.0, 0.0
    for _ in range(cases):
        n = int(rng.integers(4, 9))
        p = pg.sample_closed(rng.uniform(0.6, 1.4, size=n) if n > 4 else np.ones(4),
                             rng)
        su = bridge.psi_map(p)
        worst_sum = max(worst_sum, su.sum_residual())
        target = np.stack([np.array([r, r, -r, -r]) for r in su.weights])
        worst_spec = max(worst_spec, float(np.abs(su.spectra() - target).max()))
        for m in su.matrices:
            worst_theta = max(worst_theta, float(
                np.linalg.norm(bridge.theta_matrix(m) - m)))
    ok = worst_sum < 1e-9 and worst_spec < 1e-8 and worst_theta < 1e-12
    return CheckResult("psi and theta", ok, max(worst_sum, worst_theta), 1e-9,
                       f"sum {worst_sum:.2e}, spec {worst_spec:.2e},"
                       f" theta {worst_theta:.2e}")


def check_invariant_ring(seed=9, cases: int = 1000, bends: int = 100) -> CheckResult:
    """Quadratic invariant identities, bend preservation, planar folding."""
    rng = np.random.default_rng(seed)
    x = rng.normal(size=(cases, 2))
    y = rng.normal(size=(cases, 2))
    theta = rng.uniform(0, 2 * np.pi, size=cases)
    worst_rel = 0.0
    worst_inv = 0.0
    for k in range(cases):
        p1, p2, p3, p4 = pg.so2_invariants(x[k], y[k])
        worst_rel = max(worst_rel, abs(p1 * p2 - p3 * p3 - p4 * p4))
        c, s = np.cos(theta[k]), np.sin(theta[k])
        rot = np.array([[c, -s], [s, c]])
        q = pg.so2_invariants(rot @ x[k], rot.T @ y[k])
        worst_inv = max(worst_inv, max(abs(a - b) for a, b in zip((p1, p2, p3, p4), q)))
    worst_bend = 0.0
    for _ in range(bends):
        n = int(rng.integers(5, 9))
        p = pg.sample_closed(rng.uniform(0.7, 1.3, size=n), rng)
        ell = pg.diagonal_lengths(p).lengths
        i = int(rng.integers(1, n - 2))
        rot = pg.rotation_fixing_axis(pg.diagonal_lengths(p).diagonals[i - 1], rng)
        bent = pg.bend(p, i, rot)
        worst_bend = max(worst_bend, float(
            np.abs(pg.diagonal_lengths(bent).lengths - ell).max()))
        worst_bend = max(worst_bend, bent.closure_residual())
    worst_fold = 0.0
    rank_ok = True
    for _ in range(20):
        n = int(rng.integers(5, 9))
        p = pg.sample_closed(rng.uniform(0.7, 1.3, size=n), rng)
        folded = pg.canonical_planar(p)
        worst_fold = max(worst_fold, float(
            np.abs(pg.diagonal_lengths(folded).lengths
                   - pg.diagonal_lengths(p).lengths).max()))
        rank_ok &= pg.span_rank(folded) <= 2
    ok = (worst_rel < 1e-12 and worst_inv < 1e-12 and worst_bend < 1e-10
          and worst_fold < 1e-10 and rank_ok)
    return CheckResult("invariant ring and bending", ok,
                       max(worst_rel, worst_bend, worst_fold), 1e-10,
                       f"identity {worst_rel:.2e}, bends {worst_bend:.2e},"
                       f" folds {worst_fold:.2e}")


def _stability_fixtures(rng):
    def rand_line():
        return rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))

    generic = bridge.ComplexLineConfig(tuple(rand_line() for _ in range(5)),
                                       np.full(5, 0.4))
    pt = rng.normal(size=4) + 1j * rng.normal(size=4)
    through = [np.column_stack([pt, rng.normal(size=4) + 1j * rng.normal(size=4)])
               for _ in range(3)]
    unstable = bridge.ComplexLineConfig(
        tuple(through + [rand_line(), rand_line()]),
        np.array([1.1 / 3] * 3 + [0.45, 0.45]))
    fixed = rand_line()
    meeting = []
    for _ in range(5):
        t = rng.normal() + 1j * rng.normal()
        meeting.append(np.column_stack([
            fixed[:, 0] + t * fixed[:, 1],
            rng.normal(size=4) + 1j * rng.normal(size=4)]))
    semistable = bridge.ComplexLineConfig(tuple(meeting), np.full(5, 0.4))
    return generic, unstable, semistable


def check_line_stability(seed=10, basis_changes: int = 50) -> CheckResult:
    """Fixture verdicts plus invariance under changes of basis."""
    rng = np.random.default_rng(seed)
    generic, unstable, semistable = _stability_fixtures(rng)
    rep_g = bridge.line_stability(generic)
    rep_u = bridge.line_stability(unstable)
    rep_s = bridge.line_stability(semistable)
    fixtures_ok = (rep_g.stable and rep_g.semistable
                   and not rep_u.stable and not rep_u.semistable
                   and not rep_s.stable and rep_s.semistable)
    invariant = True
    for k in range(basis_changes):
        g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        cfg = (generic, unstable, semistable)[k % 3]
        expect = (rep_g, rep_u, rep_s)[k % 3]
        got = bridge.line_stability(cfg.transform(g))
        invariant &= (got.stable == expect.stable
                      and got.semistable == expect.semistable)
    ok = fixtures_ok and invariant
    return CheckResult("line stability", bool(ok), 0.0 if ok else 1.0, 0.5,
                       f"fixtures {'ok' if fixtures_ok else 'WRONG'},"
                       f" {basis_changes} basis changes")


def check_pairing_guard() -> CheckResult:
    """Negative check: a non-Hermitian matrix must trip the pairing guard."""
    skew = QuatMatrix.from_entries([[0.0, Quaternion(0, 1e-4, 0, 0)],
                                    [Quaternion(0, 1e-4, 0, 0), 0.0]])
    bad = QuatMatrix.from_entries([[2.0, Quaternion(0.5, 0.1, -0.2, 0.3)],
                                   [Quaternion(0.5, -0.1, 0.2, -0.3), 1.0]]) + skew
    try:
        gt.quat_hermitian_eigenvalues(bad, herm_tol=1e-3)
    except PairingError as exc:
        return CheckResult("pairing guard (injected)", False, 1.0, 0.5, str(exc))
    return CheckResult("pairing guard (injected)", False, 0.0, 0.5,
                       "non-Hermitian input was not detected")


ALL_CHECKS = [
    check_algebra_suite,
    check_boundary_extension,
    check_barycenter,
    check_dimensions,
    check_four_gons,
    check_closure_stability,
    check_gt_interlacing,
    check_grassmann_link,
    check_psi_theta,
    check_invariant_ring,
    check_line_stability,
]


def run_all(seed: int = 0, inject_non_hermitian: bool = False) -> list[CheckResult]:
    results = [check(seed + i) for i, check in enumerate(ALL_CHECKS)]
    if inject_non_hermitian:
        results.append(check_pairing_guard())
    return results
