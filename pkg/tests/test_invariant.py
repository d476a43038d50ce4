import numpy as np
import pytest

from curvhom.errors import HypothesisError
from curvhom.field import canonical_f, parse_field
from curvhom.frames import admissible_basis, random_admissible
from curvhom.geometry import Point, nabla_curvature
from curvhom.invariant import (
    VERDICT_INCONCLUSIVE, VERDICT_NOT_HOMOGENEOUS, alpha, alpha_closed_form,
    grid_points, relative_spread, scan_alpha, scan_csv_lines,
)
from curvhom.model import recover_phi
from curvhom.sampling import random_canonical_field, random_point

THETA_SIN = parse_field("0.5*sin(x1)", 1)
FSIN = canonical_f(THETA_SIN, 3)
F0 = canonical_f(parse_field("0", 1), 3)


def test_alpha_zero_on_symmetric_case():
    rng = np.random.default_rng(5)
    for _ in range(5):
        assert alpha(F0, random_point(rng, 3)) == 0.0


def test_alpha_spot_value():
    assert abs(alpha(FSIN, Point.of(np.zeros(3))) - 2.0) < 1e-12
    assert alpha_closed_form(THETA_SIN, 0.0, 3) == 2.0


def test_alpha_closed_form_zero_cases():
    assert alpha_closed_form(parse_field("0", 1), 0.3, 4) == 0.0
    # theta''' vanishes identically for a quadratic theta
    assert alpha_closed_form(parse_field("0.25*x1^2", 1), 0.7, 3) == 0.0
    assert abs(alpha(FSIN, Point.of([np.pi / 2, 0.0, 0.0]))
               - alpha_closed_form(THETA_SIN, np.pi / 2, 3)) < 1e-15
    # at pi/2 the third derivative of sin/2 vanishes
    assert alpha_closed_form(THETA_SIN, np.pi / 2, 3) < 1e-30


def test_alpha_closed_form_hypothesis_boundary():
    theta = parse_field("-0.5*x1^2", 1)  # theta'' = -1 everywhere
    with pytest.raises(HypothesisError):
        alpha_closed_form(theta, 0.0, 3)


def test_alpha_requires_positive_definite():
    theta = parse_field("-2*x1^2", 1)
    f = canonical_f(theta, 3)
    with pytest.raises(HypothesisError):
        alpha(f, Point.of(np.zeros(3)))


def test_brute_force_matches_closed_form():
    rng = np.random.default_rng(19)
    for p in (3, 4, 5):
        theta = parse_field("0.5*sin(x1)", 1)
        f = canonical_f(theta, p)
        for x1 in rng.uniform(-1, 1, 7):
            pt = Point.of(np.concatenate([[x1], np.zeros(p - 1)]))
            bf = alpha(f, pt)
            cf = alpha_closed_form(theta, x1, p)
            assert abs(bf - cf) / max(1.0, cf) < 1e-8


def test_alpha_at_dimension_cap():
    f = canonical_f(THETA_SIN, 8)
    pt = Point.of(np.concatenate([[0.4], np.zeros(7)]))
    assert abs(alpha(f, pt) - alpha_closed_form(THETA_SIN, 0.4, 8)) < 1e-10


def test_alpha_basis_independent():
    rng = np.random.default_rng(29)
    for _ in range(10):
        f = random_canonical_field(rng, 3)
        pt = random_point(rng, 3)
        basis = admissible_basis(f, pt)
        values = [alpha(f, pt, random_admissible(basis, seed))
                  for seed in range(20)]
        assert relative_spread(values) < 1e-9


def test_alpha_matches_norm_in_recovered_form():
    # raising indices of nabla R with the form recovered from R gives the
    # same square-norm as the admissible-frame component sum
    rng = np.random.default_rng(59)
    for _ in range(5):
        f = random_canonical_field(rng, 3)
        pt = random_point(rng, 3)
        from curvhom.field import jet3
        from curvhom.geometry import curvature_gauss
        phi = recover_phi(curvature_gauss(jet3(f, pt.x).hess))
        inv_phi = np.linalg.inv(phi)
        t = nabla_curvature(f, pt)
        norm_sq = float(np.einsum(
            "abcde,fghij,af,bg,ch,di,ej->",
            t, t, inv_phi, inv_phi, inv_phi, inv_phi, inv_phi,
            optimize=True,
        ))
        assert abs(norm_sq - alpha(f, pt)) / max(1.0, norm_sq) < 1e-8


def test_grid_points_ordering():
    pts = grid_points([(0.0, 1.0, 2), (5.0, 6.0, 2)], 3)
    assert pts.shape == (4, 3)
    assert np.array_equal(pts, [[0, 5, 0], [0, 6, 0], [1, 5, 0], [1, 6, 0]])


def test_scan_verdicts():
    scan = scan_alpha(FSIN, [(-1.0, 1.0, 21)])
    assert scan.verdict == VERDICT_NOT_HOMOGENEOUS
    assert scan.summary["spread"] > 1e-6
    scan0 = scan_alpha(F0, [(-1.0, 1.0, 21)])
    assert scan0.verdict == VERDICT_INCONCLUSIVE
    assert scan0.summary["spread"] == 0.0


def test_scan_quadratic_theta_inconclusive():
    f = canonical_f(parse_field("0.25*x1^2", 1), 3)
    scan = scan_alpha(f, [(-1.0, 1.0, 11)])
    assert scan.verdict == VERDICT_INCONCLUSIVE


def test_scan_skips_hypothesis_failures():
    # theta'' = -2 sin(x1) dips below -1 for x1 > pi/6-ish
    f = canonical_f(parse_field("2*sin(x1)", 1), 3)
    scan = scan_alpha(f, [(-1.5, 1.5, 11)])
    assert len(scan.skipped) > 0
    assert len(scan.alphas) + len(scan.skipped) == 11
    assert all(np.isfinite(scan.alphas))


def test_scan_skips_domain_violations():
    # theta = log(x1+2): undefined for x1 <= -2, and 1 + theta'' <= 0 on
    # (-2, -1]; both kinds of failure are skipped, the rest evaluated
    f = canonical_f(parse_field("log(x1+2)", 1), 3)
    scan = scan_alpha(f, [(-3.0, 0.0, 7)])
    assert len(scan.skipped) >= 4
    assert len(scan.alphas) >= 2
    assert all(np.isfinite(scan.alphas))


def test_scan_csv_format():
    scan = scan_alpha(FSIN, [(-1.0, 1.0, 3)])
    lines = list(scan_csv_lines(scan, 3))
    assert lines[0] == "x1,x2,x3,alpha"
    assert len(lines) == 4
    cells = lines[1].split(",")
    assert float(cells[0]) == -1.0
    # round-trip decimal formatting
    assert repr(float(cells[3])) == cells[3]


def test_never_claims_homogeneity():
    assert "homogeneous" in VERDICT_NOT_HOMOGENEOUS
    assert VERDICT_INCONCLUSIVE.startswith("inconclusive")
