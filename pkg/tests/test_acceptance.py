"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s``.  The sweeps for criteria
2-4 are executed twice through module-scoped fixtures; the determinism
criterion (8) compares the two runs byte for byte, so no third execution is
needed.  Expected total runtime is a few minutes on a laptop-class machine.
"""
import math

import numpy as np
import pytest

from mixed_spectra import reporting
from mixed_spectra.eigensolve import (
    eigen_convergence_study,
    richardson_extrapolate,
    smallest_eigenpair,
)
from mixed_spectra.fem import assemble, grisvard_residual, interpolate
from mixed_spectra.geometry import TriangleSpec, make_polygon, make_triangle
from mixed_spectra.mesh import mesh_at_level
from mixed_spectra.verify import (
    VERDICT_CONFIRMED,
    VERDICT_CONSISTENT,
    VERDICT_VIOLATION,
    sweep_split_polygons,
    sweep_triangles,
    triangle_angle_grid,
    verify_voila_identity,
    verify_grisvard,
)

PI2 = math.pi ** 2


def _ok(criterion: str, detail: str) -> None:
    print(f"\nACCEPTANCE PASS criterion {criterion}: {detail}")


# ----------------------------------------------------------------------
# criterion 1: analytic-case accuracy (P2, levels 3..6, 1e-4 relative)
# ----------------------------------------------------------------------

ANALYTIC_CASES = [
    ("square D on x=1", [[0, 0], [1, 0], [1, 1], [0, 1]],
     ["N", "D", "N", "N"], PI2 / 4),
    ("square all-Dirichlet", [[0, 0], [1, 0], [1, 1], [0, 1]],
     ["D", "D", "D", "D"], 2 * PI2),
    ("right isosceles, D on one cathetus", [[0, 0], [1, 0], [1, 1]],
     ["N", "D", "N"], PI2 / 2),
]


def test_criterion_1_analytic_accuracy():
    errors = {}
    for name, verts, labels, exact in ANALYTIC_CASES:
        poly = make_polygon(verts, labels)
        study = eigen_convergence_study(poly, (3, 4, 5, 6), order=2)
        rich = richardson_extrapolate(study.points)
        rel = abs(rich.value - exact) / exact
        errors[name] = rel
        assert rel <= 1e-4, (name, rich.value, exact)
    _ok("1", "analytic eigenvalues matched; relative errors "
        + ", ".join(f"{k}={v:.2e}" for k, v in errors.items()))


# ----------------------------------------------------------------------
# criteria 2-4 workloads, each executed twice for the determinism check
# ----------------------------------------------------------------------

SPLIT_LEVELS = (2, 3, 4)
COROLLARY_LEVELS = (2, 3, 4)
RIGHT_LEVELS = (3, 4, 5, 6)


@pytest.fixture(scope="module")
def split_suite_runs():
    runs = [sweep_split_polygons(100, seed=42, levels=SPLIT_LEVELS)
            for _ in range(2)]
    return runs, [reporting.sweep_to_csv(r) for r in runs]


@pytest.fixture(scope="module")
def corollary_sweep_runs():
    grid = triangle_angle_grid(20, 20)
    out = {}
    csvs = {}
    for task in ("corollary-iii", "corollary-i", "corollary-ii"):
        if task == "corollary-iii":
            points = grid
        else:
            # (i)/(ii) carry acceptance weight only where their angle
            # hypothesis holds: both angles enclosing the side are acute,
            # which for S and M alike means the triangle is acute
            points = [
                (a, b) for a, b in grid
                if a + b < math.pi - 0.1
                and max(a, b, math.pi - a - b) < math.pi / 2 - 1e-9
            ]
        runs = [sweep_triangles(task, points, levels=COROLLARY_LEVELS)
                for _ in range(2)]
        out[task] = runs
        csvs[task] = [reporting.sweep_to_csv(r) for r in runs]
    return out, csvs


@pytest.fixture(scope="module")
def right_triangle_runs():
    betas = [math.atan(r) for r in np.linspace(1.0, 10.0, 50)]
    runs = [sweep_triangles("right-triangle", betas, levels=RIGHT_LEVELS)
            for _ in range(2)]
    return runs, [reporting.sweep_to_csv(r) for r in runs]


def test_criterion_2_split_property_suite(split_suite_runs):
    (result, _), _ = split_suite_runs
    agg = result.aggregates()
    assert agg["n_rows"] == 100
    assert agg["n_error"] == 0
    assert agg["n_hypothesis_met"] == 100
    verdicts = agg["verdicts"]
    assert verdicts[VERDICT_VIOLATION] == 0
    assert verdicts[VERDICT_CONFIRMED] >= 90
    assert verdicts[VERDICT_CONFIRMED] + verdicts[VERDICT_CONSISTENT] == 100
    _ok("2", f"100 random quadrilaterals/pentagons: "
        f"{verdicts[VERDICT_CONFIRMED]} ConfirmedWithMargin, "
        f"{verdicts[VERDICT_CONSISTENT]} ConsistentWithinError, 0 Violations "
        f"(min margin {agg['min_margin_hypothesis_met']:.4f})")


def test_criterion_3_corollary_sweep(corollary_sweep_runs):
    runs, _ = corollary_sweep_runs
    agg3 = runs["corollary-iii"][0].aggregates()
    assert agg3["n_rows"] == 400
    assert agg3["verdicts"][VERDICT_VIOLATION] == 0
    assert agg3["n_error"] == 0
    details = [f"(iii): {agg3['n_rows'] - agg3['n_skipped']} checked, 0 Violations"]
    for task in ("corollary-i", "corollary-ii"):
        agg = runs[task][0].aggregates()
        assert agg["verdicts"][VERDICT_VIOLATION] == 0
        assert agg["n_error"] == 0
        # every point was pre-filtered to satisfy the angle hypothesis
        assert agg["n_hypothesis_met"] == agg["n_rows"] - agg["n_skipped"]
        details.append(f"({task.split('-')[1]}): {agg['n_hypothesis_met']} "
                       "hypothesis-met points, 0 Violations")
    _ok("3", "20x20 angle grid; " + "; ".join(details))


def test_criterion_4_right_triangle_sweep(right_triangle_runs):
    (result, _), _ = right_triangle_runs
    agg = result.aggregates()
    assert agg["n_rows"] == 100  # 50 triangles x (S, M) reports
    assert agg["verdicts"][VERDICT_VIOLATION] == 0
    assert agg["n_error"] == 0

    # leg ratio 1 (the right isosceles triangle) is the first sweep point:
    # the S- and M-configurations are congruent and, with the hypotenuse
    # normalized to 1, carry eigenvalue 2 * (pi^2 / 2) = pi^2
    iso = [r.report for r in result.rows if r.index == 0]
    lam_m, lam_s = (rep.lhs.value for rep in iso)  # rows sorted sub M, S
    assert abs(lam_s - lam_m) / lam_s <= 1e-9
    assert abs(lam_s - PI2) / PI2 <= 1e-4
    _ok("4", f"50 right triangles (leg ratio 1..10): 0 Violations; isosceles "
        f"case lambda_S == lambda_M to {abs(lam_s - lam_m) / lam_s:.1e} and "
        f"matches pi^2 to {abs(lam_s - PI2) / PI2:.1e} (hypotenuse-normalized)")


# ----------------------------------------------------------------------
# criteria 5-6: proof-mechanics trends on five representative domains
# ----------------------------------------------------------------------

TREND_LEVELS = (3, 4, 5, 6)


def _trend_domains():
    eq = make_triangle(TriangleSpec(
        angles=(math.pi / 3, math.pi / 3), dirichlet=("M", "L")))
    iso = make_polygon([[0, 0], [1, 0], [1, 1]], ["D", "D", "N"])
    sc = make_triangle(TriangleSpec(angles=(0.6, 0.7), dirichlet=("M", "S")))
    trap = make_polygon([[0, 0], [1, 0], [0.75, 0.5], [0.2, 0.5]],
                        ["N", "D", "D", "D"])
    quad = make_polygon([[0, 0], [1, 0], [0.7, 0.65], [0.25, 0.55]],
                        ["N", "D", "D", "D"])
    return [
        ("equilateral", eq, 0),
        ("right-isosceles-hyp", iso, 2),
        ("scalene-0.6-0.7", sc, TriangleSpec(angles=(0.6, 0.7)).side_roles["L"]),
        ("trapezoid", trap, 0),
        ("quadrilateral", quad, 0),
    ]


@pytest.fixture(scope="module")
def voila_reports():
    return [(name, verify_voila_identity(p, side, levels=TREND_LEVELS))
            for name, p, side in _trend_domains()]


@pytest.fixture(scope="module")
def grisvard_reports():
    return [(name, verify_grisvard(p, side, levels=TREND_LEVELS))
            for name, p, side in _trend_domains()]


def test_criterion_5_voila_trend(voila_reports):
    gaps_summary = []
    for name, rep in voila_reports:
        assert rep.hypothesis_met, name
        # discrete admissibility chain, exact up to 1e-9, at every level
        for row in rep.rows:
            assert row.lam_complement <= row.quotient + 1e-9, (name, row.level)
        gaps = rep.gaps()
        assert gaps[-1] < 0.05, (name, gaps)
        assert gaps[-3] > gaps[-2] > gaps[-1], (name, gaps)
        gaps_summary.append(f"{name}={gaps[-1]:.3%}")
    _ok("5", "chain lambda^c(h) <= R(h) exact at every level on 5 domains; "
        "final |R - lambda|/lambda: " + ", ".join(gaps_summary))


def test_criterion_6_grisvard_residual(grisvard_reports):
    factors = []
    for name, rep in grisvard_reports:
        res = rep.residuals()
        assert res[-1] > 0
        factor = res[0] / res[-1]
        assert factor >= 2.0, (name, res)
        factors.append(f"{name}={factor:.1f}x")

    # negative controls: both violate the boundary hypotheses and their
    # residuals are exactly 1.5 at every level (interpolation is exact)
    square = make_polygon([[0, 0], [1, 0], [1, 1], [0, 1]], ["D", "D", "D", "D"])
    for fn in (lambda x, y: x ** 2 - y ** 2, lambda x, y: x * y):
        for level in TREND_LEVELS:
            u = interpolate(fn, mesh_at_level(square, level), 2)
            assert grisvard_residual(u) > 0.1
    _ok("6", "residual shrank by " + ", ".join(factors)
        + " from level 3 to 6; negative controls stayed above 0.1")


# ----------------------------------------------------------------------
# criterion 7: discrete monotonicity in the Dirichlet set
# ----------------------------------------------------------------------

def test_criterion_7_gamma_monotonicity():
    square = make_polygon([[0, 0], [1, 0], [1, 1], [0, 1]], ["D", "N", "N", "N"])
    m = mesh_at_level(square, 3)

    def lam(sides):
        labels = ["D" if i in sides else "N" for i in range(4)]
        return smallest_eigenpair(assemble(m, square.with_labels(labels), 2)).eigenvalue

    subsets = [frozenset(s) for s in (
        {0}, {1}, {2}, {3}, {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
        {0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}, {0, 1, 2, 3})]
    pairs = []
    for small in subsets:
        for large in subsets:
            if small < large:
                pairs.append((small, large))
        if len(pairs) >= 20:
            break
    pairs = pairs[:20]
    cache = {}
    worst = -math.inf
    for small, large in pairs:
        for s in (small, large):
            if s not in cache:
                cache[s] = lam(s)
        assert cache[small] <= cache[large] + 1e-12, (small, large)
        worst = max(worst, cache[small] - cache[large])
    _ok("7", f"20 nested Dirichlet pairs on a fixed mesh: "
        f"max lambda(small) - lambda(large) = {worst:.3e} <= 1e-12")


# ----------------------------------------------------------------------
# criterion 8: bitwise-identical CSV reports across reruns of 2-4
# ----------------------------------------------------------------------

def test_criterion_8_determinism(split_suite_runs, corollary_sweep_runs,
                                 right_triangle_runs):
    _, split_csvs = split_suite_runs
    assert split_csvs[0] == split_csvs[1]
    _, corollary_csvs = corollary_sweep_runs
    for task, (c1, c2) in corollary_csvs.items():
        assert c1 == c2, task
    _, right_csvs = right_triangle_runs
    assert right_csvs[0] == right_csvs[1]
    _ok("8", "criteria 2-4 reran bitwise-identically (CSV reports compared "
        "byte for byte; reports carry no timestamps)")
