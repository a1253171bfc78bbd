import math

import numpy as np
import pytest

from mixed_spectra.errors import ConfigError
from mixed_spectra.fem import assemble, derivative_test_function, p1_to_p2, rayleigh_quotient
from mixed_spectra.geometry import TriangleSpec, make_polygon, make_triangle
from mixed_spectra.mesh import mesh_at_level
from mixed_spectra.eigensolve import smallest_eigenpair
from mixed_spectra.verify import (
    VERDICT_CONFIRMED,
    VERDICT_CONSISTENT,
    VERDICT_VIOLATION,
    SweepResult,
    SweepRow,
    _verdict,
    sweep_split_polygons,
    sweep_triangles,
    triangle_angle_grid,
    verify_grisvard,
    verify_right_triangle,
    verify_split,
    verify_triangle_corollary,
    verify_voila_identity,
)

FAST = dict(levels=(2, 3, 4), order=2)

EQUILATERAL = make_triangle(TriangleSpec(
    angles=(math.pi / 3, math.pi / 3), dirichlet=("M", "L")))
SQUARE = make_polygon([[0, 0], [1, 0], [1, 1], [0, 1]], ["N", "D", "D", "D"])
PENT_VERTS = [[0, 0], [1, 0], [0.9, 0.5], [0.5, 0.8], [0.1, 0.5]]
PENT = make_polygon(PENT_VERTS, ["N", "D", "D", "D", "D"])


class TestVerdictRule:
    def test_confirmed_needs_margin_beyond_budget(self):
        assert _verdict(1.0, 0.1, 1e-8) == VERDICT_CONFIRMED
        assert _verdict(0.10000001, 0.1, 1e-8) == VERDICT_CONSISTENT
        assert _verdict(0.2, 0.1, 1e-8) == VERDICT_CONFIRMED

    def test_violation_needs_negative_margin_beyond_budget(self):
        assert _verdict(-1.0, 0.1, 1e-8) == VERDICT_VIOLATION
        assert _verdict(-0.100000001, 0.1, 1e-8) == VERDICT_CONSISTENT

    def test_equality_band(self):
        assert _verdict(0.0, 0.0, 1e-8) == VERDICT_CONSISTENT
        assert _verdict(5e-9, 0.0, 1e-8) == VERDICT_CONSISTENT


class TestVerifySplit:
    def test_equilateral_one_neumann_side(self):
        rep = verify_split(EQUILATERAL, 0, **FAST)
        assert rep.hypothesis_met
        assert rep.verdict == VERDICT_CONFIRMED  # strict margin by symmetry
        assert rep.margin > 1.0
        assert rep.lhs.value < rep.rhs.value

    def test_square_right_junctions_not_met(self):
        rep = verify_split(SQUARE.with_labels(["D"] * 4), 0, **FAST)
        assert not rep.hypothesis_met
        assert "pi/2" in rep.hypothesis_note
        # eigenvalues still reported for exploration
        assert rep.lhs.value > 0 and rep.rhs.value > 0

    def test_pentagon_long_neumann_base(self):
        rep = verify_split(PENT, 0, **FAST)
        assert rep.hypothesis_met
        assert rep.verdict in (VERDICT_CONFIRMED, VERDICT_CONSISTENT)

    def test_per_level_data_recorded(self):
        rep = verify_split(EQUILATERAL, 0, **FAST)
        assert [l for l, _, _ in rep.lhs.per_level] == [2, 3, 4]
        hs = [h for _, h, _ in rep.lhs.per_level]
        assert hs[0] == pytest.approx(2 * hs[1], rel=1e-12)

    def test_bad_side_index(self):
        with pytest.raises(ConfigError):
            verify_split(EQUILATERAL, 7, **FAST)


class TestVerifyCorollary:
    def test_iii_equilateral_confirmed(self):
        rep = verify_triangle_corollary(
            TriangleSpec(angles=(math.pi / 3, math.pi / 3)), "iii", **FAST)
        assert rep.hypothesis_met
        assert rep.verdict == VERDICT_CONFIRMED
        assert rep.lhs.label == "D:L"
        assert rep.rhs.label == "D:M+S"

    def test_i_right_triangle_hypothesis_fails(self):
        # S is enclosed by the right angle, which is not strictly acute
        spec = TriangleSpec(angles=(math.pi / 2, 0.6))
        rep = verify_triangle_corollary(spec, "i", **FAST)
        assert not rep.hypothesis_met

    def test_i_acute_triangle_confirmed_or_consistent(self):
        spec = TriangleSpec(angles=(1.2, 1.0))
        rep = verify_triangle_corollary(spec, "i", **FAST)
        assert rep.hypothesis_met
        assert rep.verdict in (VERDICT_CONFIRMED, VERDICT_CONSISTENT)

    def test_invalid_which(self):
        with pytest.raises(ConfigError):
            verify_triangle_corollary(TriangleSpec(angles=(1.0, 1.0)), "iv", **FAST)


class TestVerifyRightTriangle:
    def test_isosceles_reports(self):
        spec = TriangleSpec(angles=(math.pi / 2, math.pi / 4))
        rep_s, rep_m = verify_right_triangle(spec, levels=(2, 3, 4, 5))
        assert rep_s.hypothesis_met and rep_m.hypothesis_met
        # congruent configurations agree
        assert rep_s.lhs.value == pytest.approx(rep_m.lhs.value, rel=1e-9)
        # normalized hypotenuse = 1 means legs sqrt(1/2): lambda = pi^2
        assert rep_s.lhs.value == pytest.approx(math.pi ** 2, rel=1e-4)
        assert rep_s.rhs.value == pytest.approx(2 * math.pi ** 2, rel=1e-4)
        assert rep_s.verdict == VERDICT_CONFIRMED
        assert rep_m.verdict == VERDICT_CONFIRMED

    def test_legs_one_and_five(self):
        beta = math.atan(5.0)
        rep_s, rep_m = verify_right_triangle(
            TriangleSpec(angles=(math.pi / 2, beta)), **FAST)
        assert rep_s.verdict != VERDICT_VIOLATION
        assert rep_m.verdict != VERDICT_VIOLATION

    def test_non_right_input_not_met(self):
        rep_s, rep_m = verify_right_triangle(
            TriangleSpec(angles=(1.0, 1.0)), **FAST)
        assert not rep_s.hypothesis_met
        assert not rep_m.hypothesis_met


class TestVoila:
    def test_equilateral_chain_and_trend(self):
        rep = verify_voila_identity(EQUILATERAL, 0, levels=(2, 3, 4))
        assert rep.hypothesis_met
        assert rep.chain_all_ok()
        gaps = rep.gaps()
        assert gaps[-1] < gaps[0]

    def test_chain_exact_at_every_level(self):
        rep = verify_voila_identity(EQUILATERAL, 0, levels=(2, 3, 4))
        for row in rep.rows:
            assert row.lam_complement <= row.quotient + 1e-9

    def test_closed_form_right_isosceles_hypotenuse(self):
        # D on the hypotenuse of (0,0),(1,0),(1,1): u = cos(pi x) - cos(pi y),
        # lambda = pi^2, and the derivative test function v = -pi sin(pi x)
        # has Rayleigh quotient exactly pi^2 in the continuum; v vanishes on
        # the vertical cathetus, so it is admissible for that problem.
        tri = make_polygon([[0, 0], [1, 0], [1, 1]], ["N", "N", "D"])
        quotients = []
        for level in (3, 4):
            m = mesh_at_level(tri, level)
            sys_l = assemble(m, tri, 2)
            u = smallest_eigenpair(sys_l).eigenfunction
            v = derivative_test_function(u, (1.0, 0.0), target_sides=(1,))
            sys_s = assemble(m, tri.with_labels(["N", "D", "N"]), 2)
            quot = rayleigh_quotient(sys_s, p1_to_p2(v))
            lam_s = smallest_eigenpair(sys_s).eigenvalue
            assert lam_s <= quot + 1e-9
            quotients.append(quot)
        assert quotients[-1] == pytest.approx(math.pi ** 2, rel=2e-2)
        assert abs(quotients[1] - math.pi ** 2) < abs(quotients[0] - math.pi ** 2)

    def test_square_hypothesis_not_met_but_reported(self):
        rep = verify_voila_identity(SQUARE, 0, levels=(2, 3))
        assert not rep.hypothesis_met
        assert len(rep.rows) == 2


class TestGrisvardTrend:
    def test_all_dirichlet_square_decreasing(self):
        # ground state ~ sin(pi x) sin(pi y); identity holds in the continuum
        rep = verify_grisvard(SQUARE, None, levels=(2, 3, 4))
        res = rep.residuals()
        assert rep.hypothesis_met  # vacuous: no junctions
        assert res[-1] < res[0]

    def test_equilateral_mixed_decreasing(self):
        rep = verify_grisvard(EQUILATERAL, 0, levels=(2, 3, 4))
        assert rep.hypothesis_met
        res = rep.residuals()
        assert res[-1] < res[0] / 1.5

    def test_square_single_neumann_reported_not_met(self):
        rep = verify_grisvard(SQUARE, 0, levels=(2, 3))
        assert not rep.hypothesis_met
        assert len(rep.rows) == 2


class TestSweeps:
    def test_small_corollary_grid(self):
        pts = triangle_angle_grid(3, 3)
        result = sweep_triangles("corollary-iii", pts, levels=(2, 3, 4))
        agg = result.aggregates()
        assert agg["n_rows"] == 9
        assert agg["verdicts"][VERDICT_VIOLATION] == 0
        # the corner alpha = beta = pi - 0.2 is degenerate
        assert agg["n_skipped"] >= 1
        skipped = [r for r in result.rows if r.status == "skipped"]
        assert all(r.params["alpha"] + r.params["beta"] >= math.pi - 0.1
                   for r in skipped)

    def test_rows_deterministically_ordered(self):
        pts = triangle_angle_grid(3, 3)
        a = sweep_triangles("corollary-iii", pts, levels=(2, 3, 4))
        b = sweep_triangles("corollary-iii", pts, levels=(2, 3, 4))
        assert [r.index for r in a.rows] == [r.index for r in b.rows]
        for ra, rb in zip(a.rows, b.rows):
            if ra.report is not None:
                assert ra.report.margin == rb.report.margin  # bitwise

    def test_workers_do_not_change_results(self):
        pts = triangle_angle_grid(2, 2)
        a = sweep_triangles("corollary-iii", pts, levels=(2, 3, 4), workers=1)
        b = sweep_triangles("corollary-iii", pts, levels=(2, 3, 4), workers=2)
        for ra, rb in zip(a.rows, b.rows):
            assert ra.status == rb.status
            if ra.report is not None:
                assert ra.report.margin == rb.report.margin

    def test_right_triangle_sweep_two_rows_per_point(self):
        result = sweep_triangles("right-triangle", [0.5, 0.9], levels=(2, 3, 4))
        assert [r.sub for r in result.rows] == ["M", "S", "M", "S"]
        assert result.aggregates()["verdicts"][VERDICT_VIOLATION] == 0

    def test_split_sweep(self):
        result = sweep_split_polygons(4, seed=11, levels=(2, 3, 4))
        agg = result.aggregates()
        assert agg["n_rows"] == 4
        assert agg["verdicts"][VERDICT_VIOLATION] == 0
        assert agg["n_hypothesis_met"] == 4

    def test_unknown_task(self):
        with pytest.raises(ConfigError):
            sweep_triangles("nope", [(1.0, 1.0)])

    def test_point_failure_recorded_not_raised(self):
        # an invalid angle pair inside the admissible box is impossible, so
        # inject a degenerate one directly: alpha + beta > pi triggers the
        # TriangleSpec validation error path
        result = sweep_triangles("corollary-iii", [(2.0, 2.0), (1.0, 0.9)],
                                 levels=(2, 3, 4))
        statuses = [r.status for r in result.rows]
        assert statuses[0] in ("skipped", "error")
        assert statuses[1] == "ok"


class TestViolationDetection:
    def _fake_report(self, verdict, hypothesis_met=True):
        from mixed_spectra.verify import ExtrapolatedEigenvalue, VerificationReport
        ev = ExtrapolatedEigenvalue("x", 1.0, 0.0, 2.0, False, [(2, 0.1, 1.0)])
        return VerificationReport(
            kind="t", hypothesis_met=hypothesis_met, hypothesis_note="met",
            lhs=ev, rhs=ev, margin=-1.0, verdict=verdict, params={},
            eps_verdict=1e-8)

    def test_has_violation_only_counts_met_hypotheses(self):
        bad = SweepRow(0, {}, "ok", report=self._fake_report(VERDICT_VIOLATION))
        ok = SweepRow(1, {}, "ok", report=self._fake_report(VERDICT_CONFIRMED))
        unmet = SweepRow(2, {}, "ok",
                         report=self._fake_report(VERDICT_VIOLATION, False))
        assert SweepResult("t", [ok, unmet]).has_violation() is False
        assert SweepResult("t", [ok, bad]).has_violation() is True
