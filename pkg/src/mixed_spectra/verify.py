"""Theorem-level verdict engine.

Each verification compares two extrapolated lowest eigenvalues of the same
polygon under nested Dirichlet boundary sets and classifies the outcome into
three verdicts: the claimed inequality holds with a margin exceeding the
summed extrapolation error budget, it holds within the error band, or it is
violated beyond the band.  A violation under a satisfied hypothesis would
contradict a theorem, so sweeps abort loudly on it.

Error budgets come from Richardson extrapolation of the eigenvalue sequences;
they are engineering estimates, not rigorous enclosures, and every report
says so.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, MixedSpectraError, ViolationError
from .eigensolve import (
    DEFAULT_MAX_ITER,
    DEFAULT_MAX_LEVEL,
    DEFAULT_TOL,
    eigen_convergence_study,
    richardson_extrapolate,
    smallest_eigenpair,
)
from .fem import (
    assemble,
    derivative_test_function,
    grisvard_residual,
    p1_to_p2,
    rayleigh_quotient,
)
from .geometry import (
    DEFAULT_EPS_ANGLE,
    DIRICHLET,
    NEUMANN,
    AngleCondition,
    LabeledPolygon,
    TriangleSpec,
    align_neumann_side,
    angle_condition_holds,
    junction_angles,
    make_triangle,
    random_split_polygon,
)
from .mesh import base_mesh, mesh_size, refine_uniform

DEFAULT_EPS_VERDICT = 1e-8
DEFAULT_LEVELS = (3, 4, 5, 6)
CHAIN_TOL = 1e-9

VERDICT_CONFIRMED = "ConfirmedWithMargin"
VERDICT_CONSISTENT = "ConsistentWithinError"
VERDICT_VIOLATION = "Violation"

ERROR_BUDGET_NOTE = (
    "error budget from Richardson extrapolation; numerical evidence, "
    "not a rigorous enclosure"
)


@dataclass
class ExtrapolatedEigenvalue:
    """One eigenvalue limit with its per-level evidence."""

    label: str
    value: float
    error_estimate: float
    observed_order: float | None
    degraded: bool
    per_level: list  # [(level, h, lambda)]

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "value": self.value,
            "error_estimate": self.error_estimate,
            "observed_order": self.observed_order,
            "degraded": self.degraded,
            "per_level": [[int(l), h, lam] for l, h, lam in self.per_level],
        }


@dataclass
class VerificationReport:
    """Comparison of two Dirichlet configurations on one polygon."""

    kind: str
    hypothesis_met: bool
    hypothesis_note: str
    lhs: ExtrapolatedEigenvalue
    rhs: ExtrapolatedEigenvalue
    margin: float
    verdict: str
    params: dict
    eps_verdict: float
    note: str = ERROR_BUDGET_NOTE

    @property
    def hypothesis_status(self) -> str:
        return "Met" if self.hypothesis_met else f"NotMet({self.hypothesis_note})"

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hypothesis_status": self.hypothesis_status,
            "hypothesis_met": self.hypothesis_met,
            "lhs": self.lhs.to_dict(),
            "rhs": self.rhs.to_dict(),
            "margin": self.margin,
            "verdict": self.verdict,
            "params": self.params,
            "eps_verdict": self.eps_verdict,
            "note": self.note,
        }


def _verdict(margin: float, error_budget: float, eps_verdict: float) -> str:
    if margin > error_budget + eps_verdict:
        return VERDICT_CONFIRMED
    if margin < -(error_budget + eps_verdict):
        return VERDICT_VIOLATION
    return VERDICT_CONSISTENT


def _labels_for(p: LabeledPolygon, dirichlet_sides) -> list[str]:
    labels = [NEUMANN] * p.n_sides
    for s in dirichlet_sides:
        labels[int(s)] = DIRICHLET
    return labels


def _study(p: LabeledPolygon, dirichlet_sides, label: str, levels, order,
           tol, max_iter, max_level) -> ExtrapolatedEigenvalue:
    labeled = p.with_labels(_labels_for(p, dirichlet_sides))
    study = eigen_convergence_study(
        labeled, levels, order=order, tol=tol, max_iter=max_iter, max_level=max_level)
    rich = richardson_extrapolate(study.points)
    per_level = [(lev, h, lam) for lev, (h, lam) in zip(study.levels, study.points)]
    return ExtrapolatedEigenvalue(
        label=label,
        value=rich.value,
        error_estimate=rich.error_estimate,
        observed_order=rich.observed_order,
        degraded=rich.degraded,
        per_level=per_level,
    )


def compare_dirichlet_sets(
    p: LabeledPolygon,
    lhs_sides,
    rhs_sides,
    kind: str,
    hypothesis: AngleCondition | tuple[bool, str],
    lhs_label: str | None = None,
    rhs_label: str | None = None,
    levels=DEFAULT_LEVELS,
    order: int = 2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_verdict: float = DEFAULT_EPS_VERDICT,
    params: dict | None = None,
) -> VerificationReport:
    """Check lambda_1[lhs_sides] <= lambda_1[rhs_sides] on polygon ``p``."""
    if isinstance(hypothesis, AngleCondition):
        met, note = hypothesis.holds, (hypothesis.reason() or "met")
    else:
        met, note = hypothesis
    lhs_label = lhs_label or "D:{" + ",".join(map(str, lhs_sides)) + "}"
    rhs_label = rhs_label or "D:{" + ",".join(map(str, rhs_sides)) + "}"
    lhs = _study(p, lhs_sides, lhs_label, levels, order, tol, max_iter, max_level)
    rhs = _study(p, rhs_sides, rhs_label, levels, order, tol, max_iter, max_level)
    margin = rhs.value - lhs.value
    budget = lhs.error_estimate + rhs.error_estimate
    return VerificationReport(
        kind=kind,
        hypothesis_met=met,
        hypothesis_note=note,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        verdict=_verdict(margin, budget, eps_verdict),
        params=params or {},
        eps_verdict=eps_verdict,
    )


def verify_split(
    p: LabeledPolygon,
    neumann_side: int,
    levels=DEFAULT_LEVELS,
    order: int = 2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_verdict: float = DEFAULT_EPS_VERDICT,
    eps_angle: float = DEFAULT_EPS_ANGLE,
) -> VerificationReport:
    """Single-Neumann-side ordering: Dirichlet on one side vs. on the rest.

    The hypothesis (acute junction angles, Neumann part a single side) gates
    the verdict's meaning, not the computation: eigenvalues are reported for
    hypothesis-violating inputs too.
    """
    n = p.n_sides
    if not 0 <= neumann_side < n:
        raise ConfigError(f"neumann_side {neumann_side} out of range")
    gamma = [s for s in range(n) if s != neumann_side]
    cond = angle_condition_holds(
        p.with_labels(_labels_for(p, gamma)), eps_angle=eps_angle)
    juncts = dict(cond.junction_angles)
    params = {
        "vertices": [[float(x), float(y)] for x, y in p.vertices],
        "neumann_side": int(neumann_side),
        "alpha": juncts.get(neumann_side % n, math.nan),
        "beta": juncts.get((neumann_side + 1) % n, math.nan),
    }
    return compare_dirichlet_sets(
        p, [neumann_side], gamma, kind="split", hypothesis=cond,
        lhs_label=f"D:{{{neumann_side}}}",
        rhs_label="D:{" + ",".join(map(str, gamma)) + "}",
        levels=levels, order=order, tol=tol, max_iter=max_iter,
        max_level=max_level, eps_verdict=eps_verdict, params=params,
    )


_COROLLARY_PARTS = {
    "i": ("S", ("L", "M")),
    "ii": ("M", ("L", "S")),
    "iii": ("L", ("M", "S")),
}


def verify_triangle_corollary(
    t: TriangleSpec,
    which: str,
    levels=DEFAULT_LEVELS,
    order: int = 2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_verdict: float = DEFAULT_EPS_VERDICT,
    eps_angle: float = DEFAULT_EPS_ANGLE,
) -> VerificationReport:
    """Triangle ordering by side role.

    (i): Dirichlet on S vs. on L+M, valid when both angles enclosing S are
    acute; (ii) the same for M; (iii) Dirichlet on L vs. on M+S, whose
    hypothesis holds for every triangle (the angles adjacent to the longest
    side are never >= pi/2).
    """
    which = which.lower().strip()
    if which not in _COROLLARY_PARTS:
        raise ConfigError(f"which must be one of i/ii/iii, got {which!r}")
    single_role, pair_roles = _COROLLARY_PARTS[which]
    poly = make_triangle(t)
    single_side = t.side_roles[single_role]
    pair_sides = [t.side_roles[r] for r in pair_roles]

    angles = poly.interior_angles()
    enclosing = [angles[single_side], angles[(single_side + 1) % 3]]
    if which == "iii":
        met, note = True, "met"
    else:
        acute = all(a < math.pi / 2 - eps_angle for a in enclosing)
        met = acute
        note = "met" if acute else (
            f"angle(s) enclosing {single_role} not < pi/2: "
            + ",".join(f"{a:.6f}" for a in enclosing))
    params = {
        "which": which,
        "alpha": float(t.angles[0]) if t.angles else float(angles[0]),
        "beta": float(t.angles[1]) if t.angles else float(angles[1]),
        "side_roles": {k: int(v) for k, v in t.side_roles.items()},
        "vertices": [[float(x), float(y)] for x, y in poly.vertices],
    }
    return compare_dirichlet_sets(
        poly, [single_side], pair_sides, kind=f"corollary-{which}",
        hypothesis=(met, note),
        lhs_label=f"D:{single_role}",
        rhs_label="D:" + "+".join(pair_roles),
        levels=levels, order=order, tol=tol, max_iter=max_iter,
        max_level=max_level, eps_verdict=eps_verdict, params=params,
    )


RIGHT_ANGLE_TOL = 1e-9


def verify_right_triangle(
    t: TriangleSpec,
    levels=DEFAULT_LEVELS,
    order: int = 2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_verdict: float = DEFAULT_EPS_VERDICT,
) -> tuple[VerificationReport, VerificationReport]:
    """Right-triangle ordering: Dirichlet on each cathetus vs. the hypotenuse.

    Returns the (S vs L, M vs L) report pair; Dirichlet sits on exactly one
    side at a time, Neumann on the other two.  The hypothesis is a right
    angle within 1e-9 rad.
    """
    poly = make_triangle(t)
    angles = poly.interior_angles()
    is_right = bool(np.any(np.abs(angles - math.pi / 2) <= RIGHT_ANGLE_TOL))
    note = "met" if is_right else (
        "no angle within 1e-9 of pi/2: " + ",".join(f"{a:.9f}" for a in angles))
    side_s, side_m, side_l = (t.side_roles[r] for r in ("S", "M", "L"))

    common = dict(levels=levels, order=order, tol=tol, max_iter=max_iter,
                  max_level=max_level)
    lam_l = _study(poly, [side_l], "D:L", **common)
    lam_s = _study(poly, [side_s], "D:S", **common)
    lam_m = _study(poly, [side_m], "D:M", **common)

    params = {
        "side_roles": {k: int(v) for k, v in t.side_roles.items()},
        "alpha": float(t.angles[0]) if t.angles else float(angles[0]),
        "beta": float(t.angles[1]) if t.angles else float(angles[1]),
        "vertices": [[float(x), float(y)] for x, y in poly.vertices],
    }

    def mk(lhs, kind):
        margin = lam_l.value - lhs.value
        budget = lam_l.error_estimate + lhs.error_estimate
        return VerificationReport(
            kind=kind, hypothesis_met=is_right, hypothesis_note=note,
            lhs=lhs, rhs=lam_l, margin=margin,
            verdict=_verdict(margin, budget, eps_verdict),
            params=params, eps_verdict=eps_verdict,
        )

    return mk(lam_s, "right-triangle-S"), mk(lam_m, "right-triangle-M")


@dataclass
class TrendLevel:
    level: int
    h: float
    lam_gamma: float
    lam_complement: float | None
    quotient: float | None
    chain_ok: bool | None
    residual: float | None

    def to_dict(self) -> dict:
        return {
            "level": self.level, "h": self.h, "lam_gamma": self.lam_gamma,
            "lam_complement": self.lam_complement, "quotient": self.quotient,
            "chain_ok": self.chain_ok, "residual": self.residual,
        }


@dataclass
class TrendReport:
    """Per-level proof-mechanics data (test-function quotient or residual)."""

    kind: str
    hypothesis_met: bool
    hypothesis_note: str
    rows: list  # [TrendLevel]
    params: dict
    note: str = ERROR_BUDGET_NOTE

    @property
    def hypothesis_status(self) -> str:
        return "Met" if self.hypothesis_met else f"NotMet({self.hypothesis_note})"

    def final_rel_gap(self) -> float:
        last = self.rows[-1]
        return abs(last.quotient - last.lam_gamma) / abs(last.lam_gamma)

    def gaps(self) -> list[float]:
        return [abs(r.quotient - r.lam_gamma) / abs(r.lam_gamma) for r in self.rows]

    def chain_all_ok(self) -> bool:
        return all(r.chain_ok for r in self.rows)

    def residuals(self) -> list[float]:
        return [r.residual for r in self.rows]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "hypothesis_status": self.hypothesis_status,
            "hypothesis_met": self.hypothesis_met,
            "rows": [r.to_dict() for r in self.rows],
            "params": self.params,
            "note": self.note,
        }


def verify_voila_identity(
    p: LabeledPolygon,
    neumann_side: int,
    levels=DEFAULT_LEVELS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_angle: float = DEFAULT_EPS_ANGLE,
) -> TrendReport:
    """Discrete version of the proof's test-function energy identity.

    Per level: solve the ground state u with Dirichlet everywhere except
    ``neumann_side``, rotate that side vertical, project the horizontal
    derivative of u onto P1, zero it on the closure of the Neumann side and
    evaluate its Rayleigh quotient R in the complementary problem (Dirichlet
    only there).  The admissibility chain lambda_1^c(h) <= R(h) is exact
    discrete min-max (asserted to 1e-9); R(h) approaching lambda_1(h) is the
    identity's convergence trend (P2 is forced, P1 derivatives are too poor).
    """
    n = p.n_sides
    levels = sorted(set(int(l) for l in levels))
    if not levels:
        raise ConfigError("levels must be nonempty")
    if levels[-1] > max_level:
        raise ConfigError(f"levels must lie in [0, {max_level}]")
    gamma = [s for s in range(n) if s != neumann_side]
    p_gamma = p.with_labels(_labels_for(p, gamma))
    cond = angle_condition_holds(p_gamma, eps_angle=eps_angle)
    _, rot_gamma = align_neumann_side(p_gamma, neumann_side)
    rot_comp = rot_gamma.with_labels(_labels_for(rot_gamma, [neumann_side]))
    direction = rot_gamma.inward_normal(neumann_side)

    rows = []
    m = base_mesh(rot_gamma)
    for lev in range(levels[-1] + 1):
        if lev > 0:
            m = refine_uniform(m)
        if lev not in levels:
            continue
        sys_g = assemble(m, rot_gamma, order=2)
        eig_g = smallest_eigenpair(sys_g, tol=tol, max_iter=max_iter)
        v = derivative_test_function(eig_g.eigenfunction, direction)
        v2 = p1_to_p2(v)
        sys_c = assemble(m, rot_comp, order=2)
        quot = rayleigh_quotient(sys_c, v2)
        eig_c = smallest_eigenpair(sys_c, tol=tol, max_iter=max_iter)
        rows.append(TrendLevel(
            level=lev, h=mesh_size(m),
            lam_gamma=eig_g.eigenvalue,
            lam_complement=eig_c.eigenvalue,
            quotient=quot,
            chain_ok=bool(eig_c.eigenvalue <= quot + CHAIN_TOL),
            residual=None,
        ))
    params = {
        "vertices": [[float(x), float(y)] for x, y in p.vertices],
        "neumann_side": int(neumann_side),
        "junction_angles": [[int(i), float(a)] for i, a in cond.junction_angles],
    }
    return TrendReport(kind="voila", hypothesis_met=cond.holds,
                       hypothesis_note=cond.reason() or "met",
                       rows=rows, params=params)


def verify_grisvard(
    p: LabeledPolygon,
    neumann_side: int | None,
    levels=DEFAULT_LEVELS,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_angle: float = DEFAULT_EPS_ANGLE,
) -> TrendReport:
    """Second-derivative integral identity residual of the ground state.

    ``neumann_side=None`` runs the all-Dirichlet problem (the identity's
    hypothesis is then vacuous at junctions).  The residual is expected to
    shrink under refinement exactly when the junction angles are acute, which
    is what grants the needed regularity.
    """
    n = p.n_sides
    levels = sorted(set(int(l) for l in levels))
    if not levels:
        raise ConfigError("levels must be nonempty")
    if levels[-1] > max_level:
        raise ConfigError(f"levels must lie in [0, {max_level}]")
    gamma = [s for s in range(n) if s != neumann_side]
    p_gamma = p.with_labels(_labels_for(p, gamma))
    juncts = junction_angles(p_gamma)
    acute = all(a < math.pi / 2 - eps_angle for _, a in juncts)
    note = "met" if acute else "junction angle not < pi/2"

    rows = []
    m = base_mesh(p_gamma)
    for lev in range(levels[-1] + 1):
        if lev > 0:
            m = refine_uniform(m)
        if lev not in levels:
            continue
        sys_g = assemble(m, p_gamma, order=2)
        eig = smallest_eigenpair(sys_g, tol=tol, max_iter=max_iter)
        rows.append(TrendLevel(
            level=lev, h=mesh_size(m),
            lam_gamma=eig.eigenvalue,
            lam_complement=None, quotient=None, chain_ok=None,
            residual=grisvard_residual(eig.eigenfunction),
        ))
    params = {
        "vertices": [[float(x), float(y)] for x, y in p.vertices],
        "neumann_side": None if neumann_side is None else int(neumann_side),
        "junction_angles": [[int(i), float(a)] for i, a in juncts],
    }
    return TrendReport(kind="grisvard", hypothesis_met=acute,
                       hypothesis_note=note, rows=rows, params=params)


@dataclass
class SweepRow:
    index: int
    params: dict
    status: str  # ok | skipped | error
    report: VerificationReport | None = None
    message: str = ""
    sub: str = ""  # distinguishes multiple verifications per sweep point

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "sub": self.sub,
            "params": self.params,
            "status": self.status,
            "report": self.report.to_dict() if self.report else None,
            "message": self.message,
        }


@dataclass
class SweepResult:
    task: str
    rows: list
    config: dict = field(default_factory=dict)

    def aggregates(self) -> dict:
        counts = {VERDICT_CONFIRMED: 0, VERDICT_CONSISTENT: 0, VERDICT_VIOLATION: 0}
        n_skipped = n_error = n_hyp = 0
        min_margin = math.inf
        for row in self.rows:
            if row.status == "skipped":
                n_skipped += 1
            elif row.status == "error":
                n_error += 1
            else:
                counts[row.report.verdict] += 1
                if row.report.hypothesis_met:
                    n_hyp += 1
                    min_margin = min(min_margin, row.report.margin)
        return {
            "n_rows": len(self.rows),
            "n_skipped": n_skipped,
            "n_error": n_error,
            "n_hypothesis_met": n_hyp,
            "verdicts": counts,
            "min_margin_hypothesis_met": None if math.isinf(min_margin) else min_margin,
        }

    def has_violation(self) -> bool:
        return any(r.report is not None and r.report.verdict == VERDICT_VIOLATION
                   and r.report.hypothesis_met for r in self.rows)

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "config": self.config,
            "aggregates": self.aggregates(),
            "rows": [r.to_dict() for r in self.rows],
        }


SWEEP_TASKS = ("corollary-i", "corollary-ii", "corollary-iii", "right-triangle", "split")

#: Grid margin keeping triangle angle pairs away from the degenerate simplex edge.
DEGENERACY_MARGIN = 0.1


def triangle_angle_grid(n_alpha: int, n_beta: int,
                        lo: float = 0.1, hi: float = math.pi - 0.2):
    """Deterministic (alpha, beta) grid rows over the angle simplex box."""
    alphas = np.linspace(lo, hi, n_alpha)
    betas = np.linspace(lo, hi, n_beta)
    return [(float(a), float(b)) for a in alphas for b in betas]


def right_triangle_betas(count: int, lo: float = 0.1,
                         hi: float = math.pi / 2 - 0.1) -> list[float]:
    return [float(b) for b in np.linspace(lo, hi, count)]


def _sweep_point(payload) -> list[SweepRow]:
    (index, task, point, levels, order, tol, max_iter, max_level,
     eps_verdict, eps_angle) = payload
    try:
        if task in ("corollary-i", "corollary-ii", "corollary-iii"):
            alpha, beta = point
            if alpha + beta >= math.pi - DEGENERACY_MARGIN:
                return [SweepRow(index, {"alpha": alpha, "beta": beta}, "skipped",
                                 message="angles too close to degenerate")]
            spec = TriangleSpec(angles=(alpha, beta))
            rep = verify_triangle_corollary(
                spec, task.split("-")[1], levels=levels, order=order, tol=tol,
                max_iter=max_iter, max_level=max_level,
                eps_verdict=eps_verdict, eps_angle=eps_angle)
            return [SweepRow(index, rep.params, "ok", report=rep)]
        if task == "right-triangle":
            beta = point if np.isscalar(point) else point[0]
            spec = TriangleSpec(angles=(math.pi / 2, float(beta)))
            rep_s, rep_m = verify_right_triangle(
                spec, levels=levels, order=order, tol=tol,
                max_iter=max_iter, max_level=max_level, eps_verdict=eps_verdict)
            return [SweepRow(index, rep_s.params, "ok", report=rep_s, sub="S"),
                    SweepRow(index, rep_m.params, "ok", report=rep_m, sub="M")]
        if task == "split":
            poly = point  # a LabeledPolygon with side 0 Neumann
            rep = verify_split(
                poly, 0, levels=levels, order=order, tol=tol,
                max_iter=max_iter, max_level=max_level,
                eps_verdict=eps_verdict, eps_angle=eps_angle)
            return [SweepRow(index, rep.params, "ok", report=rep)]
        raise ConfigError(f"unknown sweep task {task!r}")
    except MixedSpectraError as exc:
        return [SweepRow(index, _point_params(task, point), "error",
                         message=f"{type(exc).__name__}: {exc}")]


def _point_params(task, point) -> dict:
    if task.startswith("corollary"):
        return {"alpha": point[0], "beta": point[1]}
    if task == "right-triangle":
        return {"beta": float(point if np.isscalar(point) else point[0])}
    return {"vertices": [[float(x), float(y)] for x, y in point.vertices]}


def sweep_triangles(
    task: str,
    points,
    levels=DEFAULT_LEVELS,
    order: int = 2,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    max_level: int = DEFAULT_MAX_LEVEL,
    eps_verdict: float = DEFAULT_EPS_VERDICT,
    eps_angle: float = DEFAULT_EPS_ANGLE,
    workers: int = 1,
    config: dict | None = None,
) -> SweepResult:
    """Run one verification per point, in deterministic index order.

    Individual failures become ``error`` rows and the sweep continues; a
    Violation under a met hypothesis aborts with the full dataset attached to
    the raised :class:`ViolationError`.  Results are independent of
    ``workers``.
    """
    if task not in SWEEP_TASKS:
        raise ConfigError(f"task must be one of {SWEEP_TASKS}, got {task!r}")
    payloads = [
        (i, task, pt, tuple(levels), order, tol, max_iter, max_level,
         eps_verdict, eps_angle)
        for i, pt in enumerate(points)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            row_lists = list(pool.map(_sweep_point, payloads, chunksize=4))
    else:
        row_lists = [_sweep_point(pl) for pl in payloads]
    rows = [row for rl in row_lists for row in rl]
    rows.sort(key=lambda r: (r.index, r.sub))
    result = SweepResult(task=task, rows=rows, config=config or {})
    for row in rows:
        if (row.report is not None and row.report.hypothesis_met
                and row.report.verdict == VERDICT_VIOLATION):
            raise ViolationError(
                f"sweep {task} point {row.index} produced a Violation "
                f"(margin {row.report.margin:.6e}); this contradicts the "
                "theorem and indicates a bug or a counterexample",
                dump=result.to_dict(),
            )
    return result


def sweep_split_polygons(
    count: int,
    seed: int = 42,
    n_sides_cycle=(4, 5),
    levels=DEFAULT_LEVELS,
    **kwargs,
) -> SweepResult:
    """Split-task sweep over random convex polygons (alternating side counts),
    each with its base edge Neumann and acute junction angles."""
    rng = np.random.default_rng(seed)
    polys = [random_split_polygon(rng, n_sides_cycle[i % len(n_sides_cycle)])
             for i in range(count)]
    cfg = dict(kwargs.pop("config", {}) or {})
    cfg.update({"seed": seed, "count": count})
    return sweep_triangles("split", polys, levels=levels, config=cfg, **kwargs)
