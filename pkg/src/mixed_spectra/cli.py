"""Command-line front end.

Commands: solve, verify-split, verify-corollary, verify-right, verify-voila,
verify-grisvard, sweep, convergence.  Geometry comes from inline JSON, a JSON
file, the --square convenience flag or the --angles triangle shorthand.
Reports are written as CSV and/or JSON; the JSON report embeds the resolved
run configuration, from which the run can be reproduced exactly.

Exit codes: 0 = success without Violations, 1 = configuration or solver
error, 2 = a Violation verdict occurred.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from dataclasses import dataclass


from . import reporting
from .eigensolve import (
    DEFAULT_MAX_ITER,
    DEFAULT_TOL,
    eigen_convergence_study,
    richardson_extrapolate,
    smallest_eigenpairs,
)
from .errors import ConfigError, MixedSpectraError, ViolationError
from .fem import assemble
from .geometry import (
    DEFAULT_EPS_ANGLE,
    LabeledPolygon,
    TriangleSpec,
    polygon_from_json,
)
from .mesh import mesh_at_level
from .verify import (
    DEFAULT_EPS_VERDICT,
    DEFAULT_LEVELS,
    SWEEP_TASKS,
    VERDICT_VIOLATION,
    right_triangle_betas,
    sweep_split_polygons,
    sweep_triangles,
    triangle_angle_grid,
    verify_grisvard,
    verify_right_triangle,
    verify_split,
    verify_triangle_corollary,
    verify_voila_identity,
)

COMMANDS = ("solve", "verify-split", "verify-corollary", "verify-right",
            "verify-voila", "verify-grisvard", "sweep", "convergence")

ENV_MAX_LEVEL = "MIXED_SPECTRA_MAX_LEVEL"
FALLBACK_MAX_LEVEL = 8


@dataclass
class RunConfig:
    """Resolved configuration of one CLI run; JSON-serializable."""

    command: str
    geometry: dict | None = None
    order: int = 2
    levels: tuple = DEFAULT_LEVELS
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    max_level: int = FALLBACK_MAX_LEVEL
    eps_verdict: float = DEFAULT_EPS_VERDICT
    eps_angle: float = DEFAULT_EPS_ANGLE
    seed: int = 42
    out: str | None = None
    format: str = "both"
    neumann_side: int | None = None
    which: str | None = None
    task: str | None = None
    grid: str | None = None
    count: int | None = None
    workers: int = 1
    num_eigs: int = 1
    dump_mesh: str | None = None
    plot_data: str | None = None

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["levels"] = list(self.levels)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        kwargs = {k: v for k, v in d.items() if k in known}
        if "levels" in kwargs:
            kwargs["levels"] = tuple(int(l) for l in kwargs["levels"])
        return cls(**kwargs)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not self.levels:
            raise ConfigError("levels must be nonempty")
        if max(self.levels) > self.max_level or min(self.levels) < 0:
            raise ConfigError(
                f"levels {list(self.levels)} outside [0, {self.max_level}] "
                f"(cap via {ENV_MAX_LEVEL})")
        for name in ("tol", "eps_verdict", "eps_angle"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.order not in (1, 2):
            raise ConfigError("order must be 1 or 2")
        if self.format not in ("csv", "json", "both"):
            raise ConfigError("format must be csv, json or both")


def _parse_levels(text: str) -> tuple:
    text = text.strip()
    if ".." in text:
        a, b = text.split("..")
        lo, hi = int(a), int(b)
        if hi < lo:
            raise ConfigError(f"bad level range {text!r}")
        return tuple(range(lo, hi + 1))
    return (int(text),)


def _square_labels(dirichlet: str | None) -> list[str]:
    labels = ["N"] * 4
    if dirichlet:
        for tok in str(dirichlet).split(","):
            labels[int(tok)] = "D"
    return labels


def geometry_from_config(cfg: RunConfig) -> LabeledPolygon:
    if cfg.geometry is None:
        raise ConfigError(f"command {cfg.command} needs geometry")
    return polygon_from_json(cfg.geometry)


def triangle_from_config(cfg: RunConfig) -> TriangleSpec:
    g = cfg.geometry or {}
    if "angles" not in g:
        raise ConfigError(f"command {cfg.command} needs --angles")
    dirichlet = g.get("dirichlet", ("L",))
    if isinstance(dirichlet, str):
        dirichlet = (dirichlet,)
    return TriangleSpec(angles=tuple(g["angles"]), dirichlet=tuple(dirichlet))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mixed-spectra",
        description="Lowest mixed Dirichlet/Neumann Laplacian eigenvalues on "
                    "convex polygons, with eigenvalue-ordering verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp, geometry=True):
        if geometry:
            sp.add_argument("--geometry", help="inline polygon JSON")
            sp.add_argument("--geometry-file", help="path to polygon JSON")
            sp.add_argument("--square", action="store_true",
                            help="unit square (use --dirichlet for D side indices)")
            sp.add_argument("--angles", nargs=2, type=float, metavar=("ALPHA", "BETA"),
                            help="triangle by two interior angles (longest side normalized)")
            sp.add_argument("--dirichlet",
                            help="side indices (--square) or S/M/L roles (--angles), comma separated")
        sp.add_argument("--order", choices=("P1", "P2"), default="P2")
        sp.add_argument("--levels", default="3..6", help="refinement level or range a..b")
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)
        sp.add_argument("--eps-verdict", type=float, default=DEFAULT_EPS_VERDICT)
        sp.add_argument("--eps-angle", type=float, default=DEFAULT_EPS_ANGLE)
        sp.add_argument("--out", help="report base path (writes .csv/.json)")
        sp.add_argument("--format", choices=("csv", "json", "both"), default="both")
        sp.add_argument("--seed", type=int, default=42)

    sp = sub.add_parser("solve", help="lowest eigenvalue of one labeled polygon")
    add_common(sp)
    sp.add_argument("--num-eigs", type=int, default=1, help="diagnostic: up to 5 eigenvalues")
    sp.add_argument("--dump-mesh", help="write the finest mesh as JSON")

    sp = sub.add_parser("convergence", help="eigenvalue sequence over refinement levels")
    add_common(sp)

    sp = sub.add_parser("verify-split", help="single Neumann side ordering check")
    add_common(sp)
    sp.add_argument("--neumann-side", type=int, required=True)

    sp = sub.add_parser("verify-corollary", help="triangle S/M/L ordering check")
    add_common(sp)
    sp.add_argument("--which", choices=("i", "ii", "iii"), required=True)

    sp = sub.add_parser("verify-right", help="right triangle cathetus vs hypotenuse")
    add_common(sp)

    sp = sub.add_parser("verify-voila", help="test-function energy identity trend")
    add_common(sp)
    sp.add_argument("--neumann-side", type=int, required=True)

    sp = sub.add_parser("verify-grisvard", help="second-derivative identity residual trend")
    add_common(sp)
    sp.add_argument("--neumann-side", type=int, default=None)

    sp = sub.add_parser("sweep", help="parameter sweep of one verification task")
    add_common(sp, geometry=False)
    sp.add_argument("--task", choices=SWEEP_TASKS, required=True)
    sp.add_argument("--grid", help="AxB angle grid (corollary) or point count (right-triangle)")
    sp.add_argument("--count", type=int, help="number of random polygons (split task)")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--plot-data", help="write plot-ready alpha,beta,margin,verdict CSV")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    geometry = None
    if getattr(args, "geometry", None):
        geometry = json.loads(args.geometry)
    elif getattr(args, "geometry_file", None):
        with open(args.geometry_file) as fh:
            geometry = json.load(fh)
    elif getattr(args, "square", False):
        geometry = {
            "vertices": [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            "labels": _square_labels(getattr(args, "dirichlet", None)),
        }
    elif getattr(args, "angles", None):
        geometry = {"angles": list(args.angles)}
        if getattr(args, "dirichlet", None):
            geometry["dirichlet"] = [t.strip().upper() for t in args.dirichlet.split(",")]

    max_level = FALLBACK_MAX_LEVEL
    env = os.environ.get(ENV_MAX_LEVEL)
    if env:
        max_level = int(env)

    return RunConfig(
        command=args.command,
        geometry=geometry,
        order=1 if getattr(args, "order", "P2") == "P1" else 2,
        levels=_parse_levels(getattr(args, "levels", "3..6")),
        tol=args.tol,
        max_iter=args.max_iter,
        max_level=max_level,
        eps_verdict=args.eps_verdict,
        eps_angle=args.eps_angle,
        seed=args.seed,
        out=getattr(args, "out", None),
        format=getattr(args, "format", "both"),
        neumann_side=getattr(args, "neumann_side", None),
        which=getattr(args, "which", None),
        task=getattr(args, "task", None),
        grid=getattr(args, "grid", None),
        count=getattr(args, "count", None),
        workers=getattr(args, "workers", 1),
        num_eigs=getattr(args, "num_eigs", 1),
        dump_mesh=getattr(args, "dump_mesh", None),
        plot_data=getattr(args, "plot_data", None),
    )


def _write_outputs(cfg: RunConfig, csv_text: str | None, payload: dict) -> None:
    if not cfg.out:
        return
    base = cfg.out
    if cfg.format in ("csv", "both") and csv_text is not None:
        reporting.atomic_write(base + ".csv", csv_text)
    if cfg.format in ("json", "both"):
        reporting.atomic_write(base + ".json",
                               reporting.json_report(payload, cfg.to_dict()))


def _print_report(rep) -> None:
    print(f"[{rep.kind}] hypothesis: {rep.hypothesis_status}")
    print(f"  {rep.lhs.label:>10s} = {rep.lhs.value:.9g}  (err est {rep.lhs.error_estimate:.3g})")
    print(f"  {rep.rhs.label:>10s} = {rep.rhs.value:.9g}  (err est {rep.rhs.error_estimate:.3g})")
    print(f"  margin = {rep.margin:.9g}   verdict = {rep.verdict}")


def _exit_code_for_reports(reports) -> int:
    for rep in reports:
        if rep.verdict == VERDICT_VIOLATION and rep.hypothesis_met:
            return 2
    return 0


def _cmd_solve(cfg: RunConfig) -> int:
    poly = geometry_from_config(cfg)
    level = max(cfg.levels)
    m = mesh_at_level(poly, level)
    sys_ = assemble(m, poly, cfg.order)
    results = smallest_eigenpairs(sys_, max(1, min(cfg.num_eigs, 5)),
                                  tol=cfg.tol, max_iter=cfg.max_iter)
    print(f"polygon: {len(poly.vertices)} sides, labels {''.join(poly.side_labels)}")
    print(f"level {level}: {sys_.n_free} free dofs (order P{cfg.order})")
    for i, r in enumerate(results, start=1):
        print(f"lambda_{i} = {r.eigenvalue:.12g}   (residual {r.residual:.2e}, "
              f"{r.iterations} iterations)")
    if cfg.dump_mesh:
        reporting.atomic_write(cfg.dump_mesh, m.to_json())
    payload = {
        "eigenvalues": [r.eigenvalue for r in results],
        "residuals": [r.residual for r in results],
        "level": level,
        "n_free_dofs": sys_.n_free,
    }
    _write_outputs(cfg, None, payload)
    return 0


def _cmd_convergence(cfg: RunConfig) -> int:
    poly = geometry_from_config(cfg)
    study = eigen_convergence_study(poly, cfg.levels, order=cfg.order,
                                    tol=cfg.tol, max_iter=cfg.max_iter,
                                    max_level=cfg.max_level)
    print("level        h               lambda_1")
    for lev, (h, lam) in zip(study.levels, study.points):
        print(f"{lev:>5d}   {h:<14.8g}  {lam:.12g}")
    payload = {"points": [[lev, h, lam] for lev, (h, lam) in
                          zip(study.levels, study.points)]}
    if len(study.points) >= 3:
        rich = richardson_extrapolate(study.points)
        print(f"extrapolated: {rich.value:.12g}  observed order "
              f"{rich.observed_order if rich.observed_order is not None else 'n/a'}"
              f"  error estimate {rich.error_estimate:.3g}"
              + ("  [degraded]" if rich.degraded else ""))
        payload["extrapolated"] = {
            "value": rich.value, "observed_order": rich.observed_order,
            "error_estimate": rich.error_estimate, "degraded": rich.degraded,
        }
    csv_lines = ["level,h,lambda"] + [
        f"{lev},{repr(h)},{repr(lam)}"
        for lev, (h, lam) in zip(study.levels, study.points)]
    _write_outputs(cfg, "\n".join(csv_lines) + "\n", payload)
    return 0


def _cmd_verify_split(cfg: RunConfig) -> int:
    poly = geometry_from_config(cfg)
    rep = verify_split(poly, cfg.neumann_side, levels=cfg.levels, order=cfg.order,
                       tol=cfg.tol, max_iter=cfg.max_iter, max_level=cfg.max_level,
                       eps_verdict=cfg.eps_verdict, eps_angle=cfg.eps_angle)
    _print_report(rep)
    _write_outputs(cfg, reporting.reports_to_csv([rep]), {"reports": [rep.to_dict()]})
    return _exit_code_for_reports([rep])


def _cmd_verify_corollary(cfg: RunConfig) -> int:
    spec = triangle_from_config(cfg)
    rep = verify_triangle_corollary(spec, cfg.which, levels=cfg.levels,
                                    order=cfg.order, tol=cfg.tol,
                                    max_iter=cfg.max_iter, max_level=cfg.max_level,
                                    eps_verdict=cfg.eps_verdict, eps_angle=cfg.eps_angle)
    _print_report(rep)
    _write_outputs(cfg, reporting.reports_to_csv([rep]), {"reports": [rep.to_dict()]})
    return _exit_code_for_reports([rep])


def _cmd_verify_right(cfg: RunConfig) -> int:
    spec = triangle_from_config(cfg)
    rep_s, rep_m = verify_right_triangle(spec, levels=cfg.levels, order=cfg.order,
                                         tol=cfg.tol, max_iter=cfg.max_iter,
                                         max_level=cfg.max_level,
                                         eps_verdict=cfg.eps_verdict)
    _print_report(rep_s)
    _print_report(rep_m)
    _write_outputs(cfg, reporting.reports_to_csv([rep_s, rep_m]),
                   {"reports": [rep_s.to_dict(), rep_m.to_dict()]})
    return _exit_code_for_reports([rep_s, rep_m])


def _cmd_trend(cfg: RunConfig, kind: str) -> int:
    poly = geometry_from_config(cfg)
    if kind == "voila":
        if cfg.neumann_side is None:
            raise ConfigError("verify-voila needs --neumann-side")
        rep = verify_voila_identity(poly, cfg.neumann_side, levels=cfg.levels,
                                    tol=cfg.tol, max_iter=cfg.max_iter,
                                    max_level=cfg.max_level, eps_angle=cfg.eps_angle)
        print(f"[voila] hypothesis: {rep.hypothesis_status}")
        print("level   h            lam_Gamma      lam_comp       R(quotient)    chain")
        for r in rep.rows:
            print(f"{r.level:>5d}   {r.h:<10.6g}  {r.lam_gamma:<13.8g}  "
                  f"{r.lam_complement:<13.8g}  {r.quotient:<13.8g}  {r.chain_ok}")
        print(f"final relative gap |R - lam_Gamma|/lam_Gamma = {rep.final_rel_gap():.4%}")
    else:
        rep = verify_grisvard(poly, cfg.neumann_side, levels=cfg.levels,
                              tol=cfg.tol, max_iter=cfg.max_iter,
                              max_level=cfg.max_level, eps_angle=cfg.eps_angle)
        print(f"[grisvard] hypothesis: {rep.hypothesis_status}")
        print("level   h            lambda_1       residual")
        for r in rep.rows:
            print(f"{r.level:>5d}   {r.h:<10.6g}  {r.lam_gamma:<13.8g}  {r.residual:.6e}")
    _write_outputs(cfg, reporting.trend_to_csv(rep), rep.to_dict())
    return 0


def _sweep_points(cfg: RunConfig):
    if cfg.task in ("corollary-i", "corollary-ii", "corollary-iii"):
        grid = cfg.grid or "20x20"
        try:
            na, nb = (int(t) for t in grid.lower().split("x"))
        except ValueError:
            raise ConfigError(f"--grid must look like 20x20, got {grid!r}")
        return triangle_angle_grid(na, nb)
    if cfg.task == "right-triangle":
        count = int(cfg.grid) if cfg.grid else 50
        return right_triangle_betas(count)
    return None  # split task generates its own polygons


def _cmd_sweep(cfg: RunConfig) -> int:
    common = dict(levels=cfg.levels, order=cfg.order, tol=cfg.tol,
                  max_iter=cfg.max_iter, max_level=cfg.max_level,
                  eps_verdict=cfg.eps_verdict, eps_angle=cfg.eps_angle,
                  workers=cfg.workers, config=cfg.to_dict())
    try:
        if cfg.task == "split":
            result = sweep_split_polygons(cfg.count or 100, seed=cfg.seed, **common)
        else:
            result = sweep_triangles(cfg.task, _sweep_points(cfg), **common)
    except ViolationError as exc:
        dump_path = (cfg.out or "sweep-violation") + ".violation.json"
        reporting.atomic_write(dump_path,
                               reporting.json_report(exc.dump, cfg.to_dict()))
        print(f"VIOLATION: {exc}", file=sys.stderr)
        print(f"full dump written to {dump_path}", file=sys.stderr)
        return 2
    agg = result.aggregates()
    print(f"sweep {cfg.task}: {agg['n_rows']} rows "
          f"({agg['n_skipped']} skipped, {agg['n_error']} errors)")
    for verdict, count in agg["verdicts"].items():
        print(f"  {verdict}: {count}")
    if agg["min_margin_hypothesis_met"] is not None:
        print(f"  min margin (hypothesis met): {agg['min_margin_hypothesis_met']:.6g}")
    _write_outputs(cfg, reporting.sweep_to_csv(result), result.to_dict())
    if cfg.plot_data:
        reporting.atomic_write(cfg.plot_data, reporting.plot_data_csv(result))
    return 0


def run(cfg: RunConfig) -> int:
    """Execute a validated configuration; returns the process exit code."""
    cfg.validate()
    if cfg.command == "solve":
        return _cmd_solve(cfg)
    if cfg.command == "convergence":
        return _cmd_convergence(cfg)
    if cfg.command == "verify-split":
        if cfg.neumann_side is None:
            raise ConfigError("verify-split needs --neumann-side")
        return _cmd_verify_split(cfg)
    if cfg.command == "verify-corollary":
        if cfg.which is None:
            raise ConfigError("verify-corollary needs --which")
        return _cmd_verify_corollary(cfg)
    if cfg.command == "verify-right":
        return _cmd_verify_right(cfg)
    if cfg.command == "verify-voila":
        return _cmd_trend(cfg, "voila")
    if cfg.command == "verify-grisvard":
        return _cmd_trend(cfg, "grisvard")
    if cfg.command == "sweep":
        if cfg.task is None:
            raise ConfigError("sweep needs --task")
        return _cmd_sweep(cfg)
    raise ConfigError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        code = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        code = 1
    except MixedSpectraError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        code = 1
    if argv is None:
        sys.exit(code)
    return code


if __name__ == "__main__":
    main()
