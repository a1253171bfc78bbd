"""CSV/JSON report emission.

CSV files carry one row per verification with per-level eigenvalue pairs
flattened into semicolon-joined cells; floats are written with ``repr`` so
identical runs produce identical bytes.  CSV contains no timestamps; the JSON
reports carry a ``created_at`` field which consumers must ignore when
comparing runs.  All files are written atomically (temp file + rename).
"""
from __future__ import annotations

import datetime
import json
import os
import tempfile

from .verify import SweepResult, SweepRow, TrendReport, VerificationReport

SWEEP_CSV_HEADER = (
    "index,sub,kind,status,alpha,beta,hypothesis,verdict,margin,"
    "lhs_label,lhs_value,lhs_error,lhs_order,"
    "rhs_label,rhs_value,rhs_error,rhs_order,"
    "levels,h_per_level,lhs_per_level,rhs_per_level,message,geometry"
)

PLOT_CSV_HEADER = "alpha,beta,margin,verdict"

TREND_CSV_HEADER = "kind,level,h,lam_gamma,lam_complement,quotient,chain_ok,residual,hypothesis"


def atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _csv_quote(s: str) -> str:
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _row_cells(row: SweepRow) -> list[str]:
    rep = row.report
    alpha = row.params.get("alpha")
    beta = row.params.get("beta")
    geometry = json.dumps(row.params.get("vertices")) if "vertices" in row.params else ""
    if rep is None:
        return [
            str(row.index), row.sub, "", row.status, _fmt(alpha), _fmt(beta),
            "", "", "", "", "", "", "", "", "", "", "", "", "", "", "",
            row.message, geometry,
        ]
    levels = ";".join(str(l) for l, _, _ in rep.lhs.per_level)
    hs = ";".join(repr(h) for _, h, _ in rep.lhs.per_level)
    lhs_seq = ";".join(repr(lam) for _, _, lam in rep.lhs.per_level)
    rhs_seq = ";".join(repr(lam) for _, _, lam in rep.rhs.per_level)
    return [
        str(row.index), row.sub, rep.kind, row.status, _fmt(alpha), _fmt(beta),
        rep.hypothesis_status, rep.verdict, repr(rep.margin),
        rep.lhs.label, repr(rep.lhs.value), repr(rep.lhs.error_estimate),
        _fmt(rep.lhs.observed_order),
        rep.rhs.label, repr(rep.rhs.value), repr(rep.rhs.error_estimate),
        _fmt(rep.rhs.observed_order),
        levels, hs, lhs_seq, rhs_seq, row.message, geometry,
    ]


def sweep_to_csv(result: SweepResult) -> str:
    lines = [SWEEP_CSV_HEADER]
    for row in result.rows:
        lines.append(",".join(_csv_quote(c) for c in _row_cells(row)))
    return "\n".join(lines) + "\n"


def reports_to_csv(reports: list[VerificationReport]) -> str:
    rows = [SweepRow(index=i, params=rep.params, status="ok", report=rep)
            for i, rep in enumerate(reports)]
    return sweep_to_csv(SweepResult(task="single", rows=rows))


def plot_data_csv(result: SweepResult) -> str:
    """Long-format (alpha, beta, margin, verdict) rows, skipped rows included."""
    lines = [PLOT_CSV_HEADER]
    for row in result.rows:
        alpha = row.params.get("alpha", float("nan"))
        beta = row.params.get("beta", float("nan"))
        if row.report is None:
            lines.append(f"{_fmt(alpha)},{_fmt(beta)},nan,{row.status}")
        else:
            lines.append(f"{_fmt(alpha)},{_fmt(beta)},{repr(row.report.margin)},"
                         f"{row.report.verdict}")
    return "\n".join(lines) + "\n"


def trend_to_csv(report: TrendReport) -> str:
    lines = [TREND_CSV_HEADER]
    for r in report.rows:
        lines.append(",".join([
            report.kind, str(r.level), repr(r.h), repr(r.lam_gamma),
            _fmt(r.lam_complement), _fmt(r.quotient),
            "" if r.chain_ok is None else str(r.chain_ok),
            _fmt(r.residual), report.hypothesis_status,
        ]))
    return "\n".join(lines) + "\n"


def json_report(payload: dict, config: dict | None = None) -> str:
    doc = {
        "schema": "mixed-spectra-report-v1",
        "created_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "config": config or {},
        "result": payload,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
