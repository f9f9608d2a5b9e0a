"""Benchmark report rendering: markdown and CSV tables, SVG bar charts.

Tables use the fixed column order Algorithm, TT, then the four training
metrics, then the four validation metrics. SVG output is hand-assembled
(text-diffable, no plotting dependency): one grouped bar chart for R2
(train next to validation) and one for training time.
"""

from __future__ import annotations

import json
import os

from ._text import format_cell
from .errors import ConfigInvalid
from .regression.metrics import EvalReport

__all__ = [
    "TABLE_COLUMNS",
    "reports_to_json",
    "reports_from_json",
    "render_markdown",
    "render_csv",
    "render_r2_svg",
    "render_training_time_svg",
    "render_report",
]

TABLE_COLUMNS = (
    "Algorithm", "TT",
    "R2 (Train)", "MAE (Train)", "MSE (Train)", "MAPE (Train)",
    "R2 (Val)", "MAE (Val)", "MSE (Val)", "MAPE (Val)",
)

NA = "NA"


def _cell(value) -> str:
    return NA if value is None else format_cell(value)


def _table_rows(reports: list[EvalReport]) -> list[list[str]]:
    rows = []
    for r in reports:
        rows.append([
            r.algorithm,
            _cell(r.training_time_s),
            _cell(r.train.r2), _cell(r.train.mae), _cell(r.train.mse), _cell(r.train.mape_pct),
            _cell(r.val.r2), _cell(r.val.mae), _cell(r.val.mse), _cell(r.val.mape_pct),
        ])
    return rows


def reports_to_json(reports: list[EvalReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=2, sort_keys=True) + "\n"


def reports_from_json(text: str) -> list[EvalReport]:
    return [EvalReport.from_dict(doc) for doc in json.loads(text)]


def render_markdown(reports: list[EvalReport]) -> str:
    lines = [
        "| " + " | ".join(TABLE_COLUMNS) + " |",
        "| " + " | ".join("---" for _ in TABLE_COLUMNS) + " |",
    ]
    for row in _table_rows(reports):
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines) + "\n"


def render_csv(reports: list[EvalReport]) -> str:
    lines = [",".join(TABLE_COLUMNS)]
    for row in _table_rows(reports):
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


# --- SVG ---------------------------------------------------------------

_WIDTH = 720
_HEIGHT = 380
_MARGIN_LEFT = 60
_MARGIN_RIGHT = 20
_MARGIN_TOP = 50
_MARGIN_BOTTOM = 70
_COLORS = ("#4878a8", "#e49444")


def _bar_chart(title: str, labels: list[str], series: list[tuple[str, list[float]]]) -> str:
    plot_w = _WIDTH - _MARGIN_LEFT - _MARGIN_RIGHT
    plot_h = _HEIGHT - _MARGIN_TOP - _MARGIN_BOTTOM
    values = [v for _, vs in series for v in vs]
    hi = max([v for v in values if v == v] + [0.0])
    lo = min([v for v in values if v == v] + [0.0])
    span = hi - lo if hi > lo else 1.0

    def y_of(v: float) -> float:
        return _MARGIN_TOP + (hi - v) / span * plot_h

    group_w = plot_w / max(len(labels), 1)
    bar_w = group_w * 0.8 / max(len(series), 1)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<text x="{_WIDTH / 2:.1f}" y="24" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{title}</text>',
    ]
    zero_y = y_of(0.0)
    parts.append(
        f'<line x1="{_MARGIN_LEFT}" y1="{zero_y:.2f}" x2="{_WIDTH - _MARGIN_RIGHT}" '
        f'y2="{zero_y:.2f}" stroke="#333" stroke-width="1"/>'
    )
    for s, (name, _) in enumerate(series):
        lx = _MARGIN_LEFT + 10 + s * 130
        parts.append(f'<rect x="{lx}" y="{_MARGIN_TOP - 18}" width="12" height="12" fill="{_COLORS[s % 2]}"/>')
        parts.append(
            f'<text x="{lx + 16}" y="{_MARGIN_TOP - 8}" font-size="12" font-family="sans-serif">{name}</text>'
        )
    for g, label in enumerate(labels):
        gx = _MARGIN_LEFT + g * group_w + group_w * 0.1
        for s, (_, vs) in enumerate(series):
            v = vs[g]
            top = min(y_of(v), zero_y)
            h = abs(y_of(v) - zero_y)
            parts.append(
                f'<rect x="{gx + s * bar_w:.2f}" y="{top:.2f}" width="{bar_w:.2f}" '
                f'height="{h:.2f}" fill="{_COLORS[s % 2]}"/>'
            )
        parts.append(
            f'<text x="{gx + len(series) * bar_w / 2:.2f}" y="{_HEIGHT - _MARGIN_BOTTOM + 18}" '
            f'text-anchor="middle" font-size="12" font-family="sans-serif">{label}</text>'
        )
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * span
        parts.append(
            f'<text x="{_MARGIN_LEFT - 6}" y="{y_of(v) + 4:.2f}" text-anchor="end" '
            f'font-size="11" font-family="sans-serif">{v:.3g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_r2_svg(reports: list[EvalReport]) -> str:
    labels = [r.algorithm for r in reports]
    train = [r.train.r2 if r.train.r2 is not None else 0.0 for r in reports]
    val = [r.val.r2 if r.val.r2 is not None else 0.0 for r in reports]
    return _bar_chart("R2 by algorithm", labels, [("train", train), ("validation", val)])


def render_training_time_svg(reports: list[EvalReport]) -> str:
    labels = [r.algorithm for r in reports]
    times = [r.training_time_s for r in reports]
    return _bar_chart("Training time (s) by algorithm", labels, [("training time", times)])


def render_report(reports: list[EvalReport], fmt: str, out: str) -> list[str]:
    """Write the report in the requested format; returns written paths.

    md and csv write one table file; svg writes r2.svg and
    training_time.svg into the `out` directory.
    """
    if not reports:
        raise ConfigInvalid("report", "report is empty")
    if fmt == "md":
        _write(out, render_markdown(reports))
        return [out]
    if fmt == "csv":
        _write(out, render_csv(reports))
        return [out]
    if fmt == "svg":
        os.makedirs(out, exist_ok=True)
        paths = []
        for name, text in (
            ("r2.svg", render_r2_svg(reports)),
            ("training_time.svg", render_training_time_svg(reports)),
        ):
            path = os.path.join(out, name)
            _write(path, text)
            paths.append(path)
        return paths
    raise ConfigInvalid("format", f"unknown report format {fmt!r}")


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
