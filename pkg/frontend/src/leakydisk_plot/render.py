"""Render spectrum and bound-curve CSV files into publication-style plots.

This package never computes spectra: it consumes the flat CSV files the
scan pipelines emit (one `# meta:` JSON comment line, a header row, then
one resonance per row) and draws either an Im-vs-Re scatter with dashed
bound overlays or a log-log band plot. Output is deterministic: fixed
style, pinned SVG hash salt, no embedded dates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "leakydisk-plot"

import matplotlib.pyplot as plt

SPECTRUM_COLUMNS = ["n", "re_lambda", "im_lambda", "residual", "certified",
                    "init_kind", "band_residual", "multiplicity"]


class SchemaError(ValueError):
    """CSV does not match the documented spectrum/curves schema."""


@dataclass
class PlotSpec:
    spectrum_csv: str
    curves_csv: str | None = None
    axes: str = "linear"  # linear | loglog
    title: str = ""
    xlabel: str = ""
    ylabel: str = ""
    out_base: str = "plot"  # writes out_base.png and out_base.svg
    bands: int = 5
    meta: dict = field(default_factory=dict)


def read_spectrum(path: str):
    rows = []
    meta = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("# meta:"):
                try:
                    meta = json.loads(line[len("# meta:"):])
                except json.JSONDecodeError as exc:
                    raise SchemaError(f"{path}:{lineno}: bad meta JSON: {exc}")
                continue
            if line.startswith(SPECTRUM_COLUMNS[0] + ","):
                header = line.split(",")
                if header != SPECTRUM_COLUMNS:
                    raise SchemaError(f"{path}:{lineno}: unexpected header {header}")
                continue
            parts = line.split(",")
            if len(parts) != len(SPECTRUM_COLUMNS):
                raise SchemaError(f"{path}:{lineno}: expected "
                                  f"{len(SPECTRUM_COLUMNS)} fields, got {len(parts)}")
            try:
                rows.append({
                    "n": int(parts[0]),
                    "re": float(parts[1]),
                    "im": float(parts[2]),
                    "certified": bool(int(parts[4])),
                })
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}")
    return rows, meta


def read_curves(path: str):
    rows = []
    with open(path) as fh:
        header: list[str] | None = None
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if header is None:
                header = line.split(",")
                if header[:2] != ["re_lambda", "log_bound"]:
                    raise SchemaError(f"{path}:{lineno}: unexpected curves header")
                continue
            parts = line.split(",")
            if len(parts) != len(header):
                raise SchemaError(f"{path}:{lineno}: ragged curves row")
            try:
                rows.append([float(x) for x in parts])
            except ValueError as exc:
                raise SchemaError(f"{path}:{lineno}: {exc}")
    return rows, header or []


def build_figure(spec: PlotSpec):
    """Build the matplotlib figure; returns (fig, stats).

    stats carries the plotted point count (equal to the spectrum row count
    in linear mode) and the number of overlay curves, for round-trip checks.
    """
    rows, meta = read_spectrum(spec.spectrum_csv)
    curves = None
    curve_header: list[str] = []
    if spec.curves_csv:
        curves, curve_header = read_curves(spec.curves_csv)

    fig, ax = plt.subplots(figsize=(7.0, 4.6), dpi=120)
    certified = [r for r in rows if r["certified"]]
    flagged = [r for r in rows if not r["certified"]]

    if spec.axes == "linear":
        ax.plot([r["re"] for r in certified], [r["im"] for r in certified],
                ".", ms=4, color="#1f4e9c", label="certified")
        if flagged:
            ax.plot([r["re"] for r in flagged], [r["im"] for r in flagged],
                    "x", ms=5, color="#c23b22", label="uncertified")
        if curves:
            xs = [c[0] for c in curves]
            ax.plot(xs, [-c[1] for c in curves], "--", color="0.25", lw=1.2,
                    label="free-region bound")
        ax.set_xlabel(spec.xlabel or "Re lambda")
        ax.set_ylabel(spec.ylabel or "Im lambda")
    elif spec.axes == "loglog":
        import math

        pts = [r for r in certified if r["im"] < 0 and r["re"] > 0]
        ax.plot([math.log10(r["re"]) for r in pts],
                [math.log10(-r["im"]) for r in pts],
                ".", ms=4, color="#1f4e9c", label="certified")
        if curves:
            xs = [c[0] for c in curves if c[0] > 0]
            n_bands = min(spec.bands, len(curve_header) - 2)
            for b in range(n_bands):
                ys = [c[2 + b] for c in curves if c[0] > 0]
                ax.plot([math.log10(x) for x in xs],
                        [math.log10(y) for y in ys],
                        "--", lw=1.0, color="0.4",
                        label="band depths" if b == 0 else None)
        ax.set_xlabel(spec.xlabel or "log10 Re lambda")
        ax.set_ylabel(spec.ylabel or "log10(-Im lambda)")
    else:
        raise ValueError(f"unknown axes mode {spec.axes!r}")

    if not rows:
        ax.text(0.5, 0.5, "empty spectrum", transform=ax.transAxes,
                ha="center", va="center", color="0.4")
    title = spec.title or meta.get("figure", "")
    if title:
        ax.set_title(str(title))
    if rows or curves:
        ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    points = sum(
        len(line.get_xdata()) for line in ax.lines
        if line.get_linestyle().lower() in ("none", "")
    )
    n_overlays = sum(1 for line in ax.lines if line.get_linestyle() == "--")
    stats = {"points": points, "overlays": n_overlays, "rows": len(rows)}
    return fig, stats


def render(spec: PlotSpec) -> list[str]:
    """Draw one spectrum plot; returns the written file paths (PNG, SVG)."""
    fig, _stats = build_figure(spec)
    paths = []
    for ext in ("png", "svg"):
        out = f"{spec.out_base}.{ext}"
        fig.savefig(out, metadata={"Date": None} if ext == "svg" else None)
        paths.append(out)
    plt.close(fig)
    return paths
