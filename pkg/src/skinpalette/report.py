"""Figure rendering and report emission.

All figures are written as hand-built SVG so output bytes are a pure
function of the data: fixed decimal formatting, no locale or timestamp
inputs, elements emitted in deterministic order. Swatch strips contain one
``rect`` per palette entry and nothing else rect-shaped, so figures are
directly checkable. Machine-readable outputs are palette JSON, two CSVs,
and a run manifest; only the manifest's timestamp differs between reruns.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from xml.sax.saxutils import escape

from . import __version__
from .errors import EmptyCohortError, EmptyPaletteError, ReportWriteError
from .metrics import CohortMetrics, DistanceMatrix
from .palette import Palette, palette_to_json, sort_by_lightness, sort_by_proportion
from .refsys import GamutReport, ReferenceSystem, gamut_report_to_dict
from .color import hsl_to_rgb

# Greenish marker fills for cohort points, reddish for reference points.
COHORT_FILLS = ("#1b9e77", "#66a61e", "#41ab5d", "#006d2c", "#74c476", "#238b45")
REFERENCE_FILL = "#e41a1c"


@dataclass(frozen=True)
class RenderSpec:
    width: int = 800
    height: int = 480
    swatch_gap: int = 2
    sort_mode: str = "proportion"
    proportional_widths: bool = True

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("render dimensions must be positive")
        if self.sort_mode not in ("proportion", "lightness"):
            raise ValueError(f"unknown sort mode {self.sort_mode!r}")


@dataclass(frozen=True)
class CohortReport:
    cohort_id: str
    palette: Palette
    metrics: CohortMetrics
    gamut: GamutReport | None = None
    config_echo: dict = field(default_factory=dict)
    n_scanned: int = 0
    skipped: int = 0
    orphans: int = 0


def _f(x: float) -> str:
    return f"{x:.2f}"


def _svg_open(width: int, height: int) -> str:
    return (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{width}" height="{height}" viewBox="0 0 {width} {height}">'
    )


def render_palette_strip(p: Palette, spec: RenderSpec = RenderSpec(width=800, height=100)) -> str:
    """One swatch rect per entry, left to right in the requested sort order."""
    if not p.entries:
        raise EmptyPaletteError(f"palette {p.cohort_id!r} has no entries")
    ordered = sort_by_lightness(p) if spec.sort_mode == "lightness" else sort_by_proportion(p)
    n = len(ordered.entries)
    gap = spec.swatch_gap
    inner = spec.width - gap * (n + 1)
    if inner < n:
        raise ValueError("strip too narrow for the palette")

    lines = [_svg_open(spec.width, spec.height)]
    lines.append(f'<title>{escape(p.cohort_id)} palette ({spec.sort_mode})</title>')
    lines.append('<g class="swatches">')
    x = float(gap)
    total = sum(e.proportion for e in ordered.entries)
    for i, e in enumerate(ordered.entries):
        if spec.proportional_widths and total > 0:
            w = inner * (e.proportion / total)
        else:
            w = inner / n
        fill = hsl_to_rgb(e.centroid_hsl).hex()
        lines.append(
            f'<rect class="swatch" x="{_f(x)}" y="{_f(gap)}" '
            f'width="{_f(w)}" height="{_f(spec.height - 2 * gap)}" fill="{fill}">'
            f"<title>h={e.centroid_hsl.h:.2f} s={e.centroid_hsl.s:.3f} "
            f"l={e.centroid_hsl.l:.3f} p={e.proportion:.4f}</title></rect>"
        )
        x += w + gap
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


_MARGIN = 56.0


def _scatter_axes(width: int, height: int) -> list[str]:
    x0, y0 = _MARGIN, height - _MARGIN
    x1, y1 = width - _MARGIN, _MARGIN
    lines = [
        '<g class="axes" stroke="#333333" fill="none">',
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y0)}"/>',
        f'<line x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x0)}" y2="{_f(y1)}"/>',
        "</g>",
        '<g class="labels" font-family="sans-serif" font-size="12" fill="#333333">',
        f'<text x="{_f((x0 + x1) / 2)}" y="{_f(y0 + 36)}" text-anchor="middle">hue (degrees)</text>',
        f'<text x="{_f(x0 - 40)}" y="{_f((y0 + y1) / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 {_f(x0 - 40)} {_f((y0 + y1) / 2)})">lightness</text>',
    ]
    for deg in range(0, 361, 60):
        x = x0 + (x1 - x0) * deg / 360.0
        lines.append(f'<text x="{_f(x)}" y="{_f(y0 + 16)}" text-anchor="middle">{deg}</text>')
    for tenth in range(0, 11, 2):
        l = tenth / 10.0
        y = y0 + (y1 - y0) * l
        lines.append(
            f'<text x="{_f(x0 - 8)}" y="{_f(y + 4)}" text-anchor="end">{l:.1f}</text>'
        )
    lines.append("</g>")
    return lines


def render_scatter(
    palettes: list[Palette],
    ref: ReferenceSystem | None = None,
    spec: RenderSpec = RenderSpec(),
) -> str:
    """Hue vs lightness scatter: cohort markers plus optional reference set.

    Hue 0 maps to the left edge, lightness 1 to the top. Cohort points are
    circles with ``class="cohort-marker"``; reference points are crosses
    with ``class="ref-marker"``.
    """
    if not palettes:
        raise EmptyPaletteError("scatter needs at least one palette")
    width, height = spec.width, spec.height
    x0, y0 = _MARGIN, height - _MARGIN
    x1, y1 = width - _MARGIN, _MARGIN

    def px(h: float) -> float:
        return x0 + (x1 - x0) * h / 360.0

    def py(l: float) -> float:
        return y0 + (y1 - y0) * l

    lines = [_svg_open(width, height)]
    lines.append("<title>palette hue vs lightness</title>")
    lines.extend(_scatter_axes(width, height))

    if ref is not None:
        lines.append(f'<g class="reference" stroke="{REFERENCE_FILL}" stroke-width="1.5">')
        for label, hsl in ref.colors:
            cx, cy = px(hsl.h), py(hsl.l)
            lines.append(
                f'<path class="ref-marker" d="M {_f(cx - 3)} {_f(cy - 3)} L {_f(cx + 3)} '
                f'{_f(cy + 3)} M {_f(cx - 3)} {_f(cy + 3)} L {_f(cx + 3)} {_f(cy - 3)}">'
                f"<title>{escape(label)}</title></path>"
            )
        lines.append("</g>")

    for idx, p in enumerate(palettes):
        fill = COHORT_FILLS[idx % len(COHORT_FILLS)]
        lines.append(f'<g class="cohort cohort-{escape(p.cohort_id)}" fill="{fill}">')
        for e in p.entries:
            lines.append(
                f'<circle class="cohort-marker" cx="{_f(px(e.centroid_hsl.h))}" '
                f'cy="{_f(py(e.centroid_hsl.l))}" r="3.5" fill-opacity="0.8"/>'
            )
        lines.append("</g>")

    lines.append('<g class="legend" font-family="sans-serif" font-size="12">')
    ly = y1 + 4.0
    for idx, p in enumerate(palettes):
        fill = COHORT_FILLS[idx % len(COHORT_FILLS)]
        lines.append(
            f'<circle class="legend-swatch" cx="{_f(x1 - 120)}" cy="{_f(ly)}" r="5" fill="{fill}"/>'
        )
        lines.append(
            f'<text x="{_f(x1 - 110)}" y="{_f(ly + 4)}" fill="#333333">{escape(p.cohort_id)}</text>'
        )
        ly += 18.0
    if ref is not None:
        lines.append(
            f'<path class="legend-swatch" stroke="{REFERENCE_FILL}" stroke-width="1.5" '
            f'd="M {_f(x1 - 123)} {_f(ly - 3)} L {_f(x1 - 117)} {_f(ly + 3)} '
            f'M {_f(x1 - 123)} {_f(ly + 3)} L {_f(x1 - 117)} {_f(ly - 3)}"/>'
        )
        lines.append(
            f'<text x="{_f(x1 - 110)}" y="{_f(ly + 4)}" fill="#333333">{escape(ref.name)}</text>'
        )
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def render_polar(palettes: list[Palette], spec: RenderSpec = RenderSpec(width=560, height=560)) -> str:
    """Polar projection of the color cylinder: hue angle, saturation radius.

    Marker radius encodes lightness, standing in for the third axis.
    """
    if not palettes:
        raise EmptyPaletteError("polar projection needs at least one palette")
    width, height = spec.width, spec.height
    cx, cy = width / 2.0, height / 2.0
    radius = min(width, height) / 2.0 - 40.0

    lines = [_svg_open(width, height)]
    lines.append("<title>palette hue/saturation polar projection</title>")
    lines.append('<g class="grid" stroke="#cccccc" fill="none">')
    for frac in (0.25, 0.5, 0.75, 1.0):
        lines.append(f'<circle cx="{_f(cx)}" cy="{_f(cy)}" r="{_f(radius * frac)}"/>')
    for deg in range(0, 360, 30):
        rad = math.radians(deg)
        lines.append(
            f'<line x1="{_f(cx)}" y1="{_f(cy)}" '
            f'x2="{_f(cx + radius * math.cos(rad))}" y2="{_f(cy - radius * math.sin(rad))}"/>'
        )
    lines.append("</g>")
    lines.append('<g class="grid-labels" font-family="sans-serif" font-size="11" fill="#666666">')
    for deg in (0, 90, 180, 270):
        rad = math.radians(deg)
        lines.append(
            f'<text x="{_f(cx + (radius + 14) * math.cos(rad))}" '
            f'y="{_f(cy - (radius + 14) * math.sin(rad) + 4)}" text-anchor="middle">{deg}</text>'
        )
    lines.append("</g>")

    for idx, p in enumerate(palettes):
        fill = COHORT_FILLS[idx % len(COHORT_FILLS)]
        lines.append(f'<g class="cohort cohort-{escape(p.cohort_id)}" fill="{fill}">')
        for e in p.entries:
            c = e.centroid_hsl
            rad = math.radians(c.h)
            r_pt = radius * c.s
            marker = 2.0 + 4.0 * c.l
            lines.append(
                f'<circle class="cohort-marker" cx="{_f(cx + r_pt * math.cos(rad))}" '
                f'cy="{_f(cy - r_pt * math.sin(rad))}" r="{_f(marker)}" fill-opacity="0.8"/>'
            )
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def metrics_csv(metrics: list[CohortMetrics]) -> str:
    lines = ["cohort_id,n_faces,texture_mean,brightness_mean,saturation_mean"]
    for m in metrics:
        lines.append(
            f"{m.cohort_id},{m.n_faces},{m.texture_mean:.6f},"
            f"{m.brightness_mean:.6f},{m.saturation_mean:.6f}"
        )
    return "\n".join(lines) + "\n"


def distances_csv(matrix: DistanceMatrix) -> str:
    ids = matrix.cohort_ids
    lines = ["cohort," + ",".join(ids)]
    for i, cid in enumerate(ids):
        row = ",".join(f"{matrix.values[i, j]:.6f}" for j in range(len(ids)))
        lines.append(f"{cid},{row}")
    return "\n".join(lines) + "\n"


def emit_report(
    reports: list[CohortReport],
    matrix: DistanceMatrix | None,
    out_dir: Path | str,
    reference: ReferenceSystem | None = None,
) -> list[Path]:
    """Write the full output tree; atomic at the run level.

    Payloads are built in memory first; on any write failure, files already
    written by this call are removed and ReportWriteError is raised.
    """
    if not reports:
        raise EmptyCohortError("no cohort reports to emit")
    out_dir = Path(out_dir)

    payloads: list[tuple[str, str]] = []
    for rep in reports:
        cid = rep.cohort_id
        payloads.append((f"{cid}/palette.json", palette_to_json(rep.palette)))
        payloads.append(
            (
                f"{cid}/strip_by_size.svg",
                render_palette_strip(rep.palette, RenderSpec(width=800, height=100, sort_mode="proportion")),
            )
        )
        payloads.append(
            (
                f"{cid}/strip_by_lightness.svg",
                render_palette_strip(rep.palette, RenderSpec(width=800, height=100, sort_mode="lightness")),
            )
        )
    payloads.append(("metrics.csv", metrics_csv([r.metrics for r in reports])))
    if matrix is not None:
        payloads.append(("distances.csv", distances_csv(matrix)))
    palettes = [r.palette for r in reports]
    payloads.append(("scatter.svg", render_scatter(palettes, reference)))
    payloads.append(("polar.svg", render_polar(palettes)))

    # Volatile run details are grouped under "invocation"; everything else
    # in the manifest is a pure function of inputs and config.
    manifest = {
        "tool": "skinpalette",
        "version": __version__,
        "invocation": {
            "created_utc": datetime.now(timezone.utc).isoformat(),
            "out_dir": str(out_dir),
        },
        "config": reports[0].config_echo,
        "config_hash": reports[0].palette.config_hash,
        "cohorts": [
            {
                "id": r.cohort_id,
                "n_images_scanned": r.n_scanned,
                "n_faces": r.metrics.n_faces,
                "n_samples": r.palette.n_samples,
                "skipped": r.skipped,
                "orphans": r.orphans,
                "gamut_out_fraction": (
                    round(r.gamut.out_fraction_weighted, 6) if r.gamut else None
                ),
            }
            for r in reports
        ],
        "gamut": [gamut_report_to_dict(r.gamut) for r in reports if r.gamut] or None,
        "files": sorted(rel for rel, _ in payloads) + ["manifest.json"],
    }
    payloads.append(("manifest.json", json.dumps(manifest, indent=2) + "\n"))

    written: list[Path] = []
    try:
        for rel, text in payloads:
            target = out_dir / rel
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8", newline="\n")
            written.append(target)
    except OSError as exc:
        for path in written:
            try:
                path.unlink()
            except OSError:
                pass
        raise ReportWriteError(f"failed writing report to {out_dir}: {exc}") from exc
    return written
