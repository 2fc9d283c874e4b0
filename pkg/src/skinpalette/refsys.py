"""Reference skin-color systems and palette gamut coverage.

Commercial skin-tone charts are proprietary, so the package bundles a
clearly synthetic demo system spanning typical foundation hue/lightness
ranges; real charts load from the same CSV schema (``label,h,s,l`` or
``label,r,g,b`` with a header row).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .color import HslColor, canonical_hsl, embed, rgb_to_hsl, RgbColor
from .errors import (
    DuplicateLabelError,
    EmptyPaletteError,
    EmptySystemError,
    MissingFileError,
    ReferenceParseError,
)
from .palette import Palette

DEFAULT_EPSILON = 0.05


@dataclass(frozen=True)
class ReferenceSystem:
    name: str
    colors: tuple[tuple[str, HslColor], ...]


@dataclass(frozen=True)
class GamutEntry:
    entry_index: int
    nearest_label: str
    distance: float
    in_gamut: bool


@dataclass(frozen=True)
class GamutReport:
    cohort_id: str
    refsys_name: str
    epsilon: float
    per_entry: tuple[GamutEntry, ...]
    out_fraction_weighted: float


def _parse_float(row_no: int, field: str, value: str) -> float:
    try:
        out = float(value)
    except ValueError as exc:
        raise ReferenceParseError(f"row {row_no}: field {field!r} not numeric: {value!r}") from exc
    if not math.isfinite(out):
        raise ReferenceParseError(f"row {row_no}: field {field!r} not finite")
    return out


def _parse_channel(row_no: int, field: str, value: str) -> int:
    v = _parse_float(row_no, field, value)
    if v != int(v) or not 0 <= v <= 255:
        raise ReferenceParseError(f"row {row_no}: channel {field!r}={value!r} outside 0..255")
    return int(v)


def load_reference(path: Path | str) -> ReferenceSystem:
    """Parse a reference CSV; columns are label,h,s,l or label,r,g,b."""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"reference system not found: {path}")
    with path.open(encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise EmptySystemError(f"{path}: empty file") from None
        cols = [c.strip().lower() for c in header]
        if cols == ["label", "h", "s", "l"]:
            mode = "hsl"
        elif cols == ["label", "r", "g", "b"]:
            mode = "rgb"
        else:
            raise ReferenceParseError(
                f"{path}: header must be label,h,s,l or label,r,g,b, got {header!r}"
            )
        colors: list[tuple[str, HslColor]] = []
        seen: set[str] = set()
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 4:
                raise ReferenceParseError(f"{path}: row {row_no} needs 4 fields, got {len(row)}")
            label = row[0].strip()
            if not label:
                raise ReferenceParseError(f"{path}: row {row_no} has an empty label")
            if label in seen:
                raise DuplicateLabelError(f"{path}: duplicate label {label!r} at row {row_no}")
            seen.add(label)
            if mode == "hsl":
                h = _parse_float(row_no, "h", row[1])
                s = _parse_float(row_no, "s", row[2])
                l = _parse_float(row_no, "l", row[3])
                if not (0.0 <= h <= 360.0 and 0.0 <= s <= 1.0 and 0.0 <= l <= 1.0):
                    raise ReferenceParseError(
                        f"{path}: row {row_no} ({label}) outside HSL ranges"
                    )
                hsl = canonical_hsl(h, s, l)
            else:
                rgb = RgbColor(
                    _parse_channel(row_no, "r", row[1]),
                    _parse_channel(row_no, "g", row[2]),
                    _parse_channel(row_no, "b", row[3]),
                )
                hsl = rgb_to_hsl(rgb)
            colors.append((label, hsl))
    if not colors:
        raise EmptySystemError(f"{path}: no color rows")
    return ReferenceSystem(name=path.stem, colors=tuple(colors))


def demo_reference_path() -> Path:
    """Location of the bundled synthetic demo reference system."""
    return Path(str(resources.files("skinpalette").joinpath("data/demo_reference.csv")))


def nearest_reference(c: HslColor, ref: ReferenceSystem) -> tuple[str, float]:
    """Nearest reference color in embedded space; ties pick the smaller label."""
    if not ref.colors:
        raise EmptySystemError(f"reference system {ref.name!r} has no colors")
    query = embed(c)
    best_label, best_dist = None, math.inf
    for label, hsl in ref.colors:
        e = embed(hsl)
        d = math.dist(query, e)
        if d < best_dist or (d == best_dist and (best_label is None or label < best_label)):
            best_label, best_dist = label, d
    return best_label, best_dist


def gamut_report(p: Palette, ref: ReferenceSystem, epsilon: float = DEFAULT_EPSILON) -> GamutReport:
    """Per-entry nearest references and the weighted out-of-gamut fraction."""
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if not p.entries:
        raise EmptyPaletteError(f"palette {p.cohort_id!r} has no entries")
    per_entry = []
    out_fraction = 0.0
    for i, entry in enumerate(p.entries):
        label, dist = nearest_reference(entry.centroid_hsl, ref)
        in_gamut = dist <= epsilon
        if not in_gamut:
            out_fraction += entry.proportion
        per_entry.append(GamutEntry(i, label, dist, in_gamut))
    return GamutReport(
        cohort_id=p.cohort_id,
        refsys_name=ref.name,
        epsilon=epsilon,
        per_entry=tuple(per_entry),
        out_fraction_weighted=out_fraction,
    )


def gamut_report_to_dict(report: GamutReport) -> dict:
    """JSON-ready dict with floats rounded to 6 decimals."""
    return {
        "cohort": report.cohort_id,
        "reference": report.refsys_name,
        "epsilon": round(report.epsilon, 6),
        "out_fraction_weighted": round(report.out_fraction_weighted, 6),
        "entries": [
            {
                "index": e.entry_index,
                "nearest_label": e.nearest_label,
                "distance": round(e.distance, 6),
                "in_gamut": e.in_gamut,
            }
            for e in report.per_entry
        ],
    }
