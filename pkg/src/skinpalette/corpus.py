"""Corpus ingestion: manifests, image/landmark discovery, decoding.

The corpus is a local directory tree described by a JSON manifest. Every
image needs a landmark sidecar (``<stem>.landmarks.json`` or iBUG
``<stem>.pts``); images without one are skipped with a warning count.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import (
    DuplicateCohortIdError,
    ImageDecodeError,
    LandmarkParseError,
    ManifestError,
    MissingFileError,
    UnknownCohortError,
    WrongPointCountError,
)
from .geometry import LANDMARK_COUNT, LandmarkSet

IMAGE_SUFFIXES = (".png", ".jpg", ".jpeg")
_COHORT_ID_RE = re.compile(r"^[A-Za-z0-9._-]+$")


@dataclass(frozen=True)
class CohortEntry:
    cohort_id: str
    root: Path
    display_name: str


@dataclass(frozen=True)
class CohortManifest:
    version: int
    cohorts: tuple[CohortEntry, ...]

    def cohort_ids(self) -> tuple[str, ...]:
        return tuple(c.cohort_id for c in self.cohorts)

    def get(self, cohort_id: str) -> CohortEntry:
        for c in self.cohorts:
            if c.cohort_id == cohort_id:
                return c
        raise UnknownCohortError(f"cohort {cohort_id!r} not in manifest")


@dataclass(frozen=True)
class ImageRecord:
    cohort_id: str
    image_path: Path
    landmark_path: Path
    stable_id: str


@dataclass(frozen=True)
class ScanResult:
    """Records found for one cohort plus the count of sidecar-less images."""

    records: tuple[ImageRecord, ...]
    orphan_count: int


@dataclass(frozen=True, eq=False)
class PixelGrid:
    """8-bit RGB raster stored row-major as an (h, w, 3) uint8 array."""

    array: np.ndarray

    def __post_init__(self):
        a = self.array
        if a.ndim != 3 or a.shape[2] != 3 or a.dtype != np.uint8:
            raise ValueError("PixelGrid requires an (h, w, 3) uint8 array")
        if a.shape[0] < 1 or a.shape[1] < 1:
            raise ValueError("PixelGrid must be at least 1x1")

    @property
    def width(self) -> int:
        return int(self.array.shape[1])

    @property
    def height(self) -> int:
        return int(self.array.shape[0])


def load_manifest(path: Path | str) -> CohortManifest:
    """Read and validate a cohort manifest JSON document.

    Cohort roots are resolved relative to the manifest's directory. Cohort
    order is preserved as written.
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"manifest not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ManifestError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError(f"{path}: top level must be an object")
    version = doc.get("version")
    if not isinstance(version, int):
        raise ManifestError(f"{path}: field 'version' must be an integer")
    raw = doc.get("cohorts")
    if not isinstance(raw, list) or not raw:
        raise ManifestError(f"{path}: field 'cohorts' must be a non-empty list")

    base = path.parent
    entries: list[CohortEntry] = []
    seen: set[str] = set()
    for i, item in enumerate(raw):
        if not isinstance(item, dict):
            raise ManifestError(f"{path}: cohorts[{i}] must be an object")
        cid = item.get("id")
        if not isinstance(cid, str) or not cid:
            raise ManifestError(f"{path}: cohorts[{i}].id must be a non-empty string")
        if not _COHORT_ID_RE.match(cid):
            raise ManifestError(
                f"{path}: cohorts[{i}].id {cid!r} must match [A-Za-z0-9._-]+"
            )
        if cid in seen:
            raise DuplicateCohortIdError(f"{path}: duplicate cohort id {cid!r}")
        seen.add(cid)
        root = item.get("root")
        if not isinstance(root, str) or not root:
            raise ManifestError(f"{path}: cohorts[{i}].root must be a non-empty string")
        name = item.get("name", "")
        if not isinstance(name, str):
            raise ManifestError(f"{path}: cohorts[{i}].name must be a string")
        entries.append(CohortEntry(cid, (base / root).resolve(), name or cid))
    return CohortManifest(version=version, cohorts=tuple(entries))


def _sidecar_for(image_path: Path) -> Path | None:
    json_side = image_path.with_name(image_path.stem + ".landmarks.json")
    if json_side.is_file():
        return json_side
    pts_side = image_path.with_name(image_path.stem + ".pts")
    if pts_side.is_file():
        return pts_side
    return None


def scan_cohort(manifest: CohortManifest, cohort_id: str) -> ScanResult:
    """Enumerate image+sidecar pairs under a cohort root, sorted by path.

    Images lacking a sidecar are counted as orphans, not errors. An empty or
    pair-less directory yields an empty record list.
    """
    entry = manifest.get(cohort_id)
    root = entry.root
    if not root.is_dir():
        raise MissingFileError(f"cohort {cohort_id!r} root not found: {root}")

    images = sorted(
        (p for p in root.rglob("*") if p.is_file() and p.suffix.lower() in IMAGE_SUFFIXES),
        key=lambda p: p.as_posix(),
    )
    records: list[ImageRecord] = []
    orphans = 0
    for img in images:
        sidecar = _sidecar_for(img)
        if sidecar is None:
            orphans += 1
            continue
        rel = img.relative_to(root).as_posix()
        records.append(
            ImageRecord(
                cohort_id=cohort_id,
                image_path=img,
                landmark_path=sidecar,
                stable_id=f"{cohort_id}:{rel}",
            )
        )
    return ScanResult(records=tuple(records), orphan_count=orphans)


def load_image(record: ImageRecord) -> PixelGrid:
    """Decode a record's image to 8-bit RGB, compositing alpha over white."""
    try:
        with Image.open(record.image_path) as img:
            img.load()
            if img.mode in ("RGBA", "LA", "PA") or "transparency" in img.info:
                rgba = img.convert("RGBA")
                white = Image.new("RGBA", rgba.size, (255, 255, 255, 255))
                img = Image.alpha_composite(white, rgba)
            rgb = img.convert("RGB")
            return PixelGrid(np.asarray(rgb, dtype=np.uint8))
    except FileNotFoundError as exc:
        raise MissingFileError(f"image not found: {record.image_path}") from exc
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise ImageDecodeError(f"{record.image_path}: {exc}") from exc


def _parse_landmark_json(path: Path) -> list[tuple[float, float]]:
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise LandmarkParseError(f"{path}: not valid JSON: {exc}") from exc
    points = doc.get("points") if isinstance(doc, dict) else None
    if not isinstance(points, list):
        raise LandmarkParseError(f"{path}: missing 'points' list")
    out = []
    for i, pt in enumerate(points):
        if not (isinstance(pt, (list, tuple)) and len(pt) == 2):
            raise LandmarkParseError(f"{path}: points[{i}] must be an [x, y] pair")
        try:
            x, y = float(pt[0]), float(pt[1])
        except (TypeError, ValueError) as exc:
            raise LandmarkParseError(f"{path}: points[{i}] not numeric") from exc
        out.append((x, y))
    return out


def _parse_landmark_pts(path: Path) -> list[tuple[float, float]]:
    # iBUG .pts: "version: 1" / "n_points: 68" / "{" / x y lines / "}"
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise LandmarkParseError(f"{path}: not UTF-8 text") from exc
    lines = [ln.strip() for ln in text.splitlines()]
    try:
        open_idx = lines.index("{")
        close_idx = len(lines) - 1 - lines[::-1].index("}")
    except ValueError as exc:
        raise LandmarkParseError(f"{path}: missing brace-delimited point block") from exc
    declared = None
    for ln in lines[:open_idx]:
        if ln.lower().startswith("n_points:"):
            try:
                declared = int(ln.split(":", 1)[1].strip())
            except ValueError as exc:
                raise LandmarkParseError(f"{path}: bad n_points line {ln!r}") from exc
    out = []
    for ln in lines[open_idx + 1 : close_idx]:
        if not ln:
            continue
        parts = ln.split()
        if len(parts) != 2:
            raise LandmarkParseError(f"{path}: bad point line {ln!r}")
        try:
            out.append((float(parts[0]), float(parts[1])))
        except ValueError as exc:
            raise LandmarkParseError(f"{path}: bad point line {ln!r}") from exc
    if declared is not None and declared != len(out):
        raise LandmarkParseError(
            f"{path}: n_points says {declared} but block holds {len(out)}"
        )
    return out


def load_landmarks(record: ImageRecord) -> LandmarkSet:
    """Parse a landmark sidecar into a 68-point LandmarkSet.

    Points are kept in file order and may lie off-image; sampling clamps
    later. Non-finite coordinates are a parse error.
    """
    path = record.landmark_path
    if not path.is_file():
        raise MissingFileError(f"landmark sidecar not found: {path}")
    if path.suffix.lower() == ".pts":
        points = _parse_landmark_pts(path)
    else:
        points = _parse_landmark_json(path)
    if len(points) != LANDMARK_COUNT:
        raise WrongPointCountError(len(points), str(path))
    for i, (x, y) in enumerate(points):
        if not (math.isfinite(x) and math.isfinite(y)):
            raise LandmarkParseError(f"{path}: points[{i}] not finite")
    return LandmarkSet(np.array(points, dtype=np.float64))


class Corpus:
    """A manifest plus the scanning/loading operations over its tree."""

    def __init__(self, manifest: CohortManifest):
        self.manifest = manifest

    @classmethod
    def open(cls, manifest_path: Path | str) -> "Corpus":
        return cls(load_manifest(manifest_path))

    def cohort_ids(self) -> tuple[str, ...]:
        return self.manifest.cohort_ids()

    def scan(self, cohort_id: str) -> ScanResult:
        return scan_cohort(self.manifest, cohort_id)
