"""Synthetic demo corpus: four cohorts with known generator colors.

The generator paints each face with striped variants of a cohort base
color, places a schematic 68-point landmark layout, and adds a cohort-sized
bright patch, giving every downstream stage something nontrivial to
measure. Base colors are chosen so all six pairwise cylinder-space
distances are distinct, which makes the emitted distance matrix ordering
checkable against the generator.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np
from PIL import Image

from .color import HslColor, hsl_to_rgb, unembed
from .geometry import LANDMARK_COUNT, LandmarkSet
from .rng import Xoshiro256StarStar

DEMO_COHORTS = (
    ("kr", "Cohort KR"),
    ("cn", "Cohort CN"),
    ("th", "Cohort TH"),
    ("jp", "Cohort JP"),
)

# Cylinder-space generator points (s*cos h, s*sin h, l); all inside the
# default skin gate, all six pairwise distances distinct.
DEMO_BASE_POINTS = {
    "kr": (0.30, 0.10, 0.70),
    "cn": (0.42, 0.22, 0.66),
    "th": (0.38, 0.42, 0.64),
    "jp": (0.28, -0.12, 0.88),
}

# Side length of the near-white patch painted inside the face box.
DEMO_BRIGHT_SIDE = {"kr": 0, "cn": 5, "th": 8, "jp": 12}

# Stripe jitter must survive 8-bit quantization (one channel step is about
# 0.004 in embedded units) so each cohort yields well over k distinct
# colors, while staying far below the smallest gap between cohort base
# distances (0.031) so the emitted distance ordering stays generator-true.
_STRIPE_WIDTH = 6
_N_VARIANTS = 16
_JITTER = 0.010


def demo_base_colors() -> dict[str, HslColor]:
    """Generator colors as HSL, for tests that need the ground truth."""
    return {cid: unembed(*point) for cid, point in DEMO_BASE_POINTS.items()}


def demo_pairwise_distances() -> dict[tuple[str, str], float]:
    """Ground-truth cylinder distances between cohort generator colors."""
    out = {}
    ids = [cid for cid, _ in DEMO_COHORTS]
    for i, a in enumerate(ids):
        for b in ids[i + 1 :]:
            out[(a, b)] = math.dist(DEMO_BASE_POINTS[a], DEMO_BASE_POINTS[b])
    return out


def canonical_landmarks(width: int, height: int) -> LandmarkSet:
    """Schematic 68-point layout in iBUG ordering, scaled to the image."""
    pts: list[tuple[float, float]] = [(0.0, 0.0)] * LANDMARK_COUNT
    # jaw 0..16: half ellipse
    for i in range(17):
        t = math.pi * i / 16.0
        pts[i] = (0.5 - 0.38 * math.cos(t), 0.35 + 0.57 * math.sin(t))
    # brows 17..26
    for i in range(5):
        pts[17 + i] = (0.22 + 0.045 * i, 0.30)
        pts[22 + i] = (0.56 + 0.045 * i, 0.30)
    # nose bridge 27..30 and bottom 31..35 (31 = left nasal wing)
    for i in range(4):
        pts[27 + i] = (0.50, 0.38 + 0.05 * i)
    for i in range(5):
        pts[31 + i] = (0.42 + 0.04 * i, 0.58)
    # eyes 36..47 (36 = left outer corner, 39 = left inner corner)
    left_eye = [(0.28, 0.40), (0.32, 0.38), (0.36, 0.38), (0.40, 0.40), (0.36, 0.42), (0.32, 0.42)]
    right_eye = [(0.60, 0.40), (0.64, 0.38), (0.68, 0.38), (0.72, 0.40), (0.68, 0.42), (0.64, 0.42)]
    for i, p in enumerate(left_eye):
        pts[36 + i] = p
    for i, p in enumerate(right_eye):
        pts[42 + i] = p
    # mouth 48..67: outer ring then inner ring (48 = left corner)
    for i in range(12):
        t = math.pi * i / 6.0
        pts[48 + i] = (0.5 - 0.16 * math.cos(t), 0.72 + 0.07 * math.sin(t))
    for i in range(8):
        t = math.pi * i / 4.0
        pts[60 + i] = (0.5 - 0.10 * math.cos(t), 0.72 + 0.035 * math.sin(t))
    scaled = np.array(pts, dtype=np.float64) * np.array([width - 1, height - 1])
    return LandmarkSet(scaled)


def _stripe_variants(cohort_id: str, rng: Xoshiro256StarStar) -> list[HslColor]:
    base = DEMO_BASE_POINTS[cohort_id]
    variants = []
    for _ in range(_N_VARIANTS):
        jitter = [(rng.random() * 2.0 - 1.0) * _JITTER for _ in range(3)]
        variants.append(
            unembed(base[0] + jitter[0], base[1] + jitter[1], base[2] + jitter[2])
        )
    return variants


def _paint_face(cohort_id: str, size: int, rng: Xoshiro256StarStar) -> np.ndarray:
    array = np.empty((size, size, 3), dtype=np.uint8)
    variants = [hsl_to_rgb(v) for v in _stripe_variants(cohort_id, rng)]
    for x in range(size):
        c = variants[(x // _STRIPE_WIDTH) % _N_VARIANTS]
        array[:, x] = (c.r, c.g, c.b)
    side = DEMO_BRIGHT_SIDE[cohort_id]
    if side:
        x0 = round(size * 0.62)
        y0 = round(size * 0.35)
        array[y0 : y0 + side, x0 : x0 + side] = (255, 255, 255)
    return array


def _write_pts(path: Path, landmarks: LandmarkSet) -> None:
    lines = ["version: 1", f"n_points: {LANDMARK_COUNT}", "{"]
    for x, y in landmarks.points:
        lines.append(f"{x:.3f} {y:.3f}")
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _write_landmark_json(path: Path, landmarks: LandmarkSet) -> None:
    points = [[round(float(x), 3), round(float(y), 3)] for x, y in landmarks.points]
    path.write_text(json.dumps({"points": points}) + "\n", encoding="utf-8")


def generate_demo_corpus(
    root: Path | str,
    images_per_cohort: int = 25,
    size: int = 96,
    seed: int = 11,
) -> Path:
    """Materialize the demo corpus under ``root``; returns the manifest path.

    One cohort uses iBUG .pts sidecars so both landmark formats are
    exercised end to end; the rest use the JSON sidecar format.
    """
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    landmarks = canonical_landmarks(size, size)
    cohorts = []
    for cohort_index, (cid, name) in enumerate(DEMO_COHORTS):
        cdir = root / cid
        cdir.mkdir(parents=True, exist_ok=True)
        for i in range(images_per_cohort):
            rng = Xoshiro256StarStar(seed * 1_000_003 + cohort_index * 1_009 + i)
            array = _paint_face(cid, size, rng)
            stem = f"face_{i:03d}"
            Image.fromarray(array, mode="RGB").save(cdir / f"{stem}.png")
            if cid == "jp":
                _write_pts(cdir / f"{stem}.pts", landmarks)
            else:
                _write_landmark_json(cdir / f"{stem}.landmarks.json", landmarks)
        cohorts.append({"id": cid, "root": cid, "name": name})
    manifest_path = root / "manifest.json"
    manifest_path.write_text(
        json.dumps({"version": 1, "cohorts": cohorts}, indent=2) + "\n", encoding="utf-8"
    )
    return manifest_path
