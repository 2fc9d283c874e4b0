"""Comparison measures: cheek texture, face brightness, palette distances.

Texture walks consecutive cheek samples within each segment (never across
the segment boundary) using the circular hue difference, so a 355->5 degree
step costs the same as 5->15. Brightness is the fraction of near-white
pixels inside the landmark face region. Palette distance is a
proportion-weighted symmetric nearest-neighbor (Chamfer) distance in the
cylinder embedding; it reduces to plain Euclidean distance for singleton
palettes and makes no triangle-inequality claim.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .color import (
    DEFAULT_LUMA_THRESHOLD,
    HslColor,
    embed_many,
    hue_diff,
    luma_array,
    passes_skin_gate,
)
from .corpus import PixelGrid
from .errors import (
    DuplicateCohortError,
    EmptyCohortError,
    EmptyFaceBoxError,
    EmptyPaletteError,
    TooFewSamplesError,
)
from .geometry import LandmarkSet, convex_hull, points_in_convex_polygon
from .palette import Palette


@dataclass(frozen=True)
class FaceTexture:
    image_id: str
    delta_mean: float
    n_deltas: int


@dataclass(frozen=True)
class FaceBrightness:
    image_id: str
    bright_pixels: int
    face_pixels: int
    ratio: float


@dataclass(frozen=True)
class CohortMetrics:
    cohort_id: str
    texture_mean: float
    brightness_mean: float
    saturation_mean: float
    n_faces: int


@dataclass(frozen=True)
class DistanceMatrix:
    cohort_ids: tuple[str, ...]
    values: np.ndarray


def _exact_mean(values: Sequence[float]) -> float:
    """Correctly rounded arithmetic mean via exact rational arithmetic.

    Float accumulation would break two contracts: N copies of a face must
    yield exactly the single-face metrics, and reversing a sample walk must
    not change its mean.
    """
    total = sum(map(Fraction, values))
    return float(total / len(values))


def texture_delta(
    face_samples: Sequence[Sequence[HslColor]],
    image_id: str = "",
    hue_mode: str = "circular",
) -> FaceTexture:
    """Mean per-step HSL delta over consecutive samples within each segment.

    ``hue_mode`` "circular" uses the normalized circular hue difference;
    "legacy_raw" uses the raw degree difference for study runs (its hue term
    then dominates the fractional s and l terms).
    """
    if hue_mode not in ("circular", "legacy_raw"):
        raise ValueError(f"unknown hue mode {hue_mode!r}")
    if not face_samples:
        raise TooFewSamplesError(f"{image_id or 'face'}: no segments to walk")
    deltas: list[float] = []
    for segment in face_samples:
        if len(segment) < 2:
            raise TooFewSamplesError(
                f"{image_id or 'face'}: each segment needs >= 2 samples, got {len(segment)}"
            )
        for a, b in zip(segment, segment[1:]):
            if hue_mode == "circular":
                dh = hue_diff(a.h, b.h)
            else:
                dh = b.h - a.h
            deltas.append(math.sqrt(dh * dh + (b.s - a.s) ** 2 + (b.l - a.l) ** 2))
    return FaceTexture(image_id, _exact_mean(deltas), len(deltas))


def _face_box(landmarks: LandmarkSet, width: int, height: int):
    p = landmarks.points
    x0 = max(int(math.floor(p[:, 0].min())), 0)
    x1 = min(int(math.floor(p[:, 0].max())), width - 1)
    y0 = max(int(math.floor(p[:, 1].min())), 0)
    y1 = min(int(math.floor(p[:, 1].max())), height - 1)
    if x0 > x1 or y0 > y1:
        raise EmptyFaceBoxError("landmark bounding box does not intersect the image")
    return x0, x1, y0, y1


def brightness_ratio(
    image: PixelGrid,
    landmarks: LandmarkSet,
    image_id: str = "",
    threshold: int = DEFAULT_LUMA_THRESHOLD,
    region: str = "bbox",
) -> FaceBrightness:
    """Fraction of face-region pixels with luma strictly above threshold.

    The face region is the landmark bounding box clamped to the image, or
    the landmark convex hull with ``region="hull"``.
    """
    if region not in ("bbox", "hull"):
        raise ValueError(f"unknown face region {region!r}")
    x0, x1, y0, y1 = _face_box(landmarks, image.width, image.height)
    box = image.array[y0 : y1 + 1, x0 : x1 + 1]
    lum = luma_array(box)
    if region == "hull":
        hull = convex_hull(landmarks.points)
        ys, xs = np.mgrid[y0 : y1 + 1, x0 : x1 + 1]
        mask = points_in_convex_polygon(xs.astype(np.float64), ys.astype(np.float64), hull)
        if not mask.any():
            raise EmptyFaceBoxError("landmark hull covers no pixels")
        lum = lum[mask]
    face_pixels = int(lum.size)
    bright = int((lum > threshold).sum())
    return FaceBrightness(image_id, bright, face_pixels, bright / face_pixels)


def metrics_from_collection(collection, config) -> CohortMetrics:
    """Aggregate per-face texture/brightness and pooled gated saturation."""
    observations = collection.observations
    if not observations:
        raise EmptyCohortError(f"cohort {collection.cohort_id!r} has no usable images")
    gate = config.gate()
    textures: list[float] = []
    brightnesses: list[float] = []
    saturations: list[float] = []
    for obs in observations:
        textures.append(texture_delta(obs.segments, obs.image_id, config.hue_mode).delta_mean)
        brightnesses.append(obs.brightness.ratio)
        for segment in obs.segments:
            for hsl in segment:
                if passes_skin_gate(hsl, gate):
                    saturations.append(hsl.s)
    return CohortMetrics(
        cohort_id=collection.cohort_id,
        texture_mean=_exact_mean(textures),
        brightness_mean=_exact_mean(brightnesses),
        saturation_mean=_exact_mean(saturations) if saturations else math.nan,
        n_faces=len(observations),
    )


def cohort_metrics(corpus, cohort_id: str, config) -> CohortMetrics:
    """Scan a cohort and compute its per-face means and saturation."""
    from .pipeline import collect_cohort

    return metrics_from_collection(collect_cohort(corpus, cohort_id, config), config)


def _palette_points(p: Palette):
    if not p.entries:
        raise EmptyPaletteError(f"palette {p.cohort_id!r} has no entries")
    pts = embed_many([e.centroid_hsl for e in p.entries])
    weights = np.array([e.proportion for e in p.entries], dtype=np.float64)
    return pts, weights


def palette_distance(p: Palette, q: Palette) -> float:
    """Proportion-weighted symmetric Chamfer distance in embedded space."""
    ep, wp = _palette_points(p)
    eq, wq = _palette_points(q)
    cross = np.linalg.norm(ep[:, None, :] - eq[None, :, :], axis=2)
    forward = float(np.dot(wp, cross.min(axis=1)))
    backward = float(np.dot(wq, cross.min(axis=0)))
    return 0.5 * forward + 0.5 * backward


def distance_matrix(palettes: Sequence[Palette]) -> DistanceMatrix:
    """Pairwise palette distances; exactly symmetric with a zero diagonal."""
    if len(palettes) < 2:
        raise ValueError("distance matrix needs at least 2 palettes")
    ids = [p.cohort_id for p in palettes]
    if len(set(ids)) != len(ids):
        raise DuplicateCohortError(f"repeated cohort ids in {ids}")
    n = len(palettes)
    values = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            d = palette_distance(palettes[i], palettes[j])
            values[i, j] = d
            values[j, i] = d
    return DistanceMatrix(tuple(ids), values)
