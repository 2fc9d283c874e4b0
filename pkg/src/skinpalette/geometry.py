"""Cheek segment derivation and evenly spaced color sampling.

Landmark indices follow the iBUG 300-W 68-point layout (0-based). The two
cheek segments run eye-outer-corner -> nasal wing and eye-inner-corner ->
mouth corner on the left side of the face; index pairs are configurable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .color import RgbColor, round_half_up
from .errors import InvalidCountError

if TYPE_CHECKING:
    from .corpus import PixelGrid

LANDMARK_COUNT = 68
DEFAULT_SEGMENT_A = (36, 31)  # left-eye outer corner -> left nasal wing
DEFAULT_SEGMENT_B = (39, 48)  # left-eye inner corner -> left mouth corner
DEFAULT_SAMPLES_PER_SEGMENT = 10
DEFAULT_PATCH = 3

Point = tuple[float, float]
Segment = tuple[Point, Point]


@dataclass(frozen=True, eq=False)
class LandmarkSet:
    """68 planar landmark points in image pixel coordinates."""

    points: np.ndarray

    def __post_init__(self):
        p = self.points
        if p.shape != (LANDMARK_COUNT, 2):
            raise ValueError(f"LandmarkSet requires shape (68, 2), got {p.shape}")
        if not np.all(np.isfinite(p)):
            raise ValueError("landmark coordinates must be finite")

    def point(self, index: int) -> Point:
        x, y = self.points[index]
        return (float(x), float(y))


@dataclass(frozen=True)
class CheekSegments:
    segment_a: Segment
    segment_b: Segment


@dataclass(frozen=True)
class SamplePoint:
    x: float
    y: float
    segment_index: int
    ordinal: int


def cheek_segments(
    landmarks: LandmarkSet,
    segment_a: tuple[int, int] = DEFAULT_SEGMENT_A,
    segment_b: tuple[int, int] = DEFAULT_SEGMENT_B,
) -> CheekSegments:
    """Look up the two cheek segment endpoints from the landmark set."""
    return CheekSegments(
        segment_a=(landmarks.point(segment_a[0]), landmarks.point(segment_a[1])),
        segment_b=(landmarks.point(segment_b[0]), landmarks.point(segment_b[1])),
    )


def sample_segment(segment: Segment, n: int = DEFAULT_SAMPLES_PER_SEGMENT,
                   segment_index: int = 0) -> list[SamplePoint]:
    """n points at t = i/(n-1) along the segment, endpoints inclusive."""
    if n < 2:
        raise InvalidCountError(f"samples per segment must be >= 2, got {n}")
    (x0, y0), (x1, y1) = segment
    out = []
    for i in range(n):
        t = i / (n - 1)
        out.append(SamplePoint(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, segment_index, i))
    return out


def _patch_mean_color(image: "PixelGrid", x: float, y: float, patch: int) -> RgbColor:
    w, h = image.width, image.height
    cx = min(max(round_half_up(x), 0), w - 1)
    cy = min(max(round_half_up(y), 0), h - 1)
    half = patch // 2
    x0, x1 = max(cx - half, 0), min(cx + half, w - 1)
    y0, y1 = max(cy - half, 0), min(cy + half, h - 1)
    window = image.array[y0 : y1 + 1, x0 : x1 + 1].astype(np.float64)
    mean = window.mean(axis=(0, 1))
    return RgbColor(*(min(max(round_half_up(v), 0), 255) for v in mean))


def sample_cheek_colors(
    image: "PixelGrid",
    landmarks: LandmarkSet,
    n: int = DEFAULT_SAMPLES_PER_SEGMENT,
    patch: int = DEFAULT_PATCH,
    segment_a: tuple[int, int] = DEFAULT_SEGMENT_A,
    segment_b: tuple[int, int] = DEFAULT_SEGMENT_B,
) -> list[RgbColor]:
    """Mean-patch colors at 2n points: segment A ordinals 0..n-1, then B.

    Sample coordinates are rounded half-up and clamped to image bounds; the
    patch window is intersected with the image, so border samples average
    fewer pixels.
    """
    if patch < 1 or patch % 2 == 0:
        raise InvalidCountError(f"patch must be a positive odd integer, got {patch}")
    segs = cheek_segments(landmarks, segment_a, segment_b)
    points = sample_segment(segs.segment_a, n, 0) + sample_segment(segs.segment_b, n, 1)
    return [_patch_mean_color(image, p.x, p.y, patch) for p in points]


def count_off_image(landmarks: LandmarkSet, width: int, height: int) -> int:
    """Number of landmark points lying outside the image rectangle."""
    p = landmarks.points
    inside = (p[:, 0] >= 0) & (p[:, 0] <= width - 1) & (p[:, 1] >= 0) & (p[:, 1] <= height - 1)
    return int((~inside).sum())


def convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew's monotone chain; returns hull vertices in CCW order."""
    pts = np.unique(points, axis=0)
    if len(pts) <= 2:
        return pts
    pts = pts[np.lexsort((pts[:, 1], pts[:, 0]))]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list[np.ndarray] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[np.ndarray] = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return np.array(lower[:-1] + upper[:-1])


def points_in_convex_polygon(xs: np.ndarray, ys: np.ndarray, hull: np.ndarray) -> np.ndarray:
    """Boolean mask of (xs, ys) points inside or on a CCW convex polygon."""
    if len(hull) == 0:
        return np.zeros(xs.shape, dtype=bool)
    if len(hull) == 1:
        return (xs == hull[0, 0]) & (ys == hull[0, 1])
    if len(hull) == 2:
        a, b = hull
        cross = (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])
        within = (
            (xs >= min(a[0], b[0])) & (xs <= max(a[0], b[0]))
            & (ys >= min(a[1], b[1])) & (ys <= max(a[1], b[1]))
        )
        return (np.abs(cross) < 1e-9) & within
    inside = np.ones(xs.shape, dtype=bool)
    n = len(hull)
    for i in range(n):
        a = hull[i]
        b = hull[(i + 1) % n]
        cross = (b[0] - a[0]) * (ys - a[1]) - (b[1] - a[1]) * (xs - a[0])
        inside &= cross >= -1e-9
    return inside
