"""Per-cohort dominant-color palettes via seeded k-means in cylinder space.

Clustering runs in the hue-circular cylinder embedding by default (an HSL
k-means would split reds straddling the 0/360 seam); an RGB-space mode is
available for comparison runs. All randomness flows from one seed through
the package PRNG, and samples are canonically ordered before seeding, so
palettes are bit-identical across runs, sample permutations, and worker
counts.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from .color import HslColor, canonical_hsl, embed, hsl_to_rgb, rgb_to_hsl, RgbColor
from .errors import AllSamplesGatedError, EmptyCohortError, EmptyPaletteError
from .rng import Xoshiro256StarStar

DEFAULT_K = 20
DEFAULT_SEED = 20
DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITER = 300


@dataclass(frozen=True)
class ColorSample:
    """One gated cheek color observation with provenance."""

    hsl: HslColor
    embedded: tuple[float, float, float]
    image_id: str
    cohort_id: str
    segment_index: int
    ordinal: int

    @classmethod
    def from_hsl(cls, hsl: HslColor, image_id: str, cohort_id: str,
                 segment_index: int, ordinal: int) -> "ColorSample":
        return cls(hsl, embed(hsl), image_id, cohort_id, segment_index, ordinal)


@dataclass(frozen=True)
class PaletteEntry:
    centroid_hsl: HslColor
    proportion: float
    member_count: int


@dataclass(frozen=True)
class Palette:
    cohort_id: str
    entries: tuple[PaletteEntry, ...]
    k: int
    seed: int
    n_samples: int
    distinct_deficit: bool = False
    config_hash: str | None = None


@dataclass(frozen=True)
class KMeansResult:
    centroids: np.ndarray
    labels: np.ndarray
    iterations: int
    converged: bool
    distinct_deficit: bool


def _kmeans_pp_init(points: np.ndarray, k: int, rng: Xoshiro256StarStar) -> np.ndarray:
    n = len(points)
    centers = np.empty((k, points.shape[1]), dtype=np.float64)
    centers[0] = points[rng.below(n)]
    d2 = np.sum((points - centers[0]) ** 2, axis=1)
    for j in range(1, k):
        total = float(d2.sum())
        if total <= 0.0:
            idx = rng.below(n)
        else:
            r = rng.random() * total
            cum = np.cumsum(d2)
            idx = int(np.searchsorted(cum, r, side="right"))
            if idx >= n:
                idx = n - 1
        centers[j] = points[idx]
        d2 = np.minimum(d2, np.sum((points - centers[j]) ** 2, axis=1))
    return centers


def kmeans(points: np.ndarray | Sequence[Sequence[float]], k: int, seed: int,
           tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER) -> KMeansResult:
    """Lloyd's algorithm with k-means++ seeding from the package PRNG.

    Assignment ties break toward the lowest centroid index; an emptied
    cluster is re-seeded to the point currently farthest from its assigned
    centroid. Iteration stops when the largest centroid movement drops
    below ``tol`` or after ``max_iter`` rounds.

    If the input holds fewer than ``k`` distinct points, the result is one
    centroid per distinct point with ``distinct_deficit`` set, rather than
    an error.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or len(points) == 0:
        raise ValueError("points must be a non-empty (n, d) array")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol}")

    distinct, inverse = np.unique(points, axis=0, return_inverse=True)
    if len(distinct) < k:
        return KMeansResult(
            centroids=distinct,
            labels=inverse.astype(np.int64),
            iterations=0,
            converged=True,
            distinct_deficit=True,
        )

    rng = Xoshiro256StarStar(seed)
    centers = _kmeans_pp_init(points, k, rng)
    labels = np.zeros(len(points), dtype=np.int64)
    converged = False
    prev_obj = math.inf
    iterations = 0
    for iterations in range(1, max_iter + 1):
        dist = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
        labels = np.argmin(dist, axis=1)

        obj = float(np.sum(dist[np.arange(len(points)), labels] ** 2))
        assert obj <= prev_obj * (1.0 + 1e-12) + 1e-12, "within-cluster SS increased"
        prev_obj = obj

        counts = np.bincount(labels, minlength=k)
        if (counts == 0).any():
            own_dist = dist[np.arange(len(points)), labels].copy()
            for j in np.flatnonzero(counts == 0):
                eligible = counts[labels] > 1
                if not eligible.any():
                    break
                masked = np.where(eligible, own_dist, -np.inf)
                steal = int(np.argmax(masked))
                counts[labels[steal]] -= 1
                labels[steal] = j
                counts[j] = 1
                own_dist[steal] = 0.0

        new_centers = centers.copy()
        for j in range(k):
            members = labels == j
            if members.any():
                new_centers[j] = points[members].mean(axis=0)
        move = float(np.max(np.linalg.norm(new_centers - centers, axis=1)))
        centers = new_centers
        if move < tol:
            converged = True
            break

    dist = np.linalg.norm(points[:, None, :] - centers[None, :, :], axis=2)
    labels = np.argmin(dist, axis=1)
    return KMeansResult(centers, labels, iterations, converged, False)


def within_cluster_ss(points: np.ndarray, result: KMeansResult) -> float:
    """Sum of squared distances of points to their assigned centroids."""
    points = np.asarray(points, dtype=np.float64)
    return float(np.sum((points - result.centroids[result.labels]) ** 2))


def _canonical_sample_order(samples: Sequence[ColorSample]) -> list[ColorSample]:
    return sorted(
        samples,
        key=lambda s: (s.embedded, s.image_id, s.segment_index, s.ordinal),
    )


def palette_from_samples(
    cohort_id: str,
    samples: Sequence[ColorSample],
    *,
    k: int = DEFAULT_K,
    seed: int = DEFAULT_SEED,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    cluster_space: str = "cylinder",
    config_hash: str | None = None,
) -> Palette:
    """Cluster gated samples into a weighted palette for one cohort."""
    if not samples:
        raise EmptyPaletteError(f"cohort {cohort_id!r}: no samples to cluster")
    if cluster_space not in ("cylinder", "rgb"):
        raise ValueError(f"unknown cluster space {cluster_space!r}")

    ordered = _canonical_sample_order(samples)
    if cluster_space == "cylinder":
        vectors = np.array([s.embedded for s in ordered], dtype=np.float64)
    else:
        vectors = np.array(
            [
                (lambda c: (c.r / 255.0, c.g / 255.0, c.b / 255.0))(hsl_to_rgb(s.hsl))
                for s in ordered
            ],
            dtype=np.float64,
        )

    result = kmeans(vectors, k, seed, tol, max_iter)
    n = len(ordered)
    counts = np.bincount(result.labels, minlength=len(result.centroids))
    entries = []
    for j, centroid in enumerate(result.centroids):
        if counts[j] == 0:
            continue
        if cluster_space == "cylinder":
            hsl = canonical_hsl(
                math.degrees(math.atan2(centroid[1], centroid[0])),
                math.hypot(centroid[0], centroid[1]),
                centroid[2],
            )
        else:
            rgb = RgbColor(
                *(min(max(int(math.floor(v * 255.0 + 0.5)), 0), 255) for v in centroid)
            )
            hsl = rgb_to_hsl(rgb)
        entries.append(PaletteEntry(hsl, int(counts[j]) / n, int(counts[j])))
    return Palette(
        cohort_id=cohort_id,
        entries=tuple(entries),
        k=k,
        seed=seed,
        n_samples=n,
        distinct_deficit=result.distinct_deficit,
        config_hash=config_hash,
    )


def build_palette(corpus, cohort_id: str, config) -> Palette:
    """Full pipeline for one cohort: scan, sample, gate, embed, cluster."""
    from .pipeline import collect_cohort, gated_samples

    collection = collect_cohort(corpus, cohort_id, config)
    if not collection.observations:
        raise EmptyCohortError(f"cohort {cohort_id!r} has no usable images")
    samples = gated_samples(collection, config.gate())
    if not samples:
        raise AllSamplesGatedError(cohort_id, collection.n_sampled_colors())
    return palette_from_samples(
        cohort_id,
        samples,
        k=config.k,
        seed=config.seed,
        tol=config.tol,
        max_iter=config.max_iter,
        cluster_space=config.cluster_space,
        config_hash=config.config_hash(),
    )


def sort_by_proportion(p: Palette) -> Palette:
    """Descending proportion; ties by descending lightness then ascending hue."""
    entries = sorted(
        p.entries,
        key=lambda e: (-e.proportion, -e.centroid_hsl.l, e.centroid_hsl.h),
    )
    return replace(p, entries=tuple(entries))


def sort_by_lightness(p: Palette) -> Palette:
    """Descending centroid lightness; ties by descending proportion."""
    entries = sorted(
        p.entries,
        key=lambda e: (-e.centroid_hsl.l, -e.proportion),
    )
    return replace(p, entries=tuple(entries))


def palette_to_json(p: Palette) -> str:
    """Serialize with fixed key order and 6-decimal fixed-point floats."""
    lines = [
        "{",
        f'  "cohort": {json.dumps(p.cohort_id)},',
        f'  "k": {p.k},',
        f'  "seed": {p.seed},',
        f'  "n_samples": {p.n_samples},',
        f'  "config_hash": {json.dumps(p.config_hash)},',
        '  "entries": [',
    ]
    for i, e in enumerate(p.entries):
        c = e.centroid_hsl
        comma = "," if i < len(p.entries) - 1 else ""
        lines.append(
            f'    {{"h": {c.h:.6f}, "s": {c.s:.6f}, "l": {c.l:.6f}, '
            f'"proportion": {e.proportion:.6f}, "count": {e.member_count}}}{comma}'
        )
    lines.append("  ]")
    lines.append("}")
    return "\n".join(lines) + "\n"


def save_palette(p: Palette, path: Path | str) -> None:
    Path(path).write_text(palette_to_json(p), encoding="utf-8")


def load_palette(path: Path | str) -> Palette:
    """Read a palette JSON file back into a Palette."""
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    entries = tuple(
        PaletteEntry(
            canonical_hsl(e["h"], e["s"], e["l"]),
            float(e["proportion"]),
            int(e["count"]),
        )
        for e in doc["entries"]
    )
    return Palette(
        cohort_id=doc["cohort"],
        entries=entries,
        k=int(doc["k"]),
        seed=int(doc["seed"]),
        n_samples=int(doc["n_samples"]),
        config_hash=doc.get("config_hash"),
    )
