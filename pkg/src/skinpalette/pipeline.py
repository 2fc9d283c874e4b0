"""Shared per-cohort collection step feeding palettes, metrics, and reports.

One pass over a cohort loads each image and its landmarks, samples the two
cheek segments, converts to HSL, and measures brightness. Per-image work is
pure, so it may run on a worker pool; results are reduced in scan order,
which keeps every downstream number independent of the worker count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .color import HslColor, SkinGate, passes_skin_gate, rgb_to_hsl
from .corpus import Corpus, ImageRecord, load_image, load_landmarks
from .errors import (
    EmptyFaceBoxError,
    ImageDecodeError,
    LandmarkParseError,
    MissingFileError,
)
from .geometry import count_off_image, sample_cheek_colors
from .metrics import FaceBrightness, brightness_ratio
from .palette import ColorSample


@dataclass(frozen=True)
class FaceObservation:
    """All per-face measurements: pre-gate HSL samples plus brightness."""

    image_id: str
    segments: tuple[tuple[HslColor, ...], ...]
    brightness: FaceBrightness
    off_image_landmarks: int


@dataclass(frozen=True)
class CohortCollection:
    cohort_id: str
    observations: tuple[FaceObservation, ...]
    n_scanned: int
    skipped: int
    orphans: int

    def n_sampled_colors(self) -> int:
        return sum(len(seg) for obs in self.observations for seg in obs.segments)


def _observe(record: ImageRecord, config) -> FaceObservation | None:
    """Load and measure one face; None when the image or sidecar is unusable."""
    try:
        image = load_image(record)
        landmarks = load_landmarks(record)
        brightness = brightness_ratio(
            image,
            landmarks,
            image_id=record.stable_id,
            threshold=config.bright_threshold,
            region=config.face_region,
        )
    except (ImageDecodeError, LandmarkParseError, MissingFileError, EmptyFaceBoxError):
        return None
    n = config.samples_per_segment
    colors = sample_cheek_colors(
        image,
        landmarks,
        n=n,
        patch=config.patch,
        segment_a=config.segment_a,
        segment_b=config.segment_b,
    )
    hsl = [rgb_to_hsl(c) for c in colors]
    return FaceObservation(
        image_id=record.stable_id,
        segments=(tuple(hsl[:n]), tuple(hsl[n:])),
        brightness=brightness,
        off_image_landmarks=count_off_image(landmarks, image.width, image.height),
    )


def collect_cohort(corpus: Corpus, cohort_id: str, config) -> CohortCollection:
    """Scan one cohort and observe every usable face, in scan order."""
    scan = corpus.scan(cohort_id)
    records = scan.records
    if config.jobs > 1 and len(records) > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(lambda r: _observe(r, config), records))
    else:
        results = [_observe(r, config) for r in records]
    observations = tuple(obs for obs in results if obs is not None)
    return CohortCollection(
        cohort_id=cohort_id,
        observations=observations,
        n_scanned=len(records),
        skipped=len(records) - len(observations),
        orphans=scan.orphan_count,
    )


def gated_samples(collection: CohortCollection, gate: SkinGate) -> list[ColorSample]:
    """Skin-gated samples with provenance, in observation order."""
    out: list[ColorSample] = []
    for obs in collection.observations:
        for segment_index, segment in enumerate(obs.segments):
            for ordinal, hsl in enumerate(segment):
                if passes_skin_gate(hsl, gate):
                    out.append(
                        ColorSample.from_hsl(
                            hsl, obs.image_id, collection.cohort_id, segment_index, ordinal
                        )
                    )
    return out
