"""Run configuration: every tunable of the pipeline in one validated record."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from .color import DEFAULT_HUE_ARCS, DEFAULT_LUMA_THRESHOLD, DEFAULT_MIN_LIGHTNESS, SkinGate
from .errors import ConfigError
from .geometry import (
    DEFAULT_PATCH,
    DEFAULT_SAMPLES_PER_SEGMENT,
    DEFAULT_SEGMENT_A,
    DEFAULT_SEGMENT_B,
    LANDMARK_COUNT,
)
from .palette import DEFAULT_K, DEFAULT_MAX_ITER, DEFAULT_SEED, DEFAULT_TOL
from .refsys import DEFAULT_EPSILON


@dataclass(frozen=True)
class RunConfig:
    manifest_path: Path | None = None
    out_dir: Path | None = None
    reference_path: Path | None = None
    k: int = DEFAULT_K
    seed: int = DEFAULT_SEED
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    min_lightness: float = DEFAULT_MIN_LIGHTNESS
    hue_arcs: tuple[tuple[float, float], ...] = DEFAULT_HUE_ARCS
    samples_per_segment: int = DEFAULT_SAMPLES_PER_SEGMENT
    patch: int = DEFAULT_PATCH
    bright_threshold: int = DEFAULT_LUMA_THRESHOLD
    hue_mode: str = "circular"
    cluster_space: str = "cylinder"
    face_region: str = "bbox"
    epsilon: float = DEFAULT_EPSILON
    jobs: int = 1
    segment_a: tuple[int, int] = DEFAULT_SEGMENT_A
    segment_b: tuple[int, int] = DEFAULT_SEGMENT_B

    def validate(self) -> "RunConfig":
        """Check every field before any work starts; raises ConfigError."""
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if not self.tol > 0.0:
            raise ConfigError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ConfigError(f"max-iter must be >= 1, got {self.max_iter}")
        if not 0.0 <= self.min_lightness <= 1.0:
            raise ConfigError(f"min-lightness must be in [0, 1], got {self.min_lightness}")
        if not self.hue_arcs:
            raise ConfigError("at least one hue arc is required")
        for lo, hi in self.hue_arcs:
            if not (0.0 <= lo <= hi <= 360.0):
                raise ConfigError(f"hue arc [{lo}, {hi}] outside [0, 360] or reversed")
        if self.samples_per_segment < 2:
            raise ConfigError(
                f"samples-per-segment must be >= 2, got {self.samples_per_segment}"
            )
        if self.patch < 1 or self.patch % 2 == 0:
            raise ConfigError(f"patch must be a positive odd integer, got {self.patch}")
        if not 0 <= self.bright_threshold <= 255:
            raise ConfigError(f"bright-threshold must be in [0, 255], got {self.bright_threshold}")
        if self.hue_mode not in ("circular", "legacy_raw"):
            raise ConfigError(f"hue-mode must be circular or legacy_raw, got {self.hue_mode!r}")
        if self.cluster_space not in ("cylinder", "rgb"):
            raise ConfigError(f"cluster-space must be cylinder or rgb, got {self.cluster_space!r}")
        if self.face_region not in ("bbox", "hull"):
            raise ConfigError(f"face-region must be bbox or hull, got {self.face_region!r}")
        if not self.epsilon > 0.0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        for name, pair in (("segment-a", self.segment_a), ("segment-b", self.segment_b)):
            if len(pair) != 2 or not all(0 <= i < LANDMARK_COUNT for i in pair):
                raise ConfigError(f"{name} indices must lie in 0..{LANDMARK_COUNT - 1}, got {pair}")
        return self

    def gate(self) -> SkinGate:
        return SkinGate(self.min_lightness, self.hue_arcs)

    def analysis_dict(self) -> dict:
        """Analysis-relevant parameters only; paths and job count excluded.

        Two runs with equal analysis dicts produce identical palettes and
        metrics, so this is what the config hash covers.
        """
        return {
            "k": self.k,
            "seed": self.seed,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "min_lightness": self.min_lightness,
            "hue_arcs": [list(a) for a in self.hue_arcs],
            "samples_per_segment": self.samples_per_segment,
            "patch": self.patch,
            "bright_threshold": self.bright_threshold,
            "hue_mode": self.hue_mode,
            "cluster_space": self.cluster_space,
            "face_region": self.face_region,
            "epsilon": self.epsilon,
            "segment_a": list(self.segment_a),
            "segment_b": list(self.segment_b),
        }

    def echo_dict(self) -> dict:
        """Effective configuration echoed into run manifests.

        Covers everything needed to reproduce the outputs byte-for-byte:
        the input paths plus all analysis parameters. out_dir and jobs are
        deliberately absent (neither affects a single output byte).
        """
        out = {
            "manifest": str(self.manifest_path) if self.manifest_path else None,
            "reference": str(self.reference_path) if self.reference_path else None,
        }
        out.update(self.analysis_dict())
        return out

    def config_hash(self) -> str:
        payload = json.dumps(self.analysis_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(payload.encode("utf-8")).hexdigest()
