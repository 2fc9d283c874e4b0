"""Cohort skin-tone palette extraction and comparison from landmarked faces."""

__version__ = "0.1.0"

from .color import (
    HslColor,
    RgbColor,
    SkinGate,
    embed,
    hsl_to_rgb,
    hue_diff,
    luma,
    passes_skin_gate,
    rgb_to_hsl,
)
from .config import RunConfig
from .corpus import CohortManifest, Corpus, ImageRecord, PixelGrid, load_manifest
from .geometry import CheekSegments, LandmarkSet, cheek_segments, sample_cheek_colors
from .metrics import (
    CohortMetrics,
    DistanceMatrix,
    brightness_ratio,
    cohort_metrics,
    distance_matrix,
    palette_distance,
    texture_delta,
)
from .palette import (
    ColorSample,
    Palette,
    PaletteEntry,
    build_palette,
    kmeans,
    load_palette,
    palette_from_samples,
    save_palette,
    sort_by_lightness,
    sort_by_proportion,
)
from .refsys import GamutReport, ReferenceSystem, gamut_report, load_reference, nearest_reference
from .report import CohortReport, RenderSpec, emit_report, render_palette_strip, render_scatter

__all__ = [
    "__version__",
    "HslColor",
    "RgbColor",
    "SkinGate",
    "embed",
    "hsl_to_rgb",
    "hue_diff",
    "luma",
    "passes_skin_gate",
    "rgb_to_hsl",
    "RunConfig",
    "CohortManifest",
    "Corpus",
    "ImageRecord",
    "PixelGrid",
    "load_manifest",
    "CheekSegments",
    "LandmarkSet",
    "cheek_segments",
    "sample_cheek_colors",
    "CohortMetrics",
    "DistanceMatrix",
    "brightness_ratio",
    "cohort_metrics",
    "distance_matrix",
    "palette_distance",
    "texture_delta",
    "ColorSample",
    "Palette",
    "PaletteEntry",
    "build_palette",
    "kmeans",
    "load_palette",
    "palette_from_samples",
    "save_palette",
    "sort_by_lightness",
    "sort_by_proportion",
    "GamutReport",
    "ReferenceSystem",
    "gamut_report",
    "load_reference",
    "nearest_reference",
    "CohortReport",
    "RenderSpec",
    "emit_report",
    "render_palette_strip",
    "render_scatter",
]
