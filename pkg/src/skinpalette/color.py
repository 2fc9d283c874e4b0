"""Color representations, HSL conversions, the skin gate, and hue arithmetic.

Conventions used throughout the package: hue in degrees [0, 360), saturation
and lightness as fractions in [0, 1], RGB as 8-bit channels. Achromatic
colors are canonicalized to hue 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_MIN_LIGHTNESS = 0.60
DEFAULT_HUE_ARCS = ((0.0, 50.0), (300.0, 360.0))
DEFAULT_LUMA_THRESHOLD = 200


def round_half_up(value: float) -> int:
    """Round to nearest integer, halves away from zero toward +inf."""
    return int(math.floor(value + 0.5))


@dataclass(frozen=True)
class RgbColor:
    r: int
    g: int
    b: int

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not isinstance(v, int) or not 0 <= v <= 255:
                raise ValueError(f"channel {name}={v!r} outside [0, 255]")

    def hex(self) -> str:
        return f"#{self.r:02x}{self.g:02x}{self.b:02x}"


@dataclass(frozen=True)
class HslColor:
    h: float
    s: float
    l: float

    def __post_init__(self):
        if not (0.0 <= self.h < 360.0 and math.isfinite(self.h)):
            raise ValueError(f"hue {self.h!r} outside [0, 360)")
        if not (0.0 <= self.s <= 1.0):
            raise ValueError(f"saturation {self.s!r} outside [0, 1]")
        if not (0.0 <= self.l <= 1.0):
            raise ValueError(f"lightness {self.l!r} outside [0, 1]")
        if self.s == 0.0 and self.h != 0.0:
            raise ValueError("achromatic colors must carry hue 0 (canonical form)")


def canonical_hsl(h: float, s: float, l: float) -> HslColor:
    """Build an HslColor, wrapping hue into [0, 360) and clamping s, l."""
    s = min(max(s, 0.0), 1.0)
    l = min(max(l, 0.0), 1.0)
    h = h % 360.0
    if h < 0.0:
        h += 360.0
    if h >= 360.0:  # guard against 360.0 - eps rounding back up
        h = 0.0
    if s == 0.0:
        h = 0.0
    return HslColor(h, s, l)


@dataclass(frozen=True)
class SkinGate:
    """Inclusion filter for cheek samples: bright, red-family colors."""

    min_lightness: float = DEFAULT_MIN_LIGHTNESS
    hue_arcs: tuple[tuple[float, float], ...] = DEFAULT_HUE_ARCS

    def __post_init__(self):
        if not 0.0 <= self.min_lightness <= 1.0:
            raise ValueError(f"min_lightness {self.min_lightness!r} outside [0, 1]")
        for lo, hi in self.hue_arcs:
            if not (0.0 <= lo <= hi <= 360.0):
                raise ValueError(f"hue arc [{lo}, {hi}] outside [0, 360] or reversed")


def rgb_to_hsl(c: RgbColor) -> HslColor:
    """Hexcone RGB -> HSL; exact inverse of hsl_to_rgb on 8-bit inputs."""
    r, g, b = c.r / 255.0, c.g / 255.0, c.b / 255.0
    mx = max(r, g, b)
    mn = min(r, g, b)
    l = (mx + mn) / 2.0
    d = mx - mn
    if d == 0.0:
        return HslColor(0.0, 0.0, l)
    s = d / (1.0 - abs(2.0 * l - 1.0))
    if s > 1.0:
        s = 1.0
    if mx == r:
        h = ((g - b) / d) % 6.0
    elif mx == g:
        h = (b - r) / d + 2.0
    else:
        h = (r - g) / d + 4.0
    h *= 60.0
    if h >= 360.0:
        h -= 360.0
    return HslColor(h, s, l)


def hsl_to_rgb(c: HslColor) -> RgbColor:
    """Inverse hexcone transform, channels rounded half-up to 8-bit."""
    chroma = (1.0 - abs(2.0 * c.l - 1.0)) * c.s
    hp = c.h / 60.0
    x = chroma * (1.0 - abs(hp % 2.0 - 1.0))
    if hp < 1.0:
        rp, gp, bp = chroma, x, 0.0
    elif hp < 2.0:
        rp, gp, bp = x, chroma, 0.0
    elif hp < 3.0:
        rp, gp, bp = 0.0, chroma, x
    elif hp < 4.0:
        rp, gp, bp = 0.0, x, chroma
    elif hp < 5.0:
        rp, gp, bp = x, 0.0, chroma
    else:
        rp, gp, bp = chroma, 0.0, x
    m = c.l - chroma / 2.0

    def q(v: float) -> int:
        out = round_half_up((v + m) * 255.0)
        return 0 if out < 0 else (255 if out > 255 else out)

    return RgbColor(q(rp), q(gp), q(bp))


def luma(c: RgbColor) -> int:
    """BT.601 luma, rounded half-up; gray pixels are fixed points."""
    return round_half_up(0.299 * c.r + 0.587 * c.g + 0.114 * c.b)


def luma_array(pixels: np.ndarray) -> np.ndarray:
    """Vectorized BT.601 luma over an (..., 3) uint8 array."""
    p = pixels.astype(np.float64)
    y = 0.299 * p[..., 0] + 0.587 * p[..., 1] + 0.114 * p[..., 2]
    return np.floor(y + 0.5).astype(np.uint8)


def passes_skin_gate(c: HslColor, gate: SkinGate = SkinGate()) -> bool:
    """True iff lightness is strictly above the gate and hue lies in an arc.

    Arcs are closed intervals; the lightness bound is strict.
    """
    if not c.l > gate.min_lightness:
        return False
    return any(lo <= c.h <= hi for lo, hi in gate.hue_arcs)


def hue_diff(h1: float, h2: float) -> float:
    """Circular hue difference normalized to a fraction in [0, 0.5]."""
    d = abs(h1 - h2)
    return min(d, 360.0 - d) / 360.0


def embed(c: HslColor) -> tuple[float, float, float]:
    """Cylinder embedding (s*cos h, s*sin h, l).

    Makes hue circular for clustering/distances and collapses all achromatic
    colors of equal lightness to one point.
    """
    rad = math.radians(c.h)
    return (c.s * math.cos(rad), c.s * math.sin(rad), c.l)


def unembed(x: float, y: float, l: float) -> HslColor:
    """Map a cylinder-space point back to canonical HSL."""
    s = math.hypot(x, y)
    if s == 0.0:
        return canonical_hsl(0.0, 0.0, l)
    h = math.degrees(math.atan2(y, x))
    return canonical_hsl(h, s, l)


def embed_many(colors: Sequence[HslColor]) -> np.ndarray:
    """Embed a sequence of colors into an (n, 3) float64 array."""
    out = np.empty((len(colors), 3), dtype=np.float64)
    for i, c in enumerate(colors):
        out[i] = embed(c)
    return out
