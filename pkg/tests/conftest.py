"""Shared fixtures: synthetic images, landmark layouts, tiny corpora."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image

from skinpalette.corpus import PixelGrid
from skinpalette.fixtures import canonical_landmarks
from skinpalette.geometry import LANDMARK_COUNT, LandmarkSet


def make_grid(array) -> PixelGrid:
    return PixelGrid(np.asarray(array, dtype=np.uint8))


def uniform_grid(width: int, height: int, rgb) -> PixelGrid:
    a = np.empty((height, width, 3), dtype=np.uint8)
    a[:, :] = rgb
    return PixelGrid(a)


def landmarks_at(width: int, height: int, overrides: dict[int, tuple[float, float]] | None = None) -> LandmarkSet:
    """Schematic landmark layout with selected indices repositioned."""
    base = canonical_landmarks(width, height).points.copy()
    for idx, (x, y) in (overrides or {}).items():
        base[idx] = (x, y)
    return LandmarkSet(base)


def corner_landmarks(x0: float, y0: float, x1: float, y1: float) -> LandmarkSet:
    """All 68 points packed inside [x0,x1]x[y0,y1]; corners pinned exactly."""
    pts = np.empty((LANDMARK_COUNT, 2), dtype=np.float64)
    for i in range(LANDMARK_COUNT):
        t = i / (LANDMARK_COUNT - 1)
        pts[i] = (x0 + (x1 - x0) * t, y0 + (y1 - y0) * t)
    pts[0] = (x0, y0)
    pts[-1] = (x1, y1)
    return LandmarkSet(pts)


def write_image(path: Path, array) -> None:
    Image.fromarray(np.asarray(array, dtype=np.uint8), mode="RGB").save(path)


def write_landmarks_json(path: Path, landmarks: LandmarkSet) -> None:
    points = [[float(x), float(y)] for x, y in landmarks.points]
    path.write_text(json.dumps({"points": points}), encoding="utf-8")


@pytest.fixture
def tiny_corpus(tmp_path: Path) -> Path:
    """One-cohort corpus with two uniform skin-tone images; returns manifest path."""
    root = tmp_path / "corpus"
    cdir = root / "main"
    cdir.mkdir(parents=True)
    landmarks = canonical_landmarks(32, 32)
    for name, rgb in (("a", (230, 180, 160)), ("b", (225, 170, 150))):
        write_image(cdir / f"{name}.png", np.full((32, 32, 3), rgb, dtype=np.uint8))
        write_landmarks_json(cdir / f"{name}.landmarks.json", landmarks)
    manifest = root / "manifest.json"
    manifest.write_text(
        json.dumps({"version": 1, "cohorts": [{"id": "main", "root": "main", "name": "Main"}]}),
        encoding="utf-8",
    )
    return manifest
