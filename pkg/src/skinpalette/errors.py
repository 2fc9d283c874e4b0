"""Exception hierarchy for the skinpalette pipeline."""

from __future__ import annotations


class SkinPaletteError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SkinPaletteError):
    """A run configuration value is invalid."""


class MissingFileError(SkinPaletteError):
    """A required input file or directory does not exist."""


class ManifestError(SkinPaletteError):
    """A cohort manifest failed to parse or validate."""


class DuplicateCohortIdError(ManifestError):
    """The manifest lists the same cohort id more than once."""


class UnknownCohortError(SkinPaletteError):
    """A cohort id was requested that the manifest does not define."""


class ImageDecodeError(SkinPaletteError):
    """An image file could not be decoded."""


class LandmarkParseError(SkinPaletteError):
    """A landmark sidecar file failed to parse."""


class WrongPointCountError(LandmarkParseError):
    """A landmark sidecar holds a point count other than the required 68."""

    def __init__(self, found: int, path: str = ""):
        self.found = found
        where = f" in {path}" if path else ""
        super().__init__(f"expected 68 landmark points, found {found}{where}")


class InvalidCountError(SkinPaletteError):
    """A sample or patch count is outside its permitted range."""


class EmptyCohortError(SkinPaletteError):
    """A cohort yielded no usable faces."""


class AllSamplesGatedError(SkinPaletteError):
    """Every sampled color in a cohort failed the skin gate."""

    def __init__(self, cohort_id: str, n_samples: int):
        self.cohort_id = cohort_id
        self.n_samples = n_samples
        super().__init__(
            f"cohort {cohort_id!r}: all {n_samples} sampled colors failed the skin gate"
        )


class TooFewSamplesError(SkinPaletteError):
    """A texture walk needs at least two samples per segment."""


class EmptyFaceBoxError(SkinPaletteError):
    """The landmark bounding box does not intersect the image."""


class EmptyPaletteError(SkinPaletteError):
    """An operation requires a palette with at least one entry."""


class DuplicateCohortError(SkinPaletteError):
    """A distance matrix was requested over palettes with repeated cohort ids."""


class ReferenceParseError(SkinPaletteError):
    """A reference color system CSV failed to parse."""


class DuplicateLabelError(ReferenceParseError):
    """A reference system repeats a color label."""


class EmptySystemError(ReferenceParseError):
    """A reference system contains no colors."""


class ReportWriteError(SkinPaletteError):
    """Report emission failed; partial outputs have been removed."""
