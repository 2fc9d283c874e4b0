"""Reference system loading and gamut coverage tests."""

from __future__ import annotations

import math

import pytest

from skinpalette.color import canonical_hsl, embed, hsl_to_rgb
from skinpalette.errors import (
    DuplicateLabelError,
    EmptyPaletteError,
    EmptySystemError,
    MissingFileError,
    ReferenceParseError,
)
from skinpalette.palette import Palette, PaletteEntry
from skinpalette.refsys import (
    ReferenceSystem,
    demo_reference_path,
    gamut_report,
    load_reference,
    nearest_reference,
)


def write_csv(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_load_reference_hsl(tmp_path):
    path = write_csv(tmp_path / "ref.csv", "label,h,s,l\nA,10,0.5,0.7\nB,20,0.4,0.8\nC,30,0.3,0.9\n")
    ref = load_reference(path)
    assert ref.name == "ref"
    assert len(ref.colors) == 3
    assert ref.colors[0][0] == "A"
    assert ref.colors[0][1] == canonical_hsl(10.0, 0.5, 0.7)


def test_load_reference_rgb(tmp_path):
    path = write_csv(tmp_path / "ref.csv", "label,r,g,b\nA,255,0,0\n")
    ref = load_reference(path)
    assert ref.colors[0][1] == canonical_hsl(0.0, 1.0, 0.5)


def test_load_reference_range_error_names_row(tmp_path):
    path = write_csv(tmp_path / "ref.csv", "label,h,s,l\nA,10,0.5,0.7\nB,20,0.4,1.2\n")
    with pytest.raises(ReferenceParseError) as err:
        load_reference(path)
    assert "row 3" in str(err.value) or "B" in str(err.value)


def test_load_reference_duplicate_label(tmp_path):
    path = write_csv(tmp_path / "ref.csv", "label,h,s,l\n2R,10,0.5,0.7\n2R,20,0.4,0.8\n")
    with pytest.raises(DuplicateLabelError):
        load_reference(path)


def test_load_reference_empty_and_missing(tmp_path):
    with pytest.raises(EmptySystemError):
        load_reference(write_csv(tmp_path / "a.csv", "label,h,s,l\n"))
    with pytest.raises(EmptySystemError):
        load_reference(write_csv(tmp_path / "b.csv", ""))
    with pytest.raises(MissingFileError):
        load_reference(tmp_path / "nope.csv")


def test_load_reference_bad_header(tmp_path):
    path = write_csv(tmp_path / "ref.csv", "name,x,y,z\nA,1,2,3\n")
    with pytest.raises(ReferenceParseError):
        load_reference(path)


def test_demo_reference_loads():
    ref = load_reference(demo_reference_path())
    assert len(ref.colors) >= 50
    labels = [label for label, _ in ref.colors]
    assert len(set(labels)) == len(labels)


def _ref(*colors):
    return ReferenceSystem("test", tuple(colors))


def test_nearest_reference_exact_match():
    color = canonical_hsl(20.0, 0.5, 0.7)
    ref = _ref(("A", color), ("B", canonical_hsl(50.0, 0.5, 0.7)))
    label, dist = nearest_reference(color, ref)
    assert label == "A"
    assert dist == 0.0


def test_nearest_reference_tie_breaks_lexicographically():
    query = canonical_hsl(0.0, 0.0, 0.5)
    ref = _ref(("Z", canonical_hsl(0.0, 0.0, 0.6)), ("A", canonical_hsl(0.0, 0.0, 0.4)))
    label, dist = nearest_reference(query, ref)
    assert label == "A"
    assert dist == pytest.approx(0.1, abs=1e-12)


def test_nearest_reference_single_color():
    ref = _ref(("only", canonical_hsl(10.0, 0.3, 0.8)),)
    label, _ = nearest_reference(canonical_hsl(200.0, 0.9, 0.1), ref)
    assert label == "only"


def _palette(entries):
    total = sum(p for _, p in entries)
    assert abs(total - 1.0) < 1e-9
    return Palette(
        "p",
        tuple(PaletteEntry(c, p, int(p * 100)) for c, p in entries),
        len(entries), 20, 100,
    )


def test_gamut_palette_inside_reference():
    colors = [canonical_hsl(10.0, 0.4, 0.7), canonical_hsl(30.0, 0.5, 0.8)]
    ref = _ref(*((f"C{i}", c) for i, c in enumerate(colors)))
    palette = _palette([(colors[0], 0.6), (colors[1], 0.4)])
    report = gamut_report(palette, ref, epsilon=0.05)
    assert report.out_fraction_weighted == 0.0
    assert all(e.in_gamut for e in report.per_entry)


def test_gamut_palette_entirely_outside():
    ref = _ref(("A", canonical_hsl(0.0, 0.0, 0.0)))
    palette = _palette([(canonical_hsl(0.0, 0.0, 1.0), 1.0)])
    report = gamut_report(palette, ref, epsilon=0.1)
    assert report.out_fraction_weighted == 1.0


def test_gamut_hand_example():
    # entries at distances 0.05 and 0.20 with proportions 0.7/0.3, eps 0.1
    ref = _ref(("A", canonical_hsl(0.0, 0.0, 0.5)))
    palette = _palette(
        [(canonical_hsl(0.0, 0.0, 0.55), 0.7), (canonical_hsl(0.0, 0.0, 0.7), 0.3)]
    )
    report = gamut_report(palette, ref, epsilon=0.1)
    assert report.out_fraction_weighted == pytest.approx(0.3, abs=1e-12)
    assert report.per_entry[0].in_gamut and not report.per_entry[1].in_gamut
    assert report.per_entry[1].distance == pytest.approx(0.2, abs=1e-12)


def test_gamut_monotone_in_epsilon():
    ref = _ref(("A", canonical_hsl(10.0, 0.4, 0.7)), ("B", canonical_hsl(40.0, 0.5, 0.6)))
    palette = _palette(
        [
            (canonical_hsl(12.0, 0.42, 0.71), 0.4),
            (canonical_hsl(25.0, 0.30, 0.85), 0.35),
            (canonical_hsl(300.0, 0.70, 0.95), 0.25),
        ]
    )
    fractions = [
        gamut_report(palette, ref, eps).out_fraction_weighted
        for eps in (0.01, 0.05, 0.1, 0.5, 2.0)
    ]
    assert fractions == sorted(fractions, reverse=True)
    assert fractions[-1] == 0.0


def test_gamut_permutation_invariant():
    ref = _ref(("A", canonical_hsl(10.0, 0.4, 0.7)))
    entries = [
        (canonical_hsl(12.0, 0.42, 0.71), 0.4),
        (canonical_hsl(25.0, 0.30, 0.85), 0.35),
        (canonical_hsl(300.0, 0.70, 0.95), 0.25),
    ]
    a = gamut_report(_palette(entries), ref, 0.05).out_fraction_weighted
    b = gamut_report(_palette(entries[::-1]), ref, 0.05).out_fraction_weighted
    assert a == pytest.approx(b, abs=1e-15)


def test_gamut_adding_reference_color_never_hurts():
    palette = _palette(
        [(canonical_hsl(12.0, 0.42, 0.71), 0.5), (canonical_hsl(340.0, 0.2, 0.9), 0.5)]
    )
    small = _ref(("A", canonical_hsl(10.0, 0.4, 0.7)))
    large = _ref(("A", canonical_hsl(10.0, 0.4, 0.7)), ("B", canonical_hsl(345.0, 0.25, 0.9)))
    rs = gamut_report(palette, small, 0.05)
    rl = gamut_report(palette, large, 0.05)
    for es, el in zip(rs.per_entry, rl.per_entry):
        assert el.distance <= es.distance + 1e-15


def test_gamut_validation():
    ref = _ref(("A", canonical_hsl(10.0, 0.4, 0.7)))
    palette = _palette([(canonical_hsl(12.0, 0.42, 0.71), 1.0)])
    with pytest.raises(ValueError):
        gamut_report(palette, ref, epsilon=0.0)
    with pytest.raises(EmptyPaletteError):
        gamut_report(Palette("e", (), 0, 20, 0), ref, 0.05)
