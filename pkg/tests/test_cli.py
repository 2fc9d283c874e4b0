"""CLI contract tests: exit codes, outputs, golden gamut report."""

from __future__ import annotations

import json
import subprocess
import sys

import pytest

from skinpalette.cli import main
from skinpalette.fixtures import generate_demo_corpus
from skinpalette.refsys import demo_reference_path


@pytest.fixture(scope="module")
def demo_corpus(tmp_path_factory):
    root = tmp_path_factory.mktemp("demo")
    manifest = generate_demo_corpus(root, images_per_cohort=4)
    return manifest


def test_analyze_success(demo_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    code = main(
        [
            "analyze",
            "--manifest", str(demo_corpus),
            "--out", str(out),
            "--reference", str(demo_reference_path()),
        ]
    )
    assert code == 0
    captured = capsys.readouterr()
    assert "kr" in captured.out
    for rel in (
        "kr/palette.json", "kr/strip_by_size.svg", "kr/strip_by_lightness.svg",
        "metrics.csv", "distances.csv", "scatter.svg", "polar.svg", "manifest.json",
    ):
        assert (out / rel).is_file(), rel


def test_analyze_partial_on_corrupt_image(demo_corpus, tmp_path):
    corrupted_root = tmp_path / "corpus"
    import shutil

    shutil.copytree(demo_corpus.parent, corrupted_root)
    victim = corrupted_root / "kr" / "face_001.png"
    victim.write_bytes(b"garbage")
    out = tmp_path / "out"
    code = main(["analyze", "--manifest", str(corrupted_root / "manifest.json"), "--out", str(out)])
    assert code == 2
    manifest = json.loads((out / "manifest.json").read_text())
    kr = next(c for c in manifest["cohorts"] if c["id"] == "kr")
    assert kr["skipped"] == 1


def test_analyze_invalid_k_fails_before_io(demo_corpus, tmp_path, capsys):
    out = tmp_path / "never"
    code = main(["analyze", "--manifest", str(demo_corpus), "--out", str(out), "--k", "0"])
    assert code == 1
    assert not out.exists()
    assert "k must be" in capsys.readouterr().err


def test_analyze_bad_manifest(tmp_path, capsys):
    code = main(["analyze", "--manifest", str(tmp_path / "nope.json"), "--out", str(tmp_path / "o")])
    assert code == 1


def test_compare_identical_palettes(demo_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["analyze", "--manifest", str(demo_corpus), "--out", str(out)]) == 0
    capsys.readouterr()  # drain analyze output
    palette = out / "kr" / "palette.json"
    other = tmp_path / "kr2.json"
    text = palette.read_text().replace('"cohort": "kr"', '"cohort": "kr2"')
    other.write_text(text)
    code = main(["compare", str(palette), str(other)])
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "cohort,kr,kr2"
    assert lines[1].split(",")[2] == "0.000000"


def test_compare_four_palettes_symmetric(demo_corpus, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["analyze", "--manifest", str(demo_corpus), "--out", str(out)]) == 0
    capsys.readouterr()  # drain analyze output
    paths = [str(out / cid / "palette.json") for cid in ("kr", "cn", "th", "jp")]
    csv_out = tmp_path / "d.csv"
    code = main(["compare", *paths, "--out", str(csv_out)])
    assert code == 0
    lines = csv_out.read_text().strip().splitlines()
    assert len(lines) == 5
    grid = [line.split(",")[1:] for line in lines[1:]]
    for i in range(4):
        for j in range(4):
            assert grid[i][j] == grid[j][i]
    # agrees with the analyze run's matrix up to the palette files'
    # 6-decimal serialization quantum
    analyze_lines = (out / "distances.csv").read_text().strip().splitlines()
    for row_a, row_b in zip(lines[1:], analyze_lines[1:]):
        for a, b in zip(row_a.split(",")[1:], row_b.split(",")[1:]):
            assert abs(float(a) - float(b)) <= 2e-6


def test_compare_malformed_file(tmp_path, capsys):
    good = tmp_path / "a.json"
    bad = tmp_path / "bad.json"
    good.write_text('{"cohort":"a","k":1,"seed":1,"n_samples":1,"config_hash":null,'
                    '"entries":[{"h":1.0,"s":0.5,"l":0.7,"proportion":1.0,"count":1}]}')
    bad.write_text("{broken")
    code = main(["compare", str(good), str(bad)])
    assert code == 1
    assert "bad.json" in capsys.readouterr().err  # error names the file


def test_compare_warns_on_config_hash_mismatch(tmp_path, capsys):
    def palette_json(cohort, chash):
        return (f'{{"cohort":"{cohort}","k":1,"seed":1,"n_samples":1,"config_hash":{chash},'
                '"entries":[{"h":1.0,"s":0.5,"l":0.7,"proportion":1.0,"count":1}]}')

    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    a.write_text(palette_json("a", '"aaaa"'))
    b.write_text(palette_json("b", '"bbbb"'))
    code = main(["compare", str(a), str(b)])
    assert code == 0
    assert "different configurations" in capsys.readouterr().err


def test_compare_needs_two(tmp_path, capsys):
    p = tmp_path / "a.json"
    p.write_text("{}")
    assert main(["compare", str(p)]) == 1


def test_gamut_inside_reference(tmp_path, capsys):
    ref = demo_reference_path()
    # palette whose entries are reference colors themselves
    import csv as csvmod

    with open(ref, newline="") as fh:
        rows = list(csvmod.DictReader(fh))[:3]
    entries = ",\n    ".join(
        f'{{"h": {float(r["h"]):.6f}, "s": {float(r["s"]):.6f}, "l": {float(r["l"]):.6f}, '
        f'"proportion": {p:.6f}, "count": 1}}'
        for r, p in zip(rows, (0.5, 0.3, 0.2))
    )
    palette_path = tmp_path / "p.json"
    palette_path.write_text(
        '{"cohort":"demo","k":3,"seed":20,"n_samples":3,"config_hash":null,"entries":[\n    '
        + entries + "\n]}"
    )
    code = main(["gamut", "--palette", str(palette_path), "--reference", str(ref),
                 "--epsilon", "0.05"])
    assert code == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["out_fraction_weighted"] == 0.0
    assert all(e["in_gamut"] for e in doc["entries"])


def test_gamut_epsilon_zero_rejected(tmp_path, capsys):
    p = tmp_path / "p.json"
    p.write_text("{}")
    code = main(["gamut", "--palette", str(p), "--reference", str(demo_reference_path()),
                 "--epsilon", "0"])
    assert code == 1


# Frozen from a verified run: entry 0 is exactly the reference row
# (15, 0.35, 0.70) = D038 at distance 0; entry 1 (340, 0.60, 0.80) is nearest
# D194 = (345, 0.55, 0.80) at sqrt(0.005011...) = 0.070792.
GOLDEN_GAMUT = {
    "cohort": "golden",
    "reference": "demo_reference",
    "epsilon": 0.05,
    "out_fraction_weighted": 0.25,
    "entries": [
        {"index": 0, "nearest_label": "D038", "distance": 0.0, "in_gamut": True},
        {"index": 1, "nearest_label": "D194", "distance": 0.070792, "in_gamut": False},
    ],
}


def test_gamut_golden_output(tmp_path, capsys):
    """Frozen end-to-end gamut output for a fixed palette and the demo reference."""
    palette_path = tmp_path / "golden.json"
    palette_path.write_text(
        '{"cohort":"golden","k":2,"seed":20,"n_samples":4,"config_hash":null,"entries":[\n'
        '  {"h": 15.000000, "s": 0.350000, "l": 0.700000, "proportion": 0.750000, "count": 3},\n'
        '  {"h": 340.000000, "s": 0.600000, "l": 0.800000, "proportion": 0.250000, "count": 1}\n'
        "]}"
    )
    code = main(["gamut", "--palette", str(palette_path), "--reference",
                 str(demo_reference_path()), "--epsilon", "0.05"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == GOLDEN_GAMUT


def test_help_lists_every_flag():
    result = subprocess.run(
        [sys.executable, "-m", "skinpalette.cli", "analyze", "--help"],
        capture_output=True, text=True,
    )
    # argparse --help exits 0
    assert result.returncode == 0
    for flag in (
        "--manifest", "--out", "--k", "--seed", "--tol", "--max-iter",
        "--min-lightness", "--hue-arcs", "--samples-per-segment", "--patch",
        "--bright-threshold", "--hue-mode", "--cluster-space", "--epsilon",
        "--jobs", "--segment-a", "--segment-b", "--face-region", "--reference",
    ):
        assert flag in result.stdout, flag
    assert "default" in result.stdout


def test_usage_error_exits_one():
    result = subprocess.run(
        [sys.executable, "-m", "skinpalette.cli", "analyze", "--bogus-flag"],
        capture_output=True, text=True,
    )
    assert result.returncode == 1


def test_demo_corpus_command(tmp_path, capsys):
    code = main(["demo-corpus", "--out", str(tmp_path / "c"), "--images", "2"])
    assert code == 0
    manifest = json.loads((tmp_path / "c" / "manifest.json").read_text())
    assert [c["id"] for c in manifest["cohorts"]] == ["kr", "cn", "th", "jp"]
    assert len(list((tmp_path / "c" / "kr").glob("*.png"))) == 2
