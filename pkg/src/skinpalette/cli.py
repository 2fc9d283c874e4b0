"""Command-line interface: analyze, compare, gamut, demo-corpus.

Exit codes are a stable scripting contract: 0 success, 1 fatal error,
2 partial success (some images were skipped; counts are printed and
recorded in the run manifest).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .config import RunConfig
from .corpus import Corpus
from .errors import AllSamplesGatedError, EmptyCohortError, SkinPaletteError
from .fixtures import generate_demo_corpus
from .metrics import distance_matrix, metrics_from_collection
from .palette import load_palette, palette_from_samples
from .pipeline import collect_cohort, gated_samples
from .refsys import gamut_report, gamut_report_to_dict, load_reference
from .report import CohortReport, distances_csv, emit_report

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_PARTIAL = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits 2 on usage errors; our contract reserves 2 for
    partial success, so remap usage problems to the fatal code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FATAL, f"{self.prog}: error: {message}\n")


def _parse_arcs(text: str) -> tuple[tuple[float, float], ...]:
    arcs = []
    for part in text.split(","):
        lo, _, hi = part.partition(":")
        arcs.append((float(lo), float(hi)))
    return tuple(arcs)


def _parse_index_pair(text: str) -> tuple[int, int]:
    a, _, b = text.partition(":")
    return (int(a), int(b))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="skinpalette", description=__doc__)
    parser.add_argument("--version", action="version", version=f"skinpalette {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser(
        "analyze",
        help="run the full pipeline over a manifest and write the report tree",
    )
    an.add_argument("--manifest", required=True, type=Path, help="cohort manifest JSON")
    an.add_argument("--out", required=True, type=Path, help="output directory")
    an.add_argument("--reference", type=Path, default=None,
                    help="reference system CSV for gamut/scatter (optional)")
    an.add_argument("--k", type=int, default=20, help="palette size (default 20)")
    an.add_argument("--seed", type=int, default=20, help="PRNG seed (default 20)")
    an.add_argument("--tol", type=float, default=1e-6,
                    help="k-means centroid movement tolerance (default 1e-6)")
    an.add_argument("--max-iter", type=int, default=300,
                    help="k-means iteration cap (default 300)")
    an.add_argument("--min-lightness", type=float, default=0.60,
                    help="skin gate lightness bound, strict (default 0.60)")
    an.add_argument("--hue-arcs", type=str, default="0:50,300:360",
                    help='skin gate hue arcs as "lo:hi,lo:hi" degrees (default "0:50,300:360")')
    an.add_argument("--samples-per-segment", type=int, default=10,
                    help="sample points per cheek segment (default 10)")
    an.add_argument("--patch", type=int, default=3,
                    help="odd mean-patch size in pixels; 1 samples single pixels (default 3)")
    an.add_argument("--bright-threshold", type=int, default=200,
                    help="strict luma bound for bright pixels (default 200)")
    an.add_argument("--hue-mode", choices=("circular", "legacy_raw"), default="circular",
                    help="texture hue term: normalized circular or raw degrees (default circular)")
    an.add_argument("--cluster-space", choices=("cylinder", "rgb"), default="cylinder",
                    help="clustering space (default cylinder)")
    an.add_argument("--face-region", choices=("bbox", "hull"), default="bbox",
                    help="brightness face region (default bbox)")
    an.add_argument("--epsilon", type=float, default=0.05,
                    help="gamut distance threshold in embedded space (default 0.05)")
    an.add_argument("--jobs", type=int, default=1,
                    help="image-level workers; results identical for any N (default 1)")
    an.add_argument("--segment-a", type=str, default="36:31",
                    help='landmark index pair for segment A (default "36:31")')
    an.add_argument("--segment-b", type=str, default="39:48",
                    help='landmark index pair for segment B (default "39:48")')

    cp = sub.add_parser("compare", help="distance matrix from emitted palette JSON files")
    cp.add_argument("palettes", nargs="+", type=Path, help="two or more palette JSON files")
    cp.add_argument("--out", type=Path, default=None, help="write CSV here instead of stdout")

    gm = sub.add_parser("gamut", help="gamut report for one palette against a reference CSV")
    gm.add_argument("--palette", required=True, type=Path, help="palette JSON file")
    gm.add_argument("--reference", required=True, type=Path, help="reference system CSV")
    gm.add_argument("--epsilon", type=float, default=0.05,
                    help="distance threshold in embedded space (default 0.05)")

    dc = sub.add_parser("demo-corpus", help="materialize the bundled synthetic mini-corpus")
    dc.add_argument("--out", required=True, type=Path, help="directory to create the corpus in")
    dc.add_argument("--images", type=int, default=25, help="images per cohort (default 25)")
    dc.add_argument("--seed", type=int, default=11, help="generator seed (default 11)")

    return parser


def _config_from_args(args) -> RunConfig:
    return RunConfig(
        manifest_path=args.manifest,
        out_dir=args.out,
        reference_path=args.reference,
        k=args.k,
        seed=args.seed,
        tol=args.tol,
        max_iter=args.max_iter,
        min_lightness=args.min_lightness,
        hue_arcs=_parse_arcs(args.hue_arcs),
        samples_per_segment=args.samples_per_segment,
        patch=args.patch,
        bright_threshold=args.bright_threshold,
        hue_mode=args.hue_mode,
        cluster_space=args.cluster_space,
        face_region=args.face_region,
        epsilon=args.epsilon,
        jobs=args.jobs,
        segment_a=_parse_index_pair(args.segment_a),
        segment_b=_parse_index_pair(args.segment_b),
    ).validate()


def cmd_analyze(config: RunConfig) -> int:
    """Full pipeline over all cohorts; writes the report output tree."""
    corpus = Corpus.open(config.manifest_path)
    reference = load_reference(config.reference_path) if config.reference_path else None
    config_hash = config.config_hash()

    reports = []
    total_skipped = 0
    total_orphans = 0
    for cohort_id in corpus.cohort_ids():
        collection = collect_cohort(corpus, cohort_id, config)
        if not collection.observations:
            raise EmptyCohortError(f"cohort {cohort_id!r} has no usable images")
        samples = gated_samples(collection, config.gate())
        if not samples:
            raise AllSamplesGatedError(cohort_id, collection.n_sampled_colors())
        palette = palette_from_samples(
            cohort_id,
            samples,
            k=config.k,
            seed=config.seed,
            tol=config.tol,
            max_iter=config.max_iter,
            cluster_space=config.cluster_space,
            config_hash=config_hash,
        )
        metrics = metrics_from_collection(collection, config)
        gamut = gamut_report(palette, reference, config.epsilon) if reference else None
        reports.append(
            CohortReport(
                cohort_id=cohort_id,
                palette=palette,
                metrics=metrics,
                gamut=gamut,
                config_echo=config.echo_dict(),
                n_scanned=collection.n_scanned,
                skipped=collection.skipped,
                orphans=collection.orphans,
            )
        )
        total_skipped += collection.skipped
        total_orphans += collection.orphans
        print(
            f"{cohort_id}: {len(collection.observations)} faces, "
            f"{palette.n_samples} gated samples, {collection.skipped} skipped, "
            f"{collection.orphans} orphans"
        )
        if palette.distinct_deficit:
            print(
                f"warning: {cohort_id} has fewer than k={config.k} distinct "
                f"sample colors; palette holds {len(palette.entries)} entries",
                file=sys.stderr,
            )

    matrix = distance_matrix([r.palette for r in reports]) if len(reports) >= 2 else None
    written = emit_report(reports, matrix, config.out_dir, reference=reference)
    print(f"wrote {len(written)} files to {config.out_dir}")
    if total_orphans > 0:
        print(f"note: {total_orphans} images had no landmark sidecar", file=sys.stderr)
    if total_skipped > 0:
        print(f"partial success: {total_skipped} images skipped", file=sys.stderr)
        return EXIT_PARTIAL
    return EXIT_OK


def cmd_compare(palette_paths: list[Path], out: Path | None) -> int:
    """Distance matrix across previously emitted palettes; no image access."""
    if len(palette_paths) < 2:
        print("compare needs at least 2 palette files", file=sys.stderr)
        return EXIT_FATAL
    palettes = []
    for path in palette_paths:
        try:
            palettes.append(load_palette(path))
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            print(f"error: cannot read palette {path}: {exc}", file=sys.stderr)
            return EXIT_FATAL
    hashes = {p.config_hash for p in palettes}
    if len(hashes) > 1:
        print("warning: palettes come from different configurations", file=sys.stderr)
    ks = {p.k for p in palettes}
    if len(ks) > 1:
        print(f"note: palettes have different k values {sorted(ks)}", file=sys.stderr)
    matrix = distance_matrix(palettes)
    csv_text = distances_csv(matrix)
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(csv_text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_gamut(palette_path: Path, reference_path: Path, epsilon: float) -> int:
    """Print a palette's gamut report against a reference system as JSON."""
    if not epsilon > 0.0:
        print(f"epsilon must be positive, got {epsilon}", file=sys.stderr)
        return EXIT_FATAL
    palette = load_palette(palette_path)
    reference = load_reference(reference_path)
    report = gamut_report(palette, reference, epsilon)
    print(json.dumps(gamut_report_to_dict(report), indent=2))
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "analyze":
            return cmd_analyze(_config_from_args(args))
        if args.command == "compare":
            return cmd_compare(args.palettes, args.out)
        if args.command == "gamut":
            return cmd_gamut(args.palette, args.reference, args.epsilon)
        if args.command == "demo-corpus":
            manifest = generate_demo_corpus(args.out, images_per_cohort=args.images, seed=args.seed)
            print(f"demo corpus written; manifest at {manifest}")
            return EXIT_OK
    except SkinPaletteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    except (OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FATAL
    raise AssertionError(f"unhandled command {args.command!r}")


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
