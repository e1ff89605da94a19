"""Command-line interface: fit models, emit matrices, align words, score cognancy.

Subcommands compose through files so a full run is scriptable:

    phondist fit --features features.tsv --seed seed.csv -o model.json
    phondist matrix --model model.json --features features.tsv -o matrix.tsv
    phondist distance --matrix matrix.tsv a i
    phondist align --matrix matrix.tsv woldemort waldemar
    phondist cognates --matrix matrix.tsv --words list.txt
    phondist pca --matrix matrix.tsv -k 2 --format svg -o scatter.svg

Exit codes: 0 success, 1 internal/numerical failure, 2 usage or input error.
"""

import argparse
import sys
from pathlib import Path

from . import __version__
from .align import (
    DEFAULT_CENTER,
    DEFAULT_GAP,
    DEFAULT_SIGMA,
    ScoringScheme,
    cognancy_matrix,
    format_alignment,
    format_cognancy_tsv,
    global_align,
    local_align,
)
from .errors import InputError, NumericalError, PhondistError
from .features import load_feature_table
from .matrix import (
    build_matrix,
    export_matrix_tsv,
    export_pca_svg,
    export_pca_tsv,
    load_reference_matrix,
    pca,
)
from .model import DEFAULT_LAMBDA, fit, load_model, save_model
from .seed import (
    apply_adjustments,
    augment_with_deltas,
    derive_deltas,
    load_delta_bundles,
    load_seed_matrix,
    load_templates,
    normalize_scores,
)

DEFAULT_THRESHOLD = 0.0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phondist",
        description="Dimensionless phoneme distances, alignment and cognancy scoring.",
    )
    parser.add_argument("--version", action="version", version=f"phondist {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit a distance model from seed data")
    p_fit.add_argument("--features", required=True, help="feature table TSV")
    p_fit.add_argument("--seed", required=True, help="raw seed scores CSV")
    p_fit.add_argument("--adjustments", help="manual overrides CSV (optional)")
    p_fit.add_argument("--templates", help="delta template CSV (optional)")
    p_fit.add_argument("--bundles", help="correspondence bundle JSON (needed with --templates)")
    p_fit.add_argument(
        "--lambda", dest="lam", type=float, default=DEFAULT_LAMBDA,
        help=f"ridge strength, >= 0 (default {DEFAULT_LAMBDA})",
    )
    p_fit.add_argument("-o", "--out", required=True, help="output model JSON")

    p_matrix = sub.add_parser("matrix", help="materialize the full distance matrix")
    p_matrix.add_argument("--model", required=True, help="fitted model JSON")
    p_matrix.add_argument("--features", required=True, help="feature table TSV")
    p_matrix.add_argument("--include-null", action="store_true", help="add the ∅ row/column")
    p_matrix.add_argument("-o", "--out", required=True, help="output matrix TSV")

    p_dist = sub.add_parser("distance", help="look up one pairwise distance")
    p_dist.add_argument("--matrix", required=True, help="matrix TSV")
    p_dist.add_argument("seg_a")
    p_dist.add_argument("seg_b")

    p_align = sub.add_parser("align", help="align two IPA words")
    p_align.add_argument("--matrix", required=True, help="matrix TSV")
    p_align.add_argument("word1")
    p_align.add_argument("word2")
    _add_scoring_options(p_align)

    p_cog = sub.add_parser("cognates", help="pairwise cognancy scores for a word list")
    p_cog.add_argument("--matrix", required=True, help="matrix TSV")
    p_cog.add_argument("--words", required=True, help="word list, one IPA word per line")
    p_cog.add_argument(
        "--threshold", type=float, default=None,
        help=f"mark scores >= threshold with '*' (conventionally {DEFAULT_THRESHOLD})",
    )
    _add_scoring_options(p_cog)

    p_pca = sub.add_parser("pca", help="principal components of a distance matrix")
    p_pca.add_argument("--matrix", required=True, help="matrix TSV")
    p_pca.add_argument("-k", "--components", type=int, default=2, help="component count")
    p_pca.add_argument("--format", choices=("tsv", "svg"), default="tsv")
    p_pca.add_argument("-o", "--out", required=True, help="output file")

    return parser


def _add_scoring_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("global", "local"), default="global")
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                   help=f"similarity scale, > 0 (default {DEFAULT_SIGMA})")
    p.add_argument("--center", type=float, default=DEFAULT_CENTER,
                   help=f"distance where similarity crosses 0, in (0, 1] (default {DEFAULT_CENTER})")
    p.add_argument("--gap", type=float, default=DEFAULT_GAP,
                   help=f"constant gap score (default {DEFAULT_GAP})")
    p.add_argument("--null-gaps", action="store_true",
                   help="price gaps against the ∅ column instead of --gap")


def _require_files(*paths: "str | None") -> None:
    for p in paths:
        if p is not None and not Path(p).is_file():
            raise InputError(f"no such file: {p}")


def _params_header(**params) -> str:
    rendered = " ".join(f"{k}={v}" for k, v in params.items())
    return f"phondist {__version__} {rendered}"


def cmd_fit(args) -> int:
    _require_files(args.features, args.seed, args.adjustments, args.templates, args.bundles)
    if args.lam < 0:
        raise InputError(f"--lambda must be >= 0, got {args.lam}")
    if args.templates and not args.bundles:
        raise InputError("--templates requires --bundles for the delta pair lists")
    inv = load_feature_table(args.features)
    ds = normalize_scores(load_seed_matrix(args.seed, inv))
    if args.templates:
        bundles = load_delta_bundles(args.bundles)
        deltas = derive_deltas(ds, bundles)
        ds = augment_with_deltas(ds, deltas, inv, load_templates(args.templates))
    if args.adjustments:
        ds = apply_adjustments(ds, args.adjustments)
    model = fit(ds, inv, args.lam)
    save_model(model, args.out)
    print(f"fitted on {len(ds)} records, lambda={args.lam}")
    print(f"intercept: {model.intercept:.6f}")
    ranked = sorted(
        zip(model.predictor_names, model.coefficients), key=lambda kv: -abs(kv[1])
    )
    print("largest coefficients:")
    for name, value in ranked[:5]:
        print(f"  {name:32s} {value:+.6f}")
    return 0


def cmd_matrix(args) -> int:
    _require_files(args.model, args.features)
    inv = load_feature_table(args.features)
    model = load_model(args.model)
    dm = build_matrix(model, inv, include_null=args.include_null)
    header = _params_header(model=args.model, include_null=args.include_null)
    export_matrix_tsv(dm, args.out, header=header)
    print(f"wrote {len(dm)}x{len(dm)} matrix to {args.out}")
    return 0


def cmd_distance(args) -> int:
    _require_files(args.matrix)
    dm = load_reference_matrix(args.matrix)
    print(f"{dm.get(args.seg_a, args.seg_b):.2f}")
    return 0


def _scheme(args, dm) -> ScoringScheme:
    return ScoringScheme(
        matrix=dm,
        sigma=args.sigma,
        center=args.center,
        gap_mode="null_column" if args.null_gaps else "constant",
        gap_constant=args.gap,
    )


def cmd_align(args) -> int:
    _require_files(args.matrix)
    dm = load_reference_matrix(args.matrix)
    scheme = _scheme(args, dm)
    aligner = global_align if args.mode == "global" else local_align
    alignment = aligner(scheme, args.word1, args.word2)
    print(format_alignment(alignment))
    print(f"score: {alignment.score:+.2f}")
    return 0


def cmd_cognates(args) -> int:
    _require_files(args.matrix, args.words)
    dm = load_reference_matrix(args.matrix)
    scheme = _scheme(args, dm)
    words = _read_words(args.words)
    if len(words) < 2:
        raise InputError(f"word list needs at least 2 words, found {len(words)}")
    cm = cognancy_matrix(scheme, words, args.mode)
    header = _params_header(
        mode=args.mode, sigma=args.sigma, center=args.center,
        gap="null_column" if args.null_gaps else args.gap,
    )
    sys.stdout.write(format_cognancy_tsv(cm, threshold=args.threshold, header=header))
    return 0


def cmd_pca(args) -> int:
    _require_files(args.matrix)
    if args.components < 1:
        raise InputError(f"-k must be >= 1, got {args.components}")
    dm = load_reference_matrix(args.matrix)
    result = pca(dm, args.components)
    header = _params_header(matrix=args.matrix, k=args.components)
    if args.format == "svg":
        export_pca_svg(result, args.out, header=header)
    else:
        export_pca_tsv(result, args.out, header=header)
    print(f"wrote {args.format} to {args.out}")
    return 0


def _read_words(path: str) -> list[str]:
    words = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line and not line.startswith("#"):
                words.append(line)
    return words


_COMMANDS = {
    "fit": cmd_fit,
    "matrix": cmd_matrix,
    "distance": cmd_distance,
    "align": cmd_align,
    "cognates": cmd_cognates,
    "pca": cmd_pca,
}


def main(argv: "list[str] | None" = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (InputError, FileNotFoundError) as exc:
        print(f"phondist {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"phondist {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"phondist {args.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    except PhondistError as exc:
        print(f"phondist {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
