"""Command-line interface.

Exit status: 0 on success, 1 for usage or internal errors, 2 when the input
data (programs, manifests, artifacts) is at fault. Data goes to stdout,
diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import glob
import io
import logging
import os
import sys
from pathlib import Path

from .artifact import MODEL_KINDS, ModelArtifact
from .corpus import SplitSpec, load_corpus, write_feature_dump
from .errors import DesignGradeError, NoGoodPrograms, ProgramSyntaxError
from .features import file_features
from .feedback import MessageTable, generate_feedback, render_reports
from .pipeline import evaluate, train_pipeline
from .regressors import TrainConfig
from .synthetic import generate_synthetic_corpus

log = logging.getLogger("designgrade")

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
SEED_ENV = "DESIGNGRADE_SEED"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


def _depth_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(p) for p in text.split(",")]


def expand_inputs(patterns) -> list[str]:
    """Files, directories (searched for ``*.py``) and glob patterns, in the order given."""
    paths = []
    for pattern in patterns:
        if os.path.isdir(pattern):
            paths.extend(sorted(str(p) for p in Path(pattern).rglob("*.py")))
        elif glob.has_magic(pattern):
            paths.extend(sorted(glob.glob(pattern, recursive=True)))
        else:
            paths.append(pattern)
    seen = set()
    return [p for p in paths if not (p in seen or seen.add(p))]


def _features_for(paths):
    """Extract every file; report all failures before giving up."""
    results, failed = [], []
    for path in paths:
        try:
            results.append((path, file_features(path)))
        except ProgramSyntaxError as exc:
            failed.append(f"{path}:{exc.line}: syntax error: {exc.message}")
        except (OSError, UnicodeDecodeError) as exc:
            failed.append(f"{path}: {exc}")
    for message in failed:
        print(message, file=sys.stderr)
    return results, failed


def cmd_extract(args) -> int:
    paths = expand_inputs(args.inputs)
    if not paths:
        print("no inputs", file=sys.stderr)
        return EXIT_DATA
    records, failed = _features_for(paths)
    if failed:
        print(f"{len(failed)} of {len(paths)} file(s) could not be parsed", file=sys.stderr)
        return EXIT_DATA
    buf = io.StringIO()
    write_feature_dump(records, buf)
    if args.out:
        Path(args.out).write_text(buf.getvalue(), encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def cmd_train(args) -> int:
    config = TrainConfig(
        hidden_size=args.hidden,
        epochs=args.epochs,
        learning_rate=args.lr,
        l2_lambda=args.l2,
        seed=args.seed,
        use_bias=not args.no_bias,
    )
    split = SplitSpec.parse(args.split, seed=args.seed)
    examples = load_corpus(args.manifest, workers=args.workers)
    artifact, metrics = train_pipeline(
        examples,
        kind=args.model,
        config=config,
        ensemble_size=args.ensemble_size,
        split=split,
        cart_depth=args.depth,
        depth_sweep=_depth_range(args.depth_sweep) if args.depth_sweep else None,
        min_leaf=args.min_leaf,
        workers=args.workers,
    )
    artifact.save(args.out)
    if artifact.good_profile is None:
        log.warning("no training program scored above the threshold; the artifact cannot give feedback")
    for name, m in metrics.items():
        print(m.row(name))
    if "depth_sweep" in artifact.train_meta:
        print(f"selected depth {artifact.train_meta['depth_sweep']['best_depth']}")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    artifact = ModelArtifact.load(args.artifact)
    examples = load_corpus(args.manifest, workers=args.workers)
    m = evaluate(artifact, examples)
    print(f"{'Method':<16}{'MSE':>8}{'Accuracy':>10}")
    print(f"{artifact.model_kind:<16}{m.mse:>8.3f}{m.accuracy * 100:>9.2f}%")
    return EXIT_OK


def cmd_grade(args) -> int:
    artifact = ModelArtifact.load(args.artifact)
    paths = expand_inputs(args.files)
    if not paths:
        print("no inputs", file=sys.stderr)
        return EXIT_DATA
    records, failed = _features_for(paths)
    for path, fv in records:
        score = float(artifact.predict_raw(fv.values)[0])
        print(f"{path}\t{score:.4f}")
    return EXIT_DATA if failed else EXIT_OK


def cmd_feedback(args) -> int:
    artifact = ModelArtifact.load(args.artifact)
    if artifact.good_profile is None:
        raise NoGoodPrograms("artifact has no good-program profile (no training score above the threshold)")
    table = MessageTable.from_file(args.messages) if args.messages else MessageTable()
    paths = expand_inputs(args.files)
    if not paths:
        print("no inputs", file=sys.stderr)
        return EXIT_DATA
    records, failed = _features_for(paths)
    reports = [
        generate_feedback(
            artifact.model,
            artifact.standardizer,
            artifact.good_profile,
            fv,
            table=table,
            program_path=path,
            top_k=args.top_k,
            min_delta=args.min_delta,
        )
        for path, fv in records
    ]
    if reports:
        sys.stdout.write(render_reports(reports, args.format).rstrip("\n") + "\n")
    return EXIT_DATA if failed else EXIT_OK


def cmd_gen_corpus(args) -> int:
    manifest = generate_synthetic_corpus(args.n, args.seed, args.out_dir)
    print(manifest)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="designgrade", description="Score the design quality of Python programs.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("extract", help="dump the feature vector of each program")
    p.add_argument("inputs", nargs="*", help="files, directories or glob patterns")
    p.add_argument("--out", help="output CSV (default: stdout)")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("train", help="train a model from a scored manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--model", choices=MODEL_KINDS, default="ensemble")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--ensemble-size", type=int, default=10)
    p.add_argument("--hidden", type=int, default=32)
    p.add_argument("--epochs", type=int, default=250)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--l2", type=float, default=1e-4)
    p.add_argument("--no-bias", action="store_true", help="train without bias terms")
    p.add_argument("--split", default="0.7,0.15,0.15", help="train,dev,test ratios")
    p.add_argument("--depth", type=int, default=10, help="CART maximum depth")
    p.add_argument("--depth-sweep", help="CART depths to try on the dev set, e.g. 1..15")
    p.add_argument("--min-leaf", type=int, default=2)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="artifact path")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("evaluate", help="MSE and average accuracy on a scored manifest")
    p.add_argument("--artifact", required=True)
    p.add_argument("--manifest", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grade", help="predict a design score per file")
    p.add_argument("--artifact", required=True)
    p.add_argument("files", nargs="*")
    p.set_defaults(func=cmd_grade)

    p = sub.add_parser("feedback", help="suggest design changes per file")
    p.add_argument("--artifact", required=True)
    p.add_argument("--format", choices=("text", "structured"), default="text")
    p.add_argument("--top-k", type=int)
    p.add_argument("--min-delta", type=float, default=0.0)
    p.add_argument("--messages", help="CSV of feature_id,direction,sentence overrides")
    p.add_argument("files", nargs="*")
    p.set_defaults(func=cmd_feedback)

    p = sub.add_parser("gen-corpus", help="write a synthetic scored corpus")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_gen_corpus)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (DesignGradeError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
