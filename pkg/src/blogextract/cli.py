"""Command-line surface over training, extraction, and evaluation.

Exit codes: 0 on success, 1 when some inputs failed but the batch ran,
2 on usage or configuration errors (bad flags, missing manifest, model
schema mismatch).
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import experiments, pipeline, svm, synth
from .corpus import PageCache, load_corpus
from .errors import BlogExtractError, MissingFile, SchemaMismatch
from .layout import DEFAULT_VIEWPORT, Viewport


def _viewport_arg(text: str) -> Viewport:
    parts = text.lower().split("x")
    try:
        width, height = (int(p) for p in parts)
        return Viewport(width, height)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(
            f"expected WIDTHxHEIGHT (e.g. 1280x1024), got {text!r}"
        ) from None


def _gamma_arg(text: str):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"gamma must be 'auto' or a positive number, got {text!r}"
        ) from None
    if value <= 0:
        raise argparse.ArgumentTypeError("gamma must be positive")
    return value


def _sizes_arg(text: str) -> tuple[int, ...]:
    """Parse "2..20:2" (inclusive range with step) or "2,5,10"."""
    try:
        if ".." in text:
            span, _, step_text = text.partition(":")
            lo_text, _, hi_text = span.partition("..")
            lo, hi = int(lo_text), int(hi_text)
            step = int(step_text) if step_text else 1
            if lo < 1 or hi < lo or step < 1:
                raise ValueError
            return tuple(range(lo, hi + 1, step))
        sizes = tuple(int(p) for p in text.split(","))
        if not sizes or any(s < 1 for s in sizes):
            raise ValueError
        return sizes
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected sizes like '2..20:2' or '10,40', got {text!r}"
        ) from None


def _posts_arg(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo_text, _, hi_text = text.partition("..")
            lo, hi = int(lo_text), int(hi_text)
        else:
            lo = hi = int(text)
        if lo < 1 or hi < lo:
            raise ValueError
        return lo, hi
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected a posts-per-page range like '3..6', got {text!r}"
        ) from None


def _load_model(path: Path) -> svm.SvmModel:
    try:
        data = path.read_bytes()
    except FileNotFoundError:
        raise MissingFile(f"model file not found: {path}") from None
    return svm.load_model(data)


def _fmt_val(value) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def cmd_train(args) -> int:
    corpus = load_corpus(args.manifest)
    cache = PageCache(args.viewport)
    title_model, body_model, info = experiments.train_models(
        corpus.pages, cache=cache, c=args.c, gamma=args.gamma, seed=args.seed
    )
    args.out_title.parent.mkdir(parents=True, exist_ok=True)
    args.out_body.parent.mkdir(parents=True, exist_ok=True)
    args.out_title.write_bytes(svm.save_model(title_model))
    args.out_body.write_bytes(svm.save_model(body_model))
    print(f"trained on {len(corpus.pages)} pages from {len(corpus.sites)} sites")
    for kind, model, out in (
        ("title", info["title"], args.out_title),
        ("body", info["body"], args.out_body),
    ):
        print(
            f"{kind} model: c={model['c']} gamma={model['gamma']} "
            f"val_accuracy={_fmt_val(model['val_accuracy'])} -> {out}"
        )
    if not info["searched"]:
        print("hyperparameter search skipped (pinned flags or tiny corpus)")
    return 0


def _extract_inputs(root: Path) -> list[Path]:
    if root.is_dir():
        return sorted(
            p for p in root.iterdir() if p.suffix.lower() in (".html", ".htm")
        )
    if root.is_file():
        return [root]
    raise MissingFile(f"no such input: {root}")


def cmd_extract(args) -> int:
    title_model = _load_model(args.title_model)
    body_model = _load_model(args.body_model)
    if title_model.schema_id != pipeline.TITLE_SCHEMA_ID:
        raise SchemaMismatch(
            f"--title-model has schema {title_model.schema_id!r}"
        )
    if body_model.schema_id != pipeline.BODY_SCHEMA_ID:
        raise SchemaMismatch(
            f"--body-model has schema {body_model.schema_id!r}"
        )
    inputs = _extract_inputs(args.input)
    if not inputs:
        return 0

    def one(path: Path) -> dict:
        sidecar = None
        if args.geometry == "sidecar":
            sidecar = path.with_suffix(".geom").read_bytes()
        page = pipeline.PageInput(
            html=path.read_bytes(),
            sidecar=sidecar,
            viewport=args.viewport,
        )
        result = pipeline.extract(page, title_model, body_model)
        return {"file": str(path), **pipeline.result_to_json(result)}

    def safely(path: Path):
        try:
            return path, one(path), None
        except (BlogExtractError, OSError, ValueError) as exc:
            return path, None, f"{path}: {exc}"

    workers = max(1, args.workers)
    if workers == 1 or len(inputs) == 1:
        produced = [safely(p) for p in inputs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            produced = list(pool.map(safely, inputs))

    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
    failed = False
    for path, doc, error in produced:
        if error is not None:
            print(f"error: {error}", file=sys.stderr)
            failed = True
            continue
        if args.out is not None:
            out_path = args.out / (path.stem + ".json")
            out_path.write_text(
                json.dumps(doc, ensure_ascii=False, indent=1) + "\n",
                encoding="utf-8",
            )
        else:
            print(json.dumps(doc, ensure_ascii=False, separators=(",", ":")))
    return 1 if failed else 0


def _emit_reports(reports: list, out: Path | None) -> None:
    print("\n\n".join(r.format_table() for r in reports))
    if out is not None:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(
            json.dumps([r.to_json() for r in reports], indent=1) + "\n",
            encoding="utf-8",
        )


def cmd_evaluate(args) -> int:
    corpus = load_corpus(args.manifest)
    cache = PageCache(args.viewport)
    common = dict(
        seed=args.seed, runs=args.runs, cache=cache, c=args.c, gamma=args.gamma
    )
    if args.experiment == "single":
        reports = experiments.run_single_site_experiment(
            corpus, train_sizes=args.train_sizes, **common
        )
    elif args.experiment == "multi":
        reports = [
            experiments.run_multi_site_experiment(
                corpus, per_site_train=args.per_site_train, **common
            )
        ]
    else:
        reports = [
            experiments.run_generalization_experiment(
                corpus, n_train=args.n_train, **common
            )
        ]
    _emit_reports(reports, args.out)
    return 0


def cmd_curve(args) -> int:
    corpus = load_corpus(args.manifest)
    cache = PageCache(args.viewport)
    reports = experiments.run_learning_curve(
        corpus, sizes=args.sizes, seed=args.seed, runs=args.runs,
        cache=cache, c=args.c, gamma=args.gamma,
    )
    print("train  title  body   joint  " + "0%" + " " * 36 + "100%")
    for r in reports:
        bar = "#" * round(r.joint_accuracy * 40)
        print(
            f"{r.train_size:>5d}  {r.title_accuracy:.3f}  "
            f"{r.body_accuracy:.3f}  {r.joint_accuracy:.3f}  |{bar:<40}|"
        )
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(
            json.dumps([r.to_json() for r in reports], indent=1) + "\n",
            encoding="utf-8",
        )
    return 0


def cmd_gen_corpus(args) -> int:
    corpus = synth.generate_synthetic_corpus(
        args.out,
        seed=args.seed,
        n_sites=args.sites,
        pages_per_site=args.pages_per_site,
        posts_per_page=args.posts,
        viewport=args.viewport,
    )
    print(
        f"wrote {len(corpus)} labeled pages across {len(corpus.sites)} "
        f"sites under {args.out}"
    )
    print(f"manifest: {Path(args.out) / 'manifest.json'}")
    return 0


def _add_viewport(parser) -> None:
    parser.add_argument(
        "--viewport", type=_viewport_arg, default=DEFAULT_VIEWPORT,
        metavar="WxH", help="reference viewport (default 1280x1024)",
    )


def _add_hyper(parser) -> None:
    parser.add_argument(
        "--c", type=float, default=None,
        help="pin the soft-margin C instead of grid searching",
    )
    parser.add_argument(
        "--gamma", type=_gamma_arg, default=None,
        help="pin the RBF width ('auto' or a positive number)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="blogextract",
        description="Template-independent blog title and body extraction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "train", help="train a title and a body model from a labeled manifest"
    )
    p.add_argument("manifest", type=Path)
    p.add_argument("--out-title", type=Path, required=True)
    p.add_argument("--out-body", type=Path, required=True)
    _add_viewport(p)
    p.add_argument("--seed", type=int, default=0)
    _add_hyper(p)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser(
        "extract", help="extract titles and bodies from HTML pages"
    )
    p.add_argument(
        "input", type=Path, help="an HTML file or a directory of .html files"
    )
    p.add_argument("--title-model", type=Path, required=True)
    p.add_argument("--body-model", type=Path, required=True)
    p.add_argument(
        "--out", type=Path, default=None,
        help="directory for per-page JSON files (default: JSON lines on stdout)",
    )
    p.add_argument(
        "--geometry", choices=("heuristic", "sidecar"), default="heuristic",
        help="'sidecar' reads measured geometry from <page>.geom next to "
        "each HTML file",
    )
    _add_viewport(p)
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("evaluate", help="run an evaluation protocol")
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument(
        "--experiment", choices=("single", "multi", "generalization"),
        default="single",
    )
    p.add_argument(
        "--train-sizes", type=_sizes_arg, default=(10, 40), metavar="SIZES",
        help="single-site training sizes, e.g. '10,40' or '2..20:2'",
    )
    p.add_argument("--per-site-train", type=int, default=40)
    p.add_argument("--n-train", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    _add_viewport(p)
    _add_hyper(p)
    p.add_argument(
        "--out", type=Path, default=None, help="also write reports as JSON"
    )
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser(
        "curve", help="sweep single-site training sizes and plot accuracy"
    )
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument(
        "--sizes", type=_sizes_arg, default=tuple(range(2, 21, 2)),
        metavar="SIZES", help="e.g. '2..20:2'",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--runs", type=int, default=1)
    _add_viewport(p)
    _add_hyper(p)
    p.add_argument(
        "--out", type=Path, default=None, help="also write reports as JSON"
    )
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser(
        "gen-corpus", help="generate a labeled synthetic blog corpus"
    )
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--sites", type=int, default=9)
    p.add_argument("--pages-per-site", type=int, default=250)
    p.add_argument(
        "--posts", type=_posts_arg, default=(2, 4), metavar="LO..HI",
        help="posts per page range for index-style sites (default 2..4)",
    )
    _add_viewport(p)
    p.set_defaults(func=cmd_gen_corpus)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BlogExtractError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
