"""Command-line entry point composing the pipeline:
normalize -> score -> flag -> classify -> tag -> evaluate -> report / serve.

Exit codes: 0 success, 1 validation error, 2 I/O error, 64 unknown
subcommand.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import corpus as corpus_mod
from . import detect, embed, metrics, normalize
from .corpus import Corpus, CorpusError, ReviewRecord, load_annotations, load_reviews, write_corpus
from .detect import LexiconSet
from .lexicons import LexiconError, load_lexicon
from .sentiment import ExternalScorerClient, ScorerError, score_sentence

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_IO = 2
EXIT_USAGE = 64

COMMANDS = ("normalize", "score", "flag", "classify", "tag", "train-embed", "evaluate", "report", "serve")


def load_config(path: str | Path) -> dict[str, str]:
    """Flat key=value config file; '#' starts a comment line."""
    out: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise CorpusError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sentimt", description=__doc__)
    sub = parser.add_subparsers(dest="command")

    def common(p):
        p.add_argument("--config", help="flat key=value config file; flags override")
        p.add_argument("--corpus", help="input corpus JSONL")
        p.add_argument("--format", default="jsonl", choices=["jsonl", "tsv"])

    p = sub.add_parser("normalize", help="normalize Arabic sources, optionally split into segments")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--split-max-len", type=int, default=None)

    p = sub.add_parser("score", help="score mt_text sentiment per record")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--scorer", default="builtin", choices=["builtin", "external"])

    p = sub.add_parser("flag", help="extract rating-vs-score discrepancies")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--scorer", default="builtin", choices=["builtin", "external"])

    p = sub.add_parser("classify", help="assign error typology categories to flags")
    common(p)
    p.add_argument("--flags", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("tag", help="apply an annotation file (polarity tags, post-edits)")
    common(p)
    p.add_argument("--annotations", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train-embed", help="train dual-polarity CBOW embeddings")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--text-out")
    p.add_argument("--dimension", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--min-count", type=int, default=2)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--seed", type=int, default=1)

    p = sub.add_parser("evaluate", help="BLEU, word-level P/R/F1, and sentiment cost")
    common(p)
    p.add_argument("--out", required=True)
    p.add_argument("--mode", default="signed", choices=["positive_class", "negative_class", "signed"])
    p.add_argument("--contronyms", help="contronym lexicon TSV (default: seed)")

    p = sub.add_parser("report", help="frequency histogram CSV from classified flags")
    p.add_argument("--config")
    p.add_argument("--flags", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("serve", help="run the annotation HTTP service")
    common(p)
    p.add_argument("--port", type=int, default=8077)
    p.add_argument("--static-dir")
    p.add_argument("--annotation-log")

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    if getattr(args, "config", None):
        cfg = load_config(args.config)
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if hasattr(args, attr) and getattr(args, attr) in (None, ""):
                setattr(args, attr, value)


def _load_corpus(args: argparse.Namespace) -> Corpus:
    if not args.corpus:
        raise CorpusError("no corpus given (use --corpus)")
    return load_reviews(args.corpus, format=args.format)


def _make_scorer(args: argparse.Namespace, lexica: LexiconSet):
    if getattr(args, "scorer", "builtin") == "external":
        client = ExternalScorerClient()
        return client.score
    return lambda text: score_sentence(text, lexica.sentiment, verb_stems=lexica.verb_stems)


def _cmd_normalize(args) -> str:
    corpus = _load_corpus(args)
    records: list[ReviewRecord] = []
    for rec in corpus.records:
        text = normalize.normalize_arabic(normalize.strip_elongation(rec.source_text))
        if args.split_max_len:
            segments = normalize.split_segments(normalize.tokenize(text), args.split_max_len)
            if len(segments) <= 1:
                records.append(replace(rec, source_text=text))
            else:
                # the rating of the original review is copied to every segment
                for k, seg in enumerate(segments):
                    records.append(replace(
                        rec,
                        id=f"{rec.id}#{k}",
                        source_text=normalize.join_tokens(seg),
                        origin_id=rec.origin_id,
                        segment_index=k,
                    ))
        else:
            records.append(replace(rec, source_text=text))
    write_corpus(Corpus(tuple(records), corpus.annotations if not args.split_max_len else ()), args.out)
    return f"normalized {len(corpus.records)} records -> {len(records)} records at {args.out}"


def _cmd_score(args) -> str:
    corpus = _load_corpus(args)
    lexica = LexiconSet.seed()
    scorer = _make_scorer(args, lexica)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for rec in corpus.records:
            if rec.mt_text is None:
                raise CorpusError(f"record {rec.id!r} has no mt_text to score")
            score = scorer(rec.mt_text)
            fh.write(json.dumps({"id": rec.id, **score.to_json()}, ensure_ascii=False) + "\n")
    return f"scored {len(corpus.records)} records -> {args.out}"


def _cmd_flag(args) -> str:
    corpus = _load_corpus(args)
    lexica = LexiconSet.seed()
    flags = detect.flag_discrepancies(corpus, _make_scorer(args, lexica))
    detect.write_flags(flags, args.out)
    return f"flagged {len(flags)} of {len(corpus.records)} records -> {args.out}"


def _cmd_classify(args) -> str:
    corpus = _load_corpus(args)
    flags = detect.load_flags(args.flags)
    classified = detect.classify_flags(corpus, flags)
    detect.write_flags(classified, args.out)
    return f"classified {len(classified)} flags -> {args.out}"


def _cmd_tag(args) -> str:
    corpus = _load_corpus(args)
    annotations = load_annotations(args.annotations)
    tagged = corpus_mod.apply_annotations(corpus.with_annotations(annotations))
    write_corpus(tagged, args.out)
    return f"applied {len(annotations)} annotations -> {args.out}"


def _cmd_train_embed(args) -> str:
    corpus = _load_corpus(args)
    sentences = [normalize.tokenize(rec.source_text) for rec in corpus.records]
    config = embed.TrainConfig(
        dimension=args.dimension,
        window=args.window,
        min_count=args.min_count,
        epochs=args.epochs,
        initial_learning_rate=args.learning_rate,
        seed=args.seed,
    )
    model = embed.train(sentences, config)
    embed.save_binary(model, args.out)
    if args.text_out:
        embed.save_text(model, args.text_out)
    return f"trained {len(model.vocab)}x{model.dimension} embeddings -> {args.out}"


def _cmd_evaluate(args) -> str:
    corpus = _load_corpus(args)
    lexica = LexiconSet.seed()
    contronyms = (
        load_lexicon(args.contronyms, "contronym") if args.contronyms else lexica.contronyms
    )
    scorer = _make_scorer(args, lexica)
    report = metrics.evaluate(corpus, contronyms, scorer, mode=args.mode)
    metrics.write_report_json(report, args.out)
    return f"evaluated {len(corpus.records)} records -> {args.out}\n{report.to_table()}"


def _cmd_report(args) -> str:
    flags = detect.load_flags(args.flags)
    detect.write_histogram_csv(detect.frequency_report(flags), args.out)
    return f"histogram over {len(flags)} flags -> {args.out}"


def _cmd_serve(args) -> str:
    from .service import serve

    corpus = _load_corpus(args)
    serve(corpus, port=args.port, static_dir=args.static_dir, annotation_log=args.annotation_log)
    return "server stopped"


_DISPATCH = {
    "normalize": _cmd_normalize,
    "score": _cmd_score,
    "flag": _cmd_flag,
    "classify": _cmd_classify,
    "tag": _cmd_tag,
    "train-embed": _cmd_train_embed,
    "evaluate": _cmd_evaluate,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    if argv and not argv[0].startswith("-") and argv[0] not in COMMANDS:
        parser.print_usage(sys.stderr)
        print(f"sentimt: unknown subcommand {argv[0]!r}", file=sys.stderr)
        return EXIT_USAGE
    args = parser.parse_args(argv)
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        _apply_config(args)
        summary = _DISPATCH[args.command](args)
    except (CorpusError, LexiconError, ScorerError, embed.EmbedError, ValueError) as e:
        print(f"sentimt: {e}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as e:
        print(f"sentimt: {e}", file=sys.stderr)
        return EXIT_IO
    print(summary)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
