"""Review-corpus data model, JSONL/TSV ingestion, persistence, annotations.

On-disk format is JSONL (one record per line, UTF-8, LF) with a parallel
``<stem>.ann.jsonl`` file for annotations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Optional

from .normalize import TAG_SUFFIXES, join_tokens, tokenize

ANNOTATION_KINDS = ("polarity_tag", "post_edit")
POLARITIES = ("POS", "NEG")


class CorpusError(ValueError):
    """Invalid corpus content; carries file/line context when available."""


@dataclass(frozen=True)
class ReviewRecord:
    id: str
    source_text: str
    rating: int
    origin_id: str
    segment_index: int = 0
    mt_text: Optional[str] = None
    reference_text: Optional[str] = None

    def validate(self) -> None:
        if not isinstance(self.rating, int) or isinstance(self.rating, bool) or self.rating not in (1, 2, 3, 4, 5):
            raise CorpusError(f"rating out of range: {self.rating!r}")
        if not self.source_text.strip():
            raise CorpusError("source_text is empty")
        if self.segment_index < 0:
            raise CorpusError(f"segment_index must be >= 0, got {self.segment_index}")

    def to_json(self) -> dict:
        d = {
            "id": self.id,
            "source_text": self.source_text,
            "rating": self.rating,
            "origin_id": self.origin_id,
            "segment_index": self.segment_index,
        }
        if self.mt_text is not None:
            d["mt_text"] = self.mt_text
        if self.reference_text is not None:
            d["reference_text"] = self.reference_text
        return d

    @classmethod
    def from_json(cls, d: dict) -> "ReviewRecord":
        try:
            rec = cls(
                id=str(d["id"]),
                source_text=str(d["source_text"]),
                rating=d["rating"],
                origin_id=str(d.get("origin_id", d["id"])),
                segment_index=int(d.get("segment_index", 0)),
                mt_text=d.get("mt_text"),
                reference_text=d.get("reference_text"),
            )
        except KeyError as e:
            raise CorpusError(f"missing field {e.args[0]}") from None
        rec.validate()
        return rec


@dataclass(frozen=True)
class AnnotationRecord:
    item_id: str
    kind: str
    annotator: str
    timestamp: int
    token_index: Optional[int] = None
    polarity: Optional[str] = None
    edited_target: Optional[str] = None

    def validate(self) -> None:
        if self.kind not in ANNOTATION_KINDS:
            raise CorpusError(f"unknown annotation kind: {self.kind!r}")
        if self.timestamp <= 0:
            raise CorpusError("timestamp must be strictly positive")
        if self.kind == "polarity_tag":
            if self.token_index is None or self.token_index < 0:
                raise CorpusError("polarity_tag requires a non-negative token_index")
            if self.polarity not in POLARITIES:
                raise CorpusError(f"polarity_tag requires polarity in {POLARITIES}")
        else:  # post_edit
            if self.edited_target is None:
                raise CorpusError("post_edit requires edited_target")

    def to_json(self) -> dict:
        d = {
            "item_id": self.item_id,
            "kind": self.kind,
            "annotator": self.annotator,
            "timestamp": self.timestamp,
        }
        if self.token_index is not None:
            d["token_index"] = self.token_index
        if self.polarity is not None:
            d["polarity"] = self.polarity
        if self.edited_target is not None:
            d["edited_target"] = self.edited_target
        return d

    @classmethod
    def from_json(cls, d: dict) -> "AnnotationRecord":
        try:
            ann = cls(
                item_id=str(d["item_id"]),
                kind=str(d["kind"]),
                annotator=str(d.get("annotator", "")),
                timestamp=int(d["timestamp"]),
                token_index=d.get("token_index"),
                polarity=d.get("polarity"),
                edited_target=d.get("edited_target"),
            )
        except KeyError as e:
            raise CorpusError(f"missing field {e.args[0]}") from None
        ann.validate()
        return ann


@dataclass(frozen=True)
class Corpus:
    records: tuple[ReviewRecord, ...] = ()
    annotations: tuple[AnnotationRecord, ...] = ()

    def __post_init__(self) -> None:
        ids = set()
        origins = set()
        for rec in self.records:
            if rec.id in ids:
                raise CorpusError(f"duplicate record id: {rec.id!r}")
            ids.add(rec.id)
            key = (rec.origin_id, rec.segment_index)
            if key in origins:
                raise CorpusError(f"duplicate (origin_id, segment_index): {key!r}")
            origins.add(key)
        for ann in self.annotations:
            if ann.item_id not in ids:
                raise CorpusError(f"annotation references unknown record id: {ann.item_id!r}")

    def __len__(self) -> int:
        return len(self.records)

    def get(self, record_id: str) -> ReviewRecord:
        for rec in self.records:
            if rec.id == record_id:
                return rec
        raise KeyError(record_id)

    def annotations_for(self, record_id: str) -> list[AnnotationRecord]:
        return [a for a in self.annotations if a.item_id == record_id]

    def with_annotations(self, extra: Iterable[AnnotationRecord]) -> "Corpus":
        return Corpus(self.records, self.annotations + tuple(extra))


def _annotation_path(path: Path) -> Path:
    return path.with_name(path.stem + ".ann.jsonl")


def _iter_jsonl(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                yield lineno, json.loads(line)
            except json.JSONDecodeError as e:
                raise CorpusError(f"{path}:{lineno}: malformed JSON: {e.msg}") from None


TSV_COLUMNS = ("id", "rating", "source", "mt", "reference")


def load_reviews(path: str | Path, format: str = "jsonl") -> Corpus:
    """Load a review corpus from JSONL or TSV, preserving file order.

    For JSONL, a sibling ``<stem>.ann.jsonl`` annotation log is loaded when
    present. TSV requires a header row and maps columns positionally as
    (id, rating, source, mt, reference).
    """
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"corpus file not found: {path}")
    if format == "jsonl":
        records = []
        for lineno, obj in _iter_jsonl(path):
            try:
                records.append(ReviewRecord.from_json(obj))
            except CorpusError as e:
                raise CorpusError(f"{path}:{lineno}: {e}") from None
        annotations: tuple[AnnotationRecord, ...] = ()
        ann_path = _annotation_path(path)
        if ann_path.exists():
            annotations = tuple(load_annotations(ann_path))
        return Corpus(tuple(records), annotations)
    if format == "tsv":
        records = []
        with open(path, encoding="utf-8") as fh:
            header = fh.readline()
            if not header.strip():
                raise CorpusError(f"{path}: TSV requires a header row")
            for lineno, line in enumerate(fh, start=2):
                if not line.strip():
                    continue
                cols = line.rstrip("\n").split("\t")
                if len(cols) < 3:
                    raise CorpusError(f"{path}:{lineno}: expected >= 3 tab-separated columns")
                cols += [""] * (5 - len(cols))
                rid, rating, source, mt, reference = cols[:5]
                try:
                    records.append(
                        ReviewRecord(
                            id=rid,
                            source_text=source,
                            rating=int(rating),
                            origin_id=rid,
                            segment_index=0,
                            mt_text=mt or None,
                            reference_text=reference or None,
                        )
                    )
                    records[-1].validate()
                except (ValueError, CorpusError) as e:
                    raise CorpusError(f"{path}:{lineno}: {e}") from None
        return Corpus(tuple(records))
    raise CorpusError(f"unknown corpus format: {format!r}")


def load_annotations(path: str | Path) -> list[AnnotationRecord]:
    path = Path(path)
    out = []
    for lineno, obj in _iter_jsonl(path):
        try:
            out.append(AnnotationRecord.from_json(obj))
        except CorpusError as e:
            raise CorpusError(f"{path}:{lineno}: {e}") from None
    return out


def write_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write records as JSONL; annotations, if any, go to the sibling log."""
    path = Path(path)
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rec in corpus.records:
                fh.write(json.dumps(rec.to_json(), ensure_ascii=False) + "\n")
        if corpus.annotations:
            write_annotations(corpus.annotations, _annotation_path(path))
    except OSError as e:
        raise OSError(f"cannot write corpus to {path}: {e}") from e


def write_annotations(annotations: Iterable[AnnotationRecord], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for ann in annotations:
            fh.write(json.dumps(ann.to_json(), ensure_ascii=False) + "\n")


def append_annotation(annotation: AnnotationRecord, path: str | Path) -> None:
    """Append one record to an annotation log (single-writer discipline)."""
    with open(path, "a", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(annotation.to_json(), ensure_ascii=False) + "\n")


def _latest_wins(annotations: Iterable[AnnotationRecord]):
    """Order annotations so that later timestamps (ties: file order) win."""
    return sorted(enumerate(annotations), key=lambda p: (p[1].timestamp, p[0]))


def apply_annotations(corpus: Corpus) -> Corpus:
    """Materialize annotations into a new corpus.

    The latest post_edit per item replaces reference_text; polarity tags are
    fused into the source tokens via the ``__POS``/``__NEG`` suffix format.
    Latest timestamp wins per (item, token_index); re-applying the same
    annotation set to the output is a no-op.
    """
    post_edits: dict[str, str] = {}
    tags: dict[tuple[str, int], str] = {}
    for _, ann in _latest_wins(corpus.annotations):
        if ann.kind == "post_edit":
            post_edits[ann.item_id] = ann.edited_target  # type: ignore[assignment]
        else:
            tags[(ann.item_id, ann.token_index)] = ann.polarity  # type: ignore[index]

    new_records = []
    for rec in corpus.records:
        changed = rec
        item_tags = {idx: pol for (iid, idx), pol in tags.items() if iid == rec.id}
        if item_tags:
            tokens = tokenize(rec.source_text)
            for idx, pol in item_tags.items():
                if idx >= len(tokens):
                    raise CorpusError(
                        f"polarity_tag token_index {idx} out of bounds for item {rec.id!r}"
                    )
                base = tokens[idx]
                for suffix in TAG_SUFFIXES:
                    if base.endswith(suffix):
                        base = base[: -len(suffix)]
                tokens[idx] = f"{base}__{pol}"
            changed = replace(changed, source_text=join_tokens(tokens))
        if rec.id in post_edits:
            changed = replace(changed, reference_text=post_edits[rec.id])
        new_records.append(changed)
    return Corpus(tuple(new_records), corpus.annotations)
