"""HTTP annotation API: serves the flagged-discrepancy queue and accepts
polarity tags and post-edits into an append-only annotation log.

Endpoints: GET /api/queue, GET /api/items/{id},
POST /api/items/{id}/annotations, GET /api/report. Static UI files are served
from a configurable directory.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .corpus import AnnotationRecord, Corpus, CorpusError, append_annotation, apply_annotations, load_annotations
from .detect import DiscrepancyFlag, ErrorCategory, LexiconSet, classify_flags, flag_discrepancies, frequency_report
from .lexicons import find_contronyms
from .metrics import evaluate
from .normalize import normalize_arabic, tokenize
from .sentiment import score_sentence

DEFAULT_PORT = 8077


class AnnotationBody(BaseModel):
    kind: str
    annotator: str = ""
    token_index: Optional[int] = None
    polarity: Optional[str] = None
    edited_target: Optional[str] = None


class AnnotationStore:
    """Append-only, single-writer annotation log with server timestamps."""

    def __init__(self, log_path: Optional[Path] = None):
        self.log_path = log_path
        self._lock = threading.Lock()
        self._records: list[AnnotationRecord] = []
        self._last_ts = 0
        if log_path is not None and log_path.exists():
            self._records = load_annotations(log_path)
            self._last_ts = max((a.timestamp for a in self._records), default=0)

    def append(self, body: AnnotationBody, item_id: str) -> AnnotationRecord:
        with self._lock:
            ts = max(int(time.time() * 1000), self._last_ts + 1)
            record = AnnotationRecord(
                item_id=item_id,
                kind=body.kind,
                annotator=body.annotator,
                timestamp=ts,
                token_index=body.token_index,
                polarity=body.polarity,
                edited_target=body.edited_target,
            )
            record.validate()
            self._records.append(record)
            self._last_ts = ts
            if self.log_path is not None:
                append_annotation(record, self.log_path)
            return record

    def snapshot(self) -> tuple[AnnotationRecord, ...]:
        with self._lock:
            return tuple(self._records)


def _queue_item_json(flag: DiscrepancyFlag, corpus: Corpus, lexica: LexiconSet,
                     annotations: tuple[AnnotationRecord, ...]) -> dict:
    rec = corpus.get(flag.item_id)
    tokens = tokenize(normalize_arabic(rec.source_text))
    occurrences = []
    for idx, lemma in find_contronyms(tokens, lexica.contronyms):
        entry = lexica.contronyms.entries[lemma]
        occurrences.append({
            "token_index": idx,
            "lemma": lemma,
            "positive_glosses": sorted(entry.positive_glosses),
            "negative_glosses": sorted(entry.negative_glosses),
        })
    return {
        "flag": flag.to_json(),
        "source_tokens": tokens,
        "mt_text": rec.mt_text,
        "rating": rec.rating,
        "contronym_occurrences": occurrences,
        "current_annotations": [a.to_json() for a in annotations if a.item_id == flag.item_id],
    }


def create_app(corpus: Corpus, lexica: Optional[LexiconSet] = None,
               annotation_log: Optional[str | Path] = None,
               static_dir: Optional[str | Path] = None,
               scorer=None) -> FastAPI:
    """Build the annotation service over a flagged corpus snapshot."""
    if lexica is None:
        lexica = LexiconSet.seed()
    if scorer is None:
        scorer = lambda text: score_sentence(text, lexica.sentiment, verb_stems=lexica.verb_stems)
    store = AnnotationStore(Path(annotation_log) if annotation_log else None)
    flags = classify_flags(corpus, flag_discrepancies(corpus, scorer), lexica)
    flagged_ids = {f.item_id for f in flags}
    occurrence_index = {
        f.item_id: {
            idx for idx, _ in find_contronyms(
                tokenize(normalize_arabic(corpus.get(f.item_id).source_text)), lexica.contronyms)
        }
        for f in flags
    }

    app = FastAPI(title="sentimt annotation service")

    @app.get("/api/queue")
    def get_queue(category: Optional[str] = None, page: int = 1, page_size: int = 20):
        selected = flags
        if category is not None:
            try:
                wanted = ErrorCategory(category)
            except ValueError:
                raise HTTPException(400, f"unknown category: {category!r}")
            selected = [f for f in flags if f.primary_category is wanted]
        if page < 1 or page_size < 1:
            raise HTTPException(400, "page and page_size must be >= 1")
        start = (page - 1) * page_size
        annotations = store.snapshot()
        return {
            "total": len(selected),
            "page": page,
            "page_size": page_size,
            "items": [
                _queue_item_json(f, corpus, lexica, annotations)
                for f in selected[start : start + page_size]
            ],
        }

    @app.get("/api/items/{item_id}")
    def get_item(item_id: str):
        for f in flags:
            if f.item_id == item_id:
                return _queue_item_json(f, corpus, lexica, store.snapshot())
        raise HTTPException(404, f"no flagged item with id {item_id!r}")

    @app.post("/api/items/{item_id}/annotations", status_code=201)
    def submit_annotation(item_id: str, body: AnnotationBody):
        if item_id not in flagged_ids:
            raise HTTPException(404, f"no flagged item with id {item_id!r}")
        if body.kind == "polarity_tag" and body.token_index not in occurrence_index[item_id]:
            raise HTTPException(422, "index not a contronym occurrence")
        try:
            record = store.append(body, item_id)
        except CorpusError as e:
            raise HTTPException(422, str(e))
        return record.to_json()

    @app.get("/api/report")
    def get_report():
        annotated = apply_annotations(corpus.with_annotations(store.snapshot()))
        evaluable = Corpus(tuple(
            r for r in annotated.records if r.mt_text is not None and r.reference_text is not None
        ))
        payload: dict = {
            "histogram": {
                cat.value: {"count": n, "proportion": p}
                for cat, (n, p) in frequency_report(flags).items()
            }
        }
        if evaluable.records:
            payload["report"] = evaluate(evaluable, lexica.contronyms, scorer).to_json()
        return payload

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(corpus: Corpus, port: int = DEFAULT_PORT, **kwargs) -> None:
    import uvicorn

    uvicorn.run(create_app(corpus, **kwargs), host="127.0.0.1", port=port)
