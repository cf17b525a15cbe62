import json

import pytest

from sentimt.corpus import (
    AnnotationRecord,
    Corpus,
    CorpusError,
    ReviewRecord,
    apply_annotations,
    load_reviews,
    write_corpus,
)


def make_record(i, **kw):
    defaults = dict(
        id=f"r{i}",
        source_text="كتاب جميل",
        rating=5,
        origin_id=f"r{i}",
        segment_index=0,
    )
    defaults.update(kw)
    return ReviewRecord(**defaults)


def test_load_single_jsonl_record(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text(
        json.dumps({"id": "r1", "source_text": "كتاب", "rating": 5,
                    "origin_id": "r1", "segment_index": 0}, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    corpus = load_reviews(path)
    assert len(corpus) == 1
    assert corpus.records[0].id == "r1"
    assert corpus.records[0].rating == 5


def test_rating_out_of_range_names_line(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"r1","source_text":"x","rating":7,"origin_id":"r1"}\n', encoding="utf-8")
    with pytest.raises(CorpusError, match=r"c\.jsonl:1.*rating out of range"):
        load_reviews(path)


def test_empty_file_gives_empty_corpus(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text("", encoding="utf-8")
    assert len(load_reviews(path)) == 0


def test_malformed_line_reports_line_number(tmp_path):
    path = tmp_path / "c.jsonl"
    path.write_text('{"id":"r1","source_text":"x","rating":5,"origin_id":"r1"}\n{oops\n', encoding="utf-8")
    with pytest.raises(CorpusError, match=r":2: malformed JSON"):
        load_reviews(path)


def test_duplicate_id_rejected(tmp_path):
    line = '{"id":"r1","source_text":"x","rating":5,"origin_id":"r1","segment_index":%d}\n'
    path = tmp_path / "c.jsonl"
    path.write_text(line % 0 + line % 1, encoding="utf-8")
    with pytest.raises(CorpusError, match="duplicate record id: 'r1'"):
        load_reviews(path)


def test_roundtrip_identity(tmp_path):
    corpus = Corpus(tuple(make_record(i, mt_text=f"book {i}", rating=i % 5 + 1,
                                      source_text=f"كتاب {i}") for i in range(3)))
    path = tmp_path / "out.jsonl"
    write_corpus(corpus, path)
    assert load_reviews(path) == corpus


def test_roundtrip_preserves_annotations(tmp_path):
    ann = AnnotationRecord(item_id="r0", kind="post_edit", annotator="a",
                           timestamp=10, edited_target="great book")
    corpus = Corpus((make_record(0),), (ann,))
    path = tmp_path / "out.jsonl"
    write_corpus(corpus, path)
    loaded = load_reviews(path)
    assert loaded.annotations == (ann,)
    assert loaded == corpus


def test_unwritable_path_raises_oserror(tmp_path):
    corpus = Corpus((make_record(0),))
    with pytest.raises(OSError):
        write_corpus(corpus, tmp_path / "no" / "such" / "dir" / "c.jsonl")


def test_tsv_ingestion(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("id\trating\tsource\tmt\treference\n"
                    "r1\t5\tكتاب رهيبه\ta terrible book\ta great book\n",
                    encoding="utf-8")
    corpus = load_reviews(path, format="tsv")
    assert corpus.records[0].mt_text == "a terrible book"
    assert corpus.records[0].reference_text == "a great book"
    assert corpus.records[0].origin_id == "r1"


def test_annotation_kind_fields_enforced():
    with pytest.raises(CorpusError, match="token_index"):
        AnnotationRecord(item_id="r1", kind="polarity_tag", annotator="a",
                         timestamp=1, polarity="POS").validate()
    with pytest.raises(CorpusError, match="edited_target"):
        AnnotationRecord(item_id="r1", kind="post_edit", annotator="a", timestamp=1).validate()
    with pytest.raises(CorpusError, match="timestamp"):
        AnnotationRecord(item_id="r1", kind="post_edit", annotator="a",
                         timestamp=0, edited_target="x").validate()


def test_annotation_must_resolve_to_record():
    ann = AnnotationRecord(item_id="nope", kind="post_edit", annotator="a",
                           timestamp=1, edited_target="x")
    with pytest.raises(CorpusError, match="unknown record id"):
        Corpus((make_record(0),), (ann,))


def test_post_edit_replaces_reference():
    ann = AnnotationRecord(item_id="r0", kind="post_edit", annotator="a",
                           timestamp=10, edited_target="great book")
    corpus = Corpus((make_record(0),), (ann,))
    assert apply_annotations(corpus).records[0].reference_text == "great book"
    # original untouched
    assert corpus.records[0].reference_text is None


def test_latest_post_edit_wins():
    anns = (
        AnnotationRecord(item_id="r0", kind="post_edit", annotator="a", timestamp=10, edited_target="old"),
        AnnotationRecord(item_id="r0", kind="post_edit", annotator="b", timestamp=20, edited_target="new"),
    )
    corpus = Corpus((make_record(0),), anns)
    assert apply_annotations(corpus).records[0].reference_text == "new"


def test_post_edit_timestamp_tie_broken_by_file_order():
    anns = (
        AnnotationRecord(item_id="r0", kind="post_edit", annotator="a", timestamp=10, edited_target="first"),
        AnnotationRecord(item_id="r0", kind="post_edit", annotator="b", timestamp=10, edited_target="second"),
    )
    corpus = Corpus((make_record(0),), anns)
    assert apply_annotations(corpus).records[0].reference_text == "second"


def test_polarity_tag_materialized_into_source():
    ann = AnnotationRecord(item_id="r0", kind="polarity_tag", annotator="a",
                           timestamp=1, token_index=1, polarity="POS")
    corpus = Corpus((make_record(0, source_text="كتاب رهيبه"),), (ann,))
    assert apply_annotations(corpus).records[0].source_text == "كتاب رهيبه__POS"


def test_polarity_tag_out_of_bounds():
    ann = AnnotationRecord(item_id="r0", kind="polarity_tag", annotator="a",
                           timestamp=1, token_index=9, polarity="POS")
    corpus = Corpus((make_record(0, source_text="كتاب رهيبه"),), (ann,))
    with pytest.raises(CorpusError, match="token_index 9 out of bounds for item 'r0'"):
        apply_annotations(corpus)


def test_apply_annotations_idempotent():
    anns = (
        AnnotationRecord(item_id="r0", kind="polarity_tag", annotator="a",
                         timestamp=1, token_index=1, polarity="NEG"),
        AnnotationRecord(item_id="r0", kind="post_edit", annotator="a",
                         timestamp=2, edited_target="fixed"),
    )
    corpus = Corpus((make_record(0, source_text="كتاب رهيبه"),), anns)
    once = apply_annotations(corpus)
    assert apply_annotations(once) == once
