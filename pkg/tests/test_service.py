import pytest
from fastapi.testclient import TestClient

from sentimt.corpus import Corpus, ReviewRecord
from sentimt.service import create_app


def record(i, rating, source, mt, ref=None):
    return ReviewRecord(id=f"r{i}", source_text=source, rating=rating,
                        origin_id=f"r{i}", segment_index=0, mt_text=mt, reference_text=ref)


@pytest.fixture
def corpus():
    return Corpus((
        # contronym flip: flagged wrong_negative, reference also flipped
        record(1, 5, "الروايه رهيبه", "a terrible book", "a terrible book"),
        # negation miss: flagged wrong_positive
        record(2, 1, "معجبنيش الكتاب", "a great book", "a bad book"),
        # idiom: flagged wrong_negative
        record(3, 4, "كتاب خفيف الظل ممتع", "a terrible light-shaded book", "a funny book"),
        # consistent record: never flagged
        record(4, 5, "كتاب جميل", "a great book", "a great book"),
    ))


@pytest.fixture
def client(corpus, tmp_path):
    app = create_app(corpus, annotation_log=tmp_path / "log.ann.jsonl")
    return TestClient(app)


def test_queue_in_corpus_order(client):
    body = client.get("/api/queue").json()
    assert body["total"] == 3
    assert [item["flag"]["item_id"] for item in body["items"]] == ["r1", "r2", "r3"]


def test_queue_category_filter(client):
    body = client.get("/api/queue", params={"category": "Contronym"}).json()
    assert [item["flag"]["item_id"] for item in body["items"]] == ["r1"]
    body = client.get("/api/queue", params={"category": "Negation"}).json()
    assert [item["flag"]["item_id"] for item in body["items"]] == ["r2"]


def test_queue_bogus_category_400(client):
    assert client.get("/api/queue", params={"category": "Bogus"}).status_code == 400


def test_queue_pagination(client):
    body = client.get("/api/queue", params={"page": 2, "page_size": 2}).json()
    assert [item["flag"]["item_id"] for item in body["items"]] == ["r3"]


def test_item_includes_occurrences_and_glosses(client):
    item = client.get("/api/items/r1").json()
    assert item["source_tokens"] == ["الروايه", "رهيبه"]
    occ = item["contronym_occurrences"][0]
    assert occ["token_index"] == 1
    assert occ["lemma"] == "رهيبه"
    assert "great" in occ["positive_glosses"]
    assert "terrible" in occ["negative_glosses"]


def test_unknown_item_404(client):
    assert client.get("/api/items/nope").status_code == 404
    resp = client.post("/api/items/nope/annotations",
                       json={"kind": "post_edit", "edited_target": "x", "annotator": "a"})
    assert resp.status_code == 404


def test_submit_polarity_tag_roundtrip(client):
    resp = client.post("/api/items/r1/annotations", json={
        "kind": "polarity_tag", "token_index": 1, "polarity": "POS", "annotator": "ann1",
    })
    assert resp.status_code == 201
    stored = resp.json()
    assert stored["timestamp"] > 0  # server-assigned
    item = client.get("/api/items/r1").json()
    assert item["current_annotations"][-1]["polarity"] == "POS"


def test_polarity_tag_at_non_contronym_index_422(client):
    resp = client.post("/api/items/r1/annotations", json={
        "kind": "polarity_tag", "token_index": 0, "polarity": "POS", "annotator": "a",
    })
    assert resp.status_code == 422
    assert "not a contronym occurrence" in resp.json()["detail"]


def test_invalid_body_422(client):
    resp = client.post("/api/items/r1/annotations", json={
        "kind": "post_edit", "annotator": "a",
    })
    assert resp.status_code == 422


def test_annotation_log_append_only(client, tmp_path):
    log = tmp_path / "log.ann.jsonl"
    client.post("/api/items/r1/annotations",
                json={"kind": "post_edit", "edited_target": "one", "annotator": "a"})
    first = log.read_text("utf-8")
    client.post("/api/items/r2/annotations",
                json={"kind": "post_edit", "edited_target": "two", "annotator": "a"})
    second = log.read_text("utf-8")
    assert second.startswith(first)
    assert len(second.splitlines()) == 2


def test_server_timestamps_strictly_increase(client):
    stamps = []
    for i in range(3):
        resp = client.post("/api/items/r1/annotations",
                           json={"kind": "post_edit", "edited_target": f"v{i}", "annotator": "a"})
        stamps.append(resp.json()["timestamp"])
    assert stamps == sorted(stamps) and len(set(stamps)) == 3


def test_report_histogram_and_metrics(client):
    body = client.get("/api/report").json()
    assert body["histogram"]["Contronym"]["count"] == 1
    assert body["histogram"]["Negation"]["count"] == 1
    assert "report" in body
    assert 0 <= body["report"]["bleu"] <= 100


def test_report_matches_offline_evaluate(client, corpus):
    from sentimt.detect import LexiconSet
    from sentimt.metrics import evaluate
    from sentimt.sentiment import score_sentence

    lexica = LexiconSet.seed()
    scorer = lambda t: score_sentence(t, lexica.sentiment, verb_stems=lexica.verb_stems)
    offline = evaluate(corpus, lexica.contronyms, scorer).to_json()
    online = client.get("/api/report").json()["report"]
    assert online == offline


def test_corrective_post_edit_decreases_cost(client):
    # r1's reference carries the same flipped contronym gloss as the MT;
    # fixing the reference must increase the measured MT error... whereas
    # fixing a reference that wrongly disagreed with a correct MT decreases
    # the cost. Here we fix r2's reference to match its (actually positive) MT.
    before = client.get("/api/report").json()["report"]
    client.post("/api/items/r2/annotations",
                json={"kind": "post_edit", "edited_target": "a great book", "annotator": "a"})
    after = client.get("/api/report").json()["report"]
    assert after["cost_positive"] < before["cost_positive"]


def test_report_without_references_omits_metrics(tmp_path):
    corpus = Corpus((record(1, 5, "الروايه رهيبه", "a terrible book"),))
    app = create_app(corpus, annotation_log=tmp_path / "l.jsonl")
    body = TestClient(app).get("/api/report").json()
    assert "report" not in body
    assert body["histogram"]


def test_queue_is_read_only(client):
    before = client.get("/api/report").json()
    client.get("/api/queue")
    client.get("/api/items/r1")
    assert client.get("/api/report").json() == before


def test_static_ui_served(tmp_path, corpus):
    static = tmp_path / "ui"
    static.mkdir()
    (static / "index.html").write_text("<html><body>annotator</body></html>", encoding="utf-8")
    app = create_app(corpus, annotation_log=tmp_path / "l.jsonl", static_dir=static)
    resp = TestClient(app).get("/")
    assert resp.status_code == 200
    assert "annotator" in resp.text
