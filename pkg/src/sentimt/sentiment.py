"""Deterministic lexicon-based sentence sentiment scoring.

Produces (positive, neutral, negative) confidence triples that sum to 1,
handles standalone and circumfix dialectal negation, and exposes a pluggable
HTTP client for an external sentiment service.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from typing import Optional

import httpx

from .lexicons import load_seed_verb_stems, split_tag
from .normalize import PUNCTUATION, TokenSequence, tokenize

STANDALONE_NEGATORS = {"مش", "not", "n't", "no", "never"}
DEFAULT_NEGATION_SCOPE = 3


class ScorerError(RuntimeError):
    """External scorer transport or schema failure."""


@dataclass(frozen=True)
class SentimentScore:
    positive: float
    neutral: float
    negative: float

    def __post_init__(self) -> None:
        for v in (self.positive, self.neutral, self.negative):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"sentiment component out of [0,1]: {v}")
        if abs(self.positive + self.neutral + self.negative - 1.0) > 1e-9:
            raise ValueError("sentiment components must sum to 1")

    def to_json(self) -> dict:
        return {"positive": self.positive, "neutral": self.neutral, "negative": self.negative}

    @classmethod
    def from_json(cls, d: dict) -> "SentimentScore":
        return cls(float(d["positive"]), float(d["neutral"]), float(d["negative"]))


@dataclass(frozen=True)
class NegatorSpan:
    negator_index: int
    scope_indices: tuple[int, ...]
    circumfix: bool = False


def _is_content(token: str) -> bool:
    return token not in PUNCTUATION and token.lower() not in STANDALONE_NEGATORS


def detect_negators(tokens: TokenSequence, verb_stems: Optional[set[str]] = None,
                    scope: int = DEFAULT_NEGATION_SCOPE) -> list[NegatorSpan]:
    """Find negators and the token indices they affect.

    A standalone negator scopes over the next up-to-``scope`` content tokens.
    A circumfix token (starts with م, ends with ش, length >= 4, interior is a
    known verb stem) negates itself.
    """
    if verb_stems is None:
        verb_stems = load_seed_verb_stems()
    spans: list[NegatorSpan] = []
    for i, token in enumerate(tokens):
        base, _ = split_tag(token)
        low = base.lower()
        if low in STANDALONE_NEGATORS:
            covered = []
            for j in range(i + 1, len(tokens)):
                if len(covered) == scope:
                    break
                if _is_content(tokens[j]):
                    covered.append(j)
            if covered:
                spans.append(NegatorSpan(i, tuple(covered)))
        elif len(base) >= 4 and base.startswith("م") and base.endswith("ش"):
            if base[1:-1] in verb_stems:
                spans.append(NegatorSpan(i, (i,), circumfix=True))
    return spans


def score_sentence(text: str, lexicon: dict, *, verb_stems: Optional[set[str]] = None,
                   scope: int = DEFAULT_NEGATION_SCOPE) -> SentimentScore:
    """Score a sentence with the built-in lexicon scorer.

    Counts +1/-1 lexicon hits (negated hits flip sign), then distributes mass:
    neutral = 1/(1+total), remainder split between positive and negative in
    proportion to the flipped hit counts. No hits -> fully neutral.
    """
    tokens = tokenize(text)
    # parity of flips per index: double negation is an involution
    flips: dict[int, int] = {}
    for span in detect_negators(tokens, verb_stems=verb_stems, scope=scope):
        for i in span.scope_indices:
            flips[i] = flips.get(i, 0) + 1
    pos = neg = 0
    for i, token in enumerate(tokens):
        base, _ = split_tag(token)
        weight = lexicon.get(base.lower())
        if weight is None:
            continue
        if flips.get(i, 0) % 2:
            weight = -weight
        if weight > 0:
            pos += 1
        else:
            neg += 1
    total = pos + neg
    if total == 0:
        return SentimentScore(0.0, 1.0, 0.0)
    neutral = 1.0 / (1.0 + total)
    evidence = 1.0 - neutral
    return SentimentScore(evidence * pos / total, neutral, evidence * neg / total)


def polarity_scalar(score: SentimentScore, mode: str) -> float:
    """Project a score triple to the scalar used by the sentence-level cost."""
    if mode == "positive_class":
        return score.positive
    if mode == "negative_class":
        return score.negative
    if mode == "signed":
        return score.positive - score.negative
    raise ValueError(f"unknown scalar mode: {mode!r}")


class ExternalScorerClient:
    """HTTP client for a remote sentiment service.

    Endpoint and key come from SENTI_ENDPOINT / SENTI_KEY unless passed
    explicitly. Enforces a max-in-flight limit and per-request timeout; never
    silently falls back to the built-in scorer.
    """

    def __init__(self, endpoint: Optional[str] = None, key: Optional[str] = None,
                 timeout: float = 10.0, max_in_flight: int = 4,
                 transport: Optional[httpx.BaseTransport] = None):
        self.endpoint = endpoint or os.environ.get("SENTI_ENDPOINT")
        self.key = key or os.environ.get("SENTI_KEY")
        if not self.endpoint:
            raise ScorerError("no endpoint configured (set SENTI_ENDPOINT)")
        self._limiter = threading.Semaphore(max_in_flight)
        self._client = httpx.Client(timeout=timeout, transport=transport)

    def close(self) -> None:
        self._client.close()

    def score(self, text: str) -> SentimentScore:
        return external_score(text, self)

    def _post(self, body: dict) -> httpx.Response:
        headers = {}
        if self.key:
            headers["Ocp-Apim-Subscription-Key"] = self.key
        with self._limiter:
            return self._client.post(self.endpoint, json=body, headers=headers)


def external_score(text: str, client: ExternalScorerClient) -> SentimentScore:
    """Fetch a remote score triple and renormalize it to sum to 1.

    Any transport, status, or schema failure raises ScorerError.
    """
    try:
        resp = client._post({"documents": [{"id": "1", "text": text}]})
    except httpx.HTTPError as e:
        raise ScorerError(f"transport failure: {e}") from e
    if resp.status_code // 100 != 2:
        raise ScorerError(f"remote returned status {resp.status_code}")
    try:
        doc = resp.json()["documents"][0]
        triple = (float(doc["positive"]), float(doc["neutral"]), float(doc["negative"]))
    except (KeyError, IndexError, TypeError, ValueError) as e:
        raise ScorerError(f"schema mismatch in remote response: {e}") from e
    if any(v < 0 for v in triple):
        raise ScorerError(f"remote confidences must be non-negative: {triple}")
    total = sum(triple)
    if total <= 0:
        raise ScorerError(f"remote confidences sum to {total}, cannot renormalize")
    return SentimentScore(triple[0] / total, triple[1] / total, triple[2] / total)
