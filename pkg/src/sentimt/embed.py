"""CBOW word-embedding trainer with hierarchical softmax.

Desk-scale, single-threaded, and bit-reproducible for a fixed seed. Its job
here is to realize dual-polarity vectors: tagged forms like ``w__POS`` and
``w__NEG`` are independent vocabulary items with independent vectors.
"""

from __future__ import annotations

import heapq
import math
import struct
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

BINARY_MAGIC = b"SMTEMB1\n"
LR_FLOOR_DIVISOR = 10_000.0


class EmbedError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    dimension: int = 100
    window: int = 5
    min_count: int = 2
    epochs: int = 5
    initial_learning_rate: float = 0.025
    seed: int = 1

    def __post_init__(self) -> None:
        for name in ("dimension", "window", "min_count"):
            if getattr(self, name) < 1:
                raise EmbedError(f"{name} must be a positive integer")
        # epochs=0 is allowed so initialization can be inspected untouched
        if self.epochs < 0:
            raise EmbedError("epochs must be >= 0")
        if self.initial_learning_rate <= 0:
            raise EmbedError("initial_learning_rate must be positive")


@dataclass(frozen=True)
class HuffmanCode:
    bits: tuple[int, ...]   # 0 = first-merged child, 1 = second
    nodes: tuple[int, ...]  # inner-node indices along the root-to-leaf path


def build_huffman(frequencies: Sequence[int], tokens: Sequence[str]) -> list[HuffmanCode]:
    """Build prefix-free Huffman codes over token frequencies.

    Deterministic: frequency ties are broken by lexicographically lower token
    first, then by node creation order. A single-token vocabulary gets an
    empty code (probability 1, no inner nodes).
    """
    n = len(frequencies)
    if n == 0:
        raise EmbedError("cannot build a Huffman tree over an empty vocabulary")
    if n == 1:
        return [HuffmanCode((), ())]
    # heap entries: (freq, kind, tiebreak, node_id); leaves sort before
    # internal nodes at equal frequency.
    heap: list[tuple[int, int, object, int]] = [
        (frequencies[i], 0, tokens[i], i) for i in range(n)
    ]
    heapq.heapify(heap)
    children: dict[int, tuple[int, int]] = {}
    next_id = n
    while len(heap) > 1:
        f1, _, _, a = heapq.heappop(heap)
        f2, _, _, b = heapq.heappop(heap)
        children[next_id] = (a, b)
        heapq.heappush(heap, (f1 + f2, 1, next_id, next_id))
        next_id += 1
    root = heap[0][3]
    codes: list[HuffmanCode | None] = [None] * n
    stack = [(root, (), ())]
    while stack:
        node, bits, path = stack.pop()
        if node < n:
            codes[node] = HuffmanCode(bits, path)
        else:
            inner = node - n
            first, second = children[node]
            stack.append((first, bits + (0,), path + (inner,)))
            stack.append((second, bits + (1,), path + (inner,)))
    return codes  # type: ignore[return-value]


class EmbeddingModel:
    """Finished (or in-training) embedding model.

    Immutable after training; queries are pure. ``input_vectors`` holds one
    row per vocabulary token, ``node_vectors`` one row per inner Huffman node.
    """

    def __init__(self, vocab: dict[str, int], counts: list[int], codes: list[HuffmanCode],
                 input_vectors: np.ndarray, node_vectors: np.ndarray):
        self.vocab = vocab
        self.tokens = [t for t, _ in sorted(vocab.items(), key=lambda p: p[1])]
        self.counts = counts
        self.codes = codes
        self.input_vectors = input_vectors
        self.node_vectors = node_vectors

    @property
    def dimension(self) -> int:
        return self.input_vectors.shape[1]

    def vector(self, token: str) -> np.ndarray:
        if token not in self.vocab:
            raise KeyError(f"unknown token: {token!r}")
        return self.input_vectors[self.vocab[token]]


def build_vocab(sentences: Iterable[Sequence[str]], min_count: int = 2
                ) -> tuple[dict[str, int], list[int], list[HuffmanCode]]:
    """Count tokens, drop those below min_count, and build the Huffman tree.

    Vocabulary order is (descending frequency, ascending token), so indices
    are deterministic.
    """
    freq = Counter()
    for sent in sentences:
        freq.update(sent)
    kept = sorted((t for t, c in freq.items() if c >= min_count),
                  key=lambda t: (-freq[t], t))
    if not kept:
        raise EmbedError(f"no token reaches min_count={min_count}")
    vocab = {t: i for i, t in enumerate(kept)}
    counts = [freq[t] for t in kept]
    codes = build_huffman(counts, kept)
    return vocab, counts, codes


def sigmoid(x: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-x))


def path_log_likelihood(model: EmbeddingModel, h: np.ndarray, target_id: int) -> float:
    """Log-probability of reaching ``target_id``'s leaf from context mean h."""
    code = model.codes[target_id]
    if not code.nodes:
        return 0.0
    z = model.node_vectors[list(code.nodes)] @ h
    signs = 1.0 - 2.0 * np.asarray(code.bits, dtype=float)
    return float(np.sum(np.log(sigmoid(signs * z))))


def leaf_probabilities(model: EmbeddingModel, h: np.ndarray) -> np.ndarray:
    """Probability of every vocabulary leaf given context mean h (sums to 1)."""
    return np.array([math.exp(path_log_likelihood(model, h, i)) for i in range(len(model.vocab))])


def train_pair(model: EmbeddingModel, context_ids: Sequence[int], target_id: int, lr: float) -> None:
    """One CBOW gradient-ascent step on a single (context, target) sample."""
    code = model.codes[target_id]
    if not code.nodes:
        return
    ctx = list(context_ids)
    h = model.input_vectors[ctx].mean(axis=0)
    nodes = list(code.nodes)
    z = model.node_vectors[nodes] @ h
    f = sigmoid(z)
    g = lr * ((1.0 - np.asarray(code.bits, dtype=float)) - f)
    neu1e = g @ model.node_vectors[nodes]
    model.node_vectors[nodes] += np.outer(g, h)
    model.input_vectors[ctx] += neu1e / len(ctx)


def train(sentences: list[Sequence[str]], config: TrainConfig = TrainConfig()) -> EmbeddingModel:
    """Train CBOW embeddings with hierarchical softmax.

    Context is the mean of input vectors within ``window`` tokens on each
    side (fixed window, no subsampling, single-threaded: bit-reproducible for
    a fixed seed). Learning rate decays linearly from the initial value to
    initial/10000 over all training examples.
    """
    vocab, counts, codes = build_vocab(sentences, config.min_count)
    rng = np.random.default_rng(config.seed)
    d = config.dimension
    input_vectors = (rng.random((len(vocab), d)) - 0.5) / d
    node_vectors = np.zeros((max(len(vocab) - 1, 0), d))
    model = EmbeddingModel(vocab, counts, codes, input_vectors, node_vectors)

    encoded = [[vocab[t] for t in sent if t in vocab] for sent in sentences]
    positions_per_epoch = sum(len(s) for s in encoded)
    total = max(config.epochs * positions_per_epoch, 1)
    lr0 = config.initial_learning_rate
    lr_floor = lr0 / LR_FLOOR_DIVISOR
    processed = 0
    for _ in range(config.epochs):
        for sent in encoded:
            for t, target in enumerate(sent):
                lr = max(lr0 * (1.0 - processed / total), lr_floor)
                processed += 1
                lo = max(0, t - config.window)
                ctx = sent[lo:t] + sent[t + 1 : t + 1 + config.window]
                if ctx:
                    train_pair(model, ctx, target, lr)
    return model


def gradient_check(config: TrainConfig, context_ids: Sequence[int], target_id: int,
                   vocab_size: int = 8, h_step: float = 1e-5) -> float:
    """Max relative error between analytic and central-difference gradients.

    Checks every parameter touched by one (context, target) sample of the
    hierarchical-softmax log-likelihood. Use small dimensions (<= 10).
    """
    rng = np.random.default_rng(config.seed)
    tokens = [f"t{i}" for i in range(vocab_size)]
    counts = list(rng.integers(1, 20, size=vocab_size))
    codes = build_huffman(counts, tokens)
    vocab = {t: i for i, t in enumerate(tokens)}
    model = EmbeddingModel(
        vocab, counts, codes,
        rng.standard_normal((vocab_size, config.dimension)),
        rng.standard_normal((vocab_size - 1, config.dimension)),
    )
    ctx = list(context_ids)
    code = model.codes[target_id]
    nodes = list(code.nodes)

    def loglik() -> float:
        h = model.input_vectors[ctx].mean(axis=0)
        return path_log_likelihood(model, h, target_id)

    # analytic gradients
    h = model.input_vectors[ctx].mean(axis=0)
    z = model.node_vectors[nodes] @ h
    residual = (1.0 - np.asarray(code.bits, dtype=float)) - sigmoid(z)
    grad_nodes = np.outer(residual, h)
    grad_h = residual @ model.node_vectors[nodes]
    grad_ctx = {c: grad_h * (ctx.count(c) / len(ctx)) for c in set(ctx)}

    max_err = 0.0

    def rel_err(analytic: float, numeric: float) -> float:
        return abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)

    for row, node in enumerate(nodes):
        for j in range(config.dimension):
            orig = model.node_vectors[node, j]
            model.node_vectors[node, j] = orig + h_step
            up = loglik()
            model.node_vectors[node, j] = orig - h_step
            down = loglik()
            model.node_vectors[node, j] = orig
            max_err = max(max_err, rel_err(grad_nodes[row, j], (up - down) / (2 * h_step)))
    for c in set(ctx):
        for j in range(config.dimension):
            orig = model.input_vectors[c, j]
            model.input_vectors[c, j] = orig + h_step
            up = loglik()
            model.input_vectors[c, j] = orig - h_step
            down = loglik()
            model.input_vectors[c, j] = orig
            max_err = max(max_err, rel_err(grad_ctx[c][j], (up - down) / (2 * h_step)))
    return max_err


def cosine(model: EmbeddingModel, token_a: str, token_b: str) -> float:
    va = model.vector(token_a)
    vb = model.vector(token_b)
    na = np.linalg.norm(va)
    nb = np.linalg.norm(vb)
    if na == 0 or nb == 0:
        raise EmbedError("cosine undefined for a zero vector")
    return float(va @ vb / (na * nb))


def save_binary(model: EmbeddingModel, path: str | Path) -> None:
    """Binary layout: magic, uint32 |V|, uint32 d, vocabulary table of
    (uint16 byte length, UTF-8 token, uint64 count), then the input and inner
    node matrices as little-endian float32.
    """
    with open(path, "wb") as fh:
        fh.write(BINARY_MAGIC)
        fh.write(struct.pack("<II", len(model.vocab), model.dimension))
        for token, count in zip(model.tokens, model.counts):
            raw = token.encode("utf-8")
            fh.write(struct.pack("<H", len(raw)))
            fh.write(raw)
            fh.write(struct.pack("<Q", count))
        fh.write(model.input_vectors.astype("<f4").tobytes())
        fh.write(model.node_vectors.astype("<f4").tobytes())


def load_binary(path: str | Path) -> EmbeddingModel:
    with open(path, "rb") as fh:
        if fh.read(len(BINARY_MAGIC)) != BINARY_MAGIC:
            raise EmbedError(f"{path}: not an embedding model file")
        v, d = struct.unpack("<II", fh.read(8))
        tokens, counts = [], []
        for _ in range(v):
            (n,) = struct.unpack("<H", fh.read(2))
            tokens.append(fh.read(n).decode("utf-8"))
            (c,) = struct.unpack("<Q", fh.read(8))
            counts.append(c)
        input_vectors = np.frombuffer(fh.read(v * d * 4), dtype="<f4").reshape(v, d).astype(float)
        inner = max(v - 1, 0)
        node_vectors = np.frombuffer(fh.read(inner * d * 4), dtype="<f4").reshape(inner, d).astype(float)
    vocab = {t: i for i, t in enumerate(tokens)}
    codes = build_huffman(counts, tokens)
    return EmbeddingModel(vocab, counts, codes, input_vectors, node_vectors)


def save_text(model: EmbeddingModel, path: str | Path) -> None:
    """One "token v1 v2 ... vd" line per token, with a "|V| d" header."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(model.vocab)} {model.dimension}\n")
        for token in model.tokens:
            vec = " ".join(f"{x:.6g}" for x in model.input_vectors[model.vocab[token]])
            fh.write(f"{token} {vec}\n")
