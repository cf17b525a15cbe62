"""sentimt: sentiment-transfer error analysis and evaluation for Arabic-English
machine translation of user-generated content.

Subpackages:
  corpus    - review/annotation data model and JSONL/TSV persistence
  normalize - Arabic orthographic normalization, tokenization, splitting
  lexicons  - contronym/phrase/sentiment lexica and polarity tagging
  sentiment - deterministic lexicon scorer, negation, external-scorer client
  detect    - discrepancy extraction and error typology classification
  metrics   - corpus BLEU, word-level polarity P/R/F1, sentiment cost
  embed     - CBOW + hierarchical-softmax embedding trainer
  cli       - pipeline command-line interface
  service   - HTTP annotation API
"""

from .corpus import AnnotationRecord, Corpus, ReviewRecord, apply_annotations, load_reviews, write_corpus
from .detect import DiscrepancyFlag, ErrorCategory, LexiconSet, classify_error, flag_discrepancies, frequency_report
from .embed import EmbeddingModel, TrainConfig, train
from .lexicons import ContronymEntry, PhraseEntry, PolarityTag, find_contronyms, load_lexicon, match_phrases, tag, untag
from .metrics import EvalReport, corpus_bleu, evaluate, sentiment_cost, word_polarity_prf
from .normalize import normalize_arabic, split_segments, strip_elongation, tokenize
from .sentiment import SentimentScore, detect_negators, external_score, polarity_scalar, score_sentence

__version__ = "0.1.0"

__all__ = [
    "AnnotationRecord", "Corpus", "ReviewRecord", "apply_annotations", "load_reviews", "write_corpus",
    "DiscrepancyFlag", "ErrorCategory", "LexiconSet", "classify_error", "flag_discrepancies", "frequency_report",
    "EmbeddingModel", "TrainConfig", "train",
    "ContronymEntry", "PhraseEntry", "PolarityTag", "find_contronyms", "load_lexicon", "match_phrases", "tag", "untag",
    "EvalReport", "corpus_bleu", "evaluate", "sentiment_cost", "word_polarity_prf",
    "normalize_arabic", "split_segments", "strip_elongation", "tokenize",
    "SentimentScore", "detect_negators", "external_score", "polarity_scalar", "score_sentence",
    "__version__",
]
