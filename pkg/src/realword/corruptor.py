"""Seeded real-word error injection with gold records.

Every token independently gets one chance in rate_denominator of being
considered.  A considered token is replaced only when it is a real-word
vocabulary member with a non-empty distance-1 neighborhood; the replacement
is drawn uniformly from that neighborhood.  Replacements never change a
sentence's token count, so the gold records align positionally with both
the clean and the corrupted corpus.

Randomness comes from one Mersenne Twister stream (stdlib random.Random,
identical across platforms) with a fixed draw discipline: exactly one
random() call per token for the consideration test, plus exactly one more
per actual replacement to pick the variant by index over the
lexicographically sorted neighborhood.  Considered-but-ineligible tokens
consume only the consideration draw.  This makes runs byte-reproducible
from (corpus, vocabulary, config) alone.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .confusion import ConfusionIndex, build_confusion_index
from .validation import check_positive_int, check_same_vocabulary, check_sentences
from .vocab import Vocabulary, build_base_vocab

__all__ = [
    "CorruptionConfig",
    "CorruptionRecord",
    "corrupt_corpus",
    "multi_error_census",
    "save_records",
    "load_records",
    "WordCorruptor",
]


@dataclass(frozen=True)
class CorruptionConfig:
    """rate_denominator r gives each token a 1-in-r consideration chance."""

    rate_denominator: int
    seed: int = 0

    def __post_init__(self):
        check_positive_int("rate_denominator", self.rate_denominator)
        check_positive_int("seed", self.seed, minimum=-(2 ** 63))


@dataclass(frozen=True)
class CorruptionRecord:
    """One planted error: where it happened and what replaced what."""

    sentence_id: int
    position: int
    original: str
    error: str


def corrupt_corpus(
    sentences: Iterable[Sequence[str]],
    v: Vocabulary,
    ci: ConfusionIndex,
    cfg: CorruptionConfig,
) -> tuple[list[list[str]], list[CorruptionRecord]]:
    """Plant real-word errors; returns (corrupted sentences, gold records).

    Raises:
        VocabularyMismatchError: when the confusion index carries a
            fingerprint from a different vocabulary.
    """
    check_same_vocabulary(vocabulary=v.fingerprint(), confusion_index=ci.vocab_fingerprint)
    rng = random.Random(cfg.seed)
    threshold = 1.0 / cfg.rate_denominator
    realwords = v.realword_set

    corrupted: list[list[str]] = []
    records: list[CorruptionRecord] = []
    for sid, sent in enumerate(sentences):
        new = list(sent)
        for pos, token in enumerate(new):
            if rng.random() >= threshold:
                continue
            if token not in realwords:
                continue
            variants = ci.variations(token)
            if not variants:
                continue
            idx = int(rng.random() * len(variants))
            if idx == len(variants):  # guard against float rounding at 1.0
                idx -= 1
            new[pos] = variants[idx]
            records.append(CorruptionRecord(sid, pos, token, variants[idx]))
        corrupted.append(new)
    return corrupted, records


def multi_error_census(
    records: Sequence[CorruptionRecord], sentences: Sequence[Sequence[str]]
) -> dict:
    """Counts of affected sentences: total, with >=1 error, with >=2 errors."""
    per_sentence: dict[int, int] = {}
    for r in records:
        per_sentence[r.sentence_id] = per_sentence.get(r.sentence_id, 0) + 1
    return {
        "sentences_total": len(sentences),
        "sentences_with_errors": len(per_sentence),
        "sentences_with_multiple_errors": sum(1 for n in per_sentence.values() if n >= 2),
    }


def save_records(records: Iterable[CorruptionRecord], path: str | Path) -> None:
    """Write records as "sentence_id<TAB>position<TAB>original<TAB>error" lines."""
    lines = [f"{r.sentence_id}\t{r.position}\t{r.original}\t{r.error}\n" for r in records]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_records(path: str | Path) -> list[CorruptionRecord]:
    records = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields, got {line!r}")
        records.append(CorruptionRecord(int(parts[0]), int(parts[1]), parts[2], parts[3]))
    return records


class WordCorruptor(BaseEstimator, TransformerMixin):
    """Transformer facade: fit on clean text, transform plants seeded errors.

    Parameters:
        vocabulary: optional pre-built Vocabulary; fit builds one from the
            training sentences when None.
        confusion_index: optional prebuilt ConfusionIndex; derived from the
            vocabulary when None.
        rate_denominator: each token's consideration chance is 1 in this.
        seed: RNG seed; identical seeds give identical corruptions.
    """

    def __init__(
        self,
        vocabulary: Vocabulary | None = None,
        confusion_index: ConfusionIndex | None = None,
        rate_denominator: int = 200,
        seed: int = 0,
    ):
        self.vocabulary = vocabulary
        self.confusion_index = confusion_index
        self.rate_denominator = rate_denominator
        self.seed = seed

    def fit(self, X: Iterable[Sequence[str]], y=None) -> "WordCorruptor":
        cfg = CorruptionConfig(self.rate_denominator, self.seed)  # validates params
        vocab = self.vocabulary
        if vocab is None:
            sentences = check_sentences(X)
            vocab = build_base_vocab(t for s in sentences for t in s)
        ci = self.confusion_index
        if ci is None:
            ci = build_confusion_index(vocab)
        check_same_vocabulary(vocabulary=vocab.fingerprint(), confusion_index=ci.vocab_fingerprint)
        self.vocabulary_ = vocab
        self.confusion_index_ = ci
        self.config_ = cfg
        return self

    def corrupt(
        self, X: Iterable[Sequence[str]]
    ) -> tuple[list[list[str]], list[CorruptionRecord]]:
        check_is_fitted(self)
        return corrupt_corpus(check_sentences(X), self.vocabulary_, self.confusion_index_, self.config_)

    def transform(self, X: Iterable[Sequence[str]]) -> list[list[str]]:
        return self.corrupt(X)[0]
