"""Backoff trigram language model with modified Kneser-Ney discounting.

Training conventions
--------------------
Corpus tokens outside the base vocabulary are mapped to the unknown marker
before anything is counted, so hapax mass funds the unknown-word estimate.
Each sentence is padded with two begin markers and one end marker; the
begin marker is never predicted (it is stored only as a -99 placeholder
carrying backoff weights).

Trigrams keep raw counts.  Lower orders use distinct-predecessor
(continuation) counts, except begin-initial bigrams, which keep raw counts
since nothing can precede a sentence start.  Three discounts per order
(D1, D2, D3+) come from that order's counts-of-counts; when those are too
sparse to estimate (some n_i = 0, or a negative discount results), the
order falls back to a single absolute discount of 0.5 with a warning.

Discounted mass is redistributed Katz-style: a backoff weight per context
makes the conditional distribution over the full alphabet (base vocabulary,
end marker, unknown marker) sum to one exactly.  Leftover unigram mass goes
to zero-count alphabet members (the unknown marker, when every vocabulary
word repeats); with no zero-count members the unigrams are renormalized.

All stored values are log10 (the ARPA convention); -99 marks structural
placeholders.
"""
from __future__ import annotations

import math
import sys
import warnings
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .vocab import (
    BEGIN_MARKER,
    END_MARKER,
    UNK_MARKER,
    EmptyCorpusError,
    Vocabulary,
    build_base_vocab,
)

__all__ = [
    "LOG_FLOOR",
    "ArpaFormatError",
    "TrigramModel",
    "train",
    "logprob_word",
    "logprob_sentence",
    "export_arpa",
    "import_arpa",
    "save_arpa",
    "load_arpa",
    "TrigramLanguageModel",
]

LOG_FLOOR = -99.0


class ArpaFormatError(ValueError):
    """Malformed ARPA text; the message names the offending line."""


@dataclass
class TrigramModel:
    """Trained trigram model: log10 probabilities plus backoff weights.

    Treated as immutable once built; safe for concurrent read-only scoring.
    vocab_fingerprint identifies the vocabulary used in training (None when
    the model was imported from ARPA text, which carries no provenance).
    """

    p1: dict[str, float]
    p2: dict[tuple[str, str], float]
    p3: dict[tuple[str, str, str], float]
    bow1: dict[str, float]
    bow2: dict[tuple[str, str], float]
    vocab_fingerprint: str | None = None
    order: int = field(default=3, init=False)

    def map_token(self, token: str) -> str:
        """Project onto the model alphabet; unseen tokens become the unknown marker."""
        return token if token in self.p1 else UNK_MARKER

    def alphabet(self) -> list[str]:
        """Sorted predictable symbols: stored unigrams minus the begin marker."""
        return sorted(w for w in self.p1 if w != BEGIN_MARKER)

    def logprob_word(self, h: tuple[str, str], w: str) -> float:
        return logprob_word(self, h, w)

    def logprob_sentence(self, s: Sequence[str]) -> float:
        return logprob_sentence(self, s)


def _estimate_discounts(counts: Iterable[int]) -> tuple[float, float, float, bool]:
    """(D1, D2, D3+, fell_back) for one order's count table."""
    n = [0, 0, 0, 0, 0]
    for c in counts:
        if c <= 4:
            n[c] += 1
    n1, n2, n3, n4 = n[1], n[2], n[3], n[4]
    if not (n1 and n2 and n3 and n4):
        return 0.5, 0.5, 0.5, True
    y = n1 / (n1 + 2 * n2)
    d1 = 1 - 2 * y * n2 / n1
    d2 = 2 - 3 * y * n3 / n2
    d3 = 3 - 4 * y * n4 / n3
    if min(d1, d2, d3) < 0:
        return 0.5, 0.5, 0.5, True
    return d1, d2, d3, False


def _discount(c: int, d: tuple[float, float, float]) -> float:
    if c >= 3:
        return d[2]
    return d[0] if c == 1 else d[1]


def train(corpus: Iterable[Sequence[str]], v: Vocabulary) -> TrigramModel:
    """Train the trigram model on tokenized sentences.

    Args:
        corpus: iterable of sentences (lists of token surfaces), produced by
            the same pipeline that built v.
        v: vocabulary whose base_set defines the model alphabet.

    Raises:
        EmptyCorpusError: if corpus holds no sentences.

    Warns:
        UserWarning: when an order's discounts fall back to absolute 0.5.
    """
    base = v.base_set
    B, E, U = BEGIN_MARKER, END_MARKER, UNK_MARKER

    c3: Counter = Counter()
    c2_raw: Counter = Counter()
    n_sentences = 0
    for sent in corpus:
        n_sentences += 1
        mapped = [sys.intern(t) if t in base else U for t in sent]
        padded = [B, B, *mapped, E]
        c3.update(zip(padded, padded[1:], padded[2:]))
        single = padded[1:]
        c2_raw.update(zip(single, single[1:]))
    if n_sentences == 0:
        raise EmptyCorpusError("cannot train a language model on an empty corpus")

    # Continuation counts; begin-initial bigrams keep raw counts.
    c2: Counter = Counter()
    for (_, mid, w) in c3:
        if mid != B:
            c2[(mid, w)] += 1
    for bg, count in c2_raw.items():
        if bg[0] == B:
            c2[bg] = count
    c1: Counter = Counter()
    for (_, w) in c2_raw:
        c1[w] += 1

    d3 = _estimate_discounts(c3.values())
    d2 = _estimate_discounts(c2.values())
    d1 = _estimate_discounts(c1.values())
    for order, disc in ((1, d1), (2, d2), (3, d3)):
        if disc[3]:
            warnings.warn(
                f"order-{order} counts-of-counts too sparse for discount estimation; "
                "falling back to a single absolute discount of 0.5"
            )

    ctx3: Counter = Counter()
    for (a, b, _), count in c3.items():
        ctx3[(a, b)] += count
    ctx2: Counter = Counter()
    for (a, _), count in c2.items():
        ctx2[a] += count
    tot1 = sum(c1.values())

    f3 = {g: (count - _discount(count, d3)) / ctx3[g[:2]] for g, count in c3.items()}
    f2 = {g: (count - _discount(count, d2)) / ctx2[g[0]] for g, count in c2.items()}
    f1 = {w: (count - _discount(count, d1)) / tot1 for w, count in c1.items()}

    # Leftover unigram mass: zero-count alphabet members get it, or the
    # unigrams renormalize when every alphabet member was seen.
    alphabet = set(base) | {E, U}
    leftover = 1.0 - math.fsum(f1.values())
    zerotons = sorted(alphabet - set(f1))
    if zerotons:
        share = leftover / len(zerotons)
        for w in zerotons:
            f1[w] = share
    else:
        scale = 1.0 / (1.0 - leftover)
        f1 = {w: p * scale for w, p in f1.items()}

    bow1 = _context_bows(f2, f1, lambda g: g[0], lambda g: g[1])
    bow2 = _context_bows(f3, f2, lambda g: g[:2], lambda g: g[1:])

    model = TrigramModel(
        p1={w: math.log10(p) for w, p in f1.items()},
        p2={g: math.log10(p) for g, p in f2.items()},
        p3={g: math.log10(p) for g, p in f3.items()},
        bow1={k: math.log10(b) for k, b in bow1.items()},
        bow2={k: math.log10(b) for k, b in bow2.items()},
        vocab_fingerprint=v.fingerprint(),
    )
    model.p1[B] = LOG_FLOOR
    model.p2[(B, B)] = LOG_FLOOR
    return model


def _context_bows(f_hi: dict, f_lo: dict, ctx_of, suffix_of) -> dict:
    """Backoff weight per context: leftover mass over unreached lower mass.

    Every stored higher-order gram's suffix is stored at the lower order
    (guaranteed by the padding/counting scheme), so the denominator can use
    stored lower probabilities directly.  A non-positive denominator means
    the lower distribution is fully covered by stored continuations; the
    row is then rescaled to sum to one and the weight is neutral.
    """
    num: dict = {}
    den: dict = {}
    for g, p in f_hi.items():
        ctx = ctx_of(g)
        num[ctx] = num.get(ctx, 1.0) - p
        den[ctx] = den.get(ctx, 1.0) - f_lo[suffix_of(g)]
    bows = {}
    rescale = [ctx for ctx in num if den[ctx] <= 1e-12]
    for ctx in rescale:
        row_mass = 1.0 - num[ctx]
        for g in f_hi:
            if ctx_of(g) == ctx:
                f_hi[g] /= row_mass
        bows[ctx] = 1.0
    for ctx in num:
        if ctx not in bows:
            bows[ctx] = num[ctx] / den[ctx]
    return bows


def _map(m: TrigramModel, t: str) -> str:
    return t if t in m.p1 else UNK_MARKER


def logprob_word(m: TrigramModel, h: tuple[str, str], w: str) -> float:
    """log10 P(w | h) with Katz-style backoff through the stored orders.

    Total on any inputs: history components and the predicted word are
    mapped to the unknown marker when outside the model alphabet.
    """
    u, v = _map(m, h[0]), _map(m, h[1])
    w = _map(m, w)
    p = m.p3.get((u, v, w))
    if p is not None:
        return p
    b2 = m.bow2.get((u, v), 0.0)
    p = m.p2.get((v, w))
    if p is not None:
        return b2 + p
    return b2 + m.bow1.get(v, 0.0) + m.p1.get(w, LOG_FLOOR)


def logprob_sentence(m: TrigramModel, s: Sequence[str]) -> float:
    """log10 probability of a sentence, begin-padded and end-terminated.

    Raises:
        ValueError: on an empty sentence.
    """
    if not s:
        raise ValueError("cannot score an empty sentence")
    u, v = BEGIN_MARKER, BEGIN_MARKER
    total = 0.0
    for t in s:
        t = _map(m, t)
        total += logprob_word(m, (u, v), t)
        u, v = v, t
    total += logprob_word(m, (u, v), END_MARKER)
    return total


def export_arpa(m: TrigramModel) -> str:
    """Serialize to ARPA text: canonical ordering, fixed-point formatting.

    Orders below the highest always include the backoff column (0 for
    non-context grams).  The formatting is stable under a parse/re-export
    round trip, so a second export is byte-identical.
    """
    out = ["\\data\\"]
    out.append(f"ngram 1={len(m.p1)}")
    out.append(f"ngram 2={len(m.p2)}")
    out.append(f"ngram 3={len(m.p3)}")
    out.append("")
    out.append("\\1-grams:")
    for w in sorted(m.p1):
        out.append(f"{m.p1[w]:.6f}\t{w}\t{m.bow1.get(w, 0.0):.6f}")
    out.append("")
    out.append("\\2-grams:")
    for g in sorted(m.p2):
        out.append(f"{m.p2[g]:.6f}\t{g[0]} {g[1]}\t{m.bow2.get(g, 0.0):.6f}")
    out.append("")
    out.append("\\3-grams:")
    for g in sorted(m.p3):
        out.append(f"{m.p3[g]:.6f}\t{g[0]} {g[1]} {g[2]}")
    out.append("")
    out.append("\\end\\")
    return "\n".join(out) + "\n"


def import_arpa(text: str) -> TrigramModel:
    """Parse ARPA text into a model.

    Raises:
        ArpaFormatError: on malformed headers, entries, or count
            mismatches; messages carry 1-based line numbers.
    """
    lines = text.splitlines()
    i = 0

    def skip_blank():
        nonlocal i
        while i < len(lines) and not lines[i].strip():
            i += 1

    skip_blank()
    if i >= len(lines) or lines[i].strip() != "\\data\\":
        raise ArpaFormatError(f"line {i + 1}: expected \\data\\ header")
    i += 1

    declared: dict[int, int] = {}
    while i < len(lines) and lines[i].strip():
        line = lines[i].strip()
        if not line.startswith("ngram "):
            raise ArpaFormatError(f"line {i + 1}: expected 'ngram N=count', got {line!r}")
        try:
            order_s, count_s = line[len("ngram ") :].split("=")
            declared[int(order_s)] = int(count_s)
        except ValueError:
            raise ArpaFormatError(f"line {i + 1}: malformed ngram declaration {line!r}") from None
        i += 1
    if sorted(declared) != [1, 2, 3]:
        raise ArpaFormatError(f"line {i + 1}: expected declarations for orders 1..3, got {sorted(declared)}")

    p1: dict = {}
    p2: dict = {}
    p3: dict = {}
    bow1: dict = {}
    bow2: dict = {}
    tables = {1: (p1, bow1), 2: (p2, bow2), 3: (p3, None)}

    for order in (1, 2, 3):
        skip_blank()
        header = f"\\{order}-grams:"
        if i >= len(lines) or lines[i].strip() != header:
            got = lines[i].strip() if i < len(lines) else "end of file"
            raise ArpaFormatError(f"line {i + 1}: expected {header!r}, got {got!r}")
        header_line = i + 1
        i += 1
        probs, bows = tables[order]
        while i < len(lines) and lines[i].strip() and not lines[i].startswith("\\"):
            fields = lines[i].split("\t")
            if len(fields) not in (2, 3) or (order == 3 and len(fields) == 3):
                raise ArpaFormatError(f"line {i + 1}: malformed {order}-gram entry")
            try:
                logp = float(fields[0])
                bow = float(fields[2]) if len(fields) == 3 else None
            except ValueError:
                raise ArpaFormatError(f"line {i + 1}: non-numeric field") from None
            if logp > 0:
                raise ArpaFormatError(f"line {i + 1}: positive log probability {fields[0]}")
            gram = tuple(fields[1].split(" "))
            if len(gram) != order or not all(gram):
                raise ArpaFormatError(f"line {i + 1}: expected a {order}-token gram, got {fields[1]!r}")
            key = gram[0] if order == 1 else gram
            if key in probs:
                raise ArpaFormatError(f"line {i + 1}: duplicate {order}-gram {fields[1]!r}")
            probs[key] = logp
            if bow is not None and bows is not None:
                bows[key] = bow
            i += 1
        if len(probs) != declared[order]:
            raise ArpaFormatError(
                f"line {header_line}: ngram {order} count mismatch: "
                f"declared {declared[order]}, found {len(probs)}"
            )

    skip_blank()
    if i >= len(lines) or lines[i].strip() != "\\end\\":
        raise ArpaFormatError(f"line {i + 1}: expected \\end\\ marker")
    return TrigramModel(p1=p1, p2=p2, p3=p3, bow1=bow1, bow2=bow2, vocab_fingerprint=None)


def save_arpa(m: TrigramModel, path: str | Path) -> None:
    Path(path).write_text(export_arpa(m), encoding="utf-8")


def load_arpa(path: str | Path) -> TrigramModel:
    return import_arpa(Path(path).read_text(encoding="utf-8"))


class TrigramLanguageModel(BaseEstimator):
    """Estimator facade over the trigram model.

    Parameters:
        vocabulary: optional pre-built Vocabulary.  When None, fit builds
            the base vocabulary from the training sentences themselves.

    Fitted attributes:
        vocab_: the Vocabulary used.
        model_: the trained TrigramModel.
    """

    def __init__(self, vocabulary: Vocabulary | None = None):
        self.vocabulary = vocabulary

    def fit(self, X: Iterable[Sequence[str]], y=None) -> "TrigramLanguageModel":
        sentences = [list(s) for s in X]
        vocab = self.vocabulary
        if vocab is None:
            vocab = build_base_vocab(t for s in sentences for t in s)
        self.vocab_ = vocab
        self.model_ = train(sentences, vocab)
        return self

    def logprob_word(self, h: tuple[str, str], w: str) -> float:
        check_is_fitted(self)
        return logprob_word(self.model_, h, w)

    def logprob_sentence(self, s: Sequence[str]) -> float:
        check_is_fitted(self)
        return logprob_sentence(self.model_, s)

    def score(self, X: Iterable[Sequence[str]], y=None) -> float:
        """Mean log10 probability per token (end markers included)."""
        check_is_fitted(self)
        total = 0.0
        n = 0
        for s in X:
            total += logprob_sentence(self.model_, s)
            n += len(s) + 1
        if n == 0:
            raise EmptyCorpusError("cannot score an empty corpus")
        return total / n
