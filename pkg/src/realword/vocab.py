"""Vocabulary construction: base set, real-word subset, and type statistics.

The base vocabulary is every token seen more than once in training.  Tokens
seen exactly once (hapax legomena) are deliberately left out; their
probability mass funds the unknown-word estimate during language model
training.  The real-word subset restricts the base set to tokens that could
plausibly host a real-word spelling error: at least one letter, and nothing
besides letters except apostrophes or periods.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from hashlib import blake2s
from pathlib import Path
from typing import Iterable, Mapping

__all__ = [
    "BEGIN_MARKER",
    "END_MARKER",
    "UNK_MARKER",
    "RESERVED_TOKENS",
    "EmptyCorpusError",
    "Vocabulary",
    "is_real_word",
    "build_base_vocab",
    "derive_realword_vocab",
    "vocab_stats",
    "save_vocab",
    "load_vocab",
]

BEGIN_MARKER = "<s>"
END_MARKER = "</s>"
UNK_MARKER = "<unk>"

# Structural symbols may never enter either vocabulary, even if the raw
# corpus happens to contain them literally.
RESERVED_TOKENS = frozenset({BEGIN_MARKER, END_MARKER, UNK_MARKER})

_REALWORD_EXTRA = frozenset({"'", "."})


class EmptyCorpusError(ValueError):
    """Raised when a corpus holds no tokens at all."""


def is_real_word(token: str) -> bool:
    """Whether a token can host (or be) a real-word spelling error.

    Requires at least one Unicode-alphabetic character, and every
    non-alphabetic character to be an apostrophe or a period.  Hyphenated
    forms like "x-ray" are excluded by this rule.

    >>> [is_real_word(t) for t in ("cat", "'s", "U.S.", "<d4>", "!", "x-ray")]
    [True, True, True, False, False, False]
    """
    has_alpha = False
    for ch in token:
        if ch.isalpha():
            has_alpha = True
        elif ch not in _REALWORD_EXTRA:
            return False
    return has_alpha


@dataclass(frozen=True)
class Vocabulary:
    """Immutable token statistics for one training corpus.

    Attributes:
        counts: exact occurrence count per distinct token.
        base_set: tokens with count >= 2, reserved symbols excluded.
        realword_set: members of base_set passing is_real_word.
        total_tokens: sum of all counts.
        hapax_count: number of tokens occurring exactly once.
    """

    counts: Mapping[str, int]
    base_set: frozenset[str]
    realword_set: frozenset[str]
    total_tokens: int
    hapax_count: int

    def fingerprint(self) -> str:
        """Stable hex digest identifying the exact count table.

        Downstream artifacts (trained models, confusion indexes) carry this
        value so that mismatched pairings are caught at configuration time.
        """
        h = blake2s()
        for token in sorted(self.counts):
            h.update(f"{token}\t{self.counts[token]}\n".encode("utf-8"))
        return h.hexdigest()

    def map_token(self, token: str) -> str:
        """Project a token onto the model alphabet; unknowns collapse to one symbol."""
        return token if token in self.base_set else UNK_MARKER


def _from_counts(counts: Counter) -> Vocabulary:
    base = frozenset(t for t, n in counts.items() if n >= 2) - RESERVED_TOKENS
    real = frozenset(t for t in base if is_real_word(t))
    hapax = sum(1 for n in counts.values() if n == 1)
    return Vocabulary(dict(counts), base, real, sum(counts.values()), hapax)


def build_base_vocab(corpus: Iterable[str]) -> Vocabulary:
    """Count a token stream and build the vocabulary.

    Args:
        corpus: iterable of token surfaces (already tokenized and
            digit-regularized; sentence structure is irrelevant here).

    Raises:
        EmptyCorpusError: if the stream yields no tokens.
    """
    counts = Counter(corpus)
    if not counts:
        raise EmptyCorpusError("cannot build a vocabulary from an empty corpus")
    return _from_counts(counts)


def derive_realword_vocab(v: Vocabulary) -> frozenset[str]:
    """Real-word subset of the base vocabulary (see is_real_word)."""
    return frozenset(t for t in v.base_set if is_real_word(t))


def vocab_stats(v: Vocabulary) -> dict:
    """Type/token statistics: {type_count, hapax_count, hapax_pct, token_count}."""
    types = len(v.counts)
    return {
        "type_count": types,
        "hapax_count": v.hapax_count,
        "hapax_pct": v.hapax_count / types if types else 0.0,
        "token_count": v.total_tokens,
    }


def save_vocab(v: Vocabulary, path: str | Path) -> None:
    """Write the count table as sorted "token<TAB>count" lines."""
    lines = [f"{t}\t{v.counts[t]}\n" for t in sorted(v.counts)]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_vocab(path: str | Path) -> Vocabulary:
    """Read a count table written by save_vocab; derived sets are recomputed."""
    counts: Counter = Counter()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'token<TAB>count', got {line!r}")
        token, count = parts
        counts[token] = int(count)
    if not counts:
        raise EmptyCorpusError(f"{path}: vocabulary file holds no entries")
    return _from_counts(counts)
