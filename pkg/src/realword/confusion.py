"""Damerau-Levenshtein distance-1 neighborhoods over the real-word vocabulary.

Distance is optimal string alignment (insert, delete, substitute, transpose
adjacent); at distance 1 it coincides with unrestricted Damerau-Levenshtein,
and distance-1 membership is the only query the rest of the system makes.

The index is built with the deletion-neighborhood trick: every word is keyed
under itself and each of its single-character-deletion forms.  Any two
strings within distance 1 share at least one such key, so candidate
retrieval is a few dict lookups; exact dl_distance filtering then removes
the false hits the shared-key property lets in.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .vocab import Vocabulary

__all__ = [
    "dl_distance",
    "variations",
    "ConfusionIndex",
    "build_confusion_index",
    "save_index",
    "load_index",
]


def dl_distance(a: str, b: str) -> int:
    """Optimal string alignment distance between two strings.

    Edits operate on Unicode code points and comparisons are
    case-sensitive ("Riddle" and "riddle" are at distance 1).

    >>> dl_distance("to", "two"), dl_distance("form", "from")
    (1, 1)
    >>> dl_distance("ask", "a"), dl_distance("as", "a")
    (2, 1)
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev2: list[int] = []
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        cur = [i] + [0] * lb
        ai = a[i - 1]
        for j in range(1, lb + 1):
            best = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ai != b[j - 1]))
            if i > 1 and j > 1 and ai == b[j - 2] and a[i - 2] == b[j - 1]:
                swap = prev2[j - 2] + 1
                if swap < best:
                    best = swap
            cur[j] = best
        prev2, prev = prev, cur
    return prev[lb]


def variations(w: str, v: Vocabulary) -> set[str]:
    """Real-word vocabulary tokens at distance exactly 1 from w.

    Defined for any string; w itself is never a member.  The length
    pre-filter is sound because distance is bounded below by the length
    difference.
    """
    lw = len(w)
    return {
        x
        for x in v.realword_set
        if abs(len(x) - lw) <= 1 and x != w and dl_distance(w, x) == 1
    }


def _signatures(w: str) -> set[str]:
    sigs = {w}
    for i in range(len(w)):
        sigs.add(w[: i] + w[i + 1 :])
    return sigs


@dataclass(frozen=True)
class ConfusionIndex:
    """Precomputed distance-1 neighborhoods, one sorted tuple per real word.

    vocab_fingerprint identifies the vocabulary the index was built from;
    it is None for indexes loaded from a bare neighborhood file (that
    format carries no provenance).
    """

    neighborhood: Mapping[str, tuple[str, ...]]
    vocab_fingerprint: str | None = None

    def variations(self, w: str) -> tuple[str, ...]:
        """Neighborhood of w; empty for words outside the indexed vocabulary."""
        return self.neighborhood.get(w, ())

    @property
    def words(self) -> set[str]:
        return set(self.neighborhood)


def build_confusion_index(v: Vocabulary) -> ConfusionIndex:
    """Index every real-word vocabulary token by its distance-1 neighbors.

    Raises:
        ValueError: if the real-word vocabulary is empty.
    """
    if not v.realword_set:
        raise ValueError("cannot build a confusion index from an empty real-word vocabulary")
    buckets: dict[str, list[str]] = defaultdict(list)
    for w in v.realword_set:
        for sig in _signatures(w):
            buckets[sig].append(w)

    neighborhood: dict[str, tuple[str, ...]] = {}
    for w in sorted(v.realword_set):
        candidates: set[str] = set()
        for sig in _signatures(w):
            candidates.update(buckets.get(sig, ()))
        candidates.discard(w)
        lw = len(w)
        neighborhood[w] = tuple(
            sorted(
                x
                for x in candidates
                if abs(len(x) - lw) <= 1 and dl_distance(w, x) == 1
            )
        )
    return ConfusionIndex(neighborhood, v.fingerprint())


def save_index(ci: ConfusionIndex, path: str | Path) -> None:
    """Write "word<TAB>comma,separated,neighbors" lines, sorted by word."""
    lines = [f"{w}\t{','.join(ci.neighborhood[w])}\n" for w in sorted(ci.neighborhood)]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_index(path: str | Path) -> ConfusionIndex:
    """Read an index written by save_index.  Provenance is not recoverable."""
    neighborhood: dict[str, tuple[str, ...]] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise ValueError(f"{path}:{lineno}: expected 'word<TAB>neighbors', got {line!r}")
        word, joined = parts
        neighborhood[word] = tuple(joined.split(",")) if joined else ()
    return ConfusionIndex(neighborhood, None)
