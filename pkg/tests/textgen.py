"""Deterministic synthetic corpora with confusable word families.

Pseudo-words are strung together from syllables so they look vaguely
language-like, and every content word is minted as a family of
single-substitution siblings, which keeps distance-1 neighborhoods dense
the way real-word error studies need them.  Sentences come from a hidden
per-word successor process: each word owns a small preferred-successor
table (derived from a crc32 hash of the word, so it is stable across
platforms and runs) holding most of the probability mass, with the rest
spread over the whole vocabulary by a Zipf law.  Tables occasionally
feature a sibling of a chosen word, so context usually, but not always,
identifies the right family member - the ambiguity the corrector's false
positives and marginal recoveries come from.  A trickle of unique filler
words keeps hapaxes in the stream to fund unknown-word mass.

Nothing here touches global randomness: corpora are pure functions of
their seeds.
"""
from __future__ import annotations

import random
import zlib
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

CONSONANTS = "bcdfglmnprstvz"
VOWELS = "aeiou"
LETTERS = CONSONANTS + VOWELS

TABLE_MASS = 0.85  # successor-table share; the rest backs off to global Zipf
SIBLING_SWAP = 0.12  # chance a table entry is replaced by one of its siblings
HAPAX_RATE = 1 / 5000  # unique filler tokens per position
TABLE_REACH = 2.0  # rank = N * u**REACH when drawing table entries


@dataclass(frozen=True)
class Lexicon:
    words: tuple[str, ...]  # rank order: frequent first
    families: dict[str, tuple[str, ...]]  # word -> its siblings
    zipf_cum: tuple[float, ...]  # cumulative weights aligned with words
    process_seed: int  # fixes the hidden successor process (the "language")


def _syllable(rng: random.Random, coda_chance: float = 0.35) -> str:
    s = rng.choice(CONSONANTS) + rng.choice(VOWELS)
    if rng.random() < coda_chance:
        s += rng.choice(CONSONANTS)
    return s


def _word(rng: random.Random, n_syllables: int) -> str:
    return "".join(_syllable(rng) for _ in range(n_syllables))


def _mutate(word: str, rng: random.Random) -> str:
    pos = rng.randrange(len(word))
    repl = rng.choice([c for c in LETTERS if c != word[pos]])
    return word[:pos] + repl + word[pos + 1 :]


def build_lexicon(seed: int, n_words: int, n_function: int = 120) -> Lexicon:
    """Vocabulary of sibling families, frequent function words first."""
    rng = random.Random(seed)
    seen: set[str] = set()
    families: dict[str, tuple[str, ...]] = {}
    ordered: list[str] = []

    def mint_family(n_syllables: int, size: int) -> list[str]:
        for _ in range(200):
            base = _word(rng, n_syllables)
            if base in seen:
                continue
            members = [base]
            for _ in range(40):
                if len(members) >= size:
                    break
                sib = _mutate(base, rng)
                if sib not in seen and sib not in members:
                    members.append(sib)
            if len(members) >= 2:
                for m in members:
                    seen.add(m)
                    families[m] = tuple(x for x in members if x != m)
                return members
        raise RuntimeError("lexicon space exhausted")

    while len(ordered) < n_function:
        ordered.extend(mint_family(1, 2))
    while len(ordered) < n_words:
        size = rng.choice((2, 2, 3, 3, 4))
        ordered.extend(mint_family(rng.choice((2, 2, 2, 3)), size))

    # heavy-tailed frequencies: boosted function words, Zipf content tail
    weights = []
    for rank, _ in enumerate(ordered):
        w = 1.0 / (rank + 10) ** 0.92
        if rank < n_function:
            w *= 25.0
        weights.append(w)
    return Lexicon(tuple(ordered), families, tuple(accumulate(weights)), seed)


def _zipf_pick(lex: Lexicon, u: float) -> str:
    return lex.words[bisect_right(lex.zipf_cum, u * lex.zipf_cum[-1])]


def _successor_table(word: str, lex: Lexicon) -> tuple[tuple[str, ...], tuple[float, ...]]:
    rng = random.Random(zlib.crc32(word.encode()) ^ (lex.process_seed * 0x9E3779B1 & 0xFFFFFFFF))
    size = 5 + rng.randrange(6)
    decay = 0.45 + 0.25 * rng.random()
    entries = []
    for _ in range(size):
        # rank power law reaches deep into the lexicon, unlike the ambient law
        w = lex.words[int(len(lex.words) * rng.random() ** TABLE_REACH)]
        sibs = lex.families.get(w, ())
        if sibs and rng.random() < SIBLING_SWAP:
            w = rng.choice(sibs)
        entries.append(w)
    weights = list(accumulate(decay ** i for i in range(size)))
    scale = TABLE_MASS / weights[-1]
    return tuple(entries), tuple(w * scale for w in weights)


def generate(seed: int, n_tokens: int, lex: Lexicon) -> list[list[str]]:
    """Sentences totalling at least n_tokens, deterministic in (seed, lex)."""
    rng = random.Random(seed ^ 0x5EED)
    tables: dict[str, tuple[tuple[str, ...], tuple[float, ...]]] = {}
    sentences: list[list[str]] = []
    produced = 0
    hapax_serial = 0
    while produced < n_tokens:
        length = 6 + rng.randrange(17)
        prev = "⟨start⟩"
        sentence = []
        for _ in range(length):
            if rng.random() < HAPAX_RATE:
                hapax_serial += 1
                # corpus seed in the tag keeps fillers distinct across corpora
                word = "zq" + _encode_letters(seed + 1) + "q" + _encode_letters(hapax_serial)
            else:
                table = tables.get(prev)
                if table is None:
                    table = _successor_table(prev, lex)
                    tables[prev] = table
                entries, cum = table
                u = rng.random()
                if u < cum[-1]:
                    word = entries[bisect_right(cum, u)]
                else:
                    word = _zipf_pick(lex, rng.random())
            sentence.append(word)
            prev = word
        sentences.append(sentence)
        produced += length
    return sentences


def _encode_letters(n: int) -> str:
    digits = []
    while True:
        digits.append(LETTERS[n % len(LETTERS)])
        n //= len(LETTERS)
        if not n:
            return "".join(reversed(digits))
