"""Seeded corruption: eligibility, statistics, reproducibility, records."""
import math
import random

import pytest

from realword.confusion import build_confusion_index, dl_distance
from realword.corruptor import (
    CorruptionConfig,
    CorruptionRecord,
    WordCorruptor,
    corrupt_corpus,
    load_records,
    multi_error_census,
    save_records,
)
from realword.validation import VocabularyMismatchError
from realword.vocab import build_base_vocab

WORDS = ["cat", "cot", "cut", "car", "cart", "dog", "dig", "dug", "the", "then", "hen"]


def make_corpus(seed, n_sent, length=8):
    rng = random.Random(seed)
    return [[rng.choice(WORDS) for _ in range(length)] for _ in range(n_sent)]


@pytest.fixture(scope="module")
def setup():
    corpus = make_corpus(0, 400)
    vocab = build_base_vocab([t for s in corpus for t in s])
    index = build_confusion_index(vocab)
    return corpus, vocab, index


class TestEligibility:
    def test_huge_denominator_is_identity(self, setup):
        corpus, vocab, index = setup
        out, records = corrupt_corpus(corpus[:20], vocab, index, CorruptionConfig(10 ** 9, seed=1))
        assert out == corpus[:20]
        assert records == []

    def test_digit_class_tokens_never_replaced(self):
        corpus = [["the", "<d4>", "cat"]] * 30 + [["cot", "hen", "then"]] * 30
        vocab = build_base_vocab([t for s in corpus for t in s])
        index = build_confusion_index(vocab)
        out, _ = corrupt_corpus(corpus, vocab, index, CorruptionConfig(1, seed=3))
        assert all(sent[1] == "<d4>" for sent in out[:30])

    def test_out_of_vocabulary_tokens_never_replaced(self, setup):
        corpus, vocab, index = setup
        probe = [["neverseen", "cat", "neverseen"]] * 50
        out, records = corrupt_corpus(probe, vocab, index, CorruptionConfig(1, seed=0))
        for sent in out:
            assert sent[0] == "neverseen" and sent[2] == "neverseen"

    def test_isolated_word_never_replaced(self):
        corpus = [["zzzzzz", "cat", "cot"]] * 40
        vocab = build_base_vocab([t for s in corpus for t in s])
        index = build_confusion_index(vocab)
        out, _ = corrupt_corpus(corpus, vocab, index, CorruptionConfig(1, seed=5))
        assert all(sent[0] == "zzzzzz" for sent in out)

    def test_rate_one_replaces_every_eligible_token(self, setup):
        corpus, vocab, index = setup
        eligible = [["cat", "dog", "the"]] * 10
        out, records = corrupt_corpus(eligible, vocab, index, CorruptionConfig(1, seed=7))
        assert len(records) == 30
        assert all(o != n for sent, osent in zip(out, eligible) for n, o in zip(sent, osent))


class TestStatistics:
    def test_replacement_count_tracks_binomial(self, setup):
        corpus, vocab, index = setup
        n_eligible = sum(
            1 for s in corpus for t in s if t in vocab.realword_set and index.variations(t)
        )
        assert n_eligible >= 3000
        r = 5
        _, records = corrupt_corpus(corpus, vocab, index, CorruptionConfig(r, seed=11))
        expected = n_eligible / r
        sigma = math.sqrt(n_eligible * (1 / r) * (1 - 1 / r))
        assert abs(len(records) - expected) <= 3 * sigma

    def test_uniform_choice_over_variants(self, setup):
        corpus, vocab, index = setup
        variants = index.variations("cat")
        assert len(variants) >= 3
        probe = [["cat"] * 10] * 300
        _, records = corrupt_corpus(probe, vocab, index, CorruptionConfig(1, seed=13))
        counts = {v: 0 for v in variants}
        for r in records:
            counts[r.error] += 1
        total = sum(counts.values())
        for v, n in counts.items():
            expected = total / len(variants)
            assert abs(n - expected) <= 4 * math.sqrt(expected), counts


class TestRecords:
    def test_records_satisfy_invariants(self, setup):
        corpus, vocab, index = setup
        out, records = corrupt_corpus(corpus, vocab, index, CorruptionConfig(3, seed=17))
        assert len(out) == len(corpus)
        for sent, orig in zip(out, corpus):
            assert len(sent) == len(orig)
        changed = {(r.sentence_id, r.position) for r in records}
        assert len(changed) == len(records)
        for r in records:
            assert r.original != r.error
            assert dl_distance(r.original, r.error) == 1
            assert r.error in vocab.realword_set
            assert corpus[r.sentence_id][r.position] == r.original
            assert out[r.sentence_id][r.position] == r.error
        # every unchanged position is untouched
        for sid, (sent, orig) in enumerate(zip(out, corpus)):
            for pos, (a, b) in enumerate(zip(orig, sent)):
                if (sid, pos) not in changed:
                    assert a == b

    def test_adjacent_and_multiple_errors_possible(self, setup):
        corpus, vocab, index = setup
        out, records = corrupt_corpus(corpus, vocab, index, CorruptionConfig(1, seed=19))
        by_sid = {}
        for r in records:
            by_sid.setdefault(r.sentence_id, []).append(r.position)
        assert any(len(ps) >= 2 for ps in by_sid.values())
        assert any(
            b - a == 1 for ps in by_sid.values() for a, b in zip(sorted(ps), sorted(ps)[1:])
        )

    def test_tsv_round_trip(self, setup, tmp_path):
        corpus, vocab, index = setup
        _, records = corrupt_corpus(corpus, vocab, index, CorruptionConfig(10, seed=23))
        assert records
        path = tmp_path / "records.tsv"
        save_records(records, path)
        assert load_records(path) == records

    def test_malformed_record_line(self, tmp_path):
        path = tmp_path / "bad.tsv"
        path.write_text("1\t2\tcat\n")
        with pytest.raises(ValueError, match="4 tab-separated"):
            load_records(path)


class TestReproducibility:
    def test_identical_seed_identical_output(self, setup):
        corpus, vocab, index = setup
        cfg = CorruptionConfig(4, seed=29)
        out1, rec1 = corrupt_corpus(corpus, vocab, index, cfg)
        out2, rec2 = corrupt_corpus(corpus, vocab, index, cfg)
        assert out1 == out2 and rec1 == rec2

    def test_different_seeds_differ(self, setup):
        corpus, vocab, index = setup
        out1, _ = corrupt_corpus(corpus, vocab, index, CorruptionConfig(4, seed=1))
        out2, _ = corrupt_corpus(corpus, vocab, index, CorruptionConfig(4, seed=2))
        assert out1 != out2

    def test_documented_draw_discipline(self, setup):
        """One random() per token; one more per replacement, index over the
        sorted neighborhood.  Replaying that by hand must reproduce the run."""
        corpus, vocab, index = setup
        cfg = CorruptionConfig(3, seed=31)
        out, records = corrupt_corpus(corpus[:50], vocab, index, cfg)

        rng = random.Random(31)
        expect_records = []
        expect_out = []
        for sid, sent in enumerate(corpus[:50]):
            new = list(sent)
            for pos, tok in enumerate(sent):
                if rng.random() >= 1 / 3:
                    continue
                if tok not in vocab.realword_set:
                    continue
                variants = sorted(x for x in vocab.realword_set if dl_distance(tok, x) == 1)
                if not variants:
                    continue
                pick = variants[min(int(rng.random() * len(variants)), len(variants) - 1)]
                new[pos] = pick
                expect_records.append(CorruptionRecord(sid, pos, tok, pick))
            expect_out.append(new)
        assert out == expect_out
        assert records == expect_records


class TestCensus:
    def test_no_records(self):
        assert multi_error_census([], [["a"], ["b"]]) == {
            "sentences_total": 2,
            "sentences_with_errors": 0,
            "sentences_with_multiple_errors": 0,
        }

    def test_hand_fixture(self):
        records = [
            CorruptionRecord(3, 1, "cat", "cot"),
            CorruptionRecord(3, 4, "dog", "dig"),
            CorruptionRecord(5, 0, "the", "then"),
        ]
        census = multi_error_census(records, [["x"]] * 8)
        assert census == {
            "sentences_total": 8,
            "sentences_with_errors": 2,
            "sentences_with_multiple_errors": 1,
        }


class TestConfig:
    def test_rate_must_be_positive(self):
        with pytest.raises(ValueError):
            CorruptionConfig(0)

    def test_rate_must_be_integer(self):
        with pytest.raises(TypeError):
            CorruptionConfig(2.5)

    def test_mismatched_index_rejected(self, setup):
        corpus, vocab, _ = setup
        other = build_base_vocab(["pig", "pig", "pit", "pit"])
        wrong_index = build_confusion_index(other)
        with pytest.raises(VocabularyMismatchError):
            corrupt_corpus(corpus, vocab, wrong_index, CorruptionConfig(5, seed=0))


class TestEstimator:
    def test_fit_transform_matches_function(self, setup):
        corpus, vocab, index = setup
        est = WordCorruptor(rate_denominator=4, seed=29).fit(corpus)
        out, records = corrupt_corpus(corpus, est.vocabulary_, est.confusion_index_, CorruptionConfig(4, seed=29))
        assert est.transform(corpus) == out
        assert est.corrupt(corpus) == (out, records)

    def test_prebuilt_artifacts_respected(self, setup):
        corpus, vocab, index = setup
        est = WordCorruptor(vocabulary=vocab, confusion_index=index, rate_denominator=4, seed=1)
        est.fit(corpus)
        assert est.vocabulary_ is vocab
        assert est.confusion_index_ is index

    def test_unfitted_transform_rejected(self, setup):
        corpus, _, _ = setup
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            WordCorruptor().transform(corpus)
