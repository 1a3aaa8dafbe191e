import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import Reference, random_corpus
from tntagger.corpus import BOS, EOS, TaggedCorpus
from tntagger.ngrams import (InterpolationWeights, ModelError, count, deleted_interpolation,
                             format_ngrams, mle_bigram, mle_lexical, mle_trigram, mle_unigram,
                             parse_ngrams, smoothed_trigram)


def test_fixture_counts(fixture_a):
    c = count(fixture_a)
    assert c.unigrams["DT"] == 2
    assert c.bigrams[("DT", "NN")] == 2
    assert c.trigrams[("DT", "NN", "VB")] == 2
    assert c.lexical["dog"]["NN"] == 1
    assert c.total == 8
    assert c.trigrams[(BOS, BOS, "DT")] == 2
    assert c.bigrams[("SENT", EOS)] == 2
    assert len(c.trigrams) == 5


def test_one_token_sentence():
    c = count(TaggedCorpus.from_pairs([[("a", "X")]]))
    assert c.trigrams[(BOS, BOS, "X")] == 1
    assert c.bigrams[("X", EOS)] == 1


def test_empty_corpus_rejected():
    with pytest.raises(ModelError):
        count(TaggedCorpus(()))


def test_mle_examples(fixture_a):
    c = count(fixture_a)
    assert mle_bigram(c, "DT", "NN") == 1.0
    assert mle_lexical(c, "dog", "NN") == 0.5
    assert mle_trigram(c, "VB", "VB", "VB") == 0.0
    assert mle_unigram(c, "NN") == 0.25
    assert mle_unigram(c, BOS) == 0.0 and mle_unigram(c, EOS) == 0.0


def test_fixture_weights(fixture_a):
    # every fixture trigram ties trigram and bigram ratios at 1
    c = count(fixture_a)
    assert deleted_interpolation(c).astuple() == (0.0, 0.0, 1.0)
    assert deleted_interpolation(c, "lower").astuple() == (0.0, 1.0, 0.0)
    ref = Reference([[(t.surface, t.tag) for t in s] for s in fixture_a])
    assert deleted_interpolation(c).astuple() == ref.weights("higher")
    assert deleted_interpolation(c, "lower").astuple() == ref.weights("lower")


def test_three_way_zero_tie():
    c = count(TaggedCorpus.from_pairs([[("a", "X"), ("b", "Y")]]))
    assert deleted_interpolation(c).astuple() == (0.0, 0.0, 1.0)
    assert deleted_interpolation(c, "lower").astuple() == (1.0, 0.0, 0.0)


def test_trigram_dominates():
    # long deterministic chains: every trigram ratio is 1 and strictly beats the rest
    sents = [[("a", "X"), ("b", "Y"), ("c", "Z")]] * 3 + [[("d", "Y"), ("e", "X")]] * 3
    w = deleted_interpolation(count(TaggedCorpus.from_pairs(sents)))
    assert w.astuple() == (0.0, 0.0, 1.0)


def test_bad_tie_break(fixture_a):
    with pytest.raises(ValueError):
        deleted_interpolation(count(fixture_a), "middle")


def test_smoothed_example(fixture_a):
    c = count(fixture_a)
    w = InterpolationWeights(0.2, 0.3, 0.5)
    assert smoothed_trigram(c, w, "DT", "NN", "VB") == pytest.approx(0.85, abs=1e-15)
    assert smoothed_trigram(c, w, "DT", "NN", "UNSEEN") == 0.0
    w1 = InterpolationWeights(1.0, 0.0, 0.0)
    for ctx in [("DT", "NN"), ("VB", "VB"), (BOS, BOS)]:
        assert smoothed_trigram(c, w1, *ctx, "SENT") == mle_unigram(c, "SENT")


def test_weights_validation():
    with pytest.raises(ModelError):
        InterpolationWeights(0.5, 0.5, 0.5)
    with pytest.raises(ModelError):
        InterpolationWeights(-0.1, 0.6, 0.5)


def test_ngram_text_round_trip(sample_corpus):
    c = count(sample_corpus, capitalization=True)
    lines = list(format_ngrams(c))
    uni, bi, tri = parse_ngrams(enumerate(lines, 1))
    assert (uni, bi, tri) == (c.unigrams, c.bigrams, c.trigrams)
    first = [ln.split("\t")[0] for ln in lines if not ln.startswith("\t")]
    assert first == sorted(first)


def test_ngram_parse_error():
    with pytest.raises(ModelError, match="line 2"):
        parse_ngrams([(1, "X\t3"), (2, "\t\t\tY\t1")])


def _to_str(state):
    tag, cap = state
    return tag + " C" if cap else tag


@pytest.mark.parametrize("caps", [False, True])
def test_counts_match_reference(caps):
    rng = random.Random(5 + caps)
    for _ in range(30):
        sents, _ = random_corpus(rng, caps=caps)
        c = count(TaggedCorpus.from_pairs(sents), capitalization=caps)
        ref = Reference(sents, caps=caps)
        assert c.unigrams == {_to_str(k): v for k, v in ref.uni.items()}
        assert c.bigrams == {tuple(map(_to_str, k)): v for k, v in ref.bi.items()}
        assert c.trigrams == {tuple(map(_to_str, k)): v for k, v in ref.tri.items()}
        for tie in ("higher", "lower"):
            assert deleted_interpolation(c, tie).astuple() == ref.weights(tie)


tagged = st.lists(
    st.lists(st.tuples(st.sampled_from(["a", "b", "Cc", "d"]), st.sampled_from(["X", "Y", "Z"])),
             min_size=1, max_size=5),
    min_size=1, max_size=10)


@settings(max_examples=60)
@given(tagged, st.booleans())
def test_count_invariants(sents, caps):
    c = count(TaggedCorpus.from_pairs(sents), capitalization=caps)
    assert sum(c.unigrams.values()) == c.total + 2 * c.sentences
    for (a, b), n in c.bigrams.items():
        assert n <= c.unigrams[a]
    for (a, b, z), n in c.trigrams.items():
        assert n <= c.bigrams[(a, b)]
    assert all(t not in (BOS, EOS) for tags in c.lexical.values() for t in tags)
    assert sum(c.tag_counts.values()) == c.total


@settings(max_examples=60)
@given(tagged, tagged)
def test_count_monotone(sents, more):
    before = count(TaggedCorpus.from_pairs(sents))
    after = count(TaggedCorpus.from_pairs(sents + more))
    for table in ("unigrams", "bigrams", "trigrams", "word_totals"):
        old, new = getattr(before, table), getattr(after, table)
        assert all(new.get(k, 0) >= v for k, v in old.items())


@settings(max_examples=60)
@given(tagged, st.booleans(), st.sampled_from(["higher", "lower"]))
def test_smoothed_distributions_normalize(sents, caps, tie):
    c = count(TaggedCorpus.from_pairs(sents), capitalization=caps)
    w = deleted_interpolation(c, tie)
    assert abs(sum(w.astuple()) - 1.0) <= 1e-12
    targets = c.states + [EOS]
    for (t1, t2) in c.bigrams:
        if t2 == EOS or c.unigrams.get(t2, 0) == 0:
            continue
        total = math.fsum(smoothed_trigram(c, w, t1, t2, t3) for t3 in targets)
        assert abs(total - 1.0) <= 1e-9
