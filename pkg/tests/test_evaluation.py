import json
import math
import statistics

import pytest

from tntagger.corpus import CorpusError, TaggedCorpus, partition_contiguous
from tntagger.decoder import TaggedOutput, assemble, tag_sentences
from tntagger.evaluation import (EvaluationError, cross_validate, learning_curve, reliability_curve,
                                 reliability_table, report_to_json, report_to_tsv, score)


def _outputs(sents, tags):
    return [TaggedOutput(tuple(s), tuple(t), (True,) * len(s), 0.0) for s, t in zip(sents, tags)]


GOLD = TaggedCorpus.from_pairs([
    [("the", "DT"), ("dog", "NN"), ("zorps", "VB"), (".", "SENT")],
    [("the", "DT"), ("cat", "NN"), ("flems", "VB"), (".", "SENT")],
])
LEXICON = {"the": {}, "dog": {}, "cat": {}, ".": {}}


def test_perfect():
    r = score(GOLD, _outputs(GOLD.words(), GOLD.tags()), LEXICON)
    assert (r.overall_accuracy, r.known_accuracy, r.unknown_accuracy) == (1.0, 1.0, 1.0)
    assert r.unknown_rate == 0.25


def test_unknowns_wrong():
    pred = [["DT", "NN", "NN", "SENT"], ["DT", "NN", "NN", "SENT"]]
    r = score(GOLD, _outputs(GOLD.words(), pred), LEXICON)
    assert (r.overall_accuracy, r.known_accuracy, r.unknown_accuracy) == (0.75, 1.0, 0.0)
    assert (r.token_count, r.known_count, r.unknown_count, r.correct) == (8, 6, 2, 6)


def test_no_unknowns_gives_nan():
    r = score(GOLD, _outputs(GOLD.words(), GOLD.tags()), {w: {} for s in GOLD.words() for w in s})
    assert math.isnan(r.unknown_accuracy) and r.unknown_rate == 0.0


def test_empty_and_misaligned():
    with pytest.raises(EvaluationError):
        score(TaggedCorpus(()), [], LEXICON)
    bad = _outputs([["the", "dog", "zorps", "."], ["the", "cat", "."]], [["DT"] * 4, ["DT"] * 3])
    with pytest.raises(EvaluationError, match="sentence 2"):
        score(GOLD, bad, LEXICON)
    with pytest.raises(EvaluationError):
        score(GOLD, bad[:1], LEXICON)


def test_report_formats():
    r = score(GOLD, _outputs(GOLD.words(), GOLD.tags()), LEXICON)
    head, row = report_to_tsv(r).splitlines()
    assert head.split("\t")[0] == "overall_accuracy" and row.startswith("1.000000")
    assert json.loads(report_to_json(r))["token_count"] == 8


@pytest.fixture(scope="module")
def xval(sample_corpus):
    return cross_validate(sample_corpus, 10)


def test_cross_validation(xval, sample_corpus):
    assert len(xval.folds) == 10
    assert sum(f.token_count for f in xval.folds) == sample_corpus.token_count
    for m in ("overall_accuracy", "known_accuracy", "unknown_accuracy", "unknown_rate"):
        vals = [getattr(f, m) for f in xval.folds]
        assert min(vals) <= xval.means[m] <= max(vals)
        assert xval.stdevs[m] == pytest.approx(statistics.stdev(vals), rel=1e-12)
    for f in xval.folds:
        recomposed = (f.known_accuracy * f.known_count + f.unknown_accuracy * f.unknown_count) / f.token_count
        assert recomposed == pytest.approx(f.overall_accuracy, abs=1e-12)
        assert all(0 <= getattr(f, m) <= 1 for m in ("overall_accuracy", "known_accuracy",
                                                       "unknown_accuracy", "unknown_rate"))
    assert xval.means["overall_accuracy"] > 0.9


def test_unknown_rate_recomputed(xval, sample_corpus):
    for fold, rep in enumerate(xval.folds):
        train, test = partition_contiguous(sample_corpus, fold, 10)
        vocab = {t.surface for s in train for t in s}
        unknown = sum(t.surface not in vocab for s in test for t in s)
        assert rep.unknown_rate == unknown / test.token_count


def test_cross_validation_output(xval):
    lines = xval.to_tsv().splitlines()
    assert len(lines) == 13 and lines[-2].startswith("mean") and lines[-1].startswith("stdev")
    doc = json.loads(xval.to_json())
    assert len(doc["folds"]) == 10 and "overall_accuracy" in doc["mean"]


def test_cross_validation_errors(fixture_a):
    with pytest.raises(EvaluationError):
        cross_validate(fixture_a, 1)
    with pytest.raises(CorpusError):
        cross_validate(fixture_a, 3)


def test_parallel_folds_identical(sample_corpus):
    small = TaggedCorpus(sample_corpus.sentences[:600])
    assert cross_validate(small, 4, jobs=2) == cross_validate(small, 4)


def test_learning_curve_deterministic(sample_corpus):
    a = learning_curve(sample_corpus, [1000, 4000], 2000, repeats=2, seed=3)
    b = learning_curve(sample_corpus, [1000, 4000], 2000, repeats=2, seed=3)
    assert a == b
    assert [p.train_tokens for p in a.points] == [1000, 4000]
    assert a.points[0].means["unknown_rate"] > a.points[1].means["unknown_rate"]
    blocks = a.to_tsv().strip().split("\n\n")
    assert len(blocks) == 4 and all(len(b.splitlines()) == 4 for b in blocks)
    assert json.loads(a.to_json())["points"][1]["train_tokens"] == 4000


def test_learning_curve_errors(sample_corpus):
    with pytest.raises(EvaluationError):
        learning_curve(sample_corpus, [2000, 1000], 100)
    with pytest.raises(EvaluationError):
        learning_curve(sample_corpus, [sample_corpus.token_count], 1)


def test_learning_curve_matches_cross_validation(sample_corpus, xval):
    test_tokens = sample_corpus.token_count // 10
    train_tokens = sample_corpus.token_count - test_tokens - 100
    curve = learning_curve(sample_corpus, [train_tokens], test_tokens, repeats=5, seed=0)
    diff = abs(curve.points[0].means["overall_accuracy"] - xval.means["overall_accuracy"])
    assert diff <= xval.stdevs["overall_accuracy"]


def test_reliability_table():
    q = [1.0, 1.5, 3.0, 150.0, math.inf, math.inf]
    ok = [False, True, True, True, True, True]
    rows = reliability_table(q, ok, [1, 2, 100, math.inf]).rows
    assert rows[0].reliable_fraction == 1.0 and rows[0].reliable_accuracy == 5 / 6
    assert math.isnan(rows[0].unreliable_accuracy)
    assert rows[1].reliable_count == 4 and rows[1].unreliable_accuracy == 0.5
    assert rows[3].reliable_count == 2
    counts = [r.reliable_count for r in rows]
    assert counts == sorted(counts, reverse=True)
    with pytest.raises(EvaluationError):
        reliability_table(q, ok, [0.5])


def test_reliability_curve(sample_corpus, xval):
    small = TaggedCorpus(sample_corpus.sentences[:800])
    curve = reliability_curve(small, [1, 5, 100, math.inf], k=4)
    fr = [r.reliable_fraction for r in curve.rows]
    assert fr[0] == 1.0 and fr == sorted(fr, reverse=True)
    model_sents = []
    singles = 0
    for fold in range(4):
        train, test = partition_contiguous(small, fold, 4)
        m = assemble(train)
        singles += sum(len(m.lattice_entry(t.surface)[0]) == 1 for s in test for t in s)
        model_sents.extend(tag_sentences(m, test.words(), beam=0))
    assert curve.rows[-1].reliable_count == singles
    overall = sum(t.tag == p for s, o in zip(small.sentences, model_sents)
                  for t, p in zip(s, o.tags)) / small.token_count
    assert curve.rows[0].reliable_accuracy == pytest.approx(overall, abs=1e-12)
    assert "reliable_accuracy" in curve.to_tsv()
    assert json.loads(curve.to_json())["rows"][-1]["threshold"] == "inf"
