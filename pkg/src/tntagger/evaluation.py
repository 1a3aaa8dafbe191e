"""Accuracy, cross-validation, learning curves and reliability sweeps."""
from __future__ import annotations

import json
import math
import random
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Container, Sequence

from .corpus import CorpusError, TaggedCorpus, partition_contiguous, sample_disjoint
from .decoder import TaggedOutput, TaggerConfig, assemble, tag_sentences

METRICS = ("overall_accuracy", "known_accuracy", "unknown_accuracy", "unknown_rate")


class EvaluationError(ValueError):
    pass


@dataclass(frozen=True)
class FoldReport:
    """Accuracies for one test set.

    Known/unknown accuracy is ``nan`` when the test set has no such tokens.
    """

    overall_accuracy: float
    known_accuracy: float
    unknown_accuracy: float
    unknown_rate: float
    token_count: int
    known_count: int
    unknown_count: int
    correct: int


def _frac(num: int, den: int) -> float:
    return num / den if den else math.nan


def score(gold: TaggedCorpus, predicted: Sequence[TaggedOutput], lexicon: Container[str]) -> FoldReport:
    """Compare predictions to gold tags; known means present in ``lexicon``."""
    if gold.token_count == 0:
        raise EvaluationError("empty test set")
    if len(predicted) != len(gold):
        raise EvaluationError(f"{len(gold)} gold sentences but {len(predicted)} predictions")
    right = {True: 0, False: 0}
    seen = {True: 0, False: 0}
    for i, (sent, out) in enumerate(zip(gold.sentences, predicted)):
        if len(sent) != len(out.tags) or any(t.surface != w for t, w in zip(sent, out.words)):
            raise EvaluationError(f"sentence {i + 1}: prediction does not align with gold")
        for tok, t in zip(sent, out.tags):
            known = tok.surface in lexicon
            seen[known] += 1
            right[known] += tok.tag == t
    n = seen[True] + seen[False]
    return FoldReport(
        overall_accuracy=(right[True] + right[False]) / n,
        known_accuracy=_frac(right[True], seen[True]),
        unknown_accuracy=_frac(right[False], seen[False]),
        unknown_rate=seen[False] / n,
        token_count=n,
        known_count=seen[True],
        unknown_count=seen[False],
        correct=right[True] + right[False],
    )


def _mean_std(values: list[float]) -> tuple[float, float]:
    vals = [v for v in values if not math.isnan(v)]
    if not vals:
        return math.nan, math.nan
    return statistics.fmean(vals), (statistics.stdev(vals) if len(vals) > 1 else math.nan)


@dataclass(frozen=True)
class CrossValReport:
    folds: tuple[FoldReport, ...]
    means: dict[str, float] = field(init=False)
    stdevs: dict[str, float] = field(init=False)

    def __post_init__(self):
        means, stds = {}, {}
        for m in METRICS:
            means[m], stds[m] = _mean_std([getattr(f, m) for f in self.folds])
        object.__setattr__(self, "means", means)
        object.__setattr__(self, "stdevs", stds)

    def to_tsv(self) -> str:
        head = "fold\t" + "\t".join(METRICS) + "\ttokens"
        rows = [head]
        for i, f in enumerate(self.folds):
            rows.append(f"{i}\t" + "\t".join(f"{getattr(f, m):.6f}" for m in METRICS) + f"\t{f.token_count}")
        rows.append("mean\t" + "\t".join(f"{self.means[m]:.6f}" for m in METRICS)
                    + f"\t{sum(f.token_count for f in self.folds)}")
        rows.append("stdev\t" + "\t".join(f"{self.stdevs[m]:.6f}" for m in METRICS) + "\t")
        return "\n".join(rows) + "\n"

    def to_json(self) -> str:
        return _json({"folds": [asdict(f) for f in self.folds], "mean": self.means, "stdev": self.stdevs})


def _json(obj) -> str:
    def clean(x):
        if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, (list, tuple)):
            return [clean(v) for v in x]
        return x
    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def report_to_tsv(report: FoldReport) -> str:
    keys = list(asdict(report))
    return "\t".join(keys) + "\n" + "\t".join(
        f"{v:.6f}" if isinstance(v, float) else str(v) for v in asdict(report).values()) + "\n"


def report_to_json(report: FoldReport) -> str:
    return _json(asdict(report))


def run_fold(train: TaggedCorpus, test: TaggedCorpus, config: TaggerConfig | None = None,
             beam: float | None = None, with_reliability: bool = False):
    """Train on ``train``, tag ``test``; returns ``(FoldReport, outputs)``."""
    model = assemble(train, config)
    outputs = tag_sentences(model, test.words(), beam, with_reliability)
    return score(test, outputs, model.counts.lexical), outputs


def _xval_fold(args):
    corpus, fold, k, config, beam, rel = args
    train, test = partition_contiguous(corpus, fold, k)
    return run_fold(train, test, config, beam, rel)


def _folds(corpus, k, config, beam, rel, jobs):
    if k < 2:
        raise EvaluationError("cross-validation needs k >= 2")
    if k > len(corpus):
        raise CorpusError(f"corpus of {len(corpus)} sentences is too small for {k} folds")
    tasks = [(corpus, i, k, config, beam, rel) for i in range(k)]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            return list(pool.map(_xval_fold, tasks))
    return [_xval_fold(t) for t in tasks]


def cross_validate(corpus: TaggedCorpus, k: int = 10, config: TaggerConfig | None = None,
                   beam: float | None = None, jobs: int = 1) -> CrossValReport:
    """k-fold cross-validation with contiguous test blocks."""
    results = _folds(corpus, k, config, beam, False, jobs)
    return CrossValReport(tuple(r for r, _ in results))


@dataclass(frozen=True)
class LearningCurvePoint:
    train_tokens: int
    means: dict[str, float]
    stdevs: dict[str, float]
    repeats: int


@dataclass(frozen=True)
class LearningCurve:
    points: tuple[LearningCurvePoint, ...]

    def to_tsv(self) -> str:
        """One two-column block per metric, separated by blank lines."""
        blocks = []
        for m in METRICS:
            lines = [f"# {m}", "train_tokens\t" + m]
            lines += [f"{p.train_tokens}\t{p.means[m]:.6f}" for p in self.points]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    def to_json(self) -> str:
        return _json({"points": [asdict(p) for p in self.points]})


def learning_curve(corpus: TaggedCorpus, sizes: Sequence[int], test_tokens: int, repeats: int = 10,
                   seed: int = 0, config: TaggerConfig | None = None, beam: float | None = None,
                   jobs: int = 1) -> LearningCurve:
    """Accuracy as a function of training size on random disjoint samples."""
    sizes = list(sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise EvaluationError("training sizes must be strictly increasing")
    if not sizes or sizes[-1] + test_tokens > corpus.token_count:
        raise EvaluationError("largest training size plus test size exceeds the corpus")
    rng = random.Random(seed)
    tasks = []
    for size in sizes:
        for _ in range(repeats):
            tasks.append((corpus, size, test_tokens, rng.randrange(2**32), config, beam))
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            results = list(pool.map(_curve_task, tasks))
    else:
        results = [_curve_task(t) for t in tasks]
    points = []
    for j, size in enumerate(sizes):
        chunk = results[j * repeats:(j + 1) * repeats]
        means, stds = {}, {}
        for m in METRICS:
            means[m], stds[m] = _mean_std([getattr(r, m) for r in chunk])
        points.append(LearningCurvePoint(size, means, stds, repeats))
    return LearningCurve(tuple(points))


def _curve_task(args):
    corpus, size, test_tokens, seed, config, beam = args
    train, test = sample_disjoint(corpus, size, test_tokens, seed)
    return run_fold(train, test, config, beam)[0]


@dataclass(frozen=True)
class ReliabilityRow:
    threshold: float
    reliable_fraction: float
    reliable_accuracy: float
    unreliable_accuracy: float
    reliable_count: int
    token_count: int


@dataclass(frozen=True)
class ReliabilityCurve:
    rows: tuple[ReliabilityRow, ...]

    def to_tsv(self) -> str:
        blocks = []
        for col in ("reliable_accuracy", "reliable_fraction", "unreliable_accuracy"):
            lines = [f"# {col}", "threshold\t" + col]
            lines += [f"{_fmt_threshold(r.threshold)}\t{getattr(r, col):.6f}" for r in self.rows]
            blocks.append("\n".join(lines))
        return "\n\n".join(blocks) + "\n"

    def to_json(self) -> str:
        return _json({"rows": [asdict(r) for r in self.rows]})


def _fmt_threshold(t: float) -> str:
    return "inf" if math.isinf(t) else f"{t:g}"


def reliability_table(quotients: Sequence[float], correct: Sequence[bool],
                      thresholds: Sequence[float]) -> ReliabilityCurve:
    """Split tokens into reliable (quotient >= threshold) and the rest."""
    n = len(quotients)
    rows = []
    for th in thresholds:
        if th < 1:
            raise EvaluationError(f"thresholds must be >= 1, got {th}")
        rel = [c for q, c in zip(quotients, correct) if q >= th]
        unrel_n = n - len(rel)
        unrel_right = sum(correct) - sum(rel)
        rows.append(ReliabilityRow(th, _frac(len(rel), n), _frac(sum(rel), len(rel)),
                                   _frac(unrel_right, unrel_n), len(rel), n))
    return ReliabilityCurve(tuple(rows))


def reliability_curve(corpus: TaggedCorpus, thresholds: Sequence[float], k: int = 10,
                      config: TaggerConfig | None = None, jobs: int = 1) -> ReliabilityCurve:
    """Reliability sweep over all test tokens of a k-fold run (exact decoding)."""
    results = _folds(corpus, k, config, 0, True, jobs)
    quotients: list[float] = []
    correct: list[bool] = []
    for fold, (_, outputs) in enumerate(results):
        _, test = partition_contiguous(corpus, fold, k)
        for sent, out in zip(test.sentences, outputs):
            quotients.extend(out.quotients)
            correct.extend(tok.tag == t for tok, t in zip(sent, out.tags))
    return reliability_table(quotients, correct, thresholds)
