"""Tag n-gram and lexical frequency counts, ML estimates and interpolation."""
from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterable

from .corpus import BOS, EOS, TaggedCorpus

BOUNDARY_TAGS = frozenset((BOS, EOS))

# Ordering of (lambda3, lambda2, lambda1) preference when leave-one-out ratios tie.
TIE_HIGHER = "higher"
TIE_LOWER = "lower"


class ModelError(ValueError):
    pass


def is_capitalized(word: str) -> bool:
    return bool(word) and word[0].isupper()


def composite(tag: str, capitalized: bool) -> str:
    """Contextual state label for a tag seen on a (non-)capitalized word.

    The label contains a space, which never occurs in corpus tags, so the
    doubled state space cannot collide with real tags.
    """
    return tag + " C" if capitalized else tag


def base_tag(state: str) -> str:
    return state[:-2] if state.endswith(" C") else state


@dataclass(frozen=True, eq=True)
class NGramCounts:
    """Frequency tables for contextual states and the lexicon.

    ``unigrams`` holds real-token state counts plus the boundary entries:
    ``<BOS>`` and ``<EOS>`` are each counted once per sentence, so
    ``sum(unigrams.values()) == total + 2 * sentences``.  ``tag_counts`` are
    base-tag frequencies (equal to ``unigrams`` minus boundaries when
    capitalization states are off) and form the denominators of lexical
    estimates.
    """

    unigrams: dict[str, int]
    bigrams: dict[tuple[str, str], int]
    trigrams: dict[tuple[str, str, str], int]
    lexical: dict[str, dict[str, int]]
    word_totals: dict[str, int]
    tag_counts: dict[str, int]
    total: int
    sentences: int

    @property
    def states(self) -> list[str]:
        """Real (non-boundary) contextual states, sorted."""
        return sorted(s for s in self.unigrams if s not in BOUNDARY_TAGS)

    @property
    def tags(self) -> list[str]:
        return sorted(self.tag_counts)


def count(corpus: TaggedCorpus, capitalization: bool = False) -> NGramCounts:
    """Count a corpus padded as ``<BOS> <BOS> t1 ... tT <EOS>`` per sentence."""
    if corpus.token_count == 0:
        raise ModelError("cannot count an empty corpus")
    uni: Counter = Counter()
    bi: Counter = Counter()
    tri: Counter = Counter()
    lex: dict[str, Counter] = defaultdict(Counter)
    tag_counts: Counter = Counter()
    for sent in corpus.sentences:
        seq = [BOS, BOS]
        for tok in sent:
            lex[tok.surface][tok.tag] += 1
            tag_counts[tok.tag] += 1
            seq.append(composite(tok.tag, is_capitalized(tok.surface)) if capitalization else tok.tag)
        seq.append(EOS)
        uni.update(seq[2:])
        uni[BOS] += 1
        bi.update(zip(seq[1:], seq[2:]))
        bi[(BOS, BOS)] += 1
        tri.update(zip(seq, seq[1:], seq[2:]))
    lexical = {w: dict(c) for w, c in lex.items()}
    return NGramCounts(
        unigrams=dict(uni),
        bigrams=dict(bi),
        trigrams=dict(tri),
        lexical=lexical,
        word_totals={w: sum(c.values()) for w, c in lexical.items()},
        tag_counts=dict(tag_counts),
        total=corpus.token_count,
        sentences=len(corpus),
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def mle_unigram(counts: NGramCounts, t: str) -> float:
    # N counts real tokens only, so boundary states carry no unigram mass
    if t in BOUNDARY_TAGS:
        return 0.0
    return _ratio(counts.unigrams.get(t, 0), counts.total)


def mle_bigram(counts: NGramCounts, t2: str, t3: str) -> float:
    return _ratio(counts.bigrams.get((t2, t3), 0), counts.unigrams.get(t2, 0))


def mle_trigram(counts: NGramCounts, t1: str, t2: str, t3: str) -> float:
    return _ratio(counts.trigrams.get((t1, t2, t3), 0), counts.bigrams.get((t1, t2), 0))


def mle_lexical(counts: NGramCounts, w: str, t: str) -> float:
    return _ratio(counts.lexical.get(w, {}).get(t, 0), counts.tag_counts.get(t, 0))


@dataclass(frozen=True)
class InterpolationWeights:
    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        vals = (self.lambda1, self.lambda2, self.lambda3)
        if min(vals) < 0 or abs(sum(vals) - 1.0) > 1e-12:
            raise ModelError(f"invalid interpolation weights {vals}")

    def astuple(self) -> tuple[float, float, float]:
        return self.lambda1, self.lambda2, self.lambda3


def deleted_interpolation(counts: NGramCounts, tie_break: str = TIE_HIGHER) -> InterpolationWeights:
    """Estimate context-independent interpolation weights by deleted interpolation.

    Every trigram with positive frequency credits its frequency to whichever
    of the trigram, bigram or unigram estimate best predicts it once the
    trigram itself is removed from the counts.
    """
    if tie_break not in (TIE_HIGHER, TIE_LOWER):
        raise ValueError(f"unknown tie_break {tie_break!r}")
    uni, bi, n = counts.unigrams, counts.bigrams, counts.total
    acc = [0, 0, 0]  # lambda1, lambda2, lambda3
    order = (2, 1, 0) if tie_break == TIE_HIGHER else (0, 1, 2)
    for (t1, t2, t3), f in counts.trigrams.items():
        if f <= 0:
            continue
        vals = (
            _ratio(uni[t3] - 1, n - 1),
            _ratio(bi[(t2, t3)] - 1, uni[t2] - 1),
            _ratio(f - 1, bi[(t1, t2)] - 1),
        )
        best = order[0]
        for i in order[1:]:
            if vals[i] > vals[best]:
                best = i
        acc[best] += f
    total = sum(acc)
    if total == 0:
        raise ModelError("no trigrams with positive frequency")
    return InterpolationWeights(acc[0] / total, acc[1] / total, acc[2] / total)


def smoothed_trigram(counts: NGramCounts, weights: InterpolationWeights,
                     t1: str, t2: str, t3: str) -> float:
    return (weights.lambda1 * mle_unigram(counts, t3)
            + weights.lambda2 * mle_bigram(counts, t2, t3)
            + weights.lambda3 * mle_trigram(counts, t1, t2, t3))


def format_ngrams(counts: NGramCounts) -> Iterable[str]:
    """Yield the nested n-gram table lines (without newlines)."""
    bi_by_first: dict[str, list[str]] = defaultdict(list)
    for a, b in counts.bigrams:
        bi_by_first[a].append(b)
    tri_by_pair: dict[tuple[str, str], list[str]] = defaultdict(list)
    for a, b, c in counts.trigrams:
        tri_by_pair[(a, b)].append(c)
    for a in sorted(counts.unigrams):
        yield f"{a}\t{counts.unigrams[a]}"
        for b in sorted(bi_by_first.get(a, ())):
            yield f"\t{b}\t{counts.bigrams[(a, b)]}"
            for c in sorted(tri_by_pair.get((a, b), ())):
                yield f"\t\t{c}\t{counts.trigrams[(a, b, c)]}"


def parse_ngrams(lines: Iterable[tuple[int, str]]):
    """Inverse of :func:`format_ngrams`; takes ``(lineno, line)`` pairs.

    Returns ``(unigrams, bigrams, trigrams)``.
    """
    uni: dict[str, int] = {}
    bi: dict[tuple[str, str], int] = {}
    tri: dict[tuple[str, str, str], int] = {}
    a = b = None
    for lineno, line in lines:
        fields = line.split("\t")
        try:
            if len(fields) == 2 and fields[0]:
                a, b = fields[0], None
                uni[a] = int(fields[1])
            elif len(fields) == 3 and not fields[0] and fields[1] and a is not None:
                b = fields[1]
                bi[(a, b)] = int(fields[2])
            elif len(fields) == 4 and not fields[0] and not fields[1] and fields[2] and b is not None:
                tri[(a, b, fields[2])] = int(fields[3])
            else:
                raise ValueError
        except ValueError:
            raise ModelError(f"line {lineno}: malformed n-gram line") from None
    return uni, bi, tri
