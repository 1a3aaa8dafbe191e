"""Suffix tries for guessing the tags of words missing from the lexicon."""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field

from .ngrams import ModelError, NGramCounts, is_capitalized

THETA_PRINTED = "printed"
THETA_SQRT = "sqrt"


class SuffixTrie:
    """Tag frequencies of word endings up to ``max_length`` characters.

    Nodes are keyed by the suffix string itself; the empty string is the
    root and counts every contributing token.
    """

    def __init__(self, max_length: int):
        self.max_length = max_length
        self.counts: dict[str, dict[str, int]] = defaultdict(dict)
        self.totals: dict[str, int] = defaultdict(int)

    def add(self, word: str, tag: str, n: int = 1) -> None:
        for k in range(min(self.max_length, len(word)) + 1):
            suffix = word[len(word) - k:]
            node = self.counts[suffix]
            node[tag] = node.get(tag, 0) + n
            self.totals[suffix] += n

    def add_count(self, suffix: str, tag: str, n: int) -> None:
        node = self.counts[suffix]
        node[tag] = node.get(tag, 0) + n
        self.totals[suffix] += n

    def longest_match(self, word: str) -> int:
        m = 0
        for k in range(1, min(self.max_length, len(word)) + 1):
            if self.totals.get(word[len(word) - k:], 0) < 1:
                break
            m = k
        return m

    def __contains__(self, suffix: str) -> bool:
        return self.totals.get(suffix, 0) > 0

    def __len__(self) -> int:
        return len(self.totals)

    def items(self):
        """Yield ``(suffix, tag, count)`` in sorted order."""
        for suffix in sorted(self.counts):
            node = self.counts[suffix]
            for tag in sorted(node):
                yield suffix, tag, node[tag]

    def __eq__(self, other):
        return (isinstance(other, SuffixTrie) and self.max_length == other.max_length
                and dict(self.counts) == dict(other.counts))


def theta(unigram_distribution, mode: str = THETA_PRINTED) -> float:
    """Successive-abstraction weight from the spread of the tag distribution.

    ``printed`` returns the sample variance of the probabilities, ``sqrt``
    its square root.
    """
    probs = list(unigram_distribution.values()) if hasattr(unigram_distribution, "values") \
        else list(unigram_distribution)
    s = len(probs)
    if s < 2:
        raise ModelError(f"theta needs at least 2 tags, got {s}")
    mean = sum(probs) / s
    var = sum((p - mean) ** 2 for p in probs) / (s - 1)
    if mode == THETA_PRINTED:
        return var
    if mode == THETA_SQRT:
        return math.sqrt(var)
    raise ValueError(f"unknown theta mode {mode!r}")


@dataclass(eq=False)
class SuffixModel:
    lower_trie: SuffixTrie
    upper_trie: SuffixTrie
    theta: float
    root_distribution: dict[str, float]
    max_length: int = 10
    max_word_freq: int = 10
    _tags: list[str] = field(init=False, repr=False)
    _root: tuple[float, ...] = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        if self.theta < 0:
            raise ModelError(f"theta must be non-negative, got {self.theta}")
        self._tags = sorted(self.root_distribution)
        self._root = tuple(self.root_distribution[t] for t in self._tags)
        self._cache = {}

    @property
    def tags(self) -> list[str]:
        return self._tags

    def trie_for(self, word: str) -> SuffixTrie:
        return self.upper_trie if is_capitalized(word) else self.lower_trie

    def node_distribution(self, upper: bool, suffix: str) -> tuple[float, ...]:
        """Smoothed tag probabilities for a suffix present in a trie.

        Entries follow :attr:`tags`. The empty suffix maps to the root
        distribution.
        """
        if not suffix:
            return self._root
        key = (upper, suffix)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        # iterative over lengths so long suffixes don't recurse deeply
        trie = self.upper_trie if upper else self.lower_trie
        th = self.theta
        dist = self._root
        for k in range(1, len(suffix) + 1):
            suf = suffix[len(suffix) - k:]
            cached = self._cache.get((upper, suf))
            if cached is not None:
                dist = cached
                continue
            node = trie.counts.get(suf)
            if node is None:
                raise KeyError(suffix)
            total = trie.totals[suf]
            dist = tuple((node.get(t, 0) / total + th * p) / (1.0 + th)
                         for t, p in zip(self._tags, dist))
            self._cache[(upper, suf)] = dist
        return dist

    def distribution_array(self, word: str) -> tuple[float, ...]:
        upper = is_capitalized(word)
        trie = self.upper_trie if upper else self.lower_trie
        m = trie.longest_match(word)
        return self.node_distribution(upper, word[len(word) - m:] if m else "")

    def __eq__(self, other):
        return (isinstance(other, SuffixModel)
                and self.lower_trie == other.lower_trie and self.upper_trie == other.upper_trie
                and self.theta == other.theta and self.root_distribution == other.root_distribution
                and self.max_length == other.max_length and self.max_word_freq == other.max_word_freq)

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        return state


def unigram_distribution(counts: NGramCounts) -> dict[str, float]:
    return {t: c / counts.total for t, c in sorted(counts.tag_counts.items())}


def build(counts: NGramCounts, max_length: int = 10, max_word_freq: int = 10,
          theta_mode: str = THETA_PRINTED) -> SuffixModel:
    """Build both suffix tries from lexicon entries of infrequent words."""
    lower, upper = SuffixTrie(max_length), SuffixTrie(max_length)
    used = 0
    for word, tags in counts.lexical.items():
        if counts.word_totals[word] > max_word_freq:
            continue
        trie = upper if is_capitalized(word) else lower
        for tag, n in tags.items():
            trie.add(word, tag, n)
            used += n
    if not used:
        raise ModelError(
            f"no words with frequency <= {max_word_freq}; raise the suffix frequency threshold")
    dist = unigram_distribution(counts)
    return SuffixModel(lower, upper, theta(dist, theta_mode), dist, max_length, max_word_freq)


def tag_distribution(model: SuffixModel, word: str) -> dict[str, float]:
    return dict(zip(model.tags, model.distribution_array(word)))


def emission_score(model: SuffixModel, counts: NGramCounts, word: str, t: str) -> float:
    """Score proportional to P(suffix | t); the common factor P(suffix) is dropped."""
    prior = counts.tag_counts.get(t, 0) / counts.total
    if prior == 0:
        return 0.0
    return tag_distribution(model, word).get(t, 0.0) / prior
