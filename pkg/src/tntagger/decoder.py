"""Model assembly and sentence decoding.

The lattice search itself lives in a compiled extension (``_kernel``) with a
pure-Python twin (``_kernel_py``). The compiled one is used when importable;
set ``TNTAGGER_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import _kernel_py
from .corpus import BOS, EOS, TaggedCorpus
from .ngrams import (TIE_HIGHER, InterpolationWeights, ModelError, NGramCounts, composite, count,
                     deleted_interpolation, is_capitalized)
from .suffix import THETA_PRINTED, SuffixModel, build

if os.environ.get("TNTAGGER_PURE_PYTHON") == "1":
    kernel = _kernel_py
else:
    try:
        from . import _kernel as kernel
    except ImportError:  # extension not built
        kernel = _kernel_py

BACKEND = "python" if kernel is _kernel_py else "cython"

# dense (K, K, K) transition table; 300**3 doubles is ~216 MB
MAX_STATES = 300
_FLOAT_MAX = sys.float_info.max


@dataclass(frozen=True)
class TaggerConfig:
    beam_theta: float = 1000.0          # 0 or inf disables pruning
    max_suffix: int = 10
    suffix_freq_threshold: int = 10
    tie_break: str = TIE_HIGHER
    theta_mode: str = THETA_PRINTED
    capitalization: bool = True
    unknown_candidates: int = 10        # 0 keeps every tag with nonzero score

    def __post_init__(self):
        if not (self.beam_theta == 0 or self.beam_theta > 1):
            raise ValueError(f"beam_theta must be > 1 or 0 (disabled), got {self.beam_theta}")
        if self.max_suffix < 1 or self.suffix_freq_threshold < 1:
            raise ValueError("max_suffix and suffix_freq_threshold must be >= 1")
        if self.unknown_candidates < 0:
            raise ValueError("unknown_candidates must be >= 0")

    @property
    def log_beam(self) -> float:
        return _log_beam(self.beam_theta)


def _log_beam(theta: float | None) -> float:
    if not theta or math.isinf(theta):
        return math.inf
    return math.log(theta)


@dataclass(frozen=True)
class TaggedOutput:
    words: tuple[str, ...]
    tags: tuple[str, ...]
    known: tuple[bool, ...]
    log_prob: float
    quotients: tuple[float, ...] | None = None

    def __len__(self) -> int:
        return len(self.tags)


@dataclass(frozen=True, eq=False)
class TaggerModel:
    counts: NGramCounts
    weights: InterpolationWeights
    suffix_model: SuffixModel
    config: TaggerConfig = field(default_factory=TaggerConfig)
    # derived tables, rebuilt from the fields above
    labels: tuple[str, ...] = field(init=False, repr=False)
    index: dict = field(init=False, repr=False)
    trans: np.ndarray = field(init=False, repr=False)
    _prepared: dict = field(init=False, repr=False)
    _lex_cache: dict = field(init=False, repr=False)
    _unk_cache: dict = field(init=False, repr=False)
    # state space size and the two boundary ids, which sit last
    K: int = field(init=False, repr=False)
    bos: int = field(init=False, repr=False)
    eos: int = field(init=False, repr=False)

    def __post_init__(self):
        labels = tuple(self.counts.states) + (BOS, EOS)
        if len(labels) > MAX_STATES:
            raise ModelError(f"{len(labels)} contextual states exceed the supported {MAX_STATES}")
        set_ = object.__setattr__
        set_(self, "labels", labels)
        set_(self, "index", {s: i for i, s in enumerate(labels)})
        set_(self, "trans", _transition_table(self.counts, self.weights, labels))
        set_(self, "_prepared", {})
        set_(self, "_lex_cache", {})
        set_(self, "_unk_cache", {})
        set_(self, "K", len(labels))
        set_(self, "bos", len(labels) - 2)
        set_(self, "eos", len(labels) - 1)

    def __getstate__(self):
        return {"counts": self.counts, "weights": self.weights,
                "suffix_model": self.suffix_model, "config": self.config}

    def __setstate__(self, state):
        for k, v in state.items():
            object.__setattr__(self, k, v)
        self.__post_init__()

    @property
    def capitalization_enabled(self) -> bool:
        return self.config.capitalization

    @property
    def tagset(self) -> list[str]:
        return self.counts.tags

    def prepared(self, backend=None):
        backend = backend or kernel
        table = self._prepared.get(backend)
        if table is None:
            table = backend.prepare(self.trans)
            self._prepared[backend] = table
        return table

    def state(self, tag: str, capitalized: bool) -> int:
        """Contextual state id for a tag on a word of the given capitalization.

        With capitalization on, a (tag, flag) pair that never occurred in
        training falls back to the tag's other flag.
        """
        if not self.config.capitalization:
            return self.index[tag]
        idx = self.index.get(composite(tag, capitalized))
        if idx is None:
            idx = self.index[composite(tag, not capitalized)]
        return idx

    def with_config(self, **changes) -> "TaggerModel":
        """Same counts and weights with decode-time settings changed."""
        return TaggerModel(self.counts, self.weights, self.suffix_model, replace(self.config, **changes))

    def lattice_entry(self, word: str):
        """``(tags, state_ids, log_scores, known)`` for one input word."""
        cap = is_capitalized(word) and self.config.capitalization
        key = (word, cap)
        hit = self._lex_cache.get(key)
        if hit is not None:
            return hit
        scored, known = _scored_candidates(self, word)
        tags = tuple(t for t, _ in scored)
        entry = (tags, tuple(self.state(t, cap) for t in tags),
                 tuple(math.log(s) for _, s in scored), known)
        if known or len(self._lex_cache) < 200_000:
            self._lex_cache[key] = entry
        return entry

    def is_known(self, word: str) -> bool:
        return word in self.counts.lexical


def _transition_table(counts: NGramCounts, weights: InterpolationWeights,
                      labels: Sequence[str]) -> np.ndarray:
    K = len(labels)
    idx = {s: i for i, s in enumerate(labels)}
    f1 = np.zeros(K)
    for s, n in counts.unigrams.items():
        f1[idx[s]] = n
    uni = f1 / counts.total
    uni[idx[BOS]] = uni[idx[EOS]] = 0.0
    f2 = np.zeros((K, K))
    for (a, b), n in counts.bigrams.items():
        f2[idx[a], idx[b]] = n
    f3 = np.zeros((K, K, K))
    for (a, b, c), n in counts.trigrams.items():
        f3[idx[a], idx[b], idx[c]] = n
    with np.errstate(divide="ignore", invalid="ignore"):
        bi = np.where(f1[:, None] > 0, f2 / f1[:, None], 0.0)
        tri = np.where(f2[:, :, None] > 0, f3 / f2[:, :, None], 0.0)
        p = weights.lambda1 * uni[None, None, :] + weights.lambda2 * bi[None, :, :] + weights.lambda3 * tri
        return np.log(p)


def assemble(corpus: TaggedCorpus, config: TaggerConfig | None = None) -> TaggerModel:
    """Train a model: counts, interpolation weights and suffix tries."""
    config = config or TaggerConfig()
    if corpus.token_count == 0:
        raise ModelError("cannot train on an empty corpus")
    counts = count(corpus, capitalization=config.capitalization)
    weights = deleted_interpolation(counts, config.tie_break)
    suffix_model = build(counts, config.max_suffix, config.suffix_freq_threshold, config.theta_mode)
    return TaggerModel(counts, weights, suffix_model, config)


def _scored_candidates(model: TaggerModel, word: str):
    counts = model.counts
    lex = counts.lexical.get(word)
    if lex is not None:
        tc = counts.tag_counts
        return [(t, lex[t] / tc[t]) for t in sorted(lex)], True
    sm = model.suffix_model
    dist = sm.distribution_array(word)
    scored = [(t, p / prior) for t, p, prior in zip(sm.tags, dist, sm._root) if p > 0 and prior > 0]
    limit = model.config.unknown_candidates
    if limit and len(scored) > limit:
        scored.sort(key=lambda ts: (-ts[1], ts[0]))
        scored = sorted(scored[:limit])
    return scored, False


def candidates(model: TaggerModel, word: str) -> list[tuple[str, float]]:
    """Possible tags of ``word`` with their emission scores, sorted by tag.

    Lexicon words get P(word | tag); other words get suffix-based scores
    proportional to P(suffix | tag).
    """
    return _scored_candidates(model, word)[0]


def _lattice(model: TaggerModel, words: Sequence[str]) -> list:
    """One ``(tags, state_ids, log_scores, known)`` column per word."""
    caps = model.config.capitalization
    cache = model._lex_cache
    cols = []
    for w in words:
        col = cache.get((w, caps and w[:1].isupper()))
        cols.append(col if col is not None else model.lattice_entry(w))
    return cols


def viterbi(model: TaggerModel, words: Sequence[str], beam: float | None = None,
            backend=None) -> TaggedOutput:
    """Most probable tag sequence, closing with the end-of-sentence transition.

    ``beam`` overrides the configured pruning ratio; 0 or ``inf`` gives the
    exact search.
    """
    if not words:
        raise ValueError("cannot tag an empty sentence")
    backend = backend or kernel
    cols = _lattice(model, words)
    log_beam = model.config.log_beam if beam is None else _log_beam(beam)
    choice, best = backend.viterbi(model.prepared(backend), model.K, cols, model.bos, model.eos, log_beam)
    tags = tuple([col[0][j] for col, j in zip(cols, choice)])
    return TaggedOutput(tuple(words), tags, tuple([col[3] for col in cols]), best)


def reliability(model: TaggerModel, words: Sequence[str], output: TaggedOutput,
                backend=None) -> tuple[float, ...]:
    """Per-token ratio of the assigned tag's best path to the best alternative.

    Both paths are maximized over the whole unpruned lattice. A token with a
    single candidate tag gets ``inf``; finite ratios are capped at the largest
    float so ``inf`` stays reserved for that case.
    """
    backend = backend or kernel
    cols = _lattice(model, words)
    scores, _ = backend.max_marginals(model.prepared(backend), model.K, cols, model.bos, model.eos)
    out = []
    lo = 0
    for (tags, *_), assigned in zip(cols, output.tags):
        hi = lo + len(tags)
        if len(tags) == 1:
            out.append(math.inf)
        else:
            j = tags.index(assigned)
            alt = max(s for k, s in enumerate(scores[lo:hi]) if k != j)
            out.append(_quotient(scores[lo + j], alt))
        lo = hi
    return tuple(out)


def _quotient(num: float, alt: float) -> float:
    if alt == -math.inf:
        return 1.0 if num == -math.inf else _FLOAT_MAX
    diff = num - alt
    if diff > 709.0:
        return _FLOAT_MAX
    return math.exp(diff)


def tag(model: TaggerModel, words: Sequence[str], beam: float | None = None,
        with_reliability: bool = False) -> TaggedOutput:
    out = viterbi(model, words, beam)
    if with_reliability:
        out = replace(out, quotients=reliability(model, words, out))
    return out


def tag_sentences(model: TaggerModel, sentences: Sequence[Sequence[str]], beam: float | None = None,
                  with_reliability: bool = False, jobs: int = 1) -> list[TaggedOutput]:
    """Tag many sentences; with ``jobs > 1`` chunks run in worker processes.

    Output order always follows input order.
    """
    if jobs <= 1 or len(sentences) < 2 * jobs:
        return [tag(model, s, beam, with_reliability) for s in sentences]
    from concurrent.futures import ProcessPoolExecutor
    size = math.ceil(len(sentences) / jobs)
    chunks = [sentences[i:i + size] for i in range(0, len(sentences), size)]
    with ProcessPoolExecutor(jobs) as pool:
        parts = pool.map(_tag_chunk, [(model, c, beam, with_reliability) for c in chunks])
        return [o for part in parts for o in part]


def _tag_chunk(args):
    model, chunk, beam, rel = args
    return [tag(model, s, beam, rel) for s in chunk]
