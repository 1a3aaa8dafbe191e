"""Tagged and untagged corpus handling.

The on-disk format is one token per line, ``token<TAB>tag``, with blank
lines separating sentences.
"""
from __future__ import annotations

import random
import sys
from dataclasses import dataclass, field
from typing import Iterable

BOS = "<BOS>"
EOS = "<EOS>"
RESERVED_TAGS = frozenset((BOS, EOS))
SENTENCE_END_TOKENS = frozenset((".", "!", "?", ";"))


class CorpusError(ValueError):
    """Raised for malformed corpus input or impossible partitions."""

    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    tag: str | None = None


Sentence = tuple  # tuple[Token, ...], never empty


@dataclass(frozen=True)
class TaggedCorpus:
    sentences: tuple[Sentence, ...] = ()
    tagset: frozenset[str] = field(init=False)
    token_count: int = field(init=False)

    def __post_init__(self):
        tags = set()
        n = 0
        for sent in self.sentences:
            if not sent:
                raise CorpusError("empty sentence")
            n += len(sent)
            tags.update(tok.tag for tok in sent)
        object.__setattr__(self, "tagset", frozenset(tags))
        object.__setattr__(self, "token_count", n)

    def __len__(self) -> int:
        return len(self.sentences)

    def __iter__(self):
        return iter(self.sentences)

    @classmethod
    def from_pairs(cls, sentences: Iterable[Iterable[tuple[str, str]]]) -> "TaggedCorpus":
        return cls(tuple(tuple(Token(w, t) for w, t in s) for s in sentences))

    def words(self) -> list[list[str]]:
        return [[tok.surface for tok in s] for s in self.sentences]

    def tags(self) -> list[list[str]]:
        return [[tok.tag for tok in s] for s in self.sentences]

    def subset(self, indices: Iterable[int]) -> "TaggedCorpus":
        return TaggedCorpus(tuple(self.sentences[i] for i in indices))


def _has_space(s: str) -> bool:
    return any(ch.isspace() for ch in s)


def parse_tagged(text: str) -> TaggedCorpus:
    """Parse ``token<TAB>tag`` lines into a corpus.

    Blank lines end sentences; a trailing sentence without a blank line is
    kept. Raises :class:`CorpusError` with the offending line number.
    """
    sentences = []
    current: list[Token] = []
    intern = sys.intern
    for lineno, raw in enumerate(text.split("\n"), 1):
        line = raw.rstrip("\r")
        if not line.strip():
            if current:
                sentences.append(tuple(current))
                current = []
            continue
        fields = line.split("\t")
        if len(fields) != 2:
            raise CorpusError(f"expected 'token<TAB>tag', got {len(fields)} field(s)", lineno)
        word, tag = fields
        if not word or not tag or _has_space(word) or _has_space(tag):
            raise CorpusError("empty field or embedded whitespace", lineno)
        if tag in RESERVED_TAGS:
            raise CorpusError(f"reserved tag {tag!r}", lineno)
        current.append(Token(word, intern(tag)))
    if current:
        sentences.append(tuple(current))
    return TaggedCorpus(tuple(sentences))


def read_tagged(path) -> TaggedCorpus:
    with open(path, encoding="utf-8") as f:
        return parse_tagged(f.read())


def serialize_tagged(corpus: TaggedCorpus) -> str:
    blocks = ["".join(f"{tok.surface}\t{tok.tag}\n" for tok in sent) for sent in corpus.sentences]
    return "\n".join(blocks)


def split_untagged(text: str) -> list[list[str]]:
    """Split a whitespace-separated token stream into sentences.

    A boundary follows every token that is exactly ``.``, ``!``, ``?`` or ``;``.
    """
    sentences = []
    current: list[str] = []
    for tok in text.split():
        current.append(tok)
        if tok in SENTENCE_END_TOKENS:
            sentences.append(current)
            current = []
    if current:
        sentences.append(current)
    return sentences


def read_untagged(text: str) -> list[list[str]]:
    """Read tagger input.

    Input containing blank lines is taken as pre-split (one token per line or
    several per line, blank line between sentences). Otherwise the punctuation
    rule of :func:`split_untagged` inserts the boundaries.
    """
    body = text.split("\n")
    while body and not body[-1].strip():
        body.pop()
    while body and not body[0].strip():
        body.pop(0)
    if not any(not ln.strip() for ln in body):
        return split_untagged(text)
    sentences = []
    current: list[str] = []
    for ln in body:
        toks = ln.split()
        if not toks:
            if current:
                sentences.append(current)
                current = []
            continue
        current.extend(toks)
    if current:
        sentences.append(current)
    return sentences


def fold_bounds(n: int, fold: int, k: int) -> tuple[int, int]:
    # balanced blocks: sizes differ by at most one and the first n % k folds
    # take the extra sentence, so no fold is ever empty (plain ceil-sized
    # blocks can leave the last folds with nothing)
    base, extra = divmod(n, k)
    start = fold * base + min(fold, extra)
    return start, start + base + (1 if fold < extra else 0)


def partition_contiguous(corpus: TaggedCorpus, fold: int, k: int) -> tuple[TaggedCorpus, TaggedCorpus]:
    """Return ``(train, test)`` where test is the ``fold``-th contiguous block."""
    n = len(corpus)
    if k < 1:
        raise CorpusError(f"k must be positive, got {k}")
    if not 0 <= fold < k:
        raise CorpusError(f"fold {fold} out of range for k={k}")
    if k > n:
        raise CorpusError(f"k={k} exceeds sentence count {n}")
    lo, hi = fold_bounds(n, fold, k)
    sents = corpus.sentences
    return TaggedCorpus(sents[:lo] + sents[hi:]), TaggedCorpus(sents[lo:hi])


def sample_disjoint(corpus: TaggedCorpus, train_tokens: int, test_tokens: int,
                    seed: int) -> tuple[TaggedCorpus, TaggedCorpus]:
    """Randomly draw disjoint train/test corpora by whole sentences.

    Sentences are drawn without replacement until each side first meets or
    exceeds its token budget. Both sides keep the corpus order.
    """
    if train_tokens < 0 or test_tokens < 0:
        raise CorpusError("token budgets must be non-negative")
    if train_tokens + test_tokens > corpus.token_count:
        raise CorpusError(
            f"budgets {train_tokens}+{test_tokens} exceed corpus size {corpus.token_count}")
    order = list(range(len(corpus)))
    random.Random(seed).shuffle(order)
    it = iter(order)

    def draw(budget: int) -> list[int]:
        picked, n = [], 0
        while n < budget:
            try:
                i = next(it)
            except StopIteration:
                raise CorpusError("corpus exhausted before budgets were met") from None
            picked.append(i)
            n += len(corpus.sentences[i])
        return sorted(picked)

    train = draw(train_tokens)
    test = draw(test_tokens)
    return corpus.subset(train), corpus.subset(test)
