"""Trigram part-of-speech tagger with suffix-based unknown-word guessing."""
from .corpus import TaggedCorpus, Token, parse_tagged, read_tagged, split_untagged
from .decoder import (BACKEND, TaggedOutput, TaggerConfig, TaggerModel, assemble, candidates,
                      reliability, tag, tag_sentences, viterbi)
from .ngrams import InterpolationWeights, NGramCounts, count, deleted_interpolation

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "InterpolationWeights", "NGramCounts", "TaggedCorpus", "TaggedOutput",
    "TaggerConfig", "TaggerModel", "Token", "assemble", "candidates", "count",
    "deleted_interpolation", "parse_tagged", "read_tagged", "reliability", "split_untagged",
    "tag", "tag_sentences", "viterbi",
]
