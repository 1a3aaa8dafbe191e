"""Single-file text serialization of trained models.

Layout::

    tnt-model 1
    #SECTION config          key<TAB>value
    #SECTION lexicon         word<TAB>total<TAB>tag<TAB>count[<TAB>tag<TAB>count]...
    #SECTION ngrams          nested unigram / bigram / trigram counts
    #SECTION suffix-lower    suffix<TAB>tag<TAB>count
    #SECTION suffix-upper    suffix<TAB>tag<TAB>count
    #END sections=5 sha256=<hex digest of everything above this line>

Counts are stored, probabilities are recomputed on load. Every section is
sorted, so a given model always serializes to the same bytes.
"""
from __future__ import annotations

import hashlib
import os
from typing import BinaryIO

from .decoder import TaggerConfig, TaggerModel
from .ngrams import InterpolationWeights, ModelError, NGramCounts, format_ngrams, parse_ngrams
from .suffix import SuffixModel, SuffixTrie, unigram_distribution

MAGIC = "tnt-model"
VERSION = 1
SECTIONS = ("config", "lexicon", "ngrams", "suffix-lower", "suffix-upper")


class ModelFileError(ModelError):
    def __init__(self, message: str, lineno: int | None = None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


def _num(x: float) -> str:
    return format(x, ".17g")


def _escape(suffix: str) -> str:
    if not suffix:
        return "\\e"
    return suffix.replace("\\", "\\\\")


def _unescape(field: str) -> str:
    if field == "\\e":
        return ""
    return field.replace("\\\\", "\\")


def _config_lines(model: TaggerModel) -> list[str]:
    cfg = model.config
    w = model.weights
    items = {
        "beam_theta": _num(cfg.beam_theta),
        "capitalization": str(int(cfg.capitalization)),
        "lambda1": _num(w.lambda1),
        "lambda2": _num(w.lambda2),
        "lambda3": _num(w.lambda3),
        "max_suffix": str(cfg.max_suffix),
        "sentences": str(model.counts.sentences),
        "suffix_freq_threshold": str(cfg.suffix_freq_threshold),
        "tagset": " ".join(model.counts.tags),
        "theta": _num(model.suffix_model.theta),
        "theta_mode": cfg.theta_mode,
        "tie_break": cfg.tie_break,
        "tokens": str(model.counts.total),
        "unknown_candidates": str(cfg.unknown_candidates),
    }
    return [f"{k}\t{v}" for k, v in sorted(items.items())]


def dumps(model: TaggerModel) -> bytes:
    counts = model.counts
    out = [f"{MAGIC} {VERSION}", "#SECTION config"]
    out += _config_lines(model)
    out.append("#SECTION lexicon")
    for word in sorted(counts.lexical):
        tags = counts.lexical[word]
        pairs = "\t".join(f"{t}\t{tags[t]}" for t in sorted(tags))
        out.append(f"{word}\t{counts.word_totals[word]}\t{pairs}")
    out.append("#SECTION ngrams")
    out.extend(format_ngrams(counts))
    for name, trie in (("suffix-lower", model.suffix_model.lower_trie),
                       ("suffix-upper", model.suffix_model.upper_trie)):
        out.append(f"#SECTION {name}")
        out.extend(f"{_escape(s)}\t{t}\t{n}" for s, t, n in trie.items())
    body = ("\n".join(out) + "\n").encode("utf-8")
    digest = hashlib.sha256(body).hexdigest()
    return body + f"#END sections={len(SECTIONS)} sha256={digest}\n".encode("ascii")


def save(model: TaggerModel, destination: str | os.PathLike | BinaryIO) -> int:
    """Write ``model``; returns the number of bytes written."""
    data = dumps(model)
    if hasattr(destination, "write"):
        destination.write(data)
    else:
        try:
            with open(destination, "wb") as f:
                f.write(data)
        except OSError as exc:
            raise ModelFileError(f"cannot write model: {exc}") from exc
    return len(data)


def load(source: str | os.PathLike | BinaryIO | bytes) -> TaggerModel:
    if isinstance(source, bytes):
        data = source
    elif hasattr(source, "read"):
        data = source.read()
    else:
        try:
            with open(source, "rb") as f:
                data = f.read()
        except OSError as exc:
            raise ModelFileError(f"cannot read model: {exc}") from exc
    return loads(data)


def _split_sections(data: bytes):
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ModelFileError(f"not UTF-8: {exc}") from None
    lines = text.split("\n")
    if not lines or not lines[0].startswith(MAGIC + " "):
        raise ModelFileError("missing 'tnt-model' header", 1)
    version = lines[0][len(MAGIC) + 1:]
    if version != str(VERSION):
        raise ModelFileError(f"unsupported model format version {version!r}", 1)

    end = None
    for i, line in enumerate(lines):
        if line.startswith("#END ") and "\t" not in line:
            end = i
            break
    if end is None:
        raise ModelFileError("missing #END trailer (truncated file?)")
    if any(lines[end + 1:]) or len(lines) != end + 2:
        raise ModelFileError("content after #END trailer", end + 2)
    body = ("\n".join(lines[:end]) + "\n").encode("utf-8")
    trailer = dict(kv.split("=", 1) for kv in lines[end][5:].split() if "=" in kv)
    if trailer.get("sha256") != hashlib.sha256(body).hexdigest():
        raise ModelFileError("checksum mismatch", end + 1)

    sections: dict[str, list[tuple[int, str]]] = {}
    current = None
    for i in range(1, end):
        line = lines[i]
        if line.startswith("#SECTION ") and "\t" not in line:
            current = line[len("#SECTION "):]
            if current in sections:
                raise ModelFileError(f"duplicate section {current!r}", i + 1)
            sections[current] = []
        elif current is None:
            raise ModelFileError("data before first section", i + 1)
        else:
            sections[current].append((i + 1, line))
    if tuple(sections) != SECTIONS or trailer.get("sections") != str(len(SECTIONS)):
        raise ModelFileError(f"expected sections {SECTIONS}, found {tuple(sections)}")
    return sections


def loads(data: bytes) -> TaggerModel:
    sections = _split_sections(data)

    cfg: dict[str, str] = {}
    for lineno, line in sections["config"]:
        k, sep, v = line.partition("\t")
        if not sep:
            raise ModelFileError("malformed config line", lineno)
        cfg[k] = v
    try:
        config = TaggerConfig(
            beam_theta=float(cfg["beam_theta"]),
            max_suffix=int(cfg["max_suffix"]),
            suffix_freq_threshold=int(cfg["suffix_freq_threshold"]),
            tie_break=cfg["tie_break"],
            theta_mode=cfg["theta_mode"],
            capitalization=cfg["capitalization"] == "1",
            unknown_candidates=int(cfg["unknown_candidates"]),
        )
        weights = InterpolationWeights(float(cfg["lambda1"]), float(cfg["lambda2"]), float(cfg["lambda3"]))
        theta = float(cfg["theta"])
        total = int(cfg["tokens"])
        n_sent = int(cfg["sentences"])
    except (KeyError, ValueError) as exc:
        raise ModelFileError(f"bad config section: {exc}") from None

    lexical: dict[str, dict[str, int]] = {}
    word_totals: dict[str, int] = {}
    tag_counts: dict[str, int] = {}
    for lineno, line in sections["lexicon"]:
        fields = line.split("\t")
        if len(fields) < 4 or len(fields) % 2:
            raise ModelFileError("malformed lexicon line", lineno)
        try:
            tags = {fields[j]: int(fields[j + 1]) for j in range(2, len(fields), 2)}
            word_totals[fields[0]] = int(fields[1])
        except ValueError:
            raise ModelFileError("malformed lexicon count", lineno) from None
        if sum(tags.values()) != word_totals[fields[0]]:
            raise ModelFileError("lexicon total does not match tag counts", lineno)
        lexical[fields[0]] = tags
        for t, n in tags.items():
            tag_counts[t] = tag_counts.get(t, 0) + n
    if sum(tag_counts.values()) != total:
        raise ModelFileError("token count in header does not match lexicon")

    uni, bi, tri = parse_ngrams(sections["ngrams"])
    counts = NGramCounts(uni, bi, tri, lexical, word_totals, tag_counts, total, n_sent)

    tries = []
    for name in ("suffix-lower", "suffix-upper"):
        trie = SuffixTrie(config.max_suffix)
        for lineno, line in sections[name]:
            fields = line.split("\t")
            try:
                if len(fields) != 3:
                    raise ValueError
                trie.add_count(_unescape(fields[0]), fields[1], int(fields[2]))
            except ValueError:
                raise ModelFileError("malformed suffix line", lineno) from None
        tries.append(trie)
    suffix_model = SuffixModel(tries[0], tries[1], theta, unigram_distribution(counts),
                               config.max_suffix, config.suffix_freq_threshold)
    return TaggerModel(counts, weights, suffix_model, config)
