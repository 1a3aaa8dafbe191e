import hashlib
import io

import pytest

from tntagger import store
from tntagger.corpus import TaggedCorpus
from tntagger.decoder import TaggerConfig, assemble, viterbi
from tntagger.ngrams import ModelError
from tntagger.store import ModelFileError


@pytest.fixture(scope="module")
def sample_model(sample_corpus):
    return assemble(sample_corpus, TaggerConfig(tie_break="lower", theta_mode="sqrt", max_suffix=7))


def test_fixture_bytes_deterministic(fixture_a, tmp_path):
    m = assemble(fixture_a)
    a, b = tmp_path / "a.tnt", tmp_path / "b.tnt"
    n = store.save(m, a)
    store.save(assemble(fixture_a), b)
    assert a.read_bytes() == b.read_bytes()
    assert n == len(a.read_bytes())
    assert a.read_bytes().startswith(b"tnt-model 1\n")


def test_header_lambdas(fixture_a):
    text = store.dumps(assemble(fixture_a)).decode()
    cfg = dict(line.split("\t") for line in text.split("#SECTION config\n")[1].split("#SECTION")[0].splitlines())
    assert sum(float(cfg[k]) for k in ("lambda1", "lambda2", "lambda3")) == 1.0


def test_round_trip_fixture(fixture_a):
    m = assemble(fixture_a)
    m2 = store.loads(store.dumps(m))
    for words in fixture_a.words() + [["the", "blorks", "."]]:
        assert viterbi(m2, words) == viterbi(m, words)


def test_round_trip_everything(sample_model, sample_corpus):
    data = store.dumps(sample_model)
    m2 = store.load(io.BytesIO(data))
    assert m2.counts == sample_model.counts
    assert m2.weights == sample_model.weights
    assert m2.suffix_model == sample_model.suffix_model
    assert m2.config == sample_model.config
    assert (m2.trans == sample_model.trans).all()
    assert store.dumps(m2) == data
    for words in sample_corpus.words()[:100]:
        assert viterbi(m2, words) == viterbi(sample_model, words)


def test_odd_suffix_characters_survive():
    sents = [[("a\\b", "X"), ("\\", "Y"), ("x", "X"), ("Émile", "Y")]]
    m = assemble(TaggedCorpus.from_pairs(sents))
    m2 = store.loads(store.dumps(m))
    assert m2.suffix_model == m.suffix_model
    assert b"\\e\t" in store.dumps(m)


def test_truncated(sample_model):
    data = store.dumps(sample_model)
    with pytest.raises(ModelFileError, match="#END"):
        store.loads(data[: len(data) // 2])


def test_checksum(sample_model):
    data = bytearray(store.dumps(sample_model))
    i = data.index(b"#SECTION lexicon") + 20
    data[i:i + 1] = b"Z" if data[i:i + 1] != b"Z" else b"Y"
    with pytest.raises(ModelFileError, match="checksum"):
        store.loads(bytes(data))


def test_unknown_version(fixture_a):
    data = store.dumps(assemble(fixture_a)).replace(b"tnt-model 1", b"tnt-model 9", 1)
    with pytest.raises(ModelFileError, match="version"):
        store.loads(data)


def test_not_a_model():
    with pytest.raises(ModelFileError):
        store.loads(b"hello\n")
    with pytest.raises(ModelError):
        store.loads(b"\xff\xfe")


def _rebuild(body: str) -> bytes:
    raw = body.encode()
    return raw + f"#END sections=5 sha256={hashlib.sha256(raw).hexdigest()}\n".encode()


def test_malformed_line_reports_number(fixture_a):
    text = store.dumps(assemble(fixture_a)).decode()
    body = text[:text.index("#END")]
    lines = body.split("\n")
    j = lines.index("#SECTION lexicon") + 1
    lines[j] = "dog\t1\tNN"
    with pytest.raises(ModelFileError, match=f"line {j + 1}"):
        store.loads(_rebuild("\n".join(lines)))


def test_missing_section(fixture_a):
    text = store.dumps(assemble(fixture_a)).decode()
    body = text[:text.index("#SECTION suffix-upper")]
    with pytest.raises(ModelFileError, match="sections"):
        store.loads(_rebuild(body))


def test_unwritable_destination(fixture_a, tmp_path):
    with pytest.raises(ModelFileError):
        store.save(assemble(fixture_a), tmp_path / "missing" / "m.tnt")


def test_missing_file(tmp_path):
    with pytest.raises(ModelFileError):
        store.load(tmp_path / "nope.tnt")
