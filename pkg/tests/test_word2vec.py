import numpy as np
import pytest

from ratebench.errors import DataError
from ratebench.word2vec import (
    W2VConfig,
    doc_embed,
    load_word_vectors,
    save_word_vectors,
    train_word2vec,
)

SMALL = W2VConfig(dim=16, window=2, negatives=3, epochs=3, min_count=1, seed=7)


def _paired_corpus():
    # "good"/"great" share contexts; "bolt"/"nut" live in a disjoint topic
    rng = np.random.default_rng(11)
    docs = []
    for _ in range(150):
        pos = rng.choice(["good", "great"])
        docs.append(f"the {pos} phone works {pos} fine")
        docs.append(f"a {rng.choice(['bolt', 'nut'])} wrench torque steel")
    return docs


def _cosine(a, b):
    return float(a @ b / (np.linalg.norm(a) * np.linalg.norm(b)))


class TestTraining:
    def test_shared_context_words_end_up_closer(self):
        wv = train_word2vec(_paired_corpus(), W2VConfig(dim=32, window=2, negatives=5, epochs=5, min_count=1, seed=7))
        good, great, bolt = wv.vector("good"), wv.vector("great"), wv.vector("bolt")
        assert _cosine(good, great) > _cosine(good, bolt)

    def test_vector_dimension(self):
        wv = train_word2vec(["a b c d e f g h"], SMALL)
        assert wv.dimension == 16
        assert all(wv.matrix[i].shape == (16,) for i in range(len(wv.index)))

    def test_same_seed_identical(self):
        docs = _paired_corpus()[:40]
        a = train_word2vec(docs, SMALL)
        b = train_word2vec(docs, SMALL)
        assert a.index == b.index
        assert np.array_equal(a.matrix, b.matrix)

    def test_different_seed_differs(self):
        docs = _paired_corpus()[:40]
        a = train_word2vec(docs, SMALL)
        b = train_word2vec(docs, W2VConfig(**{**SMALL.__dict__, "seed": 8}))
        assert not np.array_equal(a.matrix, b.matrix)

    def test_loss_improves_over_training(self):
        wv = train_word2vec(_paired_corpus(), SMALL)
        assert wv.epoch_losses[-1] < wv.epoch_losses[0]

    def test_empty_corpus_errors(self):
        with pytest.raises(DataError):
            train_word2vec([], SMALL)
        with pytest.raises(DataError):
            train_word2vec(["", ""], SMALL)

    def test_vectors_finite(self):
        wv = train_word2vec(_paired_corpus()[:60], SMALL)
        assert np.all(np.isfinite(wv.matrix))


@pytest.fixture(scope="module")
def wv():
    return train_word2vec(_paired_corpus()[:60], SMALL)


class TestDocEmbed:

    def test_single_known_token(self, wv):
        assert np.array_equal(doc_embed("good", wv), wv.vector("good"))

    def test_duplicate_tokens_mean_invariant(self, wv):
        assert np.allclose(doc_embed("good good", wv), wv.vector("good"))

    def test_all_oov_gives_zero(self, wv):
        vec = doc_embed("zzz qqq", wv)
        assert vec.shape == (16,)
        assert np.all(vec == 0.0)


class TestSerialization:
    def test_text_roundtrip_exact(self, tmp_path):
        wv = train_word2vec(_paired_corpus()[:60], SMALL)
        path = tmp_path / "vectors.txt"
        save_word_vectors(wv, path)
        header = path.read_text("utf-8").splitlines()[0]
        assert header == f"{len(wv.index)} {wv.dimension}"
        back = load_word_vectors(path)
        assert back.index == wv.index
        assert np.array_equal(back.matrix, wv.matrix)

    def test_malformed_header(self, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("oops\n")
        with pytest.raises(DataError):
            load_word_vectors(path)
