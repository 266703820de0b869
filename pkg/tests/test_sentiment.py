import csv

import pytest
from hypothesis import given, strategies as st

from ratebench.corpus import Dataset, Review
from ratebench.errors import ConfigError, DataError
from ratebench.sentiment import (
    SentimentLexicon,
    compound_score,
    join_scores,
    load_external_scores,
    load_lexicon,
    rescale_to_stars,
    score_dataset,
    star_class,
)

from .conftest import SENTIMENT_GOLDEN


class TestCompoundScore:
    def test_empty_text(self, lexicon):
        assert compound_score("", lexicon) == 0.0

    def test_no_lexicon_tokens(self, lexicon):
        assert compound_score("the box arrived on a tuesday", lexicon) == 0.0

    def test_golden_file(self, lexicon):
        with open(SENTIMENT_GOLDEN, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) >= 50
        for row in rows:
            got = compound_score(row["text"], lexicon)
            assert got == pytest.approx(float(row["compound"]), abs=1e-4), row["text"]

    def test_negation_flips(self, lexicon):
        assert compound_score("not good", lexicon) < compound_score("good", lexicon)
        assert compound_score("not good", lexicon) < 0.0

    def test_booster_amplifies(self, lexicon):
        assert compound_score("very good", lexicon) > compound_score("good", lexicon)

    def test_exclamations_cap_at_three(self, lexicon):
        one = compound_score("good!", lexicon)
        three = compound_score("good!!!", lexicon)
        four = compound_score("good!!!!", lexicon)
        assert one < three
        assert three == four

    def test_but_shifts_weight_to_second_clause(self, lexicon):
        assert compound_score("good but awful", lexicon) < 0.0
        assert compound_score("awful but good", lexicon) > 0.0

    @given(
        st.lists(
            st.sampled_from("good bad great terrible not very phone box ok".split()),
            min_size=1,
            max_size=12,
        )
    )
    def test_output_strictly_inside_unit_interval(self, tokens):
        value = compound_score(" ".join(tokens), load_lexicon())
        assert -1.0 < value < 1.0


class TestRescale:
    def test_endpoints_and_midpoint(self):
        assert rescale_to_stars(-1.0) == 1.0
        assert rescale_to_stars(0.0) == 3.0
        assert rescale_to_stars(1.0) == 5.0

    def test_affine_value(self):
        assert rescale_to_stars(0.3) == pytest.approx(3.6, abs=1e-12)
        assert star_class(3.6) == 4

    def test_round_half_up(self):
        assert star_class(3.5) == 4
        assert star_class(2.49) == 2
        assert star_class(5.0) == 5

    def test_out_of_range_rejected(self):
        with pytest.raises(ConfigError):
            rescale_to_stars(1.2)

    @given(st.floats(min_value=-1.0, max_value=1.0, allow_nan=False))
    def test_monotone_onto(self, c):
        stars = rescale_to_stars(c)
        assert 1.0 <= stars <= 5.0
        if c < 1.0:
            assert rescale_to_stars(min(1.0, c + 0.1)) >= stars


def _dataset(n=3):
    return Dataset(
        name="d",
        reviews=tuple(Review(id=f"r{i}", text="good phone", rating=4) for i in range(n)),
    )


class TestExternalScores:
    def _write(self, tmp_path, lines):
        path = tmp_path / "scores.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        return path

    def test_three_valid_rows(self, tmp_path):
        path = self._write(tmp_path, ["review_id,stars,confidence", "r0,4,0.9", "r1,5,0.8", "r2,1,0.7"])
        scores = load_external_scores(path)
        assert scores.stars == {"r0": 4, "r1": 5, "r2": 1}

    def test_duplicate_id_named(self, tmp_path):
        path = self._write(tmp_path, ["review_id,stars", "r0,4", "r0,5"])
        with pytest.raises(DataError, match="r0"):
            load_external_scores(path)

    def test_star_out_of_range_with_line(self, tmp_path):
        path = self._write(tmp_path, ["review_id,stars", "r0,4", "r1,6"])
        with pytest.raises(DataError, match=":3"):
            load_external_scores(path)

    def test_missing_header(self, tmp_path):
        path = self._write(tmp_path, ["r0,4"])
        with pytest.raises(DataError, match="header"):
            load_external_scores(path)


class TestJoinScores:
    def test_full_coverage(self, tmp_path):
        ds = _dataset(3)
        path = tmp_path / "s.csv"
        path.write_text("review_id,stars\nr0,1\nr1,3\nr2,5\n")
        out = join_scores(ds, load_external_scores(path))
        assert [s.review_id for s in out] == ["r0", "r1", "r2"]
        assert [s.stars_real for s in out] == [1.0, 3.0, 5.0]
        assert all(-1.0 <= s.compound <= 1.0 for s in out)

    def test_missing_id_listed(self, tmp_path):
        ds = _dataset(3)
        path = tmp_path / "s.csv"
        path.write_text("review_id,stars\nr0,1\nr1,3\n")
        with pytest.raises(DataError, match="r2"):
            join_scores(ds, load_external_scores(path))

    def test_empty_dataset(self, tmp_path):
        path = tmp_path / "s.csv"
        path.write_text("review_id,stars\nr0,1\n")
        out = join_scores(Dataset(name="d", reviews=()), load_external_scores(path))
        assert out == []


class TestScoreDataset:
    def test_order_and_source(self, lexicon):
        ds = Dataset(
            name="d",
            reviews=(
                Review(id="a", text="great product", rating=5),
                Review(id="b", text="terrible product", rating=1),
            ),
        )
        scores = score_dataset(ds, lexicon)
        assert [s.review_id for s in scores] == ["a", "b"]
        assert scores[0].compound > 0 > scores[1].compound
        assert all(s.source == "rule_based" for s in scores)


class TestLexiconLoading:
    def test_bad_valence_line_reported(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("good\t1.9\nbad\toops\n")
        with pytest.raises(DataError, match=":2"):
            load_lexicon(path)

    def test_custom_lexicon(self, tmp_path):
        path = tmp_path / "lex.txt"
        path.write_text("sweet\t2.0\n")
        lex = load_lexicon(path)
        assert compound_score("sweet", lex) > 0
        assert isinstance(lex, SentimentLexicon)
