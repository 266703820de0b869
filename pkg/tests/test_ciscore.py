import json

import pytest
from hypothesis import given, strategies as st

from ratebench import ciscore
from ratebench.ciscore import (
    InterpretabilityTable,
    PipelineSpec,
    aggregate_rankings,
    composite_ci,
    embedding_score,
    enumerate_pipelines,
    interpretability_score,
    load_survey,
    load_table,
    parse_pipeline,
)
from ratebench.errors import ConfigError, DataError

SURVEY_PATH = "src/ratebench/data/expert_survey.csv"


class TestAggregateRankings:
    def test_mean_of_two(self):
        survey = ciscore.ExpertSurvey(
            rows=(
                ciscore.SurveyRow("e1", "VADER", "simplicity", 1),
                ciscore.SurveyRow("e2", "VADER", "simplicity", 2),
                ciscore.SurveyRow("e1", "VADER", "transparency", 2),
                ciscore.SurveyRow("e1", "VADER", "explainability", 2),
            )
        )
        assert aggregate_rankings(survey)["VADER"]["simplicity"] == 1.5

    def test_single_expert(self):
        survey = ciscore.ExpertSurvey(
            rows=tuple(ciscore.SurveyRow("e1", "NB", c, 3) for c in ciscore.CRITERIA)
        )
        assert aggregate_rankings(survey)["NB"] == {c: 3.0 for c in ciscore.CRITERIA}

    def test_missing_cell_named(self):
        survey = ciscore.ExpertSurvey(
            rows=(ciscore.SurveyRow("e1", "NB", "simplicity", 3),)
        )
        with pytest.raises(DataError, match=r"NB.*transparency"):
            aggregate_rankings(survey)

    def test_bundled_survey_reproduces_table(self, table):
        survey = load_survey(SURVEY_PATH)
        means = aggregate_rankings(survey)
        assert len({r.expert_id for r in survey.rows}) == 20
        for model, ranks in table.ranks.items():
            for criterion, want in ranks.items():
                assert means[model][criterion] == want, (model, criterion)


class TestInterpretabilityScore:
    def test_bert_is_exactly_one(self, table):
        assert interpretability_score("BERT", table) == 1.0
        assert interpretability_score("BERT", table, recompute=True) == pytest.approx(1.0, abs=1e-12)

    def test_vader_recompute(self, table):
        # 0.2 * (1.45/4.6 + 1.6/4.4 + 1.55/4.5), parameter term zero
        assert interpretability_score("VADER", table, recompute=True) == pytest.approx(0.2047, abs=1e-4)

    def test_max_ranked_model_scores_one(self):
        table = InterpretabilityTable(
            ranks={"A": {c: 5.0 for c in ciscore.CRITERIA}, "B": {c: 1.0 for c in ciscore.CRITERIA}},
            params={"A": 100.0, "B": 1.0},
            weights={"simplicity": 0.2, "transparency": 0.2, "explainability": 0.2, "params": 0.4},
            scores={"A": 1.0, "B": 0.2},
            embedding_scores={"COUNT": 0.25},
        )
        assert interpretability_score("A", table, recompute=True) == pytest.approx(1.0, abs=1e-12)

    def test_unknown_model(self, table):
        with pytest.raises(ConfigError):
            interpretability_score("GPT", table)

    def test_recompute_within_three_hundredths_of_printed(self, table):
        for model, printed in table.scores.items():
            recomputed = interpretability_score(model, table, recompute=True)
            assert abs(recomputed - printed) <= 0.03, model

    @given(st.floats(min_value=0.05, max_value=4.9))
    def test_monotone_in_rank(self, bump):
        base = load_table()
        got = interpretability_score("NB", base, recompute=True)
        ranks = {m: dict(v) for m, v in base.ranks.items()}
        ranks["NB"] = {c: min(5.0, v + bump) for c, v in ranks["NB"].items()}
        bumped_table = InterpretabilityTable(
            ranks=ranks, params=base.params, weights=base.weights,
            scores=base.scores, embedding_scores=base.embedding_scores,
        )
        if all(ranks["NB"][c] <= base.rank_max(c) for c in ciscore.CRITERIA):
            assert interpretability_score("NB", bumped_table, recompute=True) >= got


class TestEmbeddingScore:
    @pytest.mark.parametrize("kind,value", [("COUNT", 0.25), ("TFIDF", 0.50), ("W2V", 0.75)])
    def test_fixed_constants(self, table, kind, value):
        assert embedding_score(kind, table) == value

    def test_unknown_kind(self, table):
        with pytest.raises(ConfigError):
            embedding_score("GLOVE", table)


class TestPipelineSpec:
    def test_standalone_heads_take_nothing(self):
        with pytest.raises(ConfigError):
            PipelineSpec(head="VADER", embedding="TFIDF")
        with pytest.raises(ConfigError):
            PipelineSpec(head="BERT", sentiment_feature="BERT")

    def test_learned_heads_require_embedding(self):
        with pytest.raises(ConfigError):
            PipelineSpec(head="LR")

    def test_parse_roundtrip(self):
        for name in ("VADER", "BERT", "COUNT+LR", "TFIDF+NN-BS", "W2V+SVM"):
            assert parse_pipeline(name).name == name

    def test_parse_garbage(self):
        with pytest.raises(ConfigError):
            parse_pipeline("TFIDF&LR")


class TestCompositeCi:
    def test_paper_headline_example(self, table):
        result = composite_ci(parse_pipeline("TFIDF+LR-BS"), table)
        assert result.ci == pytest.approx(1.72, abs=1e-12)
        assert dict(result.constituents) == {"TFIDF": 0.50, "BERT": 1.00, "LR": 0.22}

    def test_bare_vader(self, table):
        assert composite_ci(parse_pipeline("VADER"), table).ci == pytest.approx(0.20, abs=1e-12)

    def test_count_nb(self, table):
        assert composite_ci(parse_pipeline("COUNT+NB"), table).ci == pytest.approx(0.60, abs=1e-12)

    def test_sum_is_exact_over_constituents(self, table):
        for result in enumerate_pipelines(table):
            assert result.ci == sum(s for _, s in result.constituents)


class TestEnumerate:
    def test_exactly_26_distinct(self, table):
        results = enumerate_pipelines(table)
        assert len(results) == 26
        assert len({round(r.ci, 9) for r in results}) == 26

    def test_extremes(self, table):
        results = enumerate_pipelines(table)
        assert results[0].name == "VADER"
        assert results[0].ci == pytest.approx(0.20, abs=1e-12)
        assert results[-1].name == "W2V+NN-BS"
        assert results[-1].ci == pytest.approx(2.32, abs=1e-12)

    def test_sorted_by_ci(self, table):
        values = [r.ci for r in enumerate_pipelines(table)]
        assert values == sorted(values)


class TestTableValidation:
    def test_weights_must_sum_to_one(self, table):
        with pytest.raises(ConfigError, match="sum"):
            InterpretabilityTable(
                ranks=table.ranks, params=table.params,
                weights={"simplicity": 0.3, "transparency": 0.3, "explainability": 0.3, "params": 0.3},
                scores=table.scores, embedding_scores=table.embedding_scores,
            )

    def test_custom_table_file(self, tmp_path, table):
        payload = {
            "weights": table.weights,
            "models": {
                m: {"ranks": table.ranks[m], "params": table.params[m], "score": table.scores[m]}
                for m in table.ranks
            },
            "embedding_scores": table.embedding_scores,
        }
        path = tmp_path / "table.json"
        path.write_text(json.dumps(payload))
        again = load_table(path)
        assert again.scores == table.scores
