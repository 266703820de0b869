import json
from pathlib import Path

import pytest

from ratebench import ciscore
from ratebench.corpus import load_stopwords
from ratebench.sentiment import load_lexicon

TESTS_DIR = Path(__file__).parent
DATA_DIR = TESTS_DIR / "data"
SYNTHETIC_REVIEWS = DATA_DIR / "synthetic_reviews.jsonl"
SYNTHETIC_SCORES = DATA_DIR / "synthetic_scores.csv"
SENTIMENT_GOLDEN = DATA_DIR / "sentiment_golden.csv"


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def stopwords():
    return load_stopwords()


@pytest.fixture(scope="session")
def table():
    return ciscore.load_table()


@pytest.fixture
def write_jsonl(tmp_path):
    """Factory: write records as a JSONL file and return its path."""

    def _write(records, name="reviews.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as fh:
            for record in records:
                fh.write(json.dumps(record, ensure_ascii=False) + "\n")
        return path

    return _write


def make_records(counts: dict[int, int], text="this phone is great"):
    """Simple balanced-ish raw records: ``counts`` maps star -> how many."""
    records = []
    i = 0
    for star, n in counts.items():
        for _ in range(n):
            records.append({"reviewText": f"{text} {i}", "overall": star, "id": f"r{i:04d}"})
            i += 1
    return records
