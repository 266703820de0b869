"""Regenerate the bundled expert survey fixture.

Builds 20 experts x 6 models x 3 criteria of integer ranks in 1..5 whose
per-cell means equal the bundled interpretability table exactly (each
target mean times 20 is an integer, so exact integer multisets exist).
Ranks are spread around the mean and shuffled across experts with a fixed
seed so the fixture looks like survey data rather than constants.

Run from the repo root:  python tools/make_expert_survey.py
"""

import csv
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
TABLE_PATH = ROOT / "src" / "ratebench" / "data" / "interpretability_table.json"
OUT_PATH = ROOT / "src" / "ratebench" / "data" / "expert_survey.csv"

N_EXPERTS = 20


def rank_multiset(mean: float, rng: np.random.Generator) -> list[int]:
    total = round(mean * N_EXPERTS)
    base = total // N_EXPERTS
    n_high = total - base * N_EXPERTS
    ranks = [base + 1] * n_high + [base] * (N_EXPERTS - n_high)
    # mean-preserving spread: turn (x, y) into (x-1, y+1) where legal
    for _ in range(8):
        i, j = rng.integers(N_EXPERTS), rng.integers(N_EXPERTS)
        if i != j and ranks[i] > 1 and ranks[j] < 5:
            ranks[i] -= 1
            ranks[j] += 1
    assert sum(ranks) == total and all(1 <= r <= 5 for r in ranks)
    rng.shuffle(ranks)
    return ranks


def main():
    table = json.loads(TABLE_PATH.read_text("utf-8"))
    rng = np.random.default_rng(1405)
    rows = []
    for model, entry in table["models"].items():
        for criterion, mean in entry["ranks"].items():
            ranks = rank_multiset(mean, rng)
            for expert, rank in enumerate(ranks, start=1):
                rows.append((f"e{expert:02d}", model, criterion, rank))
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    with open(OUT_PATH, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["expert_id", "model", "criterion", "rank"])
        writer.writerows(rows)
    print(f"wrote {len(rows)} survey rows -> {OUT_PATH}")


if __name__ == "__main__":
    main()
