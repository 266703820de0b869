"""Regenerate the synthetic desk-scale corpus and its external score fixture.

1,000 reviews (200 per star) with a planted sentiment vocabulary drawn
from the bundled lexicon, neutral product fillers, and light noise
(adjacent-star words, boosters, negations, punctuation emphasis). The
companion score fixture simulates a strong external sentiment model:
mostly the true star with occasional +-1/+-2 slips, which lands its
correlation with ratings near 0.8.

Run from the repo root:  python tools/make_synthetic_corpus.py
"""

import csv
import json
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
REVIEWS_OUT = ROOT / "tests" / "data" / "synthetic_reviews.jsonl"
SCORES_OUT = ROOT / "tests" / "data" / "synthetic_scores.csv"

PER_STAR = 200
SEED = 20240811

STAR_WORDS = {
    1: ["terrible", "awful", "horrible", "useless", "broken", "waste", "worst",
        "defective", "refund", "garbage", "scam", "unusable"],
    2: ["disappointing", "poor", "flimsy", "cheap", "slow", "annoying", "problems",
        "weak", "mediocre", "flawed", "loose", "noisy"],
    3: ["fine", "acceptable", "adequate", "quiet", "limited", "issue", "quality",
        "pretty", "heavy", "value"],
    4: ["good", "nice", "solid", "comfortable", "useful", "helpful", "reliable",
        "smooth", "quick", "pleased", "sturdy", "handy"],
    5: ["excellent", "amazing", "perfect", "love", "great", "awesome", "fantastic",
        "wonderful", "best", "superb", "stellar", "flawless"],
}

FILLERS = [
    "phone", "case", "battery", "screen", "charger", "cable", "box", "shipping",
    "arrived", "ordered", "bought", "month", "week", "using", "works", "fits",
    "color", "size", "device", "button", "setup", "manual", "price", "store",
    "seller", "daily", "pocket", "desk", "office", "home", "keyboard", "mouse",
    "speaker", "headset", "stand", "cover", "adapter", "port", "warranty",
    "package", "delivery", "replacement", "unit", "model", "band", "strap",
    "holder", "mount", "lamp", "cloth", "grip", "hinge", "lid", "tray",
]

BOOSTERS = ["very", "really", "extremely", "quite", "truly"]
NEGATIONS = ["not", "never"]


def make_review(star: int, rng: np.random.Generator) -> str:
    n_sentiment = int(rng.integers(2, 6))
    n_filler = int(rng.integers(5, 13))
    words: list[str] = []
    for _ in range(n_sentiment):
        pool_star = star
        roll = rng.random()
        if roll < 0.12 and 1 <= star + 1 <= 5:
            pool_star = star + 1
        elif roll < 0.24 and 1 <= star - 1 <= 5:
            pool_star = star - 1
        word = STAR_WORDS[pool_star][int(rng.integers(len(STAR_WORDS[pool_star])))]
        if rng.random() < 0.18:
            word = f"{BOOSTERS[int(rng.integers(len(BOOSTERS)))]} {word}"
        # an occasional negated opposite-polarity word keeps VADER honest
        if rng.random() < 0.06:
            flipped = 6 - pool_star
            other = STAR_WORDS[flipped][int(rng.integers(len(STAR_WORDS[flipped])))]
            word = f"{NEGATIONS[int(rng.integers(2))]} {other}"
        if rng.random() < 0.08:
            word = word.upper()
        words.append(word)
    words.extend(FILLERS[int(rng.integers(len(FILLERS)))] for _ in range(n_filler))
    order = rng.permutation(len(words))
    text = " ".join(words[i] for i in order)
    text = text[0].upper() + text[1:]
    if star >= 4 and rng.random() < 0.4:
        text += "!" * int(rng.integers(1, 4))
    elif star <= 2 and rng.random() < 0.3:
        text += "!"
    else:
        text += "."
    return text


def main():
    rng = np.random.default_rng(SEED)
    REVIEWS_OUT.parent.mkdir(parents=True, exist_ok=True)
    records = []
    for star in (1, 2, 3, 4, 5):
        for i in range(PER_STAR):
            records.append(
                {
                    "id": f"synth-{star}-{i:03d}",
                    "reviewText": make_review(star, rng),
                    "overall": star,
                }
            )
    order = rng.permutation(len(records))
    with open(REVIEWS_OUT, "w", encoding="utf-8") as fh:
        for i in order:
            fh.write(json.dumps(records[i], ensure_ascii=False, sort_keys=True) + "\n")

    # external score fixture: true star, occasionally off by one or two
    slips = np.array([-2, -1, 0, 1, 2])
    probs = np.array([0.04, 0.18, 0.56, 0.18, 0.04])
    with open(SCORES_OUT, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["review_id", "stars", "confidence"])
        for i in order:
            record = records[i]
            slip = rng.choice(slips, p=probs)
            star = int(min(5, max(1, record["overall"] + slip)))
            confidence = round(float(rng.uniform(0.5, 0.99)), 4)
            writer.writerow([record["id"], star, confidence])
    print(f"wrote {len(records)} reviews -> {REVIEWS_OUT}")
    print(f"wrote scores -> {SCORES_OUT}")


if __name__ == "__main__":
    main()
