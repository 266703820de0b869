"""Regenerate tests/data/sentiment_golden.csv.

This is a deliberately independent, token-by-token transcription of the
classic lexicon-and-rules scoring procedure (booster damping 1/0.95/0.9,
negation scalar -0.74, ALL-CAPS increment 0.733, but-clause reweighting
0.5/1.5, exclamation emphasis 0.292 capped at three, normalization
s/sqrt(s^2+15)). It shares only the lexicon DATA file with the package,
never its code, so the frozen golden values are a real cross-check of the
production engine.

Run from the repo root:  python tools/gen_sentiment_golden.py
"""

import csv
import math
import string
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
LEXICON_PATH = ROOT / "src" / "ratebench" / "data" / "sentiment_lexicon.txt"
OUT_PATH = ROOT / "tests" / "data" / "sentiment_golden.csv"

B_INCR = 0.293
C_INCR = 0.733
N_SCALAR = -0.74
ALPHA = 15.0

BOOSTERS = {}
for w in ("absolutely", "amazingly", "completely", "considerably", "decidedly", "deeply",
          "enormously", "entirely", "especially", "exceptionally", "extremely", "highly",
          "hugely", "incredibly", "intensely", "majorly", "particularly", "purely", "quite",
          "really", "remarkably", "so", "substantially", "thoroughly", "totally",
          "tremendously", "truly", "unbelievably", "unusually", "utterly", "very"):
    BOOSTERS[w] = B_INCR
for w in ("almost", "barely", "hardly", "marginally", "occasionally", "partly", "scarcely",
          "slightly", "somewhat"):
    BOOSTERS[w] = -B_INCR

NEGATIONS = {"aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
             "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
             "never", "none", "nope", "nor", "not", "nothing", "nowhere", "oughtnt",
             "rarely", "seldom", "shant", "shouldnt", "wasnt", "werent", "without",
             "wont", "wouldnt", "no"}


def load_lexicon():
    lex = {}
    for line in LEXICON_PATH.read_text("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        term, _, valence = line.partition("\t")
        lex[term.lower()] = float(valence)
    return lex


def tokens_of(text):
    toks = []
    for raw in text.split():
        stripped = raw.strip(string.punctuation)
        if len(stripped) <= 2:
            toks.append(raw)
        else:
            toks.append(stripped)
    return toks


def has_cap_differential(toks):
    n_upper = 0
    for t in toks:
        if t.isupper():
            n_upper += 1
    return 0 < len(toks) - n_upper < len(toks)


def score(text, lexicon):
    toks = tokens_of(text)
    cap_diff = has_cap_differential(toks)
    sentiments = []
    for i in range(len(toks)):
        word = toks[i]
        lower = word.lower()
        if lower in BOOSTERS:
            sentiments.append(0.0)
            continue
        if lower not in lexicon:
            sentiments.append(0.0)
            continue
        valence = lexicon[lower]
        if word.isupper() and cap_diff:
            if valence > 0:
                valence = valence + C_INCR
            else:
                valence = valence - C_INCR
        for start in (0, 1, 2):
            j = i - (start + 1)
            if j < 0:
                continue
            prev = toks[j]
            prev_lower = prev.lower()
            if prev_lower in lexicon:
                continue
            if prev_lower in BOOSTERS:
                s = BOOSTERS[prev_lower]
                if valence < 0:
                    s = -s
                if prev.isupper() and cap_diff:
                    if valence > 0:
                        s = s + C_INCR
                    else:
                        s = s - C_INCR
                if start == 1:
                    s = s * 0.95
                if start == 2:
                    s = s * 0.9
                valence = valence + s
            if prev_lower in NEGATIONS or "n't" in prev_lower:
                valence = valence * N_SCALAR
        sentiments.append(valence)

    lowers = [t.lower() for t in toks]
    if "but" in lowers:
        bi = lowers.index("but")
        for k in range(len(sentiments)):
            if k < bi:
                sentiments[k] = sentiments[k] * 0.5
            elif k > bi:
                sentiments[k] = sentiments[k] * 1.5

    total = 0.0
    for v in sentiments:
        total = total + v
    if total > 0:
        total = total + min(text.count("!"), 3) * 0.292
    elif total < 0:
        total = total - min(text.count("!"), 3) * 0.292
    return total / math.sqrt(total * total + ALPHA)


SENTENCES = [
    "This phone is good",
    "This phone is bad",
    "the screen looks great",
    "what a terrible product",
    "I love this keyboard",
    "I hate the new firmware",
    "very good value",
    "really bad packaging",
    "extremely good sound quality",
    "slightly bad smell on arrival",
    "barely useful manual",
    "not good",
    "not bad",
    "not very good",
    "never worked and arrived broken",
    "the battery is not great",
    "don't love the hinge",
    "doesn't work at all",
    "cannot recommend this charger",
    "GREAT product",
    "this case is GREAT",
    "this case is TERRIBLE",
    "absolutely AMAZING screen",
    "good!",
    "good!!",
    "good!!!",
    "good!!!!",
    "bad!!!",
    "works great but the battery is awful",
    "ugly design but wonderful performance",
    "cheap but reliable",
    "the cable was short",
    "box arrived on tuesday",
    "utterly useless and completely broken",
    "quite nice but somewhat slow",
    "I was really disappointed with the quality",
    "the quality is excellent and shipping was fast",
    "excellent excellent excellent",
    "worst purchase ever",
    "best purchase this year!",
    "so good",
    "so so good",
    "this is not a scam",
    "no problems so far",
    "no good",
    "without issue after a month",
    "the adapter failed within a week",
    "flimsy hinge broke twice",
    "surprisingly sturdy and very comfortable",
    "very very good",
    "VERY good",
    "not VERY good",
    "a truly wonderful little gadget!",
    "totally worthless, avoid!!",
    "the seller was rude, the item was damaged",
    "refund requested, money wasted",
    "perfect fit for my laptop",
    "lovely color, awful stitching",
    "it stopped working, terrible!!!",
    "decent price, nothing special",
    "the manual was useless but support was helpful",
    "really really love it",
    "meh",
    "solid build and smooth finish",
    "The UI is clean, the dock feels premium",
    "scratched on arrival and poorly packed",
]


def main():
    lexicon = load_lexicon()
    OUT_PATH.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT_PATH, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["text", "compound"])
        for sentence in SENTENCES:
            writer.writerow([sentence, repr(score(sentence, lexicon))])
    print(f"wrote {len(SENTENCES)} golden rows -> {OUT_PATH}")


if __name__ == "__main__":
    main()
