"""Lexicon and rule-based sentiment scoring, star rescaling, external scores.

The rule engine scores RAW review text (capitalization and punctuation
carry signal; the cleaned text is for embeddings only). Scoring sums
per-token valences adjusted by five rules, then squashes the sum through
s / sqrt(s^2 + alpha):

* intensity modifiers up to 3 tokens back, damped 1.0 / 0.95 / 0.9 by
  distance, sign-matched to the target word's valence;
* negations up to 3 tokens back (including "n't" contractions) multiply
  the valence by -0.74;
* fully uppercase sentiment words gain 0.733 in their valence direction
  when the text mixes cased and uppercase tokens;
* a "but" reweights the clause before it by 0.5 and after it by 1.5;
* up to 3 exclamation marks each add 0.292 toward the total's sign.

Modifier and negation lookbacks only trigger on preceding tokens that are
not themselves lexicon entries. All rule constants live in one
:class:`RuleConstants` record.
"""

from __future__ import annotations

import csv
import math
import string
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .corpus import Dataset
from .errors import ConfigError, DataError

BOOSTER_STEP = 0.293  # default increment magnitude for intensity modifiers

DEFAULT_BOOSTERS: dict[str, float] = {
    **{
        w: BOOSTER_STEP
        for w in (
            "absolutely", "amazingly", "completely", "considerably", "decidedly",
            "deeply", "enormously", "entirely", "especially", "exceptionally",
            "extremely", "highly", "hugely", "incredibly", "intensely", "majorly",
            "particularly", "purely", "quite", "really", "remarkably", "so",
            "substantially", "thoroughly", "totally", "tremendously", "truly",
            "unbelievably", "unusually", "utterly", "very",
        )
    },
    **{
        w: -BOOSTER_STEP
        for w in (
            "almost", "barely", "hardly", "marginally", "occasionally", "partly",
            "scarcely", "slightly", "somewhat",
        )
    },
}

DEFAULT_NEGATIONS: frozenset[str] = frozenset(
    {
        "aint", "arent", "cannot", "cant", "couldnt", "darent", "didnt", "doesnt",
        "dont", "hadnt", "hasnt", "havent", "isnt", "mightnt", "mustnt", "neither",
        "never", "none", "nope", "nor", "not", "nothing", "nowhere", "oughtnt",
        "rarely", "seldom", "shant", "shouldnt", "wasnt", "werent", "without",
        "wont", "wouldnt", "no",
    }
)


@dataclass(frozen=True)
class RuleConstants:
    """Tunable constants of the rule engine, bundled in one record."""

    negation_factor: float = -0.74
    caps_boost: float = 0.733
    exclaim_unit: float = 0.292
    max_exclaims: int = 3
    booster_damping: tuple[float, float, float] = (1.0, 0.95, 0.9)
    pre_but_weight: float = 0.5
    post_but_weight: float = 1.5
    normalizer_alpha: float = 15.0


DEFAULT_CONSTANTS = RuleConstants()


@dataclass(frozen=True)
class SentimentLexicon:
    valences: dict[str, float]
    boosters: dict[str, float] = field(default_factory=lambda: dict(DEFAULT_BOOSTERS))
    negations: frozenset[str] = DEFAULT_NEGATIONS


@dataclass(frozen=True)
class SentimentScore:
    review_id: str
    compound: float
    stars_real: float
    source: str  # "rule_based" | "external"


@dataclass(frozen=True)
class ExternalScoreFile:
    """Integer star predictions keyed by review id, e.g. transformer output."""

    stars: dict[str, int]
    model_tag: str = ""


def load_lexicon(path: str | Path | None = None) -> SentimentLexicon:
    """Load a `term<TAB>valence` lexicon file (UTF-8, '#' comments)."""
    if path is None:
        text = resources.files("ratebench.data").joinpath("sentiment_lexicon.txt").read_text("utf-8")
        source = "<bundled>"
    else:
        text = Path(path).read_text("utf-8")
        source = str(path)
    valences: dict[str, float] = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise DataError(f"{source}:{line_no}: expected 'term<TAB>valence'")
        try:
            valence = float(parts[1])
        except ValueError:
            raise DataError(f"{source}:{line_no}: bad valence {parts[1]!r}") from None
        if not math.isfinite(valence):
            raise DataError(f"{source}:{line_no}: non-finite valence")
        valences[parts[0].lower()] = valence
    return SentimentLexicon(valences=valences)


def _tokens(text: str) -> list[str]:
    """Whitespace tokens with edge punctuation stripped.

    Tokens whose stripped form is 2 characters or shorter are kept as-is
    so emoticons and short contractions survive.
    """
    out = []
    for token in text.split():
        stripped = token.strip(string.punctuation)
        out.append(token if len(stripped) <= 2 else stripped)
    return out


def _mixed_caps(tokens: Sequence[str]) -> bool:
    upper = sum(1 for t in tokens if t.isupper())
    return 0 < len(tokens) - upper < len(tokens)


def _is_negation(lower: str, negations: frozenset[str]) -> bool:
    return lower in negations or "n't" in lower


def compound_score(
    text: str,
    lexicon: SentimentLexicon,
    constants: RuleConstants = DEFAULT_CONSTANTS,
) -> float:
    """Normalized sentiment of raw text, strictly inside (-1, 1)."""
    tokens = _tokens(text)
    lowers = [t.lower() for t in tokens]
    cap_diff = _mixed_caps(tokens)
    valences: list[float] = []
    for i, token in enumerate(tokens):
        lower = lowers[i]
        if lower in lexicon.boosters:
            valences.append(0.0)
            continue
        valence = lexicon.valences.get(lower)
        if valence is None:
            valences.append(0.0)
            continue
        if token.isupper() and cap_diff:
            valence += constants.caps_boost if valence > 0 else -constants.caps_boost
        for back, damping in enumerate(constants.booster_damping, start=1):
            j = i - back
            if j < 0 or lowers[j] in lexicon.valences:
                continue
            step = lexicon.boosters.get(lowers[j])
            if step is not None:
                if valence < 0:
                    step = -step
                if tokens[j].isupper() and cap_diff:
                    step += constants.caps_boost if valence > 0 else -constants.caps_boost
                valence += step * damping
            if _is_negation(lowers[j], lexicon.negations):
                valence *= constants.negation_factor
        valences.append(valence)

    if "but" in lowers:
        pivot = lowers.index("but")
        valences = [
            v * (constants.pre_but_weight if k < pivot else constants.post_but_weight if k > pivot else 1.0)
            for k, v in enumerate(valences)
        ]

    total = math.fsum(valences)
    if total != 0.0:
        emphasis = min(text.count("!"), constants.max_exclaims) * constants.exclaim_unit
        total += emphasis if total > 0 else -emphasis
    return total / math.sqrt(total * total + constants.normalizer_alpha)


def rescale_to_stars(compound: float) -> float:
    """Affine map of a compound in [-1, 1] onto the star scale [1, 5]."""
    if not -1.0 <= compound <= 1.0:
        raise ConfigError(f"compound score must be in [-1, 1], got {compound}")
    return 2.0 * (compound + 1.0) + 1.0


def star_class(stars_real: float) -> int:
    """Round half-up to an integer star, clamped to 1..5."""
    return int(min(5, max(1, math.floor(stars_real + 0.5))))


def score_dataset(
    ds: Dataset,
    lexicon: SentimentLexicon,
    constants: RuleConstants = DEFAULT_CONSTANTS,
) -> list[SentimentScore]:
    """Rule-based scores for every review, in dataset order."""
    out = []
    for r in ds.reviews:
        compound = compound_score(r.text, lexicon, constants)
        out.append(
            SentimentScore(
                review_id=r.id,
                compound=compound,
                stars_real=rescale_to_stars(compound),
                source="rule_based",
            )
        )
    return out


def load_external_scores(path: str | Path, model_tag: str = "") -> ExternalScoreFile:
    """Parse a `review_id,stars[,confidence]` CSV of external predictions."""
    path = Path(path)
    stars: dict[str, int] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or "review_id" not in header or "stars" not in header:
            raise DataError(f"{path}: missing 'review_id,stars' header")
        id_col = header.index("review_id")
        star_col = header.index("stars")
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            rid = row[id_col]
            try:
                value = int(row[star_col])
            except (ValueError, IndexError):
                raise DataError(f"{path}:{line_no}: unparseable star value") from None
            if not 1 <= value <= 5:
                raise DataError(f"{path}:{line_no}: star {value} outside 1..5")
            if rid in stars:
                raise DataError(f"{path}:{line_no}: duplicate review id {rid!r}")
            stars[rid] = value
    return ExternalScoreFile(stars=stars, model_tag=model_tag)


def join_scores(ds: Dataset, scores: ExternalScoreFile) -> list[SentimentScore]:
    """Align external scores to dataset order; every id must be covered."""
    missing = [r.id for r in ds.reviews if r.id not in scores.stars]
    if missing:
        shown = ", ".join(missing[:10])
        raise DataError(f"external scores missing {len(missing)} ids: {shown}")
    out = []
    for r in ds.reviews:
        star = scores.stars[r.id]
        out.append(
            SentimentScore(
                review_id=r.id,
                compound=(star - 3.0) / 2.0,
                stars_real=float(star),
                source="external",
            )
        )
    return out


def save_scores(scores: Iterable[SentimentScore], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["review_id", "compound", "stars_real", "predicted_star", "source"])
        for s in scores:
            writer.writerow(
                [s.review_id, repr(s.compound), repr(s.stars_real), star_class(s.stars_real), s.source]
            )
