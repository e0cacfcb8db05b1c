#!/usr/bin/env python3
"""Regenerates mini_corpus.jsonl: 20 synthetic hotels, 40 reviewers.

Each hotel has a hidden quality per feature and each reviewer a hidden
interest per feature. Reviewers write about the features they care about,
with sentiment drawn from the hotel's quality; the star rating follows the
qualities of the features the reviewer cares about. About half the
sentences carry gold annotations, in either general or fine-grained form.

    python3 data/corpus/generate.py > data/corpus/mini_corpus.jsonl
"""
import csv
import json
import random
import sys
from pathlib import Path

HERE = Path(__file__).resolve().parent
FEATURES = ["room", "price", "staff", "location", "facilities", "bathroom",
            "ambience", "food_and_beverages", "comfort", "checking"]

POSITIVE = ["great", "excellent", "clean", "friendly", "lovely", "comfortable",
            "spacious", "perfect", "amazing", "nice", "wonderful", "pleasant"]
NEGATIVE = ["dirty", "rude", "small", "terrible", "awful", "poor", "broken",
            "slow", "disappointing", "horrible", "outdated", "cramped"]
NEUTRAL = ["We stayed three nights in March.",
           "Our flight landed late in the evening.",
           "It was our second visit to the city.",
           "We travelled with two children.",
           "The taxi took about twenty minutes."]


def load_terms():
    terms = {f: [] for f in FEATURES}
    with open(HERE.parent / "lexicon" / "features.tsv") as fh:
        for row in csv.reader(fh, delimiter="\t"):
            if not row or row[0].startswith("#"):
                continue
            terms[row[1]].append(row[0])
    return terms


def sentence(rng, term, positive):
    if positive:
        adj = rng.choice(POSITIVE)
        form = rng.randrange(3)
        if form == 0:
            return f"The {term} was {adj}."
        if form == 1:
            return f"We found the {term} really {adj}."
        return f"The {term} was not {rng.choice(NEGATIVE)} at all."
    adj = rng.choice(NEGATIVE)
    form = rng.randrange(3)
    if form == 0:
        return f"The {term} was {adj}."
    if form == 1:
        return f"Sadly the {term} felt {adj}."
    return f"The {term} was not {rng.choice(POSITIVE)}."


def main():
    rng = random.Random(20240517)
    terms = load_terms()
    hotels = [f"h{i:02d}" for i in range(1, 21)]
    users = [f"u{i:02d}" for i in range(1, 41)]
    quality = {h: [rng.uniform(0.15, 0.95) for _ in FEATURES] for h in hotels}
    interest = {u: [rng.random() ** 2 for _ in FEATURES] for u in users}

    out = sys.stdout
    review_no = 0
    for u in users:
        for h in rng.sample(hotels, 6):
            weights = interest[u]
            picked = rng.choices(range(len(FEATURES)), weights=weights, k=rng.randint(2, 5))
            sentences = []
            score = 0.0
            for fi in picked:
                f = FEATURES[fi]
                term = rng.choice(terms[f])
                positive = rng.random() < quality[h][fi]
                score += quality[h][fi]
                s = {"text": sentence(rng, term, positive)}
                if rng.random() < 0.5:
                    s["gold_aspect"] = f if rng.random() < 0.5 else term
                    s["gold_polarity"] = "positive" if positive else "negative"
                sentences.append(s)
            if rng.random() < 0.3:
                s = {"text": rng.choice(NEUTRAL)}
                if rng.random() < 0.5:
                    s["gold_polarity"] = "neutral"
                sentences.insert(rng.randrange(len(sentences) + 1), s)
            mean_quality = score / len(picked)
            rating = max(1, min(5, round(1 + 4 * mean_quality + rng.gauss(0, 0.4))))
            review_no += 1
            out.write(json.dumps({"review_id": f"r{review_no:04d}", "item_id": h, "user_id": u,
                                  "rating": rating, "sentences": sentences}) + "\n")


if __name__ == "__main__":
    main()
