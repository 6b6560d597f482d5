"""Answer-quality metrics: stemmed token F1, exact match, and BLEU."""

from __future__ import annotations

import math
from collections import Counter

from ..core.tokens import tokenize
from ..core.porter import porter_stem


def _stems(text: str) -> list[str]:
    return [porter_stem(tok) for tok in tokenize(text)]


def token_f1(pred: str, gold: str) -> float:
    """Multiset precision/recall F1 over stemmed tokens.

    Two empty strings count as a perfect match; exactly one empty scores 0.
    """
    pred_stems = _stems(pred)
    gold_stems = _stems(gold)
    if not pred_stems and not gold_stems:
        return 1.0
    if not pred_stems or not gold_stems:
        return 0.0
    overlap = sum((Counter(pred_stems) & Counter(gold_stems)).values())
    if overlap == 0:
        return 0.0
    precision = overlap / len(pred_stems)
    recall = overlap / len(gold_stems)
    return 2.0 * precision * recall / (precision + recall)


def exact_match(pred: str, gold: str) -> float:
    """1.0 when the two strings tokenize identically, else 0.0."""
    return 1.0 if tokenize(pred) == tokenize(gold) else 0.0


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i:i + n]) for i in range(len(tokens) - n + 1))


def _smoothed_precision(pred: list[str], gold: list[str], n: int) -> float:
    pred_grams = _ngrams(pred, n)
    gold_grams = _ngrams(gold, n)
    total = sum(pred_grams.values())
    matched = sum((pred_grams & gold_grams).values())
    return (matched + 1.0) / (total + 1.0)


def bleu_scores(pred: str, gold: str) -> dict[str, float]:
    """Order-2 BLEU with add-one smoothing on each n-gram precision.

    bleu1 and bleu2 are the smoothed modified precisions alone; bleu applies
    the brevity penalty to their geometric mean.
    """
    pred_toks = tokenize(pred)
    gold_toks = tokenize(gold)
    if not pred_toks and not gold_toks:
        return {"bleu": 1.0, "bleu1": 1.0, "bleu2": 1.0}
    if not pred_toks or not gold_toks:
        return {"bleu": 0.0, "bleu1": 0.0, "bleu2": 0.0}
    p1 = _smoothed_precision(pred_toks, gold_toks, 1)
    p2 = _smoothed_precision(pred_toks, gold_toks, 2)
    if len(pred_toks) >= len(gold_toks):
        brevity = 1.0
    else:
        brevity = math.exp(1.0 - len(gold_toks) / len(pred_toks))
    return {
        "bleu": brevity * math.sqrt(p1 * p2),
        "bleu1": p1,
        "bleu2": p2,
    }
