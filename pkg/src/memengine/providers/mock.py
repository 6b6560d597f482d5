"""Deterministic offline providers.

These stand in for embedding, chat, and extraction models so the whole
pipeline runs reproducibly with no network access. Every output is a pure
function of the input text.
"""

from __future__ import annotations

import hashlib
import json
import string
import time
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Any, Sequence

import numpy as np

from ..core.tokens import surface_tokens, tokenize
from ..core.porter import porter_stem
from .base import ChatRequest


@lru_cache(maxsize=1)
def lexicon() -> dict[str, Any]:
    path = resources.files("memengine.providers").joinpath("data/lexicon.json")
    with path.open("r", encoding="utf-8") as fh:
        data = json.load(fh)
    return {
        "nouns": frozenset(data["nouns"]),
        "verbs": frozenset(data["verbs"]),
        "titles": frozenset(data["titles"]),
        "stopwords": frozenset(data["stopwords"]),
        "time_expressions": tuple(data["time_expressions"]),
    }


# ---------------------------------------------------------------------------
# embeddings
# ---------------------------------------------------------------------------

def _token_seed(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big")


def mock_embed(text: str, dim: int) -> np.ndarray:
    """Embed text as the normalized sum of per-token seeded Gaussian vectors.

    Each distinct token deterministically seeds a PRNG from a stable 64-bit
    hash and contributes one draw of ``dim`` values, weighted by its
    multiplicity. Identical token multisets therefore map to identical
    vectors regardless of word order, and texts sharing more tokens land
    closer in cosine space.
    """
    if dim < 2:
        raise ValueError(f"embedding dim must be >= 2, got {dim}")
    counts = Counter(tokenize(text))
    if not counts:
        rng = np.random.default_rng(_token_seed(""))
        vec = rng.standard_normal(dim)
    else:
        vec = np.zeros(dim, dtype=np.float64)
        for token, count in sorted(counts.items()):
            rng = np.random.default_rng(_token_seed(token))
            vec += count * rng.standard_normal(dim)
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        vec = np.ones(dim, dtype=np.float64)
        norm = float(np.linalg.norm(vec))
    return vec / norm


@dataclass(frozen=True)
class MockEmbeddingProvider:
    dim: int = 384

    def embed(self, text: str) -> np.ndarray:
        return mock_embed(text, self.dim)


# ---------------------------------------------------------------------------
# chat
# ---------------------------------------------------------------------------

SPAN_MAX_TOKENS = 10


def _content_stems(tokens: Sequence[str]) -> list[str | None]:
    """Stem each token, mapping stopwords to None so they never score."""
    stop = lexicon()["stopwords"]
    out: list[str | None] = []
    for tok in tokens:
        low = tok.lower()
        out.append(None if low in stop else porter_stem(low))
    return out


def best_grounded_span(question: str, blocks: Sequence[str]) -> tuple[str, str]:
    """Pick the grounding span that best matches the question.

    Scans every contiguous span of at most SPAN_MAX_TOKENS tokens in every
    block and scores it by the number of distinct non-stopword Porter stems
    it shares with the question. Ties resolve to the earliest block, then
    the earliest start, then the longest span, so the winning span drags
    in the tokens adjacent to the matched ones. Returns (answer, reasoning);
    the answer is "unknown" when the grounding holds no tokens at all.
    """
    q_stems = {s for s in _content_stems(tokenize(question)) if s is not None}

    best: tuple[int, int, int, int] | None = None  # overlap, block, start, length
    best_text = ""
    for b_idx, block in enumerate(blocks):
        toks = surface_tokens(block)
        if not toks:
            continue
        stems = _content_stems([t.lower() for t in toks])
        for start in range(len(toks)):
            seen: set[str] = set()
            overlap = 0
            limit = min(SPAN_MAX_TOKENS, len(toks) - start)
            for length in range(1, limit + 1):
                stem = stems[start + length - 1]
                if stem is not None and stem in q_stems and stem not in seen:
                    seen.add(stem)
                    overlap += 1
                better = (
                    best is None
                    or overlap > best[0]
                    or (overlap == best[0] and (b_idx, start, -length) <
                        (best[1], best[2], -best[3]))
                )
                if better:
                    best = (overlap, b_idx, start, length)
                    best_text = " ".join(toks[start:start + length])
    if best is None:
        return "unknown", "the grounding context is empty"
    overlap, b_idx, start, length = best
    reasoning = (
        f"matched {overlap} question term(s) in context block {b_idx}, "
        f"tokens {start}..{start + length - 1}"
    )
    return best_text, reasoning


def _slice_between(text: str, head: str, tail: str) -> str:
    i = text.find(head)
    if i < 0:
        return ""
    j = text.find(tail, i + len(head))
    if j < 0:
        j = len(text)
    return text[i + len(head):j]


def _first_tokens(text: str, n: int) -> str:
    return " ".join(text.split()[:n])


def find_time_references(text: str) -> list[str]:
    low = " ".join(tokenize(text))
    found = [expr for expr in lexicon()["time_expressions"] if expr in low]
    return sorted(found)


def mock_chat(req: ChatRequest, grounding: Sequence[str] | None = None) -> dict[str, Any]:
    """Answer a rendered question prompt with {"reasoning", "answer"}.

    The answer is the best grounded span per best_grounded_span; with no
    grounding at all it is the literal "unknown".
    """
    question = _slice_between(req.user, "Question: ", "\n\nRequirements:").strip()
    if grounding is None:
        context = _slice_between(req.user, "Based on these memories:\n\n", "\n\nQuestion:")
        grounding = [line for line in context.split("\n") if line.strip()]
    answer, reasoning = best_grounded_span(question, grounding)
    return {"reasoning": reasoning, "answer": answer}


class MockChatProvider:
    """Offline chat model that recognizes the engine's own prompt catalog.

    Question prompts get span-matched answers, summarization prompts get a
    40-token extractive summary, extraction and query-analysis prompts get
    rule-based JSON. A configurable per-call delay supports throughput
    experiments.
    """

    def __init__(self, delay_s: float = 0.0):
        self.delay_s = delay_s

    def complete(self, req: ChatRequest, grounding: Sequence[str] | None = None) -> str:
        if self.delay_s > 0.0:
            time.sleep(self.delay_s)
        user = req.user
        if user.startswith("Based on these memories:"):
            return json.dumps(mock_chat(req, grounding))
        if "Summarize this audio transcript" in user:
            payload = _slice_between(user, "sentence:\n\n", "\n\nSummary:")
            return _first_tokens(payload, 40)
        if "Summarize this video content" in user:
            payload = _slice_between(user, "sentences:\n\n", "\n\nVideo summary:")
            return _first_tokens(payload, 40)
        if user.startswith("Extract entities and relations from this text:"):
            text = user.split(":\n\n", 1)[1] if ":\n\n" in user else ""
            return json.dumps(mock_entity_extract(text))
        if user.startswith("Analyze this memory retrieval query"):
            query = _slice_between(user, "Query: ", "\n\nRespond").strip()
            return json.dumps({
                "intent_type": "factual",
                "entities": [],
                "time_references": find_time_references(query),
                "modality_hints": [],
                "reformulated_query": query,
            })
        return json.dumps({"reasoning": "unrecognized prompt", "answer": "unknown"})


# ---------------------------------------------------------------------------
# entity extraction
# ---------------------------------------------------------------------------

def mock_entity_extract(text: str) -> dict[str, Any]:
    """Extract entities and relations with fixed lexical rules.

    Runs of capitalized tokens become entities: PERSON when led by a title,
    marked as a speaker with a trailing colon, or directly followed by a
    known verb; CONCEPT otherwise. Lowercase tokens from the bundled noun
    lexicon also become CONCEPT entities. A known verb between two adjacent
    mentions yields a related_to relation at confidence 1.0.
    """
    lex = lexicon()
    raw = text.split()
    toks = [t.strip(string.punctuation) for t in raw]
    # a trailing colon after the word marks a dialogue speaker
    speaker_mark = [":" in r[len(r.rstrip(string.punctuation)):] for r in raw]

    mentions: list[tuple[int, int, str, str]] = []  # start, end, name, etype
    i = 0
    n = len(toks)
    while i < n:
        tok = toks[i]
        if tok and tok[0].isupper():
            j = i
            while j < n and toks[j] and toks[j][0].isupper():
                j += 1
            run = list(range(i, j))
            # drop leading capitalized stopwords such as sentence-initial "The"
            while run and toks[run[0]].lower() in lex["stopwords"]:
                run = run[1:]
            if run:
                words = [toks[k] for k in run]
                lower = [w.lower() for w in words]
                if not all(w in lex["stopwords"] or w in lex["titles"] for w in lower):
                    etype = "CONCEPT"
                    before = toks[run[0] - 1].lower() if run[0] > 0 else ""
                    after = toks[run[-1] + 1].lower() if run[-1] + 1 < n else ""
                    if lower[0] in lex["titles"] or before in lex["titles"]:
                        etype = "PERSON"
                    elif speaker_mark[run[-1]]:
                        etype = "PERSON"
                    elif after in lex["verbs"]:
                        etype = "PERSON"
                    mentions.append((run[0], run[-1], " ".join(words), etype))
            i = j
        else:
            if tok and tok.lower() in lex["nouns"]:
                mentions.append((i, i, tok, "CONCEPT"))
            i += 1

    entities: list[dict[str, Any]] = []
    seen: dict[str, int] = {}
    for _, _, name, etype in mentions:
        key = name.lower()
        if key not in seen:
            seen[key] = len(entities)
            entities.append({
                "name": name,
                "type": etype,
                "attributes": {},
                "confidence": 1.0,
            })

    relations: list[dict[str, Any]] = []
    for (s1, e1, name1, _), (s2, e2, name2, _) in zip(mentions, mentions[1:]):
        gap = [toks[k].lower() for k in range(e1 + 1, s2)]
        if name1.lower() != name2.lower() and any(g in lex["verbs"] for g in gap):
            relations.append({
                "subject": name1,
                "predicate": "related_to",
                "object": name2,
                "confidence": 1.0,
            })

    return {"entities": entities, "relations": relations}


class MockEntityExtractor:
    def extract(self, text: str) -> dict[str, Any]:
        return mock_entity_extract(text)
