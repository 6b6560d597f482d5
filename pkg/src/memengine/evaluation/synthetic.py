"""Deterministic fixture corpora whose gold answers are known by construction.

Each generator returns events plus QA items built so that, under the
bundled offline providers, the correct behavior is provable: planted facts
carry unique tokens, keyword probes are reachable only through exact term
match, and multi-block answers live past the summary cutoff.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from ..core.types import ModalityKind, ms_to_iso
from ..ingest.events import Event
from ..providers.mock import best_grounded_span
from .harness import QaItem

BASE_TS_MS = 1740816000000  # 2025-03-01T08:00:00Z

_FILLER_POOL = (
    "breeze", "cloudy", "meadow", "pebble", "quiet", "gentle", "amber",
    "drift", "hollow", "ripple", "shadow", "thicket", "willow", "ember",
    "frost", "glade", "mist", "brook", "fern", "moss", "dune", "crag",
    "heather", "bramble", "tundra", "prairie", "canyon", "mesa", "fjord",
    "lagoon", "atoll", "grove", "orchard", "vale", "ridge", "summit",
    "plateau", "basin", "delta", "marsh",
)


def _text_event(index: int, text: str, conversation: str = "conv0") -> Event:
    speaker = "Avery" if index % 2 == 0 else "Blake"
    return Event(
        conversation_id=conversation,
        speaker=speaker,
        timestamp_iso=ms_to_iso(BASE_TS_MS + index * 1000),
        modality=ModalityKind.TEXT,
        text=text,
    )


def _filler_text(rng: random.Random, index: int) -> str:
    # two per-event unique tokens keep every pairwise Jaccard below the
    # duplicate threshold even when the sampled words coincide
    words = rng.sample(_FILLER_POOL, 8)
    return " ".join(words + [f"filler{index}", f"mark{index}"])


def planted_fact_suite(n_questions: int = 50, n_events: int = 200,
                       seed: int = 7) -> tuple[list[Event], list[QaItem]]:
    """Fillers plus uniquely-tokened facts the span oracle must recover.

    Every question's gold answer is the oracle's own output on the fact
    alone, and the fact's tokens appear nowhere else, so a correct pipeline
    scores F1 = 1.0 exactly.
    """
    if n_questions > n_events:
        raise ValueError("need at least one event per question")
    rng = random.Random(seed)
    fact_positions = sorted(rng.sample(range(n_events), n_questions))
    fact_at = {pos: i for i, pos in enumerate(fact_positions)}
    events: list[Event] = []
    qa: list[QaItem] = []
    for pos in range(n_events):
        if pos in fact_at:
            i = fact_at[pos]
            fact = (f"person{i:02d} mentioned the object{i:02d} "
                    f"was kept in city{i:02d}")
            question = (f"where did person{i:02d} say the object{i:02d} "
                        f"was kept")
            gold, _ = best_grounded_span(question, [fact])
            events.append(_text_event(pos, fact))
            qa.append(QaItem(question=question, gold_answer=gold,
                             category="planted", evidence=(pos,)))
        else:
            events.append(_text_event(pos, _filler_text(rng, pos)))
    return events, qa


def keyword_probe_suite(n_probes: int = 20, n_decoys: int = 100,
                        seed: int = 11) -> tuple[list[Event], list[QaItem]]:
    """Rare-token probes drowned out by common-token decoys.

    Each query pairs one token that appears in exactly one document with
    four terms every decoy shares. Dense similarity favors the decoys;
    only exact sparse term match surfaces the probe, so retrieval hit rate
    collapses when BM25 is disabled.
    """
    rng = random.Random(seed)
    events: list[Event] = []
    qa: list[QaItem] = []
    common = "report summary update briefing"
    for i in range(n_probes):
        rare = f"xylo{i:03d}"
        padding = " ".join(f"pad{i:03d}x{j:02d}" for j in range(60))
        events.append(_text_event(len(events), f"{rare} {padding}"))
        qa.append(QaItem(
            question=f"{rare} {common}",
            gold_answer=rare,
            category="probe",
            evidence=(len(events) - 1,),
        ))
    for j in range(n_decoys):
        unique = " ".join(f"decoy{j:03d}u{k}" for k in range(6))
        events.append(_text_event(len(events), f"{common} {unique}"))
    rng.shuffle(qa)
    return events, qa


def multi_block_suite(n_questions: int = 20, n_fillers: int = 30,
                      seed: int = 13) -> tuple[list[Event], list[QaItem], dict[str, Any]]:
    """Documents whose answers sit beyond the 40-token summary cutoff.

    The returned config overrides disable summarization (so summaries are
    hard 40-token prefixes) and drop the expansion gate low enough for the
    weak summary-to-question similarity to pass. Answer quality then
    depends on expanded blocks, which is the behavior under test.
    """
    rng = random.Random(seed)
    events: list[Event] = []
    qa: list[QaItem] = []
    for i in range(n_questions):
        # the planted tokens repeat so the summary-to-question similarity
        # clears the lowered gate with margin over embedding noise
        planted = f"person{i:02d} object{i:02d}"
        preamble = (" ".join([planted] * 3) + " "
                    + " ".join(f"w{i:02d}x{j:02d}" for j in range(34)))
        tail = (f"person{i:02d} said the object{i:02d} was hidden near "
                f"city{i:02d} landmark{i:02d}")
        full = f"{preamble} {tail}"
        question = (f"where did person{i:02d} say the object{i:02d} "
                    f"was hidden")
        gold, _ = best_grounded_span(question, [full])
        qa.append(QaItem(question=question, gold_answer=gold,
                         category="multiblock", evidence=(len(events),)))
        events.append(_text_event(len(events), full))
    for _ in range(n_fillers):
        events.append(_text_event(len(events), _filler_text(rng, len(events))))
    overrides = {"disable_summarization": True, "theta": 0.05}
    return events, qa, overrides


@dataclass(frozen=True)
class SunsetsFixture:
    """A three-message conversation answerable only through the graph.

    The decoy message wins both dense and sparse retrieval at top-1, but
    only mentions the two painters. The sunset messages are reachable from
    the question's entity mentions through extracted relations, so the
    answer names the sunset exactly when graph expansion is enabled.
    """

    events: tuple[Event, ...]
    question: str
    token: str = "sunset"
    arm_graph: dict[str, Any] = field(
        default_factory=lambda: {"top_k_override": 1})
    arm_no_graph: dict[str, Any] = field(
        default_factory=lambda: {"top_k_override": 1, "disable_graph": True})


def sunsets_fixture() -> SunsetsFixture:
    texts = (
        "Caroline and Melanie both have so much in common",
        "Caroline said her painted subject was a glowing sunset",
        "Melanie said her painted subject was a lovely sunset",
    )
    events = tuple(_text_event(i, text) for i, text in enumerate(texts))
    return SunsetsFixture(
        events=events,
        question="What subject did Caroline and Melanie both paint",
    )
