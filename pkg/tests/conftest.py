"""Shared fixtures: engine factories, event builders, hypothesis profile."""

from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from memengine.core.types import ModalityKind, ms_to_iso
from memengine.ingest.events import Event
from memengine.orchestrator.engine import MemoryEngine

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

BASE_MS = 1735689600000  # 2025-01-01T00:00:00Z


def make_event(index: int, text: str, *, conversation_id: str = "conv-0",
               speaker: str = "Avery", modality: str = "text",
               **extra) -> Event:
    return Event(
        conversation_id=conversation_id,
        speaker=speaker,
        timestamp_iso=ms_to_iso(BASE_MS + index * 1000),
        modality=ModalityKind(modality),
        text=text,
        **extra,
    )


@pytest.fixture
def event_builder():
    return make_event


@pytest.fixture
def engine_factory(tmp_path):
    """Create engines under the test's tmp dir and close them at teardown."""
    opened: list[MemoryEngine] = []
    counter = [0]

    def build(cfg=None, subdir: str | None = None, **kwargs) -> MemoryEngine:
        counter[0] += 1
        name = subdir or f"store-{counter[0]}"
        engine = MemoryEngine.create(tmp_path / name, cfg=cfg, **kwargs)
        opened.append(engine)
        return engine

    yield build
    for engine in opened:
        engine.close()


@pytest.fixture
def seeded_engine(engine_factory):
    """A committed three-memory store with distinct, searchable texts."""
    engine = engine_factory()
    texts = [
        "Rosa adopted a grey terrier from the shelter on Elm street",
        "Felix repaired the broken greenhouse window before the storm",
        "Rosa planted tulip bulbs along the southern fence in autumn",
    ]
    for i, text in enumerate(texts):
        result = engine.ingest(make_event(i, text))
        assert result.accepted
    engine.commit()
    return engine
