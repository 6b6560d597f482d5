"""A unified lifelong memory engine for multimodal agent histories.

Observations stream in as events, survive novelty filtering, and become
compact memory units with summaries, embeddings, links, and cold payloads.
Queries run hybrid dense-plus-BM25 retrieval, knowledge-graph expansion,
and budgeted pyramid context assembly before a chat model grounds the
final answer.
"""

from .core.config import ConfigError, EngineConfig, load_config, validate_config
from .core.types import Mau, ModalityKind
from .ingest.events import Event
from .orchestrator.engine import Answer, MemoryEngine

__version__ = "0.1.0"

__all__ = [
    "Answer",
    "ConfigError",
    "EngineConfig",
    "Event",
    "Mau",
    "MemoryEngine",
    "ModalityKind",
    "load_config",
    "validate_config",
    "__version__",
]
