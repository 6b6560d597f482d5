"""Query pipeline coordination and the prompt catalog."""

from .engine import Answer, AnswerError, EngineView, MemoryEngine, QueryTrace
from .prompts import (
    CATALOG,
    CONCISENESS_BOOST,
    GALLERY_CONSTRAINTS,
    PromptError,
    PromptTemplate,
    render_prompt,
)

__all__ = [
    "Answer",
    "AnswerError",
    "CATALOG",
    "CONCISENESS_BOOST",
    "EngineView",
    "GALLERY_CONSTRAINTS",
    "MemoryEngine",
    "PromptError",
    "PromptTemplate",
    "QueryTrace",
    "render_prompt",
]
