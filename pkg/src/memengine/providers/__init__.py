from .base import ChatProvider, ChatRequest, EmbeddingProvider, EntityExtractor, ProviderError
from .http import HttpChatProvider, HttpEmbeddingProvider
from .mock import (
    MockChatProvider,
    MockEmbeddingProvider,
    MockEntityExtractor,
    best_grounded_span,
    find_time_references,
    lexicon,
    mock_chat,
    mock_embed,
    mock_entity_extract,
)

__all__ = [
    "ChatProvider",
    "ChatRequest",
    "EmbeddingProvider",
    "EntityExtractor",
    "HttpChatProvider",
    "HttpEmbeddingProvider",
    "MockChatProvider",
    "MockEmbeddingProvider",
    "MockEntityExtractor",
    "ProviderError",
    "best_grounded_span",
    "find_time_references",
    "lexicon",
    "mock_chat",
    "mock_embed",
    "mock_entity_extract",
]
