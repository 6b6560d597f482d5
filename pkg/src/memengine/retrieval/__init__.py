from .dense import DenseIndex
from .indexes import build_indexes, load_index_cache, load_or_build, write_index_cache
from .merge import hybrid_search, merge_union
from .model import Candidate, ContextBlock, ContextBundle
from .pyramid import pyramid_expand, summaries_only
from .sparse import SparseIndex

__all__ = [
    "Candidate",
    "ContextBlock",
    "ContextBundle",
    "DenseIndex",
    "SparseIndex",
    "build_indexes",
    "hybrid_search",
    "load_index_cache",
    "load_or_build",
    "merge_union",
    "pyramid_expand",
    "summaries_only",
    "write_index_cache",
]
