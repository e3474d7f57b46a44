from .lexicon import TEMPORAL_LEXICON, split_query
from .query import (
    AgentScore,
    QueryModels,
    QueryRequest,
    QueryResult,
    QueryWeights,
    query,
)

__all__ = [
    "TEMPORAL_LEXICON",
    "split_query",
    "QueryRequest",
    "QueryResult",
    "QueryWeights",
    "QueryModels",
    "AgentScore",
    "query",
]
