from .store import (
    EmbeddingStore,
    LoadReport,
    cosine,
    embed_symbols,
    has_vector,
    load_embeddings,
    lookup_vector,
    similar_symbols,
)

__all__ = [
    "EmbeddingStore",
    "LoadReport",
    "cosine",
    "embed_symbols",
    "has_vector",
    "load_embeddings",
    "lookup_vector",
    "similar_symbols",
]
