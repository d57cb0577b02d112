from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np
from pydantic import BaseModel

from ..exceptions import DimensionMismatchError, EmbeddingFormatError, EmptyEmbeddingFileError, UnknownSymbolError
from ..logic.terms import canonical_relation, canonical_symbol

log = logging.getLogger(__name__)

_EPSILON = 1e-12


class LoadReport(BaseModel):
    records: int = 0
    loaded: int = 0
    zero_vectors: int = 0
    malformed: int = 0
    duplicates: int = 0
    filtered: int = 0
    header: bool = False


@dataclass(frozen=True, eq=False)
class EmbeddingStore:
    """
    Symbol to unit vector map of one fixed dimension.

    Row `i` of `matrix` is the vector of `symbols[i]`. The store is read-only
    once built and can be shared between threads.
    """

    symbols: tuple[str, ...]
    matrix: np.ndarray
    report: LoadReport = field(default_factory=LoadReport)

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.symbols):
            raise ValueError("matrix must have one row per symbol")
        self.matrix.setflags(write=False)
        object.__setattr__(self, "_rows", {s: i for i, s in enumerate(self.symbols)})
        object.__setattr__(self, "_composed", {})
        object.__setattr__(self, "_lock", threading.Lock())

    @classmethod
    def from_vectors(cls, vectors: Mapping[str, Iterable[float]]) -> EmbeddingStore:
        """Build a store from raw vectors; each is normalised, zero vectors are refused."""
        symbols = tuple(vectors)
        rows = [np.asarray(list(vectors[s]), dtype=np.float64) for s in symbols]
        if not rows:
            return cls((), np.zeros((0, 0)))

        dimension = rows[0].shape[0]
        for symbol, row in zip(symbols, rows):
            if row.shape != (dimension,):
                raise DimensionMismatchError(f"vector for '{symbol}' has {row.shape[0]} components, expected {dimension}")
            if np.linalg.norm(row) < _EPSILON:
                raise ValueError(f"vector for '{symbol}' is zero")

        matrix = np.vstack(rows)
        matrix /= np.linalg.norm(matrix, axis=1, keepdims=True)
        return cls(symbols, matrix, LoadReport(records=len(rows), loaded=len(rows)))

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    def __len__(self):
        return len(self.symbols)

    def __contains__(self, symbol: str) -> bool:
        return symbol in self._rows

    def vector(self, symbol: str) -> np.ndarray | None:
        row = self._rows.get(symbol)
        return None if row is None else self.matrix[row]


def _parse_header(tokens: list[str]) -> tuple[int, int] | None:
    if len(tokens) != 2:
        return None
    try:
        return int(tokens[0]), int(tokens[1])
    except ValueError:
        return None


def _record_symbol(token: str) -> str | None:
    # Numberbatch writes concept URIs (/c/en/dog); only the English part is kept
    if token.startswith("/r/"):
        return canonical_relation(token)
    if token.startswith("/c/"):
        parts = token.split("/")
        if len(parts) < 4 or parts[2] != "en":
            return None
        token = parts[3]
    return canonical_symbol(token)


def load_embeddings(path: str | Path) -> EmbeddingStore:
    """
    Read a word2vec-style text file: `symbol v1 ... vd` per line, optionally
    preceded by a `count dim` header. Vectors are unit-normalised.

    Zero vectors, unparseable records and repeated symbols are skipped and
    counted in the store's `report`; a record of the wrong width, or a header
    declaring a dimension below 1, is an error.
    """
    report = LoadReport()
    symbols: list[str] = []
    rows: list[np.ndarray] = []
    seen: set[str] = set()
    dimension = None

    with Path(path).open(encoding="utf-8") as fh:
        for line_number, line in enumerate(fh, start=1):
            tokens = line.split()
            if not tokens:
                continue

            if not report.records and not report.header and dimension is None:
                header = _parse_header(tokens)
                if header is not None:
                    count, dimension = header
                    if count < 0 or dimension < 1:
                        raise EmbeddingFormatError(
                            f"{path}, line {line_number}: header declares {count} vectors of dimension {dimension}"
                        )
                    report.header = True
                    continue

            report.records += 1
            try:
                values = np.array([float(t) for t in tokens[1:]], dtype=np.float64)
            except ValueError:
                report.malformed += 1
                log.debug("line %d: non-numeric component", line_number)
                continue
            if values.size == 0 or not np.all(np.isfinite(values)):
                report.malformed += 1
                continue

            if dimension is None:
                dimension = values.size
            elif values.size != dimension:
                raise DimensionMismatchError(
                    f"{path}, line {line_number}: {values.size} components, expected {dimension}"
                )

            symbol = _record_symbol(tokens[0])
            if symbol is None:
                report.filtered += 1
                continue
            if symbol in seen:
                report.duplicates += 1
                continue

            norm = np.linalg.norm(values)
            if norm < _EPSILON:
                report.zero_vectors += 1
                continue

            seen.add(symbol)
            symbols.append(symbol)
            rows.append(values / norm)

    if not rows:
        raise EmptyEmbeddingFileError(f"{path}: no usable embedding records")

    report.loaded = len(rows)
    log.info(
        "loaded %d vectors of dimension %d from %s (%d rejected)",
        report.loaded,
        dimension,
        path,
        report.records - report.loaded,
    )
    return EmbeddingStore(tuple(symbols), np.vstack(rows), report)


def lookup_vector(store: EmbeddingStore, symbol: str) -> np.ndarray | None:
    """
    Stored vector of `symbol`; for an unknown `a_b_c` the normalised mean of
    the known parts among a, b, c. None if nothing resolves.
    """
    found = store.vector(symbol)
    if found is not None or "_" not in symbol:
        return found

    composed = store._composed
    if symbol in composed:
        return composed[symbol]

    parts = [store.vector(p) for p in symbol.split("_") if p]
    parts = [p for p in parts if p is not None]
    vector = None
    if parts:
        mean = np.mean(parts, axis=0)
        norm = np.linalg.norm(mean)
        if norm >= _EPSILON:
            vector = mean / norm
            vector.setflags(write=False)

    with store._lock:
        composed[symbol] = vector
    return vector


def has_vector(store: EmbeddingStore, symbol: str) -> bool:
    return lookup_vector(store, symbol) is not None


def _require(store: EmbeddingStore, symbol: str) -> np.ndarray:
    vector = lookup_vector(store, symbol)
    if vector is None:
        raise UnknownSymbolError(symbol)
    return vector


def _clip(value: float) -> float:
    return float(min(1.0, max(-1.0, value)))


def cosine(store: EmbeddingStore, a: str, b: str) -> float:
    return _clip(float(np.dot(_require(store, a), _require(store, b))))


def similar_symbols(
    store: EmbeddingStore,
    symbol: str,
    threshold: float,
    restrict_to: Iterable[str] | None = None,
    exclude_self: bool = False,
) -> list[tuple[str, float]]:
    """
    Symbols with cosine to `symbol` of at least `threshold`, most similar
    first and lexicographic among equals. With `restrict_to` only those
    symbols are considered (underscore fallback included); otherwise the whole
    vocabulary is scanned.
    """
    if not -1.0 <= threshold <= 1.0:
        raise ValueError(f"threshold must lie in [-1, 1], got {threshold}")
    target = _require(store, symbol)

    if restrict_to is None:
        scores = store.matrix @ target if len(store) else np.zeros(0)
        pairs = zip(store.symbols, scores)
    else:
        candidates = sorted(set(restrict_to))
        pairs = []
        for candidate in candidates:
            vector = lookup_vector(store, candidate)
            if vector is not None:
                pairs.append((candidate, float(np.dot(target, vector))))

    result = [
        (candidate, _clip(score))
        for candidate, score in pairs
        if _clip(score) >= threshold and not (exclude_self and candidate == symbol)
    ]
    result.sort(key=lambda pair: (-pair[1], pair[0]))
    return result


def embed_symbols(store: EmbeddingStore, symbols: Iterable[str]) -> tuple[list[str], np.ndarray, list[str]]:
    """
    Split `symbols` into those with a vector and those without.

    Returns the embedded symbols in lexicographic order, their vectors as rows
    of a matrix, and the missing symbols (also sorted).
    """
    present, rows, missing = [], [], []
    for symbol in sorted(set(symbols)):
        vector = lookup_vector(store, symbol)
        if vector is None:
            missing.append(symbol)
        else:
            present.append(symbol)
            rows.append(vector)
    matrix = np.vstack(rows) if rows else np.zeros((0, store.dimension))
    return present, matrix, missing
