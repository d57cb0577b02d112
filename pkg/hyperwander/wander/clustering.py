"""
Seeded k-means over symbol vectors and the choice of a focus cluster.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from ..embed.store import EmbeddingStore, embed_symbols
from ..exceptions import ClusteringError, DimensionMismatchError, FocusError
from ..logic.formulas import And, AtomicFormula, Exists, Formula
from ..logic.terms import Atom, Term
from .params import ClusterPick, ClusterSimilarity

log = logging.getLogger(__name__)

MAX_ITERATIONS = 100
SHIFT_TOLERANCE = 1e-6


@dataclass(frozen=True)
class Cluster:
    members: tuple[str, ...]
    # cosine to the current context; set by rank_clusters
    similarity: float | None = None

    def __post_init__(self):
        if not self.members:
            raise ValueError("a cluster needs at least one member")
        object.__setattr__(self, "members", tuple(sorted(self.members)))

    @property
    def symbols(self) -> frozenset[str]:
        return frozenset(self.members)


def _kmeans_plusplus(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = points.shape[0]
    chosen = [int(rng.integers(n))]
    for _ in range(1, k):
        centroids = points[chosen]
        d2 = np.min(((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2), axis=1)
        total = d2.sum()
        if total <= 0:
            # the rest coincide with chosen centroids; take the first unused point
            chosen.append(next(i for i in range(n) if i not in chosen))
        else:
            chosen.append(int(rng.choice(n, p=d2 / total)))
    return points[chosen].copy()


def _repair_empty(points: np.ndarray, centroids: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    """Give every empty cluster the point lying farthest from its own centroid."""
    labels = labels.copy()
    for j in range(k):
        if np.any(labels == j):
            continue
        sizes = np.bincount(labels, minlength=k)
        own = ((points - centroids[labels]) ** 2).sum(axis=1)
        # points that are the last member of their cluster cannot move
        own[sizes[labels] <= 1] = -1.0
        victim = int(np.argmax(own))
        labels[victim] = j
        centroids[j] = points[victim]
    return labels


def kmeans(points: Sequence[tuple[str, np.ndarray]], k: int, seed: int = 0) -> list[Cluster]:
    """
    Partition symbols into `k` non-empty clusters.

    Lloyd iterations with squared Euclidean distance (on unit vectors this
    orders like cosine), k-means++ seeding from `seed`, stopping when no
    centroid moves more than 1e-6 or after 100 iterations. Points are
    processed in symbol order so the result depends only on the inputs and
    the seed. Clusters come back ordered by their smallest member.
    """
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if k > len(points):
        raise ClusteringError(f"cannot form {k} clusters from {len(points)} points")

    ordered = sorted(points, key=lambda p: p[0])
    symbols = [s for s, _v in ordered]
    vectors = [np.asarray(v, dtype=np.float64) for _s, v in ordered]
    dimension = vectors[0].shape
    for symbol, vector in zip(symbols, vectors):
        if vector.shape != dimension:
            raise DimensionMismatchError(f"vector of '{symbol}' has shape {vector.shape}, expected {dimension}")
    matrix = np.vstack(vectors)

    rng = np.random.default_rng(seed)
    centroids = _kmeans_plusplus(matrix, k, rng)
    labels = np.zeros(len(symbols), dtype=int)

    for iteration in range(MAX_ITERATIONS):
        distances = ((matrix[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = _repair_empty(matrix, centroids, np.argmin(distances, axis=1), k)

        updated = np.vstack([matrix[labels == j].mean(axis=0) for j in range(k)])
        shift = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if shift < SHIFT_TOLERANCE:
            break
    log.debug("kmeans: %d points, k=%d, %d iterations", len(symbols), k, iteration + 1)

    groups = [tuple(s for s, label in zip(symbols, labels) if label == j) for j in range(k)]
    return sorted((Cluster(g) for g in groups), key=lambda c: c.members[0])


def choose_k(n: int, divisor: int = 4) -> int:
    if n < 0:
        raise ValueError(f"symbol count must be non-negative, got {n}")
    if divisor < 1:
        raise ValueError(f"divisor must be positive, got {divisor}")
    if n == 0:
        return 0
    return max(1, n // divisor)


def _cluster_similarity(
    members: np.ndarray, context: np.ndarray, similarity: ClusterSimilarity
) -> float:
    if similarity == ClusterSimilarity.CENTROID:
        a, b = members.mean(axis=0), context.mean(axis=0)
        norm = np.linalg.norm(a) * np.linalg.norm(b)
        return float(np.dot(a, b) / norm) if norm > 0 else 0.0
    return float(np.mean(members @ context.T))


def order_clusters(clusters: Iterable[Cluster]) -> list[Cluster]:
    """Descending similarity, ties to the cluster with the smaller first member."""
    return sorted(clusters, key=lambda c: (-(c.similarity or 0.0), c.members[0]))


def rank_clusters(
    clusters: Iterable[Cluster],
    ctx: Iterable[str],
    store: EmbeddingStore,
    similarity: ClusterSimilarity = ClusterSimilarity.MEAN,
) -> list[Cluster]:
    """
    Clusters with their context similarity filled in, most similar first.

    Context symbols without a vector are ignored; if none has one, every
    cluster scores 0 and the tie rule decides.
    """
    _present, context, missing = embed_symbols(store, ctx)
    if missing:
        log.debug("ranking ignores unembedded context symbols: %s", ", ".join(missing))

    scored = []
    for cluster in clusters:
        if not len(context):
            scored.append(replace(cluster, similarity=0.0))
            continue
        _members, vectors, _missing = embed_symbols(store, cluster.members)
        score = _cluster_similarity(vectors, context, similarity) if len(vectors) else 0.0
        scored.append(replace(cluster, similarity=score))
    return order_clusters(scored)


def pick_index(m: int, strategy: ClusterPick, index: int = 0) -> int:
    if m < 1:
        raise ValueError("no clusters to pick from")
    match strategy:
        case ClusterPick.MIDDLE:
            return m // 2
        case ClusterPick.NEAREST:
            return 0
        case ClusterPick.FARTHEST:
            return m - 1
        case ClusterPick.INDEX:
            return min(max(index, 0), m - 1)
    raise ValueError(f"unknown cluster pick strategy: {strategy}")


def pick_focus(ordered: Sequence[Cluster], strategy: ClusterPick = ClusterPick.MIDDLE, index: int = 0) -> Cluster:
    return ordered[pick_index(len(ordered), strategy, index)]


def focus_formula(focus: Iterable[str]) -> Formula:
    """`exists X (s1(X) & s2(X) & ...)` over the focus symbols in lexicographic order."""
    symbols = sorted(set(focus))
    if not symbols:
        raise FocusError("cannot build a focus formula from an empty symbol set")

    x = Term.var("X")
    atoms = tuple(AtomicFormula(Atom(s, (x,))) for s in symbols)
    return Exists(("X",), atoms[0] if len(atoms) == 1 else And(atoms))
