from .clustering import Cluster, choose_k, focus_formula, kmeans, pick_focus, rank_clusters
from .loop import (
    TRACE_SCHEMA,
    ClusterRecord,
    Round,
    WanderResult,
    WanderState,
    render_chain,
    replay_round,
    wander,
    wander_step,
)
from .params import ClusterPick, ClusterSimilarity, WanderParams
from .trace import read_trace, write_trace

__all__ = [
    "TRACE_SCHEMA",
    "Cluster",
    "ClusterPick",
    "ClusterRecord",
    "ClusterSimilarity",
    "Round",
    "WanderParams",
    "WanderResult",
    "WanderState",
    "choose_k",
    "focus_formula",
    "kmeans",
    "pick_focus",
    "rank_clusters",
    "read_trace",
    "render_chain",
    "replay_round",
    "wander",
    "wander_step",
    "write_trace",
]
