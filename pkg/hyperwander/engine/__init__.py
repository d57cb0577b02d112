from .tableau import (
    Branch,
    ExtensionOutcome,
    Limits,
    SaturationResult,
    SaturationStats,
    SaturationStatus,
    check_arities,
    hyper_extend,
    match_atom,
    match_body,
    model_lines,
    saturate,
    violated_instances,
    write_model,
)

__all__ = [
    "Branch",
    "ExtensionOutcome",
    "Limits",
    "SaturationResult",
    "SaturationStats",
    "SaturationStatus",
    "check_arities",
    "hyper_extend",
    "match_atom",
    "match_body",
    "model_lines",
    "saturate",
    "violated_instances",
    "write_model",
]
