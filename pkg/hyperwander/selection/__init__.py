from .params import SelectionMode, SelectionParams
from .select import expand_context, semantic_select, syntactic_select

__all__ = [
    "SelectionMode",
    "SelectionParams",
    "expand_context",
    "semantic_select",
    "syntactic_select",
]
