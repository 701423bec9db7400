"""The stochastic path problem: model, frontiers, and reductions."""

from .convex2 import convex_covers, convex_pareto_2
from .dag import (
    DagEdge,
    MultiWeightedDag,
    ParetoSet,
    PathRecord,
    enumerate_path_weights,
    live_vertices,
    parse_dag,
    path_record,
    path_value,
    serialize_dag,
    topological_order,
)
from .pareto import epsilon_convex_pareto, exact_pareto, pointwise_covers
from .reduce import (
    approximate_value,
    decide_stochastic_path,
    emptiness_2ambiguous,
    path_word,
    reduce_to_dag,
)

__all__ = [
    "DagEdge",
    "MultiWeightedDag",
    "ParetoSet",
    "PathRecord",
    "approximate_value",
    "convex_covers",
    "convex_pareto_2",
    "decide_stochastic_path",
    "emptiness_2ambiguous",
    "enumerate_path_weights",
    "epsilon_convex_pareto",
    "exact_pareto",
    "live_vertices",
    "parse_dag",
    "path_record",
    "path_value",
    "path_word",
    "pointwise_covers",
    "reduce_to_dag",
    "serialize_dag",
    "topological_order",
]
