"""Acyclic multi-weighted graphs: the optimisation side of the analysis.

An instance is an acyclic graph whose edges carry k-tuples of rationals
in [0, 1]; a path multiplies weights componentwise and its value is the
sum of the resulting components.  Parallel edges between the same
vertex pair are allowed and edges keep their declaration order, which
doubles as their identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import FormatError, InvariantError
from ..ratio import format_ratio, parse_ratio

__all__ = [
    "DagEdge",
    "MultiWeightedDag",
    "PathRecord",
    "ParetoSet",
    "parse_dag",
    "serialize_dag",
    "topological_order",
    "path_record",
    "path_value",
    "live_vertices",
    "enumerate_path_weights",
]

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class DagEdge:
    src: str
    dst: str
    weights: tuple[Fraction, ...]
    label: str | None = None  # simulation letter, for witness extraction


@dataclass(frozen=True)
class MultiWeightedDag:
    vertices: tuple[str, ...]
    edges: tuple[DagEdge, ...]
    source: str
    target: str
    k: int

    def __post_init__(self):
        known = set(self.vertices)
        if len(known) != len(self.vertices):
            raise InvariantError("duplicate vertex names")
        for v in (self.source, self.target):
            if v not in known:
                raise InvariantError(f"unknown vertex {v!r}")
        for edge in self.edges:
            if edge.src not in known or edge.dst not in known:
                raise InvariantError(f"edge {edge.src!r} -> {edge.dst!r} off-graph")
            if len(edge.weights) != self.k:
                raise InvariantError(
                    f"edge {edge.src!r} -> {edge.dst!r} carries "
                    f"{len(edge.weights)} weights, expected {self.k}"
                )
            for w in edge.weights:
                if not (0 <= w <= 1):
                    raise InvariantError(f"weight {w} outside [0, 1]")
        topological_order(self)  # raises on cycles

    def out_edges(self, v: str) -> list[int]:
        return self._out.get(v, [])

    @property
    def _out(self) -> dict[str, list[int]]:
        cache = self.__dict__.get("_out_cache")
        if cache is None:
            cache = {}
            for idx, edge in enumerate(self.edges):
                cache.setdefault(edge.src, []).append(idx)
            self.__dict__["_out_cache"] = cache
        return cache


def topological_order(dag: MultiWeightedDag) -> list[str]:
    """Vertices in a topological order (deterministic: declaration order
    among ready vertices); raises if the edge relation has a cycle."""
    indegree = {v: 0 for v in dag.vertices}
    succ: dict[str, list[str]] = {v: [] for v in dag.vertices}
    for edge in dag.edges:
        indegree[edge.dst] += 1
        succ[edge.src].append(edge.dst)
    order = []
    ready = [v for v in dag.vertices if indegree[v] == 0]
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indegree[w] -= 1
            if indegree[w] == 0:
                ready.append(w)
    if len(order) != len(dag.vertices):
        raise InvariantError("edge relation has a cycle")
    return order


# ---------------------------------------------------------------------------
# Paths
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PathRecord:
    """An s-to-t path: edge indices, the componentwise product of the
    edge weights, and the value (component sum)."""

    edges: tuple[int, ...]
    weight: tuple[Fraction, ...]
    value: Fraction


def path_record(dag: MultiWeightedDag, edge_ids: Sequence[int]) -> PathRecord:
    """Build the record for a path given by consecutive edge indices.

    The empty sequence is the empty path (source equals target), whose
    weight is all ones and whose value is k.
    """
    weight = [ONE] * dag.k
    position = dag.source
    for idx in edge_ids:
        edge = dag.edges[idx]
        if edge.src != position:
            raise InvariantError(f"edge {idx} does not continue the path")
        weight = [w * ew for w, ew in zip(weight, edge.weights)]
        position = edge.dst
    if position != dag.target:
        raise InvariantError("path does not end at the target")
    weight_t = tuple(weight)
    return PathRecord(edges=tuple(edge_ids), weight=weight_t,
                      value=sum(weight_t, ZERO))


def path_value(path: PathRecord) -> Fraction:
    """Exact value of a path: the sum of its weight components."""
    return sum(path.weight, ZERO)


@dataclass(frozen=True)
class ParetoSet:
    """A set of paths returned by a frontier computation, sorted by
    descending first weight component (exact comparison)."""

    members: tuple[PathRecord, ...]

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def max_value(self) -> Fraction:
        """Largest member value; 0 when the set is empty (no path exists)."""
        return max((m.value for m in self.members), default=ZERO)


def sort_members(members: Iterable[PathRecord]) -> tuple[PathRecord, ...]:
    return tuple(
        sorted(members, key=lambda m: tuple(-w for w in m.weight) + (m.edges,))
    )


# ---------------------------------------------------------------------------
# Live restriction and brute-force enumeration
# ---------------------------------------------------------------------------


def live_vertices(
    dag: MultiWeightedDag, usable_edges: Iterable[int] | None = None
) -> frozenset[str]:
    """Vertices both reachable from the source and able to reach the
    target, optionally through a restricted edge set.  Empty when no
    s-to-t path exists.  Edge indices are untouched, so path records
    built on the restriction stay comparable with the full graph."""
    if usable_edges is None:
        edge_ids = range(len(dag.edges))
    else:
        edge_ids = list(usable_edges)
    succ: dict[str, set[str]] = {v: set() for v in dag.vertices}
    pred: dict[str, set[str]] = {v: set() for v in dag.vertices}
    for idx in edge_ids:
        edge = dag.edges[idx]
        succ[edge.src].add(edge.dst)
        pred[edge.dst].add(edge.src)

    def closure(seed: str, relation: dict[str, set[str]]) -> set[str]:
        seen = {seed}
        stack = [seed]
        while stack:
            for nxt in relation[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    live = closure(dag.source, succ) & closure(dag.target, pred)
    if dag.source not in live or dag.target not in live:
        return frozenset()
    return frozenset(live)


def enumerate_path_weights(dag: MultiWeightedDag, limit: int = 1_000_000):
    """Yield every s-to-t path as a PathRecord, in depth-first edge
    order.  Intended for oracles and small instances; guarded."""
    count = 0

    def walk(v: str, edges: list[int], weight: list[Fraction]):
        nonlocal count
        if v == dag.target:
            count += 1
            if count > limit:
                raise InvariantError("path enumeration limit exceeded")
            weight_t = tuple(weight)
            yield PathRecord(tuple(edges), weight_t, sum(weight_t, ZERO))
        for idx in dag.out_edges(v):
            edge = dag.edges[idx]
            edges.append(idx)
            new_weight = [w * ew for w, ew in zip(weight, edge.weights)]
            yield from walk(edge.dst, edges, new_weight)
            edges.pop()

    yield from walk(dag.source, [], [ONE] * dag.k)


# ---------------------------------------------------------------------------
# .spg v1 text format
# ---------------------------------------------------------------------------


def parse_dag(text: str) -> MultiWeightedDag:
    """Parse the ``spg v1`` line format."""
    k: int | None = None
    vertices: list[str] = []
    seen_vertices: set[str] = set()
    source: str | None = None
    target: str | None = None
    edges: list[DagEdge] = []
    seen_header = False

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not seen_header:
            if len(tokens) != 3 or tokens[:2] != ["spg", "v1"] or not tokens[
                2
            ].startswith("k="):
                raise FormatError("expected header 'spg v1 k=<K>'", lineno)
            try:
                k = int(tokens[2][2:])
            except ValueError:
                raise FormatError("malformed k in header", lineno) from None
            if k < 1:
                raise FormatError("k must be positive", lineno)
            seen_header = True
            continue
        keyword, args = tokens[0], tokens[1:]
        if keyword == "vertex":
            for v in args:
                if v in seen_vertices:
                    raise FormatError(f"duplicate vertex {v!r}", lineno)
                seen_vertices.add(v)
                vertices.append(v)
        elif keyword == "source":
            if len(args) != 1:
                raise FormatError("expected 'source <name>'", lineno)
            source = args[0]
        elif keyword == "target":
            if len(args) != 1:
                raise FormatError("expected 'target <name>'", lineno)
            target = args[0]
        elif keyword == "edge":
            if k is None or len(args) != 2 + k:
                raise FormatError(
                    f"expected 'edge <src> <dst>' followed by {k} rationals", lineno
                )
            src, dst = args[0], args[1]
            for v in (src, dst):
                if v not in seen_vertices:
                    raise FormatError(f"unknown vertex {v!r}", lineno)
            weights = tuple(parse_ratio(tok, lineno) for tok in args[2:])
            edges.append(DagEdge(src=src, dst=dst, weights=weights))
        else:
            raise FormatError(f"unknown keyword {keyword!r}", lineno)

    if not seen_header:
        raise FormatError("expected header 'spg v1 k=<K>'", 1)
    if source is None or target is None:
        raise FormatError("missing 'source' or 'target' line")
    try:
        return MultiWeightedDag(
            vertices=tuple(vertices),
            edges=tuple(edges),
            source=source,
            target=target,
            k=k,
        )
    except InvariantError as exc:
        raise FormatError(str(exc)) from exc


def serialize_dag(dag: MultiWeightedDag) -> str:
    out = [f"spg v1 k={dag.k}"]
    if dag.vertices:
        out.append("vertex " + " ".join(dag.vertices))
    out.append(f"source {dag.source}")
    out.append(f"target {dag.target}")
    for edge in dag.edges:
        weights = " ".join(format_ratio(w) for w in edge.weights)
        out.append(f"edge {edge.src} {edge.dst} {weights}")
    return "\n".join(out) + "\n"
