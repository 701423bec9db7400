"""Frontier dynamic programming over acyclic multi-weighted graphs.

``exact_pareto`` keeps, per vertex in topological order, all achievable
weight vectors that are not componentwise dominated (worst case
exponential, budget-guarded).  ``epsilon_convex_pareto`` buckets each
component on a geometric grid so that along any path the accumulated
loss stays within the requested (1 + eps) factor; its output covers
every path pointwise up to that factor, which is stronger than the
convex-combination requirement it is named after.
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from ..errors import BudgetExceededError
from .dag import (
    MultiWeightedDag,
    ParetoSet,
    PathRecord,
    ZERO,
    ONE,
    live_vertices,
    sort_members,
    topological_order,
)

__all__ = ["exact_pareto", "epsilon_convex_pareto", "pointwise_covers"]

DEFAULT_FRONTIER_BUDGET = int(os.environ.get("PBA_BUDGET", 5_000_000)) // 25


def _dominates(a: tuple[Fraction, ...], b: tuple[Fraction, ...]) -> bool:
    """a componentwise at least b (equality counts as domination)."""
    return all(x >= y for x, y in zip(a, b))


def _run_frontier_dp(dag, keep, budget, budget_name):
    """Shared topological sweep: ``keep`` prunes one vertex's candidate
    pool down to the entries worth extending.  Entries are
    (weight vector, edge id tuple) pairs; the pool at the source starts
    with the empty path."""
    live = live_vertices(dag)
    if not live:
        return []
    order = [v for v in topological_order(dag) if v in live]
    pools: dict[str, list[tuple[tuple[Fraction, ...], tuple[int, ...]]]] = {
        v: [] for v in order
    }
    pools[dag.source] = [(tuple([ONE] * dag.k), ())]
    for v in order:
        entries = keep(pools[v])
        pools[v] = entries
        if len(entries) > budget:
            raise BudgetExceededError(budget_name, budget, "raise PBA_BUDGET or pass --budget")
        if v == dag.target:
            continue
        for idx in dag.out_edges(v):
            edge = dag.edges[idx]
            if edge.dst not in live:
                continue
            extended = [
                (tuple(w * ew for w, ew in zip(weight, edge.weights)), edges + (idx,))
                for weight, edges in entries
            ]
            pools[edge.dst].extend(extended)
    return pools[dag.target]


def _prune_dominated(pool):
    """Keep one entry per maximal weight vector; first entry wins ties so
    the result is deterministic in edge-declaration order."""
    kept: list[tuple[tuple[Fraction, ...], tuple[int, ...]]] = []
    for weight, edges in pool:
        dominated = False
        for kw, _ in kept:
            if _dominates(kw, weight):
                dominated = True
                break
        if dominated:
            continue
        kept = [(kw, ke) for kw, ke in kept if not _dominates(weight, kw)]
        kept.append((weight, edges))
    return kept


def exact_pareto(dag: MultiWeightedDag, budget: int | None = None) -> ParetoSet:
    """The exact Pareto curve of all s-to-t paths.

    Raises :class:`BudgetExceededError` when some intermediate frontier
    grows past the budget; callers should fall back to the epsilon
    variant in that case.
    """
    if budget is None:
        budget = DEFAULT_FRONTIER_BUDGET
    final = _run_frontier_dp(dag, _prune_dominated, budget, "exact frontier")
    members = [
        PathRecord(edges=edges, weight=weight, value=sum(weight, ZERO))
        for weight, edges in final
    ]
    return ParetoSet(members=sort_members(members))


# ---------------------------------------------------------------------------
# Geometric-grid frontier (the polynomial-time approximation)
# ---------------------------------------------------------------------------


def _longest_path_edges(dag: MultiWeightedDag, live: frozenset[str]) -> int:
    dist = {v: 0 for v in dag.vertices if v in live}
    for v in [u for u in topological_order(dag) if u in live]:
        for idx in dag.out_edges(v):
            edge = dag.edges[idx]
            if edge.dst in live and dist[v] + 1 > dist[edge.dst]:
                dist[edge.dst] = dist[v] + 1
    return dist.get(dag.target, 0)


class _GeometricGrid:
    """Bucket positive rationals so that values sharing a bucket are
    within a factor (1 + eps)^(1/L) of each other.

    The bucket of x is the unique integer m with
    (1+eps)^m <= x^L < (1+eps)^(m+1); taking the L-th power avoids any
    irrational arithmetic.  A float estimate picks m and an exact
    big-integer power comparison settles it only when the estimate is
    too close to an integer to be trusted.
    """

    FLOAT_SAFETY = 1e-6

    def __init__(self, eps: Fraction, path_length: int):
        self.base = ONE + eps
        self.length = max(path_length, 1)
        self._log_base = math.log(float(self.base))
        self._power_cache: dict[int, Fraction] = {0: ONE}

    def _power(self, exponent: int) -> Fraction:
        value = self._power_cache.get(exponent)
        if value is None:
            value = self.base**exponent
            self._power_cache[exponent] = value
        return value

    def bucket(self, x: Fraction) -> int:
        if x <= 0:
            raise ValueError("geometric grid only buckets positive values")
        # log on the integer parts: immune to float under/overflow of
        # the quotient itself
        estimate = (
            self.length
            * (math.log(x.numerator) - math.log(x.denominator))
            / self._log_base
        )
        m = math.floor(estimate)
        if min(estimate - m, m + 1 - estimate) >= self.FLOAT_SAFETY:
            return m
        # too close to a boundary: settle exactly
        xl = x**self.length
        while self._power(m) > xl:
            m -= 1
        while self._power(m + 1) <= xl:
            m += 1
        return m

    def key(self, weight: tuple[Fraction, ...]) -> tuple:
        # zero components get a dedicated bucket: no positive value may
        # be covered by a zero representative
        return tuple("zero" if w == 0 else self.bucket(w) for w in weight)


def epsilon_convex_pareto(
    dag: MultiWeightedDag, eps: Fraction, budget: int | None = None
) -> ParetoSet:
    """A set of paths covering every s-to-t path within a factor
    (1 + eps) on every component, of size polynomial in the instance
    and 1/eps.

    Per vertex, one representative (the best seen by value, then by
    weight) is kept per tuple of geometric buckets of ratio
    (1+eps)^(1/L), L being the edge count of the longest s-to-t path;
    the per-step loss then compounds to at most (1 + eps) overall.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if budget is None:
        budget = DEFAULT_FRONTIER_BUDGET
    live = live_vertices(dag)
    if not live:
        return ParetoSet(members=())
    grid = _GeometricGrid(eps, _longest_path_edges(dag, live))

    def keep(pool):
        reps: dict[tuple, tuple[tuple[Fraction, ...], tuple[int, ...]]] = {}
        for weight, edges in pool:
            key = grid.key(weight)
            incumbent = reps.get(key)
            if incumbent is None:
                reps[key] = (weight, edges)
                continue
            if (sum(weight, ZERO), weight) > (sum(incumbent[0], ZERO), incumbent[0]):
                reps[key] = (weight, edges)
        return list(reps.values())

    final = _run_frontier_dp(dag, keep, budget, "approximation frontier")
    final = _prune_dominated(final)
    members = [
        PathRecord(edges=edges, weight=weight, value=sum(weight, ZERO))
        for weight, edges in final
    ]
    return ParetoSet(members=sort_members(members))


def pointwise_covers(
    curve: ParetoSet, weight: tuple[Fraction, ...], eps: Fraction = ZERO
) -> bool:
    """Exact check that some member covers ``weight`` componentwise up to
    a (1 + eps) factor."""
    factor = ONE + Fraction(eps)
    return any(
        all(w <= factor * mw for w, mw in zip(weight, member.weight))
        for member in curve
    )
