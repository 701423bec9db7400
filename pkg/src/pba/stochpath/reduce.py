"""Reduction from k-ambiguous automata to stochastic-path instances,
and the decision / approximation algorithms built on top of it.

A vertex of the reduction graph tracks k simultaneous runs: their
current states, the number of letters read so far, and one flag per
pair of runs recording whether the two runs have differed anywhere.
Target edges pay 1 on a component exactly when its run is accepting and
flagged distinct from every earlier run, so a path's value sums the
probabilities of pairwise-distinct accepting runs.  Two facts make the
reduction exact: every word (up to the witness length bound) induces a
path of equal value, and every path reads off a word whose probability
is at least the path's value.
"""

from __future__ import annotations

import os
from fractions import Fraction
from itertools import product

from ..ambiguity import is_k_ambiguous
from ..automaton import ProbabilisticAutomaton, acceptance_probability, trim
from ..errors import AmbiguityError, BudgetExceededError, InvariantError
from .convex2 import convex_pareto_2
from .dag import DagEdge, MultiWeightedDag, PathRecord, ZERO, ONE
from .pareto import epsilon_convex_pareto, exact_pareto

__all__ = [
    "reduce_to_dag",
    "decide_stochastic_path",
    "approximate_value",
    "emptiness_2ambiguous",
    "path_word",
]

DEFAULT_BUDGET = int(os.environ.get("PBA_BUDGET", 5_000_000))

# beyond k = 3 the tracked state space (n^k times the length bound
# times 2^(k(k-1)/2)) stops being desk-sized
MAX_DEFAULT_K = 3

# automatic k-ambiguity verification is skipped above this product size
CHECK_SIZE_LIMIT = 500_000


def _pair_bit(i: int, j: int) -> int:
    return j * (j - 1) // 2 + i


def reduce_to_dag(
    pa: ProbabilisticAutomaton,
    k: int,
    length_bound: int | None = None,
    check: bool | None = None,
    allow_large_k: bool = False,
    budget: int | None = None,
) -> MultiWeightedDag:
    """Build the stochastic-path instance of a k-ambiguous automaton.

    ``length_bound`` defaults to n^k on the trimmed automaton (the
    witness length bound).  ``check`` controls the k-ambiguity
    precondition: None verifies it when the product search is small
    enough and trusts the caller otherwise.  ``allow_large_k`` lifts
    the default refusal of k above 3.

    Initial sub-distributions are supported directly: one source edge
    per k-tuple of initial-support states, weighted by the tuple's
    initial masses.  With a single initial state this is one edge of
    weight (1, ..., 1).
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if k > MAX_DEFAULT_K and not allow_large_k:
        raise InvariantError(
            f"k = {k} refused by default (state space grows as "
            f"n^k * length * 2^(k(k-1)/2)); pass allow_large_k to override"
        )
    if budget is None:
        budget = DEFAULT_BUDGET
    trimmed = trim(pa)
    n = len(trimmed.states)
    if length_bound is None:
        length_bound = n**k
    if check is None:
        check = (n + 1) ** (k + 1) * 2 ** ((k + 1) * k // 2) <= CHECK_SIZE_LIMIT
    if check and not is_k_ambiguous(trimmed, k):
        raise AmbiguityError(f"automaton is not {k}-ambiguous")

    def initial_mask(tup: tuple[str, ...]) -> int:
        mask = 0
        for j in range(k):
            for i in range(j):
                if tup[i] != tup[j]:
                    mask |= 1 << _pair_bit(i, j)
        return mask

    def target_weights(tup: tuple[str, ...], mask: int) -> tuple[Fraction, ...]:
        weights = []
        for i in range(k):
            distinct = all(mask >> _pair_bit(j, i) & 1 for j in range(i))
            weights.append(ONE if tup[i] in trimmed.accepting and distinct else ZERO)
        return tuple(weights)

    names: dict[tuple[tuple[str, ...], int, int], str] = {}
    edges: list[DagEdge] = []
    queue: list[tuple[tuple[str, ...], int, int]] = []

    def vertex(node: tuple[tuple[str, ...], int, int]) -> str:
        name = names.get(node)
        if name is None:
            name = f"v{len(names)}"
            names[node] = name
            queue.append(node)
            if len(names) > budget:
                raise BudgetExceededError(
                    "reduction vertex count", budget, "raise PBA_BUDGET or pass --budget"
                )
        return name

    starts = sorted(trimmed.initial, key=trimmed.state_index)
    for tup in product(starts, repeat=k):
        weights = tuple(trimmed.initial[q] for q in tup)
        node = (tup, 0, initial_mask(tup))
        edges.append(DagEdge(src="s", dst=vertex(node), weights=weights))

    head = 0
    while head < len(queue):
        node = queue[head]
        head += 1
        tup, depth, mask = node
        src = names[node]
        edges.append(
            DagEdge(src=src, dst="t", weights=target_weights(tup, mask))
        )
        if depth == length_bound:
            continue
        for a in trimmed.alphabet:
            rows = [trimmed.row(q, a) for q in tup]
            if any(not row for row in rows):
                continue
            targets = [
                sorted(row, key=trimmed.state_index) for row in rows
            ]
            for tup2 in product(*targets):
                mask2 = mask
                for j in range(k):
                    for i in range(j):
                        if tup2[i] != tup2[j]:
                            mask2 |= 1 << _pair_bit(i, j)
                weights = tuple(rows[i][tup2[i]] for i in range(k))
                node2 = (tup2, depth + 1, mask2)
                edges.append(
                    DagEdge(src=src, dst=vertex(node2), weights=weights, label=a)
                )

    # names were assigned v0, v1, ... in discovery order
    ordered = ["s"] + [f"v{i}" for i in range(len(names))] + ["t"]
    return MultiWeightedDag(
        vertices=tuple(ordered),
        edges=tuple(edges),
        source="s",
        target="t",
        k=k,
    )


def path_word(dag: MultiWeightedDag, path: PathRecord) -> tuple[str, ...]:
    """The word read along a reduction path: the labels of its
    simulation edges, in order."""
    return tuple(
        dag.edges[idx].label for idx in path.edges if dag.edges[idx].label is not None
    )


def decide_stochastic_path(
    dag: MultiWeightedDag, threshold: Fraction, budget: int | None = None
) -> tuple[bool, PathRecord | None]:
    """Does some s-to-t path have value strictly above the threshold?

    Dispatches to the convex curve for two objectives and to the exact
    frontier otherwise; the maximum of the value over the returned
    curve is the true maximum over all paths, because the component sum
    is convex, so its maximum over mixtures is attained at a member.
    """
    if dag.k == 2:
        curve = convex_pareto_2(dag)
    else:
        curve = exact_pareto(dag, budget=budget)
    best: PathRecord | None = None
    for member in curve:
        if best is None or member.value > best.value:
            best = member
    if best is not None and best.value > threshold:
        return True, best
    return False, None


def approximate_value(
    pa: ProbabilisticAutomaton,
    k: int,
    eps: Fraction,
    check: bool | None = None,
    allow_large_k: bool = False,
) -> Fraction:
    """A value Output with Output <= val(P) <= (1 + eps) * Output, in
    time polynomial in the automaton and 1/eps for fixed k: reduce to
    the stochastic-path instance, build the (1+eps)-covering curve,
    return the best member value."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    dag = reduce_to_dag(pa, k, check=check, allow_large_k=allow_large_k)
    curve = epsilon_convex_pareto(dag, eps)
    return curve.max_value()


def emptiness_2ambiguous(
    pa: ProbabilisticAutomaton,
    threshold: Fraction,
    check: bool = True,
) -> tuple[bool, tuple[str, ...] | None]:
    """Emptiness for 2-ambiguous automata in quasi-polynomial time:
    reduce with k = 2, build the convex curve, compare its best value
    against the threshold (strictly), and map a winning path back to
    the word its simulation edges spell."""
    if check and not is_k_ambiguous(pa, 2):
        raise AmbiguityError("automaton is not 2-ambiguous")
    dag = reduce_to_dag(pa, 2, check=False)
    sat, best = decide_stochastic_path(dag, threshold)
    if not sat:
        return False, None
    word = path_word(dag, best)
    assert acceptance_probability(pa, word) >= best.value
    return True, word
