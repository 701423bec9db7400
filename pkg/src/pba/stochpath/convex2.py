"""Convex Pareto curve for two-objective instances.

The curve is grown by divide-and-conquer scalarisation: a direction
(alpha, beta) turns the best-path question into a longest-path pass
over the DAG with edge score alpha*log(w1) + beta*log(w2), and the
recursion refines between adjacent discovered hull points until no
strictly better vertex appears.  Log scores are floating point with a
conservative margin: any comparison within the margin is a tie, and
tied candidates are added to the curve rather than pruned, so decision
correctness never depends on the margin.  Weights of members and all
final comparisons (dominance, thresholds, coverage) are exact
rationals.

Paths with a zero weight component cannot enter log space; they are
covered separately by the exact single-component maximisers, which are
always part of the curve.
"""

from __future__ import annotations

import math
from fractions import Fraction

from ..errors import BudgetExceededError, PrecisionError
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
from .pareto import _prune_dominated

__all__ = ["convex_pareto_2", "convex_covers"]

# Scalar scores within MARGIN are ties; DP retention uses the wider
# KEEP_MARGIN so float noise can never evict a genuine tie.
MARGIN = 1e-7
KEEP_MARGIN = 4e-7
TIE_SET_CAP = 4096


def _flog(x: Fraction) -> float:
    # big numerators and denominators exceed float range, logs do not
    return math.log(x.numerator) - math.log(x.denominator)


def _best_component_path(
    dag: MultiWeightedDag, live: frozenset[str], component: int
) -> PathRecord | None:
    """Exact maximiser of a single weight component over all s-to-t
    paths (zero components included); deterministic by edge order."""
    if not live:
        return None
    best: dict[str, tuple[Fraction, tuple[int, ...]]] = {
        dag.source: (ONE, ())
    }
    for v in topological_order(dag):
        if v not in live or v not in best:
            continue
        value, edges = best[v]
        for idx in dag.out_edges(v):
            edge = dag.edges[idx]
            if edge.dst not in live:
                continue
            candidate = value * edge.weights[component]
            incumbent = best.get(edge.dst)
            if incumbent is None or candidate > incumbent[0]:
                best[edge.dst] = (candidate, edges + (idx,))
    if dag.target not in best:
        return None
    _value, edges = best[dag.target]
    return _record(dag, edges)


def _record(dag: MultiWeightedDag, edges: tuple[int, ...]) -> PathRecord:
    weight = [ONE] * dag.k
    for idx in edges:
        weight = [w * ew for w, ew in zip(weight, dag.edges[idx].weights)]
    weight_t = tuple(weight)
    return PathRecord(edges=edges, weight=weight_t, value=sum(weight_t, ZERO))


def _lexmax_path(
    dag: MultiWeightedDag,
    live: frozenset[str],
    usable: set[int],
    first: int,
    second: int,
) -> PathRecord | None:
    """Lexicographic maximiser of (weights[first], weights[second]) over
    the positive subgraph, where per-vertex lexicographic pruning is
    sound because every remaining weight is positive."""
    if not live:
        return None
    best: dict[str, tuple[tuple[Fraction, Fraction], tuple[int, ...]]] = {
        dag.source: ((ONE, ONE), ())
    }
    for v in topological_order(dag):
        if v not in live or v not in best:
            continue
        (w_first, w_second), edges = best[v]
        for idx in dag.out_edges(v):
            if idx not in usable:
                continue
            edge = dag.edges[idx]
            if edge.dst not in live:
                continue
            candidate = (
                w_first * edge.weights[first],
                w_second * edge.weights[second],
            )
            incumbent = best.get(edge.dst)
            if incumbent is None or candidate > incumbent[0]:
                best[edge.dst] = (candidate, edges + (idx,))
    if dag.target not in best:
        return None
    return _record(dag, best[dag.target][1])


def _scalarized_candidates(
    dag: MultiWeightedDag,
    live: frozenset[str],
    usable: set[int],
    alpha: float,
    beta: float,
):
    """Longest-path pass for direction (alpha, beta): per vertex keeps
    every partial path whose score is within KEEP_MARGIN of the best,
    deduplicated by exact weight vector.  Returns the candidate list at
    the target as (score, weight, edges) triples."""
    edge_score = {}
    for idx in usable:
        edge = dag.edges[idx]
        edge_score[idx] = alpha * _flog(edge.weights[0]) + beta * _flog(
            edge.weights[1]
        )

    entries: dict[str, dict[tuple[Fraction, ...], tuple[float, tuple[int, ...]]]] = {
        dag.source: {(ONE, ONE): (0.0, ())}
    }
    for v in topological_order(dag):
        if v not in live or v not in entries:
            continue
        pool = entries[v]
        best_score = max(score for score, _ in pool.values())
        kept = {
            weight: (score, edges)
            for weight, (score, edges) in pool.items()
            if score >= best_score - KEEP_MARGIN
        }
        if len(kept) > TIE_SET_CAP:
            raise BudgetExceededError(
                "scalarisation tie set", TIE_SET_CAP, "degenerate weight structure"
            )
        entries[v] = kept
        if v == dag.target:
            continue
        for idx in dag.out_edges(v):
            if idx not in usable:
                continue
            edge = dag.edges[idx]
            if edge.dst not in live:
                continue
            bucket = entries.setdefault(edge.dst, {})
            for weight, (score, edges) in kept.items():
                new_weight = (
                    weight[0] * edge.weights[0],
                    weight[1] * edge.weights[1],
                )
                new_score = score + edge_score[idx]
                incumbent = bucket.get(new_weight)
                if incumbent is None or new_score > incumbent[0]:
                    bucket[new_weight] = (new_score, edges + (idx,))
    final = entries.get(dag.target, {})
    return [(score, weight, edges) for weight, (score, edges) in final.items()]


def convex_pareto_2(dag: MultiWeightedDag) -> ParetoSet:
    """A convex Pareto curve of the two-objective instance: every
    s-to-t path is dominated by a multiplicative mixture of curve
    members.  Quasi-polynomial size (at most |V|^log|V| genuine hull
    vertices, plus any borderline ties kept for safety)."""
    if dag.k != 2:
        raise ValueError("convex curve construction requires k = 2")
    live = live_vertices(dag)
    if not live:
        return ParetoSet(members=())

    members: dict[tuple[Fraction, ...], PathRecord] = {}

    def add(path: PathRecord | None) -> None:
        if path is not None and path.weight not in members:
            members[path.weight] = path

    # exact single-component extremes cover all zero-component paths
    add(_best_component_path(dag, live, 0))
    add(_best_component_path(dag, live, 1))

    usable = {
        idx
        for idx, edge in enumerate(dag.edges)
        if all(w > 0 for w in edge.weights)
    }
    pos_live = live_vertices(dag, usable)
    if pos_live:
        x = _lexmax_path(dag, pos_live, usable, 0, 1)
        y = _lexmax_path(dag, pos_live, usable, 1, 0)
        add(x)
        add(y)
        if x.weight != y.weight:
            _grow_hull(dag, pos_live, usable, x, y, add)

    pruned = _prune_dominated(
        [(path.weight, path.edges) for path in members.values()]
    )
    final = [members[weight] for weight, _ in pruned]
    return ParetoSet(members=sort_members(final))


def _grow_hull(dag, live, usable, x, y, add) -> None:
    """Refine the hull chain between the two extremes.  For the segment
    (A, B) the direction (log(b2/a2), log(a1/b1)) scores A and B
    equally; a candidate scoring above that by more than the margin is
    a new hull vertex and splits the segment.  Candidates within the
    margin of the segment score are kept as members, never discarded."""
    worklist = [(x, y)]
    while worklist:
        a, b = worklist.pop()
        alpha = _flog(b.weight[1]) - _flog(a.weight[1])
        beta = _flog(a.weight[0]) - _flog(b.weight[0])
        candidates = _scalarized_candidates(dag, live, usable, alpha, beta)
        if not candidates:
            continue
        segment_score = max(
            alpha * _flog(a.weight[0]) + beta * _flog(a.weight[1]),
            alpha * _flog(b.weight[0]) + beta * _flog(b.weight[1]),
        )
        best_score = max(score for score, _, _ in candidates)
        if best_score <= segment_score + MARGIN:
            # nothing strictly above the segment; keep near-segment ties
            for score, _weight, edges in candidates:
                if score >= segment_score - MARGIN:
                    add(_record(dag, edges))
            continue
        ties = [
            (score, weight, edges)
            for score, weight, edges in candidates
            if score >= best_score - MARGIN
        ]
        for _score, _weight, edges in ties:
            add(_record(dag, edges))
        best = max(ties, key=lambda t: t[1])  # deterministic: lexmax weight
        c = _record(dag, best[2])
        if c.weight == a.weight or c.weight == b.weight:
            continue  # numerically above, but not a new point
        worklist.append((a, c))
        worklist.append((c, b))


# ---------------------------------------------------------------------------
# Exact convex-coverage verification
# ---------------------------------------------------------------------------


def _rational_log_ratio(
    x: Fraction, y: Fraction, max_denominator: int = 1 << 16
) -> Fraction | None:
    """log(x)/log(y) as an exact fraction when the two are
    multiplicatively dependent (x^q equals y^p), else None.

    Candidates come from continued-fraction approximations of the float
    estimate; each is verified by an exact integer-power comparison.
    """
    if x <= 0 or y <= 0 or x == 1 or y == 1:
        return None
    if x < 1:
        x = 1 / x
        y = 1 / y
    if y <= 1:
        return None  # opposite monotonicity, the ratio is negative
    estimate = _flog(x) / _flog(y)
    seen = set()
    denominator = 1
    while denominator <= max_denominator:
        candidate = Fraction(estimate).limit_denominator(denominator)
        denominator *= 4
        if candidate in seen or candidate < 0:
            continue
        seen.add(candidate)
        p, q = candidate.numerator, candidate.denominator
        if x**q == y**p:
            return candidate
    return None


def _mixture_at_least(
    a: tuple[Fraction, ...],
    b: tuple[Fraction, ...],
    target: tuple[Fraction, ...],
    lam: Fraction,
) -> bool:
    """Exact check a^lam * b^(1-lam) >= target componentwise, by clearing
    the rational exponent into integer powers."""
    u, v = lam.numerator, lam.denominator
    for ai, bi, ti in zip(a, b, target):
        if ti == 0:
            continue
        if (ai == 0 and u != 0) or (bi == 0 and u != v):
            return False
        if ai**u * bi ** (v - u) < ti**v:
            return False
    return True


def _pair_covers(
    a: tuple[Fraction, ...],
    b: tuple[Fraction, ...],
    target: tuple[Fraction, ...],
    precision_cap: int,
) -> bool:
    """Decide whether some lam in [0, 1] makes the multiplicative
    mixture of a and b dominate the target, exactly.

    After the endpoint checks, each remaining component constrains lam
    to one side of a ratio of logarithms.  Probe points are tested by
    clearing the rational exponent into integer powers; probes come
    from a float estimate of the feasible interval and from a
    Stern-Brocot mediant walk, which reaches any exactly-rational
    single-point solution in few steps while keeping exponents small.
    Raises :class:`PrecisionError` when still undecided at the cap.
    """
    if _mixture_at_least(a, b, target, Fraction(1)):
        return True
    if _mixture_at_least(a, b, target, Fraction(0)):
        return True

    # classify each component: does its constraint push lam up or down?
    pushes_up = []
    pushes_down = []
    for ai, bi, ti in zip(a, b, target):
        if ti == 0:
            continue
        if ai == 0 or bi == 0:
            # only an endpoint mixture could satisfy this component,
            # and both endpoints already failed
            return False
        if ai == bi:
            if ti > ai:
                return False  # constant in lam and insufficient
            continue
        if ai > bi:
            pushes_up.append((ai, bi, ti))
        else:
            pushes_down.append((ai, bi, ti))
    if not pushes_up or not pushes_down:
        # one-sided constraints peak at an endpoint, and both failed
        return False

    # a one-sided constraint that fails at its own best endpoint can
    # never be met
    if any(ai < ti for ai, _bi, ti in pushes_up):
        return False
    if any(bi < ti for _ai, bi, ti in pushes_down):
        return False

    def probe(lam: Fraction) -> tuple[bool, bool]:
        u, v = lam.numerator, lam.denominator
        up = any(ai**u * bi ** (v - u) < ti**v for ai, bi, ti in pushes_up)
        down = any(ai**u * bi ** (v - u) < ti**v for ai, bi, ti in pushes_down)
        return up, down

    # when an interval endpoint is an exactly rational ratio of logs
    # (multiplicatively dependent weights, the common case with dyadic
    # probabilities), feasibility collapses to one exact probe at it
    if len(pushes_up) == 1 and len(pushes_down) == 1:
        au, bu, tu = pushes_up[0]
        lower = _rational_log_ratio(tu / bu, au / bu)
        if lower is not None:
            if lower > 1:
                return False
            needs_up, needs_down = probe(lower)
            return not needs_up and not needs_down
        ad, bd, td = pushes_down[0]
        upper = _rational_log_ratio(td / bd, ad / bd)
        if upper is not None:
            if upper < 0:
                return False
            needs_up, needs_down = probe(upper)
            return not needs_up and not needs_down

    # quick interior hits near the float estimate of the interval
    try:
        est_lo = max(
            (_flog(ti) - _flog(bi)) / (_flog(ai) - _flog(bi))
            for ai, bi, ti in pushes_up
        )
        est_hi = min(
            (_flog(ti) - _flog(bi)) / (_flog(ai) - _flog(bi))
            for ai, bi, ti in pushes_down
        )
    except ZeroDivisionError:
        est_lo, est_hi = 1.0, 0.0  # degenerate floats; rely on the walk
    if est_hi - est_lo > 1e-12:
        mid = min(max((est_lo + est_hi) / 2, 0.0), 1.0)
        for den in (16, 256, 4096):
            lam = Fraction(mid).limit_denominator(den)
            if 0 < lam < 1:
                needs_up, needs_down = probe(lam)
                if not needs_up and not needs_down:
                    return True

    # probe exponents multiply operand sizes, so cap the walk's
    # denominators by the bit length of the largest base
    base_bits = max(
        max(x.numerator.bit_length(), x.denominator.bit_length())
        for x in [v for t in pushes_up + pushes_down for v in t]
    )
    den_cap = max(64, (1 << 24) // base_bits)

    # galloped mediant walk: any feasible lam stays strictly between lo
    # and hi; galloping makes one-sided marches geometric instead of
    # linear, so thin separations are certified quickly
    lo = (0, 1)
    hi = (1, 1)
    probes = 0
    while probes < precision_cap:
        num, den = lo[0] + hi[0], lo[1] + hi[1]
        if den > den_cap:
            break
        probes += 1
        needs_up, needs_down = probe(Fraction(num, den))
        if not needs_up and not needs_down:
            return True
        if needs_up and needs_down:
            return False  # the lower bound exceeds the upper bound
        if needs_up:
            lo = (num, den)
            step = 2
            while probes < precision_cap:
                cand = (lo[0] + step * hi[0], lo[1] + step * hi[1])
                if cand[1] > den_cap:
                    break
                probes += 1
                needs_up, needs_down = probe(Fraction(*cand))
                if not needs_up and not needs_down:
                    return True
                if needs_up and needs_down:
                    return False
                if needs_up:
                    lo = cand
                    step *= 2
                else:
                    hi = cand
                    break
        else:
            hi = (num, den)
            step = 2
            while probes < precision_cap:
                cand = (step * lo[0] + hi[0], step * lo[1] + hi[1])
                if cand[1] > den_cap:
                    break
                probes += 1
                needs_up, needs_down = probe(Fraction(*cand))
                if not needs_up and not needs_down:
                    return True
                if needs_up and needs_down:
                    return False
                if needs_down:
                    hi = cand
                    step *= 2
                else:
                    lo = cand
                    break
    raise PrecisionError(
        f"mixture feasibility undecided after {precision_cap} refinements"
    )


def convex_covers(
    curve: ParetoSet,
    weight: tuple[Fraction, ...],
    precision_cap: int = 256,
) -> bool:
    """Exact test that the curve convexly dominates the given weight
    vector: some member dominates it pointwise, or some adjacent pair
    of members (in the curve's descending-first-component order) admits
    a multiplicative mixture that does."""
    for member in curve:
        if all(w <= mw for w, mw in zip(weight, member.weight)):
            return True
    ordered = list(curve)
    for a, b in zip(ordered, ordered[1:]):
        if _pair_covers(a.weight, b.weight, weight, precision_cap):
            return True
    return False
