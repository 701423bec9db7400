"""Ambiguity analysis: how many accepting runs can a single word carry.

The class of an automaton (unambiguous / finitely / polynomially /
exponentially ambiguous) depends only on the support of the transition
function, never on the probabilities.  All checks run on the trimmed
support automaton, so only useful states matter.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product

from .automaton import ProbabilisticAutomaton, Word, trim
from .errors import BudgetExceededError

__all__ = [
    "AmbiguityClass",
    "is_k_ambiguous",
    "classify",
    "ambiguity_profile",
    "max_run_count",
]

UNAMBIGUOUS = "unambiguous"
FINITELY_AMBIGUOUS = "finitely-ambiguous"
POLYNOMIALLY_AMBIGUOUS = "polynomially-ambiguous"
EXPONENTIALLY_AMBIGUOUS = "exponentially-ambiguous"

DEFAULT_BUDGET = int(os.environ.get("PBA_BUDGET", 5_000_000))


@dataclass(frozen=True)
class AmbiguityClass:
    """Classification verdict.

    ``k`` is the exact maximal number of accepting runs when the
    automaton is finitely ambiguous and the bounded search found it;
    ``k`` is None when the search cap was exhausted first (``cap``
    records the cap in that case).  The classes are exclusive: an
    unambiguous automaton reports ``unambiguous``, not
    ``finitely-ambiguous`` with k = 1.
    """

    kind: str
    k: int | None = None
    cap: int | None = None

    def __str__(self) -> str:
        if self.kind == FINITELY_AMBIGUOUS:
            if self.k is not None:
                return f"{self.kind}({self.k})"
            return f"{self.kind}(unknown, cap={self.cap})"
        return self.kind


def _support(pa: ProbabilisticAutomaton):
    """Adjacency of the trimmed support automaton, by letter."""
    adj: dict[str, dict[str, tuple[str, ...]]] = {a: {} for a in pa.alphabet}
    for (q, a), row in pa.transitions.items():
        adj[a][q] = tuple(sorted(row, key=pa.state_index))
    return adj


def _pair_bit(i: int, j: int) -> int:
    # bit index for the unordered pair i < j within k(k-1)/2 flags
    return j * (j - 1) // 2 + i


def is_k_ambiguous(
    pa: ProbabilisticAutomaton, k: int, budget: int | None = None
) -> bool:
    """True iff no word has ``k`` + 1 pairwise-distinct accepting runs.

    Decided by a reachability search over the (k+1)-fold self-product
    of the support automaton, annotated with one distinctness flag per
    pair of tracked runs (the same flag scheme as the stochastic-path
    reduction matrix).  Per product tuple, only the maximal flag sets
    are kept: more flags can only help reach the all-distinct target.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    if budget is None:
        budget = DEFAULT_BUDGET
    pa = trim(pa)
    m = k + 1
    full_mask = (1 << (m * (m - 1) // 2)) - 1
    adj = _support(pa)
    accepting = pa.accepting

    def initial_mask(tup: tuple[str, ...]) -> int:
        mask = 0
        for j in range(m):
            for i in range(j):
                if tup[i] != tup[j]:
                    mask |= 1 << _pair_bit(i, j)
        return mask

    def is_witness(tup: tuple[str, ...], mask: int) -> bool:
        return mask == full_mask and all(q in accepting for q in tup)

    # frontier maps tuple -> antichain of maximal masks
    best: dict[tuple[str, ...], list[int]] = {}

    def push(tup: tuple[str, ...], mask: int) -> bool:
        masks = best.setdefault(tup, [])
        for m0 in masks:
            if m0 | mask == m0:
                return False
        masks[:] = [m0 for m0 in masks if m0 | mask != mask]
        masks.append(mask)
        return True

    starts = sorted(pa.initial, key=pa.state_index)
    queue: list[tuple[tuple[str, ...], int]] = []
    for tup in product(starts, repeat=m):
        mask = initial_mask(tup)
        if is_witness(tup, mask):
            return False
        if push(tup, mask):
            queue.append((tup, mask))

    visited = 0
    while queue:
        tup, mask = queue.pop()
        if mask not in best.get(tup, []):
            continue  # superseded by a larger mask
        visited += 1
        if visited > budget:
            raise BudgetExceededError(
                "ambiguity product search", budget, "raise PBA_BUDGET or pass --budget"
            )
        for a in pa.alphabet:
            rows = adj[a]
            succ = [rows.get(q, ()) for q in tup]
            if any(not s for s in succ):
                continue
            for tup2 in product(*succ):
                mask2 = mask
                for j in range(m):
                    for i in range(j):
                        if tup2[i] != tup2[j]:
                            mask2 |= 1 << _pair_bit(i, j)
                if is_witness(tup2, mask2):
                    return False
                if push(tup2, mask2):
                    queue.append((tup2, mask2))
    return True


def _on_cycle(pa: ProbabilisticAutomaton) -> set[str]:
    """States that admit a non-empty support run back to themselves."""
    succ: dict[str, set[str]] = {q: set() for q in pa.states}
    for (q, _a), row in pa.transitions.items():
        succ[q].update(row)
    result = set()
    for q in pa.states:
        seen: set[str] = set()
        stack = list(succ[q])
        found = False
        while stack:
            r = stack.pop()
            if r == q:
                found = True
                break
            if r in seen:
                continue
            seen.add(r)
            stack.extend(succ[r])
        if found:
            result.add(q)
    return result


def _has_eda(pa: ProbabilisticAutomaton, cycle_states: set[str]) -> bool:
    # Some useful state carries two distinct runs over one word back to
    # itself: search (x, y, flag) where flag records that the two
    # coordinate runs diverged somewhere.
    adj = _support(pa)
    for q in pa.states:
        if q not in cycle_states:
            continue
        start = (q, q, 0)
        seen = {start}
        stack = [start]
        while stack:
            x, y, flag = stack.pop()
            for a in pa.alphabet:
                rows = adj[a]
                for x2 in rows.get(x, ()):
                    for y2 in rows.get(y, ()):
                        flag2 = flag or (x2 != y2)
                        if x2 == q and y2 == q and flag2:
                            return True
                        nxt = (x2, y2, flag2)
                        if nxt not in seen:
                            seen.add(nxt)
                            stack.append(nxt)
    return False


def _has_ida(pa: ProbabilisticAutomaton, cycle_states: set[str]) -> bool:
    # Distinct useful states p != q and a word v with simultaneous runs
    # p -v-> p, p -v-> q, q -v-> q: reachability in the triple product.
    adj = _support(pa)
    for p in pa.states:
        if p not in cycle_states:
            continue
        for q in pa.states:
            if q == p or q not in cycle_states:
                continue
            start = (p, p, q)
            target = (p, q, q)
            seen = {start}
            stack = [start]
            hit = False
            while stack and not hit:
                x, y, z = stack.pop()
                for a in pa.alphabet:
                    rows = adj[a]
                    for x2 in rows.get(x, ()):
                        for y2 in rows.get(y, ()):
                            for z2 in rows.get(z, ()):
                                nxt = (x2, y2, z2)
                                if nxt == target:
                                    hit = True
                                if nxt not in seen:
                                    seen.add(nxt)
                                    stack.append(nxt)
            if hit:
                return True
    return False


def classify(
    pa: ProbabilisticAutomaton,
    max_k: int | None = None,
    budget: int | None = None,
) -> AmbiguityClass:
    """Decide the ambiguity class of the automaton.

    On the trimmed support automaton: exponentially ambiguous iff some
    state carries two distinct runs over one word from itself to itself;
    else polynomially ambiguous iff the three-run divergence pattern
    between two distinct states exists; else finitely ambiguous, with
    the exact k found by iterating :func:`is_k_ambiguous` up to a cap
    (|Q|^2 by default; finite ambiguity can be exponential in |Q|, so
    unbounded search is refused rather than attempted).
    """
    trimmed = trim(pa)
    n = len(trimmed.states)
    if n == 0:
        return AmbiguityClass(UNAMBIGUOUS, k=1)
    cycle_states = _on_cycle(trimmed)
    if _has_eda(trimmed, cycle_states):
        return AmbiguityClass(EXPONENTIALLY_AMBIGUOUS)
    if _has_ida(trimmed, cycle_states):
        return AmbiguityClass(POLYNOMIALLY_AMBIGUOUS)
    cap = max_k if max_k is not None else n * n
    for k in range(1, cap + 1):
        if is_k_ambiguous(trimmed, k, budget=budget):
            if k == 1:
                return AmbiguityClass(UNAMBIGUOUS, k=1)
            return AmbiguityClass(FINITELY_AMBIGUOUS, k=k)
    return AmbiguityClass(FINITELY_AMBIGUOUS, k=None, cap=cap)


def max_run_count(pa: ProbabilisticAutomaton, word: Word) -> int:
    """Number of accepting runs over ``word`` (counted, not enumerated)."""
    pa.check_word(word)
    counts = {q: 1 for q in pa.initial}
    for a in word:
        nxt: dict[str, int] = {}
        for q, c in counts.items():
            for q2 in pa.row(q, a):
                nxt[q2] = nxt.get(q2, 0) + c
        counts = nxt
    return sum(c for q, c in counts.items() if q in pa.accepting)


def ambiguity_profile(
    pa: ProbabilisticAutomaton, length: int, budget: int | None = None
) -> list[tuple[int, int]]:
    """For each word length up to ``length``, the maximal number of
    accepting runs over any word of that length, by exhaustive
    enumeration of the word tree (budget-guarded)."""
    if budget is None:
        budget = DEFAULT_BUDGET
    total_words = 0
    profile = [0] * (length + 1)

    def walk(counts: dict[str, int], depth: int) -> None:
        nonlocal total_words
        total_words += 1
        if total_words > budget:
            raise BudgetExceededError(
                "word enumeration", budget, "lower the profile length"
            )
        here = sum(c for q, c in counts.items() if q in pa.accepting)
        if here > profile[depth]:
            profile[depth] = here
        if depth == length or not counts:
            return
        for a in pa.alphabet:
            nxt: dict[str, int] = {}
            for q, c in counts.items():
                for q2 in pa.row(q, a):
                    nxt[q2] = nxt.get(q2, 0) + c
            walk(nxt, depth + 1)

    walk({q: 1 for q in pa.initial}, 0)
    return [(length_, count) for length_, count in enumerate(profile)]
