"""Witness-length bounds, shortening procedures, and exhaustive search.

For a k-ambiguous automaton with n useful states, some word of length at
most n^k reaches the value; for a finitely ambiguous automaton the bound
is (n+1)!.  Both bounds come with constructive shortening procedures
that never decrease the acceptance probability.  Exhaustive search over
all words up to a length bound realises the emptiness and value
decisions at desk scale.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

from .automaton import (
    ProbabilisticAutomaton,
    Word,
    enumerate_accepting_runs,
    trim,
)
from .errors import AmbiguityError, BudgetExceededError, NotFinitelyAmbiguousError

__all__ = [
    "WitnessReport",
    "witness_bound",
    "shorten_witness_k",
    "shorten_witness_finite",
    "exhaustive_value",
    "exhaustive_emptiness",
]

ZERO = Fraction(0)

DEFAULT_BUDGET = int(os.environ.get("PBA_BUDGET", 5_000_000))


@dataclass(frozen=True)
class WitnessReport:
    """Outcome of a bounded emptiness search.

    When ``word`` is present it satisfies P(word) > threshold exactly
    and ``value`` is its acceptance probability.  When ``exhausted`` is
    true and ``word`` is absent, no word within ``bound_used`` exceeds
    the threshold.
    """

    word: tuple[str, ...] | None
    value: Fraction | None
    bound_used: int
    exhausted: bool


def witness_bound(pa: ProbabilisticAutomaton, k: int | None = None) -> int:
    """Witness length bound: n^k for a k-ambiguous automaton (pass k),
    (n+1)! for a finitely ambiguous one (pass None); n counts useful
    states only."""
    n = len(trim(pa).states)
    if k is not None:
        if k < 1:
            raise ValueError("k must be a positive integer")
        return n**k
    return math.factorial(n + 1)


def _first_repeat(signatures: list) -> tuple[int, int] | None:
    seen: dict = {}
    for pos, sig in enumerate(signatures):
        if sig in seen:
            return seen[sig], pos
        seen[sig] = pos
    return None


def shorten_witness_k(
    pa: ProbabilisticAutomaton, k: int, word: Word
) -> tuple[str, ...]:
    """Shorten ``word`` to length at most n^k without decreasing its
    probability, assuming the automaton is k-ambiguous.

    Repeatedly finds a factor on which every accepting run returns to
    the state it entered with (a repeated tuple of run states) and cuts
    it.  Raises :class:`AmbiguityError` if more than k accepting runs
    show up along the way.
    """
    if k < 1:
        raise ValueError("k must be a positive integer")
    pa.check_word(word)
    bound = witness_bound(pa, k)
    current = tuple(word)
    while len(current) > bound:
        runs = enumerate_accepting_runs(pa, current)
        if len(runs) > k:
            raise AmbiguityError(
                f"{len(runs)} accepting runs on a word; automaton is not "
                f"{k}-ambiguous"
            )
        signatures = [
            tuple(run.states[pos] for run, _p in runs)
            for pos in range(len(current) + 1)
        ]
        repeat = _first_repeat(signatures)
        if repeat is None:  # impossible once len > n^k, by pigeonhole
            raise AssertionError("no repeated run-state tuple on an over-long word")
        i, j = repeat
        current = current[:i] + current[j:]
    return current


def shorten_witness_finite(
    pa: ProbabilisticAutomaton, word: Word
) -> tuple[str, ...]:
    """Shorten ``word`` to length at most (n+1)! without decreasing its
    probability, assuming the automaton is finitely ambiguous.

    At each prefix position the states participating in at least one
    accepting run are ordered by prefix-reaching probability (ties by
    state declaration index); a repeated ordered signature marks a
    cuttable factor.  If cutting a factor would let the number of runs
    between the repeated signatures grow (two runs from one state back
    into the set), the automaton cannot be finitely ambiguous and
    :class:`NotFinitelyAmbiguousError` is raised.
    """
    pa.check_word(word)
    bound = witness_bound(pa, None)
    current = tuple(word)
    while len(current) > bound:
        runs = enumerate_accepting_runs(pa, current)

        # prefix-reaching probability per position, including initial mass
        vec: dict[str, Fraction] = dict(pa.initial)
        prefix_vectors = [dict(vec)]
        for a in current:
            nxt: dict[str, Fraction] = {}
            for q, mass in vec.items():
                for q2, p in pa.row(q, a).items():
                    nxt[q2] = nxt.get(q2, ZERO) + mass * p
            vec = nxt
            prefix_vectors.append(dict(vec))

        signatures = []
        for pos in range(len(current) + 1):
            participating = {run.states[pos] for run, _p in runs}
            ordered = tuple(
                sorted(
                    participating,
                    key=lambda q: (prefix_vectors[pos].get(q, ZERO), pa.state_index(q)),
                )
            )
            signatures.append(ordered)

        repeat = _first_repeat(signatures)
        if repeat is None:
            raise AssertionError("no repeated ordered signature on an over-long word")
        i, j = repeat
        factor = current[i:j]
        _check_single_return(pa, signatures[i], factor)
        current = current[:i] + current[j:]
    return current


def _check_single_return(
    pa: ProbabilisticAutomaton, states: tuple[str, ...], factor: tuple[str, ...]
) -> None:
    """Every state of the repeated set must have at most one support run
    over the factor back into the set; otherwise pumping the factor
    grows the number of runs without bound."""
    member = set(states)
    for start in states:
        ends = 0
        stack = [(start, 0)]
        while stack:
            q, pos = stack.pop()
            if pos == len(factor):
                if q in member:
                    ends += 1
                    if ends > 1:
                        raise NotFinitelyAmbiguousError(
                            "two runs over a repeated factor return to the "
                            "participating set; ambiguity grows unboundedly"
                        )
                continue
            for q2 in pa.row(q, factor[pos]):
                stack.append((q2, pos + 1))


def exhaustive_value(
    pa: ProbabilisticAutomaton, max_len: int, budget: int | None = None
) -> tuple[Fraction, tuple[str, ...]]:
    """Exact maximum of P(w) over all |w| <= max_len, with the shortlex
    first maximiser.  Equals the value of the automaton whenever
    max_len reaches the applicable witness bound."""
    if budget is None:
        budget = DEFAULT_BUDGET
    visited = 0
    best_value = ZERO
    best_word: tuple[str, ...] = ()
    letter_index = {a: i for i, a in enumerate(pa.alphabet)}

    def key(word: tuple[str, ...]) -> tuple:
        return (len(word), tuple(letter_index[a] for a in word))

    def walk(vec: dict[str, Fraction], word: tuple[str, ...]) -> None:
        nonlocal visited, best_value, best_word
        visited += 1
        if visited > budget:
            raise BudgetExceededError("word enumeration", budget, "raise PBA_BUDGET or pass --budget")
        value = sum((p for q, p in vec.items() if q in pa.accepting), ZERO)
        if value > best_value or (value == best_value and key(word) < key(best_word)):
            best_value = value
            best_word = word
        if len(word) == max_len or not vec:
            return
        for a in pa.alphabet:
            nxt: dict[str, Fraction] = {}
            for q, mass in vec.items():
                for q2, p in pa.row(q, a).items():
                    nxt[q2] = nxt.get(q2, ZERO) + mass * p
            walk(nxt, word + (a,))

    walk(dict(pa.initial), ())
    return best_value, best_word


def exhaustive_emptiness(
    pa: ProbabilisticAutomaton,
    threshold: Fraction,
    max_len: int,
    budget: int | None = None,
) -> WitnessReport:
    """Shortlex-first word with P(w) strictly above the threshold, or an
    exhausted report if none exists within the length bound.

    Prunes prefixes whose total remaining mass cannot exceed the
    threshold (propagation never increases total mass).
    """
    if budget is None:
        budget = DEFAULT_BUDGET
    visited = 0

    def search(vec: dict[str, Fraction], depth: int, target: int):
        nonlocal visited
        visited += 1
        if visited > budget:
            raise BudgetExceededError("word enumeration", budget, "raise PBA_BUDGET or pass --budget")
        if depth == target:
            value = sum((p for q, p in vec.items() if q in pa.accepting), ZERO)
            if value > threshold:
                return (), value
            return None
        for a in pa.alphabet:
            nxt: dict[str, Fraction] = {}
            for q, mass in vec.items():
                for q2, p in pa.row(q, a).items():
                    nxt[q2] = nxt.get(q2, ZERO) + mass * p
            if sum(nxt.values(), ZERO) <= threshold:
                continue  # acceptance mass can only shrink from here
            found = search(nxt, depth + 1, target)
            if found is not None:
                suffix, value = found
                return (a,) + suffix, value
        return None

    start = dict(pa.initial)
    for target in range(max_len + 1):
        if sum(start.values(), ZERO) <= threshold:
            break
        found = search(start, 0, target)
        if found is not None:
            word, value = found
            return WitnessReport(word=word, value=value, bound_used=max_len,
                                 exhausted=False)
    return WitnessReport(word=None, value=None, bound_used=max_len, exhausted=True)
