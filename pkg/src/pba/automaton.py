"""Exact model and semantics of probabilistic automata.

An automaton assigns to every finite word the probability that a run on
the word ends in an accepting state.  All probabilities are exact
``fractions.Fraction`` values; transition rows and the initial
distribution are sub-distributions (they may sum to less than 1), and
zero-probability entries are never stored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import FormatError, InvariantError
from .ratio import format_ratio, parse_ratio

__all__ = [
    "ProbabilisticAutomaton",
    "Run",
    "parse_automaton",
    "serialize_automaton",
    "acceptance_probability",
    "enumerate_accepting_runs",
    "forward_vector",
    "normalize_initial",
    "trim",
]

ZERO = Fraction(0)
ONE = Fraction(1)

Word = Sequence[str]


@dataclass(frozen=True)
class ProbabilisticAutomaton:
    """A probabilistic automaton with an initial sub-distribution.

    ``states`` and ``alphabet`` are ordered (declaration order of the
    input file); every set-valued output of this package follows that
    order.  ``transitions`` maps ``(state, letter)`` to a row, itself a
    map from target state to a positive probability.
    """

    states: tuple[str, ...]
    alphabet: tuple[str, ...]
    initial: Mapping[str, Fraction]
    transitions: Mapping[tuple[str, str], Mapping[str, Fraction]]
    accepting: frozenset[str]
    _index: Mapping[str, int] = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "_index", {q: i for i, q in enumerate(self.states)})
        self._validate()

    def _validate(self) -> None:
        if len(set(self.states)) != len(self.states):
            raise InvariantError("duplicate state names")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise InvariantError("duplicate alphabet letters")
        known = set(self.states)
        letters = set(self.alphabet)
        if sum(self.initial.values(), ZERO) > ONE:
            raise InvariantError("initial distribution sums to more than 1")
        for q, p in self.initial.items():
            if q not in known:
                raise InvariantError(f"unknown initial state {q!r}")
            if p <= 0:
                raise InvariantError(f"non-positive initial probability for {q!r}")
        for q in self.accepting:
            if q not in known:
                raise InvariantError(f"unknown accepting state {q!r}")
        for (q, a), row in self.transitions.items():
            if q not in known:
                raise InvariantError(f"unknown source state {q!r}")
            if a not in letters:
                raise InvariantError(f"unknown letter {a!r}")
            total = ZERO
            for q2, p in row.items():
                if q2 not in known:
                    raise InvariantError(f"unknown target state {q2!r}")
                if p <= 0:
                    raise InvariantError(
                        f"non-positive transition probability {q!r} -{a}-> {q2!r}"
                    )
                total += p
            if total > ONE:
                raise InvariantError(
                    f"row sum exceeds 1 for state {q!r} on letter {a!r}"
                )

    def state_index(self, q: str) -> int:
        return self._index[q]

    def row(self, q: str, a: str) -> Mapping[str, Fraction]:
        return self.transitions.get((q, a), {})

    def support_successors(self, q: str, a: str) -> tuple[str, ...]:
        """Targets reachable from ``q`` on ``a`` with positive probability."""
        row = self.transitions.get((q, a))
        if not row:
            return ()
        return tuple(sorted(row, key=self._index.__getitem__))

    def check_word(self, word: Word) -> None:
        letters = set(self.alphabet)
        for a in word:
            if a not in letters:
                raise InvariantError(f"unknown letter {a!r} in word")


@dataclass(frozen=True)
class Run:
    """One run: a state sequence together with the word it reads.

    A run is accepting when its first state carries positive initial
    mass and its last state is accepting; every step of a stored run
    has positive probability.
    """

    states: tuple[str, ...]
    word: tuple[str, ...]


# ---------------------------------------------------------------------------
# .pa v1 text format
# ---------------------------------------------------------------------------


def parse_automaton(text: str) -> ProbabilisticAutomaton:
    """Parse the ``pa v1`` line format into an automaton.

    Raises :class:`FormatError` with a line number on syntax problems
    and on invariant violations (row sum above 1, unknown state,
    duplicate line for the same triple).
    """
    lines = text.splitlines()
    alphabet: list[str] | None = None
    states: list[str] | None = None
    initial: dict[str, Fraction] = {}
    accepting: list[str] | None = None
    transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
    seen_header = False
    seen_triples: set[tuple[str, str, str]] = set()

    def require_states(lineno: int) -> list[str]:
        if states is None:
            raise FormatError("'states' line must come first", lineno)
        return states

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not seen_header:
            if tokens != ["pa", "v1"]:
                raise FormatError("expected header 'pa v1'", lineno)
            seen_header = True
            continue
        keyword, args = tokens[0], tokens[1:]
        if keyword == "alphabet":
            if alphabet is not None:
                raise FormatError("duplicate 'alphabet' line", lineno)
            alphabet = args
        elif keyword == "states":
            if states is not None:
                raise FormatError("duplicate 'states' line", lineno)
            states = args
        elif keyword == "initial":
            if len(args) != 2:
                raise FormatError("expected 'initial <state> <num>/<den>'", lineno)
            q, p = args[0], parse_ratio(args[1], lineno)
            if q not in require_states(lineno):
                raise FormatError(f"unknown state {q!r}", lineno)
            if q in initial:
                raise FormatError(f"duplicate initial line for state {q!r}", lineno)
            if p > 0:
                initial[q] = p
        elif keyword == "accept":
            if accepting is not None:
                raise FormatError("duplicate 'accept' line", lineno)
            for q in args:
                if q not in require_states(lineno):
                    raise FormatError(f"unknown state {q!r}", lineno)
            accepting = args
        elif keyword == "trans":
            if len(args) != 4:
                raise FormatError(
                    "expected 'trans <state> <letter> <state> <num>/<den>'", lineno
                )
            q, a, q2, ptok = args
            p = parse_ratio(ptok, lineno)
            if alphabet is None or a not in alphabet:
                raise FormatError(f"unknown letter {a!r}", lineno)
            for s in (q, q2):
                if s not in require_states(lineno):
                    raise FormatError(f"unknown state {s!r}", lineno)
            if (q, a, q2) in seen_triples:
                raise FormatError(
                    f"duplicate transition line for {q!r} -{a}-> {q2!r}", lineno
                )
            seen_triples.add((q, a, q2))
            if p > 0:
                row = transitions.setdefault((q, a), {})
                row[q2] = p
                if sum(row.values(), ZERO) > ONE:
                    raise FormatError(
                        f"row sum exceeds 1 for state {q!r} on letter {a!r}", lineno
                    )
        else:
            raise FormatError(f"unknown keyword {keyword!r}", lineno)

    if not seen_header:
        raise FormatError("expected header 'pa v1'", 1)
    if states is None:
        raise FormatError("missing 'states' line", len(lines))
    if alphabet is None:
        raise FormatError("missing 'alphabet' line", len(lines))
    try:
        return ProbabilisticAutomaton(
            states=tuple(states),
            alphabet=tuple(alphabet),
            initial=initial,
            transitions=transitions,
            accepting=frozenset(accepting or ()),
        )
    except InvariantError as exc:
        raise FormatError(str(exc)) from exc


def serialize_automaton(pa: ProbabilisticAutomaton) -> str:
    """Bit-exact serialization: lowest-terms rationals, declaration order."""
    out = ["pa v1"]
    out.append("alphabet " + " ".join(pa.alphabet) if pa.alphabet else "alphabet")
    out.append("states " + " ".join(pa.states) if pa.states else "states")
    for q in pa.states:
        if q in pa.initial:
            out.append(f"initial {q} {format_ratio(pa.initial[q])}")
    acc = [q for q in pa.states if q in pa.accepting]
    out.append("accept " + " ".join(acc) if acc else "accept")
    for q in pa.states:
        for a in pa.alphabet:
            row = pa.transitions.get((q, a))
            if not row:
                continue
            for q2 in sorted(row, key=pa.state_index):
                out.append(f"trans {q} {a} {q2} {format_ratio(row[q2])}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


def forward_vector(
    pa: ProbabilisticAutomaton,
    word: Word,
    start: Mapping[str, Fraction] | None = None,
) -> dict[str, Fraction]:
    """Propagate a state-indexed probability row vector through ``word``.

    Starts from the initial distribution unless ``start`` is given.
    Propagation is a monoid action: a word followed by another equals
    their concatenation.
    """
    pa.check_word(word)
    vec = dict(pa.initial if start is None else start)
    for a in word:
        nxt: dict[str, Fraction] = {}
        for q, mass in vec.items():
            for q2, p in pa.row(q, a).items():
                nxt[q2] = nxt.get(q2, ZERO) + mass * p
        vec = nxt
    return vec


def acceptance_probability(pa: ProbabilisticAutomaton, word: Word) -> Fraction:
    """Exact probability of ``word``: the summed mass on accepting states
    after propagating the initial vector, which equals the sum of the
    probabilities of all accepting runs."""
    vec = forward_vector(pa, word)
    return sum((p for q, p in vec.items() if q in pa.accepting), ZERO)


def enumerate_accepting_runs(
    pa: ProbabilisticAutomaton, word: Word
) -> list[tuple[Run, Fraction]]:
    """All accepting runs over ``word`` with their exact probabilities.

    A run's probability includes the initial mass of its first state.
    Output is sorted lexicographically by state indices, so it is
    deterministic for a fixed automaton.
    """
    pa.check_word(word)
    word = tuple(word)
    results: list[tuple[Run, Fraction]] = []

    def extend(prefix: list[str], prob: Fraction, pos: int) -> None:
        if pos == len(word):
            if prefix[-1] in pa.accepting:
                results.append((Run(tuple(prefix), word), prob))
            return
        a = word[pos]
        for q2, p in pa.row(prefix[-1], a).items():
            prefix.append(q2)
            extend(prefix, prob * p, pos + 1)
            prefix.pop()

    for q0 in sorted(pa.initial, key=pa.state_index):
        extend([q0], pa.initial[q0], 0)

    results.sort(key=lambda rp: tuple(pa.state_index(q) for q in rp[0].states))
    return results


# ---------------------------------------------------------------------------
# Normalisation
# ---------------------------------------------------------------------------


def normalize_initial(
    pa: ProbabilisticAutomaton, preserve_epsilon: bool = False
) -> ProbabilisticAutomaton:
    """Replace the initial sub-distribution by a fresh single initial state.

    The fresh state's row on each letter is the initial-weighted sum of
    the original rows, so acceptance probabilities agree on every
    non-empty word.  The empty word is only approximated: by default the
    fresh state is non-accepting; with ``preserve_epsilon`` it is
    accepting whenever the original initial distribution puts positive
    mass on an accepting state.
    """
    fresh = "init"
    suffix = 0
    taken = set(pa.states)
    while fresh in taken:
        fresh = f"init{suffix}"
        suffix += 1

    transitions: dict[tuple[str, str], dict[str, Fraction]] = {
        key: dict(row) for key, row in pa.transitions.items()
    }
    for a in pa.alphabet:
        row: dict[str, Fraction] = {}
        for q, mass in pa.initial.items():
            for q2, p in pa.row(q, a).items():
                row[q2] = row.get(q2, ZERO) + mass * p
        if row:
            transitions[(fresh, a)] = row

    accepting = set(pa.accepting)
    eps_mass = sum((pa.initial[q] for q in pa.initial if q in pa.accepting), ZERO)
    if preserve_epsilon and eps_mass > 0:
        accepting.add(fresh)

    return ProbabilisticAutomaton(
        states=(fresh, *pa.states),
        alphabet=pa.alphabet,
        initial={fresh: ONE},
        transitions=transitions,
        accepting=frozenset(accepting),
    )


def trim(pa: ProbabilisticAutomaton) -> ProbabilisticAutomaton:
    """Keep only useful states: reachable from the initial support and
    co-reachable to an accepting state.  Acceptance probabilities are
    unchanged for every word."""
    succ: dict[str, set[str]] = {q: set() for q in pa.states}
    pred: dict[str, set[str]] = {q: set() for q in pa.states}
    for (q, _a), row in pa.transitions.items():
        for q2 in row:
            succ[q].add(q2)
            pred[q2].add(q)

    def closure(seed: Iterable[str], edges: dict[str, set[str]]) -> set[str]:
        seen = set(seed)
        stack = list(seen)
        while stack:
            for nxt in edges[stack.pop()]:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    reachable = closure(pa.initial, succ)
    co_reachable = closure(pa.accepting, pred)
    useful = reachable & co_reachable

    states = tuple(q for q in pa.states if q in useful)
    transitions = {}
    for (q, a), row in pa.transitions.items():
        if q not in useful:
            continue
        kept = {q2: p for q2, p in row.items() if q2 in useful}
        if kept:
            transitions[(q, a)] = kept
    return ProbabilisticAutomaton(
        states=states,
        alphabet=pa.alphabet,
        initial={q: p for q, p in pa.initial.items() if q in useful},
        transitions=transitions,
        accepting=frozenset(q for q in pa.accepting if q in useful),
    )
