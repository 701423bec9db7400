"""Constructions of the benchmark automaton families.

Every generator returns a validated :class:`ProbabilisticAutomaton`
that round-trips through the ``.pa v1`` format.  The families are the
binary-value automaton, homomorphism lifts and their half/half
combination, the clique-value automaton over a graph, deterministic
unions, and seeded random k-ambiguous unions of weighted DFAs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .automaton import ProbabilisticAutomaton, trim
from .errors import FormatError, InvariantError

__all__ = [
    "Graph",
    "Homomorphism",
    "parse_graph",
    "serialize_graph",
    "max_clique",
    "bin_automaton",
    "homomorphism_lift",
    "isolation_instance",
    "clique_automaton",
    "dfa_intersection_automaton",
    "mod_dfa",
    "random_k_ambiguous",
]

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


# ---------------------------------------------------------------------------
# Undirected graphs (.g format) and brute-force cliques
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Graph:
    """Undirected graph on vertices 1..n, no self-loops."""

    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        normalized = set()
        for i, j in self.edges:
            if i == j:
                raise InvariantError(f"self-loop on vertex {i}")
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise InvariantError(f"edge ({i}, {j}) outside 1..{self.n}")
            normalized.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(normalized))

    def adjacent(self, i: int, j: int) -> bool:
        return (min(i, j), max(i, j)) in self.edges


def parse_graph(text: str) -> Graph:
    """Parse the ``.g`` format: ``graph <n>`` then ``edge i j`` lines."""
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if tokens[0] == "graph":
            if n is not None:
                raise FormatError("duplicate 'graph' line", lineno)
            if len(tokens) != 2 or not tokens[1].isdigit():
                raise FormatError("expected 'graph <n>'", lineno)
            n = int(tokens[1])
        elif tokens[0] == "edge":
            if n is None:
                raise FormatError("'graph <n>' must come first", lineno)
            if len(tokens) != 3:
                raise FormatError("expected 'edge <i> <j>'", lineno)
            try:
                i, j = int(tokens[1]), int(tokens[2])
            except ValueError:
                raise FormatError("vertex indices must be integers", lineno) from None
            edges.add((i, j))
        else:
            raise FormatError(f"unknown keyword {tokens[0]!r}", lineno)
    if n is None:
        raise FormatError("missing 'graph <n>' line", 1)
    try:
        return Graph(n=n, edges=frozenset(edges))
    except InvariantError as exc:
        raise FormatError(str(exc)) from exc


def serialize_graph(graph: Graph) -> str:
    out = [f"graph {graph.n}"]
    for i, j in sorted(graph.edges):
        out.append(f"edge {i} {j}")
    return "\n".join(out) + "\n"


def max_clique(graph: Graph) -> int:
    """Size of a largest clique, by subset enumeration (small graphs only)."""
    best = 0
    vertices = range(1, graph.n + 1)
    for size in range(graph.n, 0, -1):
        if size <= best:
            break
        for subset in combinations(vertices, size):
            if all(graph.adjacent(i, j) for i, j in combinations(subset, 2)):
                best = size
                break
    return best


# ---------------------------------------------------------------------------
# Binary-value automaton and homomorphism lifts
# ---------------------------------------------------------------------------


def bin_automaton() -> ProbabilisticAutomaton:
    """Three-state automaton over {0,1} whose word probability is the
    binary value of the word, most significant digit first.

    A waiting state keeps probability 1/2 on either letter and hands
    the other 1/2 to an absorbing accepting sink on letter 1 (to an
    absorbing rejecting sink on letter 0).  Linearly ambiguous.
    """
    return ProbabilisticAutomaton(
        states=("wait", "acc", "rej"),
        alphabet=("0", "1"),
        initial={"wait": ONE},
        transitions={
            ("wait", "0"): {"wait": HALF, "rej": HALF},
            ("wait", "1"): {"wait": HALF, "acc": HALF},
            ("acc", "0"): {"acc": ONE},
            ("acc", "1"): {"acc": ONE},
            ("rej", "0"): {"rej": ONE},
            ("rej", "1"): {"rej": ONE},
        },
        accepting=frozenset({"acc"}),
    )


@dataclass(frozen=True)
class Homomorphism:
    """Letter-to-binary-word substitution, extended multiplicatively."""

    mapping: dict[str, str]

    def __post_init__(self):
        for letter, image in self.mapping.items():
            if not set(image) <= {"0", "1"}:
                raise InvariantError(
                    f"image of {letter!r} must be a word over 0/1, got {image!r}"
                )

    @property
    def alphabet(self) -> tuple[str, ...]:
        return tuple(self.mapping)

    def apply(self, word) -> str:
        return "".join(self.mapping[a] for a in word)


def homomorphism_lift(
    base: ProbabilisticAutomaton, hom: Homomorphism, complement: bool = False
) -> ProbabilisticAutomaton:
    """Automaton over the substitution's source alphabet whose transition
    on each letter is the product of the base's transitions along the
    letter's image; complementing the accepting set turns the computed
    quantity into one minus it (the base must be stochastic for that
    reading).  Empty images are refused: the simulation has no
    epsilon-transitions to express them."""
    if set(base.alphabet) != {"0", "1"}:
        raise InvariantError("base automaton must be over the alphabet {0, 1}")
    for letter, image in hom.mapping.items():
        if image == "":
            raise InvariantError(f"empty image for letter {letter!r} refused")

    transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
    for letter in hom.alphabet:
        image = hom.mapping[letter]
        # row of the matrix product, computed state by state
        for q in base.states:
            vec = {q: ONE}
            for bit in image:
                nxt: dict[str, Fraction] = {}
                for r, mass in vec.items():
                    for r2, p in base.row(r, bit).items():
                        nxt[r2] = nxt.get(r2, ZERO) + mass * p
                vec = nxt
            if vec:
                transitions[(q, letter)] = vec

    accepting = (
        frozenset(set(base.states) - base.accepting) if complement else base.accepting
    )
    return ProbabilisticAutomaton(
        states=base.states,
        alphabet=hom.alphabet,
        initial=dict(base.initial),
        transitions=transitions,
        accepting=accepting,
    )


def _prefix_states(
    pa: ProbabilisticAutomaton, prefix: str
) -> ProbabilisticAutomaton:
    renamed = {q: prefix + q for q in pa.states}
    return ProbabilisticAutomaton(
        states=tuple(renamed[q] for q in pa.states),
        alphabet=pa.alphabet,
        initial={renamed[q]: p for q, p in pa.initial.items()},
        transitions={
            (renamed[q], a): {renamed[q2]: p for q2, p in row.items()}
            for (q, a), row in pa.transitions.items()
        },
        accepting=frozenset(renamed[q] for q in pa.accepting),
    )


def _disjoint_union(
    parts: list[ProbabilisticAutomaton], masses: list[Fraction]
) -> ProbabilisticAutomaton:
    alphabet = parts[0].alphabet
    for pa in parts[1:]:
        if pa.alphabet != alphabet:
            raise InvariantError("alphabet mismatch between union components")
    states: list[str] = []
    initial: dict[str, Fraction] = {}
    transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
    accepting: set[str] = set()
    for idx, (pa, mass) in enumerate(zip(parts, masses)):
        tagged = _prefix_states(pa, f"u{idx}_")
        states.extend(tagged.states)
        for q, p in tagged.initial.items():
            initial[q] = p * mass
        transitions.update(tagged.transitions)
        accepting.update(tagged.accepting)
    return ProbabilisticAutomaton(
        states=tuple(states),
        alphabet=alphabet,
        initial=initial,
        transitions=transitions,
        accepting=frozenset(accepting),
    )


def isolation_instance(
    phi1: Homomorphism, phi2: Homomorphism
) -> ProbabilisticAutomaton:
    """Half/half union of the two lifted binary-value automata, the
    second with complemented acceptance, so the probability of every
    non-empty word is the average of the first binary value and one
    minus the second."""
    if phi1.alphabet != phi2.alphabet:
        raise InvariantError("the two substitutions must share a source alphabet")
    base = bin_automaton()
    left = homomorphism_lift(base, phi1, complement=False)
    right = homomorphism_lift(base, phi2, complement=True)
    return _disjoint_union([left, right], [HALF, HALF])


# ---------------------------------------------------------------------------
# Clique-value automaton
# ---------------------------------------------------------------------------


def clique_automaton(graph: Graph) -> ProbabilisticAutomaton:
    """n-ambiguous automaton over {0,1} whose value times n * 2^(n-1) is
    the size of a largest clique.

    One track per vertex i, with positions 0..n.  Reading letter 1 at
    position j means vertex j is selected: track i advances with
    probability 1 when j = i, with probability 1/2 when (i, j) is an
    edge, and dies otherwise.  Reading letter 0 at position j advances
    track i with probability 1/2 unless j = i (the tracked vertex must
    itself be selected): an unselected vertex never constrains the
    track.  Only words of length exactly n can be accepted, and each of
    the at-most-n accepting runs has probability 1/(n * 2^(n-1)).
    """
    n = graph.n
    if n < 1:
        raise InvariantError("graph must have at least one vertex")

    def name(i: int, j: int) -> str:
        return f"v{i}_{j}"

    states = tuple(name(i, j) for i in range(1, n + 1) for j in range(0, n + 1))
    transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            src = name(i, j - 1)
            dst = name(i, j)
            if j == i:
                transitions[(src, "1")] = {dst: ONE}
            elif graph.adjacent(i, j):
                transitions[(src, "1")] = {dst: HALF}
            if j != i:
                transitions[(src, "0")] = {dst: HALF}
    return ProbabilisticAutomaton(
        states=states,
        alphabet=("0", "1"),
        initial={name(i, 0): Fraction(1, n) for i in range(1, n + 1)},
        transitions=transitions,
        accepting=frozenset(name(i, n) for i in range(1, n + 1)),
    )


# ---------------------------------------------------------------------------
# Deterministic automata and their unions
# ---------------------------------------------------------------------------


def _check_deterministic(pa: ProbabilisticAutomaton) -> None:
    if len(pa.initial) != 1 or next(iter(pa.initial.values())) != ONE:
        raise InvariantError("a DFA must have a single initial state of mass 1")
    for (q, a), row in pa.transitions.items():
        if len(row) != 1 or next(iter(row.values())) != ONE:
            raise InvariantError(
                f"DFA transition {q!r} on {a!r} must have one target of "
                "probability 1"
            )


def dfa_intersection_automaton(
    dfas: list[ProbabilisticAutomaton],
) -> ProbabilisticAutomaton:
    """Disjoint union of N deterministic automata with initial mass 1/N
    each.  The result is N-ambiguous and has a word of probability 1
    exactly when some word is accepted by every component."""
    if not dfas:
        raise InvariantError("need at least one deterministic automaton")
    for pa in dfas:
        _check_deterministic(pa)
    share = Fraction(1, len(dfas))
    return _disjoint_union(list(dfas), [share] * len(dfas))


def mod_dfa(
    letter: str, modulus: int, accepting_residues: set[int], alphabet=None
) -> ProbabilisticAutomaton:
    """DFA counting occurrences of one letter modulo ``modulus``; other
    alphabet letters (if any) leave the count unchanged."""
    if modulus < 1:
        raise InvariantError("modulus must be positive")
    alphabet = tuple(alphabet) if alphabet is not None else (letter,)
    if letter not in alphabet:
        raise InvariantError("counted letter must belong to the alphabet")
    states = tuple(f"r{i}" for i in range(modulus))
    transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
    for i in range(modulus):
        for a in alphabet:
            j = (i + 1) % modulus if a == letter else i
            transitions[(f"r{i}", a)] = {f"r{j}": ONE}
    return ProbabilisticAutomaton(
        states=states,
        alphabet=alphabet,
        initial={"r0": ONE},
        transitions=transitions,
        accepting=frozenset(f"r{i}" for i in accepting_residues),
    )


# ---------------------------------------------------------------------------
# Random fixtures
# ---------------------------------------------------------------------------


def _random_unambiguous(
    rng: random.Random, size: int, alphabet: tuple[str, ...]
) -> ProbabilisticAutomaton:
    """One random trimmed weighted DFA (hence unambiguous) of the given
    size; retries deterministically until trimming keeps all states."""
    while True:
        states = tuple(f"s{i}" for i in range(size))
        transitions: dict[tuple[str, str], dict[str, Fraction]] = {}
        for q in states:
            for a in alphabet:
                roll = rng.random()
                if roll < 0.2:
                    continue  # no transition on this letter
                target = rng.choice(states)
                den = rng.randint(1, 8)
                num = rng.randint(1, den)
                transitions[(q, a)] = {target: Fraction(num, den)}
        accepting = frozenset(q for q in states if rng.random() < 0.5)
        candidate = ProbabilisticAutomaton(
            states=states,
            alphabet=alphabet,
            initial={states[0]: ONE},
            transitions=transitions,
            accepting=accepting or frozenset({rng.choice(states)}),
        )
        trimmed = trim(candidate)
        if len(trimmed.states) == size:
            return trimmed


def random_k_ambiguous(
    n: int, k: int, seed: int, alphabet: tuple[str, ...] = ("a", "b")
) -> ProbabilisticAutomaton:
    """Seeded random k-ambiguous automaton with ``n`` states in total:
    the disjoint union of k random trimmed weighted DFAs with initial
    mass 1/k each, so no word can carry more than k accepting runs."""
    if n < k or k < 1:
        raise InvariantError("need n >= k >= 1")
    rng = random.Random(seed)
    sizes = [n // k + (1 if i < n % k else 0) for i in range(k)]
    parts = [_random_unambiguous(rng, size, alphabet) for size in sizes]
    return _disjoint_union(parts, [Fraction(1, k)] * k)
