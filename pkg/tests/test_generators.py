import random
from fractions import Fraction
from itertools import combinations

import pytest

from pba.automaton import (
    acceptance_probability,
    parse_automaton,
    serialize_automaton,
)
from pba.errors import FormatError, InvariantError
from pba.generators import (
    Graph,
    Homomorphism,
    clique_automaton,
    dfa_intersection_automaton,
    homomorphism_lift,
    isolation_instance,
    max_clique,
    mod_dfa,
    parse_graph,
    random_k_ambiguous,
    serialize_graph,
)
from pba.ambiguity import is_k_ambiguous
from pba.witness import exhaustive_value

from oracles import bin_value, brute_max_clique, product_dfa_min_word

F = Fraction


def all_words(alphabet, max_len):
    words = [()]
    frontier = [()]
    for _ in range(max_len):
        frontier = [w + (a,) for w in frontier for a in alphabet]
        words.extend(frontier)
    return words


# ---------------------------------------------------------------------------
# graphs
# ---------------------------------------------------------------------------


def test_graph_roundtrip():
    g = parse_graph("graph 4\nedge 1 2\nedge 3 4\n")
    assert g.n == 4
    assert g.adjacent(2, 1)
    assert parse_graph(serialize_graph(g)) == g


def test_graph_self_loop_rejected():
    with pytest.raises(FormatError, match="self-loop"):
        parse_graph("graph 2\nedge 1 1\n")


def test_max_clique_matches_oracle():
    rng = random.Random(5)
    for _ in range(30):
        n = rng.randint(1, 5)
        edges = frozenset(
            (i, j) for i, j in combinations(range(1, n + 1), 2) if rng.random() < 0.5
        )
        g = Graph(n, edges)
        assert max_clique(g) == brute_max_clique(n, edges)


# ---------------------------------------------------------------------------
# binary-value automaton and lifts
# ---------------------------------------------------------------------------


def test_bin_formula(bin_pa):
    assert acceptance_probability(bin_pa, "1") == F(1, 2)
    assert acceptance_probability(bin_pa, "") == 0
    for word in all_words(("0", "1"), 8):
        assert acceptance_probability(bin_pa, word) == bin_value(word)


def test_identity_lift(bin_pa):
    lifted = homomorphism_lift(bin_pa, Homomorphism({"0": "0", "1": "1"}))
    for word in all_words(("0", "1"), 6):
        assert acceptance_probability(lifted, word) == bin_value(word)


def test_lift_expands_letters(bin_pa):
    lifted = homomorphism_lift(bin_pa, Homomorphism({"a": "10", "b": "0"}))
    assert acceptance_probability(lifted, ("a",)) == bin_value("10")
    assert acceptance_probability(lifted, ("a", "b")) == bin_value("100")
    assert acceptance_probability(lifted, ("b", "a")) == bin_value("010")


def test_complement_lift(bin_pa):
    lifted = homomorphism_lift(
        bin_pa, Homomorphism({"0": "0", "1": "1"}), complement=True
    )
    for word in all_words(("0", "1"), 6):
        assert acceptance_probability(lifted, word) == 1 - bin_value(word)


def test_lift_refuses_empty_image(bin_pa):
    with pytest.raises(InvariantError, match="empty image"):
        homomorphism_lift(bin_pa, Homomorphism({"a": ""}))


def test_isolation_identity_random():
    rng = random.Random(17)
    for _ in range(10):
        phi1 = Homomorphism(
            {a: "".join(rng.choice("01") for _ in range(rng.randint(1, 3)))
             for a in "ab"}
        )
        phi2 = Homomorphism(
            {a: "".join(rng.choice("01") for _ in range(rng.randint(1, 3)))
             for a in "ab"}
        )
        pa = isolation_instance(phi1, phi2)
        for word in all_words(("a", "b"), 5):
            if not word:
                continue
            expected = (
                bin_value(phi1.apply(word)) + 1 - bin_value(phi2.apply(word))
            ) / 2
            assert acceptance_probability(pa, word) == expected


def test_isolation_equal_substitutions_pin_half():
    phi = Homomorphism({"a": "10", "b": "1"})
    pa = isolation_instance(phi, phi)
    for word in all_words(("a", "b"), 5):
        if word:
            assert acceptance_probability(pa, word) == F(1, 2)


def test_isolation_single_letters():
    pa = isolation_instance(Homomorphism({"a": "1"}), Homomorphism({"a": "0"}))
    assert acceptance_probability(pa, ("a",)) == F(3, 4)


def test_isolation_alphabet_mismatch():
    with pytest.raises(InvariantError, match="source alphabet"):
        isolation_instance(Homomorphism({"a": "1"}), Homomorphism({"b": "1"}))


# ---------------------------------------------------------------------------
# clique automata
# ---------------------------------------------------------------------------


def test_fig2_anchor(fig2_graph):
    pa = clique_automaton(fig2_graph)
    assert acceptance_probability(pa, "1110") == F(3, 32)
    assert max_clique(fig2_graph) == 3


def test_k3_value(clique_k3):
    value, word = exhaustive_value(clique_k3, 3)
    assert value == F(1, 4)
    assert word == ("1", "1", "1")


def test_clique_identity_exhaustive_small():
    # every graph on up to 3 vertices
    for n in (1, 2, 3):
        pairs = list(combinations(range(1, n + 1), 2))
        for bits in range(2 ** len(pairs)):
            edges = frozenset(p for i, p in enumerate(pairs) if bits >> i & 1)
            g = Graph(n, edges)
            pa = clique_automaton(g)
            value, _ = exhaustive_value(pa, n)
            assert n * 2 ** (n - 1) * value == max_clique(g)


def test_edgeless_value():
    for n in (1, 2, 3, 4):
        pa = clique_automaton(Graph(n, frozenset()))
        value, _ = exhaustive_value(pa, n)
        assert value == F(1, n * 2 ** (n - 1))


def test_clique_only_length_n_words_accepted(fig2_graph):
    pa = clique_automaton(fig2_graph)
    for word in all_words(("0", "1"), 5):
        if len(word) != 4:
            assert acceptance_probability(pa, word) == 0


def test_clique_is_n_ambiguous(fig2_graph):
    assert is_k_ambiguous(clique_automaton(fig2_graph), 4)


# ---------------------------------------------------------------------------
# deterministic unions
# ---------------------------------------------------------------------------


def test_dfa_intersection_value_one(dfa_pair):
    union = dfa_intersection_automaton(dfa_pair)
    # both components accept the empty word, so the true minimal
    # witness is the empty word; a^6 is the minimal non-empty one
    assert acceptance_probability(union, "") == 1
    assert acceptance_probability(union, "a" * 6) == 1
    for length in range(1, 6):
        assert acceptance_probability(union, "a" * length) < 1
    assert product_dfa_min_word(dfa_pair) == ()


def test_single_dfa_membership():
    dfa = mod_dfa("a", 3, {1})
    union = dfa_intersection_automaton([dfa])
    for length in range(8):
        expected = F(1) if length % 3 == 1 else F(0)
        assert acceptance_probability(union, "a" * length) == expected


def test_disjoint_languages_value_below_one():
    dfas = [mod_dfa("a", 2, {0}), mod_dfa("a", 2, {1})]
    union = dfa_intersection_automaton(dfas)
    assert product_dfa_min_word(dfas) is None
    value, _ = exhaustive_value(union, 8)
    assert value < 1


def test_dfa_union_requires_determinism(bin_pa):
    with pytest.raises(InvariantError, match="DFA"):
        dfa_intersection_automaton([bin_pa])


# ---------------------------------------------------------------------------
# random fixtures
# ---------------------------------------------------------------------------


def test_random_k_ambiguous_respects_k():
    for seed in range(12):
        pa = random_k_ambiguous(4, 2, seed=seed)
        assert is_k_ambiguous(pa, 2)
    assert is_k_ambiguous(random_k_ambiguous(3, 1, seed=0), 1)


def test_random_deterministic_per_seed():
    first = serialize_automaton(random_k_ambiguous(5, 2, seed=42))
    second = serialize_automaton(random_k_ambiguous(5, 2, seed=42))
    other = serialize_automaton(random_k_ambiguous(5, 2, seed=43))
    assert first == second
    assert first != other


def test_all_generators_roundtrip(bin_pa, clique_k3, dfa_pair):
    fixtures = [
        bin_pa,
        clique_k3,
        dfa_intersection_automaton(dfa_pair),
        isolation_instance(Homomorphism({"a": "1"}), Homomorphism({"a": "01"})),
        random_k_ambiguous(4, 2, seed=9),
    ]
    for pa in fixtures:
        assert parse_automaton(serialize_automaton(pa)) == pa
