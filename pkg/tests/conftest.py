from fractions import Fraction

import pytest

from pba.automaton import ProbabilisticAutomaton
from pba.generators import Graph, bin_automaton, clique_automaton, mod_dfa

ONE = Fraction(1)


@pytest.fixture(scope="session")
def bin_pa():
    return bin_automaton()


@pytest.fixture(scope="session")
def triangle_graph():
    return Graph(3, frozenset({(1, 2), (1, 3), (2, 3)}))


@pytest.fixture(scope="session")
def fig2_graph():
    # four vertices whose only triangle is {1, 2, 3}
    return Graph(4, frozenset({(1, 2), (1, 3), (2, 3), (3, 4)}))


@pytest.fixture(scope="session")
def clique_k3(triangle_graph):
    return clique_automaton(triangle_graph)


@pytest.fixture(scope="session")
def dfa_pair():
    # word lengths divisible by 2 resp. 3, over the single letter a
    return [mod_dfa("a", 2, {0}), mod_dfa("a", 3, {0})]


@pytest.fixture(scope="session")
def double_loop_pa():
    # smallest transition-map automaton with doubling run counts: both
    # states accepting, every step branches two ways
    quarter = Fraction(1, 4)
    return ProbabilisticAutomaton(
        states=("p", "q"),
        alphabet=("a",),
        initial={"p": ONE},
        transitions={
            ("p", "a"): {"p": quarter, "q": quarter},
            ("q", "a"): {"p": quarter, "q": quarter},
        },
        accepting=frozenset({"p", "q"}),
    )
