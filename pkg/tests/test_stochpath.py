import random
from fractions import Fraction

import pytest

from pba.ambiguity import is_k_ambiguous
from pba.automaton import acceptance_probability
from pba.errors import AmbiguityError, FormatError, InvariantError
from pba.generators import mod_dfa, random_k_ambiguous
from pba.stochpath import (
    DagEdge,
    MultiWeightedDag,
    approximate_value,
    convex_covers,
    convex_pareto_2,
    decide_stochastic_path,
    emptiness_2ambiguous,
    epsilon_convex_pareto,
    exact_pareto,
    parse_dag,
    path_record,
    path_value,
    path_word,
    pointwise_covers,
    reduce_to_dag,
    serialize_dag,
)
from pba.witness import exhaustive_emptiness, exhaustive_value, witness_bound

from oracles import enumerate_dag_paths, random_dag

F = Fraction
ZERO = F(0)
ONE = F(1)


def parallel_dag(weight_rows):
    return MultiWeightedDag(
        vertices=("s", "t"),
        edges=tuple(DagEdge("s", "t", tuple(w)) for w in weight_rows),
        source="s",
        target="t",
        k=len(weight_rows[0]),
    )


# ---------------------------------------------------------------------------
# model and format
# ---------------------------------------------------------------------------


def test_cycle_rejected():
    with pytest.raises(InvariantError, match="cycle"):
        MultiWeightedDag(
            vertices=("a", "b"),
            edges=(
                DagEdge("a", "b", (ONE,)),
                DagEdge("b", "a", (ONE,)),
            ),
            source="a",
            target="b",
            k=1,
        )


def test_weight_range_checked():
    with pytest.raises(InvariantError, match="outside"):
        parallel_dag([(F(3, 2), ONE)])


def test_spg_roundtrip():
    dag = parallel_dag([(F(1, 2), F(1, 3)), (F(2, 5), F(4, 5))])
    text = serialize_dag(dag)
    again = parse_dag(text)
    assert again.k == 2
    assert [e.weights for e in again.edges] == [e.weights for e in dag.edges]
    assert serialize_dag(again) == text


def test_spg_parse_errors():
    with pytest.raises(FormatError, match="header"):
        parse_dag("vertex a\n")
    with pytest.raises(FormatError, match="rationals"):
        parse_dag("spg v1 k=2\nvertex a b\nsource a\ntarget b\nedge a b 1/2\n")


# ---------------------------------------------------------------------------
# path values
# ---------------------------------------------------------------------------


def test_running_example_path():
    dag = MultiWeightedDag(
        vertices=("s", "p", "q", "t"),
        edges=(
            DagEdge("s", "p", (F(2, 5), F(3, 5))),
            DagEdge("p", "q", (F(9, 10), F(1, 10))),
            DagEdge("q", "t", (F(9, 10), F(9, 10))),
        ),
        source="s",
        target="t",
        k=2,
    )
    record = path_record(dag, [0, 1, 2])
    assert record.weight == (F(81, 250), F(27, 500))
    assert path_value(record) == F(189, 500)
    sat, best = decide_stochastic_path(dag, F(37, 100))
    assert sat and best.value == F(189, 500)


def test_empty_path_when_source_is_target():
    dag = MultiWeightedDag(
        vertices=("s",), edges=(), source="s", target="s", k=3
    )
    record = path_record(dag, [])
    assert record.weight == (ONE, ONE, ONE)
    assert path_value(record) == 3
    assert [m.weight for m in exact_pareto(dag)] == [(ONE, ONE, ONE)]


def test_zero_edge_value():
    dag = parallel_dag([(ZERO, ZERO)])
    assert path_value(path_record(dag, [0])) == 0


# ---------------------------------------------------------------------------
# exact frontier
# ---------------------------------------------------------------------------


def test_exact_pareto_drops_dominated():
    dag = parallel_dag([(F(1, 2), F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 4), F(1, 4))])
    frontier = [m.weight for m in exact_pareto(dag)]
    assert frontier == [(F(1, 2), F(1, 4)), (F(1, 4), F(1, 2))]


def test_exact_pareto_all_equal_weights():
    dag = parallel_dag([(F(1, 3), F(1, 3))] * 3)
    assert len(exact_pareto(dag)) == 1


def test_exact_pareto_matches_enumeration():
    rng = random.Random(100)
    for _ in range(40):
        dag = random_dag(rng)
        frontier = exact_pareto(dag)
        paths = enumerate_dag_paths(dag)
        weights = [w for _e, w in paths]
        # every path is dominated by some member
        for w in weights:
            assert pointwise_covers(frontier, w)
        # members are paths and pairwise undominated
        member_weights = [m.weight for m in frontier]
        assert set(member_weights) <= set(weights)
        for i, a in enumerate(member_weights):
            for j, b in enumerate(member_weights):
                if i != j:
                    assert not all(x <= y for x, y in zip(a, b))


def test_exact_pareto_no_path():
    dag = MultiWeightedDag(
        vertices=("s", "t", "dead"),
        edges=(DagEdge("s", "dead", (ONE,)),),
        source="s",
        target="t",
        k=1,
    )
    assert len(exact_pareto(dag)) == 0


# ---------------------------------------------------------------------------
# approximate frontier
# ---------------------------------------------------------------------------


def test_epsilon_single_edge():
    dag = parallel_dag([(F(1, 3), F(2, 3))])
    for eps in (F(1, 2), F(1, 10)):
        curve = epsilon_convex_pareto(dag, eps)
        assert [m.weight for m in curve] == [(F(1, 3), F(2, 3))]


def test_epsilon_rejects_nonpositive():
    dag = parallel_dag([(ONE, ONE)])
    with pytest.raises(ValueError):
        epsilon_convex_pareto(dag, ZERO)


def test_epsilon_coverage_random():
    rng = random.Random(200)
    for _ in range(25):
        dag = random_dag(rng)
        paths = enumerate_dag_paths(dag)
        exact = exact_pareto(dag)
        for eps in (F(1, 2), F(1, 10)):
            curve = epsilon_convex_pareto(dag, eps)
            for _edges, weight in paths:
                assert pointwise_covers(curve, weight, eps)
            # value within the factor of the true maximum
            true_max = max((m.value for m in exact), default=ZERO)
            assert curve.max_value() <= true_max
            assert true_max <= (1 + eps) * curve.max_value()


def test_epsilon_members_are_real_paths():
    rng = random.Random(300)
    dag = random_dag(rng, max_vertices=6)
    weights = {w for _e, w in enumerate_dag_paths(dag)}
    for member in epsilon_convex_pareto(dag, F(1, 10)):
        assert member.weight in weights


# ---------------------------------------------------------------------------
# convex curve, two objectives
# ---------------------------------------------------------------------------


def test_convex2_keeps_log_convex_point():
    curve = convex_pareto_2(
        parallel_dag([(F(9, 10), F(1, 10)), (F(1, 2), F(1, 2)), (F(1, 10), F(9, 10))])
    )
    assert [m.weight for m in curve] == [
        (F(9, 10), F(1, 10)),
        (F(1, 2), F(1, 2)),
        (F(1, 10), F(9, 10)),
    ]


def test_convex2_prunes_dominated_point():
    curve = convex_pareto_2(
        parallel_dag([(F(1, 2), F(1, 4)), (F(1, 4), F(1, 2)), (F(1, 4), F(1, 4))])
    )
    assert [m.weight for m in curve] == [(F(1, 2), F(1, 4)), (F(1, 4), F(1, 2))]


def test_convex2_drops_point_inside_hull():
    # (1/4, 1/4) is undominated pointwise but under the log-space chord
    # of the outer points: sqrt(9/10 * 1/10) = 0.3 > 1/4
    curve = convex_pareto_2(
        parallel_dag([(F(9, 10), F(1, 10)), (F(1, 4), F(1, 4)), (F(1, 10), F(9, 10))])
    )
    assert [m.weight for m in curve] == [
        (F(9, 10), F(1, 10)),
        (F(1, 10), F(9, 10)),
    ]
    # and the dropped point is still convexly covered
    assert convex_covers(curve, (F(1, 4), F(1, 4)))


def test_convex2_exact_midpoint_coverage():
    # (1/4, 1/4) sits exactly on the log-space segment between the
    # members: lambda equals one half exactly
    curve = convex_pareto_2(parallel_dag([(F(1, 2), F(1, 8)), (F(1, 8), F(1, 2))]))
    assert convex_covers(curve, (F(1, 4), F(1, 4)))
    assert not convex_covers(curve, (F(1, 4), F(262145, 1048576)))


def test_convex2_zero_component_paths():
    # a path with a zero second component still rules the first axis
    curve = convex_pareto_2(
        parallel_dag([(F(9, 10), ZERO), (F(1, 2), F(1, 2))])
    )
    weights = [m.weight for m in curve]
    assert (F(9, 10), ZERO) in weights
    assert (F(1, 2), F(1, 2)) in weights
    assert convex_covers(curve, (F(3, 4), ZERO))
    assert not convex_covers(curve, (F(95, 100), ZERO))


def test_convex2_requires_two_objectives():
    with pytest.raises(ValueError):
        convex_pareto_2(parallel_dag([(ONE,)]))


def test_coverage_indeterminate_fails_loudly():
    from pba.errors import PrecisionError
    from pba.stochpath.convex2 import _pair_covers

    # the feasible interval is empty by about 1e-18 around an
    # irrational point: no probe within the cap can certify either way
    a = (F(1, 2), F(1, 4))
    b = (F(1, 4), F(1, 2))
    target = (F(3, 8), F(2**60 + 1, 3 * 2**60))
    with pytest.raises(PrecisionError):
        _pair_covers(a, b, target, 256)


def test_convex2_coverage_random():
    rng = random.Random(400)
    for _ in range(30):
        dag = random_dag(rng)
        curve = convex_pareto_2(dag)
        paths = enumerate_dag_paths(dag)
        true_max = max((sum(w, ZERO) for _e, w in paths), default=ZERO)
        assert curve.max_value() == true_max
        for _edges, weight in paths:
            assert convex_covers(curve, weight)


def test_convex2_quasi_polynomial_size():
    rng = random.Random(500)
    for _ in range(20):
        dag = random_dag(rng)
        curve = convex_pareto_2(dag)
        n = len(dag.vertices)
        assert len(curve) <= max(4, n ** max(1, n.bit_length() - 1))


# ---------------------------------------------------------------------------
# reduction
# ---------------------------------------------------------------------------


def test_reduce_unambiguous_matches_value():
    for seed in range(8):
        pa = random_k_ambiguous(4, 1, seed=seed)
        dag = reduce_to_dag(pa, 1)
        best = max((p.value for p in exact_pareto(dag)), default=ZERO)
        value, _ = exhaustive_value(pa, witness_bound(pa, 1))
        assert best == value


def test_reduce_2ambiguous_matches_value():
    for seed in range(15):
        pa = random_k_ambiguous(3, 2, seed=seed)
        dag = reduce_to_dag(pa, 2)
        paths = enumerate_dag_paths(dag)
        best = max((sum(w, ZERO) for _e, w in paths), default=ZERO)
        value, _ = exhaustive_value(pa, witness_bound(pa, 2))
        assert best == value


def test_reduce_exact_on_arbitrary_2ambiguous():
    # genuinely nondeterministic automata, many with a two-state
    # initial distribution: not the disjoint-union shape
    from oracles import random_automaton
    from pba.automaton import trim

    found = 0
    seed = 0
    while found < 40:
        seed += 1
        rng = random.Random(seed * 101)
        pa = random_automaton(rng, max_states=3, max_letters=2)
        n = len(trim(pa).states)
        if n == 0 or n > 3 or not is_k_ambiguous(pa, 2):
            continue
        found += 1
        dag = reduce_to_dag(pa, 2, check=False)
        best = max(
            (sum(w, ZERO) for _e, w in enumerate_dag_paths(dag)), default=ZERO
        )
        value, _ = exhaustive_value(pa, n * n)
        assert best == value


def test_reduce_empty_accepting():
    pa = mod_dfa("a", 3, set())
    dag = reduce_to_dag(pa, 1, check=False)
    for _edges, weight in enumerate_dag_paths(dag):
        assert sum(weight, ZERO) == 0


def test_reduce_refuses_large_k():
    pa = mod_dfa("a", 2, {0})
    with pytest.raises(InvariantError, match="refused"):
        reduce_to_dag(pa, 4)
    dag = reduce_to_dag(pa, 4, allow_large_k=True, length_bound=2, check=False)
    assert dag.k == 4


def test_reduce_checks_ambiguity(bin_pa):
    with pytest.raises(AmbiguityError):
        reduce_to_dag(bin_pa, 2)


def test_reduce_source_edge_weight_single_initial():
    pa = mod_dfa("a", 2, {0})
    dag = reduce_to_dag(pa, 2, check=False)
    source_edges = [e for e in dag.edges if e.src == "s"]
    assert len(source_edges) == 1
    assert source_edges[0].weights == (ONE, ONE)


# ---------------------------------------------------------------------------
# decisions built on the reduction
# ---------------------------------------------------------------------------


def test_decide_threshold_k_is_never_reached():
    dag = parallel_dag([(ONE, ONE)])
    sat, _ = decide_stochastic_path(dag, F(2))
    assert not sat  # value <= k, strictly


def test_decide_agrees_with_enumeration():
    rng = random.Random(600)
    for _ in range(15):
        dag = random_dag(rng)
        paths = enumerate_dag_paths(dag)
        best = max((sum(w, ZERO) for _e, w in paths), default=ZERO)
        for _ in range(20):
            threshold = F(rng.randint(0, 20), 10)
            sat, witness = decide_stochastic_path(dag, threshold)
            assert sat == (best > threshold)
            if sat:
                assert witness.value > threshold


def test_approximate_value_sandwich():
    for seed in range(10):
        pa = random_k_ambiguous(3, 2, seed=seed)
        value, _ = exhaustive_value(pa, witness_bound(pa, 2))
        for eps in (F(1, 2), F(1, 10), F(1, 100)):
            output = approximate_value(pa, 2, eps)
            assert output <= value
            assert value <= (1 + eps) * output


def test_approximate_value_clique_k3(clique_k3):
    output = approximate_value(clique_k3, 3, F(1, 2))
    assert output <= F(1, 4) <= (1 + F(1, 2)) * output


def test_emptiness_2ambiguous_simple():
    # two single-state components accepting everything
    pa = random_k_ambiguous(2, 2, seed=999)
    union = pa  # any 2-ambiguous automaton works for the API shape
    assert is_k_ambiguous(union, 2)
    sat, word = emptiness_2ambiguous(union, F(999, 1000))
    value, _ = exhaustive_value(union, witness_bound(union, 2))
    assert sat == (value > F(999, 1000))


def test_emptiness_2ambiguous_strict_at_one():
    left = mod_dfa("a", 1, {0})
    right = mod_dfa("a", 1, {0})
    from pba.generators import dfa_intersection_automaton

    union = dfa_intersection_automaton([left, right])
    sat, word = emptiness_2ambiguous(union, F(999, 1000))
    assert sat
    assert acceptance_probability(union, word) == 1
    sat, word = emptiness_2ambiguous(union, F(1))
    assert not sat


def test_emptiness_2ambiguous_rejects_others(bin_pa):
    with pytest.raises(AmbiguityError):
        emptiness_2ambiguous(bin_pa, F(1, 2))


def test_emptiness_agreement_with_exhaustive():
    rng = random.Random(700)
    for seed in range(12):
        pa = random_k_ambiguous(3, 2, seed=seed)
        bound = witness_bound(pa, 2)
        for _ in range(6):
            threshold = F(rng.randint(0, 12), 12)
            sat, word = emptiness_2ambiguous(pa, threshold, check=False)
            report = exhaustive_emptiness(pa, threshold, bound)
            assert sat == (report.word is not None)
            if sat:
                assert acceptance_probability(pa, word) > threshold


def test_path_word_reads_labels():
    pa = mod_dfa("a", 2, {1})
    dag = reduce_to_dag(pa, 1, check=False)
    sat, best = decide_stochastic_path(dag, F(1, 2))
    assert sat
    word = path_word(dag, best)
    assert acceptance_probability(pa, word) == 1
