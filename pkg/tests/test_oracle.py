from __future__ import annotations

import numpy as np
import pytest
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from edgecount import (
    Deg,
    EmptyGraphError,
    EstimatorParams,
    Nbr,
    Pair,
    PlanProvenance,
    QueryLedger,
    QueryPlan,
    RandEdge,
    answer_plan,
    audit_nonadaptive,
    build_graph,
    build_sample_plan,
    gen_clique_plus_isolated,
    gen_gnm,
    gen_path,
    plan_from_blocks,
    rand_edge_block,
)


def _plan(specs, n, seed=0):
    return QueryPlan.from_specs(specs, PlanProvenance(n=n, epsilon=None, seed=seed))


def test_mixed_plan_answers(triangle):
    plan = _plan([Deg(0), Pair(0, 1), Nbr(0, 3)], n=3)
    transcript = answer_plan(triangle, plan, answer_seed=5)
    assert transcript.answers() == [2, 1, None]


def test_transcript_dump(triangle):
    plan = _plan([Deg(0), Pair(0, 1), Nbr(0, 3)], n=3)
    transcript = answer_plan(triangle, plan, answer_seed=5)
    assert transcript.dump_lines() == [
        "Deg(0) -> 2",
        "Pair(0,1) -> 1",
        "Nbr(0,3) -> none",
        "deg=1 rand_edge=0 nbr=1 pair=1 total=3",
    ]


def test_rand_edge_uniform_on_two_edge_path(path3):
    plan = _plan([RandEdge()] * 100_000, n=3)
    transcript = answer_plan(path3, plan, answer_seed=17)
    edges = list(zip(transcript.ans_a.tolist(), transcript.ans_b.tolist()))
    freq01 = edges.count((0, 1)) / len(edges)
    assert abs(freq01 - 0.5) <= 0.01
    assert set(edges) == {(0, 1), (1, 2)}


def test_rand_edge_uniform_chi_square():
    g = gen_gnm(8, 10, seed=2)
    plan = _plan([RandEdge()] * 100_000, n=8)
    transcript = answer_plan(g, plan, answer_seed=23)
    codes = transcript.ans_a * 8 + transcript.ans_b
    counts = np.bincount(np.searchsorted(g.edge_codes, codes), minlength=g.m)
    result = scipy.stats.chisquare(counts)
    assert result.pvalue >= 1e-3


def test_rand_edge_reports_stored_order():
    g = gen_gnm(50, 300, seed=4)
    transcript = answer_plan(g, _plan([RandEdge()] * 500, n=50), answer_seed=1)
    assert np.all(transcript.ans_a < transcript.ans_b)


def test_rand_edge_on_empty_graph_is_atomic():
    g = build_graph(4, [])
    ledger = QueryLedger()
    with pytest.raises(EmptyGraphError):
        answer_plan(g, _plan([Deg(0), RandEdge()], n=4), answer_seed=0, ledger=ledger)
    assert ledger.total == 0


def test_non_edge_queries_work_on_empty_graph():
    g = build_graph(3, [])
    transcript = answer_plan(g, _plan([Deg(1), Pair(0, 2), Nbr(0, 1)], n=3), answer_seed=0)
    assert transcript.answers() == [0, 0, None]


def test_answer_determinism(path3):
    plan = _plan([RandEdge()] * 50, n=3)
    first = answer_plan(path3, plan, answer_seed=9)
    second = answer_plan(path3, plan, answer_seed=9)
    assert np.array_equal(first.ans_a, second.ans_a)
    assert np.array_equal(first.ans_b, second.ans_b)
    third = answer_plan(path3, plan, answer_seed=10)
    assert not np.array_equal(first.ans_a, third.ans_a) or not np.array_equal(first.ans_b, third.ans_b)


def test_ledger_accumulates_across_plans(triangle):
    ledger = QueryLedger()
    answer_plan(triangle, _plan([Deg(0), Deg(1), RandEdge()], n=3), answer_seed=0, ledger=ledger)
    answer_plan(triangle, _plan([Pair(0, 1), Nbr(2, 1)], n=3), answer_seed=1, ledger=ledger)
    assert ledger.as_dict() == {"deg": 2, "rand_edge": 1, "nbr": 1, "pair": 1}
    assert ledger.total == 5


def test_plan_validation_errors(triangle):
    with pytest.raises(ValueError, match="Deg\\(7\\)"):
        answer_plan(triangle, _plan([Deg(7)], n=3), answer_seed=0)
    with pytest.raises(ValueError, match="Nbr"):
        answer_plan(triangle, _plan([Nbr(0, 0)], n=3), answer_seed=0)
    with pytest.raises(ValueError, match="Pair"):
        answer_plan(triangle, _plan([Pair(0, 5)], n=3), answer_seed=0)
    with pytest.raises(ValueError, match="built for n=4"):
        answer_plan(triangle, _plan([Deg(0)], n=4), answer_seed=0)


@st.composite
def graph_with_queries(draw):
    n = draw(st.integers(2, 12))
    pairs = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda p: p[0] != p[1]), max_size=30))
    g = build_graph(n, pairs)
    specs = draw(
        st.lists(
            st.one_of(
                st.builds(Deg, st.integers(0, n - 1)),
                st.builds(Nbr, st.integers(0, n - 1), st.integers(1, n)),
                st.builds(Pair, st.integers(0, n - 1), st.integers(0, n - 1)),
            ),
            max_size=25,
        )
    )
    return g, specs


@settings(max_examples=60, deadline=None)
@given(graph_with_queries())
def test_local_queries_match_direct_inspection(case):
    g, specs = case
    plan = _plan(specs, n=g.n)
    transcript = answer_plan(g, plan, answer_seed=3)
    adjacency = [sorted(g.neighbors(v).tolist()) for v in range(g.n)]
    for spec, answer in zip(specs, transcript.answers()):
        if isinstance(spec, Deg):
            assert answer == len(adjacency[spec.v])
        elif isinstance(spec, Nbr):
            if spec.i <= len(adjacency[spec.v]):
                assert answer == adjacency[spec.v][spec.i - 1]
            else:
                assert answer is None
        else:
            expected = int(spec.v in adjacency[spec.u])
            assert answer == expected
            mirrored = answer_plan(g, _plan([Pair(spec.v, spec.u)], n=g.n), answer_seed=3).answers()[0]
            assert mirrored == expected


@settings(max_examples=40, deadline=None)
@given(graph_with_queries(), st.integers(0, 10))
def test_ledger_matches_plan_multiplicities(case, extra_edges):
    g, specs = case
    plan = _plan(specs + [RandEdge()] * (extra_edges if g.m else 0), n=g.n)
    transcript = answer_plan(g, plan, answer_seed=0)
    assert transcript.ledger.as_dict() == plan.counts()
    assert transcript.ledger.total == len(plan)


def test_plan_round_trips_through_specs():
    specs = [Deg(3), RandEdge(), Nbr(1, 2), Pair(0, 4)]
    plan = _plan(specs, n=5)
    assert list(plan) == specs
    assert plan.counts() == {"deg": 1, "rand_edge": 1, "nbr": 1, "pair": 1}
    assert len(plan) == 4


def _sample_plan_fn(graph, epsilon, seed):
    return build_sample_plan(graph.n, EstimatorParams(epsilon=epsilon, master_seed=seed))


def _adaptive_plan_fn(graph, epsilon, seed):
    # cheats: aims a degree probe at the highest-degree vertex it saw
    target = int(np.argmax(graph.degrees))
    return QueryPlan.from_specs([Deg(target)], PlanProvenance(graph.n, epsilon, seed))


def test_audit_accepts_graph_blind_planner():
    n = 300
    graphs = [gen_path(n), gen_gnm(n, 600, seed=1), gen_clique_plus_isolated(n, 30)]
    assert audit_nonadaptive(_sample_plan_fn, graphs, epsilon=0.5, seed=11)


def test_audit_catches_adaptive_planner():
    graphs = [gen_path(50), gen_clique_plus_isolated(50, 10)]
    assert not audit_nonadaptive(_adaptive_plan_fn, graphs, epsilon=0.5, seed=0)


def test_audit_vacuous_and_mismatched():
    assert audit_nonadaptive(_sample_plan_fn, [gen_path(20)], epsilon=0.5, seed=0)
    assert audit_nonadaptive(_sample_plan_fn, [], epsilon=0.5, seed=0)
    with pytest.raises(ValueError, match="identical vertex counts"):
        audit_nonadaptive(_sample_plan_fn, [gen_path(10), gen_path(11)], epsilon=0.5, seed=0)


def test_plan_equality_is_content_based():
    a = plan_from_blocks(PlanProvenance(5, 0.5, 1), rand_edge_block(3))
    b = _plan([RandEdge()] * 3, n=5, seed=99)
    assert a == b
    assert a != _plan([RandEdge()] * 4, n=5)
