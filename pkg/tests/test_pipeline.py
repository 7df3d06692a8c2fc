
import pytest
from hypothesis import given
from hypothesis import strategies as st

from shortcut_forge import (
    DiGraph,
    NotADag,
    ParameterError,
    PromiseViolated,
    SolveParams,
    approx_shortcut,
    approx_shortcut_dag,
    approx_tc_spanner,
    gen_path,
    gen_planted_cycles,
    gen_random_dag,
    scc_condense,
    shortcut_from_tcspanner,
    transitive_reduction,
    verify_shortcut,
    verify_tc_spanner,
)
from shortcut_forge.errors import BadBudget
from shortcut_forge.params import theorem_cap
from shortcut_forge.pipeline import balanced_beta

from conftest import dags, digraphs, nx_diameter


def test_already_short_path_is_empty():
    g = gen_path(10)
    f = approx_shortcut_dag(g, SolveParams(10, 9, 1))
    assert len(f) == 0 and f.info["regime"] == "trivial"


def test_path32_within_cap():
    g = gen_path(32)
    f = approx_shortcut_dag(g, SolveParams(32, 4, 2))
    assert verify_shortcut(g, f, 8).valid
    assert nx_diameter(g, f.edges) <= 8
    assert len(f) <= theorem_cap(32, 32, 4, 2)


def test_parameter_errors():
    with pytest.raises(ParameterError):
        approx_shortcut_dag(gen_path(10), SolveParams(9, 2, 1))
    with pytest.raises(ParameterError):
        SolveParams(10, 0, 1)
    with pytest.raises(NotADag):
        approx_shortcut_dag(DiGraph(3, [(0, 1), (1, 0)]), SolveParams(3, 1, 1))


def test_beta_formula():
    assert balanced_beta(100, 100, 2, 1) == pytest.approx(5.0)
    f = approx_shortcut_dag(gen_random_dag(100, 0.04, 3), SolveParams(100, 2, 1))
    assert f.info["beta"] == pytest.approx(5.0)


@given(dags(min_n=2, max_n=14), st.integers(1, 4), st.sampled_from([1, 2, 3, 4]), st.integers(0, 3))
def test_dag_solver_always_valid(g, d, alpha_d, seed):
    f = approx_shortcut_dag(g, SolveParams(g.n, d, alpha_d, seed))
    assert verify_shortcut(g, f, alpha_d * d).valid


def test_strongly_connected_gets_stars_only():
    g = DiGraph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    f = approx_shortcut(g, SolveParams(5, 1, 1))
    assert all(0 in e for e in f.edges)
    assert verify_shortcut(g, f, 2).valid


def test_dag_input_matches_dag_solver():
    g = gen_random_dag(30, 0.1, 2)
    p = SolveParams(30, 2, 1, 4)
    assert approx_shortcut(g, p).edges == approx_shortcut_dag(g, p).edges


def test_two_cycles_bridged():
    g = DiGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)])
    f = approx_shortcut(g, SolveParams(6, 1, 1))
    assert verify_shortcut(g, f, 3).valid


@given(digraphs(min_n=2, max_n=12), st.integers(1, 3), st.integers(1, 2))
def test_general_solver_valid_and_small_overhead(g, d, alpha_d):
    p = SolveParams(g.n, d, alpha_d)
    f = approx_shortcut(g, p)
    assert verify_shortcut(g, f, 3 * alpha_d * d).valid
    inner = approx_shortcut_dag(scc_condense(g).dag, p)
    assert len(f) - len(inner) <= 2 * g.n


def test_spanner_examples():
    g = gen_path(6)
    h = approx_tc_spanner(g, SolveParams(6, 5, 1))
    assert h.edges == set(transitive_reduction(g).edges)
    g = gen_path(9)
    h = approx_tc_spanner(g, SolveParams(9, 2, 1))
    assert set(g.edges) <= h.edges
    assert verify_tc_spanner(g, h.edges, 2).valid


def test_spanner_promise_violation():
    g = DiGraph(6, [(0, 3), (0, 4), (0, 5), (1, 3), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
    with pytest.raises(PromiseViolated):
        approx_tc_spanner(g, SolveParams(6, 2, 1))


@given(digraphs(min_n=1, max_n=10), st.integers(1, 3))
def test_spanner_preserves_closure(g, d):
    red_size = transitive_reduction(scc_condense(g).dag).m
    s = max(g.n, red_size)
    h = approx_tc_spanner(g, SolveParams(s, d, 1))
    assert DiGraph(g.n, h.edges).reach == g.reach
    bound = d if g.is_dag else 3 * d
    assert verify_tc_spanner(g, h.edges, bound).valid


def test_shortcut_via_spanner():
    g = gen_path(8)
    f = shortcut_from_tcspanner(g, SolveParams(g.m, 2, 1))
    assert verify_shortcut(g, f, 2).valid
    g = gen_path(5)
    assert len(shortcut_from_tcspanner(g, SolveParams(g.m, 4, 1))) == 0
    with pytest.raises(BadBudget):
        shortcut_from_tcspanner(gen_random_dag(10, 0.5, 1), SolveParams(10, 2, 1))


def test_cyclic_fixture_runs():
    g = gen_planted_cycles(40, 0.08, 4, 4, 9)
    f = approx_shortcut(g, SolveParams(40, 2, 2, 1))
    assert verify_shortcut(g, f, 12).valid
    assert f.info["star"] <= 2 * g.n
