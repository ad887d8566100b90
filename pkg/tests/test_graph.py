import pytest
from hypothesis import given, settings, strategies as st

from currigraph.graph import (
    CyclicGraph, Direction, SameCourse, UnknownCourse, condensed_levels, detect_cycles,
    direct_prerequisites, direct_successors, level_assignment, paths_between,
    topological_order, transitive_closure, transitive_prerequisites, transitive_successors,
)
from currigraph.model import CourseCode, EdgeKind
from tests.oracles import (
    all_simple_paths, code, graph_from_edges, planted_cycles, random_dag, random_digraph,
    reachability_matrix, rng_for, scc_count,
)

A, B, C, D = (code(i) for i in range(4))
CHAIN = graph_from_edges(3, [(0, 1), (1, 2)])
DIAMOND = graph_from_edges(4, [(0, 1), (0, 2), (1, 3), (2, 3)])


def titled(g, title):
    return g.title_index[title.casefold()]


# -- direct queries --------------------------------------------------------

def test_direct_prerequisites_sample(sample):
    assert titled(sample, "Data Abstractions & Structures") in direct_prerequisites(sample, titled(sample, "Algorithms I"))


def test_direct_successors_sample(sample):
    succ = set(direct_successors(sample, titled(sample, "Data Abstractions & Structures")))
    assert {titled(sample, t) for t in ("Algorithms I", "Database Systems", "Comparative Program Languages")} <= succ


def test_direct_queries_edge_cases(sample):
    source = titled(sample, "Fundamentals-Programming & Problem Solving")
    assert direct_prerequisites(sample, source) == ()
    assert direct_successors(sample, titled(sample, "Senior Design Project II")) == ()
    for fn in (direct_prerequisites, direct_successors):
        with pytest.raises(UnknownCourse):
            fn(sample, CourseCode("ZZZ", 999))


def test_duality(sample):
    for u in sample.nodes:
        for v in sample.nodes:
            assert (u in direct_prerequisites(sample, v)) == (v in direct_successors(sample, u))


# -- transitive queries ----------------------------------------------------

def test_transitive_chain():
    assert transitive_prerequisites(CHAIN, C) == (A, B)
    assert transitive_prerequisites(CHAIN, C, 1) == (B,)
    assert transitive_successors(CHAIN, A) == (B, C)
    assert transitive_successors(graph_from_edges(1, []), A) == ()


def test_transitive_terminates_on_cycles():
    g = graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])
    assert transitive_prerequisites(g, A) == (B, C)


def test_transitive_skips_corequisites():
    g = graph_from_edges(3, [(0, 1)], coreqs=[(2, 1), (1, 2)])
    assert transitive_prerequisites(g, B) == (A,)
    assert direct_prerequisites(g, B) == (A, C)


def test_transitive_contains_direct_prerequisites(sample):
    # corequisite edges show up in direct queries but never in transitive ones
    closure = transitive_closure(sample)
    coreq = {(e.source, e.target) for e in sample.edges_of_kind(EdgeKind.COREQUISITE)}
    assert coreq
    for c in sample.nodes:
        direct = {p for p in direct_prerequisites(sample, c) if (p, c) not in coreq}
        assert direct <= set(closure[c])


@pytest.mark.parametrize("seed", range(20))
def test_transitive_matches_matrix_oracle(seed):
    rng = rng_for(seed)
    n = 30
    edges = random_dag(rng, n, 80)
    g = graph_from_edges(n, edges)
    r = reachability_matrix(n, edges)
    for i in range(n):
        assert transitive_successors(g, code(i)) == tuple(code(j) for j in range(n) if r[i][j] and j != i)
        assert transitive_prerequisites(g, code(i)) == tuple(code(j) for j in range(n) if r[j][i] and j != i)


def test_depth_limit_matches_power_oracle():
    rng = rng_for(99)
    n = 20
    edges = random_dag(rng, n, 45)
    g = graph_from_edges(n, edges)
    # reachable within k hops = union of boolean adjacency powers 1..k
    adj = [[(u, v) in set(edges) for v in range(n)] for u in range(n)]
    for k in (1, 2, 3):
        within = [row[:] for row in adj]
        power = [row[:] for row in adj]
        for _ in range(k - 1):
            power = [[any(power[i][m] and adj[m][j] for m in range(n)) for j in range(n)] for i in range(n)]
            within = [[within[i][j] or power[i][j] for j in range(n)] for i in range(n)]
        for i in range(n):
            assert transitive_successors(g, code(i), k) == tuple(code(j) for j in range(n) if within[i][j] and j != i)


# -- paths -----------------------------------------------------------------

def test_paths_chain():
    r = paths_between(CHAIN, A, C)
    assert (r.paths, r.direction, r.truncated) == (((A, B, C),), Direction.FORWARD, False)
    r = paths_between(CHAIN, C, A)
    assert (r.paths, r.direction) == (((A, B, C),), Direction.BACKWARD)


def test_paths_none_and_errors():
    g = graph_from_edges(3, [(0, 1)])
    r = paths_between(g, A, C)
    assert (r.paths, r.direction) == ((), Direction.NONE)
    with pytest.raises(SameCourse):
        paths_between(g, A, A)
    with pytest.raises(UnknownCourse):
        paths_between(g, A, CourseCode("ZZZ", 1))


def test_paths_sample_direct_edge(sample):
    r = paths_between(sample, titled(sample, "Data Abstractions & Structures"), titled(sample, "Database Systems"))
    assert r.direction is Direction.FORWARD
    assert len(r.paths[0]) - 1 == 1


def test_paths_sorted_and_truncated():
    g = DIAMOND
    r = paths_between(g, A, D)
    assert r.paths == ((A, B, D), (A, C, D))
    r = paths_between(g, A, D, max_paths=1)
    assert r.paths == ((A, B, D),) and r.truncated
    r = paths_between(g, A, D, max_len=1)
    assert r.direction is Direction.BACKWARD or r.direction is Direction.NONE


def _oracle_paths(n, edges, a, b, max_len, max_paths):
    found = sorted(all_simple_paths(n, edges, a, b), key=lambda p: (len(p), p))
    found = [p for p in found if len(p) - 1 <= max_len]
    return [tuple(code(i) for i in p) for p in found[:max_paths]], len(found) > max_paths


def check_paths_against_oracle(n, edges, a, b, max_len, max_paths):
    g = graph_from_edges(n, edges)
    got = paths_between(g, code(a), code(b), max_len, max_paths)
    fwd, fwd_trunc = _oracle_paths(n, edges, a, b, max_len, max_paths)
    if fwd:
        expected = (tuple(fwd), Direction.FORWARD, fwd_trunc)
    else:
        back, back_trunc = _oracle_paths(n, edges, b, a, max_len, max_paths)
        expected = (tuple(back), Direction.BACKWARD if back else Direction.NONE, back_trunc)
    return (got.paths, got.direction, got.truncated) == expected


@pytest.mark.parametrize("seed", range(15))
def test_paths_match_exhaustive_enumeration(seed):
    rng = rng_for(1000 + seed)
    n = rng.randint(4, 12)
    edges = random_digraph(rng, n, 0.25) if seed % 2 else random_dag(rng, n, 30)
    a, b = rng.sample(range(n), 2)
    assert check_paths_against_oracle(n, edges, a, b, rng.randint(1, 8), rng.randint(1, 20))


def test_paths_are_verifiable(sample):
    codes = sample.nodes
    for a in codes[::3]:
        for b in codes[1::4]:
            if a == b:
                continue
            r = paths_between(sample, a, b)
            for p in r.paths:
                assert len(set(p)) == len(p)
                assert {p[0], p[-1]} == {a, b}
                for u, v in zip(p, p[1:]):
                    assert v in sample.forward_adjacency[u]


# -- cycles, order, levels -------------------------------------------------

def test_no_cycles_in_tree():
    g = graph_from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
    assert detect_cycles(g).cycles == ()


def test_three_cycle_canonical_rotation():
    g = graph_from_edges(4, [(1, 2), (2, 0), (0, 1), (2, 3)])
    assert detect_cycles(g).cycles == ((A, B, C),)


def test_corequisite_loops_are_not_cycles():
    g = graph_from_edges(2, [], coreqs=[(0, 1), (1, 0)])
    assert not detect_cycles(g)
    assert topological_order(g) == [A, B]


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_planted_cycles_counted(k):
    rng = rng_for(k)
    n = 24
    edges = planted_cycles(rng, n, k)
    assert scc_count(n, edges) == k
    report = detect_cycles(graph_from_edges(n, edges))
    assert len(report) == k
    edge_set = {(code(u), code(v)) for u, v in edges}
    for cyc in report.cycles:
        assert cyc[0] == min(cyc)
        for u, v in zip(cyc, cyc[1:] + cyc[:1]):
            assert (u, v) in edge_set


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 12), st.lists(st.tuples(st.integers(0, 11), st.integers(0, 11)), max_size=40))
def test_cycle_presence_matches_scc_oracle(n, pairs):
    edges = sorted({(u % n, v % n) for u, v in pairs if u % n != v % n})
    report = detect_cycles(graph_from_edges(n, edges))
    assert len(report) == scc_count(n, edges)
    rotations = {tuple(c[i:] + c[:i]) for c in report.cycles for i in range(1, len(c))}
    assert not rotations & set(report.cycles)


def test_topological_order_examples():
    assert topological_order(CHAIN) == [A, B, C]
    g = graph_from_edges(0, [])
    assert topological_order(g) == []
    from currigraph.model import Course, CurriculumGraph
    x, y = CourseCode("CSE", 271), CourseCode("CSE", 174)
    g = CurriculumGraph(courses={x: Course(x, "x"), y: Course(y, "y")}, edges=())
    assert topological_order(g) == [y, x]
    with pytest.raises(CyclicGraph) as info:
        topological_order(graph_from_edges(3, [(0, 1), (1, 2), (2, 0)]))
    assert info.value.report.cycles == ((A, B, C),)


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 25), st.randoms(use_true_random=False))
def test_topological_validity_and_levels(n, rnd):
    edges = random_dag(rnd, n, 60)
    g = graph_from_edges(n, edges)
    order = topological_order(g)
    assert sorted(order) == list(g.nodes)
    pos = {c: i for i, c in enumerate(order)}
    levels = level_assignment(g)
    for u, v in edges:
        assert pos[code(u)] < pos[code(v)]
        assert levels[code(u)] < levels[code(v)]
    assert levels == condensed_levels(g)


def test_levels_examples():
    assert level_assignment(graph_from_edges(1, [])) == {A: 0}
    assert level_assignment(CHAIN) == {A: 0, B: 1, C: 2}
    assert level_assignment(DIAMOND) == {A: 0, B: 1, C: 1, D: 2}
    with pytest.raises(CyclicGraph):
        level_assignment(graph_from_edges(2, [(0, 1), (1, 0)]))


def test_condensed_levels_on_cycle():
    g = graph_from_edges(4, [(0, 1), (1, 2), (2, 1), (2, 3)])
    assert condensed_levels(g) == {A: 0, B: 1, C: 1, D: 2}


def test_queries_do_not_mutate(sample):
    before = sample.structure()
    for c in sample.nodes:
        direct_prerequisites(sample, c)
        transitive_successors(sample, c)
    detect_cycles(sample)
    topological_order(sample)
    level_assignment(sample)
    paths_between(sample, sample.nodes[0], sample.nodes[-1])
    assert sample.structure() == before


def test_sample_is_acyclic(sample):
    n = len(sample.nodes)
    index = {c: i for i, c in enumerate(sample.nodes)}
    edges = [(index[e.source], index[e.target]) for e in sample.edges_of_kind()]
    assert scc_count(n, edges) == 0
    assert not detect_cycles(sample)
