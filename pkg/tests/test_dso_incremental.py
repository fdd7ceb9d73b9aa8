import random

import pytest

from faultpath.dso.incremental import DuplicateEdge, TieDetected, insert_edge
from faultpath.dso.static import IncrementalDso
from faultpath.families import random_connected
from faultpath.graph import perturb_and_verify
from faultpath.pathform import pf_intersects_interval
from faultpath.reference import dist_avoiding, weak_classify


def check_all_queries(g, dso):
    f = dso.forest
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if f.dist(u, v) is None:
                continue
            for eid in f.path_edge_ids(u, v):
                got, _ = dso.query_edge_failure(u, v, eid)
                want = dist_avoiding(g, u, v, [eid])
                assert got == want, (u, v, eid, got, want)


def test_heavy_insert_changes_nothing():
    g = random_connected(12, seed=0)
    dso = IncrementalDso.build(g)
    before = {
        (u, v, eid): dso.query_edge_failure(u, v, eid)[0]
        for u in range(g.n) for v in range(u + 1, g.n)
        if dso.forest.dist(u, v) is not None
        for eid in dso.forest.path_edge_ids(u, v)
    }
    rng = random.Random(3)
    u, v = next((a, b) for a in range(12) for b in range(a + 1, 12)
                if not g.has_endpoints(a, b))
    heavy = 10 * sum(e.w.base for e in g.edges.values())
    insert_edge(dso, u, v, heavy)
    for (a, b, eid), want in before.items():
        got, _ = dso.query_edge_failure(a, b, eid)
        assert got == want
    g2 = dso.graph
    check_all_queries(g2, dso)


def test_zero_base_shortcut_becomes_path():
    g = random_connected(10, seed=2)
    dso = IncrementalDso.build(g)
    u, v = next((a, b) for a in range(10) for b in range(a + 1, 10)
                if not g.has_endpoints(a, b))
    eid = insert_edge(dso, u, v, 0)
    f = dso.forest
    assert f.hops(u, v) == 1
    assert f.path_edge_ids(u, v) == [eid]
    check_all_queries(dso.graph, dso)


def test_twenty_insertions_stay_exact():
    g = random_connected(20, seed=7)
    dso = IncrementalDso.build(g)
    rng = random.Random(77)
    done = 0
    while done < 20:
        u, v = rng.randrange(20), rng.randrange(20)
        if u == v or dso.graph.has_endpoints(u, v):
            continue
        insert_edge(dso, u, v, rng.randint(0, 60))
        done += 1
        check_all_queries(dso.graph, dso)


def test_insertion_weak_intervals_and_monotonicity():
    g = random_connected(14, seed=9)
    dso = IncrementalDso.build(g)
    rng = random.Random(5)
    for step in range(6):
        old_d = {(u, v): dso.forest.dist(u, v)
                 for u in range(14) for v in range(u + 1, 14)}
        while True:
            u, v = rng.randrange(14), rng.randrange(14)
            if u != v and not dso.graph.has_endpoints(u, v):
                break
        insert_edge(dso, u, v, rng.randint(1, 50))
        g2 = dso.graph
        f = dso.forest
        # monotonicity
        for (a, b), before in old_d.items():
            after = f.dist(a, b)
            assert after is not None
            if before is not None:
                assert after <= before
        # weak-interval correctness of the fresh table
        for (a, b), sub in dso.table.items():
            h = f.hops(a, b)
            eids = f.path_edge_ids(a, b)
            for (i, j), pf in sub.items():
                lo, hi = i, h - j
                cls = weak_classify(g2, a, b, eids[lo:hi], lo, hi)
                if cls.is_weak:
                    truth = dist_avoiding(g2, a, b, eids[lo:hi])
                    if truth is None:
                        assert pf is None
                    else:
                        assert pf is not None and pf.length == truth
                elif pf is not None:
                    assert not pf_intersects_interval(pf, f, a, b, lo, hi)


def test_insert_connects_components():
    # two disjoint triangles joined online
    edges = [(0, 1, 3), (1, 2, 4), (0, 2, 5), (3, 4, 3), (4, 5, 4), (3, 5, 5)]
    g = perturb_and_verify(6, edges, seed=1)
    dso = IncrementalDso.build(g)
    assert dso.forest.dist(0, 4) is None
    insert_edge(dso, 2, 3, 7)
    check_all_queries(dso.graph, dso)
    insert_edge(dso, 0, 5, 9)
    check_all_queries(dso.graph, dso)


def test_duplicate_and_selfloop_rejected(g_small):
    dso = IncrementalDso.build(g_small)
    e = next(iter(g_small.edges.values()))
    with pytest.raises(DuplicateEdge):
        insert_edge(dso, e.u, e.v, 5)
    with pytest.raises(DuplicateEdge):
        insert_edge(dso, 3, 3, 5)


def test_tie_detected_on_colliding_weight():
    g = perturb_and_verify(4, [(0, 1, 2), (1, 2, 3), (2, 3, 2)], seed=0)
    dso = IncrementalDso.build(g)
    # mirror the existing 0-1-2 route exactly, tie included
    t01 = next(e.w for e in g.edges.values() if {e.u, e.v} == {0, 1})
    t12 = next(e.w for e in g.edges.values() if {e.u, e.v} == {1, 2})
    with pytest.raises(TieDetected):
        insert_edge(dso, 0, 2, t01.base + t12.base, tie=t01.tie + t12.tie)
