import pytest

from faultpath.dso.static import IncrementalDso, IntervalNotOnPath, anchors
from faultpath.families import cycle, path, random_connected
from faultpath.pathform import pf_intersects_interval
from faultpath.reference import dist_avoiding, weak_classify


def test_anchor_domain_matches_rule():
    for h in (1, 2, 3, 5, 8, 13):
        got = set(anchors(h))
        vals = {0, 1, 2, 4, 8, 16}
        expect = {(i, j) for i in vals for j in vals if i + j < h}
        assert got == expect


def test_path_graph_bridge_interval_is_null():
    g = path(4, weights=[3, 5, 2])
    dso = IncrementalDso.build(g)
    mid = g.n // 2
    # pair (0, 3), interval = the middle edge: removing it disconnects
    a, b = 1, 2
    assert dso.query_interval(0, 3, a, b) is None


def test_cycle_complement_arc():
    g = cycle(5, w=4)
    dso = IncrementalDso.build(g)
    # pair at hop distance 2; drop one on-path edge; expect the 3-edge arc
    pf = dso.query_interval(0, 2, 0, 1)
    assert pf is not None
    assert pf.length.base == 12
    # the whole-path interval has the same only candidate
    whole = dso.query_interval(0, 2, 0, 2)
    assert whole is not None and whole.length.base == 12


def test_weak_intervals_exact_n25():
    g = random_connected(25, seed=1)
    dso = IncrementalDso.build(g)
    f = dso.forest
    for (u, v), sub in dso.table.items():
        h = f.hops(u, v)
        eids = f.path_edge_ids(u, v)
        for (i, j), pf in sub.items():
            lo, hi = i, h - j
            cls = weak_classify(g, u, v, eids[lo:hi], lo, hi)
            truth = dist_avoiding(g, u, v, eids[lo:hi])
            if cls.is_weak:
                if truth is None:
                    assert pf is None
                else:
                    assert pf is not None and pf.length == truth
            elif pf is not None:
                # non-weak intervals may store any avoiding proper form
                assert not pf_intersects_interval(pf, f, u, v, lo, hi)


def test_query_interval_equals_removal_on_weak(g_mid):
    g = g_mid
    dso = IncrementalDso.build(g)
    f = dso.forest
    for u in range(0, g.n, 4):
        for v in range(g.n):
            if u == v or f.dist(u, v) is None:
                continue
            h = f.hops(u, v)
            eids = f.path_edge_ids(u, v)
            verts = f.path_vertices(u, v)
            for lo in range(h):
                for hi in range(lo + 1, h + 1):
                    cls = weak_classify(g, u, v, eids[lo:hi], lo, hi)
                    pf = dso.query_interval(u, v, verts[lo], verts[hi])
                    if cls.is_weak:
                        truth = dist_avoiding(g, u, v, eids[lo:hi])
                        if truth is None:
                            assert pf is None
                        else:
                            assert pf is not None and pf.length == truth
                    elif pf is not None:
                        assert not pf_intersects_interval(pf, f, u, v, lo, hi)


def test_query_edge_failure_all_triples_n25():
    g = random_connected(25, seed=2)
    dso = IncrementalDso.build(g)
    f = dso.forest
    for u in range(g.n):
        for v in range(u + 1, g.n):
            if f.dist(u, v) is None:
                continue
            for eid in f.path_edge_ids(u, v):
                got, _ = dso.query_edge_failure(u, v, eid)
                want = dist_avoiding(g, u, v, [eid])
                assert got == want


def test_query_edge_failure_off_path_and_paths(g_small):
    g = g_small
    dso = IncrementalDso.build(g)
    f = dso.forest
    u, v = 0, g.n - 1
    on_path = set(f.path_edge_ids(u, v))
    for eid in g.edges:
        if eid in on_path:
            continue
        got, p = dso.query_edge_failure(u, v, eid, want_path=True)
        assert got == f.dist(u, v)
        assert p == f.path_edge_ids(u, v)
    for eid in on_path:
        got, p = dso.query_edge_failure(u, v, eid, want_path=True)
        want = dist_avoiding(g, u, v, [eid])
        assert got == want
        if got is not None:
            # replay the returned path: connected, avoids eid, right length
            assert eid not in p
            total = f.dist(u, u)
            x = u
            for e in p:
                total = total + g.edges[e].w
                x = g.edges[e].other(x)
            assert x == v and total == got


def test_symmetry_and_determinism():
    g = random_connected(15, seed=4)
    d1 = IncrementalDso.build(g)
    d2 = IncrementalDso.build(g)
    assert d1.table == d2.table
    f = d1.forest
    for u in range(0, 15, 2):
        for v in range(15):
            if u == v or f.dist(u, v) is None:
                continue
            for eid in f.path_edge_ids(u, v):
                a, _ = d1.query_edge_failure(u, v, eid)
                b, _ = d1.query_edge_failure(v, u, eid)
                assert a == b


def test_interval_errors(g_small):
    dso = IncrementalDso.build(g_small)
    f = dso.forest
    u, v = 0, g_small.n - 1
    with pytest.raises(IntervalNotOnPath):
        dso.query_interval(u, u, u, u)
    verts = f.path_vertices(u, v)
    with pytest.raises(IntervalNotOnPath):
        dso.query_interval(u, v, verts[1], verts[1])
    off = next(z for z in range(g_small.n) if z not in verts)
    with pytest.raises(IntervalNotOnPath):
        dso.query_interval(u, v, verts[0], off)


def test_stored_entry_hygiene(g_mid):
    dso = IncrementalDso.build(g_mid)
    f = dso.forest
    for (u, v), sub in dso.table.items():
        h = f.hops(u, v)
        for (i, j), pf in sub.items():
            if pf is None:
                continue
            assert not pf_intersects_interval(pf, f, u, v, i, h - j)
            w = f.dist(u, pf.x)
            if pf.bridge is not None:
                w = w + dso.graph.edges[pf.bridge].w
            w = w + f.dist(pf.y, v)
            assert w == pf.length
