import random

from faultpath.families import random_connected
from faultpath.spt import SptForest, dijkstra


def brute_lca(tree, a, b):
    pa = set(tree.path_vertices(a))
    for z in reversed(tree.path_vertices(b)):
        if z in pa:
            return z
    raise AssertionError


def test_spt_consistency(g_mid):
    t = dijkstra(g_mid, 0)
    for v in range(g_mid.n):
        if v == 0 or t.dist[v] is None:
            continue
        e = g_mid.edges[t.parent_edge[v]]
        assert t.dist[v] == t.dist[t.parent[v]] + e.w
        assert t.depth[v] == t.depth[t.parent[v]] + 1


def test_lca_and_level_ancestor_match_brute_force():
    rng = random.Random(5)
    for seed in range(4):
        g = random_connected(18, seed=seed)
        t = dijkstra(g, 0, with_lca=True)
        for _ in range(200):
            a, b = rng.randrange(18), rng.randrange(18)
            assert t.lca(a, b) == brute_lca(t, a, b)
        for v in range(18):
            pv = t.path_vertices(v)
            for d in range(len(pv)):
                assert t.ancestor_at_depth(v, d) == pv[d]


def test_on_root_path_and_share_edge():
    g = random_connected(15, seed=9)
    t = dijkstra(g, 0, with_lca=True)
    for v in range(15):
        pv = t.path_vertices(v)
        on = set(pv)
        for z in range(15):
            assert t.on_root_path(v, z) == (z in on)
        # segment sharing against explicit edge sets
        for i in range(len(pv)):
            for j in range(i, len(pv)):
                seg = set(t.path_edges(pv[j])[i:j])
                for w in range(15):
                    expl = bool(seg.intersection(t.path_edges(w)))
                    assert t.root_paths_share_edge(w, pv[i], pv[j]) == expl


def test_forest_path_positions(g_mid):
    f = SptForest.build(g_mid)
    for u in range(0, g_mid.n, 3):
        for v in range(g_mid.n):
            if u == v or f.dist(u, v) is None:
                continue
            pv = f.path_vertices(u, v)
            assert f.hops(u, v) == len(pv) - 1
            for pos, z in enumerate(pv):
                assert f.on_path(u, v, z)
                assert f.path_pos(u, v, z) == pos
                assert f.vertex_at(u, v, pos) == z
            for z in range(g_mid.n):
                if z not in pv:
                    assert not f.on_path(u, v, z)
            eids = f.path_edge_ids(u, v)
            for pos, eid in enumerate(eids):
                assert f.edge_at(u, v, pos) == eid
