import itertools
import random

from faultpath.families import random_connected
from faultpath.reference import all_dists_avoiding
from faultpath.spt import dijkstra
from faultpath.ssrp import SsrpResolver, ssrp2


def test_ssrp_exhaustive_n14():
    g = random_connected(14, seed=5)
    s = 0
    res = SsrpResolver(g, s)
    eids = sorted(g.edges)
    for d1, d2 in itertools.combinations(eids, 2):
        oracle = all_dists_avoiding(g, s, [d1, d2])
        for t in range(g.n):
            got = res.answer(d1, d2, t)
            want = None if oracle[t] is None else oracle[t].base
            assert got == want, (d1, d2, t, got, want)


def test_ssrp_sampled_n25():
    g = random_connected(25, seed=9)
    s = 3
    res = SsrpResolver(g, s)
    rng = random.Random(2)
    eids = sorted(g.edges)
    for _ in range(120):
        d1, d2 = rng.sample(eids, 2)
        oracle = all_dists_avoiding(g, s, [d1, d2])
        for t in rng.sample(range(g.n), 6):
            got = res.answer(d1, d2, t)
            want = None if oracle[t] is None else oracle[t].base
            assert got == want, (d1, d2, t, got, want)


def test_stream_shape_and_dedup():
    g = random_connected(12, seed=3)
    s = 0
    emitted = []
    stats = ssrp2(g, s, lambda *a: emitted.append(a))
    spt = dijkstra(g, s)
    n_tree = sum(1 for v in range(g.n) if v != s and spt.dist[v] is not None)
    assert stats.timeline_steps == 2 * n_tree
    keys = [(min(d1, d2), max(d1, d2), t) for d1, d2, t, _ in emitted]
    assert len(keys) == len(set(keys))
    assert stats.emitted == len(emitted)


def test_off_tree_failure_is_one_fault_value():
    g = random_connected(15, seed=7)
    s = 0
    res = SsrpResolver(g, s)
    spt = dijkstra(g, s)
    tree = {spt.parent_edge[v] for v in range(g.n) if v != s and spt.dist[v] is not None}
    off = [e for e in sorted(g.edges) if e not in tree]
    assert off, "family should have non-tree edges"
    d2 = off[0]
    for d1 in sorted(tree):
        for t in range(1, g.n):
            got = res.answer(d1, d2, t)
            oracle = all_dists_avoiding(g, s, [d1, d2])[t]
            assert got == (None if oracle is None else oracle.base)