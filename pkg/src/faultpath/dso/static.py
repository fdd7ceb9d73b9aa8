"""Single-failure distance sensitivity oracle with interval queries.

The structure keeps, for every vertex pair, shortest detours around the
power-of-two anchored intervals of their shortest path.  A stored entry is
the exact detour whenever some single failure inside the interval forces the
whole interval to be avoided (the interval is then "weak"); otherwise it is
any proper-form detour that clears the interval, or null.  Arbitrary
intervals are answered by combining four anchored lookups; single edges are
always weak, which yields the classic edge-failure query.
"""
from __future__ import annotations

from functools import lru_cache
from heapq import heappop, heappush
from typing import Optional

from ..graph import Graph, TieSource
from ..pathform import (
    ProperForm, explicit_path, pf_intersects_interval, pf_path, pf_segments,
    seg_down, seg_up, to_proper_form, transform_avoiding,
)
from ..spt import SptForest
from ..weights import CompositeWeight as W


class IntervalNotOnPath(ValueError):
    """Query interval endpoints do not lie on the pair's shortest path."""


@lru_cache(maxsize=4096)
def anchors(h: int) -> tuple[tuple[int, int], ...]:
    """Anchored (i, j) offsets: zero or powers of two with i + j < h."""
    vals = [0]
    p = 1
    while p < h:
        vals.append(p)
        p <<= 1
    out = []
    for i in vals:
        for j in vals:
            if i + j < h:
                out.append((i, j))
    return tuple(out)


def _anchored(x: int) -> bool:
    return x == 0 or (x & (x - 1)) == 0


def _floor_pow2(x: int) -> int:
    return 1 << (x.bit_length() - 1)


def _sssp_path(graph: Graph, s: int, t: int, blocked: int):
    """Targeted Dijkstra: (length, edge ids) of pi(s, t) in G - blocked."""
    n = graph.n
    parent = [-1] * n
    parent_edge = [0] * n
    done = [False] * n
    best: list[Optional[tuple[int, int]]] = [None] * n
    best[s] = (0, 0)
    heap = [(0, 0, s)]
    adj = graph.adj
    while heap:
        db, dt, u = heappop(heap)
        if done[u]:
            continue
        done[u] = True
        if u == t:
            eids = []
            while u != s:
                eids.append(parent_edge[u])
                u = parent[u]
            eids.reverse()
            return W(db, dt), eids
        for v, eid, wb, wt in adj[u]:
            if done[v] or (blocked >> eid) & 1:
                continue
            cand = (db + wb, dt + wt)
            if best[v] is None or cand < best[v]:
                best[v] = cand
                parent[v] = u
                parent_edge[v] = eid
                heappush(heap, (cand[0], cand[1], v))
    return None, None


def replacement_paths_for_pair(graph: Graph, forest: SptForest, u: int, v: int):
    """Exact detour length and path for each single edge of pi(u, v)."""
    h = forest.hops(u, v)
    eids = forest.path_edge_ids(u, v)
    return [_sssp_path(graph, u, v, 1 << eids[k]) for k in range(h)]


class IncrementalDso:
    """All-pairs interval-avoidance table plus per-source trees.

    ``table[(u, v)][(i, j)]`` (u < v) holds the entry for the interval
    [u + i, v - j] of pi(u, v), as a ProperForm or None.  ``version`` tags the
    graph the proper forms refer to; insertions bump it.
    """

    __slots__ = ("graph", "forest", "table", "version", "ties", "_forests")

    def __init__(self, graph: Graph, forest: SptForest, table, version: int,
                 ties: TieSource):
        self.graph = graph
        self.forest = forest
        self.table = table
        self.version = version
        self.ties = ties
        self._forests = {version: forest}

    # -- construction ----------------------------------------------------

    @classmethod
    def build(cls, graph: Graph, seed: int = 0) -> "IncrementalDso":
        forest = SptForest.build(graph, version=0)
        table: dict = {}
        n = graph.n
        for u in range(n):
            spt_u = forest.spts[u]
            for v in range(u + 1, n):
                if spt_u.dist[v] is None:
                    continue
                table[(u, v)] = _build_pair(graph, forest, u, v)
        return cls(graph, forest, table, 0, TieSource(seed + 7919))

    # -- helpers ----------------------------------------------------------

    def forest_of_version(self, version: int) -> SptForest:
        return self._forests[version]

    def entry(self, u: int, v: int, i: int, j: int) -> Optional[ProperForm]:
        """Stored anchored entry, (i, j) measured from the (u, v) orientation."""
        if u < v:
            return self.table[(u, v)].get((i, j))
        return self.table[(v, u)].get((j, i))

    def pf_to_path(self, pf: ProperForm, start: Optional[int] = None):
        return pf_path(pf, self._forests.__getitem__, start)

    # -- queries ----------------------------------------------------------

    def query_interval(self, u: int, v: int, a: int, b: int) -> Optional[ProperForm]:
        """Interval-avoidance entry for the subpath a..b of pi(u, v).

        Exact when the interval is weak; otherwise a verified avoiding proper
        form or None.
        """
        f = self.forest
        if u == v or f.dist(u, v) is None:
            raise IntervalNotOnPath(f"no path between {u} and {v}")
        if not (f.on_path(u, v, a) and f.on_path(u, v, b)):
            raise IntervalNotOnPath(f"({a}, {b}) not on pi({u}, {v})")
        pa = f.path_pos(u, v, a)
        pb = f.path_pos(u, v, b)
        if u > v:
            u, v = v, u
            pa, pb = f.hops(u, v) - pa, f.hops(u, v) - pb
        if pa > pb:
            pa, pb = pb, pa
        if pa == pb:
            raise IntervalNotOnPath("interval holds no edge")
        return self._query_pos(u, v, pa, pb)

    def _query_pos(self, u: int, v: int, pa: int, pb: int) -> Optional[ProperForm]:
        """Core interval query; u < v, positions measured from u, pa <= pb."""
        f = self.forest
        h = f.hops(u, v)
        if pa == pb:
            # empty interval: nothing to avoid
            return ProperForm(u, v, None, v, v, f.dist(u, v), self.version)
        jr = h - pb
        if _anchored(pa) and _anchored(jr):
            return self.table[(u, v)].get((pa, jr))

        i = 0 if pa == 0 else _floor_pow2(pa)
        j = 0 if jr == 0 else _floor_pow2(jr)
        spt_u, spt_v = f.spts[u], f.spts[v]
        a2 = spt_u.ancestor_at_depth(v, pa - i)
        b2 = spt_u.ancestor_at_depth(v, pb + j)

        fov = self._forests.__getitem__
        best: Optional[ProperForm] = None

        # inner detour between the pulled-back anchors, stitched to the pair
        e1 = self.entry(a2, b2, i, j)
        if e1 is not None:
            segs = []
            if a2 != u:
                segs.append(seg_down(spt_u, u, a2))
            segs.extend(pf_segments(e1, fov, a2))
            if b2 != v:
                segs.append(seg_up(spt_v, b2, v))
            best = _pf_min(best, transform_avoiding(segs, f, u, v, pa, pb))

        # the pair's own wider anchored interval: already avoids [pa, pb]
        e2 = self.table[(u, v)].get((i, j))
        best = _pf_min(best, e2)

        # prefix walk plus suffix-anchored detour of (a2, v)
        e3 = self.entry(a2, v, i, j)
        if e3 is not None:
            segs = []
            if a2 != u:
                segs.append(seg_down(spt_u, u, a2))
            segs.extend(pf_segments(e3, fov, a2))
            best = _pf_min(best, transform_avoiding(segs, f, u, v, pa, pb))

        # prefix-anchored detour of (u, b2) plus suffix walk
        e4 = self.entry(u, b2, i, j)
        if e4 is not None:
            segs = list(pf_segments(e4, fov, u))
            if b2 != v:
                segs.append(seg_up(spt_v, b2, v))
            best = _pf_min(best, transform_avoiding(segs, f, u, v, pa, pb))

        return best

    def edge_on_pair_path(self, u: int, v: int, eid: int) -> Optional[int]:
        """Position of edge ``eid`` on pi(u, v), or None if off the path."""
        f = self.forest
        e = self.graph.edges[eid]
        if not (f.on_path(u, v, e.u) and f.on_path(u, v, e.v)):
            return None
        p1 = f.path_pos(u, v, e.u)
        p2 = f.path_pos(u, v, e.v)
        lo, hi = (p1, p2) if p1 < p2 else (p2, p1)
        if hi - lo != 1 or f.edge_at(u, v, lo) != eid:
            return None
        return lo

    def query_edge_failure(self, u: int, v: int, eid: int, want_path: bool = False):
        """Distance (and optionally path) from u to v avoiding one edge.

        Returns ``(length, path_edge_ids)``; length None means unreachable.
        """
        f = self.forest
        if f.dist(u, v) is None:
            return None, None
        pos = self.edge_on_pair_path(u, v, eid)
        if pos is None:
            return f.dist(u, v), (f.path_edge_ids(u, v) if want_path else None)
        swap = u > v
        if swap:
            u, v = v, u
            pos = f.hops(u, v) - pos - 1
        pf = self._query_pos(u, v, pos, pos + 1)
        if pf is None:
            return None, None
        if not want_path:
            return pf.length, None
        path = self.pf_to_path(pf, v if swap else u)
        return pf.length, path.edge_ids()


def build_dso(graph: Graph, seed: int = 0) -> IncrementalDso:
    return IncrementalDso.build(graph, seed)


def _pf_min(a: Optional[ProperForm], b: Optional[ProperForm]) -> Optional[ProperForm]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.length <= b.length else b


def _build_pair(graph: Graph, forest: SptForest, u: int, v: int) -> dict:
    h = forest.hops(u, v)
    path_eids = forest.path_edge_ids(u, v)
    rp = replacement_paths_for_pair(graph, forest, u, v)
    sub: dict[tuple[int, int], Optional[ProperForm]] = {}
    for (i, j) in anchors(h):
        sub[(i, j)] = _static_entry(graph, forest, u, v, path_eids, rp, i, h - j)
    return sub


def _static_entry(graph: Graph, forest: SptForest, u: int, v: int,
                  path_eids: list[int], rp, lo: int, hi: int) -> Optional[ProperForm]:
    """Entry for interval positions [lo, hi]: longest single-failure detour
    inside the interval, kept only if it clears the whole interval."""
    best_len: Optional[W] = None
    best_k = -1
    for k in range(lo, hi):
        length, _ = rp[k]
        if length is None:
            # no detour for this failure: nothing can avoid the interval
            return None
        if best_len is None or length > best_len:
            best_len = length
            best_k = k
        elif length == best_len:
            # equal composite lengths must be the same path (verified ties)
            assert rp[k][1] == rp[best_k][1]
    eids = rp[best_k][1]
    interval = set(path_eids[lo:hi])
    if interval.intersection(eids):
        return None
    verts = [u]
    for eid in eids:
        verts.append(graph.edges[eid].other(verts[-1]))
    pf = to_proper_form(explicit_path(graph, verts, eids), forest)
    assert pf is not None, "single-failure detours are always proper"
    assert pf.length == best_len
    assert not pf_intersects_interval(pf, forest, u, v, lo, hi)
    return pf
