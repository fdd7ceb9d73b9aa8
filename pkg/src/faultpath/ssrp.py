"""Two-failure single-source replacement paths.

Walk the source's shortest path tree, delete each tree edge in turn on an
offline timeline, and at every step answer one more failure for the vertices
in the deleted edge's subtree.  Failure pairs not covered by the stream
resolve to single-failure or unaffected answers; ``resolve`` implements that
bookkeeping for arbitrary pairs.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .dso.offline import CycleTimeline, build_timeline
from .dso.static import IncrementalDso
from .graph import Graph
from .spt import dijkstra


Sink = Callable[[int, int, int, Optional[int]], None]


@dataclass
class SsrpStats:
    timeline_steps: int = 0
    emitted: int = 0
    per_step_queries: list = field(default_factory=list)


def ssrp2(graph: Graph, s: int, sink: Sink, seed: int = 0) -> SsrpStats:
    """Emit (d1, d2, t, distance) for every required triple from source s.

    Required triples have d1 on the tree, t in d1's subtree, and d2 on the
    replacement path pi(G - d1)(s, t); each unordered failure pair is emitted
    once.  Distances are base-channel; None marks disconnection.
    """
    spt = dijkstra(graph, s, with_lca=True)
    tree_edges = sorted(
        spt.parent_edge[v] for v in range(graph.n)
        if v != s and spt.dist[v] is not None
    )
    # Euler-interval subtree membership: vertex v sits under tree edge e
    # exactly when e's lower endpoint is an ancestor of v
    lower_of = {}
    for eid in tree_edges:
        e = graph.edges[eid]
        lower_of[eid] = e.v if spt.parent[e.v] == e.u else e.u

    stats = SsrpStats()
    cyc = CycleTimeline(graph, tree_edges)
    stats.timeline_steps = len(cyc.timeline.updates)
    seen: set[tuple[int, int, int]] = set()

    def on_leaf(step: int, dso: IncrementalDso) -> None:
        d1 = cyc.deleted_at(step)
        if d1 is None:
            return
        k = cyc.index[d1]
        root = lower_of[d1]
        queries = 0
        f = dso.forest
        for t in range(graph.n):
            if t != s and spt.dist[t] is not None and spt.on_root_path(t, root):
                if f.dist(s, t) is None:
                    continue
                for d2_cur in f.path_edge_ids(s, t):
                    # report under original ids; restored copies map back
                    d2 = cyc.eids[d2_cur - cyc.base_next] \
                        if d2_cur >= cyc.base_next else d2_cur
                    key = (min(d1, d2), max(d1, d2), t)
                    if key in seen:
                        continue
                    seen.add(key)
                    ln, _ = dso.query_edge_failure(s, t, d2_cur)
                    sink(d1, d2, t, None if ln is None else ln.base)
                    stats.emitted += 1
                    queries += 1
        stats.per_step_queries.append(queries)

    build_timeline(cyc.timeline, seed=seed, on_leaf=on_leaf, keep_leaves=False)
    return stats


class SsrpResolver:
    """Answer any (d1, d2, t) from the streamed triples plus 1-fault data."""

    def __init__(self, graph: Graph, s: int, seed: int = 0):
        self.graph = graph
        self.s = s
        self.spt = dijkstra(graph, s, with_lca=True)
        self.table: dict[tuple[int, int, int], Optional[int]] = {}
        self.stats = ssrp2(graph, s, self._store, seed=seed)
        self._one_fault: dict[int, list] = {}

    def _store(self, d1: int, d2: int, t: int, length: Optional[int]) -> None:
        self.table[(min(d1, d2), max(d1, d2), t)] = length

    def _affects(self, eid: int, t: int) -> bool:
        """Does removing ``eid`` change pi(s, t)?  True iff it is the tree
        edge above some ancestor of t."""
        e = self.graph.edges[eid]
        spt = self.spt
        for lower in (e.u, e.v):
            if (lower != self.s and spt.dist[lower] is not None
                    and spt.parent_edge[lower] == eid
                    and spt.on_root_path(t, lower)):
                return True
        return False

    def one_fault(self, eid: int, t: int) -> Optional[int]:
        row = self._one_fault.get(eid)
        if row is None:
            row = dijkstra(self.graph, self.s, blocked=1 << eid).dist
            self._one_fault[eid] = row
        d = row[t]
        return None if d is None else d.base

    def answer(self, d1: int, d2: int, t: int) -> Optional[int]:
        if t == self.s:
            return 0
        if self.spt.dist[t] is None:
            return None
        a1 = self._affects(d1, t)
        a2 = self._affects(d2, t)
        if not a1 and not a2:
            return self.spt.dist[t].base
        key = (min(d1, d2), max(d1, d2), t)
        if key in self.table:
            return self.table[key]
        # the streamed table misses the pair only when the second failure
        # also misses the first's replacement path
        if a1:
            return self.one_fault(d1, t)
        return self.one_fault(d2, t)