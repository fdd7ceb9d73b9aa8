"""Dijkstra, shortest path trees, and constant-time LCA machinery.

Every tree is rooted at its Dijkstra source and covers exactly the reachable
component.  LCA uses an Euler tour plus sparse table (O(1) query); level
ancestors use binary lifting (O(log n) query).  Both are optional because
plain distance runs do not need them.
"""
from __future__ import annotations

from heapq import heappop, heappush
from typing import Optional

from .graph import Graph
from .weights import CompositeWeight as W


class ShortestPathTree:
    """Single-source tree under the composite order.

    ``dist[v] is None`` marks unreachable vertices.  ``parent_edge[v]`` is the
    id of the tree edge into ``v``; ``depth[v]`` counts tree hops from the
    source.
    """

    __slots__ = (
        "source", "dist", "parent", "parent_edge", "depth",
        "_euler", "_first", "_edepth", "_sparse", "_log", "_lift",
    )

    def __init__(self, source: int, dist, parent, parent_edge, depth):
        self.source = source
        self.dist: list[Optional[W]] = dist
        self.parent: list[int] = parent
        self.parent_edge: list[Optional[int]] = parent_edge
        self.depth: list[int] = depth
        self._euler = None
        self._first = None
        self._edepth = None
        self._sparse = None
        self._log = None
        self._lift = None

    # -- structure -----------------------------------------------------

    def reachable(self, v: int) -> bool:
        return self.dist[v] is not None

    def path_vertices(self, v: int) -> list[int]:
        """Vertices of the tree path source -> v."""
        out = [v]
        while v != self.source:
            v = self.parent[v]
            out.append(v)
        out.reverse()
        return out

    def path_edges(self, v: int) -> list[int]:
        """Edge ids of the tree path source -> v, in path order."""
        out = []
        while v != self.source:
            out.append(self.parent_edge[v])
            v = self.parent[v]
        out.reverse()
        return out

    # -- LCA / level ancestor -------------------------------------------

    def build_lca(self) -> None:
        if self._euler is not None:
            return
        n = len(self.dist)
        children: list[list[int]] = [[] for _ in range(n)]
        order = sorted(
            (v for v in range(n) if self.dist[v] is not None),
            key=lambda v: self.depth[v],
        )
        for v in order:
            if v != self.source:
                children[self.parent[v]].append(v)

        euler: list[int] = []
        edepth: list[int] = []
        first = [-1] * n
        # iterative DFS keeping the Euler tour
        stack: list[tuple[int, int]] = [(self.source, 0)]
        while stack:
            v, ci = stack.pop()
            if ci == 0:
                first[v] = len(euler)
            euler.append(v)
            edepth.append(self.depth[v])
            if ci < len(children[v]):
                stack.append((v, ci + 1))
                stack.append((children[v][ci], 0))

        m = len(euler)
        log = [0] * (m + 1)
        for i in range(2, m + 1):
            log[i] = log[i >> 1] + 1
        sparse = [list(range(m))]
        k = 1
        while (1 << k) <= m:
            prev = sparse[k - 1]
            half = 1 << (k - 1)
            row = [0] * (m - (1 << k) + 1)
            for i in range(len(row)):
                a, b = prev[i], prev[i + half]
                row[i] = a if edepth[a] <= edepth[b] else b
            sparse.append(row)
            k += 1

        self._euler, self._first, self._edepth = euler, first, edepth
        self._sparse, self._log = sparse, log

        # binary lifting for level ancestors; roots lift to themselves
        maxk = max(1, max((self.depth[v] for v in order), default=0).bit_length())
        base = [self.parent[v] if self.parent[v] >= 0 else v for v in range(n)]
        lift = [base]
        for k in range(1, maxk):
            prev = lift[k - 1]
            lift.append([prev[prev[v]] for v in range(n)])
        self._lift = lift

    def lca(self, a: int, b: int) -> int:
        l, r = self._first[a], self._first[b]
        if l > r:
            l, r = r, l
        k = self._log[r - l + 1]
        x = self._sparse[k][l]
        y = self._sparse[k][r - (1 << k) + 1]
        return self._euler[x] if self._edepth[x] <= self._edepth[y] else self._euler[y]

    def ancestor_at_depth(self, v: int, d: int) -> int:
        """Ancestor of v whose depth is d (d <= depth[v])."""
        steps = self.depth[v] - d
        k = 0
        while steps:
            if steps & 1:
                v = self._lift[k][v]
            steps >>= 1
            k += 1
        return v

    def on_root_path(self, v: int, z: int) -> bool:
        """True if z lies on the tree path source -> v."""
        return self.depth[z] <= self.depth[v] and self.ancestor_at_depth(v, self.depth[z]) == z

    def root_paths_share_edge(self, a: int, c_near: int, c_far: int) -> bool:
        """Edge intersection of root->a with the segment [c_near, c_far].

        ``c_near`` must be an ancestor of ``c_far``.  The segment's edges are
        shared with root->a exactly when their deepest common vertex lies
        strictly below ``c_near``.
        """
        g = self.lca(a, c_far)
        return self.depth[g] > self.depth[c_near]


def dijkstra(graph: Graph, source: int, blocked: int = 0, with_lca: bool = False) -> ShortestPathTree:
    """Exact single-source run; ``blocked`` is a bitmask of removed edge ids."""
    n = graph.n
    dist: list[Optional[W]] = [None] * n
    parent = [-1] * n
    parent_edge: list[Optional[int]] = [None] * n
    depth = [0] * n
    adj = graph.adj
    heap: list[tuple[int, int, int]] = [(0, 0, source)]
    seen = [False] * n
    best: list[Optional[tuple[int, int]]] = [None] * n
    best[source] = (0, 0)
    while heap:
        db, dt, u = heappop(heap)
        if seen[u]:
            continue
        seen[u] = True
        dist[u] = W(db, dt)
        for v, eid, wb, wt in adj[u]:
            if seen[v] or (blocked >> eid) & 1:
                continue
            nb = db + wb
            nt = dt + wt
            cur = best[v]
            if cur is None or (nb, nt) < cur:
                best[v] = (nb, nt)
                parent[v] = u
                parent_edge[v] = eid
                depth[v] = depth[u] + 1
                heappush(heap, (nb, nt, v))
    tree = ShortestPathTree(source, dist, parent, parent_edge, depth)
    if with_lca:
        tree.build_lca()
    return tree


def tie_free(graph: Graph, tree: ShortestPathTree, blocked: int = 0) -> bool:
    """Check that each settled vertex has a strictly unique best relaxation."""
    for v in range(graph.n):
        dv = tree.dist[v]
        if dv is None or v == tree.source:
            continue
        hits = 0
        for u, eid, wb, wt in graph.adj[v]:
            if (blocked >> eid) & 1:
                continue
            du = tree.dist[u]
            if du is not None and du.base + wb == dv.base and du.tie + wt == dv.tie:
                hits += 1
                if hits > 1:
                    return False
        if hits != 1:
            return False
    return True


def unique_paths_ok(graph: Graph, removal_sample: list[int]) -> bool:
    """Verify unique shortest paths on G and on G minus each sampled edge."""
    masks = [0] + [1 << eid for eid in removal_sample]
    for mask in masks:
        for s in range(graph.n):
            tree = dijkstra(graph, s, blocked=mask)
            if not tie_free(graph, tree, blocked=mask):
                return False
    return True


class SptForest:
    """All-sources shortest path trees plus pair-path helpers.

    This is the shared substrate for proper-form tests: membership of a
    vertex on pi(u, v), positions along it, and vertices at given positions,
    all in O(1)-ish time.
    """

    __slots__ = ("graph", "spts", "version")

    def __init__(self, graph: Graph, spts: list[ShortestPathTree], version: int = 0):
        self.graph = graph
        self.spts = spts
        self.version = version

    @classmethod
    def build(cls, graph: Graph, version: int = 0, with_lca: bool = True) -> "SptForest":
        spts = [dijkstra(graph, s, with_lca=with_lca) for s in range(graph.n)]
        return cls(graph, spts, version)

    def tie_free(self) -> bool:
        return all(tie_free(self.graph, t) for t in self.spts)

    def dist(self, u: int, v: int) -> Optional[W]:
        return self.spts[u].dist[v]

    def hops(self, u: int, v: int) -> Optional[int]:
        """Edge count of pi(u, v), or None if disconnected."""
        if self.spts[u].dist[v] is None:
            return None
        return self.spts[u].depth[v]

    def on_path(self, u: int, v: int, z: int) -> bool:
        """Is z a vertex of pi(u, v)?  Exact under unique shortest paths."""
        du = self.spts[u].dist
        if du[v] is None or du[z] is None:
            return False
        dz = self.spts[z].dist[v]
        if dz is None:
            return False
        s = du[z] + dz
        return s == du[v]

    def path_pos(self, u: int, v: int, z: int) -> int:
        """Position (hops from u) of z on pi(u, v); z must be on the path."""
        return self.spts[u].depth[z]

    def vertex_at(self, u: int, v: int, pos: int) -> int:
        """The vertex at ``pos`` hops from u along pi(u, v)."""
        return self.spts[u].ancestor_at_depth(v, pos)

    def edge_at(self, u: int, v: int, pos: int) -> int:
        """Edge id at position ``pos`` (between pos and pos+1) on pi(u, v)."""
        child = self.spts[u].ancestor_at_depth(v, pos + 1)
        return self.spts[u].parent_edge[child]  # type: ignore[return-value]

    def path_vertices(self, u: int, v: int) -> list[int]:
        return self.spts[u].path_vertices(v)

    def path_edge_ids(self, u: int, v: int) -> list[int]:
        return self.spts[u].path_edges(v)
