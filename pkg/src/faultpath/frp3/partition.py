"""Path padding to a power-of-two edge count and the dyadic partition.

A zero-weight chain of artificial vertices is prepended ahead of the source,
so every position argument below lives on the padded path.  The partition
fixes markers m[i][j] and ranges Q[i][j] per level; the level graphs add the
even or odd ranges back onto the auxiliary graph H.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from ..graph import Graph, TIE_RANGE
from ..frp2 import AuxGraphH
from ..spt import dijkstra
from ..weights import CompositeWeight as W


@dataclass
class PaddedInstance:
    graph: Graph
    s: int              # padded source (chain head), equals orig_s when pad == 0
    t: int
    orig_s: int
    path_verts: list[int]
    path_eids: list[int]
    pad: int            # artificial leading edges; real path edges start here
    k: int              # path has 2^k edges

    @property
    def hops(self) -> int:
        return len(self.path_eids)

    def is_pad_pos(self, pos: int) -> bool:
        return pos < self.pad


def pad_to_power_of_two(graph: Graph, s: int, t: int, seed: int = 0) -> PaddedInstance:
    spt = dijkstra(graph, s)
    if spt.dist[t] is None:
        raise ValueError(f"{s} and {t} are disconnected")
    pv = spt.path_vertices(t)
    pe = spt.path_edges(t)
    h = len(pe)
    k = max(1, (h - 1).bit_length())
    pad = (1 << k) - h
    rng = random.Random(f"faultpath-pad:{seed}")
    g = graph.copy()
    chain = list(range(graph.n, graph.n + pad))
    g2 = Graph(graph.n + pad)
    g2.edges = dict(g.edges)
    g2.adj = g.adj + [[] for _ in range(pad)]
    g2._next_eid = g._next_eid
    pad_eids = []
    prev = s
    for v in chain:
        pad_eids.append(g2.add_edge(v, prev, W(0, rng.randrange(1, TIE_RANGE))))
        prev = v
    new_s = chain[-1] if pad else s
    path_verts = list(reversed(chain)) + pv
    path_eids = list(reversed(pad_eids)) + pe
    return PaddedInstance(g2, new_s, t, s, path_verts, path_eids, pad, k)


class BinaryPartition:
    """Markers and dyadic ranges over a 2^k-edge path."""

    def __init__(self, inst: PaddedInstance):
        self.inst = inst
        self.k = inst.k
        self.length = 1 << inst.k

    def marker_pos(self, i: int, j: int) -> int:
        """Vertex position of m[i][j]: j blocks of 2^(k-i) edges."""
        return j << (self.k - i)

    def ranges(self, i: int) -> list[tuple[int, int]]:
        """Level-i ranges as (lo, hi) edge-position spans, j ascending."""
        width = 1 << (self.k - i)
        return [(j * width, (j + 1) * width - 1) for j in range(1 << i)]

    def separator(self, l_edge: int, r_edge: int) -> tuple[int, int, int]:
        """Minimal level where the two edges fall in adjacent ranges.

        Returns (level i, odd index j, marker vertex position); the left edge
        lies in Q[i][j-1] and the right in Q[i][j].
        """
        assert l_edge < r_edge
        for i in range(1, self.k + 1):
            shift = self.k - i
            if (l_edge >> shift) != (r_edge >> shift):
                j = r_edge >> shift
                assert j % 2 == 1 and (l_edge >> shift) == j - 1
                return i, j, j << shift
        raise AssertionError("unreachable")

    def level_edge_positions(self, i: int, parity: int) -> list[int]:
        """Edge positions included in the level graph (even or odd ranges)."""
        out = []
        for j, (lo, hi) in enumerate(self.ranges(i)):
            if j % 2 == parity:
                out.extend(range(lo, hi + 1))
        return out


def level_graph(aux: AuxGraphH, partition: BinaryPartition, i: int, parity: int) -> Graph:
    """H plus the path edges of the level's even (parity 0) or odd ranges."""
    g = aux.graph.copy()
    base = aux.base
    for pos in partition.level_edge_positions(i, parity):
        e = base.edges[aux.path_eids[pos]]
        g.add_edge(e.u, e.v, e.w, eid=e.eid)
    return g
