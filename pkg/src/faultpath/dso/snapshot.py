"""Binary snapshot of a built oracle: build once, query many times.

Layout (little endian): magic, format version, graph section (edge ids kept
sparse), then the interval table.  Trees and LCA structures are rebuilt on
load, and every stored entry's length is re-derived and checked against the
dump.  The format is documented here and versioned; stability across package
versions is not guaranteed.
"""
from __future__ import annotations

import struct

from ..graph import Graph, TieSource
from ..pathform import ProperForm
from ..spt import SptForest
from ..weights import CompositeWeight as W
from .static import IncrementalDso

MAGIC = b"FPDSO"
FORMAT = 2


class SnapshotError(ValueError):
    pass


def save_dso(dso: IncrementalDso, path: str) -> None:
    out = [MAGIC, struct.pack("<HIiI", FORMAT, dso.graph.n, dso.version,
                              len(dso.graph.edges))]
    for eid in sorted(dso.graph.edges):
        e = dso.graph.edges[eid]
        out.append(struct.pack("<IIIqq", eid, e.u, e.v, e.w.base, e.w.tie))
    out.append(struct.pack("<I", len(dso.table)))
    for (u, v), sub in dso.table.items():
        out.append(struct.pack("<III", u, v, len(sub)))
        for (i, j), pf in sub.items():
            if pf is None:
                out.append(struct.pack("<IIB", i, j, 0))
            else:
                bridge = 0xFFFFFFFF if pf.bridge is None else pf.bridge
                out.append(struct.pack("<IIBIIIqq", i, j, 1, pf.x, bridge,
                                       pf.y, pf.length.base, pf.length.tie))
    with open(path, "wb") as fh:
        fh.write(b"".join(out))


def load_dso(path: str, seed: int = 0) -> IncrementalDso:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:5] != MAGIC:
        raise SnapshotError("not a snapshot file")
    off = 5
    fmt, n, version, m = struct.unpack_from("<HIiI", data, off)
    off += struct.calcsize("<HIiI")
    if fmt != FORMAT:
        raise SnapshotError(f"unsupported snapshot format {fmt}")
    g = Graph(n)
    for _ in range(m):
        eid, u, v, base, tie = struct.unpack_from("<IIIqq", data, off)
        off += struct.calcsize("<IIIqq")
        g.add_edge(u, v, W(base, tie), eid=eid)
    forest = SptForest.build(g, version=version)
    (npairs,) = struct.unpack_from("<I", data, off)
    off += 4
    table: dict = {}
    for _ in range(npairs):
        u, v, cnt = struct.unpack_from("<III", data, off)
        off += 12
        sub = {}
        for _ in range(cnt):
            i, j, kind = struct.unpack_from("<IIB", data, off)
            off += 9
            if kind == 0:
                sub[(i, j)] = None
                continue
            x, bridge, y, lb, lt = struct.unpack_from("<IIIqq", data, off)
            off += struct.calcsize("<IIIqq")
            b = None if bridge == 0xFFFFFFFF else bridge
            length = forest.dist(u, x)
            if b is not None:
                length = length + g.edges[b].w
            length = length + forest.dist(y, v)
            if (length.base, length.tie) != (lb, lt):
                raise SnapshotError(f"corrupt entry for pair ({u}, {v})")
            sub[(i, j)] = ProperForm(u, x, b, y, v, length, version)
        table[(u, v)] = sub
    return IncrementalDso(g, forest, table, version, TieSource(seed + 7919))
