"""Worst-case edge insertion for the distance sensitivity oracle.

Inserting an edge rebuilds the per-source trees and recomputes every stored
interval entry from the old structure.  Each pair is classified by whether
its shortest path changed, then each anchored interval falls into one of a
dozen positional cases relative to the new edge and the old path's
divergence/convergence points; every case assembles candidates from old
entries, old tree paths, and the new edge, all gated through the
canonicalising transform against the new graph.

Old values are only read, new values only written (double buffering), so the
case formulas always see the pre-insertion structure.
"""
from __future__ import annotations

from typing import Optional

from ..pathform import ProperForm, seg_down, seg_edge, seg_up, to_proper_form, \
    pf_intersects_interval, pf_segments
from ..spt import SptForest
from ..weights import CompositeWeight as W
from .static import IncrementalDso, anchors


class DuplicateEdge(ValueError):
    """The endpoints are already joined by an edge."""


class TieDetected(RuntimeError):
    """The inserted weight broke the unique shortest path property."""


class CaseUnmatched(AssertionError):
    """Defensive: the positional case analysis failed to match."""


class InsertionContext:
    """Shared state for one insertion: old and new structure side by side."""

    __slots__ = (
        "dso", "old_forest", "old_table", "new_forest", "eid", "x", "y", "w",
        "fov", "_pair", "_pf_cache", "_oq_cache",
    )

    def __init__(self, dso: IncrementalDso, new_forest: SptForest,
                 eid: int, x: int, y: int, w: W):
        self.dso = dso
        self.old_forest = dso.forest
        self.old_table = dso.table
        self.new_forest = new_forest
        self.eid = eid
        self.x = x
        self.y = y
        self.w = w
        fmap = {dso.forest.version: dso.forest, new_forest.version: new_forest}
        self.fov = fmap.__getitem__
        self._pair: dict = {}
        self._pf_cache: dict = {}
        self._oq_cache: dict = {}

    # -- old-structure interval queries (by vertices, empty allowed) -----

    def old_query(self, uu: int, vv: int, a: int, b: int) -> Optional[ProperForm]:
        key = (uu, vv, a, b)
        hit = self._oq_cache.get(key, False)
        if hit is not False:
            return hit
        f = self.old_forest
        if f.dist(uu, vv) is None:
            self._oq_cache[key] = None
            return None
        pa = f.path_pos(uu, vv, a)
        pb = f.path_pos(uu, vv, b)
        if uu > vv:
            uu, vv = vv, uu
            h = f.hops(uu, vv)
            pa, pb = h - pa, h - pb
        if pa > pb:
            pa, pb = pb, pa
        got = self.dso._query_pos(uu, vv, pa, pb)
        self._oq_cache[key] = got
        return got

    def old_uv_segs(self, u: int, v: int):
        if self.old_forest.dist(u, v) is None:
            return None
        return [seg_down(self.old_forest.spts[u], u, v)]

    def through_edge_segs(self, u: int, v: int, ex: int, ey: int,
                          left: Optional[ProperForm] = None,
                          right: Optional[ProperForm] = None,
                          left_default: bool = False, right_default: bool = False):
        """Candidate u -> ex -> (edge) -> ey -> v from old-graph pieces.

        ``left``/``right`` replace the plain old tree paths when given;
        ``*_default`` selects the plain paths.  Returns None when a needed
        piece is missing.
        """
        segs = []
        if left_default:
            if self.old_forest.dist(u, ex) is None:
                return None
            if ex != u:
                segs.append(seg_down(self.old_forest.spts[u], u, ex))
        else:
            if left is None:
                return None
            segs.extend(pf_segments(left, self.fov, u))
        segs.append(seg_edge(self.eid, ex, ey, self.w))
        if right_default:
            if self.old_forest.dist(ey, v) is None:
                return None
            if ey != v:
                segs.append(seg_up(self.old_forest.spts[v], ey, v))
        else:
            if right is None:
                return None
            segs.extend(pf_segments(right, self.fov, ey))
        return segs

    # -- the canonicalising gate against the new graph -------------------

    def gate(self, segs, u: int, v: int, pa: int, pb: int,
             cache_key=None) -> Optional[ProperForm]:
        if segs is None:
            return None
        if cache_key is not None:
            hit = self._pf_cache.get(cache_key, False)
            if hit is not False:
                pf = hit
            else:
                from ..pathform import CandidatePath
                pf = to_proper_form(CandidatePath(segs), self.new_forest)
                self._pf_cache[cache_key] = pf
        else:
            from ..pathform import CandidatePath
            pf = to_proper_form(CandidatePath(segs), self.new_forest)
        if pf is None:
            return None
        if pf_intersects_interval(pf, self.new_forest, u, v, pa, pb):
            return None
        return pf

    def pf_survives(self, pf: ProperForm) -> bool:
        """Prefix and suffix distances unchanged: the same paths, still valid."""
        of, nf = self.old_forest, self.new_forest
        return (nf.spts[pf.u].dist[pf.x] == of.spts[pf.u].dist[pf.x]
                and nf.spts[pf.y].dist[pf.v] == of.spts[pf.y].dist[pf.v])

    # -- per-pair geometry ------------------------------------------------

    def pair_info(self, u: int, v: int):
        info = self._pair.get((u, v))
        if info is None:
            info = self._build_pair_info(u, v)
            self._pair[(u, v)] = info
        return info

    def _build_pair_info(self, u: int, v: int):
        of, nf = self.old_forest, self.new_forest
        d_old = of.dist(u, v)
        d_new = nf.dist(u, v)
        changed = d_old != d_new
        if not changed:
            # per-orientation divergence/convergence of the old trees, plus
            # the unconstrained through-edge length as a pruning floor
            orients = []
            h = of.hops(u, v)
            for ex, ey in ((self.x, self.y), (self.y, self.x)):
                due = of.dist(u, ex)
                dev = of.dist(ey, v)
                if due is None or dev is None:
                    continue
                p = of.spts[u].lca(ex, v)
                q = of.spts[v].lca(ey, u)
                floor = due + self.w + dev
                orients.append((ex, ey, of.spts[u].depth[p], h - of.spts[v].depth[q],
                                p, q, floor))
            return ("same", orients)
        # the new path runs through the inserted edge; find its orientation
        via_x = _opt_add3(of.dist(u, self.x), self.w, of.dist(self.y, v))
        via_y = _opt_add3(of.dist(u, self.y), self.w, of.dist(self.x, v))
        if via_x is not None and via_x == d_new:
            ex, ey = self.x, self.y
        else:
            assert via_y == d_new, "changed pair must route through the new edge"
            ex, ey = self.y, self.x
        h2 = nf.hops(u, v)
        pos_x = nf.spts[u].depth[ex]
        if d_old is None:
            p_pos, q_pos = 0, h2
            p_vtx, q_vtx = u, v
        else:
            p_vtx = of.spts[u].lca(v, ex)
            q_vtx = of.spts[v].lca(u, ey)
            p_pos = nf.spts[u].depth[p_vtx]
            q_pos = h2 - nf.spts[v].depth[q_vtx]
        return ("moved", ex, ey, pos_x, p_pos, q_pos, p_vtx, q_vtx)


def _opt_add3(a: Optional[W], w: W, b: Optional[W]) -> Optional[W]:
    if a is None or b is None:
        return None
    return a + w + b


def _pf_min(a: Optional[ProperForm], b: Optional[ProperForm]) -> Optional[ProperForm]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a.length <= b.length else b


def dispatch_changed(ctx: InsertionContext, u: int, v: int, i: int, j: int) -> Optional[ProperForm]:
    """New entry for a pair whose shortest path moved onto the new edge."""
    info = ctx.pair_info(u, v)
    _, ex, ey, pos_x, P, Q, p_vtx, q_vtx = info
    nf = ctx.new_forest
    h2 = nf.hops(u, v)
    pa, pb = i, h2 - j
    a_v = nf.vertex_at(u, v, pa)
    b_v = nf.vertex_at(u, v, pb)
    X = pos_x
    ra = 0 if pa <= P else (1 if pa <= X else (2 if pa <= Q else 3))
    rb = 0 if pb <= P else (1 if pb <= X else (2 if pb <= Q else 3))

    def t(segs, key=None):
        return ctx.gate(segs, u, v, pa, pb, cache_key=key)

    old_uv = lambda: t(ctx.old_uv_segs(u, v), key=("uv", u, v))
    q_uv = lambda a, b: t(_pf_as_segs(ctx, ctx.old_query(u, v, a, b), u))
    q_left = lambda a, b: t(ctx.through_edge_segs(
        u, v, ex, ey, left=ctx.old_query(u, ex, a, b), right_default=True))
    q_right = lambda a, b: t(ctx.through_edge_segs(
        u, v, ex, ey, left_default=True, right=ctx.old_query(ey, v, a, b)))

    if ra == 1 and rb == 2:
        # CASE 1: divergence and convergence bracket R, the edge inside
        return old_uv()
    if ra == 0 and rb == 0:
        # CASE 2: R on the shared prefix before the divergence point
        return _pf_min(q_uv(a_v, b_v), q_left(a_v, b_v))
    if ra == 3 and rb == 3:
        # CASE 2 mirrored: R on the shared suffix after the convergence
        return _pf_min(q_uv(a_v, b_v), q_right(a_v, b_v))
    if ra == 2 and rb == 2:
        # CASE 3: R between the edge and the convergence point
        return _pf_min(old_uv(), q_right(a_v, b_v))
    if ra == 1 and rb == 1:
        # CASE 3 mirrored: R between the divergence point and the edge
        return _pf_min(old_uv(), q_left(a_v, b_v))
    if ra == 1 and rb == 3:
        # CASE 4: a inside [p, x], b beyond q
        return q_uv(q_vtx, b_v)
    if ra == 0 and rb == 2:
        # CASE 4 mirrored
        return q_uv(a_v, p_vtx)
    if ra == 2 and rb == 3:
        # CASE 5: a in [y, q], b beyond q
        return _pf_min(q_uv(q_vtx, b_v), q_right(a_v, b_v))
    if ra == 0 and rb == 1:
        # CASE 5 mirrored
        return _pf_min(q_uv(a_v, p_vtx), q_left(a_v, b_v))
    if ra == 0 and rb == 3:
        # CASE 6: R spans both divergence and convergence
        return q_uv(a_v, b_v)
    raise CaseUnmatched(f"pair ({u},{v}) interval ({i},{j}): ra={ra} rb={rb}")


def dispatch_unchanged(ctx: InsertionContext, u: int, v: int, i: int, j: int) -> Optional[ProperForm]:
    """New entry for a pair whose shortest path is untouched by the edge."""
    info = ctx.pair_info(u, v)
    orients = info[1]
    nf = ctx.new_forest
    h = nf.hops(u, v)
    pa, pb = i, h - j
    a_v = nf.vertex_at(u, v, pa)
    b_v = nf.vertex_at(u, v, pb)

    def t(segs, key=None):
        return ctx.gate(segs, u, v, pa, pb, cache_key=key)

    old_pf = ctx.old_table[(u, v)].get((i, j))
    if old_pf is not None and ctx.pf_survives(old_pf):
        # endpoints kept their distances, so the stored decomposition is the
        # same pair of tree paths and still clears the same interval
        best = ProperForm(old_pf.u, old_pf.x, old_pf.bridge, old_pf.y,
                          old_pf.v, old_pf.length, nf.version)
    else:
        best = t(_pf_as_segs(ctx, old_pf, u))
    for ex, ey, P, Q, p_vtx, q_vtx, floor in orients:
        if best is not None and floor >= best.length:
            continue  # every through-edge candidate is at least the floor
        if pb <= P:
            cand = t(ctx.through_edge_segs(
                u, v, ex, ey, left=ctx.old_query(u, ex, a_v, b_v), right_default=True))
        elif pa < P <= pb <= Q:
            cand = t(ctx.through_edge_segs(
                u, v, ex, ey, left=ctx.old_query(u, ex, a_v, p_vtx), right_default=True))
        elif P <= pa and pb <= Q:
            cand = t(ctx.through_edge_segs(
                u, v, ex, ey, left_default=True, right_default=True),
                key=("uxyv", u, v, ex))
        elif P <= pa <= Q < pb:
            cand = t(ctx.through_edge_segs(
                u, v, ex, ey, left_default=True, right=ctx.old_query(ey, v, q_vtx, b_v)))
        elif Q <= pa:
            cand = t(ctx.through_edge_segs(
                u, v, ex, ey, left_default=True, right=ctx.old_query(ey, v, a_v, b_v)))
        else:
            # a < p <= q < b: a weak interval cannot route through the edge
            cand = None
        best = _pf_min(best, cand)
    return best


def _pf_as_segs(ctx: InsertionContext, pf: Optional[ProperForm], start: int):
    if pf is None:
        return None
    return pf_segments(pf, ctx.fov, start)


def _insert_creates_tie(old: SptForest, new: SptForest, x: int, y: int, w: W) -> bool:
    """Any shortest path in the grown graph either avoids the new edge (the
    old unique path) or crosses it once; a tie means two of the three
    candidate routes hit the new distance for some pair."""
    n = new.graph.n
    for u in range(n):
        od = old.spts[u].dist
        nd = new.spts[u].dist
        dux, duy = od[x], od[y]
        for v in range(u + 1, n):
            target = nd[v]
            if target is None:
                continue
            hits = 1 if od[v] == target else 0
            if dux is not None:
                o = old.spts[y].dist[v]
                if o is not None and dux + w + o == target:
                    hits += 1
            if duy is not None:
                o = old.spts[x].dist[v]
                if o is not None and duy + w + o == target:
                    hits += 1
            if hits != 1:
                return True
    return False


def insert_edge(dso: IncrementalDso, x: int, y: int, w_base: int,
                tie: Optional[int] = None, eid: Optional[int] = None) -> int:
    """Add an edge and refresh the whole structure; returns the new edge id.

    Worst-case cost is one all-sources rebuild plus a constant amount of
    work per stored interval entry.  Raises DuplicateEdge for parallel
    inserts and TieDetected if the fresh weight breaks path uniqueness.
    """
    g = dso.graph
    if x == y:
        raise DuplicateEdge("self-loops are not allowed")
    if g.has_endpoints(x, y):
        raise DuplicateEdge(f"({x}, {y}) already present")
    if tie is None:
        tie = dso.ties.next()
    w = W(w_base, tie)
    g2, eid = g.plus_edge(x, y, w, eid=eid)
    new_forest = SptForest.build(g2, version=dso.version + 1)
    if _insert_creates_tie(dso.forest, new_forest, x, y, w):
        raise TieDetected("inserted weight creates equal-length paths")

    ctx = InsertionContext(dso, new_forest, eid, x, y, w)
    new_table: dict = {}
    n = g2.n
    for u in range(n):
        spt_u = new_forest.spts[u]
        for v in range(u + 1, n):
            if spt_u.dist[v] is None:
                continue
            h2 = spt_u.depth[v]
            sub = {}
            moved = ctx.pair_info(u, v)[0] == "moved"
            fn = dispatch_changed if moved else dispatch_unchanged
            for (i, j) in anchors(h2):
                sub[(i, j)] = fn(ctx, u, v, i, j)
            new_table[(u, v)] = sub

    dso.graph = g2
    dso.forest = new_forest
    dso.table = new_table
    dso.version = new_forest.version
    dso._forests = {new_forest.version: new_forest}
    return eid
