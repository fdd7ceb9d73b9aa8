"""Exact three-failure replacement distances for one s-t pair.

The driver enumerates exactly the required triples: the first failure on
pi(s, t), the second on the resulting replacement path, the third on the
two-failure replacement path.  Triples split by how many failures lie on the
original path:

- one: a query between the failure's terminals in the auxiliary graph with
  the second failure deleted (offline timeline) and the third avoided;
- two: the four-candidate minimum over the partition level separating them,
  each candidate one query against a level graph's offline timeline;
- three: interval-oracle candidates plus the probe-loop snake answers.

All answers are exact base-channel lengths; None means unreachable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from ..dso.offline import CycleTimeline, build_timeline
from ..dso.static import IncrementalDso
from ..frp2 import Frp2Solver, OffPathMatrix, build_H, _aux_ties_ok
from ..graph import Graph
from .oracles import MirrorOracleB, OracleA, OracleB, PathCoords, mirror_coords
from .partition import BinaryPartition, level_graph, pad_to_power_of_two
from .snake import PairProbeLoop, SnakeOracles


Sink = Callable[[int, int, int, Optional[int], str], None]


@dataclass
class Frp3Stats:
    triples: int = 0
    by_case: dict = field(default_factory=lambda: {"1on": 0, "2on": 0, "3on": 0})
    loop_potentials: list = field(default_factory=list)
    loop_bounds_ok: bool = True


def _omin(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _oadd(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None or b is None:
        return None
    return a + b


class Frp3Solver:
    """Shared structures for one (graph, s, t) instance."""

    def __init__(self, graph: Graph, s: int, t: int, seed: int = 0):
        self.base_graph = graph
        self.orig_s = s
        self.t = t
        self.seed = seed
        self.inst = pad_to_power_of_two(graph, s, t, seed)
        P = self.inst
        self.partition = BinaryPartition(P)
        self.aux, self.levels = self._build_aux_and_levels(seed)
        self.frp2 = Frp2Solver(P.graph, P.s, P.t, seed=seed, aux=self.aux)
        self.matrix = OffPathMatrix(P.graph, P.path_verts, P.path_eids)
        self.frp2._matrix = self.matrix
        coords = PathCoords(P, self.matrix)
        oa = OracleA(coords, P.k)
        ob = OracleB(oa)
        obm = MirrorOracleB(mirror_coords(P, self.matrix), P.k)
        self.snakes = SnakeOracles(oa, ob, obm)
        self.oracle_a = oa
        self.oracle_b = ob
        self.stats = Frp3Stats()
        self._pad_eids = set(P.path_eids[:P.pad])

    def _build_aux_and_levels(self, seed: int):
        P = self.inst
        for attempt in range(8):
            aux = build_H(P.graph, P.path_verts, P.path_eids,
                          seed=seed + 1009 * attempt)
            levels = {}
            ok = True
            for i in range(1, P.k + 1):
                for parity in (0, 1):
                    g = level_graph(aux, self.partition, i, parity)
                    if not _aux_ties_ok(g):
                        ok = False
                        break
                    levels[(i, parity)] = g
                if not ok:
                    break
            if ok:
                return aux, levels
        raise RuntimeError("no tie-free auxiliary construction found")

    # -- enumeration -------------------------------------------------------

    def solve(self, sink: Sink) -> Frp3Stats:
        P = self.inst
        frp1 = self.frp2.frp1
        eid_at = P.path_eids
        pos_of = self.frp2.pos_on_st

        one_on: dict[int, list] = {}
        two_on: dict[tuple, None] = {}
        three_on: dict[tuple[int, int], set] = {}
        triples: list[tuple[int, int, int, tuple, str]] = []

        for d1_pos in range(P.pad, P.hops):
            rp1 = frp1.paths[d1_pos]
            if rp1 is None:
                continue
            d1_eid = eid_at[d1_pos]
            for d2 in rp1:
                if d2 in self._pad_eids:
                    continue
                rp2 = self.frp2.rp2_path(d1_pos, d2)
                if rp2 is None:
                    continue
                d2_pos = pos_of(d2)
                for d3 in rp2:
                    if d3 in self._pad_eids:
                        continue
                    d3_pos = pos_of(d3)
                    ons = sorted(p for p in (d1_pos, d2_pos, d3_pos) if p is not None)
                    offs = [e for e, p in ((d2, d2_pos), (d3, d3_pos)) if p is None]
                    if len(ons) == 1:
                        key = ("1on", d1_pos, frozenset(offs))
                        one_on.setdefault(d2, []).append((d1_pos, d3, key))
                    elif len(ons) == 2:
                        key = ("2on", ons[0], ons[1], offs[0])
                        two_on[key] = None
                    else:
                        key = ("3on", ons[0], ons[1], ons[2])
                        three_on.setdefault((ons[0], ons[2]), set()).add(ons[1])
                    triples.append((d1_eid, d2, d3, key, key[0]))

        answers: dict = {}
        self._solve_one_on(one_on, answers)
        self._solve_two_on(list(two_on), answers)
        self._solve_three_on(three_on, answers)

        for d1_eid, d2, d3, key, kind in triples:
            self.stats.triples += 1
            self.stats.by_case[kind] += 1
            sink(d1_eid, d2, d3, answers[key], kind)
        return self.stats

    # -- pass 1: one failure on the path ------------------------------------

    def _solve_one_on(self, batches: dict[int, list], answers: dict) -> None:
        if not batches:
            return
        aux = self.aux
        cyc = CycleTimeline(aux.graph, sorted(batches))

        def on_leaf(t: int, dso: IncrementalDso) -> None:
            c = cyc.deleted_at(t)
            if c is None:
                return
            k = cyc.index[c]
            for d1_pos, d3, key in batches[c]:
                if key in answers:
                    continue
                ln, _ = dso.query_edge_failure(
                    aux.term_minus[d1_pos], aux.term_plus[d1_pos],
                    cyc.current_id(d3, k))
                answers[key] = aux.two_term_value(ln)

        build_timeline(cyc.timeline, seed=self.seed, on_leaf=on_leaf,
                       keep_leaves=False)

    # -- pass 2: two failures on the path ------------------------------------

    def _solve_two_on(self, keys: list[tuple], answers: dict) -> None:
        if not keys:
            return
        aux = self.aux
        P = self.inst
        parts: dict = {}     # partial values per key
        level_batch: dict = {}
        for key in keys:
            _, le, re, f = key
            i, j, m_pos = self.partition.separator(le, re)
            ln, _ = self.frp2.h_dso.query_edge_failure(
                aux.term_minus[le], aux.term_plus[re], f)
            parts[key] = {"v1": aux.two_term_value(ln), "m": m_pos, "i": i}
            level_batch.setdefault((i, 0), {}).setdefault(le, []).append(key)
            level_batch.setdefault((i, 1), {}).setdefault(re, []).append(key)

        for (i, parity), by_del in sorted(level_batch.items()):
            g_level = self.levels[(i, parity)]
            del_positions = sorted(by_del)
            cyc = CycleTimeline(g_level, [P.path_eids[p] for p in del_positions])

            def on_leaf(t: int, dso: IncrementalDso, parity=parity, cyc=cyc,
                        del_positions=del_positions, by_del=by_del) -> None:
                eid_deleted = cyc.deleted_at(t)
                if eid_deleted is None:
                    return
                pos = del_positions[(t - 1) // 2]
                for key in by_del[pos]:
                    _, le, re, f = key
                    rec = parts[key]
                    m_vtx = P.path_verts[rec["m"]]
                    dm = aux.term_minus[le]
                    dp = aux.term_plus[re]
                    full, _ = dso.query_edge_failure(dm, dp, f)
                    sm, _ = dso.query_edge_failure(dm, m_vtx, f)
                    mt, _ = dso.query_edge_failure(m_vtx, dp, f)
                    tag = "h0" if parity == 0 else "h1"
                    rec[tag + "_full"] = aux.two_term_value(full)
                    rec[tag + "_sm"] = aux.one_term_value(sm)
                    rec[tag + "_mt"] = aux.one_term_value(mt)

            build_timeline(cyc.timeline, seed=self.seed + 31 * i + parity,
                           on_leaf=on_leaf, keep_leaves=False)

        for key in keys:
            rec = parts[key]
            v4 = _oadd(_omin(rec.get("h0_sm"), rec.get("h1_sm")),
                       _omin(rec.get("h0_mt"), rec.get("h1_mt")))
            ans = _omin(_omin(rec["v1"], rec.get("h0_full")),
                        _omin(rec.get("h1_full"), v4))
            answers[key] = ans

    # -- pass 3: all three on the path ---------------------------------------

    def _solve_three_on(self, groups: dict[tuple[int, int], set], answers: dict) -> None:
        P = self.inst
        L = P.hops
        for (le, re), mids in sorted(groups.items()):
            t1 = self.oracle_a.query("l", "r", (0, le), (re + 1, L))
            loop = PairProbeLoop(self.snakes, le, re)
            self.stats.loop_potentials.append(loop.potentials())
            if not loop.stage_bound_ok():
                self.stats.loop_bounds_ok = False
            for mid in sorted(mids):
                t2 = self.oracle_b.query("r", le, (le + 1, mid), (re + 1, L))
                t3 = self.oracle_b.query("r", le, (mid + 1, re), (re + 1, L))
                snake = loop.answer(mid)
                ans = None if t1 is None else t1[0].base
                ans = _omin(ans, None if t2 is None else t2[0].base)
                ans = _omin(ans, None if t3 is None else t3[0].base)
                ans = _omin(ans, snake)
                answers[("3on", le, mid, re)] = ans


def solve_3frp(graph: Graph, s: int, t: int, sink: Sink, seed: int = 0) -> Frp3Stats:
    """Stream every required (d1, d2, d3) answer for the pair (s, t)."""
    return Frp3Solver(graph, s, t, seed=seed).solve(sink)
