import pytest

from faultpath.families import random_connected
from faultpath.frp2 import Frp2Solver
from faultpath.graph import perturb_and_verify
from faultpath.hardness import InconsistentAnswer, extract_apsp, reduce_graph
from faultpath.reference import all_dists_avoiding
from faultpath.spt import dijkstra


def test_too_small_rejected():
    g = perturb_and_verify(1, [], seed=0)
    with pytest.raises(ValueError):
        reduce_graph(g)


def test_k3_shape():
    g = perturb_and_verify(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)], seed=1)
    inst = reduce_graph(g)
    assert inst.graph.n == 3 * 3 + 4
    spt = dijkstra(inst.graph, inst.s)
    assert spt.dist[inst.t].base == 2 * inst.n_big
    # the shortest route goes via the i=1 matching edges
    pv = spt.path_vertices(inst.t)
    assert inst.s_nodes[1] in pv and inst.t_nodes[1] in pv and 0 in pv


def test_two_vertex_round_trip():
    g = perturb_and_verify(2, [(0, 1, 5)], seed=0)
    inst = reduce_graph(g)
    assert inst.graph.n == 10
    sol = Frp2Solver(inst.graph, inst.s, inst.t)
    f1, f2 = inst.failure_set(1, 2)
    ans = sol.answer_pair(f1, f2)
    assert ans == 5 + 3 * inst.n_big
    mat = extract_apsp(inst, sol.answer_pair)
    assert mat == [[0, 5], [5, 0]]


def test_round_trip_matches_direct_apsp_n20():
    g = random_connected(20, seed=17)
    inst = reduce_graph(g)
    sol = Frp2Solver(inst.graph, inst.s, inst.t)
    mat = extract_apsp(inst, sol.answer_pair)
    for u in range(g.n):
        row = all_dists_avoiding(g, u, [])
        for v in range(g.n):
            assert mat[u][v] == row[v].base
    # every designated answer is finite and >= (i+j)N
    for i in range(1, g.n + 1):
        for j in range(1, g.n + 1):
            f1, f2 = inst.failure_set(i, j)
            ans = sol.answer_pair(f1, f2)
            assert ans is not None and ans >= (i + j) * inst.n_big


def test_inconsistent_answer_detected():
    g = perturb_and_verify(2, [(0, 1, 5)], seed=0)
    inst = reduce_graph(g)
    with pytest.raises(InconsistentAnswer):
        extract_apsp(inst, lambda f1, f2: 0)
