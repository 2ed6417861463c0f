import itertools
import math
import random

import networkx as nx
import pytest

import brute
from edskernel.exact import decide_eds, meds
from edskernel.graph import Graph, complete, path, validate_instance
from edskernel.profile import ControlPair, find_control_pair
from edskernel.reductions import (
    CnfFormula,
    MccInstance,
    compose_control_pair,
    compose_cost,
    compose_p3,
    gen_random_instance,
    min_vertex_cover_brute,
    sat_to_eds,
    solve_3sat_brute,
    solve_3sat_dpll,
    solve_mcc_brute,
    vc_to_eds,
)

H7 = Graph(7, [(0, 4), (0, 5), (0, 6), (1, 4), (1, 5), (1, 6), (2, 3), (2, 4), (2, 5), (2, 6), (3, 4), (3, 5), (3, 6)])


def _mcc(k, n, edges):
    return MccInstance(Graph(k * n, edges), k)


def _four_edge_k3():
    # classes {0,1,2}, {3,4,5}, {6,7,8}; one edge per colour pair plus one spare
    return _mcc(3, 3, [(0, 3), (0, 6), (3, 6), (1, 4)])


# ----------------------------------------------------------- source problems

def test_mcc_examples():
    assert solve_mcc_brute(_mcc(2, 1, [(0, 1)]))
    assert not solve_mcc_brute(_mcc(2, 1, []))
    assert solve_mcc_brute(_mcc(3, 2, [(0, 2), (0, 4), (2, 4), (1, 3)]))
    assert not solve_mcc_brute(_mcc(3, 2, [(0, 2), (0, 4), (3, 4)]))


def test_mcc_rejects_uneven_classes():
    with pytest.raises(ValueError):
        MccInstance(Graph(5), 2)


def test_mcc_ignores_edges_inside_a_class():
    inst = _mcc(2, 2, [(0, 1), (0, 2)])
    assert inst.cross_edges() == [(0, 2)]


def test_3sat_examples():
    x = CnfFormula(1, [[(0, True)] * 3])
    assert solve_3sat_brute(x)
    both = CnfFormula(1, [[(0, True)] * 3, [(0, False)] * 3])
    assert not solve_3sat_brute(both)


def test_3sat_malformed():
    with pytest.raises(ValueError):
        CnfFormula(2, [[(0, True), (1, False)]])
    with pytest.raises(ValueError):
        CnfFormula(2, [[(0, True), (1, False), (2, True)]])


def test_dpll_agrees_with_brute_force():
    rnd = random.Random(8)
    for _ in range(300):
        n = 8
        m = rnd.randint(10, 45)
        cl = [[(rnd.randrange(n), rnd.random() < 0.5) for _ in range(3)] for _ in range(m)]
        f = CnfFormula(n, cl)
        assert solve_3sat_dpll(f) == solve_3sat_brute(f)


def test_vertex_cover_brute():
    assert min_vertex_cover_brute(complete(3)) == 2
    assert min_vertex_cover_brute(path(5)) == 2
    assert min_vertex_cover_brute(Graph(3)) == 0


# ---------------------------------------------------------------- compose_p3

def test_p3_formulas():
    c = compose_p3([_four_edge_k3(), _four_edge_k3()])
    assert len(c.instance.X) == 25 == c.formulas["modulator_formula"]
    assert c.instance.k == 12 == c.formulas["k_formula"]
    assert len(c.instance.components()) == 8
    validate_instance(c.instance)


def test_p3_structure_scales():
    for t, k, n in [(3, 2, 2), (4, 3, 2), (5, 2, 3)]:
        rnd = random.Random(t * 100 + k * 10 + n)
        inst = []
        for _ in range(t):
            es = [(u, v) for u in range(k * n) for v in range(u + 1, k * n) if u // n != v // n and rnd.random() < 0.6]
            es += [(p * n, q * n) for p, q in itertools.combinations(range(k), 2)]
            inst.append(_mcc(k, n, sorted(set(es))))
        c = compose_p3(inst)
        tp = c.formulas["t"]
        assert tp & (tp - 1) == 0 and tp >= t
        s = c.formulas["s"]
        assert len(c.instance.X) == 4 * s + k * n + 2 * k + 2 * math.comb(k, 2)
        edges = sum(len(i.cross_edges()) for i in inst) + len(inst[-1].cross_edges()) * (tp - t)
        assert len(c.instance.components()) == edges
        assert c.instance.k == k + s + edges
        validate_instance(c.instance)


def test_p3_or_equivalence_small():
    cross = [(0, 2), (0, 3), (1, 2), (1, 3)]
    for a in cross:
        for b in cross:
            inst = [_mcc(2, 2, [a]), _mcc(2, 2, [b])]
            c = compose_p3(inst).instance
            assert c.graph.n <= 22
            assert decide_eds(c.graph, c.k)[0] == any(solve_mcc_brute(i) for i in inst)


def test_p3_drops_trivial_no_inputs():
    empty = _mcc(2, 2, [])
    c = compose_p3([empty, _mcc(2, 2, [(0, 2)])])
    assert c.formulas["t"] == 1
    only = compose_p3([empty])
    assert not decide_eds(only.instance.graph, only.instance.k)[0]


def test_p3_rejects_mixed_shapes():
    with pytest.raises(ValueError):
        compose_p3([_mcc(2, 2, [(0, 2)]), _mcc(2, 3, [(0, 3)])])


# ------------------------------------------------------- compose_control_pair

def test_control_pair_with_p3_matches_p3_composition():
    inst = [_four_edge_k3(), _mcc(3, 3, [(1, 4), (2, 7), (4, 7)])]
    a = compose_p3(inst).instance
    b = compose_control_pair(path(3), ControlPair(frozenset({0}), frozenset({1})), inst).instance
    assert a.k == b.k and a.X == b.X
    assert a.graph == b.graph


def test_control_pair_budget_formula():
    h = path(4)
    cp = find_control_pair(h)
    assert brute.is_control_pair(h, cp.C, cp.B)
    inst = [_four_edge_k3(), _four_edge_k3()]
    c = compose_control_pair(h, cp, inst)
    d = len(cp.B)
    cost_b = brute.cost(h, cp.B)
    assert c.instance.k == 1 + 3 + 8 * meds(h).size + 3 * cost_b
    assert len(c.instance.X) == 9 + 6 + 4 + 2 * 3 * d
    assert len(c.instance.components()) == 8
    validate_instance(c.instance)


def test_control_pair_rejects_invalid_pair():
    with pytest.raises(ValueError):
        compose_control_pair(path(3), ControlPair(frozenset({1}), frozenset({1})), [_four_edge_k3()])


def test_control_pair_or_equivalence_small():
    cp = find_control_pair(path(3))
    cross = [(0, 2), (1, 3)]
    for a in cross:
        for b in cross + [(0, 3)]:
            inst = [_mcc(2, 2, [a]), _mcc(2, 2, [b])]
            c = compose_control_pair(path(3), cp, inst).instance
            assert decide_eds(c.graph, c.k)[0] == any(solve_mcc_brute(i) for i in inst)


# ----------------------------------------------------------------- compose_cost

def test_cost_gadget_sizes():
    inst = [_four_edge_k3()] * 5
    c = compose_cost(H7, {2, 3}, inst)
    assert c.formulas["s"] == 3 and c.formulas["d"] == 2
    assert c.formulas["t"] == 9
    names = c.blocks
    sizes = {name: len(vs) for name, vs in names.items()}
    # each inner selection part has 2 * C(3,2) * 2 = 12 vertices, one per outer set
    assert sizes["X1'"] == 3 * 12
    assert sizes["T'"] == 3 * 12
    # each clique gadget has C(3,2) * 3^2 = 27 vertices in Y
    assert sizes["Y"] == 3 * 27
    assert len(c.instance.X) == c.formulas["modulator_formula"]
    assert c.instance.k == c.formulas["k_formula"]
    assert len(c.instance.components()) == 9 * 4
    validate_instance(c.instance)


def test_cost_modulator_scale():
    for k, n in [(2, 2), (3, 2), (3, 3)]:
        rnd = random.Random(k * n)
        es = [(u, v) for u in range(k * n) for v in range(u + 1, k * n) if u // n != v // n and rnd.random() < 0.5]
        es += [(p * n, q * n) for p, q in itertools.combinations(range(k), 2)]
        c = compose_cost(H7, {2, 3}, [_mcc(k, n, sorted(set(es)))] * 4)
        s, d = c.formulas["s"], 2
        assert len(c.instance.X) <= 8 * s * n * n * k * k * d * d


def test_cost_needs_poly_host_and_strong_set():
    with pytest.raises(ValueError):
        compose_cost(path(3), {0, 2}, [_four_edge_k3()])
    with pytest.raises(ValueError):
        compose_cost(H7, {0, 1}, [_four_edge_k3()])


# ----------------------------------------------------------------- sat_to_eds

def _is_perfect_matching(g, M):
    seen = [v for e in M for v in e]
    return len(seen) == len(set(seen)) == g.n and all(g.has_edge(u, v) for u, v in M)


def test_sat_sizes():
    f = CnfFormula(1, [[(0, True)] * 3])
    gd = sat_to_eds(f)
    assert gd.graph.n == 12 and len(gd.matching) == 6 and gd.target == 3
    assert _is_perfect_matching(gd.graph, gd.matching)
    assert decide_eds(gd.graph, gd.target)[0]


def test_sat_unsatisfiable_pair():
    f = CnfFormula(1, [[(0, True)] * 3, [(0, False)] * 3])
    gd = sat_to_eds(f)
    assert gd.graph.n == 20 and gd.target == 5
    assert not decide_eds(gd.graph, gd.target)[0]


def test_sat_graph_is_koenig():
    rnd = random.Random(1)
    for n, m in [(1, 1), (2, 1), (3, 1), (1, 2)] * 4:
        f = CnfFormula(n, [[(rnd.randrange(n), rnd.random() < 0.5) for _ in range(3)] for _ in range(m)])
        g = sat_to_eds(f).graph
        nu = len(nx.max_weight_matching(nx.Graph(g.edges), maxcardinality=True))
        assert nu == min_vertex_cover_brute(g) == g.n // 2


# ------------------------------------------------------------------ vc_to_eds

def test_vc_examples():
    g, k = vc_to_eds(complete(3), 2)
    assert g.n == 7 and decide_eds(g, k)[0]
    g, k = vc_to_eds(complete(3), 1)
    assert not decide_eds(g, k)[0]
    g, k = vc_to_eds(Graph(3), 0)
    assert g == Graph(3) and decide_eds(g, 0)[0]


def test_vc_range():
    with pytest.raises(ValueError):
        vc_to_eds(complete(3), 4)


# ---------------------------------------------------------- random instances

def test_random_instance_is_deterministic():
    a = gen_random_instance([path(5)], 3, 5, 0.2, 7)
    b = gen_random_instance([path(5)], 3, 5, 0.2, 7)
    assert a == b
    from edskernel.graph import format_instance

    assert format_instance(a) == format_instance(b)


def test_random_instance_density_extremes():
    from edskernel.kernel import kernelize_basic

    inst = gen_random_instance([path(5)], 3, 5, 0.0, 1, x_density=0.0)
    assert all(not any(inst.graph.has_edge(x, v) for v in range(3, inst.graph.n)) for x in range(3))
    rep = kernelize_basic(inst)
    if not rep.trivial_yes:
        assert rep.stats["kept_components"] == 0
        assert rep.reduced.graph.n == 3

    full = gen_random_instance([path(5), complete(4)], 2, 3, 1.0, 2)
    assert all(full.graph.has_edge(x, v) for x in range(2) for v in range(2, full.graph.n))
    validate_instance(full)


def test_random_instance_budget_range():
    for seed in range(20):
        inst = gen_random_instance([path(5)], 4, 3, 0.3, seed)
        base = meds(Graph(inst.graph.n, [e for e in inst.graph.edges if e[0] >= 4])).size
        assert base <= inst.k <= base + 4


def test_random_instance_bad_density():
    with pytest.raises(ValueError):
        gen_random_instance([path(5)], 2, 2, 1.5, 0)
