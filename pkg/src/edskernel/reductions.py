"""Instance generators for the hardness constructions, plus tiny solvers for their source problems."""

from __future__ import annotations

import dataclasses
import itertools
import logging
import math
import random
from typing import Iterable, Sequence

from . import config
from .exact import mask_of, meds
from .graph import Edge, Graph, ModInstance, _norm, path
from .profile import POLY, Analyzer, ControlPair

log = logging.getLogger(__name__)


# ------------------------------------------------------------ source problems

@dataclasses.dataclass(frozen=True)
class MccInstance:
    """Multicolored clique: vertex ``v`` has color ``v // n``."""

    graph: Graph
    k: int

    def __post_init__(self) -> None:
        if self.k < 1 or self.graph.n % self.k:
            raise ValueError(f"{self.graph.n} vertices do not split into {self.k} equal classes")

    @property
    def n(self) -> int:
        return self.graph.n // self.k

    def color(self, v: int) -> int:
        return v // self.n

    def classes(self) -> list[range]:
        return [range(c * self.n, (c + 1) * self.n) for c in range(self.k)]

    def cross_edges(self) -> list[Edge]:
        return [(u, v) for u, v in self.graph.edges if self.color(u) != self.color(v)]


def solve_mcc_brute(inst: MccInstance) -> bool:
    config.check("multicolored clique search", inst.n * inst.k, 16)
    g = inst.graph
    for pick in itertools.product(*inst.classes()):
        if all(g.has_edge(a, b) for a, b in itertools.combinations(pick, 2)):
            return True
    return False


@dataclasses.dataclass(frozen=True)
class CnfFormula:
    """3-CNF; a literal is ``(variable, positive)`` with 0-based variables."""

    n: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self) -> None:
        cl = tuple(tuple((int(v), bool(s)) for v, s in c) for c in self.clauses)
        object.__setattr__(self, "clauses", cl)
        for i, c in enumerate(cl):
            if len(c) != 3:
                raise ValueError(f"clause {i} has {len(c)} literals, expected 3")
            for v, _ in c:
                if not 0 <= v < self.n:
                    raise ValueError(f"clause {i} references variable {v} outside 0..{self.n - 1}")

    @property
    def m(self) -> int:
        return len(self.clauses)

    def satisfied_by(self, assignment: Sequence[bool]) -> bool:
        return all(any(assignment[v] == s for v, s in c) for c in self.clauses)


def solve_3sat_brute(f: CnfFormula) -> bool:
    config.check("3-SAT assignment search", f.n, 20)
    return any(f.satisfied_by(a) for a in itertools.product((False, True), repeat=f.n))


def solve_3sat_dpll(f: CnfFormula) -> bool:
    """Unit propagation plus branching; an independent check on the brute force."""

    def simplify(clauses, lit):
        v, s = lit
        out = []
        for c in clauses:
            if (v, s) in c:
                continue
            rest = tuple(l for l in c if l[0] != v)
            if not rest:
                return None
            out.append(rest)
        return out

    def rec(clauses) -> bool:
        while True:
            if not clauses:
                return True
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            clauses = simplify(clauses, unit)
            if clauses is None:
                return False
        v = clauses[0][0][0]
        for s in (True, False):
            nxt = simplify(clauses, (v, s))
            if nxt is not None and rec(nxt):
                return True
        return False

    return rec([tuple(set(c)) for c in f.clauses])


def min_vertex_cover_brute(g: Graph) -> int:
    config.check("vertex cover search", g.n, 22)
    for size in range(g.n + 1):
        for S in itertools.combinations(range(g.n), size):
            s = set(S)
            if all(u in s or v in s for u, v in g.edges):
                return size
    return g.n


# ------------------------------------------------------------- shared helpers

class _Builder:
    def __init__(self) -> None:
        self.n = 0
        self.edges: set[Edge] = set()
        self.names: dict[str, list[int]] = {}

    def block(self, name: str, size: int) -> list[int]:
        vs = list(range(self.n, self.n + size))
        self.n += size
        self.names.setdefault(name, []).extend(vs)
        return vs

    def edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("loop")
        self.edges.add(_norm(u, v))

    def join(self, A: Iterable[int], B: Iterable[int]) -> None:
        B = list(B)
        for a in A:
            for b in B:
                self.edge(a, b)

    def graph(self) -> Graph:
        return Graph(self.n, sorted(self.edges))


def _prepare(instances: Sequence[MccInstance], target) -> tuple[list[MccInstance], int, int]:
    """Drop trivial no-inputs, check equivalence and pad by repeating the last one."""
    if not instances:
        raise ValueError("no instances to compose")
    k, n = instances[0].k, instances[0].n
    for i, inst in enumerate(instances):
        if inst.k != k or inst.n != n:
            raise ValueError(f"instance {i} has (k, n) = ({inst.k}, {inst.n}), expected ({k}, {n})")
    kept = []
    for i, inst in enumerate(instances):
        present = {tuple(sorted((inst.color(u), inst.color(v)))) for u, v in inst.cross_edges()}
        if len(present) < k * (k - 1) // 2:
            log.info("dropping instance %d: some color pair has no edge", i)
            continue
        kept.append(inst)
    if kept:
        size = target(len(kept))
        kept = kept + [kept[-1]] * (size - len(kept))
    return kept, k, n


def _pow2(t: int) -> int:
    return 1 << max(0, math.ceil(math.log2(t))) if t > 1 else 1


def _trivial_no(family: tuple[Graph, ...]) -> ModInstance:
    # every input was a trivial no; any no-instance of the right shape will do
    h = family[0]
    return ModInstance(h, meds(h).size - 1, frozenset(), family)


def _encoding(s: int, t: int) -> list[tuple[int, ...]]:
    """``t`` distinct ``s``-subsets of range(2s), in lexicographic order."""
    subsets = list(itertools.islice(itertools.combinations(range(2 * s), s), t))
    if len(subsets) < t:
        raise ValueError("not enough subsets to encode the instances")
    return subsets


@dataclasses.dataclass(frozen=True)
class Composed:
    instance: ModInstance
    formulas: dict
    blocks: dict

    def manifest(self) -> dict:
        return {
            "n": self.instance.graph.n,
            "m": self.instance.graph.m,
            "k": self.instance.k,
            "modulator": len(self.instance.X),
            "components": len(self.instance.components()),
            **self.formulas,
        }


def _selector_frame(b: _Builder, k: int, n: int, t: int):
    """V, T, T', Z, Z', W and the per-instance subsets W(i)."""
    s = max(0, round(math.log2(t)))
    V = b.block("V", k * n)
    T = b.block("T", k)
    Tp = b.block("T'", k)
    for j in range(k):
        b.join([T[j]], V[j * n:(j + 1) * n])
        b.edge(T[j], Tp[j])
    Z = b.block("Z", s)
    Zp = b.block("Z'", s)
    W = b.block("W", 2 * s)
    for z, zp in zip(Z, Zp):
        b.edge(z, zp)
        b.join([z], W)
    Wi = [[W[j] for j in sub] for sub in _encoding(s, t)]
    return s, V, Wi


# ---------------------------------------------------------------- composers

def compose_p3(instances: Sequence[MccInstance]) -> Composed:
    """OR-composition of multicolored clique inputs into a P3-modulator instance."""
    kept, k, n = _prepare(instances, _pow2)
    p3 = path(3)
    if not kept:
        return Composed(_trivial_no((p3,)), {"t": 0}, {})
    t = len(kept)
    b = _Builder()
    s, V, Wi = _selector_frame(b, k, n, t)
    pairs = list(itertools.combinations(range(k), 2))
    S = {pq: v for pq, v in zip(pairs, b.block("S", len(pairs)))}
    Sp = b.block("S'", len(pairs))
    for pq, sp in zip(pairs, Sp):
        b.edge(S[pq], sp)
    X = set(range(b.n))
    total = 0
    for i, inst in enumerate(kept):
        for x, y in inst.cross_edges():
            u1, u, u2 = b.block("paths", 3)
            b.edge(u1, u)
            b.edge(u, u2)
            b.join([u1], [V[x], V[y]] + Wi[i])
            b.edge(u, S[tuple(sorted((inst.color(x), inst.color(y))))])
            total += 1
    kp = k + s + total
    inst = ModInstance(b.graph(), kp, frozenset(X), (p3,))
    formulas = {
        "t": t,
        "s": s,
        "modulator_formula": 4 * s + k * n + 2 * k + 2 * math.comb(k, 2),
        "k_formula": kp,
        "components_formula": total,
    }
    return Composed(inst, formulas, b.names)


def compose_control_pair(h: Graph, cp: ControlPair, instances: Sequence[MccInstance]) -> Composed:
    """OR-composition through copies of ``h`` wired by a control pair ``(C, B)``."""
    a = Analyzer(h)
    Cm, Bm = mask_of(cp.C), mask_of(cp.B)
    if not a.check_control_pair(Cm, Bm):
        raise ValueError(f"({sorted(cp.C)}, {sorted(cp.B)}) is not a control pair of the given graph")
    kept, k, n = _prepare(instances, _pow2)
    if not kept:
        return Composed(_trivial_no((h,)), {"t": 0}, {})
    t = len(kept)
    Bl = sorted(cp.B)
    d = len(Bl)
    cost_b = a.cost(Bm)
    mh = a.meds
    b = _Builder()
    s, V, Wi = _selector_frame(b, k, n, t)
    pairs = list(itertools.combinations(range(k), 2))
    S = {}
    for pq in pairs:
        S[pq] = b.block("S", d)
    for pq in pairs:
        for sv, sp in zip(S[pq], b.block("S'", d)):
            b.edge(sv, sp)
    X = set(range(b.n))
    total = 0
    for i, inst in enumerate(kept):
        for x, y in inst.cross_edges():
            copy = b.block("copies", h.n)
            for u, v in h.edges:
                b.edge(copy[u], copy[v])
            for c in cp.C:
                b.join([copy[c]], [V[x], V[y]] + Wi[i])
            pq = tuple(sorted((inst.color(x), inst.color(y))))
            for j, bv in enumerate(Bl):
                b.edge(copy[bv], S[pq][j])
            total += 1
    kp = s + k + total * mh + math.comb(k, 2) * cost_b
    out = ModInstance(b.graph(), kp, frozenset(X), (h,))
    formulas = {
        "t": t,
        "s": s,
        "modulator_formula": k * n + 2 * k + 4 * s + 2 * math.comb(k, 2) * d,
        "k_formula": kp,
        "components_formula": total,
    }
    return Composed(out, formulas, b.names)


def _least_odd(t: int, d: int) -> int:
    s = 1
    while s ** d < t:
        s += 2
    return s


def compose_cost(h: Graph, B: Iterable[int], instances: Sequence[MccInstance]) -> Composed:
    """Composition of cost ``t^(1/d)`` through a strongly beneficial set ``B`` of ``h``."""
    a = Analyzer(h)
    Bl = sorted(B)
    Bm = mask_of(Bl)
    if not a.is_strongly_beneficial(Bm):
        raise ValueError(f"{Bl} is not strongly beneficial")
    if a.verdict.tag != POLY:
        raise ValueError(f"host graph classifies as {a.verdict.tag}, the construction needs a poly-kernel host")
    d = len(Bl)
    if d < 2:
        raise ValueError("needs a strongly beneficial set of size at least 2")
    kept, k, n = _prepare(instances, lambda t: _least_odd(t, d) ** d)
    if not kept:
        return Composed(_trivial_no((h,)), {"t": 0}, {})
    s = _least_odd(len(kept), d)
    ck2 = math.comb(k, 2)
    pairs = list(itertools.combinations(range(k), 2))
    pair_idx = {pq: i for i, pq in enumerate(pairs)}
    b = _Builder()

    def selection(name: str, outer: list[list[int]]) -> None:
        inner = [b.block(f"{name}'", 2 * ck2 * d) for _ in range(s)]
        for j in range(s):
            b.join(inner[j], outer[j])
            for jj in range(j + 1, s):
                b.join(inner[j], inner[jj])

    Xs = []
    for i in range(d - 1):
        outer = [b.block(f"X{i + 1}", ck2) for _ in range(s)]
        selection(f"X{i + 1}", outer)
        Xs.append(outer)
    # possible cross-color edges, indexed once for every clique gadget
    possible = [(u, v) for p, q in pairs for u in range(p * n, (p + 1) * n) for v in range(q * n, (q + 1) * n)]
    pos = {e: i for i, e in enumerate(possible)}
    Ys, Ts = [], []
    for j in range(s):
        Tt = [b.block("Ttilde", k - 1) for _ in range(k)]
        Zv = [b.block("Zv", k - 1) for _ in range(k * n)]
        Zvp = [b.block("Zv'", k - 1) for _ in range(k * n)]
        Y = b.block("Y", len(possible))
        for v in range(k * n):
            b.join(Zv[v], Zvp[v])
            b.join(Tt[v // n], Zvp[v])
        for (u, v), y in zip(possible, Y):
            b.join(Zv[u], [y])
            b.join(Zv[v], [y])
        Ys.append(Y)
        Ts.append([x for part in Tt for x in part])
    selection("T", Ts)
    X = set(range(b.n))
    total = 0
    mh = a.meds
    for idx, inst in enumerate(kept):
        hv = []
        r = idx
        for _ in range(d):
            hv.append(r % s)
            r //= s
        for x, y in inst.cross_edges():
            copy = b.block("copies", h.n)
            for u, v in h.edges:
                b.edge(copy[u], copy[v])
            pq = tuple(sorted((inst.color(x), inst.color(y))))
            for i in range(d - 1):
                b.edge(copy[Bl[i]], Xs[i][hv[i]][pair_idx[pq]])
            b.edge(copy[Bl[d - 1]], Ys[hv[d - 1]][pos[_norm(x, y)]])
            total += 1
    kp = d * 2 * ck2 * d * (s - 1) // 2 + s * k * n * (k - 1) + total * mh + ck2 * a.cost(Bm)
    out = ModInstance(b.graph(), kp, frozenset(X), (h,))
    formulas = {
        "t": len(kept),
        "s": s,
        "d": d,
        "modulator_formula": (d - 1) * s * ck2 * (1 + 2 * d)
        + s * ((k + 2 * k * n) * (k - 1) + ck2 * n * n)
        + s * 2 * ck2 * d,
        "k_formula": kp,
        "components_formula": total,
    }
    return Composed(out, formulas, b.names)


# ------------------------------------------------------- plain reductions

@dataclasses.dataclass(frozen=True)
class SatGadget:
    graph: Graph
    matching: tuple[Edge, ...]
    target: int
    literal: dict


def sat_to_eds(f: CnfFormula) -> SatGadget:
    """Graph with a perfect matching of size 2n+4m and an EDS of size n+2m iff ``f`` is satisfiable."""
    b = _Builder()
    lit = {}
    M = []
    for v in range(f.n):
        x, xb, c, dd = b.block(f"var{v}", 4)
        b.edge(x, xb)
        b.edge(x, c)
        b.edge(xb, c)
        b.edge(c, dd)
        lit[(v, True)], lit[(v, False)] = x, xb
        M += [_norm(x, xb), _norm(c, dd)]
    for j, clause in enumerate(f.clauses):
        a1, a2, a3, b1, b2, b3, s, t = b.block(f"clause{j}", 8)
        A, Bs = (a1, a2, a3), (b1, b2, b3)
        for p, q in itertools.combinations(A, 2):
            b.edge(p, q)
        for ai, bi in zip(A, Bs):
            b.edge(ai, bi)
            b.edge(t, bi)
            M.append(_norm(ai, bi))
        b.edge(t, s)
        M.append(_norm(s, t))
        for ai, l in zip(A, clause):
            b.edge(ai, lit[l])
    return SatGadget(b.graph(), tuple(sorted(M)), f.n + 2 * f.m, lit)


def vc_to_eds(g: Graph, k: int) -> tuple[Graph, int]:
    """Vertex cover of size k in ``g`` iff edge dominating set of size k in the output."""
    if not 0 <= k <= g.n:
        raise ValueError(f"k={k} must lie in 0..{g.n}")
    b = _Builder()
    V = b.block("V", g.n)
    for u, v in g.edges:
        b.edge(V[u], V[v])
    for _ in range(k):
        u, up = b.block("U", 2)
        b.edge(u, up)
        b.join([u], V)
    return b.graph(), k


# ------------------------------------------------------------- random inputs

def gen_random_instance(
    family: Sequence[Graph],
    x_size: int,
    n_components: int,
    density: float,
    seed: int,
    x_density: float = 0.3,
    attach: dict[int, Sequence[int]] | None = None,
) -> ModInstance:
    """Seeded random modulator instance.

    Vertices ``0..x_size-1`` form the modulator. Each component is a uniform
    pick from ``family``; each modulator-component pair is joined with
    probability ``density``, restricted to ``attach[i]`` for member ``i`` when
    given. ``k`` is MEDS(G - X) plus a uniform draw from ``0..x_size``.
    """
    if not 0.0 <= density <= 1.0 or not 0.0 <= x_density <= 1.0:
        raise ValueError(f"densities must lie in [0, 1], got {density} and {x_density}")
    if not family:
        raise ValueError("empty family")
    r = random.Random(seed)
    edges = [(i, j) for i in range(x_size) for j in range(i + 1, x_size) if r.random() < x_density]
    n = x_size
    base = 0
    meds_of = {}
    for _ in range(n_components):
        idx = r.randrange(len(family))
        h = family[idx]
        for u, v in h.edges:
            edges.append((n + u, n + v))
        targets = attach[idx] if attach and idx in attach else range(h.n)
        for v in targets:
            for x in range(x_size):
                if r.random() < density:
                    edges.append((x, n + v))
        if idx not in meds_of:
            meds_of[idx] = meds(h).size
        base += meds_of[idx]
        n += h.n
    k = base + r.randint(0, x_size)
    return ModInstance(Graph(n, edges), k, frozenset(range(x_size)), tuple(family))


__all__ = [
    "CnfFormula",
    "Composed",
    "MccInstance",
    "SatGadget",
    "compose_control_pair",
    "compose_cost",
    "compose_p3",
    "gen_random_instance",
    "min_vertex_cover_brute",
    "sat_to_eds",
    "solve_3sat_brute",
    "solve_3sat_dpll",
    "solve_mcc_brute",
    "vc_to_eds",
]

