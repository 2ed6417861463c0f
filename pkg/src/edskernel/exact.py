"""Exact edge dominating set routines.

Everything here is exponential and guarded by the caps in :mod:`config`.
"""

from __future__ import annotations

import dataclasses
from typing import Iterable

import networkx as nx
import numpy as np

from . import config
from .graph import Edge, Graph, connected_components, _norm


@dataclasses.dataclass(frozen=True)
class MedsWitness:
    size: int
    witness: tuple[Edge, ...]


def _cover(F: Iterable[Edge]) -> int:
    mask = 0
    for u, v in F:
        mask |= 1 << u | 1 << v
    return mask


def is_eds(g: Graph, F: Iterable[Edge]) -> bool:
    F = [_norm(u, v) for u, v in F]
    es = set(g.edges)
    for e in F:
        if e not in es:
            raise ValueError(f"{e} is not an edge of the graph")
    c = _cover(F)
    return all(c >> u & 1 or c >> v & 1 for u, v in g.edges)


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _greedy_matching(nbr: tuple[int, ...], free: int) -> list[Edge]:
    """Maximal matching among edges with both ends in ``free``.

    Low-degree vertices are matched first, which usually gets close to a
    maximum matching on the small graphs we see.
    """
    out = []
    verts = []
    x = free
    while x:
        low = x & -x
        v = low.bit_length() - 1
        x ^= low
        if nbr[v] & free:
            verts.append(v)
    verts.sort(key=lambda v: _popcount(nbr[v] & free))
    for v in verts:
        if not free >> v & 1:
            continue
        cand = nbr[v] & free
        if not cand:
            continue
        best, bd = -1, 1 << 30
        while cand:
            low = cand & -cand
            w = low.bit_length() - 1
            cand ^= low
            d = _popcount(nbr[w] & free)
            if d < bd:
                best, bd = w, d
        out.append(_norm(v, best))
        free &= ~(1 << v | 1 << best)
    return out


def _meds_connected(g: Graph, upper: int | None = None) -> MedsWitness:
    nbr = g.nbr
    n = g.n
    full = (1 << n) - 1
    if g.m == 0:
        return MedsWitness(0, ())
    # any maximal matching is an edge dominating set
    init = _greedy_matching(nbr, full)
    best = [len(init), tuple(init)]
    if upper is not None and upper < best[0]:
        best = [upper + 1, None]

    def rec(covered: int, chosen: list[Edge]) -> None:
        free = full & ~covered
        pick = None
        pscore = -1
        x = free
        while x:
            low = x & -x
            u = low.bit_length() - 1
            x ^= low
            nb = nbr[u] & free
            while nb:
                lw = nb & -nb
                w = lw.bit_length() - 1
                nb ^= lw
                if w < u:
                    continue
                s = len(g.adj[u]) + len(g.adj[w])
                if s > pscore:
                    pick, pscore = (u, w), s
        if pick is None:
            if len(chosen) < best[0]:
                best[0], best[1] = len(chosen), tuple(sorted(chosen))
            return
        lb = (len(_greedy_matching(nbr, free)) + 1) // 2
        if len(chosen) + lb >= best[0]:
            return
        u, w = pick
        cands = []
        seen = set()
        for a in (u, w):
            for b in g.adj[a]:
                e = _norm(a, b)
                if e not in seen:
                    seen.add(e)
                    gain = _popcount((1 << e[0] | 1 << e[1]) & free)
                    gain += _popcount(nbr[e[0]] & free) + _popcount(nbr[e[1]] & free)
                    cands.append((-gain, e))
        cands.sort()
        for _, e in cands:
            chosen.append(e)
            rec(covered | 1 << e[0] | 1 << e[1], chosen)
            chosen.pop()
            if len(chosen) + lb >= best[0]:
                return

    rec(0, [])
    if best[1] is None:
        return MedsWitness(best[0], ())
    return MedsWitness(best[0], best[1])


def _meds_by_covers(g: Graph) -> MedsWitness:
    """MEDS as the minimum of ``|S| - nu(G[S])`` over minimal vertex covers ``S``.

    Every edge dominating set covers some minimal vertex cover ``S``, and
    covering ``S`` takes exactly ``|S| - nu(G[S])`` edges when ``G`` has no
    isolated vertex. Minimal covers are complements of maximal independent
    sets, which are few on the graphs we meet.
    """
    if g.m == 0:
        return MedsWitness(0, ())
    G = nx.Graph()
    G.add_nodes_from(range(g.n))
    G.add_edges_from(g.edges)
    best: tuple[int, tuple[Edge, ...]] | None = None
    for I in nx.find_cliques(nx.complement(G)):
        S = set(range(g.n)) - set(I)
        M = nx.max_weight_matching(G.subgraph(S), maxcardinality=True)
        size = len(S) - len(M)
        if best is not None and size >= best[0]:
            continue
        F = {_norm(u, v) for u, v in M}
        hit = {v for e in F for v in e}
        for v in sorted(S - hit):
            F.add(_norm(v, g.adj[v][0]))
        best = (size, tuple(sorted(F)))
    return MedsWitness(*best)


def _solve(g: Graph, upper: int | None = None) -> MedsWitness:
    # branch and bound is quick on small or sparse components; the cover
    # formulation is steady on larger dense ones
    if g.n <= 12:
        return _meds_connected(g, upper)
    return _meds_by_covers(g)


def meds(g: Graph) -> MedsWitness:
    """Minimum edge dominating set, solved per component."""
    comps = connected_components(g)
    cap = config.CAPS.exact
    if g.n > cap:
        for cv in comps:
            config.check("exact solver component", cv.local.n, cap)
    total = 0
    wit: list[Edge] = []
    for cv in comps:
        r = _solve(cv.local)
        total += r.size
        wit.extend(_norm(cv.back[u], cv.back[v]) for u, v in r.witness)
    return MedsWitness(total, tuple(sorted(wit)))


def decide_eds(g: Graph, k: int) -> tuple[bool, tuple[Edge, ...] | None]:
    """Is there an edge dominating set of size at most ``k``? Witness when yes."""
    config.check("decision oracle", g.n, config.CAPS.oracle)
    if k < 0:
        return False, None
    comps = [cv for cv in connected_components(g) if cv.local.m > 0]
    # cheap lower bounds let the search of each component use a tight budget
    lbs = [(len(_greedy_matching(cv.local.nbr, (1 << cv.local.n) - 1)) + 1) // 2 for cv in comps]
    if sum(lbs) > k:
        return False, None
    total_lb = sum(lbs)
    used = 0
    wit: list[Edge] = []
    for i, cv in enumerate(comps):
        room = k - used - (total_lb - lbs[i])
        total_lb -= lbs[i]
        r = _solve(cv.local, upper=room)
        if r.size > room:
            return False, None
        used += r.size
        wit.extend(_norm(cv.back[u], cv.back[v]) for u, v in r.witness)
    return True, tuple(sorted(wit))


def enumerate_min_eds(g: Graph) -> list[tuple[Edge, ...]]:
    """All minimum edge dominating sets, each a sorted edge tuple, in lexicographic order."""
    config.check("enumeration", g.n, config.CAPS.enumeration)
    if g.m == 0:
        return [()]
    size = meds(g).size
    edges = g.edges
    m = len(edges)
    index = {e: i for i, e in enumerate(edges)}
    # for each edge, the largest index of an edge that dominates it
    last_dom = []
    for u, v in edges:
        top = 0
        for a in (u, v):
            for b in g.adj[a]:
                top = max(top, index[_norm(a, b)])
        last_dom.append(top)
    out: list[tuple[Edge, ...]] = []

    def rec(start: int, covered: int, chosen: list[int]) -> None:
        r = size - len(chosen)
        first = -1
        for i, (u, v) in enumerate(edges):
            if not (covered >> u & 1 or covered >> v & 1):
                first = i
                break
        if first < 0:
            if r == 0:
                out.append(tuple(edges[i] for i in chosen))
            return
        if r == 0 or last_dom[first] < start:
            return
        free = ((1 << g.n) - 1) & ~covered
        if (len(_greedy_matching(g.nbr, free)) + 1) // 2 > r:
            return
        # the next chosen index cannot exceed the last dominator of ``first``
        for j in range(start, last_dom[first] + 1):
            a, b = edges[j]
            chosen.append(j)
            rec(j + 1, covered | 1 << a | 1 << b, chosen)
            chosen.pop()

    rec(0, 0, [])
    out.sort()
    return out


def max_matching_size(g: Graph) -> int:
    """Maximum matching size by exhaustive DP over vertex subsets (small graphs)."""
    return int(HostTable(g).nu[(1 << g.n) - 1])


class HostTable:
    """Per-host tables indexed by vertex subsets of a fixed graph ``H``.

    ``nu[S]``   maximum matching of ``H[S]``
    ``indep[S]`` whether ``S`` is independent
    ``noiso[S]`` whether ``H[S]`` has no isolated vertex
    ``meds[T]`` MEDS of ``H[T]``

    MEDS uses the identity MEDS(G) = min over vertex covers S of
    ``|S| - nu(G[S])``: an edge set covering exactly ``S`` needs that many
    edges, and any vertex cover covered by edges is dominating.
    """

    def __init__(self, h: Graph):
        config.check("subset table", h.n, config.CAPS.enumeration)
        self.h = h
        n = h.n
        size = 1 << n
        self.full = size - 1
        nbr = h.nbr
        nu = [0] * size
        indep = [True] * size
        for S in range(1, size):
            low = S & -S
            v = low.bit_length() - 1
            rest = S ^ low
            best = nu[rest]
            cand = nbr[v] & rest
            indep[S] = indep[rest] and not cand
            while cand:
                lw = cand & -cand
                cand ^= lw
                val = 1 + nu[rest ^ lw]
                if val > best:
                    best = val
            nu[S] = best
        masks = np.arange(size, dtype=np.int64)
        pop = np.zeros(size, dtype=np.int64)
        noiso = np.ones(size, dtype=bool)
        for v in range(n):
            has = (masks >> v) & 1
            pop += has
            noiso &= (has == 0) | ((masks & nbr[v]) != 0)
        self.nu = np.array(nu, dtype=np.int64)
        self.indep = np.array(indep, dtype=bool)
        self.noiso = noiso
        self.pop = pop
        f = pop - self.nu
        self.f = f
        big = np.int64(1 << 30)
        best = np.full(size, big, dtype=np.int64)
        for I in np.nonzero(self.indep)[0]:
            I = int(I)
            sub = submasks(self.full & ~I)
            idx = sub | I
            cur = best[idx]
            best[idx] = np.minimum(cur, f[sub])
        self.meds = best

    def meds_without(self, Y: int) -> int:
        return int(self.meds[self.full & ~Y])

    def extendable_in(self, T: int) -> int:
        """Bitmask of vertices ``v`` of ``H[T]`` with MEDS(H[T]-v) = MEDS(H[T]) - 1."""
        base = int(self.meds[T])
        out = 0
        x = T
        while x:
            low = x & -x
            x ^= low
            if int(self.meds[T ^ low]) == base - 1:
                out |= low
        return out

    def solution_covers(self, T: int) -> list[int]:
        """Distinct vertex sets V(F) over all minimum EDS F of ``H[T]``.

        A set S qualifies iff it is a vertex cover of H[T], H[S] has no
        isolated vertex, and ``|S| - nu(H[S])`` equals MEDS(H[T]).
        """
        sub = submasks(T)
        ok = self.indep[T & ~sub] & self.noiso[sub] & (self.f[sub] == self.meds[T])
        return sorted(int(s) for s in sub[ok])


def submasks(M: int) -> np.ndarray:
    arr = np.zeros(1, dtype=np.int64)
    x = M
    while x:
        low = x & -x
        x ^= low
        arr = np.concatenate([arr, arr | low])
    return arr


def mask_of(vs: Iterable[int]) -> int:
    out = 0
    for v in vs:
        out |= 1 << v
    return out


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out
