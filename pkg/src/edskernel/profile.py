"""Structural profile of a small connected component graph.

All quantities are computed from subset tables over the fixed host graph
(see :class:`exact.HostTable`); solution-dependent notions only look at the
vertex sets V(F) of minimum edge dominating sets, which is all they need.
"""

from __future__ import annotations

import dataclasses
import functools
from typing import Iterable

from . import config
from .exact import HostTable, mask_of, members
from .graph import Graph, canonical_form, is_connected

NO_POLY = "no-poly-kernel"
POLY = "poly-kernel"
QUADRATIC = "quadratic"


@dataclasses.dataclass(frozen=True)
class Verdict:
    tag: str
    item: str | None = None
    witness: tuple | None = None
    d: int = 0
    member: int | None = None

    def describe(self) -> str:
        if self.tag == NO_POLY:
            return f"{self.item}: witness {self.witness}"
        if self.tag == POLY:
            return f"poly kernel, d={self.d}"
        return "quadratic kernel"


@dataclasses.dataclass(frozen=True)
class ControlPair:
    C: frozenset[int]
    B: frozenset[int]
    strategy: str = ""


def _key(s: Iterable[int]) -> tuple:
    t = tuple(sorted(s))
    return (t, len(t))


class Analyzer:
    """Lazily computed profile of one connected host graph."""

    def __init__(self, h: Graph):
        if h.n == 0 or not is_connected(h):
            raise ValueError("profile needs a nonempty connected graph")
        config.check("profile", h.n, config.CAPS.enumeration)
        self.h = h
        self.t = HostTable(h)
        self.full = self.t.full
        self.meds = int(self.t.meds[self.full])

    # -- basic quantities

    def meds_without(self, Y: int) -> int:
        return self.t.meds_without(Y)

    def cost(self, Y: int) -> int:
        return bin(Y).count("1") + self.meds_without(Y) - self.meds

    @functools.cached_property
    def Q(self) -> int:
        return self.t.extendable_in(self.full)

    @functools.cached_property
    def covers(self) -> list[int]:
        return self.t.solution_covers(self.full)

    def covers_without(self, Y: int) -> list[int]:
        return self.t.solution_covers(self.full & ~Y)

    @functools.cached_property
    def U(self) -> int:
        union = 0
        for s in self.covers:
            union |= s
        return self.full & ~union

    def _free_ok(self, v: int, Y: int, sub: list[int]) -> bool:
        # every V(F) minus Y must sit inside some V(F') of H - v
        return all(any(a & ~Y & ~b == 0 for b in sub) for a in self.covers)

    def is_free(self, Y: int) -> bool:
        if Y & ~self.Q:
            return False
        return all(self._free_ok(v, Y, self._covers_minus(v)) for v in members(Y))

    @functools.lru_cache(maxsize=None)
    def _covers_minus(self, v: int) -> list[int]:
        return self.covers_without(1 << v)

    @functools.cached_property
    def W(self) -> int:
        # The condition for v is monotone in Y, so the union of all free
        # sets is the greatest fixpoint of dropping violators from Q.
        Y = self.Q
        changed = True
        while changed:
            changed = False
            for v in members(Y):
                if not self._free_ok(v, Y, self._covers_minus(v)):
                    Y &= ~(1 << v)
                    changed = True
        return Y

    def nbhd(self, S: int) -> int:
        out = 0
        for v in members(S):
            out |= self.h.nbr[v]
        return out & ~S

    # -- beneficial sets

    def is_beneficial(self, B: int) -> bool:
        if B == 0 or B & self.W:
            raise ValueError("beneficial sets are nonempty and avoid the free vertices")
        # monotonicity of MEDS under deletion: the maximal proper subsets suffice
        val = self.meds_without(B)
        return all(val < self.meds_without(B & ~(1 << v)) for v in members(B))

    @functools.lru_cache(maxsize=None)
    def _best_partition(self, S: int) -> int:
        """Minimum total cost over all partitions of ``S`` (trivial one included)."""
        if S == 0:
            return 0
        low = S & -S
        rest = S ^ low
        best = self.cost(S)
        sub = rest
        while True:
            A = low | sub
            if A != S:
                val = self.cost(A) + self._best_partition(S & ~A)
                if val < best:
                    best = val
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return best

    def nontrivial_partition_cost(self, B: int) -> int | None:
        """Minimum of sum cost(B_i) over partitions with at least two parts."""
        low = B & -B
        rest = B ^ low
        if rest == 0:
            return None
        best = None
        sub = (rest - 1) & rest
        while True:
            A = low | sub
            val = self.cost(A) + self._best_partition(B & ~A)
            if best is None or val < best:
                best = val
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return best

    def is_strongly_beneficial(self, B: int) -> bool:
        if not self.is_beneficial(B):
            raise ValueError("set is not beneficial")
        other = self.nontrivial_partition_cost(B)
        return other is None or self.cost(B) < other

    @functools.cached_property
    def strongly_beneficial(self) -> list[tuple[int, int]]:
        """(mask, cost) for each strongly beneficial set, in tie-break order."""
        avail = self.full & ~self.W
        out = []
        sub = avail
        while sub:
            if self.is_beneficial(sub) and self.is_strongly_beneficial(sub):
                out.append((sub, self.cost(sub)))
            sub = (sub - 1) & avail
        out.sort(key=lambda p: _key(members(p[0])))
        return out

    @property
    def d(self) -> int:
        return max((bin(b).count("1") for b, _ in self.strongly_beneficial), default=0)

    # -- classification

    @functools.cached_property
    def verdict(self) -> Verdict:
        Q, W, U = self.Q, self.W, self.U
        if Q & ~W:
            return Verdict(NO_POLY, "1a", (members(Q & ~W)[0],))
        for b, _ in self.strongly_beneficial:
            if b & U:
                return Verdict(NO_POLY, "1b", tuple(members(b)))
        nw = self.nbhd(W)
        rest = self.full & ~(W | nw | U)
        if rest:
            return Verdict(NO_POLY, "1c", (members(rest)[0],))
        for b, _ in self.strongly_beneficial:
            if b & ~nw:
                continue
            need = nw & ~b
            if not any(need & ~s == 0 for s in self.covers_without(b)):
                return Verdict(NO_POLY, "1d", tuple(members(b)))
        if self.strongly_beneficial:
            return Verdict(POLY, d=self.d)
        return Verdict(QUADRATIC)

    # -- control pairs

    def check_control_pair(self, C: int, B: int) -> bool:
        if C == 0 or C & (self.Q | B):
            return False
        if B & self.W or not self.is_beneficial(B) or not self.is_strongly_beneficial(B):
            return False
        T = self.full & ~B
        if C & self.t.extendable_in(T):
            return False
        if not any(C & ~s == 0 for s in self.covers):
            return False
        return not any(C & ~s == 0 for s in self.covers_without(B))

    def _item_candidates(self, item: str) -> list[tuple[int, int]]:
        Q, W, U = self.Q, self.W, self.U
        h = self.h
        out: list[tuple[int, int]] = []
        if item == "1a":
            for v in members(Q & ~W):
                for s in self.covers:
                    out.append((s & ~Q, 1 << v))
        elif item == "1b":
            for b, _ in self.strongly_beneficial:
                if b & U:
                    out.append((self.nbhd(b & U) & ~b, b))
        elif item == "1c":
            nw = self.nbhd(W)
            for v in members(self.full & ~(W | nw | U)):
                for x in h.adj[v]:
                    if any(s >> v & 1 and s >> x & 1 for s in self.covers):
                        out.append((h.nbr[v] & ~(1 << x), 1 << v | 1 << x))
        elif item == "1d":
            nw = self.nbhd(W)
            for b, _ in self.strongly_beneficial:
                if b & ~nw:
                    continue
                B = b
                C = nw & ~B
                while True:
                    hit = C & self.t.extendable_in(self.full & ~B)
                    if not hit:
                        break
                    c = hit & -hit
                    B |= c
                    C &= ~c
                out.append((C, B))
        return out

    def item_control_pair(self) -> ControlPair | None:
        """Control pair from the constructive argument matching the verdict item."""
        v = self.verdict
        if v.tag != NO_POLY:
            return None
        good = []
        for C, B in self._item_candidates(v.item):
            try:
                ok = self.check_control_pair(C, B)
            except ValueError:
                ok = False
            if ok:
                good.append((C, B))
        if not good:
            return None
        C, B = min(good, key=lambda p: (_key(members(p[1])), _key(members(p[0]))))
        return ControlPair(frozenset(members(C)), frozenset(members(B)), "item-" + v.item)

    def search_control_pair(self) -> ControlPair | None:
        """Exhaustive search over strongly beneficial B and candidate sets C."""
        for B, _ in self.strongly_beneficial:
            T = self.full & ~B
            allowed = self.full & ~(self.Q | B | self.t.extendable_in(T))
            tops = [s & allowed for s in self.covers]
            blocked = self.covers_without(B)
            verts = members(allowed)
            found: list[int] = []

            def dfs(i: int, C: int) -> bool:
                for j in range(i, len(verts)):
                    C2 = C | 1 << verts[j]
                    if not any(C2 & ~t == 0 for t in tops):
                        continue
                    if not any(C2 & ~s == 0 for s in blocked):
                        found.append(C2)
                        return True
                    if dfs(j + 1, C2):
                        return True
                return False

            if dfs(0, 0):
                return ControlPair(frozenset(members(found[0])), frozenset(members(B)), "search")
        return None

    def control_pair(self) -> ControlPair | None:
        if self.verdict.tag != NO_POLY:
            return None
        return self.item_control_pair() or self.search_control_pair()


# ---------------------------------------------------------------- public API

@dataclasses.dataclass(frozen=True)
class HProfile:
    host: Graph
    meds: int
    Q: frozenset[int]
    W: frozenset[int]
    U: frozenset[int]
    strongly_beneficial: tuple[tuple[frozenset[int], int], ...]
    d: int
    verdict: Verdict

    def to_json(self) -> dict:
        v = self.verdict
        return {
            "n": self.host.n,
            "m": self.host.m,
            "meds": self.meds,
            "Q": sorted(self.Q),
            "W": sorted(self.W),
            "U": sorted(self.U),
            "strongly_beneficial": [{"set": sorted(b), "cost": c} for b, c in self.strongly_beneficial],
            "d": self.d,
            "verdict": v.tag,
            "item": v.item,
            "witness": list(v.witness) if v.witness is not None else None,
        }


def _fs(mask: int) -> frozenset[int]:
    return frozenset(members(mask))


def analyze(h: Graph) -> HProfile:
    a = Analyzer(h)
    return HProfile(
        host=h,
        meds=a.meds,
        Q=_fs(a.Q),
        W=_fs(a.W),
        U=_fs(a.U),
        strongly_beneficial=tuple((_fs(b), c) for b, c in a.strongly_beneficial),
        d=a.d,
        verdict=a.verdict,
    )


def _degenerate(h: Graph) -> HProfile:
    # a single vertex: no edges, MEDS 0, the vertex is uncovered
    return HProfile(h, 0, frozenset(), frozenset(), frozenset({0}), (), 0, Verdict(QUADRATIC))


def profile(h: Graph) -> HProfile:
    if h.n == 1:
        return _degenerate(h)
    return analyze(h)


_CACHE: dict[tuple[int, int], HProfile] = {}


def profile_cached(h: Graph) -> tuple[HProfile, list[int]]:
    """Profile of the canonical relabeling of ``h`` plus the map ``h`` -> canonical ids.

    Sets in the profile are in canonical ids; they are isomorphism-invariant,
    so any isomorphism carries them over to ``h``.
    """
    key, order = canonical_form(h)
    pos = [0] * h.n
    for i, v in enumerate(order):
        pos[v] = i
    if key not in _CACHE:
        from .graph import relabel
        _CACHE[key] = profile(relabel(h, pos))
    return _CACHE[key], pos


def extendable(h: Graph) -> frozenset[int]:
    return profile(h).Q


def max_free_set(h: Graph) -> frozenset[int]:
    return profile(h).W


def uncovered(h: Graph) -> frozenset[int]:
    return profile(h).U


def cost(h: Graph, Y: Iterable[int]) -> int:
    Y = mask_of(Y)
    if Y == 0:
        return 0
    return Analyzer(h).cost(Y)


def is_beneficial(h: Graph, B: Iterable[int]) -> bool:
    return Analyzer(h).is_beneficial(mask_of(B))


def is_strongly_beneficial(h: Graph, B: Iterable[int]) -> bool:
    return Analyzer(h).is_strongly_beneficial(mask_of(B))


def strongly_beneficial_sets(h: Graph) -> list[tuple[frozenset[int], int]]:
    return list(profile(h).strongly_beneficial)


def classify_graph(h: Graph) -> Verdict:
    return profile(h).verdict


def classify_family(family: Iterable[Graph]) -> Verdict:
    """Verdict for a finite family; disconnected members are ignored."""
    d = 0
    for i, h in enumerate(family):
        if not is_connected(h):
            continue
        v = profile(h)
        if v.verdict.tag == NO_POLY:
            return dataclasses.replace(v.verdict, member=i)
        d = max(d, v.d)
    if d:
        return Verdict(POLY, d=d)
    return Verdict(QUADRATIC)


def find_control_pair(h: Graph) -> ControlPair | None:
    if h.n == 1:
        return None
    return Analyzer(h).control_pair()
