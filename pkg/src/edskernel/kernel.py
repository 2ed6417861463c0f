"""Kernelization for Edge Dominating Set parameterized by a component modulator.

Three algorithms: a linear kernel for the {P5} family, a quadratic kernel
for families without beneficial sets and a general one driven by strongly
beneficial sets of bounded size. Each is a fixed pipeline of deletions and
pendant additions recorded in a replayable trace.
"""

from __future__ import annotations

import dataclasses
import itertools
from typing import Iterable

from .graph import ComponentView, Edge, Graph, ModInstance, canonical_key, complete, path, validate_instance
from .matching import Bipartite, Deficient, max_matching, saturate_or_deficiency
from .profile import NO_POLY, POLY, QUADRATIC, HProfile, Verdict, classify_family, profile_cached


class NoPolyKernel(ValueError):
    def __init__(self, verdict: Verdict, family: tuple[Graph, ...]):
        member = family[verdict.member] if verdict.member is not None else None
        where = f"member {verdict.member} (n={member.n}, m={member.m})" if member is not None else "family"
        super().__init__(f"{verdict.item}: {where} certifies no polynomial kernel, witness {list(verdict.witness or ())}")
        self.verdict = verdict


class PreconditionError(ValueError):
    pass


@dataclasses.dataclass(frozen=True)
class RuleStep:
    rule: str
    removed: tuple[int, ...] = ()
    added: tuple[int, ...] = ()
    added_edges: tuple[Edge, ...] = ()
    k_delta: int = 0
    note: str = ""


@dataclasses.dataclass(frozen=True)
class KernelReport:
    algorithm: str
    original: ModInstance
    reduced: ModInstance | None
    trivial_yes: bool
    rule_trace: tuple[RuleStep, ...]
    size_before: tuple[int, int]
    size_after: tuple[int, int]
    budget_delta: int
    back: tuple[int, ...]
    stats: dict

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "trivial_yes": self.trivial_yes,
            "size_before": list(self.size_before),
            "size_after": list(self.size_after),
            "budget_delta": self.budget_delta,
            "k": self.original.k,
            "k_reduced": None if self.reduced is None else self.reduced.k,
            "rule_trace": [
                {
                    "rule": s.rule,
                    "removed": [v + 1 for v in s.removed],
                    "added": [v + 1 for v in s.added],
                    "added_edges": [[u + 1, v + 1] for u, v in s.added_edges],
                    "k_delta": s.k_delta,
                    "note": s.note,
                }
                for s in self.rule_trace
            ],
            "stats": self.stats,
        }


class _Work:
    """Mutable graph over the original ids plus fresh pendant ids."""

    def __init__(self, inst: ModInstance):
        self.alive = set(range(inst.graph.n))
        self.edges = set(inst.graph.edges)
        self.k = inst.k
        self.X = set(inst.X)
        self.next_id = inst.graph.n
        self.trace: list[RuleStep] = []

    def apply(self, step: RuleStep) -> None:
        gone = set(step.removed)
        self.alive -= gone
        self.X -= gone
        self.edges = {e for e in self.edges if e[0] not in gone and e[1] not in gone}
        for v in step.added:
            self.alive.add(v)
            self.next_id = max(self.next_id, v + 1)
        self.edges.update(step.added_edges)
        self.k += step.k_delta
        self.trace.append(step)

    def finish(self, original: ModInstance, family: tuple[Graph, ...]) -> tuple[ModInstance, tuple[int, ...]]:
        back = tuple(sorted(self.alive))
        fwd = {v: i for i, v in enumerate(back)}
        g = Graph(len(back), [(fwd[u], fwd[v]) for u, v in self.edges])
        return ModInstance(g, self.k, frozenset(fwd[x] for x in self.X), family), back


def replay(original: ModInstance, trace: Iterable[RuleStep], family: tuple[Graph, ...] | None = None) -> ModInstance:
    """Re-apply a rule trace to the original instance."""
    w = _Work(original)
    for step in trace:
        w.apply(step)
    fam = family if family is not None else _output_family(original.family, trace)
    return w.finish(original, fam)[0]


def _output_family(family: tuple[Graph, ...], trace: Iterable[RuleStep]) -> tuple[Graph, ...]:
    # pendants added by Rule 4 are single-vertex components
    if any(s.added for s in trace):
        k1 = complete(1)
        if not any(canonical_key(h) == canonical_key(k1) for h in family):
            return tuple(family) + (k1,)
    return tuple(family)


def _report(algorithm: str, inst: ModInstance, w: _Work, stats: dict) -> KernelReport:
    family = _output_family(inst.family, w.trace)
    reduced, back = w.finish(inst, family)
    return KernelReport(
        algorithm=algorithm,
        original=inst,
        reduced=reduced,
        trivial_yes=False,
        rule_trace=tuple(w.trace),
        size_before=(inst.graph.n, inst.graph.m),
        size_after=(reduced.graph.n, reduced.graph.m),
        budget_delta=inst.k - reduced.k,
        back=back,
        stats=stats,
    )


def _trivial(algorithm: str, inst: ModInstance, stats: dict) -> KernelReport:
    return KernelReport(
        algorithm=algorithm,
        original=inst,
        reduced=None,
        trivial_yes=True,
        rule_trace=(),
        size_before=(inst.graph.n, inst.graph.m),
        size_after=(inst.graph.n, inst.graph.m),
        budget_delta=0,
        back=tuple(range(inst.graph.n)),
        stats=stats,
    )


# ----------------------------------------------------------------- P5 kernel

def _p5_middle(cv: ComponentView) -> int:
    g = cv.local
    for v in range(g.n):
        if g.degree(v) == 2 and all(g.degree(w) == 2 for w in g.adj[v]):
            return cv.back[v]
    raise PreconditionError("component is not a P5")


def kernelize_p5(inst: ModInstance) -> KernelReport:
    p5 = path(5)
    if not inst.family:
        inst = dataclasses.replace(inst, family=(p5,))
    if len(inst.family) != 1 or canonical_key(inst.family[0]) != canonical_key(p5):
        raise PreconditionError("the P5 kernel needs the family {P5}")
    validate_instance(inst)
    g = inst.graph
    comps = inst.components()
    X = sorted(inst.X)
    edges = []
    for i, cv in enumerate(comps):
        mid = _p5_middle(cv)
        ends = [v for v in cv.vertices if v != mid]
        for x in X:
            if any(g.has_edge(x, v) for v in ends):
                edges.append((x, i))
    res = saturate_or_deficiency(Bipartite.build(X, range(len(comps)), edges))
    X2 = set(res.Y) if isinstance(res, Deficient) else set()
    X1 = [x for x in X if x not in X2]
    C2 = {i for x, i in edges if x in X2}
    C1 = [i for i in range(len(comps)) if i not in C2]
    w = _Work(inst)
    w.apply(RuleStep("rule1", removed=tuple(X1), note="delete modulator vertices matched into G_B"))
    removed = tuple(v for i in C1 for v in comps[i].vertices)
    w.apply(RuleStep("rule2", removed=removed, k_delta=-2 * len(C1), note=f"delete {len(C1)} P5 components"))
    stats = {
        "X1": len(X1),
        "X2": len(X2),
        "C1": len(C1),
        "C2": len(C2),
        "bound_vertices": 6 * len(X2),
    }
    return _report("p5", inst, w, stats)


# ------------------------------------------------------- basic/general kernel

@dataclasses.dataclass
class _Comp:
    view: ComponentView
    prof: HProfile
    W: frozenset[int]
    U: frozenset[int]
    sb: tuple[tuple[frozenset[int], int], ...]


def _profiles(inst: ModInstance) -> list[_Comp]:
    validate_instance(inst)
    out = []
    for cv in inst.components():
        prof, pos = profile_cached(cv.local)
        order = [0] * len(pos)
        for v, p in enumerate(pos):
            order[p] = v

        def lift(s: Iterable[int]) -> frozenset[int]:
            return frozenset(cv.back[order[c]] for c in s)

        out.append(_Comp(cv, prof, lift(prof.W), lift(prof.U), tuple((lift(b), c) for b, c in prof.strongly_beneficial)))
    return out


def _adjacent(g: Graph, x: int, S: Iterable[int]) -> bool:
    return any(g.has_edge(x, v) for v in S)


def _rules_3_and_4(inst: ModInstance, comps: list[_Comp], copies: int, w: _Work, stats: dict):
    g = inst.graph
    X = sorted(inst.X)
    nX = len(X)
    XW = [x for x in X if any(_adjacent(g, x, c.W) for c in comps)]
    CW = [i for i, c in enumerate(comps) if any(_adjacent(g, x, c.W) for x in XW)]
    edges = []
    for x in XW:
        for i in CW:
            if _adjacent(g, x, comps[i].W):
                edges.extend(((x, j), i) for j in range(copies))
    R = [(x, j) for x in XW for j in range(copies)]
    res = saturate_or_deficiency(Bipartite.build(R, CW, edges))
    if isinstance(res, Deficient):
        XWl = sorted({x for x, _ in res.Y})
    else:
        XWl = []
    XWh = [x for x in XW if x not in set(XWl)]
    CWl = {i for i in CW if any(_adjacent(g, x, comps[i].W) for x in XWl)}
    w.apply(RuleStep("rule3", removed=tuple(XWh), note="delete modulator vertices saturated in G_W"))

    rest = [x for x in X if x not in set(XWh)]
    count = {x: sum(1 for c in comps if _adjacent(g, x, c.U)) for x in rest}
    XU = [x for x in rest if count[x] > 0]
    # the threshold uses |X| of the input instance; the budget slack bound
    # k - MEDS(G - X) < |X| is what makes these vertices forced
    XUh = [x for x in XU if count[x] >= nX + 1]
    XUl = [x for x in XU if count[x] < nX + 1]
    CUl = {i for i, c in enumerate(comps) if any(_adjacent(g, x, c.U) for x in XUl)}
    added, added_edges = [], []
    for x in XUh:
        v = w.next_id + len(added)
        added.append(v)
        added_edges.append((x, v))
    w.apply(RuleStep("rule4", added=tuple(added), added_edges=tuple(added_edges), note="pendant on each forced modulator vertex"))
    stats.update(
        X=nX,
        X_W=len(XW),
        X_W_h=len(XWh),
        X_W_l=len(XWl),
        C_W_l=len(CWl),
        X_U=len(XU),
        X_U_h=len(XUh),
        X_U_l=len(XUl),
        C_U_l=len(CUl),
        C_S=len(added),
    )
    return rest, CWl, CUl


def _rule5(comps: list[_Comp], keep: set[int], w: _Work) -> None:
    drop = [i for i in range(len(comps)) if i not in keep]
    removed = tuple(v for i in drop for v in comps[i].view.vertices)
    delta = sum(comps[i].prof.meds for i in drop)
    w.apply(RuleStep("rule5", removed=removed, k_delta=-delta, note=f"delete {len(drop)} components"))


def _trivial_check(inst: ModInstance, comps: list[_Comp]) -> bool:
    return inst.k - sum(c.prof.meds for c in comps) >= len(inst.X)


def _check_family(inst: ModInstance, allowed: set[str]) -> Verdict:
    if not inst.family:
        raise PreconditionError("instance has no family")
    v = classify_family(inst.family)
    if v.tag == NO_POLY:
        raise NoPolyKernel(v, inst.family)
    if v.tag not in allowed:
        raise PreconditionError(f"family verdict {v.tag} does not fit this kernel")
    return v


def kernelize_basic(inst: ModInstance) -> KernelReport:
    _check_family(inst, {QUADRATIC})
    comps = _profiles(inst)
    stats: dict = {}
    if _trivial_check(inst, comps):
        return _trivial("basic", inst, stats)
    w = _Work(inst)
    rest, CWl, CUl = _rules_3_and_4(inst, comps, 1, w, stats)
    _rule5(comps, CWl | CUl, w)
    nX = stats["X"]
    stats["kept_components"] = len(CWl | CUl)
    stats["bound_components"] = stats["X_U_l"] * nX + stats["X_W_l"] + stats["X_U_h"]
    stats["bound_vertices"] = 2 * nX * nX + nX + stats["X_U_h"]
    return _report("basic", inst, w, stats)


def _perfect_matching(g: Graph, Y: tuple[int, ...], B: Iterable[int]) -> bool:
    B = tuple(sorted(B))
    edges = [(y, b) for y in Y for b in B if g.has_edge(y, b)]
    return len(max_matching(Bipartite.build(Y, B, edges))) == len(Y) == len(B)


def build_ga(g: Graph, X: Iterable[int], d: int, sb_by_comp: dict[int, Iterable[tuple[frozenset[int], int]]]) -> Bipartite:
    """Auxiliary graph pairing modulator subsets with components.

    Left vertices are ``("r", Y, beta)`` for ``Y`` a subset of ``X`` with
    ``2 <= |Y| <= d`` and ``1 <= beta < |Y|``; right vertices are component
    indices. ``Y`` and component ``i`` are joined at ``beta`` when ``i`` has a
    strongly beneficial set ``B`` with ``|B| = |Y|``, ``cost(B) = beta`` and a
    perfect matching between ``Y`` and ``B`` in ``g``.
    """
    X = sorted(X)
    R = []
    for size in range(2, d + 1):
        for Y in itertools.combinations(X, size):
            for beta in range(1, size):
                R.append(("r", Y, beta))
    edges = set()
    for i, sets in sb_by_comp.items():
        for B, c in sets:
            if len(B) < 2 or len(B) > d or not 1 <= c < len(B):
                continue
            Z = sorted(x for x in X if any(g.has_edge(x, b) for b in B))
            for Y in itertools.combinations(Z, len(B)):
                if _perfect_matching(g, Y, B):
                    edges.add((("r", Y, c), i))
    return Bipartite.build(R, sorted(sb_by_comp), sorted(edges, key=repr))


def kernelize_general(inst: ModInstance, d: int | None = None) -> KernelReport:
    v = _check_family(inst, {POLY, QUADRATIC})
    if d is None:
        d = v.d
    if d < v.d:
        raise PreconditionError(f"d={d} is below the family's largest strongly beneficial set ({v.d})")
    comps = _profiles(inst)
    stats: dict = {"d": d}
    if _trivial_check(inst, comps):
        return _trivial("general", inst, stats)
    w = _Work(inst)
    nX = len(inst.X)
    rest, CWl, CUl = _rules_3_and_4(inst, comps, nX, w, stats)
    CB = [i for i, c in enumerate(comps) if c.sb and i not in CWl and i not in CUl]
    ga = build_ga(inst.graph, rest, d, {i: comps[i].sb for i in CB})
    res = saturate_or_deficiency(ga)
    Z = set(res.Y) if isinstance(res, Deficient) else set()
    CBl = {s for r, s in ga.edges if r in Z}
    CBh = set(res.matching.values())
    _rule5(comps, CWl | CUl | CBl | CBh, w)
    stats.update(C_B=len(CB), R=len(ga.R), C_B_l=len(CBl), C_B_h=len(CBh), kept_components=len(CWl | CUl | CBl | CBh))
    stats["bound_components"] = nX * stats["X_W_l"] + nX * stats["X_U_l"] + stats["X_U_h"] + len(ga.R)
    biggest = max((h.n for h in inst.family), default=0)
    stats["bound_vertices"] = nX + stats["X_U_h"] + biggest * stats["bound_components"]
    return _report("general", inst, w, stats)


def kernelize(inst: ModInstance, prefer_p5: bool = True, general: bool = False) -> KernelReport:
    """Pick the kernel that fits the instance's family."""
    if not inst.family:
        raise PreconditionError("instance has no family")
    v = classify_family(inst.family)
    if v.tag == NO_POLY:
        raise NoPolyKernel(v, inst.family)
    p5 = canonical_key(path(5))
    only_p5 = all(canonical_key(h) == p5 for h in inst.family)
    if only_p5 and prefer_p5 and not general:
        return kernelize_p5(inst)
    if v.tag == POLY or general:
        return kernelize_general(inst, max(v.d, 2) if v.tag == POLY else 2)
    return kernelize_basic(inst)


def reduced_answer_inputs(report: KernelReport) -> tuple[Graph, int] | None:
    if report.reduced is None:
        return None
    return report.reduced.graph, report.reduced.k


__all__ = [
    "KernelReport",
    "NoPolyKernel",
    "PreconditionError",
    "RuleStep",
    "build_ga",
    "kernelize",
    "kernelize_basic",
    "kernelize_general",
    "kernelize_p5",
    "replay",
]

