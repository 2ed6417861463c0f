"""Small-graph enumeration and the classification atlas."""

from __future__ import annotations

import dataclasses
from typing import Iterator

from .graph import Graph, canonical_form, relabel
from .profile import POLY, profile


def _canon(g: Graph) -> tuple[tuple[int, int], Graph]:
    key, order = canonical_form(g)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return key, relabel(g, pos)


def graphs_by_order(n_max: int, connected: bool = True) -> Iterator[list[Graph]]:
    """Yield, for n = 1..n_max, one canonical representative per isomorphism class.

    Graphs on n+1 vertices come from those on n vertices by adding a vertex
    with every possible neighborhood (nonempty when ``connected``). Every
    connected graph has a vertex whose removal keeps it connected, so this
    reaches all classes; duplicates are merged by canonical key.
    """
    level = {canonical_form(Graph(1))[0]: Graph(1)}
    if n_max >= 1:
        yield [level[k] for k in sorted(level)]
    for n in range(1, n_max):
        nxt: dict = {}
        for g in level.values():
            lo = 1 if connected else 0
            for S in range(lo, 1 << n):
                es = list(g.edges) + [(v, n) for v in range(n) if S >> v & 1]
                key, cg = _canon(Graph(n + 1, es))
                if key not in nxt:
                    nxt[key] = cg
        level = nxt
        yield [level[k] for k in sorted(level)]


@dataclasses.dataclass(frozen=True)
class AtlasRow:
    key: str
    n: int
    m: int
    edges: tuple[tuple[int, int], ...]
    meds: int
    q: int
    w: int
    u: int
    d: int
    verdict: str
    item: str | None

    def to_json(self) -> dict:
        return dataclasses.asdict(self) | {"edges": [list(e) for e in self.edges]}


def row_for(g: Graph) -> AtlasRow:
    p = profile(g)
    key, _ = canonical_form(g)
    return AtlasRow(
        key=f"{key[0]}:{key[1]:x}",
        n=g.n,
        m=g.m,
        edges=g.edges,
        meds=p.meds,
        q=len(p.Q),
        w=len(p.W),
        u=len(p.U),
        d=p.d,
        verdict=p.verdict.tag,
        item=p.verdict.item,
    )


def atlas(n_max: int = 6) -> list[AtlasRow]:
    if not 1 <= n_max <= 8:
        raise ValueError("atlas supports 1 <= n_max <= 8")
    rows = []
    for level in graphs_by_order(n_max):
        rows.extend(row_for(g) for g in level)
    return rows


def poly_exemplars(rows: list[AtlasRow]) -> list[AtlasRow]:
    return [r for r in rows if r.verdict == POLY]
