"""Simple undirected graphs, modulator instances and the text file format."""

from __future__ import annotations

import dataclasses
from typing import Iterable, Sequence

from . import config

Edge = tuple[int, int]


def _norm(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``nbr[v]`` is the neighborhood of ``v`` as an int bitmask; ``adj[v]`` is
    the same neighborhood as a sorted tuple.
    """

    __slots__ = ("n", "edges", "adj", "nbr", "_hash")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = ()):
        if n < 0:
            raise ValueError("negative vertex count")
        es = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            es.add(_norm(u, v))
        lists: list[list[int]] = [[] for _ in range(n)]
        masks = [0] * n
        for u, v in es:
            lists[u].append(v)
            lists[v].append(u)
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        self.n = n
        self.edges: tuple[Edge, ...] = tuple(sorted(es))
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in lists)
        self.nbr: tuple[int, ...] = tuple(masks)
        self._hash = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.nbr[u] >> v & 1)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def closed_nbhd(self, vs: Iterable[int]) -> set[int]:
        out = set()
        for v in vs:
            out.add(v)
            out.update(self.adj[v])
        return out

    def open_nbhd(self, vs: Iterable[int]) -> set[int]:
        vs = set(vs)
        return self.closed_nbhd(vs) - vs

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.n, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


def induced(g: Graph, vertices: Iterable[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``vertices``, relabeled in ascending order.

    Returns the subgraph and the back-map (new id -> old id).
    """
    back = sorted(set(vertices))
    fwd = {v: i for i, v in enumerate(back)}
    es = [(fwd[u], fwd[v]) for u, v in g.edges if u in fwd and v in fwd]
    return Graph(len(back), es), back


def delete_vertices(g: Graph, S: Iterable[int]) -> tuple[Graph, dict[int, int]]:
    """``g - S`` with the survivors relabeled densely; also returns old->new."""
    S = set(S)
    bad = [v for v in S if not 0 <= v < g.n]
    if bad:
        raise ValueError(f"unknown vertex ids {sorted(bad)}")
    h, back = induced(g, (v for v in range(g.n) if v not in S))
    return h, {old: new for new, old in enumerate(back)}


def disjoint_union(*gs: Graph) -> Graph:
    es = []
    off = 0
    for h in gs:
        es.extend((u + off, v + off) for u, v in h.edges)
        off += h.n
    return Graph(off, es)


def relabel(g: Graph, perm: Sequence[int]) -> Graph:
    """Graph with vertex ``v`` renamed ``perm[v]``."""
    return Graph(g.n, [(perm[u], perm[v]) for u, v in g.edges])


def complement(g: Graph) -> Graph:
    return Graph(g.n, [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)])


@dataclasses.dataclass(frozen=True)
class ComponentView:
    vertices: tuple[int, ...]
    local: Graph
    back: tuple[int, ...]


def connected_components(g: Graph) -> list[ComponentView]:
    seen = [False] * g.n
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in g.adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        local, back = induced(g, comp)
        out.append(ComponentView(tuple(back), local, tuple(back)))
    return out


def is_connected(g: Graph) -> bool:
    return g.n > 0 and len(connected_components(g)) == 1


# ---------------------------------------------------------------- isomorphism

def _refine(g: Graph, cells: list[list[int]]) -> list[list[int]]:
    # colour refinement; cell order is derived only from invariant data
    while True:
        where = {}
        for i, c in enumerate(cells):
            for v in c:
                where[v] = i
        new: list[list[int]] = []
        for c in cells:
            if len(c) == 1:
                new.append(c)
                continue
            sig = {}
            for v in c:
                cnt = [0] * len(cells)
                for w in g.adj[v]:
                    cnt[where[w]] += 1
                sig[v] = tuple(cnt)
            groups: dict[tuple, list[int]] = {}
            for v in c:
                groups.setdefault(sig[v], []).append(v)
            for key in sorted(groups):
                new.append(groups[key])
        if len(new) == len(cells):
            return new
        cells = new


def _leaf_code(g: Graph, order: list[int]) -> int:
    pos = {v: i for i, v in enumerate(order)}
    n = g.n
    code = 0
    for u, v in g.edges:
        a, b = pos[u], pos[v]
        if a > b:
            a, b = b, a
        code |= 1 << (a * n + b)
    return code


def canonical_form(g: Graph) -> tuple[tuple[int, int], list[int]]:
    """Canonical key of ``g`` and a canonical vertex order.

    Individualization and refinement, with swaps of twin vertices pruned
    because they are automorphisms fixing the current partition. The key is
    ``(n, code)`` where ``code`` packs the upper adjacency triangle in the
    canonical order; ``order[i]`` is the vertex placed at position ``i``.
    """
    config.check("isomorphism", g.n, config.CAPS.max_component_size)
    if g.n == 0:
        return (0, 0), []
    degs: dict[int, list[int]] = {}
    for v in range(g.n):
        degs.setdefault(len(g.adj[v]), []).append(v)
    start = _refine(g, [degs[d] for d in sorted(degs)])
    best: list = [None, None]

    def twins(u: int, v: int) -> bool:
        bu = g.nbr[u] & ~(1 << v)
        bv = g.nbr[v] & ~(1 << u)
        return bu == bv

    def search(cells: list[list[int]]) -> None:
        target = None
        for i, c in enumerate(cells):
            if len(c) > 1 and (target is None or len(c) < len(cells[target])):
                target = i
        if target is None:
            order = [c[0] for c in cells]
            code = _leaf_code(g, order)
            if best[0] is None or code < best[0]:
                best[0], best[1] = code, order
            return
        cell = cells[target]
        tried: list[int] = []
        for v in cell:
            if any(twins(v, t) for t in tried):
                continue
            tried.append(v)
            rest = [w for w in cell if w != v]
            nxt = cells[:target] + [[v], rest] + cells[target + 1:]
            search(_refine(g, nxt))

    search(start)
    return (g.n, best[0]), best[1]


def canonical_key(g: Graph) -> tuple[int, int]:
    return canonical_form(g)[0]


def canonical_graph(g: Graph) -> Graph:
    _, order = canonical_form(g)
    pos = [0] * g.n
    for i, v in enumerate(order):
        pos[v] = i
    return relabel(g, pos)


def is_isomorphic(g1: Graph, g2: Graph) -> bool:
    if g1.n != g2.n or g1.m != g2.m:
        config.check("isomorphism", max(g1.n, g2.n), config.CAPS.max_component_size)
        return False
    return canonical_key(g1) == canonical_key(g2)


# ------------------------------------------------------------------ instances

@dataclasses.dataclass(frozen=True)
class ModInstance:
    """Graph ``graph``, budget ``k`` and modulator ``X``.

    ``family`` lists the allowed component graphs; empty means unchecked. A
    negative ``k`` is allowed and always denotes a no-instance (kernels may
    overdraw the budget).
    """

    graph: Graph
    k: int
    X: frozenset[int]
    family: tuple[Graph, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "X", frozenset(self.X))
        object.__setattr__(self, "family", tuple(self.family))
        bad = [x for x in self.X if not 0 <= x < self.graph.n]
        if bad:
            raise ValueError(f"modulator vertices out of range: {sorted(bad)}")

    def components(self) -> list[ComponentView]:
        """Components of ``graph - X`` with ids of ``graph``."""
        rest = [v for v in range(self.graph.n) if v not in self.X]
        sub, back = induced(self.graph, rest)
        out = []
        for cv in connected_components(sub):
            orig = tuple(back[i] for i in cv.vertices)
            out.append(ComponentView(orig, cv.local, orig))
        return out


class FamilyMismatch(ValueError):
    def __init__(self, index: int, vertices: Sequence[int]):
        super().__init__(f"component {index} on vertices {list(vertices)} matches no family member")
        self.index = index
        self.vertices = tuple(vertices)


def validate_instance(inst: ModInstance) -> list[int]:
    """Index of the matching family member for each component of ``G - X``."""
    if not inst.family:
        raise ValueError("instance has no family to validate against")
    keys = {}
    for i, h in enumerate(inst.family):
        keys.setdefault(canonical_key(h), i)
    out = []
    for ci, cv in enumerate(inst.components()):
        key = canonical_key(cv.local)
        if key not in keys:
            raise FamilyMismatch(ci, cv.vertices)
        out.append(keys[key])
    return out


# ---------------------------------------------------------------- file format

class GraphFormatError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


def _parse(text: str | bytes, instance: bool):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = m = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    witness: list[Edge] = []
    k = None
    X: list[int] | None = None
    header_line = 0
    for no, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise GraphFormatError(no, "second header")
            if len(parts) != 4 or parts[1] != "eds":
                raise GraphFormatError(no, "malformed header, expected 'p eds <n> <m>'")
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise GraphFormatError(no, "malformed header counts") from None
            if n < 0 or m < 0:
                raise GraphFormatError(no, "negative header counts")
            header_line = no
            continue
        if n is None:
            raise GraphFormatError(no, "data before header")
        if tag in ("e", "f"):
            if len(parts) != 3:
                raise GraphFormatError(no, f"malformed '{tag}' line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise GraphFormatError(no, "non-integer vertex id") from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise GraphFormatError(no, f"vertex id out of range 1..{n}")
            if u == v:
                raise GraphFormatError(no, f"self-loop at {u}")
            e = _norm(u - 1, v - 1)
            if tag == "e":
                if e in seen:
                    raise GraphFormatError(no, f"duplicate edge {u} {v}")
                seen.add(e)
                edges.append(e)
            else:
                witness.append(e)
        elif tag == "k" and instance:
            if len(parts) != 2 or k is not None:
                raise GraphFormatError(no, "malformed or repeated 'k' line")
            try:
                k = int(parts[1])
            except ValueError:
                raise GraphFormatError(no, "non-integer budget") from None
        elif tag == "x" and instance:
            if X is not None:
                raise GraphFormatError(no, "repeated 'x' line")
            try:
                ids = [int(p) for p in parts[1:]]
            except ValueError:
                raise GraphFormatError(no, "non-integer modulator id") from None
            for i in ids:
                if not 1 <= i <= n:
                    raise GraphFormatError(no, f"modulator id {i} out of range")
            X = [i - 1 for i in ids]
        else:
            raise GraphFormatError(no, f"unknown line type '{tag}'")
    if n is None:
        raise GraphFormatError(0, "missing header")
    if len(edges) != m:
        raise GraphFormatError(header_line, f"header announces {m} edges, found {len(edges)}")
    g = Graph(n, edges)
    if not instance:
        return g
    if k is None:
        raise GraphFormatError(0, "instance file lacks a 'k' line")
    return g, k, (X or []), witness


def parse_graph(text: str | bytes) -> Graph:
    return _parse(text, instance=False)


def parse_instance(text: str | bytes) -> tuple[ModInstance, list[Edge]]:
    """Parse an instance file. Returns the instance and any ``f`` witness edges."""
    g, k, X, witness = _parse(text, instance=True)
    return ModInstance(g, k, frozenset(X)), witness


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend("# " + c for c in comment.splitlines())
    lines.append(f"p eds {g.n} {g.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.edges)
    return "\n".join(lines) + "\n"


def format_instance(inst: ModInstance, witness: Iterable[Edge] = (), comment: str | None = None) -> str:
    out = format_graph(inst.graph, comment)
    out += f"k {inst.k}\n"
    out += "x" + "".join(f" {x + 1}" for x in sorted(inst.X)) + "\n"
    for u, v in sorted(_norm(a, b) for a, b in witness):
        out += f"f {u + 1} {v + 1}\n"
    return out


# -------------------------------------------------------------- named graphs

def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def e_graph() -> Graph:
    """Path v1..v5 with an extra vertex attached to v3 (vertex 5)."""
    return Graph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 5)])


FIG2_NAMES = "abcdefghijkl"


def fig2() -> Graph:
    """Twelve-vertex component with MEDS 4 used as the worked profile example."""
    idx = {c: i for i, c in enumerate(FIG2_NAMES)}
    pairs = ["ab", "af", "fk", "kl", "ef", "fg", "gh", "hi", "ij", "ch", "ci", "di", "dj"]
    return Graph(12, [(idx[p[0]], idx[p[1]]) for p in pairs])


def fig2_ids(names: str) -> frozenset[int]:
    return frozenset(FIG2_NAMES.index(c) for c in names)


NAMED = {
    "K1": lambda: complete(1),
    "P2": lambda: path(2),
    "P3": lambda: path(3),
    "P4": lambda: path(4),
    "P5": lambda: path(5),
    "K3": lambda: complete(3),
    "K4": lambda: complete(4),
    "K5": lambda: complete(5),
    "E": e_graph,
    "FIG2": fig2,
}
