"""Hopcroft-Karp matching and the saturate-or-Hall-violator split used by the kernels."""

from __future__ import annotations

import dataclasses
from collections import deque
from typing import Hashable, Iterable, Sequence


@dataclasses.dataclass(frozen=True)
class Bipartite:
    R: tuple[Hashable, ...]
    S: tuple[Hashable, ...]
    edges: tuple[tuple[Hashable, Hashable], ...]

    @staticmethod
    def build(R: Iterable[Hashable], S: Iterable[Hashable], edges: Iterable[tuple[Hashable, Hashable]]) -> "Bipartite":
        R, S = tuple(R), tuple(S)
        rs, ss = set(R), set(S)
        seen = []
        dup = set()
        for r, s in edges:
            if r not in rs or s not in ss:
                raise ValueError(f"edge ({r!r}, {s!r}) references an unknown vertex")
            if (r, s) in dup:
                continue
            dup.add((r, s))
            seen.append((r, s))
        return Bipartite(R, S, tuple(seen))

    def adjacency(self) -> list[list[int]]:
        ri = {r: i for i, r in enumerate(self.R)}
        si = {s: i for i, s in enumerate(self.S)}
        adj: list[list[int]] = [[] for _ in self.R]
        for r, s in self.edges:
            adj[ri[r]].append(si[s])
        for a in adj:
            a.sort()
        return adj


def _hopcroft_karp(adj: Sequence[Sequence[int]], n_right: int) -> tuple[list[int], list[int]]:
    n_left = len(adj)
    INF = 1 << 30
    pair_l = [-1] * n_left
    pair_r = [-1] * n_right
    dist = [0] * n_left

    def bfs() -> bool:
        q = deque()
        for u in range(n_left):
            if pair_l[u] < 0:
                dist[u] = 0
                q.append(u)
            else:
                dist[u] = INF
        found = False
        while q:
            u = q.popleft()
            for v in adj[u]:
                w = pair_r[v]
                if w < 0:
                    found = True
                elif dist[w] == INF:
                    dist[w] = dist[u] + 1
                    q.append(w)
        return found

    def dfs(u: int) -> bool:
        # iterative to stay clear of the recursion limit on long paths
        stack = [(u, iter(adj[u]))]
        path = []
        while stack:
            x, it = stack[-1]
            advanced = False
            for v in it:
                w = pair_r[v]
                if w < 0:
                    path.append((x, v))
                    for a, b in path:
                        pair_l[a] = b
                        pair_r[b] = a
                    return True
                if dist[w] == dist[x] + 1:
                    path.append((x, v))
                    stack.append((w, iter(adj[w])))
                    advanced = True
                    break
            if not advanced:
                dist[x] = INF
                stack.pop()
                if path:
                    path.pop()
        return False

    while bfs():
        for u in range(n_left):
            if pair_l[u] < 0:
                dfs(u)
    return pair_l, pair_r


def max_matching(b: Bipartite) -> dict[Hashable, Hashable]:
    """Maximum matching as a map from left vertices to right vertices."""
    pair_l, _ = _hopcroft_karp(b.adjacency(), len(b.S))
    return {b.R[i]: b.S[j] for i, j in enumerate(pair_l) if j >= 0}


@dataclasses.dataclass(frozen=True)
class Saturated:
    matching: dict


@dataclasses.dataclass(frozen=True)
class Deficient:
    Y: frozenset
    matching: dict


def saturate_or_deficiency(b: Bipartite) -> Saturated | Deficient:
    """Either a matching saturating ``R`` or a Hall violator ``Y``.

    ``Y`` is every left vertex reachable from an unmatched left vertex by an
    alternating path. The returned matching covers ``R - Y`` and never uses a
    right vertex in ``N(Y)``.
    """
    adj = b.adjacency()
    pair_l, pair_r = _hopcroft_karp(adj, len(b.S))
    if all(p >= 0 for p in pair_l):
        return Saturated({b.R[i]: b.S[j] for i, j in enumerate(pair_l)})
    seen_l = [False] * len(adj)
    q = deque()
    for u, p in enumerate(pair_l):
        if p < 0:
            seen_l[u] = True
            q.append(u)
    while q:
        u = q.popleft()
        for v in adj[u]:
            w = pair_r[v]
            # v is matched, otherwise the matching would not be maximum
            if w >= 0 and not seen_l[w]:
                seen_l[w] = True
                q.append(w)
    Y = frozenset(b.R[i] for i, s in enumerate(seen_l) if s)
    M = {b.R[i]: b.S[pair_l[i]] for i in range(len(adj)) if not seen_l[i]}
    return Deficient(Y, M)


def neighbors_of(b: Bipartite, Y: Iterable[Hashable]) -> set:
    Y = set(Y)
    return {s for r, s in b.edges if r in Y}
