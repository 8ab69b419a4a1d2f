"""Stallings core graphs of finitely generated subgroups of F_n.

A subgroup H = <w_1, ..., w_k> is represented by the folded, core-trimmed
labelled graph obtained from a bouquet of loops spelling the w_i at a base
vertex.  Words in H are exactly the labels of closed paths at the base.
Graphs are stored in canonical form: vertices are numbered in breadth-first
order from the base (base = 0), exploring outgoing edges by label and then
incoming edges by label, so two graphs are equal iff they represent the same
subgroup.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from typing import Sequence

from .errors import RankMismatch
from .words import Word, invert, reduce


@dataclass(frozen=True)
class StallingsGraph:
    vertices: int
    edges: tuple[tuple[int, int, int], ...]  # (source, target, label), label in 1..rank
    base: int
    rank: int

    def out_edges(self) -> dict[tuple[int, int], int]:
        """Map (vertex, signed letter) -> vertex; negative letters follow edges backwards."""
        nav: dict[tuple[int, int], int] = {}
        for s, t, label in self.edges:
            nav[(s, label)] = t
            nav[(t, -label)] = s
        return nav

    def is_finite_index(self) -> bool:
        """True when every vertex has all 2*rank incident labels (H has finite index)."""
        nav = self.out_edges()
        return all((v, x) in nav for v in range(self.vertices)
                   for x in list(range(1, self.rank + 1)) + list(range(-self.rank, 0)))

    def to_json(self) -> str:
        return json.dumps({"vertices": self.vertices, "base": self.base, "rank": self.rank,
                           "edges": [list(e) for e in self.edges]})

    @classmethod
    def from_json(cls, text: str) -> "StallingsGraph":
        d = json.loads(text)
        return cls(d["vertices"], tuple(tuple(e) for e in d["edges"]), d["base"], d["rank"])


class _UnionFind:
    def __init__(self):
        self.parent: list[int] = []

    def add(self) -> int:
        self.parent.append(len(self.parent))
        return len(self.parent) - 1

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _fold(edges: set, uf: _UnionFind) -> set:
    """Identify same-labelled edges at a vertex until the graph is deterministic."""
    while True:
        edges = {(uf.find(s), uf.find(t), label) for s, t, label in edges}
        seen: dict[tuple[int, int], int] = {}
        merged = False
        for s, t, label in sorted(edges):
            for key, other in (((s, label), t), ((t, -label), s)):
                prev = seen.setdefault(key, other)
                if uf.find(prev) != uf.find(other):
                    uf.union(prev, other)
                    merged = True
        if not merged:
            return edges


def _trim(edges: set, base: int) -> set:
    """Remove hanging trees not containing the base."""
    while True:
        degree: dict[int, int] = {}
        for s, t, _ in edges:
            degree[s] = degree.get(s, 0) + 1
            degree[t] = degree.get(t, 0) + 1
        leaves = {v for v, d in degree.items() if d == 1 and v != base}
        if not leaves:
            return edges
        edges = {e for e in edges if e[0] not in leaves and e[1] not in leaves}


def _canonical(edges: set, base: int, rank: int) -> StallingsGraph:
    nav: dict[tuple[int, int], int] = {}
    for s, t, label in edges:
        nav[(s, label)] = t
        nav[(t, -label)] = s
    order = list(range(1, rank + 1)) + list(range(-1, -rank - 1, -1))
    new = {base: 0}
    queue = deque([base])
    while queue:
        v = queue.popleft()
        for x in order:
            u = nav.get((v, x))
            if u is not None and u not in new:
                new[u] = len(new)
                queue.append(u)
    relabelled = tuple(sorted((new[s], new[t], label) for s, t, label in edges))
    return StallingsGraph(len(new), relabelled, 0, rank)


def build(T: Sequence[Word], rank: int | None = None) -> StallingsGraph:
    """Folded core graph of <T>.  The empty tuple gives the trivial subgroup."""
    ranks = {w.rank for w in T}
    if rank is not None:
        ranks.add(rank)
    if len(ranks) > 1:
        raise RankMismatch(f"words of different ranks: {sorted(ranks)}")
    if not ranks:
        raise RankMismatch("rank is required for an empty generating tuple")
    rank = ranks.pop()
    uf = _UnionFind()
    base = uf.add()
    edges: set = set()
    for w in T:
        if not w.letters:
            continue
        v = base
        for i, x in enumerate(w.letters):
            u = base if i == len(w.letters) - 1 else uf.add()
            edges.add((v, u, x) if x > 0 else (u, v, -x))
            v = u
    edges = _fold(edges, uf)
    base = uf.find(base)
    return _canonical(_trim(edges, base), base, rank)


def read(g: StallingsGraph, w: Word) -> int | None:
    """End vertex of the path at the base labelled by ``w``, or None if it falls off."""
    if w.rank != g.rank:
        raise RankMismatch(f"word of rank {w.rank} against graph of rank {g.rank}")
    nav = g.out_edges()
    v = g.base
    for x in w.letters:
        v = nav.get((v, x))
        if v is None:
            return None
    return v


def membership(g: StallingsGraph, w: Word) -> bool:
    return read(g, w) == g.base


def rank(g: StallingsGraph) -> int:
    """Free rank of the subgroup."""
    return len(g.edges) - g.vertices + 1


def basis(g: StallingsGraph) -> tuple[Word, ...]:
    """Free basis read off a breadth-first spanning tree; one word per non-tree edge."""
    nav = g.out_edges()
    order = list(range(1, g.rank + 1)) + list(range(-1, -g.rank - 1, -1))
    path: dict[int, tuple[int, ...]] = {g.base: ()}
    tree: set = set()
    queue = deque([g.base])
    while queue:
        v = queue.popleft()
        for x in order:
            u = nav.get((v, x))
            if u is not None and u not in path:
                path[u] = path[v] + (x,)
                tree.add((v, u, x) if x > 0 else (u, v, -x))
                queue.append(u)
    out = []
    for s, t, label in g.edges:
        if (s, t, label) in tree:
            continue
        back = invert(Word(path[t], g.rank)).letters
        out.append(reduce(path[s] + (label,) + back, g.rank))
    return tuple(out)


def is_basis(T: Sequence[Word]) -> bool:
    """True iff T freely generates <T> (rank of the core graph equals |T|)."""
    if not T:
        return True
    return rank(build(T)) == len(T)


def same_subgroup(T: Sequence[Word], U: Sequence[Word], rank_: int | None = None) -> bool:
    """<T> == <U>, decided by mutual membership."""
    gT, gU = build(T, rank_), build(U, rank_)
    return all(membership(gU, w) for w in T) and all(membership(gT, u) for u in U)
