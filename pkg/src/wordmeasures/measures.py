"""Exact measures induced by word tuples and subgroups on finite groups.

For a k-tuple T of words in F_n and a finite group G, the fingerprint of T on
G counts, for every k-tuple g in G^k, the homomorphisms F_n -> G sending T to
g.  Dividing by |G|^n gives the pushforward of the uniform measure on
Hom(F_n, G) = G^n; counts are kept as exact integers throughout.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import (EnumerationTooLarge, NoEpimorphisms, QuotientTooLarge, RankMismatch,
                     TupleArityMismatch)
from .groups import (DEFAULT_MAX_ORDER, FiniteGroup, Subgroup, all_subgroups, automorphism_search,
                     automorphisms, generated_closure)
from .stallings import basis as stallings_basis
from .stallings import build as stallings_build
from .words import Word, tuple_rank

DEFAULT_BUDGET = int(os.environ.get("WORDMEASURES_BUDGET", 10 ** 7))
DEFAULT_QUOTIENT_CAP = int(os.environ.get("WORDMEASURES_QUOTIENT_CAP", 10 ** 5))
# largest quotient whose Cayley table is materialised
QUOTIENT_TABLE_LIMIT = 4096
# largest quotient handed to the automorphism search in condition 5
DEFAULT_AUT_CAP = 256


@dataclass(frozen=True)
class Fingerprint:
    """Unnormalised pushforward measure: image tuple -> number of homomorphisms."""

    group: str
    order: int
    arity: int
    counts: dict = field(compare=True)
    total: int

    def __post_init__(self):
        items = sorted((tuple(int(x) for x in k), int(v)) for k, v in self.counts.items() if v)
        object.__setattr__(self, "counts", dict(items))

    def __getitem__(self, image) -> int:
        if isinstance(image, (int, np.integer)):
            image = (int(image),)
        return self.counts.get(tuple(image), 0)

    def probability(self, image) -> tuple[int, int]:
        """``(count, total)``; the probability is their ratio."""
        return self[image], self.total

    def support(self) -> frozenset:
        return frozenset(self.counts)

    def mass(self) -> int:
        return sum(self.counts.values())

    def map_keys(self, f) -> "Fingerprint":
        """Push keys through an elementwise map ``f`` (e.g. group inversion)."""
        new: dict = {}
        for k, v in self.counts.items():
            key = tuple(int(f[x]) for x in k)
            new[key] = new.get(key, 0) + v
        return Fingerprint(self.group, self.order, self.arity, new, self.total)

    def to_dict(self) -> dict:
        return {"group": self.group, "order": self.order, "arity": self.arity, "total": self.total,
                "counts": [{"image": list(k), "n": v} for k, v in self.counts.items()]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "Fingerprint":
        counts = {tuple(e["image"]): e["n"] for e in d["counts"]}
        return cls(d["group"], d["order"], d["arity"], counts, d["total"])

    @classmethod
    def from_json(cls, text: str) -> "Fingerprint":
        return cls.from_dict(json.loads(text))


def _rank_of(T: Sequence[Word], rank: int | None) -> int:
    if rank is not None:
        for w in T:
            if w.rank != rank:
                raise RankMismatch(f"word {w} has rank {w.rank}, expected {rank}")
        return rank
    return tuple_rank(T)


def _check_budget(G: FiniteGroup, rank: int, budget: int) -> None:
    if G.order ** rank > budget:
        raise EnumerationTooLarge(
            f"|{G.name}|^{rank} = {G.order ** rank} homomorphisms exceeds budget {budget}")


def evaluate(w: Word, hom: Sequence[int], G: FiniteGroup) -> int:
    """Value of the word map: the left-to-right product of the letter images."""
    if len(hom) != w.rank:
        raise RankMismatch(f"word of rank {w.rank} needs {w.rank} images, got {len(hom)}")
    for g in hom:
        G._check(g)
    acc = 0
    for x in w.letters:
        g = hom[x - 1] if x > 0 else G.inverse[hom[-x - 1]]
        acc = G.table[acc, g]
    return int(acc)


def _fingerprint(T, G, rank, onto, budget, backend) -> Fingerprint:
    _check_budget(G, rank, budget)
    codes, counts = _kernels.count_images(G.table, G.inverse, rank, [w.letters for w in T],
                                          onto=onto, backend=backend)
    k = len(T)
    table = {_kernels.decode(int(c), G.order, k): int(n) for c, n in zip(codes, counts)}
    total = G.order ** rank if not onto else int(counts.sum())
    return Fingerprint(G.name, G.order, k, table, total)


def hom_fingerprint(T: Sequence[Word], G: FiniteGroup, rank: int | None = None,
                    budget: int = DEFAULT_BUDGET, backend: str | None = None) -> Fingerprint:
    """Counts N_T(G; g) over all |G|^n homomorphisms; ``total`` is |G|^n."""
    rank = _rank_of(T, rank)
    return _fingerprint(T, G, rank, False, budget, backend)


def epi_fingerprint_direct(T: Sequence[Word], G: FiniteGroup, rank: int | None = None,
                           budget: int = DEFAULT_BUDGET, backend: str | None = None) -> Fingerprint:
    """Counts restricted to surjective homomorphisms; ``total`` is |Epi(F_n, G)|."""
    rank = _rank_of(T, rank)
    return _fingerprint(T, G, rank, True, budget, backend)


def _lift(fp: Fingerprint, H: Subgroup) -> dict:
    el = H.elements
    return {tuple(el[x] for x in k): v for k, v in fp.counts.items()}


def epi_fingerprint_recursive(T: Sequence[Word], G: FiniteGroup, rank: int | None = None,
                              max_order: int = DEFAULT_MAX_ORDER,
                              budget: int = DEFAULT_BUDGET) -> Fingerprint:
    """Epimorphism counts recovered from hom counts on the subgroup lattice.

    Hom_(T,g)(F_n, H) is the disjoint union of Epi_(T,g)(F_n, K) over the
    subgroups K <= H, so processing subgroups by increasing order gives
    ``epi_H = hom_H - sum(epi_K for K < H)``.
    """
    rank = _rank_of(T, rank)
    subs = all_subgroups(G, max_order=max_order)
    epi: dict[frozenset, dict] = {}
    for H in subs:
        counts = _lift(hom_fingerprint(T, H.as_group(), rank, budget), H)
        Hs = H.elementset
        for K in subs:
            Ks = K.elementset
            if len(Ks) >= len(Hs) or not Ks <= Hs:
                continue
            for key, v in epi[Ks].items():
                counts[key] -= v
        epi[Hs] = {k: v for k, v in counts.items() if v}
        assert all(v > 0 for v in epi[Hs].values())
    top = epi[frozenset(range(G.order))]
    return Fingerprint(G.name, G.order, len(T), top, sum(top.values()))


def epi_fingerprint_into(T: Sequence[Word], H: Subgroup, rank: int | None = None,
                         budget: int = DEFAULT_BUDGET) -> Fingerprint:
    """Epimorphisms F_n -> H (H a subgroup of G), keyed by indices of the parent G."""
    rank = _rank_of(T, rank)
    fp = epi_fingerprint_direct(T, H.as_group(), rank, budget)
    G = H.parent
    return Fingerprint(G.name, G.order, len(T), _lift(fp, H), fp.total)


def im_epi(T: Sequence[Word], G: FiniteGroup, rank: int | None = None,
           budget: int = DEFAULT_BUDGET) -> frozenset:
    """Set of image tuples realised by surjective homomorphisms."""
    return epi_fingerprint_direct(T, G, rank, budget).support()


def subgroup_fingerprint(T: Sequence[Word], G: FiniteGroup, rank: int | None = None,
                         budget: int = DEFAULT_BUDGET) -> tuple[tuple[Word, ...], Fingerprint]:
    """Measure induced by the subgroup <T>, in the coordinates of its Stallings basis.

    Hom(<T>, G) is identified with G^r via the basis B, and the restriction
    measure is the fingerprint of B.
    """
    rank = _rank_of(T, rank)
    B = stallings_basis(stallings_build(T, rank))
    return B, hom_fingerprint(B, G, rank, budget)


# -- comparisons --------------------------------------------------------------

CONDITIONS = ("hom", "epi", "imepi", "quotient")


@dataclass
class GroupComparison:
    group: str
    order: int
    equal: bool | None  # None: not computed (resource cap)
    detail: str = ""


@dataclass
class ComparisonReport:
    condition: str
    rows: list[GroupComparison]

    @property
    def verdict(self) -> bool:
        return all(r.equal is not False for r in self.rows)

    @property
    def first_difference(self) -> GroupComparison | None:
        return next((r for r in self.rows if r.equal is False), None)

    def to_dict(self) -> dict:
        return {"condition": self.condition, "verdict": "equal" if self.verdict else "unequal",
                "groups": [{"group": r.group, "order": r.order,
                            "equal": r.equal, "detail": r.detail} for r in self.rows]}


def _first_diff(a: Fingerprint, b: Fingerprint) -> str:
    for key in sorted(set(a.counts) | set(b.counts)):
        if a[key] != b[key]:
            return f"at {list(key)}: {a[key]} vs {b[key]}"
    return ""


def compare_on_group(T: Sequence[Word], U: Sequence[Word], G: FiniteGroup, condition: str,
                     rank: int, budget: int = DEFAULT_BUDGET,
                     quotient_cap: int = DEFAULT_QUOTIENT_CAP,
                     aut_cap: int = DEFAULT_AUT_CAP) -> GroupComparison:
    """Compare T and U on one group under one of :data:`CONDITIONS`."""
    from .errors import ResourceCapExceeded

    try:
        if condition == "hom":
            a, b = hom_fingerprint(T, G, rank, budget), hom_fingerprint(U, G, rank, budget)
            return GroupComparison(G.name, G.order, a == b, _first_diff(a, b))
        if condition == "epi":
            a, b = (epi_fingerprint_direct(T, G, rank, budget),
                    epi_fingerprint_direct(U, G, rank, budget))
            return GroupComparison(G.name, G.order, a == b, _first_diff(a, b))
        if condition == "imepi":
            a, b = im_epi(T, G, rank, budget), im_epi(U, G, rank, budget)
            only = sorted(a ^ b)
            return GroupComparison(G.name, G.order, a == b,
                                   f"{len(only)} tuples in one image set only" if only else "")
        if condition == "quotient":
            ok = condition5_check(T, U, G, rank, quotient_cap=quotient_cap, aut_cap=aut_cap,
                                  budget=budget)
            return GroupComparison(G.name, G.order, ok,
                                   "" if ok else "no automorphism of the quotient maps T to T'")
    except NoEpimorphisms as exc:
        return GroupComparison(G.name, G.order, None, f"skipped: {exc}")
    except ResourceCapExceeded as exc:
        return GroupComparison(G.name, G.order, None, f"skipped: {exc}")
    raise ValueError(f"unknown condition {condition!r}; choose from {CONDITIONS}")


def tuple_measures_equal(T: Sequence[Word], U: Sequence[Word], catalog: Iterable[FiniteGroup],
                         condition: str = "hom", rank: int | None = None,
                         budget: int = DEFAULT_BUDGET, **caps) -> ComparisonReport:
    if len(T) != len(U):
        raise TupleArityMismatch(f"arity {len(T)} vs {len(U)}")
    if condition not in CONDITIONS:
        raise ValueError(f"unknown condition {condition!r}; choose from {CONDITIONS}")
    rank = _rank_of(list(T) + list(U), rank)
    rows = [compare_on_group(T, U, G, condition, rank, budget, **caps) for G in catalog]
    return ComparisonReport(condition, rows)


# -- characteristic quotient ----------------------------------------------------

@dataclass
class CharQuotient:
    """Q = F_n / K(G), realised inside G^r with one coordinate per kernel class."""

    base_group: str
    rank: int
    components: np.ndarray       # (r, n): generator images of each representative epimorphism
    elements: np.ndarray         # (|Q|, r), sorted lexicographically, identity first
    generator_images: tuple[int, ...]
    parent: FiniteGroup = field(repr=False)

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    @cached_property
    def quotient(self) -> FiniteGroup:
        q = self.order
        if q > QUOTIENT_TABLE_LIMIT:
            raise QuotientTooLarge(f"quotient of order {q} is too large to tabulate")
        E = self.elements
        codes = _encode_rows(E, self.parent.order)
        table = np.empty((q, q), dtype=np.int64)
        for i in range(q):
            prod = self.parent.table[E[i][None, :], E]
            table[i] = np.searchsorted(codes, _encode_rows(prod, self.parent.order))
        return FiniteGroup(table, name=f"F{self.rank}/K({self.base_group})", check=q <= 64)

    def image(self, w: Word) -> int:
        return evaluate(w, self.generator_images, self.quotient)


def _encode_rows(E: np.ndarray, m: int) -> np.ndarray:
    # rows of G^r as integers; r * log2(m) stays far below 63 bits at desk scale
    out = np.zeros(E.shape[0], dtype=object if E.shape[1] * np.log2(max(m, 2)) > 62 else np.int64)
    for j in range(E.shape[1]):
        out = out * m + E[:, j]
    return out


def kernel_representatives(rank: int, G: FiniteGroup, budget: int = DEFAULT_BUDGET,
                           max_order: int = DEFAULT_MAX_ORDER) -> list[tuple[int, ...]]:
    """One epimorphism F_rank -> G per kernel, as tuples of generator images.

    Two epimorphisms have the same kernel iff they differ by an automorphism
    of G, so the representatives are the lexicographically least members of
    the Aut(G)-orbits on Epi(F_rank, G).
    """
    _check_budget(G, rank, budget)
    gens = [(i,) for i in range(1, rank + 1)]
    codes = _kernels.image_codes(G.table, G.inverse, rank, *_kernels.pack_words(gens), onto=True)
    codes = codes[codes >= 0]
    if codes.size == 0:
        raise NoEpimorphisms(f"F_{rank} has no epimorphism onto {G.name}")
    # with the generators as the tuple, the image code is the hom index itself
    epis = np.array([_kernels.decode(int(c), G.order, rank) for c in codes], dtype=np.int64)
    auts = np.array(automorphisms(G, max_order=max_order))
    reps = set()
    for e in epis:
        orbit = auts[:, e]
        reps.add(min(map(tuple, orbit.tolist())))
    return sorted(reps)


def char_quotient(rank: int, G: FiniteGroup, quotient_cap: int = DEFAULT_QUOTIENT_CAP,
                  budget: int = DEFAULT_BUDGET, max_order: int = DEFAULT_MAX_ORDER) -> CharQuotient:
    """The largest quotient of F_rank embedding in a direct power of G."""
    reps = kernel_representatives(rank, G, budget, max_order)
    comp = np.array(reps, dtype=np.int64)            # (r, n)
    gen_vectors = comp.T.copy()                       # (n, r)
    r = comp.shape[0]
    identity = tuple([0] * r)
    seen = {identity}
    frontier = [np.zeros(r, dtype=np.int64)]
    table = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for v in gen_vectors:
                y = table[x, v]
                key = tuple(y.tolist())
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
                    if len(seen) > quotient_cap:
                        raise QuotientTooLarge(
                            f"F_{rank}/K({G.name}) exceeds the quotient cap {quotient_cap}")
        frontier = nxt
    elements = np.array(sorted(seen), dtype=np.int64).reshape(len(seen), r)
    index = {tuple(row): i for i, row in enumerate(elements.tolist())}
    gimg = tuple(index[tuple(v.tolist())] for v in gen_vectors)
    return CharQuotient(G.name, rank, comp, elements, gimg, G)


def condition5_check(T: Sequence[Word], U: Sequence[Word], G: FiniteGroup,
                     rank: int | None = None, quotient_cap: int = DEFAULT_QUOTIENT_CAP,
                     aut_cap: int = DEFAULT_AUT_CAP, budget: int = DEFAULT_BUDGET,
                     cq: CharQuotient | None = None) -> bool:
    """Is there an automorphism of Q = F_n/K(G) carrying the image of T to that of U?"""
    if len(T) != len(U):
        raise TupleArityMismatch(f"arity {len(T)} vs {len(U)}")
    rank = _rank_of(list(T) + list(U), rank)
    if cq is None:
        cq = char_quotient(rank, G, quotient_cap, budget)
    Q = cq.quotient
    src = [cq.image(w) for w in T]
    dst = [cq.image(u) for u in U]
    return automorphism_search(Q, src, dst, max_order=aut_cap) is not None


def closure_is_whole(G: FiniteGroup, images: Sequence[int]) -> bool:
    return generated_closure(G, images).order == G.order
