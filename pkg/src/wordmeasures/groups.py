"""Finite groups as Cayley tables.

Every group stores its multiplication table as an ``order x order`` integer
array with ``table[g, h] = g*h`` and the identity at index 0.  The element
ordering of each constructor is fixed, because fingerprints refer to elements
by index:

* ``cyclic(m)``: residues ``0..m-1``.
* ``symmetric(n)`` / ``alternating(n)``: permutations of ``0..n-1`` in
  lexicographic one-line notation (identity first); the product is
  composition, ``(g*h)(i) = g(h(i))``.
* ``dihedral(m)``: ``r^i`` at index ``i`` and ``r^i s`` at index ``m + i``.
* ``quaternion8()``: ``1, -1, i, -i, j, -j, k, -k``.
* ``direct_product(G, H)``: pairs ``(g, h)`` at index ``g*|H| + h``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import GroupTooLarge, InvalidElement, NotAGroup, UnknownGroup

DEFAULT_MAX_ORDER = 48
# full associativity check costs order**3 lookups
_ASSOC_CHECK_LIMIT = 128


class FiniteGroup:
    """A finite group given by its Cayley table.  Treat instances as immutable."""

    def __init__(self, table, name: str = "G", labels: Sequence[str] | None = None,
                 check: bool = True):
        table = np.array(table, dtype=np.int64)
        if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
            raise NotAGroup("Cayley table must be a non-empty square array")
        if check:
            _validate_table(table)
        table.flags.writeable = False
        self.table = table
        self.order = int(table.shape[0])
        # position of the identity 0 in each row
        self.inverse = np.argmin(table, axis=1).astype(np.int64)
        self.inverse.flags.writeable = False
        self.name = name
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(self.order))

    def __repr__(self):
        return f"FiniteGroup({self.name!r}, order={self.order})"

    def __len__(self):
        return self.order

    def multiply(self, g: int, h: int) -> int:
        self._check(g)
        self._check(h)
        return int(self.table[g, h])

    def inv(self, g: int) -> int:
        self._check(g)
        return int(self.inverse[g])

    def power(self, g: int, e: int) -> int:
        self._check(g)
        if e < 0:
            g, e = int(self.inverse[g]), -e
        out = 0
        for _ in range(e):
            out = int(self.table[out, g])
        return out

    def element_order(self, g: int) -> int:
        self._check(g)
        k, x = 1, g
        while x != 0:
            x = int(self.table[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.table, self.table.T))

    def exponent(self) -> int:
        return int(np.lcm.reduce([self.element_order(g) for g in range(self.order)]))

    def _check(self, g) -> None:
        if not 0 <= int(g) < self.order:
            raise InvalidElement(f"element {g} out of range for {self.name} (order {self.order})")

    def to_json(self) -> str:
        return json.dumps(self.table.tolist())


def _validate_table(table: np.ndarray) -> None:
    m = table.shape[0]
    if table.min() < 0 or table.max() >= m:
        raise NotAGroup("table entries out of range")
    ar = np.arange(m)
    if not (np.array_equal(table[0], ar) and np.array_equal(table[:, 0], ar)):
        raise NotAGroup("index 0 must be a two-sided identity")
    for row in table:
        if len(np.unique(row)) != m:
            raise NotAGroup("table is not a Latin square")
    for col in table.T:
        if len(np.unique(col)) != m:
            raise NotAGroup("table is not a Latin square")
    if m <= _ASSOC_CHECK_LIMIT:
        # (a*b)*c == a*(b*c) for all a, b, c
        lhs = table[table[:, :, None], ar[None, None, :]]
        rhs = table[ar[:, None, None], table[None, :, :]]
        if not np.array_equal(lhs, rhs):
            raise NotAGroup("multiplication is not associative")


@dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return int(g) in self.elementset

    @property
    def elementset(self) -> frozenset:
        return frozenset(self.elements)

    def as_group(self) -> FiniteGroup:
        """The subgroup as a group in its own right; local index i is ``elements[i]``."""
        pos = {g: i for i, g in enumerate(self.elements)}
        sub = self.parent.table[np.ix_(self.elements, self.elements)]
        table = np.vectorize(pos.__getitem__, otypes=[np.int64])(sub)
        return FiniteGroup(table, name=f"{self.parent.name}<{self.order}>",
                           labels=[self.parent.labels[g] for g in self.elements], check=False)


# -- constructors -------------------------------------------------------------

def from_function(elements: Sequence, mul: Callable, name: str,
                  labels: Sequence[str] | None = None, check: bool = True) -> FiniteGroup:
    """Tabulate ``mul`` over ``elements`` (identity must come first)."""
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[mul(a, b)] for b in elements] for a in elements]
    if labels is None:
        labels = [str(e) for e in elements]
    return FiniteGroup(table, name=name, labels=labels, check=check)


def from_table(raw, name: str = "custom") -> FiniteGroup:
    """Build a group from an array-of-arrays (or its JSON text); checks the axioms."""
    if isinstance(raw, str):
        raw = json.loads(raw)
    try:
        arr = np.array(raw, dtype=np.int64)
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"cannot read table: {exc}") from None
    return FiniteGroup(arr, name=name)


def cyclic(m: int) -> FiniteGroup:
    if m < 1:
        raise ValueError("cyclic group needs m >= 1")
    ar = np.arange(m)
    return FiniteGroup((ar[:, None] + ar[None, :]) % m, name=f"Z{m}", check=False)


def _perm_mul(p, q):
    return tuple(p[q[i]] for i in range(len(q)))


def _perm_label(p) -> str:
    return "".join(str(i + 1) for i in p) if len(p) < 10 else ",".join(str(i) for i in p)


def symmetric(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("symmetric group needs n >= 1")
    perms = list(itertools.permutations(range(n)))
    return from_function(perms, _perm_mul, name=f"S{n}",
                         labels=[_perm_label(p) for p in perms], check=n <= 4)


def _parity(p) -> int:
    seen, sign = set(), 0
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        sign ^= (length - 1) & 1
    return sign


def alternating(n: int) -> FiniteGroup:
    if n < 1:
        raise ValueError("alternating group needs n >= 1")
    perms = [p for p in itertools.permutations(range(n)) if _parity(p) == 0]
    return from_function(perms, _perm_mul, name=f"A{n}",
                         labels=[_perm_label(p) for p in perms], check=n <= 5)


def dihedral(m: int) -> FiniteGroup:
    """Symmetries of the m-gon, order 2m."""
    if m < 1:
        raise ValueError("dihedral group needs m >= 1")
    elements = [(i, 0) for i in range(m)] + [(i, 1) for i in range(m)]

    def mul(x, y):
        i, a = x
        j, b = y
        return ((i + (j if a == 0 else -j)) % m, (a + b) % 2)

    labels = [f"r{i}" for i in range(m)] + [f"r{i}s" for i in range(m)]
    return from_function(elements, mul, name=f"D{m}", labels=labels)


def quaternion8() -> FiniteGroup:
    # unit quaternions as (sign, axis) with axis in 1,i,j,k
    basis = ["1", "i", "j", "k"]
    unit = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
            ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
            ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
            ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1")}
    elements = [(s, b) for b in basis for s in (1, -1)]

    def mul(x, y):
        s, b = unit[(x[1], y[1])]
        return (x[0] * y[0] * s, b)

    labels = [("" if s > 0 else "-") + b for s, b in elements]
    return from_function(elements, mul, name="Q8", labels=labels)


def direct_product(G: FiniteGroup, H: FiniteGroup, name: str | None = None) -> FiniteGroup:
    m, k = G.order, H.order
    a = np.arange(m * k)
    g, h = a // k, a % k
    table = G.table[g[:, None], g[None, :]] * k + H.table[h[:, None], h[None, :]]
    labels = [f"({G.labels[x]},{H.labels[y]})" for x, y in zip(g, h)]
    return FiniteGroup(table, name=name or f"{G.name}x{H.name}", labels=labels, check=False)


# -- catalog ------------------------------------------------------------------

_CATALOG_BUILDERS: dict[str, Callable[[], FiniteGroup]] = {
    **{f"Z{m}": (lambda m=m: cyclic(m)) for m in range(1, 9)},
    "Z2xZ2": lambda: direct_product(cyclic(2), cyclic(2)),
    "Z2xZ4": lambda: direct_product(cyclic(2), cyclic(4)),
    "S3": lambda: symmetric(3),
    "D4": lambda: dihedral(4),
    "D5": lambda: dihedral(5),
    "Q8": quaternion8,
    "A4": lambda: alternating(4),
    "S4": lambda: symmetric(4),
}

DEFAULT_CATALOG: tuple[str, ...] = tuple(_CATALOG_BUILDERS)
_cache: dict[str, FiniteGroup] = {}


def catalog_group(group_id: str) -> FiniteGroup:
    if group_id not in _CATALOG_BUILDERS:
        raise UnknownGroup(f"unknown group id {group_id!r}; known: {', '.join(DEFAULT_CATALOG)}")
    if group_id not in _cache:
        _cache[group_id] = _CATALOG_BUILDERS[group_id]()
    return _cache[group_id]


def catalog(ids: Iterable[str] | None = None) -> list[FiniteGroup]:
    return [catalog_group(i) for i in (DEFAULT_CATALOG if ids is None else ids)]


# -- subgroups ----------------------------------------------------------------

def _closure_set(G: FiniteGroup, gens: Iterable[int]) -> frozenset:
    gens = [int(g) for g in gens if int(g) != 0]
    seen = {0}
    frontier = [0]
    table = G.table
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = int(table[x, s])
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def generated_closure(G: FiniteGroup, S: Iterable[int]) -> Subgroup:
    """Smallest subgroup containing S.

    Right multiplication by the generators suffices: in a finite group the
    submonoid generated by S is already closed under inverses.
    """
    S = list(S)
    for g in S:
        G._check(g)
    return Subgroup(G, tuple(sorted(_closure_set(G, S))))


def all_subgroups(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[Subgroup]:
    """All subgroups of G, sorted by (order, elements)."""
    if G.order > max_order:
        raise GroupTooLarge(f"{G.name} has order {G.order} > cap {max_order}")
    found = {_closure_set(G, [g]) for g in range(G.order)}
    frontier = set(found)
    while frontier:
        new = set()
        for A in frontier:
            for B in found:
                if A <= B or B <= A:
                    continue
                J = _closure_set(G, A | B)
                if J not in found and J not in new:
                    new.add(J)
        found |= new
        frontier = new
    subs = sorted(found, key=lambda s: (len(s), sorted(s)))
    return [Subgroup(G, tuple(sorted(s))) for s in subs]


# -- automorphisms ------------------------------------------------------------

def generating_sequence(G: FiniteGroup, prefer: Sequence[int] = ()) -> list[int]:
    """Greedy generating sequence; each element strictly enlarges the closure.

    Elements of ``prefer`` are tried first, then the remaining elements by
    decreasing order (ties by index).
    """
    current = frozenset([0])
    gens: list[int] = []
    rest = sorted(range(G.order), key=lambda g: (-G.element_order(g), g))
    for g in list(prefer) + rest:
        g = int(g)
        if g in current:
            continue
        gens.append(g)
        current = _closure_set(G, gens)
        if len(current) == G.order:
            break
    return gens


def _extend(G: FiniteGroup, gens: Sequence[int], images: Sequence[int]) -> np.ndarray | None:
    """Extend ``gens[i] -> images[i]`` to an injective homomorphism on <gens>.

    Returns the map as an array (-1 outside the subgroup) or None when the
    assignment is inconsistent or not injective.  Consistency along every
    Cayley-graph edge of <gens> is equivalent to being a homomorphism.
    """
    table = G.table
    f = np.full(G.order, -1, dtype=np.int64)
    f[0] = 0
    used = np.zeros(G.order, dtype=bool)
    used[0] = True
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            fx = f[x]
            for s, t in zip(gens, images):
                y = table[x, s]
                fy = table[fx, t]
                if f[y] < 0:
                    if used[fy]:
                        return None
                    f[y] = fy
                    used[fy] = True
                    nxt.append(y)
                elif f[y] != fy:
                    return None
        frontier = nxt
    return f


def _search(G: FiniteGroup, gens: Sequence[int], fixed: dict[int, int]) -> Iterator[np.ndarray]:
    """Yield automorphisms (as index arrays) in lexicographic order of generator images."""
    orders = [G.element_order(g) for g in range(G.order)]
    candidates = []
    for s in gens:
        if s in fixed:
            candidates.append([fixed[s]])
        else:
            candidates.append([t for t in range(G.order) if orders[t] == orders[s]])

    def rec(depth: int, chosen: list[int]):
        if depth == len(gens):
            f = _extend(G, gens, chosen)
            if f is not None and (f >= 0).all():
                yield f
            return
        for t in candidates[depth]:
            trial = chosen + [t]
            if _extend(G, gens[: depth + 1], trial) is not None:
                yield from rec(depth + 1, trial)

    yield from rec(0, [])


def automorphisms(G: FiniteGroup, max_order: int = DEFAULT_MAX_ORDER) -> list[np.ndarray]:
    if G.order > max_order:
        raise GroupTooLarge(f"{G.name} has order {G.order} > cap {max_order}")
    return list(_search(G, generating_sequence(G), {}))


def automorphism_search(G: FiniteGroup, src: Sequence[int], dst: Sequence[int],
                        max_order: int = DEFAULT_MAX_ORDER) -> np.ndarray | None:
    """An automorphism f with ``f[src[i]] == dst[i]``, or None if there is none.

    The result is the first solution in lexicographic order of the images of
    the search's generating sequence, so it is deterministic.
    """
    if G.order > max_order:
        raise GroupTooLarge(f"{G.name} has order {G.order} > cap {max_order}")
    src = [int(g) for g in src]
    dst = [int(g) for g in dst]
    if len(src) != len(dst):
        raise ValueError("src and dst must have the same length")
    for g in src + dst:
        G._check(g)
    wanted: dict[int, int] = {}
    for s, d in zip(src, dst):
        if wanted.setdefault(s, d) != d:
            return None
    gens = generating_sequence(G, prefer=src)
    fixed = {s: wanted[s] for s in gens if s in wanted}
    for f in _search(G, gens, fixed):
        if all(f[s] == d for s, d in wanted.items()):
            return f
    return None


def is_automorphism(G: FiniteGroup, f) -> bool:
    f = np.asarray(f)
    if f.shape != (G.order,) or len(np.unique(f)) != G.order:
        return False
    return bool(np.array_equal(f[G.table], G.table[f[:, None], f[None, :]]))
