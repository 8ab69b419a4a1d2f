"""Aut(F_n)-orbit testing for words and ordered tuples with Whitehead moves.

Two kinds of moves generate Aut(F_n):

* permutation moves send each generator to a signed generator;
* multiplier moves fix a letter ``v`` and send every other generator ``x`` to
  one of ``x``, ``x v``, ``v^-1 x`` or ``v^-1 x v``.

:func:`same_orbit` first compares cheap invariants (Whitehead-minimal length
and abelianised images), then runs a breadth-first search through tuples of
minimal length.  The search is capped; hitting the cap yields an ``unknown``
verdict rather than a guess.
"""

from __future__ import annotations

import itertools
import json
import os
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

from .errors import RankMismatch, RankTooLarge, TupleArityMismatch
from .words import (Endomorphism, Word, apply_endo, compose, cyclic_length, cyclically_reduce,
                    format_tuple, format_word, identity_endo, parse_word, reduce)

MAX_MOVE_RANK = 4
DEFAULT_NODE_CAP = int(os.environ.get("WORDMEASURES_ORBIT_NODE_CAP", 10 ** 6))

FIX, RIGHT, LEFT, CONJ = "fix", "right", "left", "conj"
ACTIONS = (FIX, RIGHT, LEFT, CONJ)


@dataclass(frozen=True)
class WhiteheadMove:
    """A Whitehead automorphism.

    ``kind == "perm"``: ``images[i]`` is the signed generator that x_{i+1} goes to.
    ``kind == "mult"``: ``multiplier`` is a signed letter v and ``actions[i]``
    says what happens to x_{i+1}; the action at |v| is always ``fix``.
    """

    kind: str
    rank: int
    images: tuple[int, ...] = ()
    multiplier: int = 0
    actions: tuple[str, ...] = ()

    def endo(self) -> Endomorphism:
        n = self.rank
        if self.kind == "perm":
            return Endomorphism(n, tuple(Word((x,), n) for x in self.images))
        v = self.multiplier
        imgs = []
        for i, act in enumerate(self.actions, start=1):
            letters = {FIX: (i,), RIGHT: (i, v), LEFT: (-v, i), CONJ: (-v, i, v)}[act]
            imgs.append(reduce(letters, n))
        return Endomorphism(n, tuple(imgs))

    def __call__(self, w: Word) -> Word:
        return apply_endo(self.endo(), w)

    def inverse(self) -> "WhiteheadMove":
        if self.kind == "perm":
            inv = [0] * self.rank
            for i, x in enumerate(self.images, start=1):
                inv[abs(x) - 1] = i if x > 0 else -i
            return WhiteheadMove("perm", self.rank, images=tuple(inv))
        return WhiteheadMove("mult", self.rank, multiplier=-self.multiplier, actions=self.actions)

    def describe(self) -> dict:
        if self.kind == "perm":
            return {"kind": "perm", "images": format_word(Word(self.images, self.rank))}
        return {"kind": "mult", "multiplier": format_word(Word((self.multiplier,), self.rank)),
                "actions": list(self.actions)}

    @classmethod
    def from_description(cls, d: dict, rank: int) -> "WhiteheadMove":
        if d["kind"] == "perm":
            return cls("perm", rank, images=parse_word(d["images"], rank).letters)
        (v,) = parse_word(d["multiplier"], rank).letters
        return cls("mult", rank, multiplier=v, actions=tuple(d["actions"]))

    def __str__(self) -> str:
        return str(self.endo())


def moves(rank: int) -> list[WhiteheadMove]:
    """All permutation moves, then all non-identity multiplier moves."""
    if rank < 1:
        raise ValueError("rank must be positive")
    if rank > MAX_MOVE_RANK:
        raise RankTooLarge(f"Whitehead move enumeration supports rank <= {MAX_MOVE_RANK}")
    out = []
    for perm in itertools.permutations(range(1, rank + 1)):
        for signs in itertools.product((1, -1), repeat=rank):
            out.append(WhiteheadMove("perm", rank, images=tuple(s * p for s, p in zip(signs, perm))))
    for v in [x for i in range(1, rank + 1) for x in (i, -i)]:
        for acts in itertools.product(ACTIONS, repeat=rank - 1):
            if all(a == FIX for a in acts):
                continue
            acts = list(acts)
            acts.insert(abs(v) - 1, FIX)
            out.append(WhiteheadMove("mult", rank, multiplier=v, actions=tuple(acts)))
    return out


def inner_move(v: int, rank: int) -> WhiteheadMove:
    """Conjugation ``w -> v^-1 w v``."""
    acts = tuple(FIX if i == abs(v) else CONJ for i in range(1, rank + 1))
    return WhiteheadMove("mult", rank, multiplier=v, actions=acts)


def apply_moves(seq: Sequence[WhiteheadMove], T: Sequence[Word]) -> tuple[Word, ...]:
    T = tuple(T)
    for mv in seq:
        e = mv.endo()
        T = tuple(apply_endo(e, w) for w in T)
    return T


def compose_moves(seq: Sequence[WhiteheadMove], rank: int) -> Endomorphism:
    """The automorphism applying ``seq`` left to right."""
    e = identity_endo(rank)
    for mv in seq:
        e = compose(mv.endo(), e)
    return e


def tuple_length(T: Sequence[Word]) -> int:
    """Cyclic length for a single word, total reduced length for longer tuples."""
    if len(T) == 1:
        return cyclic_length(T[0])
    return sum(len(w) for w in T)


def _rank(T: Sequence[Word]) -> int:
    ranks = {w.rank for w in T}
    if len(ranks) != 1:
        raise RankMismatch(f"tuple must be non-empty with one rank, got {sorted(ranks)}")
    return ranks.pop()


def _normalise(T: tuple, rank: int):
    """Conjugate a single word to its cyclic core; tuples are left alone."""
    if len(T) != 1:
        return T, ()
    w = T[0]
    _, conj = cyclically_reduce(w)
    extra = tuple(inner_move(x, rank) for x in conj.letters)
    for mv in extra:
        w = mv(w)
    return (w,), extra


def minimize(T: Sequence[Word]) -> tuple[tuple[Word, ...], list[WhiteheadMove]]:
    """Greedy length reduction.

    At each step the first move achieving the largest decrease is applied.  A
    single word is treated as a cyclic word: it is kept cyclically reduced
    throughout, so the returned word has plain length equal to its cyclic
    length.
    """
    T = tuple(T)
    if not T:
        return T, []
    n = _rank(T)
    mv_list = moves(n)
    T, extra = _normalise(T, n)
    applied: list[WhiteheadMove] = list(extra)
    current = tuple_length(T)
    while True:
        best, best_len, best_T = None, current, T
        for mv in mv_list:
            e = mv.endo()
            new = tuple(apply_endo(e, w) for w in T)
            L = tuple_length(new)
            if L < best_len:
                best, best_len, best_T = mv, L, new
        if best is None:
            break
        T, extra = _normalise(best_T, n)
        applied.append(best)
        applied.extend(extra)
        current = best_len
    return T, applied


class Status(str, Enum):
    SAME = "same"
    DIFFERENT = "different"
    UNKNOWN = "unknown"


@dataclass
class OrbitVerdict:
    status: Status
    witness: Endomorphism | None = None
    moves: list[WhiteheadMove] = field(default_factory=list)
    certificate: str = ""
    nodes: int = 0

    def to_dict(self) -> dict:
        return {"status": self.status.value,
                "witness": str(self.witness) if self.witness is not None else None,
                "moves": [m.describe() for m in self.moves],
                "certificate": self.certificate, "nodes": self.nodes}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def exponent_matrix(T: Sequence[Word], rank: int) -> list[list[int]]:
    """rank x k matrix of exponent sums (images in the abelianisation Z^rank)."""
    M = [[0] * len(T) for _ in range(rank)]
    for j, w in enumerate(T):
        for x in w.letters:
            M[abs(x) - 1][j] += 1 if x > 0 else -1
    return M


def hermite_rows(M: list[list[int]]) -> tuple[tuple[int, ...], ...]:
    """Row-style Hermite normal form: canonical for the left action of GL_n(Z)."""
    A = [list(r) for r in M]
    if not A:
        return ()
    rows, cols = len(A), len(A[0])
    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if A[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[p] = A[p], A[r]
            done = True
            for i in range(r + 1, rows):
                q = A[i][c] // A[r][c]
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                if A[i][c] != 0:
                    done = False
            if done:
                break
        if A[r][c] == 0:
            continue
        if A[r][c] < 0:
            A[r] = [-a for a in A[r]]
        for i in range(r):
            q = A[i][c] // A[r][c]
            if q:
                A[i] = [a - q * b for a, b in zip(A[i], A[r])]
        r += 1
    return tuple(tuple(row) for row in A)


def _step(e: Endomorphism, T: tuple, length: int, rank: int):
    """Apply ``e``; return (new tuple, extra inner moves) or None when it leaves the level set.

    A single word is re-normalised to its cyclically reduced core, since the
    level set for words consists of cyclic words.
    """
    new, extra = _normalise(tuple(apply_endo(e, w) for w in T), rank)
    if tuple_length(new) != length:
        return None
    return new, extra


def _search(start: tuple, goal: tuple, length: int, node_cap: int):
    """Breadth-first search through the level set; returns (path | [] | None, nodes).

    ``None`` means the node cap was hit and ``[]`` that the level set was
    exhausted without meeting ``goal``.
    """
    n = _rank(start)
    mv_list = moves(n)
    endos = [m.endo() for m in mv_list]
    key = format_tuple
    goal_key = key(goal)
    parent: dict[str, tuple] = {key(start): (None, ())}
    queue = deque([start])
    while queue:
        T = queue.popleft()
        tk = key(T)
        for mv, e in zip(mv_list, endos):
            step = _step(e, T, length, n)
            if step is None:
                continue
            new, extra = step
            nk = key(new)
            if nk in parent:
                continue
            parent[nk] = (tk, (mv,) + extra)
            if nk == goal_key:
                path: list[WhiteheadMove] = []
                while parent[nk][0] is not None:
                    prev, seq = parent[nk]
                    path[:0] = seq
                    nk = prev
                return path, len(parent)
            if len(parent) >= node_cap:
                return None, len(parent)
            queue.append(new)
    return [], len(parent)


def same_orbit(T: Sequence[Word], U: Sequence[Word],
               node_cap: int = DEFAULT_NODE_CAP) -> OrbitVerdict:
    """Decide whether some automorphism of F_n sends the ordered tuple T to U."""
    T, U = tuple(T), tuple(U)
    if len(T) != len(U):
        raise TupleArityMismatch(f"arity {len(T)} vs {len(U)}")
    if not T:
        return OrbitVerdict(Status.SAME, None, [], "empty tuples")
    n = _rank(T + U)
    Tm, mt = minimize(T)
    Um, mu = minimize(U)
    lt, lu = tuple_length(Tm), tuple_length(Um)
    if lt != lu:
        return OrbitVerdict(Status.DIFFERENT,
                            certificate=f"Whitehead-minimal lengths differ: {lt} vs {lu} "
                            f"({format_tuple(Tm)} vs {format_tuple(Um)})")
    if hermite_rows(exponent_matrix(T, n)) != hermite_rows(exponent_matrix(U, n)):
        return OrbitVerdict(Status.DIFFERENT, certificate="abelianised images lie in different "
                            "GL_n(Z)-orbits (Hermite forms differ)")
    if Tm == Um:
        path, nodes = [], 1
    else:
        path, nodes = _search(Tm, Um, lt, node_cap)
    if path is None:
        return OrbitVerdict(Status.UNKNOWN, nodes=nodes,
                            certificate=f"node cap {node_cap} reached at minimal length {lt}")
    if not path and Tm != Um:
        msg = f"level set of length {lt} exhausted ({nodes} nodes) without reaching the target"
        if len(T) == 1:
            # peak reduction: minimal words of one orbit are joined inside the level set
            return OrbitVerdict(Status.DIFFERENT, nodes=nodes, certificate=msg)
        return OrbitVerdict(Status.UNKNOWN, nodes=nodes, certificate=msg)
    seq = mt + path + [m.inverse() for m in reversed(mu)]
    witness = compose_moves(seq, n)
    if tuple(apply_endo(witness, w) for w in T) != U:
        raise AssertionError("orbit witness failed verification")
    return OrbitVerdict(Status.SAME, witness, seq,
                        certificate=f"{len(seq)} moves, verified", nodes=nodes)
