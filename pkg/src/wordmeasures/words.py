"""Reduced words in a free group F_n and endomorphisms given by generator images.

Letters are signed integers: ``+i`` is the generator x_i and ``-i`` its
inverse.  The text form writes x_1, x_2, ... as ``a``, ``b``, ... and their
inverses in upper case; the empty word is written ``1``.
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import InvalidLetter, RankMismatch

MAX_TEXT_RANK = 26


@dataclass(frozen=True)
class Word:
    """A freely reduced word of F_rank.  Immutable."""

    letters: tuple[int, ...]
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise RankMismatch(f"rank must be positive, got {self.rank}")
        object.__setattr__(self, "letters", tuple(int(x) for x in self.letters))
        _check_letters(self.letters, self.rank)
        for x, y in zip(self.letters, self.letters[1:]):
            if x == -y:
                raise InvalidLetter(f"word {self.letters} is not freely reduced")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_word(self)

    def __repr__(self) -> str:
        return f"Word({format_word(self)!r}, rank={self.rank})"

    def __mul__(self, other: "Word") -> "Word":
        return concat(self, other)

    def inverse(self) -> "Word":
        return invert(self)

    def is_empty(self) -> bool:
        return not self.letters


@dataclass(frozen=True)
class Endomorphism:
    """Endomorphism of F_rank, determined by the images of the generators."""

    rank: int
    images: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.rank:
            raise RankMismatch(
                f"need {self.rank} generator images, got {len(self.images)}")
        for w in self.images:
            if w.rank != self.rank:
                raise RankMismatch("image words must live in the same free group")

    def __call__(self, w: Word) -> Word:
        return apply_endo(self, w)

    def then(self, other: "Endomorphism") -> "Endomorphism":
        """The endomorphism ``w -> other(self(w))``."""
        return compose(other, self)

    def __str__(self) -> str:
        return ", ".join(f"{_letter_char(i + 1)}->{w}" for i, w in enumerate(self.images))


def _check_letters(letters: Iterable[int], rank: int) -> None:
    for x in letters:
        if x == 0 or abs(x) > rank:
            raise InvalidLetter(f"letter {x} out of range for rank {rank}")


def reduce(letters: Iterable[int], rank: int) -> Word:
    """Freely reduce a raw letter sequence."""
    letters = [int(x) for x in letters]
    _check_letters(letters, rank)
    stack: list[int] = []
    for x in letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return Word(tuple(stack), rank)


def identity_word(rank: int) -> Word:
    return Word((), rank)


def generator(i: int, rank: int) -> Word:
    return Word((i,), rank)


def _same_rank(w: Word, u: Word) -> None:
    if w.rank != u.rank:
        raise RankMismatch(f"rank {w.rank} vs rank {u.rank}")


def concat(w: Word, u: Word) -> Word:
    _same_rank(w, u)
    a, b = w.letters, u.letters
    k = 0
    while k < len(a) and k < len(b) and a[-1 - k] == -b[k]:
        k += 1
    return Word(a[: len(a) - k] + b[k:], w.rank)


def invert(w: Word) -> Word:
    return Word(tuple(-x for x in reversed(w.letters)), w.rank)


def cyclically_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w`` as ``conjugator * core * conjugator^-1`` with ``core`` cyclically reduced."""
    a = w.letters
    k = 0
    while 2 * k + 1 < len(a) and a[k] == -a[-1 - k]:
        k += 1
    core = Word(a[k: len(a) - k], w.rank)
    return core, Word(a[:k], w.rank)


def cyclic_length(w: Word) -> int:
    return len(cyclically_reduce(w)[0])


def apply_endo(e: Endomorphism, w: Word) -> Word:
    if e.rank != w.rank:
        raise RankMismatch(f"endomorphism of rank {e.rank} applied to rank {w.rank} word")
    out: list[int] = []
    for x in w.letters:
        img = e.images[abs(x) - 1].letters
        if x < 0:
            img = tuple(-y for y in reversed(img))
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return Word(tuple(out), e.rank)


def compose(outer: Endomorphism, inner: Endomorphism) -> Endomorphism:
    """``outer o inner``: the endomorphism ``w -> outer(inner(w))``."""
    if outer.rank != inner.rank:
        raise RankMismatch("cannot compose endomorphisms of different rank")
    return Endomorphism(outer.rank, tuple(apply_endo(outer, img) for img in inner.images))


def identity_endo(rank: int) -> Endomorphism:
    return Endomorphism(rank, tuple(generator(i, rank) for i in range(1, rank + 1)))


# -- text layer -------------------------------------------------------------

def _letter_char(x: int) -> str:
    c = string.ascii_lowercase[abs(x) - 1]
    return c if x > 0 else c.upper()


def parse_word(text: str, rank: int | None = None) -> Word:
    """Parse ``"aBa"``-style text.  With ``rank=None`` the smallest fitting rank is used.

    The input is freely reduced on the way in.
    """
    text = text.strip()
    if not text:
        raise InvalidLetter("empty string is not a word; write '1' for the identity")
    if text == "1":
        letters: list[int] = []
    else:
        letters = []
        for ch in text:
            if ch in string.ascii_lowercase:
                letters.append(string.ascii_lowercase.index(ch) + 1)
            elif ch in string.ascii_uppercase:
                letters.append(-(string.ascii_uppercase.index(ch) + 1))
            else:
                raise InvalidLetter(f"bad character {ch!r} in word {text!r}")
    if rank is None:
        rank = max((abs(x) for x in letters), default=1)
    return reduce(letters, rank)


def format_word(w: Word) -> str:
    if not w.letters:
        return "1"
    if w.rank > MAX_TEXT_RANK:
        raise InvalidLetter("text form supports rank <= 26")
    return "".join(_letter_char(x) for x in w.letters)


def parse_tuple(text: str | Sequence[str], rank: int | None = None) -> tuple[Word, ...]:
    """Parse a comma separated tuple such as ``"aa,bb"`` (or a list of word strings)."""
    parts = text.split(",") if isinstance(text, str) else list(text)
    words = [parse_word(p) for p in parts]
    if rank is None:
        rank = max(w.rank for w in words)
    return tuple(parse_word(p, rank) for p in parts)


def format_tuple(T: Sequence[Word]) -> str:
    return ",".join(format_word(w) for w in T)


def tuple_rank(*tuples: Sequence[Word]) -> int:
    """Common rank of the given word tuples; raises RankMismatch if they disagree."""
    ranks = {w.rank for T in tuples for w in T}
    if len(ranks) > 1:
        raise RankMismatch(f"words of different ranks: {sorted(ranks)}")
    if not ranks:
        raise RankMismatch("cannot infer rank from empty tuples")
    return ranks.pop()


def with_rank(w: Word, rank: int) -> Word:
    """Reinterpret ``w`` in a free group of (at least as large) ``rank``."""
    return Word(w.letters, rank)
