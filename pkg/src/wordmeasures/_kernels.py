"""Enumeration kernels over Hom(F_n, G) = G^n.

A homomorphism is identified with the tuple of generator images
``(g_1, ..., g_n)`` and enumerated by its big-endian base-|G| index, so hom 0
is the trivial one and the order is lexicographic.  A k-tuple of group
elements is encoded the same way as a single integer ("image code").

Two interchangeable backends compute the same integer arrays:

* ``numba``: a compiled loop over homomorphisms (default when numba imports).
* ``numpy``: a vectorised pass over blocks of homomorphisms.

Set ``WORDMEASURES_BACKEND=numpy`` to force the pure-numpy path, or call
:func:`set_backend`.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit, prange
except ImportError:  # pragma: no cover - numba is optional
    numba = None
else:
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # the default layer probes TBB first and warns when it is too old
        numba.config.THREADING_LAYER = "omp"

BLOCK = 1 << 18
DENSE_LIMIT = 1 << 22

_backend = "numpy"


def available_backends() -> list[str]:
    return ["numba", "numpy"] if numba is not None else ["numpy"]


def set_backend(name: str) -> None:
    global _backend
    if name not in available_backends():
        raise ValueError(f"backend {name!r} not available; choose from {available_backends()}")
    _backend = name


def get_backend() -> str:
    return _backend


def pack_words(words) -> tuple[np.ndarray, np.ndarray]:
    """Flatten a sequence of letter tuples into (letters, offsets) arrays."""
    offsets = np.zeros(len(words) + 1, dtype=np.int64)
    for i, w in enumerate(words):
        offsets[i + 1] = offsets[i] + len(w)
    letters = np.fromiter((x for w in words for x in w), dtype=np.int64, count=int(offsets[-1]))
    return letters, offsets


# -- numpy path ---------------------------------------------------------------

def _np_generator_images(m: int, rank: int, start: int, stop: int) -> np.ndarray:
    h = np.arange(start, stop, dtype=np.int64)
    weights = m ** np.arange(rank - 1, -1, -1, dtype=np.int64)
    return (h[:, None] // weights[None, :]) % m


def _np_onto_mask(table: np.ndarray, gens: np.ndarray) -> np.ndarray:
    n_homs, rank = gens.shape
    m = table.shape[0]
    reach = np.zeros((n_homs, m), dtype=bool)
    reach[:, 0] = True
    frontier = reach.copy()
    while frontier.any():
        new = np.zeros_like(reach)
        for x in range(m):
            rows = np.flatnonzero(frontier[:, x])
            if rows.size == 0:
                continue
            for j in range(rank):
                new[rows, table[x, gens[rows, j]]] = True
        new &= ~reach
        reach |= new
        frontier = new
    return reach.all(axis=1)


def _np_codes(table, inverse, rank, letters, offsets, onto, start, stop):
    m = table.shape[0]
    gens = _np_generator_images(m, rank, start, stop)
    codes = np.zeros(stop - start, dtype=np.int64)
    for j in range(offsets.size - 1):
        acc = np.zeros(stop - start, dtype=np.int64)
        for p in range(offsets[j], offsets[j + 1]):
            x = letters[p]
            col = gens[:, x - 1] if x > 0 else inverse[gens[:, -x - 1]]
            acc = table[acc, col]
        codes = codes * m + acc
    if onto:
        codes[~_np_onto_mask(table, gens)] = -1
    return codes


# -- numba path ---------------------------------------------------------------

if numba is not None:

    @njit(cache=True)
    def _nb_generates(table, gens):
        m = table.shape[0]
        seen = np.zeros(m, dtype=np.bool_)
        queue = np.empty(m, dtype=np.int64)
        seen[0] = True
        queue[0] = 0
        head, tail = 0, 1
        while head < tail:
            x = queue[head]
            head += 1
            for j in range(gens.size):
                y = table[x, gens[j]]
                if not seen[y]:
                    seen[y] = True
                    queue[tail] = y
                    tail += 1
        return tail == m

    @njit(cache=True, parallel=True)
    def _nb_codes(table, inverse, rank, letters, offsets, onto, start, stop):
        m = table.shape[0]
        k = offsets.size - 1
        out = np.empty(stop - start, dtype=np.int64)
        for t in prange(stop - start):
            gens = np.empty(rank, dtype=np.int64)
            x = start + t
            for i in range(rank - 1, -1, -1):
                gens[i] = x % m
                x //= m
            if onto and not _nb_generates(table, gens):
                out[t] = -1
                continue
            code = 0
            for j in range(k):
                acc = 0
                for p in range(offsets[j], offsets[j + 1]):
                    letter = letters[p]
                    if letter > 0:
                        g = gens[letter - 1]
                    else:
                        g = inverse[gens[-letter - 1]]
                    acc = table[acc, g]
                code = code * m + acc
            out[t] = code
        return out

    _backend = "numba"


_env = os.environ.get("WORDMEASURES_BACKEND", "").strip().lower()
if _env:
    set_backend(_env)


def image_codes(table, inverse, rank, letters, offsets, onto=False, start=0, stop=None,
                backend: str | None = None) -> np.ndarray:
    """Image code of every homomorphism with index in ``[start, stop)``.

    With ``onto=True`` non-surjective homomorphisms get code -1.
    """
    m = table.shape[0]
    if stop is None:
        stop = m ** rank
    fn = _nb_codes if (backend or _backend) == "numba" else _np_codes
    return fn(np.ascontiguousarray(table, dtype=np.int64),
              np.ascontiguousarray(inverse, dtype=np.int64),
              int(rank), letters, offsets, bool(onto), int(start), int(stop))


def count_images(table, inverse, rank, words, onto=False,
                 backend: str | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Histogram of image codes over all of Hom(F_rank, G).

    Returns ``(codes, counts)`` with codes strictly increasing and every count
    positive.  Blocks are merged by addition, so the result does not depend on
    the block size or on the backend.
    """
    m = table.shape[0]
    k = len(words)
    letters, offsets = pack_words(words)
    total = m ** rank
    space = m ** k
    dense = space <= DENSE_LIMIT
    acc = np.zeros(space, dtype=np.int64) if dense else {}
    for start in range(0, total, BLOCK):
        stop = min(total, start + BLOCK)
        codes = image_codes(table, inverse, rank, letters, offsets, onto, start, stop, backend)
        if onto:
            codes = codes[codes >= 0]
        if dense:
            acc += np.bincount(codes, minlength=space)
        else:
            keys, cnt = np.unique(codes, return_counts=True)
            for key, c in zip(keys.tolist(), cnt.tolist()):
                acc[key] = acc.get(key, 0) + c
    if dense:
        codes = np.flatnonzero(acc)
        return codes.astype(np.int64), acc[codes]
    keys = sorted(acc)
    return np.array(keys, dtype=np.int64), np.array([acc[x] for x in keys], dtype=np.int64)


def decode(code: int, m: int, k: int) -> tuple[int, ...]:
    out = []
    for _ in range(k):
        out.append(code % m)
        code //= m
    return tuple(reversed(out))
