"""Time the homomorphism enumeration kernel on both backends.

Usage::

    python benchmarks/bench_kernels.py --group S4 --rank 3 --repeat 3

The first numba call includes compilation (or a cache load); it is reported
separately as ``warmup`` and excluded from the timed repeats.
"""

from __future__ import annotations

import argparse
import time

from wordmeasures import _kernels
from wordmeasures.groups import catalog_group
from wordmeasures.measures import epi_fingerprint_direct, hom_fingerprint
from wordmeasures.words import parse_tuple


def bench(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--group", default="S4")
    ap.add_argument("--rank", type=int, default=3)
    ap.add_argument("--words", default="abAB,cacb,bcA")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--onto", action="store_true", help="time the surjective-only count")
    args = ap.parse_args(argv)

    G = catalog_group(args.group)
    T = parse_tuple(args.words, args.rank)
    fn = epi_fingerprint_direct if args.onto else hom_fingerprint
    n_homs = G.order ** args.rank
    print(f"{args.group} (order {G.order}), rank {args.rank}, {n_homs} homomorphisms, "
          f"words {args.words}{' [onto]' if args.onto else ''}")

    results = {}
    for backend in _kernels.available_backends():
        if backend == "numba":
            t = time.perf_counter()
            fn(T, G, rank=args.rank, backend=backend)
            print(f"  numba warmup  {time.perf_counter() - t:8.4f} s")
        best, fp = bench(lambda: fn(T, G, rank=args.rank, backend=backend), args.repeat)
        results[backend] = fp
        print(f"  {backend:<6} best  {best:8.4f} s   {n_homs / best / 1e6:8.2f} M homs/s")
    fps = list(results.values())
    print("  backends agree:", all(fp == fps[0] for fp in fps))


if __name__ == "__main__":
    main()
