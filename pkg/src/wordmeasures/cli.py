"""Command line experiment runner.

Subcommands::

    catalog                              list the built-in groups
    fingerprint WORD... --group ID       fingerprint of a word tuple on one group
    compare T U [--condition C]          compare two tuples across a catalog
    subgroup-compare GENS1 GENS2         compare the subgroups two bases generate
    rigidity T U                         measures + quotient automorphisms + orbit test
    search-inverse --max-len L           look for w with Pr_w != Pr_{w^-1}

Tuples are comma separated words, e.g. ``aa,bb``.  Exit codes: 0 success or
equal, 1 unequal or different, 2 usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import itertools
import json
import os
import sys
from dataclasses import dataclass, field, fields, replace
from typing import Sequence

from . import groups as grp
from . import measures as ms
from . import stallings, whitehead
from .errors import (InvalidLetter, RankMismatch, ResourceCapExceeded, TupleArityMismatch,
                     TupleNotBasis, UnknownGroup, WordMeasureError)
from .words import Word, format_tuple, format_word, invert, parse_tuple, with_rank

EXIT_OK, EXIT_DIFFERENT, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

ENV_OVERRIDES = {
    "budget": "WORDMEASURES_BUDGET",
    "quotient_cap": "WORDMEASURES_QUOTIENT_CAP",
    "orbit_node_cap": "WORDMEASURES_ORBIT_NODE_CAP",
}


@dataclass
class ExperimentConfig:
    catalog: list[str] = field(default_factory=lambda: list(grp.DEFAULT_CATALOG))
    rank: int | None = None
    budget: int = 10 ** 7
    quotient_cap: int = 10 ** 5
    orbit_node_cap: int = 10 ** 6
    output_path: str | None = None

    def __post_init__(self):
        for gid in self.catalog:
            grp.catalog_group(gid)
        for name in ("budget", "quotient_cap", "orbit_node_cap"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.rank is not None and self.rank <= 0:
            raise ValueError("rank must be positive")

    def groups(self) -> list[grp.FiniteGroup]:
        return grp.catalog(self.catalog)


def _coerce(name: str, value: str):
    if name == "catalog":
        return [s.strip() for s in value.split(",") if s.strip()]
    if name == "output_path":
        return value or None
    return int(value.replace("_", ""))


def load_config(path: str | None = None, env=os.environ) -> ExperimentConfig:
    """Defaults, then ``key = value`` lines from ``path``, then environment overrides."""
    values: dict = {}
    known = {f.name for f in fields(ExperimentConfig)}
    if path:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ValueError(f"{path}:{lineno}: expected key = value")
                key, value = (s.strip() for s in line.split("=", 1))
                if key not in known:
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                values[key] = _coerce(key, value)
    for key, var in ENV_OVERRIDES.items():
        if env.get(var):
            values[key] = _coerce(key, env[var])
    return ExperimentConfig(**values)


# -- pipelines ------------------------------------------------------------------

def _common_rank(T: Sequence[Word], U: Sequence[Word], rank: int | None) -> int:
    need = max(w.rank for w in list(T) + list(U))
    if rank is None:
        return need
    if rank < need:
        raise RankMismatch(f"words need rank >= {need}, got --rank {rank}")
    return rank


def _lift(T: Sequence[Word], rank: int) -> tuple[Word, ...]:
    return tuple(with_rank(w, rank) for w in T)


def fingerprint(words: Sequence[str], group_id: str, rank: int | None = None,
                budget: int = 10 ** 7) -> ms.Fingerprint:
    T = parse_tuple(list(words))
    rank = _common_rank(T, T, rank)
    return ms.hom_fingerprint(_lift(T, rank), grp.catalog_group(group_id), rank, budget)


def compare(T, U, cfg: ExperimentConfig, condition: str = "hom") -> ms.ComparisonReport:
    if len(T) != len(U):
        raise TupleArityMismatch(f"arity {len(T)} vs {len(U)}")
    rank = _common_rank(T, U, cfg.rank)
    return ms.tuple_measures_equal(_lift(T, rank), _lift(U, rank), cfg.groups(), condition,
                                   rank, cfg.budget, quotient_cap=cfg.quotient_cap)


def subgroup_compare(gens1, gens2, cfg: ExperimentConfig) -> ms.ComparisonReport:
    """Compare <gens1> and <gens2> under the isomorphism gens1[i] -> gens2[i]."""
    rank = _common_rank(gens1, gens2, cfg.rank)
    A, B = _lift(gens1, rank), _lift(gens2, rank)
    for T in (A, B):
        if not stallings.is_basis(T):
            graph = stallings.build(T, rank)
            raise TupleNotBasis(
                f"({format_tuple(T)}) is not a free basis of the subgroup it generates; "
                f"use its extracted basis ({format_tuple(stallings.basis(graph))})")
    if len(A) != len(B):
        raise TupleArityMismatch(f"arity {len(A)} vs {len(B)}")
    return ms.tuple_measures_equal(A, B, cfg.groups(), "hom", rank, cfg.budget)


MEASURES_DIFFER = "MeasuresDiffer"
ORBIT_SAME = "MeasuresAgree+OrbitSame"
ORBIT_DIFFERENT = "MeasuresAgree+OrbitDifferent"
ORBIT_UNKNOWN = "MeasuresAgree+OrbitUnknown"


def rigidity_experiment(T, U, cfg: ExperimentConfig) -> dict:
    """Finite-level conditions on every catalog group, then the Aut(F_n) orbit test."""
    if len(T) != len(U):
        raise TupleArityMismatch(f"arity {len(T)} vs {len(U)}")
    rank = _common_rank(T, U, cfg.rank)
    T, U = _lift(T, rank), _lift(U, rank)
    groups = cfg.groups()
    reports = {c: ms.tuple_measures_equal(T, U, groups, c, rank, cfg.budget)
               for c in ("hom", "epi", "imepi")}
    abelian = [G for G in groups if G.is_abelian()]
    reports["quotient"] = ms.tuple_measures_equal(T, U, abelian, "quotient", rank, cfg.budget,
                                                  quotient_cap=cfg.quotient_cap)
    agree = all(reports[c].verdict for c in ("hom", "epi", "imepi"))
    witness = None
    if not agree:
        for G in groups:
            failed = [c for c in ("hom", "epi", "imepi")
                      if any(r.group == G.name and r.equal is False for r in reports[c].rows)]
            if failed:
                witness = {"group": G.name, "conditions": failed}
                break
    orbit = whitehead.same_orbit(T, U, node_cap=cfg.orbit_node_cap)
    if orbit.status is whitehead.Status.SAME and not agree:
        raise AssertionError("automorphic tuples with different measures: internal error")
    if not agree:
        verdict = MEASURES_DIFFER
    else:
        verdict = {whitehead.Status.SAME: ORBIT_SAME,
                   whitehead.Status.DIFFERENT: ORBIT_DIFFERENT,
                   whitehead.Status.UNKNOWN: ORBIT_UNKNOWN}[orbit.status]
    return {"T": format_tuple(T), "U": format_tuple(U), "rank": rank,
            "classification": verdict, "witness": witness,
            "conditions": {c: r.to_dict() for c, r in reports.items()},
            "orbit": orbit.to_dict()}


def reduced_words(rank: int, max_len: int):
    """Non-empty reduced words in shortlex order with letters ordered a < A < b < B < ..."""
    alphabet = [x for i in range(1, rank + 1) for x in (i, -i)]
    for length in range(1, max_len + 1):
        for letters in itertools.product(alphabet, repeat=length):
            if any(x == -y for x, y in zip(letters, letters[1:])):
                continue
            yield Word(letters, rank)


def search_inverse_witness(max_len: int, cfg: ExperimentConfig, rank: int = 2) -> dict:
    """First (w, G, g) in scan order with Pr_w(g) != Pr_{w^-1}(g)."""
    groups = cfg.groups()
    checked = 0
    for w in reduced_words(rank, max_len):
        checked += 1
        for G in groups:
            fw = ms.hom_fingerprint((w,), G, rank, cfg.budget)
            fwi = ms.hom_fingerprint((invert(w),), G, rank, cfg.budget)
            if fw != fwi:
                g = next(k for k in sorted(set(fw.counts) | set(fwi.counts)) if fw[k] != fwi[k])
                return {"found": True, "word": format_word(w), "inverse": format_word(invert(w)),
                        "group": G.name, "element": g[0], "label": G.labels[g[0]],
                        "count_w": fw[g], "count_inverse": fwi[g], "total": fw.total,
                        "words_checked": checked}
    return {"found": False, "max_len": max_len, "rank": rank, "words_checked": checked,
            "groups": [G.name for G in groups], "message": "none at this scale"}


# -- output ---------------------------------------------------------------------

def _dump(obj, args) -> None:
    text = json.dumps(obj, indent=2, sort_keys=False)
    if args.output_path:
        with open(args.output_path, "w") as fh:
            fh.write(text + "\n")
    print(text)


def _fingerprint_table(fp: ms.Fingerprint, G: grp.FiniteGroup) -> str:
    lines = [f"group {fp.group} (order {fp.order}), arity {fp.arity}, total {fp.total}"]
    for key, n in fp.counts.items():
        labels = " ".join(G.labels[x] for x in key)
        lines.append(f"  {str(list(key)):<16} {labels:<16} {n}")
    return "\n".join(lines)


def _report_table(rep: ms.ComparisonReport) -> str:
    lines = [f"condition: {rep.condition}"]
    for r in rep.rows:
        mark = {True: "equal", False: "UNEQUAL", None: "skipped"}[r.equal]
        lines.append(f"  {r.group:<8} {r.order:>4}  {mark:<8} {r.detail}")
    lines.append(f"verdict: {'equal' if rep.verdict else 'unequal'}")
    return "\n".join(lines)


# -- argument parsing -----------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--config", help="key = value file mirroring ExperimentConfig")
    shared.add_argument("--output", choices=("json", "table"), default="json")
    shared.add_argument("--output-path", help="also write the JSON result to this file")

    p = argparse.ArgumentParser(prog="wordmeasures", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help, catalog=True, rank=True):
        sp = sub.add_parser(name, help=help, parents=[shared])
        if rank:
            sp.add_argument("--rank", type=int, help="ambient free rank (default: from the words)")
        if catalog:
            sp.add_argument("--catalog", help="comma separated group ids (default: all)")
        return sp

    add("catalog", "list group ids and orders", catalog=False, rank=False)

    sp = add("fingerprint", "hom fingerprint of a word tuple", catalog=False)
    sp.add_argument("words", nargs="+")
    sp.add_argument("--group", required=True)

    sp = add("compare", "compare two tuples across the catalog")
    sp.add_argument("T")
    sp.add_argument("U")
    sp.add_argument("--condition", choices=ms.CONDITIONS, default="hom")

    sp = add("subgroup-compare", "compare subgroups given by free bases")
    sp.add_argument("gens1")
    sp.add_argument("gens2")

    sp = add("rigidity", "full rigidity pipeline for two tuples")
    sp.add_argument("T")
    sp.add_argument("U")

    sp = add("search-inverse", "search for w with Pr_w != Pr_{w^-1}", rank=False)
    sp.add_argument("--max-len", type=int, required=True)
    sp.add_argument("--rank", type=int, default=2)
    return p


def _config_from_args(args) -> ExperimentConfig:
    cfg = load_config(args.config)
    changes = {}
    if getattr(args, "catalog", None):
        changes["catalog"] = [s for s in args.catalog.split(",") if s]
    if getattr(args, "rank", None) is not None and args.command != "search-inverse":
        changes["rank"] = args.rank
    if args.output_path:
        changes["output_path"] = args.output_path
    return replace(cfg, **changes) if changes else cfg


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config_from_args(args)
        args.output_path = cfg.output_path
        return _dispatch(args, cfg)
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvalidLetter, RankMismatch, TupleArityMismatch, TupleNotBasis, UnknownGroup,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except WordMeasureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DIFFERENT


def _dispatch(args, cfg: ExperimentConfig) -> int:
    if args.command == "catalog":
        rows = [{"id": gid, "order": grp.catalog_group(gid).order,
                 "abelian": grp.catalog_group(gid).is_abelian()} for gid in grp.DEFAULT_CATALOG]
        if args.output == "table":
            for r in rows:
                print(f"{r['id']:<8} {r['order']:>4}  {'abelian' if r['abelian'] else ''}")
        else:
            _dump(rows, args)
        return EXIT_OK

    if args.command == "fingerprint":
        G = grp.catalog_group(args.group)
        fp = fingerprint(args.words, args.group, cfg.rank, cfg.budget)
        if args.output == "table":
            print(_fingerprint_table(fp, G))
        else:
            _dump(fp.to_dict(), args)
        return EXIT_OK

    if args.command in ("compare", "subgroup-compare"):
        if args.command == "compare":
            rep = compare(parse_tuple(args.T), parse_tuple(args.U), cfg, args.condition)
        else:
            rep = subgroup_compare(parse_tuple(args.gens1), parse_tuple(args.gens2), cfg)
        if args.output == "table":
            print(_report_table(rep))
        else:
            _dump(rep.to_dict(), args)
        return EXIT_OK if rep.verdict else EXIT_DIFFERENT

    if args.command == "rigidity":
        res = rigidity_experiment(parse_tuple(args.T), parse_tuple(args.U), cfg)
        if args.output == "table":
            print(f"{res['T']}  vs  {res['U']}  (rank {res['rank']})")
            for c, rep in res["conditions"].items():
                print(f"  {c:<9} {rep['verdict']}")
            print(f"  orbit     {res['orbit']['status']}: {res['orbit']['certificate']}")
            if res["witness"]:
                print(f"  witness   {res['witness']['group']} ({', '.join(res['witness']['conditions'])})")
            print(res["classification"])
        else:
            _dump(res, args)
        return EXIT_OK if res["classification"] == ORBIT_SAME else EXIT_DIFFERENT

    if args.command == "search-inverse":
        res = search_inverse_witness(args.max_len, cfg, args.rank)
        if args.output == "table":
            if res["found"]:
                print(f"w = {res['word']} on {res['group']} at {res['label']}: "
                      f"{res['count_w']}/{res['total']} vs {res['count_inverse']}/{res['total']}")
            else:
                print(f"none at this scale ({res['words_checked']} words, max length {args.max_len})")
        else:
            _dump(res, args)
        return EXIT_OK
    raise AssertionError(args.command)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
