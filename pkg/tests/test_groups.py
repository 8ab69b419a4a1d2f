import itertools

import numpy as np
import pytest

import oracles as o
from wordmeasures.errors import GroupTooLarge, InvalidElement, NotAGroup, UnknownGroup
from wordmeasures.groups import (DEFAULT_CATALOG, all_subgroups, alternating, automorphism_search,
                                 automorphisms, catalog_group, cyclic, dihedral, direct_product,
                                 from_table, generated_closure, is_automorphism, quaternion8,
                                 symmetric)

ORDERS = {"Z1": 1, "Z2": 2, "Z3": 3, "Z4": 4, "Z5": 5, "Z6": 6, "Z7": 7, "Z8": 8, "Z2xZ2": 4,
          "Z2xZ4": 8, "S3": 6, "D4": 8, "D5": 10, "Q8": 8, "A4": 12, "S4": 24}


def test_catalog_orders():
    assert set(DEFAULT_CATALOG) == set(ORDERS)
    for gid, n in ORDERS.items():
        assert catalog_group(gid).order == n


def test_unknown_group():
    with pytest.raises(UnknownGroup):
        catalog_group("S5")


@pytest.mark.parametrize("gid", DEFAULT_CATALOG)
def test_catalog_groups_satisfy_axioms(gid):
    G = catalog_group(gid)
    t = G.table
    ar = np.arange(G.order)
    assert (t[0] == ar).all() and (t[:, 0] == ar).all()
    assert (t[ar, G.inverse] == 0).all()
    assert (t[t[:, :, None], ar] == t[ar[:, None, None], t[None]]).all()


def test_small_constructors():
    assert cyclic(1).order == 1
    assert symmetric(3).order == 6
    V = direct_product(cyclic(2), cyclic(2))
    assert V.order == 4 and V.exponent() == 2
    assert quaternion8().exponent() == 4
    assert not dihedral(4).is_abelian()
    assert alternating(4).order == 12


def test_canonical_orderings():
    S3 = symmetric(3)
    assert S3.labels[0] == "123" and S3.labels[-1] == "321"
    P = direct_product(cyclic(2), cyclic(4))
    assert P.labels[5] == "(1,1)"
    assert P.multiply(5, 7) == 0  # (1,1) + (1,3) = (0,0)


def test_multiply_examples():
    Z4 = cyclic(4)
    assert Z4.multiply(3, 2) == 1
    for gid in ("S3", "Q8", "A4"):
        G = catalog_group(gid)
        for g in range(G.order):
            assert G.multiply(0, g) == g
            assert G.multiply(g, G.inv(g)) == 0
    with pytest.raises(InvalidElement):
        Z4.multiply(4, 0)


@pytest.mark.parametrize("gid, factory", [
    ("Z6", lambda: o.zmod(6)),
    ("S3", lambda: o.perms(3)),
    ("Z2xZ4", lambda: o.product(o.zmod(2), o.zmod(4))),
])
def test_tables_match_first_principles(gid, factory):
    els, mul = factory()
    G = catalog_group(gid)
    index = {e: i for i, e in enumerate(els)}
    for a, b in itertools.product(els, repeat=2):
        assert G.table[index[a], index[b]] == index[mul(a, b)]


def test_from_table():
    G = from_table("[[0,1],[1,0]]")
    assert G.order == 2
    for bad in ([[0, 1], [1, 1]], [[1, 0], [0, 1]], [[0, 1, 2], [1, 2, 0], [2, 1, 0]], "[[0,", [[0, 1]]):
        with pytest.raises((NotAGroup, ValueError)):
            from_table(bad)


def test_from_table_rejects_non_associative_latin_square():
    # a loop of order 5 with identity 0 that is not a group
    t = [[0, 1, 2, 3, 4],
         [1, 0, 3, 4, 2],
         [2, 4, 0, 1, 3],
         [3, 2, 4, 0, 1],
         [4, 3, 1, 2, 0]]
    with pytest.raises(NotAGroup, match="associative"):
        from_table(t)


def test_generated_closure_examples():
    S3 = symmetric(3)
    assert generated_closure(S3, []).elements == (0,)
    transposition = S3.labels.index("213")
    three_cycle = S3.labels.index("231")
    assert generated_closure(S3, [transposition]).order == 2
    assert generated_closure(S3, [transposition, three_cycle]).order == 6


@pytest.mark.parametrize("gid", DEFAULT_CATALOG)
def test_closure_is_fixed_point(gid):
    G = catalog_group(gid)
    for g in range(G.order):
        H = generated_closure(G, [g, G.order - 1 - g])
        assert generated_closure(G, H.elements) == H


@pytest.mark.parametrize("gid, count", [
    ("Z1", 1), ("Z2", 2), ("Z3", 2), ("Z5", 2), ("Z7", 2), ("Z4", 3), ("Z6", 4), ("Z8", 4),
    ("Z2xZ2", 5), ("S3", 6), ("Q8", 6), ("D4", 10), ("A4", 10), ("D5", 8), ("Z2xZ4", 8), ("S4", 30),
])
def test_subgroup_counts(gid, count):
    assert len(all_subgroups(catalog_group(gid))) == count


@pytest.mark.parametrize("gid, factory", [
    ("S3", lambda: o.perms(3)), ("Z4", lambda: o.zmod(4)), ("S4", lambda: o.perms(4)),
    ("Z2xZ4", lambda: o.product(o.zmod(2), o.zmod(4))),
])
def test_subgroups_match_oracle(gid, factory):
    els, _ = group = factory()
    index = {e: i for i, e in enumerate(els)}
    expected = {frozenset(index[x] for x in H) for H in o.subgroups(group)}
    got = {H.elementset for H in all_subgroups(catalog_group(gid))}
    assert got == expected


def test_s3_subgroup_profile():
    orders = sorted(H.order for H in all_subgroups(symmetric(3)))
    assert orders == [1, 2, 2, 2, 3, 6]


@pytest.mark.parametrize("gid", ["S3", "D4", "Q8", "A4", "Z2xZ4"])
def test_subgroups_closed_under_intersection(gid):
    subs = {H.elementset for H in all_subgroups(catalog_group(gid))}
    for A in subs:
        for B in subs:
            assert A & B in subs


def test_subgroup_cap():
    with pytest.raises(GroupTooLarge):
        all_subgroups(symmetric(5))
    assert len(all_subgroups(symmetric(4), max_order=24)) == 30


def test_subgroup_as_group():
    S4 = symmetric(4)
    for H in all_subgroups(S4):
        K = H.as_group()
        assert K.order == H.order
        el = H.elements
        for i in range(K.order):
            for j in range(K.order):
                assert el[K.table[i, j]] == S4.table[el[i], el[j]]


@pytest.mark.parametrize("gid, n_aut", [
    ("Z1", 1), ("Z2", 1), ("Z4", 2), ("Z5", 4), ("Z8", 4), ("Z2xZ2", 6), ("Z2xZ4", 8), ("S3", 6),
    ("D4", 8), ("D5", 20), ("Q8", 24), ("A4", 24), ("S4", 24),
])
def test_automorphism_group_orders(gid, n_aut):
    G = catalog_group(gid)
    auts = automorphisms(G)
    assert len(auts) == n_aut
    assert len({tuple(f) for f in auts}) == n_aut
    assert all(is_automorphism(G, f) for f in auts)


@pytest.mark.parametrize("gid, factory", [("S3", lambda: o.perms(3)), ("Z2xZ2", lambda: o.product(o.zmod(2), o.zmod(2))),
                                          ("Z6", lambda: o.zmod(6))])
def test_automorphism_counts_match_oracle(gid, factory):
    assert len(automorphisms(catalog_group(gid))) == o.automorphism_count(factory())


def test_automorphism_search_examples():
    for gid in ("Z6", "S3", "Q8"):
        G = catalog_group(gid)
        f = automorphism_search(G, [1, 2], [1, 2])
        assert f is not None and list(f) == list(range(G.order))
    V = direct_product(cyclic(2), cyclic(2))
    e10, e01 = V.labels.index("(1,0)"), V.labels.index("(0,1)")
    f = automorphism_search(V, [e10, e01], [e01, e10])
    assert f is not None and f[e10] == e01 and f[e01] == e10 and is_automorphism(V, f)
    assert automorphism_search(cyclic(4), [1], [2]) is None


def test_automorphism_search_is_lexicographically_first_and_verified():
    G = symmetric(4)
    t = G.labels.index("2134")
    for dst in range(G.order):
        f = automorphism_search(G, [t], [dst])
        candidates = [a for a in automorphisms(G) if a[t] == dst]
        if not candidates:
            assert f is None
            continue
        assert is_automorphism(G, f)
        assert any((f == a).all() for a in candidates)


def test_automorphism_search_inconsistent_constraint():
    G = cyclic(5)
    assert automorphism_search(G, [1, 1], [2, 3]) is None
    assert automorphism_search(G, [1, 2], [2, 4]) is not None
    assert automorphism_search(G, [1, 2], [2, 3]) is None


def test_automorphism_search_cap():
    with pytest.raises(GroupTooLarge):
        automorphism_search(cyclic(60), [1], [1])
