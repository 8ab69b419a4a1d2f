import pytest
from hypothesis import given, strategies as st

from conftest import raw_letters, w, words
from oracles import free_reduce
from wordmeasures.errors import InvalidLetter, RankMismatch
from wordmeasures.words import (Endomorphism, Word, apply_endo, compose, concat, cyclically_reduce,
                                format_word, identity_endo, invert, parse_tuple, parse_word, reduce)


@pytest.mark.parametrize("raw, rank, expected", [
    ([1, -1], 2, ()),
    ([1, 2, -2, 1], 2, (1, 1)),
    ([1, 2, -2, -1, 3], 3, (3,)),
])
def test_reduce_examples(raw, rank, expected):
    assert reduce(raw, rank).letters == expected


def test_reduce_rejects_out_of_range():
    with pytest.raises(InvalidLetter):
        reduce([1, 3], 2)
    with pytest.raises(InvalidLetter):
        reduce([0], 2)


def test_word_constructor_requires_reduced():
    with pytest.raises(InvalidLetter):
        Word((1, -1), 1)


@pytest.mark.parametrize("a, b, expected", [("a", "A", "1"), ("ab", "Ba", "aa"), ("1", "b", "b")])
def test_concat_examples(a, b, expected):
    assert format_word(concat(w(a, 2), w(b, 2))) == expected


def test_concat_rank_mismatch():
    with pytest.raises(RankMismatch):
        concat(w("a", 1), w("a", 2))


@pytest.mark.parametrize("a, expected", [("ab", "BA"), ("1", "1"), ("aBa", "AbA")])
def test_invert_examples(a, expected):
    assert format_word(invert(w(a, 2))) == expected


@pytest.mark.parametrize("a, core, conj", [("aba", "aba", "1"), ("bAB", "A", "b"), ("abA", "b", "a")])
def test_cyclically_reduce_examples(a, core, conj):
    c, u = cyclically_reduce(w(a, 2))
    assert (format_word(c), format_word(u)) == (core, conj)


def test_apply_endo_examples():
    assert apply_endo(identity_endo(2), w("ab")) == w("ab")
    e = Endomorphism(2, (w("ab"), w("b", 2)))
    assert apply_endo(e, w("aB")) == w("a", 2)
    swap = Endomorphism(2, (w("b"), w("a", 2)))
    assert format_word(apply_endo(swap, w("aab"))) == "bba"


@pytest.mark.parametrize("text", ["1", "a", "aBcD", "zyX"])
def test_text_round_trip(text):
    assert format_word(parse_word(text)) == text


def test_parse_rejects_garbage():
    for bad in ["", "a1", "a-b", " "]:
        with pytest.raises(InvalidLetter):
            parse_word(bad)
    with pytest.raises(InvalidLetter):
        parse_word("c", 2)


def test_parse_tuple_common_rank():
    T = parse_tuple("a,bb")
    assert [x.rank for x in T] == [2, 2]


@given(raw_letters(3))
def test_reduce_matches_naive_oracle_and_is_idempotent(raw):
    r = reduce(raw, 3)
    assert list(r.letters) == free_reduce(raw)
    assert reduce(r.letters, 3) == r


@given(words(3), words(3))
def test_length_bounds(a, b):
    assert len(concat(a, b)) <= len(a) + len(b)
    assert len(invert(a)) == len(a)
    assert invert(invert(a)) == a
    assert concat(a, invert(a)).is_empty()


@given(words(2))
def test_cyclic_core(a):
    core, u = cyclically_reduce(a)
    assert concat(concat(u, core), invert(u)) == a
    if len(core) > 1:
        assert core.letters[0] != -core.letters[-1]


@given(st.lists(words(2, 4), min_size=2, max_size=2), st.lists(words(2, 4), min_size=2, max_size=2),
       words(2), words(2))
def test_apply_endo_is_homomorphism_and_composes(im1, im2, a, b):
    e1, e2 = Endomorphism(2, tuple(im1)), Endomorphism(2, tuple(im2))
    assert apply_endo(e1, concat(a, b)) == concat(apply_endo(e1, a), apply_endo(e1, b))
    assert apply_endo(e1, apply_endo(e2, a)) == apply_endo(compose(e1, e2), a)
