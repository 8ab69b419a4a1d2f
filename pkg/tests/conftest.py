import random

import pytest
from hypothesis import settings, strategies as st

from wordmeasures.words import Word, reduce

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=20261016,
                     help="seed for the randomised acceptance checks")


@pytest.fixture
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture
def rng(seed):
    return random.Random(seed)


def raw_letters(rank, max_len=12):
    letters = [x for i in range(1, rank + 1) for x in (i, -i)]
    return st.lists(st.sampled_from(letters), max_size=max_len)


def words(rank, max_len=12):
    return raw_letters(rank, max_len).map(lambda xs: reduce(xs, rank))


def random_word(rng, rank, max_len):
    """Uniformly chosen raw letters, freely reduced (may come out shorter)."""
    n = rng.randint(0, max_len)
    letters = [rng.choice([1, -1]) * rng.randint(1, rank) for _ in range(n)]
    return reduce(letters, rank)


def random_tuple(rng, rank, arity, max_len):
    return tuple(random_word(rng, rank, max_len) for _ in range(arity))


def w(text, rank=None):
    from wordmeasures.words import parse_word
    return parse_word(text, rank)


__all__ = ["Word", "words", "raw_letters", "random_word", "random_tuple", "w"]


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance ledger, one line per criterion, after the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in RESULTS:
        terminalreporter.write_line(line)
