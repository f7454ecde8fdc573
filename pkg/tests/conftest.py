import itertools
import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from approxlogic import build_poset

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def posets(draw, max_size=7):
    """Posets on e0..e{k-1}; relations only point forward, so the input is acyclic."""
    size = draw(st.integers(1, max_size))
    pairs = [(i, j) for i in range(size) for j in range(i + 1, size)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    ids = [f"e{i}" for i in range(size)]
    return build_poset(ids, [(ids[i], ids[j]) for i, j in chosen])


@st.composite
def poset_maps(draw, max_size=7, max_q=5):
    P = draw(posets(max_size))
    q = draw(st.integers(2, max_q))
    vals = draw(st.lists(st.integers(0, q - 1), min_size=len(P), max_size=len(P)))
    return P, q, vals


def brute_leq(P):
    """Reflexive-transitive closure of the cover relation, by Floyd-Warshall."""
    n = len(P)
    r = [[i == j for j in range(n)] for i in range(n)]
    for i in range(n):
        for c in P.lower_covers[i]:
            r[c][i] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        if r[i][k] and r[k][j]:
            r[i][j] = True
    return r


def brute_nonmono(P, vals):
    """All comparable pairs (x < y) whose values break the order on a chain codomain."""
    r = brute_leq(P)
    return {(P.elements[i], P.elements[j]) for i in range(len(P)) for j in range(len(P))
            if i != j and r[i][j] and vals[i] > vals[j]}


def bits_of(f, n):
    size = 1 << n
    return [(f >> (size - 1 - i)) & 1 for i in range(size)]


@pytest.fixture
def diamond():
    return build_poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])


@pytest.fixture
def abc():
    return build_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
