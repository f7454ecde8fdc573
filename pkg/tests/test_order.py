import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxlogic.errors import ArityOutOfRange, CycleDetected, UnknownElement
from approxlogic.order import (PosetMap, antichain, boolean_cube, build_poset, chain, chain_power, down_set,
                               dualize, embed_into_cube, is_isomorphic, is_monotone, is_self_dual,
                               max_chain_elements, minimal_elements, nonmono_domain, up_set)

from conftest import brute_leq, brute_nonmono, posets, poset_maps


def test_singleton():
    p = build_poset(["a"], [])
    assert p.leq("a", "a")
    assert list(p.strict_pairs()) == []
    assert p.covers == []


def test_chain_closure(abc):
    assert abc.leq("a", "c")
    assert not abc.leq("c", "a")
    assert abc.covers == [("a", "b"), ("b", "c")]


def test_redundant_relation_is_reduced():
    p = build_poset(["a", "b", "c"], [("a", "b"), ("b", "c"), ("a", "c")])
    assert p.covers == [("a", "b"), ("b", "c")]
    assert p.is_cover("b", "c") and not p.is_cover("a", "c")


@pytest.mark.parametrize("covers", [[("a", "b"), ("b", "a")], [("a", "a")],
                                    [("a", "b"), ("b", "c"), ("c", "a")]])
def test_cycles_rejected(covers):
    with pytest.raises(CycleDetected):
        build_poset(["a", "b", "c"], covers)


def test_unknown_element():
    with pytest.raises(UnknownElement):
        build_poset(["a"], [("a", "z")])
    with pytest.raises(UnknownElement):
        down_set(chain(3), 7)


def test_cube_shapes():
    b1 = boolean_cube(1)
    assert list(b1.elements) == [(0,), (1,)] and b1.lt((0,), (1,))
    b2 = boolean_cube(2)
    assert b2.lt((0, 0), (0, 1)) and b2.lt((1, 0), (1, 1))
    assert not b2.leq((0, 1), (1, 0)) and not b2.leq((1, 0), (0, 1))
    b3 = boolean_cube(3)
    assert len(b3) == 8 and max_chain_elements(b3) == 4


@pytest.mark.parametrize("n", [0, 17])
def test_cube_arity_range(n):
    with pytest.raises(ArityOutOfRange):
        boolean_cube(n)


def test_cube_matches_generic_construction():
    for n in range(1, 5):
        cube = boolean_cube(n)
        pts = list(itertools.product((0, 1), repeat=n))
        rel = [(a, b) for a in pts for b in pts if a != b and all(u <= v for u, v in zip(a, b))]
        generic = build_poset(pts, rel)
        assert [sorted(c) for c in cube.lower_covers] == [sorted(c) for c in generic.lower_covers]
        for x in pts:
            assert down_set(cube, x) == down_set(generic, x)
            assert up_set(cube, x) == up_set(generic, x)


def test_down_and_up_sets(abc):
    b2 = boolean_cube(2)
    assert down_set(b2, (1, 0)) == {(0, 0), (1, 0)}
    assert up_set(b2, (0, 1)) == {(0, 1), (1, 1)}
    assert down_set(abc, "c") == {"a", "b", "c"}


def test_minimal_elements(abc):
    b2 = boolean_cube(2)
    assert minimal_elements(b2, {(0, 1), (1, 0), (1, 1)}) == {(0, 1), (1, 0)}
    assert minimal_elements(b2, {(1, 1)}) == {(1, 1)}
    assert minimal_elements(abc, {"b", "c"}) == {"b"}


def test_max_chain_elements():
    assert max_chain_elements(boolean_cube(2)) == 3
    assert max_chain_elements(antichain(list("abcde"))) == 1
    for n in range(1, 8):
        assert max_chain_elements(boolean_cube(n)) == n + 1
    assert max_chain_elements(chain_power(3, 2)) == 5


def test_dualize(abc):
    d = dualize(abc)
    assert d.leq("c", "a") and not d.leq("a", "c")
    assert dualize(d) == abc
    one = build_poset(["a"], [])
    assert is_isomorphic(dualize(one), one) is not None


def test_cube_self_dual():
    assert is_self_dual(boolean_cube(2))
    assert is_self_dual(boolean_cube(3))
    v = build_poset(["a", "b", "c"], [("a", "b"), ("a", "c")])
    assert not is_self_dual(v)


def _xor():
    return PosetMap(boolean_cube(2), chain(2), [0, 1, 1, 0])


def test_is_monotone_examples():
    b2 = boolean_cube(2)
    assert is_monotone(PosetMap(b2, chain(2), [0, 0, 0, 1]))
    v = is_monotone(_xor())
    assert not v and v.witness == ((0, 1), (1, 1))
    assert is_monotone(PosetMap(b2, chain(3), [2, 2, 2, 2]))


def test_nonmono_domain_examples():
    assert nonmono_domain(_xor()).pairs == {((0, 1), (1, 1)), ((1, 0), (1, 1))}
    assert nonmono_domain(PosetMap(boolean_cube(2), chain(2), [0, 0, 0, 1])).pairs == frozenset()
    assert nonmono_domain(PosetMap(boolean_cube(1), chain(2), [1, 0])).pairs == {((0,), (1,))}


def test_embedding_examples():
    ab = build_poset(["a", "b"], [("a", "b")])
    e = embed_into_cube(ab)
    assert (e("a"), e("b")) == ((1, 0), (1, 1))
    e = embed_into_cube(antichain(["a", "b"]))
    assert (e("a"), e("b")) == ((1, 0), (0, 1))
    assert embed_into_cube(build_poset(["a"], []))("a") == (1,)


@given(posets())
def test_closure_matches_brute_force(P):
    r = brute_leq(P)
    for i, a in enumerate(P.elements):
        for j, b in enumerate(P.elements):
            assert P.leq(a, b) == r[i][j]


@given(posets())
def test_covers_are_transitive_reduction(P):
    r = brute_leq(P)
    n = len(P)
    for y in range(n):
        expected = sorted(x for x in range(n) if x != y and r[x][y]
                          and not any(z not in (x, y) and r[x][z] and r[z][y] for z in range(n)))
        assert sorted(P.lower_covers[y]) == expected


@given(posets())
def test_dual_is_involution(P):
    D = dualize(P)
    for a in P.elements:
        for b in P.elements:
            assert D.leq(a, b) == P.leq(b, a)
    assert dualize(D) == P


@given(poset_maps())
def test_nonmono_domain_matches_pair_scan(case):
    P, q, vals = case
    f = PosetMap.from_indices(P, chain(q), vals)
    want = brute_nonmono(P, vals)
    assert set(nonmono_domain(f).pairs) == want
    assert bool(is_monotone(f)) == (not want)


@given(posets(max_size=8))
def test_embedding_is_order_embedding(P):
    e = embed_into_cube(P)
    for a in P.elements:
        for b in P.elements:
            assert P.leq(a, b) == all(u <= v for u, v in zip(e(a), e(b)))


@given(st.integers(2, 4), st.integers(1, 3))
def test_chain_power_componentwise(q, n):
    P = chain_power(q, n)
    for a in P.elements:
        for b in P.elements:
            assert P.leq(a, b) == all(u <= v for u, v in zip(a, b))
