import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxlogic.algebra import algebra_from_json, builtin_algebra
from approxlogic.errors import LevelOutOfRange, IndexOutOfRange, NonConstantDot, NotCoverPair, TableShapeMismatch
from approxlogic.formula import Bin, Const, Semantics, Unary, Var, evaluate_formula, to_sexpr, walk
from approxlogic.order import PosetMap, boolean_cube, chain, chain_power
from approxlogic.theta import (decompose_T3, gamma, gamma_kclass, make_kclass, special_theta, synthesize_mv,
                               theta_from_gamma)

from conftest import bits_of, poset_maps


def test_special_theta_examples(abc):
    alg = builtin_algebra("boolean-primal")
    th = special_theta(boolean_cube(2), alg, (0, 0), (0, 1))
    assert th.map.idx == (0, 1, 0, 1)
    th = special_theta(boolean_cube(3), alg, (0, 0, 0), (1, 0, 0))
    assert th.map.idx == tuple(e[0] for e in boolean_cube(3).elements)
    th = special_theta(abc, builtin_algebra("chain-primal", 3), "a", "b")
    assert th.map.values == (0, 2, 2)


def test_special_theta_needs_cover(abc):
    with pytest.raises(NotCoverPair):
        special_theta(abc, builtin_algebra("chain-primal", 3), "a", "c")


def test_non_constant_dot(abc):
    alg = algebra_from_json({"levels": 2, "orientation": "primal", "boxminus": [[0, 0], [1, 0]],
                             "boxplus": [[0, 1], [1, 1]], "dot": [0, 1]})
    with pytest.raises(NonConstantDot):
        special_theta(abc, alg, "a", "b")


@pytest.mark.parametrize("n", [2, 3, 4])
def test_special_thetas_are_monomials(n):
    cube = boolean_cube(n)
    alg = builtin_algebra("boolean-primal")
    for x in cube.elements:
        for c in cube.lower_covers[cube.index(x)]:
            th = special_theta(cube, alg, cube.elements[c], x)
            mono = [int(all(e[j] for j in range(n) if x[j])) for e in cube.elements]
            assert list(th.map.idx) == mono


def test_gamma_examples():
    assert gamma(3, 1) == (0, 2, 2)
    assert gamma(3, 0) == (2, 2, 2)
    assert gamma(2, 1) == (0, 1)
    with pytest.raises(LevelOutOfRange):
        gamma(3, 3)


def test_theta_from_gamma_examples():
    assert theta_from_gamma(2, 2, 1, 2).map.idx == (0, 1, 0, 1)
    assert theta_from_gamma(3, 1, 2, 1).map.idx == (0, 0, 2)
    for q in (2, 3, 4):
        assert set(theta_from_gamma(q, 2, 0, 1).map.idx) == {q - 1}
    with pytest.raises(IndexOutOfRange):
        theta_from_gamma(3, 2, 1, 3)


def test_kclass_membership():
    K = make_kclass(boolean_cube(2), builtin_algebra("boolean-primal"))
    assert K.contains((0, 0, 0, 1))      # x1 and x2
    assert K.contains((0, 1, 0, 1))      # x2
    assert K.contains((1, 1, 1, 1))
    assert not K.contains((0, 1, 1, 1))  # a join, not a meet
    G = gamma_kclass(3, 1)
    assert G.contains((0, 2, 2)) and G.contains((0, 1, 1))


def test_t3_examples():
    alg = builtin_algebra("boolean-primal")
    cube2, cube1 = boolean_cube(2), boolean_cube(1)
    f, _ = decompose_T3(PosetMap(cube2, chain(2), [0, 0, 0, 1]), alg)
    assert to_sexpr(f) == "(and x1 x2)"
    f, _ = decompose_T3(PosetMap(cube1, chain(2), [1, 0]), alg)
    assert to_sexpr(f) == "(boxminus lit:1 x1)"
    f, report = decompose_T3(PosetMap(cube2, chain(2), [0, 1, 1, 0]), alg)
    assert report.verified and report.grounded
    assert {n.op for n in walk(f) if isinstance(n, Bin)} <= {"boxminus", "boxplus", "and"}
    sem = Semantics(2, algebra=alg)
    assert [evaluate_formula(f, e, sem) for e in cube2.elements] == [0, 1, 1, 0]


def _leaves_are_monomials(node, dual=False):
    if isinstance(node, Bin) and node.op in ("boxminus", "boxplus"):
        return _leaves_are_monomials(node.left, dual) and _leaves_are_monomials(node.right, dual)
    inner = "or" if dual else "and"
    return all(isinstance(n, (Var, Const)) or (isinstance(n, Bin) and n.op == inner) for n in walk(node))


@pytest.mark.parametrize("name", ["boolean-primal", "boolean-dual"])
def test_t3_all_ternary_functions(name):
    alg = builtin_algebra(name)
    cube = boolean_cube(3)
    sem = Semantics(2, algebra=alg)
    for f in range(256):
        bits = bits_of(f, 3)
        node, _ = decompose_T3(PosetMap.from_indices(cube, alg.L, bits), alg)
        assert _leaves_are_monomials(node, dual=name == "boolean-dual")
        assert [evaluate_formula(node, e, sem) for e in cube.elements] == bits


@given(poset_maps(max_size=6, max_q=4), st.sampled_from(["chain-primal", "chain-dual"]))
def test_t3_on_random_posets(case, name):
    P, q, vals = case
    alg = builtin_algebra(name, q)
    node, report = decompose_T3(PosetMap.from_indices(P, alg.L, vals), alg)
    assert report.verified
    sem = Semantics.for_chain(q, algebra=alg)
    assert [evaluate_formula(node, e, sem) for e in P.elements] == vals


def test_t3_on_chain_power_grounds():
    alg = builtin_algebra("chain-primal", 3)
    M = chain_power(3, 2)
    vals = [2, 0, 1, 0, 2, 0, 1, 1, 2]
    node, report = decompose_T3(PosetMap.from_indices(M, alg.L, vals), alg)
    assert report.grounded
    sem = Semantics.for_chain(3, algebra=alg)
    assert [evaluate_formula(node, e, sem) for e in M.elements] == vals


def test_synthesize_examples():
    f = synthesize_mv([1, 0], 2, 1)
    assert [evaluate_formula(f, (v,)) for v in (0, 1)] == [1, 0]
    f = synthesize_mv([0, 1, 2], 3, 1)
    sem = Semantics.for_chain(3)
    assert [evaluate_formula(f, (v,), sem) for v in range(3)] == [0, 1, 2]
    f = synthesize_mv([1] * 9, 3, 2)
    assert f == Unary("c1", Const(2))
    assert all(evaluate_formula(f, p, sem) == 1 for p in itertools.product(range(3), repeat=2))


def test_synthesize_shape_errors():
    with pytest.raises(TableShapeMismatch):
        synthesize_mv([0, 1, 2], 3, 2)
    with pytest.raises(TableShapeMismatch):
        synthesize_mv([0, 3, 1], 3, 1)


def test_q2_output_is_classical():
    for f in range(16):
        node = synthesize_mv(bits_of(f, 2), 2, 2)
        assert not any(isinstance(n, Unary) for n in walk(node))


@given(st.integers(2, 5), st.integers(1, 2), st.data())
def test_synthesize_random(q, n, data):
    table = data.draw(st.lists(st.integers(0, q - 1), min_size=q ** n, max_size=q ** n))
    node = synthesize_mv(table, q, n)
    sem = Semantics.for_chain(q)
    for p, v in zip(itertools.product(range(q), repeat=n), table):
        assert evaluate_formula(node, p, sem) == v
