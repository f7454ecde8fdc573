import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxlogic.algebra import builtin_algebra
from approxlogic.errors import ArityMismatch, FormulaSyntaxError, UnboundUnary, UnboundVariable
from approxlogic.formula import (Bin, Const, Semantics, Unary, Var, ZVar, count_literals, dump_formula_file,
                                 evaluate_formula, load_formula_file, operators, parse_sexpr, substitute,
                                 to_sexpr)
from approxlogic.theta import special_theta
from approxlogic.order import boolean_cube


def test_evaluate_examples():
    assert evaluate_formula(Const(1), (0, 0)) == 1
    assert evaluate_formula(Bin("imp", Var(1), Const(0)), (1,)) == 0
    assert evaluate_formula(Unary("G1", Var(1)), (2,), Semantics.for_chain(3)) == 2


def test_unbound_unary():
    with pytest.raises(UnboundUnary):
        evaluate_formula(Unary("G7", Var(1)), (1,), Semantics.for_chain(3))


def test_arity_mismatch():
    with pytest.raises(ArityMismatch):
        evaluate_formula(Var(3), (0, 1))
    with pytest.raises(ArityMismatch):
        evaluate_formula(Var(1), (0, 1, 1), Semantics(2, arity=2))


def test_imp_reads_dual_algebra():
    sem = Semantics.for_chain(4, algebra=builtin_algebra("chain-dual", 4))
    assert evaluate_formula(parse_sexpr("(imp x1 x2)"), (3, 1), sem) == 1


@pytest.mark.parametrize("text", [
    "(imp (imp (or x1 x2) (and x1 x2)) lit:0)",
    "(or (u:c1 (u:G1 x2)) x1)",
    "(boxminus (boxplus x2 x1) (and x1 x2))",
    "z3",
])
def test_round_trip(text):
    assert to_sexpr(parse_sexpr(text)) == text


def test_nary_folds_left():
    assert parse_sexpr("(and x1 x2 x3)") == Bin("and", Bin("and", Var(1), Var(2)), Var(3))


@pytest.mark.parametrize("bad", ["", "(and x1", "(and x1 x2))", "(nand x1 x2)", "(u:G1 x1 x2)", "y1", "x0",
                                 "(and x1)", "theta:q"])
def test_syntax_errors(bad):
    with pytest.raises(FormulaSyntaxError):
        parse_sexpr(bad)


def test_substitute_examples():
    M = boolean_cube(2)
    alg = builtin_algebra("boolean-primal")
    th = special_theta(M, alg, (0, 0), (0, 1))
    f = substitute(ZVar(1), {1: th})
    sem = Semantics(2, algebra=alg)
    assert [evaluate_formula(f, e, sem) for e in M.elements] == [0, 1, 0, 1]
    th2 = special_theta(M, alg, (0, 0), (1, 0))
    g = substitute(Bin("boxplus", ZVar(1), ZVar(2)), {1: th, 2: th2})
    assert [evaluate_formula(g, e, sem) for e in M.elements] == [0, 1, 1, 1]
    with pytest.raises(UnboundVariable):
        substitute(Bin("boxplus", ZVar(1), ZVar(2)), {1: th})
    with pytest.raises(UnboundVariable):
        evaluate_formula(ZVar(1), (0, 0))


def test_formula_file_round_trip():
    node = parse_sexpr("(or (u:c1 (u:G2 x1)) (u:neg x2))")
    text = dump_formula_file(node, Semantics.for_chain(3), 2)
    assert text.splitlines()[0] == "# q=3 arity=2 u:G2=0,0,2 u:c1=0,0,1 u:neg=2,1,0"
    back, sem = load_formula_file(text)
    assert back == node and sem.q == 3
    for p in itertools.product(range(3), repeat=2):
        assert evaluate_formula(back, p, sem) == evaluate_formula(node, p, Semantics.for_chain(3))


def test_formula_file_rejects_partial_table():
    with pytest.raises(FormulaSyntaxError):
        load_formula_file("# q=3 u:G1=0,2\n(u:G1 x1)")


def test_counts():
    node = parse_sexpr("(imp (imp (or x1 x2) (and x1 x2)) lit:0)")
    assert count_literals(node) == 4
    assert operators(node) == {"imp", "or", "and"}


leaves = st.one_of(st.integers(1, 3).map(Var), st.integers(0, 2).map(Const))
trees = st.recursive(
    leaves,
    lambda kids: st.one_of(
        st.tuples(st.sampled_from(["and", "or", "imp"]), kids, kids).map(lambda t: Bin(*t)),
        st.tuples(st.sampled_from(["G1", "G2", "neg", "c1"]), kids).map(lambda t: Unary(*t)),
    ),
    max_leaves=12,
)


@given(trees)
def test_print_parse_identity(node):
    assert parse_sexpr(to_sexpr(node)) == node


@given(trees, st.tuples(*[st.integers(0, 2)] * 3))
def test_connectives_stay_in_range(node, point):
    assert 0 <= evaluate_formula(node, point, Semantics.for_chain(3)) <= 2
