"""Formula-level decomposition over theta functions, and threshold synthesis
for finite many-valued logics.

A theta function is monotone and two-valued: a maximal level on an up-set and
the (constant) dot value elsewhere. For dual algebras "up-set" and "maximal"
are read in the reversed orders, so on a Boolean cube the primal thetas are
positive monomials and the dual ones positive clauses.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .algebra import DUAL, ApproximationAlgebra, ensure_axioms, solve_residual_idx
from .errors import (AlgebraDefect, ConstructionError, IndexOutOfRange, IterationOverflow, LevelOutOfRange,
                     NonConstantDot, NotCoverPair, NotMonotone, NotRepresentable, TableShapeMismatch)
from .formula import (Bin, Const, Node, Semantics, ThetaLeaf, Unary, Var, ZVar, conj, evaluate_formula,
                      standard_unaries, substitute)
from .order import BooleanCube, Poset, PosetMap, chain, chain_power, element_key, is_monotone


@dataclass(frozen=True)
class ThetaFunction:
    map: PosetMap
    kind: str
    provenance: tuple = ()
    label: str = ""

    def __post_init__(self):
        v = is_monotone(self.map)
        if not v:
            raise NotMonotone(f"theta function {self.label or self.kind} is not monotone at {v.witness}")

    @property
    def table(self) -> tuple:
        return self.map.values


def _view(M: Poset, alg: ApproximationAlgebra):
    """Domain order, primal algebra view and the (top, floor) level indices used by thetas."""
    view = alg.primal_view
    Mv = M.dual if alg.orientation == DUAL else M
    floor = alg.constant_dot
    if floor is None:
        raise NonConstantDot(f"{alg.name}: theta functions need a constant dot operation")
    Lv = view.L
    top = next(i for i in range(len(Lv)) if not Lv.upper_covers[i])
    return Mv, view, top, floor


def _upset_table(Mv: Poset, x: int, top: int, floor: int) -> list[int]:
    t = [floor] * len(Mv)
    for z in Mv.up_indices(x):
        t[z] = top
    return t


def upset_theta(M: Poset, alg: ApproximationAlgebra, x, level=None) -> ThetaFunction:
    """Theta on the up-set of ``x``; ``level`` scales the top value down (chains only)."""
    Mv, _, top, floor = _view(M, alg)
    xi = M.index(x)
    hi = top if level is None else alg.L.index(level)
    table = _upset_table(Mv, xi, hi, floor)
    kind = "upset" if hi == top else "scaled"
    label = element_key(x) if hi == top else f"{alg.L.elements[hi]}@{element_key(x)}"
    return ThetaFunction(PosetMap.from_indices(M, alg.L, table), kind, (x,) if hi == top else (x, alg.L.elements[hi]), label)


def special_theta(M: Poset, alg: ApproximationAlgebra, y, x) -> ThetaFunction:
    """The special theta for the cover pair y < x: top on the up-set of x, the dot constant elsewhere."""
    Mv, _, top, floor = _view(M, alg)
    yi, xi = M.index(y), M.index(x)
    if yi not in Mv.lower_covers[xi]:
        raise NotCoverPair(f"{x!r} does not cover {y!r}")
    table = _upset_table(Mv, xi, top, floor)
    return ThetaFunction(PosetMap.from_indices(M, alg.L, table), "special", (y, x), element_key(x))


def gamma(q: int, i: int) -> tuple[int, ...]:
    """Threshold at level i: top where v >= i, bottom below."""
    if not 0 <= i < q:
        raise LevelOutOfRange(f"threshold level {i} outside 0..{q - 1}")
    return tuple(q - 1 if i <= v else 0 for v in range(q))


def theta_from_gamma(q: int, n: int, i: int, j: int) -> ThetaFunction:
    """Gamma_i applied to coordinate j of L_q^n."""
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"variable index {j} outside 1..{n}")
    g = gamma(q, i)
    dom = chain_power(q, n)
    table = [g[e[j - 1]] for e in dom.elements]
    return ThetaFunction(PosetMap.from_indices(dom, chain(q), table), "gamma", (i, j), f"G{i}(x{j})")


@dataclass
class KClass:
    """Generators closed under pointwise meet, optionally composed with monotone unaries.

    Meet and "top" are taken in the algebra's primal view, so for dual
    algebras the closure is under pointwise join in the original order.
    """

    domain: Poset
    codomain: Poset
    generators: tuple
    top: int
    floor: int
    reversed_order: bool = False
    scalers: bool = False

    @property
    def _order(self):
        return self.codomain.dual if self.reversed_order else self.codomain

    def _meet(self, a: int, b: int) -> int:
        return a if self._order.leq_idx(a, b) else b

    def contains(self, f) -> bool:
        idx = f.idx if isinstance(f, PosetMap) else tuple(f)
        if len(idx) != len(self.domain):
            return False
        values = set(idx)
        if len(values) == 1:
            return True
        if len(values) != 2:
            return False
        order = self._order
        a, b = sorted(values)
        if order.leq_idx(a, b):
            lo, hi = a, b
        elif order.leq_idx(b, a):
            lo, hi = b, a
        else:
            return False
        if not self.scalers and (lo, hi) != (self.floor, self.top):
            return False
        indicator = [self.top if v == hi else self.floor for v in idx]
        return self._in_meet_closure(indicator)

    def _in_meet_closure(self, t) -> bool:
        order = self._order
        meet = [self.top] * len(self.domain)
        for g in self.generators:
            gi = g.map.idx
            if all(order.leq_idx(a, b) for a, b in zip(t, gi)):
                meet = [self._meet(a, b) for a, b in zip(meet, gi)]
        return meet == list(t)


def make_kclass(M: Poset, alg: ApproximationAlgebra) -> KClass:
    """Up-set thetas of every element (special ones for non-minimal elements)."""
    Mv, _, top, floor = _view(M, alg)
    gens = []
    for xi, x in enumerate(M.elements):
        covers = Mv.lower_covers[xi]
        if covers:
            gens.append(special_theta(M, alg, M.elements[covers[0]], x))
        else:
            gens.append(upset_theta(M, alg, x))
    return KClass(M, alg.L, tuple(gens), top, floor, alg.orientation == DUAL, len(alg.L) > 2)


def gamma_kclass(q: int, n: int) -> KClass:
    gens = tuple(theta_from_gamma(q, n, i, j) for j in range(1, n + 1) for i in range(q))
    return KClass(chain_power(q, n), chain(q), gens, q - 1, 0, False, q > 2)


# -- formula-level decomposition ----------------------------------------------------
@dataclass
class T3Report:
    template: Node
    substitution: dict
    theta_formula: Node
    grounded: bool
    semantics: Semantics
    pairs: list = field(default_factory=list)
    verified: bool = False

    def to_json(self) -> dict:
        from .formula import to_sexpr

        return {
            "template": to_sexpr(self.template),
            "substitution": {f"z{k}": th.label for k, th in self.substitution.items()},
            "pairs": [[element_key(y), element_key(x)] for y, x in self.pairs],
            "grounded": self.grounded,
            "verified": self.verified,
        }


NODE_BUDGET = 200_000


def decompose_T3(psi: PosetMap, alg: ApproximationAlgebra, K: KClass | None = None, budget: int = NODE_BUDGET):
    """Write ``psi`` as a boxminus/boxplus formula whose leaves are K members.

    Returns ``(formula, report)``; the formula is grounded to variables and
    constants when the domain is a Boolean cube (q = 2) or a power of the
    level chain, otherwise its leaves are theta leaves. Verified pointwise
    before returning.
    """
    if psi.codomain != alg.L:
        raise TableShapeMismatch("map codomain differs from the algebra's level set")
    ensure_axioms(alg, "B+*" if alg.orientation == DUAL else "B+")
    M = psi.domain
    Mv, view, top, floor = _view(M, alg)
    K = K or make_kclass(M, alg)
    dual = alg.orientation == DUAL
    Lv = view.L
    n = len(M)
    below = Lv.down_masks
    lower, upper, topo = Mv.lower_covers, Mv.upper_covers, Mv.topo
    bplus, dot = view.boxplus, view.dot

    slots: dict[int, ThetaFunction] = {}
    slot_of: dict[tuple, int] = {}
    pairs = []
    used = 0

    def leaf(table) -> Node:
        key = tuple(table)
        if key not in slot_of:
            if not K.contains(key):
                raise NotRepresentable(f"monotone piece {list(key)} is outside the theta class", witness=key)
            slot_of[key] = len(slots) + 1
            slots[slot_of[key]] = _theta_for_table(M, alg, key, top, floor, Mv)
        return ZVar(slot_of[key])

    def expand_monotone(f) -> Node:
        if all(v == floor for v in f):
            return leaf(f)
        terms = []
        for x in range(n):
            v = f[x]
            if v == floor or any(f[c] == v for c in lower[x]):
                continue
            t = _upset_table(Mv, x, v, floor)
            terms.append(leaf(t))
        return conj(terms, "boxplus")

    def build(f) -> Node:
        nonlocal used
        used += 1
        if used > budget:
            raise IterationOverflow(f"theta decomposition exceeded {budget} nodes")
        values = [0] * n
        inreg = [False] * n
        for x in topo:
            m = 1 << f[x]
            r = False
            for c in lower[x]:
                m |= values[c]
                r = r or inreg[c]
            values[x] = m
            inreg[x] = r or bool(m & ~below[f[x]])
        if not any(inreg):
            return expand_monotone(f)
        minimal = [x for x in range(n) if inreg[x] and not any(inreg[c] for c in lower[x])]
        x = minimal[0]
        # prefer a lower cover with nothing of the complement above it
        ys = [y for y in lower[x] if all(inreg[u] for u in upper[y])] or list(lower[x])
        pairs.append((M.elements[ys[0]], M.elements[x]))
        th = _upset_table(Mv, x, top, floor)
        phi = [bplus[f[z]][th[z]] if inreg[z] else f[z] for z in range(n)]
        for z in range(n):
            if not Lv.leq_idx(f[z], phi[z]):
                raise AlgebraDefect(f"boxplus is not an upper bound at {M.elements[z]!r}")
        res = [dot[f[z]] if phi[z] == f[z] else solve_residual_idx(view, phi[z], f[z]) for z in range(n)]
        left, right = build(phi), build(res)
        return Bin("boxminus", right, left) if dual else Bin("boxminus", left, right)

    template = build(list(psi.idx))
    theta_formula = substitute(template, slots)
    sem = Semantics.for_chain(len(alg.L), algebra=alg)
    grounded = _ground(theta_formula, M, alg, sem)
    report = T3Report(template, slots, theta_formula, grounded is not None, sem, pairs)
    formula = grounded if grounded is not None else theta_formula

    for e, want in zip(M.elements, psi.idx):
        for candidate in (formula, theta_formula):
            got = evaluate_formula(candidate, e, sem)
            if got != want:
                raise ConstructionError(f"theta formula disagrees with the map at {e!r}: {got} != {want}")
    report.verified = True
    return formula, report


def _theta_for_table(M, alg, table, top, floor, Mv) -> ThetaFunction:
    values = set(table)
    pm = PosetMap.from_indices(M, alg.L, table)
    if values == {floor}:
        return ThetaFunction(pm, "const", (), f"const{alg.L.elements[floor]}")
    if len(values) == 1:
        return ThetaFunction(pm, "const", (), f"const{alg.L.elements[table[0]]}")
    hi = next(v for v in values if v != floor)
    ups = [i for i in range(len(M)) if table[i] == hi]
    anchor = next(i for i in ups if not any(table[c] == hi for c in Mv.lower_covers[i]))
    x = M.elements[anchor]
    if hi == top:
        covers = Mv.lower_covers[anchor]
        if covers:
            return ThetaFunction(pm, "special", (M.elements[covers[0]], x), element_key(x))
        return ThetaFunction(pm, "upset", (x,), element_key(x))
    return ThetaFunction(pm, "scaled", (x, alg.L.elements[hi]), f"{alg.L.elements[hi]}@{element_key(x)}")


def _is_chain_power(M: Poset, q: int) -> bool:
    first = M.elements[0] if M.elements else None
    if not isinstance(first, tuple) or not first or q ** len(first) != len(M):
        return False
    return M == chain_power(q, len(first))


def _ground(node: Node, M: Poset, alg: ApproximationAlgebra, sem: Semantics):
    """Replace theta leaves by variable formulas where the domain allows it."""
    q = len(alg.L)
    dual = alg.orientation == DUAL
    if isinstance(M, BooleanCube) and q == 2:
        def leaf(th: ThetaFunction) -> Node:
            if th.kind == "const":
                return Const(th.map.idx[0])
            x = th.provenance[-1] if th.kind == "special" else th.provenance[0]
            if dual:
                # 0 on the down-set of x, 1 elsewhere: a positive clause
                return conj([Var(j + 1) for j, b in enumerate(x) if b == 0], "or", Const(0))
            return conj([Var(j + 1) for j, b in enumerate(x) if b == 1], "and", Const(1))
    elif not dual and alg.dot[0] == 0 and _is_chain_power(M, q):
        def leaf(th: ThetaFunction) -> Node:
            if th.kind == "const":
                return Const(th.map.idx[0])
            x = th.provenance[-1] if th.kind == "special" else th.provenance[0]
            core = conj([Unary(f"G{v}", Var(j + 1)) for j, v in enumerate(x) if v > 0], "and", Const(q - 1))
            if th.kind == "scaled":
                return Unary(f"c{th.provenance[1]}", core)
            return core
    else:
        return None

    def walk(n):
        if isinstance(n, ThetaLeaf):
            return leaf(n.theta)
        if isinstance(n, Bin):
            return Bin(n.op, walk(n.left), walk(n.right))
        if isinstance(n, Unary):
            return Unary(n.name, walk(n.child))
        return n

    return walk(node)


# -- many-valued synthesis -------------------------------------------------------------
def _eq_level(q: int, c: int, var: Node) -> Node:
    """Top exactly when ``var`` equals c: G_c(v) and not G_{c+1}(v)."""
    top = q - 1
    if c == top:
        return Unary(f"G{top}", var)
    not_above = Unary("neg", Unary(f"G{c + 1}", var))
    if c == 0:
        return not_above
    return Bin("and", Unary(f"G{c}", var), not_above)


def synthesize_mv(table, q: int, n: int) -> Node:
    """Formula over min/max, the thresholds G_i, ``neg`` and the scalers c_v computing ``table``.

    ``table`` lists the q**n values row-major with x1 most significant. For
    q = 2 the result uses only and/or/imp and constants.
    """
    if not 2 <= q <= 16 or n < 1 or q ** n > 1 << 16:
        raise TableShapeMismatch(f"need 2 <= q <= 16 and q**n <= 65536, got q={q}, n={n}")
    table = list(table)
    if len(table) != q ** n or any(not isinstance(v, int) or not 0 <= v < q for v in table):
        raise TableShapeMismatch(f"expected {q ** n} levels in 0..{q - 1}")
    top = q - 1
    if len(set(table)) == 1:
        node = Unary(f"c{table[0]}", Const(top))
    else:
        terms = []
        for point, value in zip(itertools.product(range(q), repeat=n), table):
            if value == 0:
                continue
            core = conj([_eq_level(q, c, Var(j + 1)) for j, c in enumerate(point)], "and")
            terms.append(Unary(f"c{value}", core))
        node = conj(terms, "or", Const(0))
    if q == 2:
        node = classicalize(node)
    sem = Semantics.for_chain(q, arity=n)
    for point, value in zip(itertools.product(range(q), repeat=n), table):
        got = evaluate_formula(node, point, sem)
        if got != value:
            raise ConstructionError(f"synthesised formula gives {got} at {point}, expected {value}")
    return node


def classicalize(node: Node) -> Node:
    """Rewrite two-level unaries into and/or/imp/constants."""
    if isinstance(node, Unary):
        child = classicalize(node.child)
        name = node.name
        if name in ("G1", "c1"):
            return child
        if name == "G0":
            return Const(1)
        if name == "c0":
            return Const(0)
        if name == "neg":
            return Bin("imp", child, Const(0))
        return Unary(name, child)
    if isinstance(node, Bin):
        return Bin(node.op, classicalize(node.left), classicalize(node.right))
    return node


def mv_semantics(q: int, n: int | None = None) -> Semantics:
    return Semantics(q, standard_unaries(q), None, n)
