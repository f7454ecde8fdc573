"""Acceptance suites, each runnable on its own.

Every suite returns a :class:`CriterionResult`. Checks use small independent
oracles (direct bit arithmetic, plain Python evaluation) rather than the code
paths under test wherever that is practical.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .algebra import ApproximationAlgebra, builtin_algebra, check_axioms
from .boolean import TruthTable, inf_formula, synth_inf
from .decompose import decompose, recompose
from .errors import NonMonotonePart
from .formula import Bin, Const, Unary, Var, walk
from .order import boolean_cube, build_poset, chain, embed_into_cube, is_monotone, random_poset, PosetMap
from .theta import decompose_T3, synthesize_mv


@dataclass
class CriterionResult:
    key: str
    title: str
    ok: bool
    checked: int = 0
    failures: int = 0
    seconds: float = 0.0
    limit: float | None = None
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        timing = f"{self.seconds:.2f}s" + (f" (limit {self.limit:g}s)" if self.limit else "")
        extra = f" first failure: {self.detail['first_failure']}" if self.detail.get("first_failure") else ""
        return f"[{status}] {self.key:>9} {self.title}: {self.checked - self.failures}/{self.checked} ok, {timing}{extra}"

    def to_json(self) -> dict:
        return {"key": self.key, "title": self.title, "ok": self.ok, "checked": self.checked,
                "failures": self.failures, "seconds": round(self.seconds, 3), "limit": self.limit,
                "detail": self.detail}


class _Tally:
    def __init__(self, key, title, limit=None):
        self.key, self.title, self.limit = key, title, limit
        self.checked = self.failures = 0
        self.first = None
        self.detail = {}
        self.t0 = time.perf_counter()

    def check(self, ok: bool, what=None):
        self.checked += 1
        if not ok:
            self.failures += 1
            if self.first is None:
                self.first = what
        return ok

    def result(self) -> CriterionResult:
        secs = time.perf_counter() - self.t0
        if self.first is not None:
            self.detail["first_failure"] = self.first
        ok = self.failures == 0 and self.checked > 0 and (self.limit is None or secs < self.limit)
        return CriterionResult(self.key, self.title, ok, self.checked, self.failures, secs, self.limit, self.detail)


# -- independent helpers ----------------------------------------------------------
def _bool_eval(node, point) -> int:
    """Plain two-valued evaluation; boxminus/boxplus read as the primal Boolean pair."""
    if isinstance(node, Var):
        return point[node.j - 1]
    if isinstance(node, Const):
        return node.level
    if isinstance(node, Bin):
        a, b = _bool_eval(node.left, point), _bool_eval(node.right, point)
        return {"and": a & b, "or": a | b, "imp": (1 - a) | b,
                "boxminus": a & (1 - b), "boxplus": a | b}[node.op]
    raise TypeError(f"unexpected node {node!r}")


def _mv_eval(node, point, q) -> int:
    """Direct many-valued evaluation with thresholds, swap and scalers spelled out."""
    top = q - 1
    if isinstance(node, Var):
        return point[node.j - 1]
    if isinstance(node, Const):
        return node.level
    if isinstance(node, Bin):
        a, b = _mv_eval(node.left, point, q), _mv_eval(node.right, point, q)
        if node.op == "and":
            return min(a, b)
        if node.op == "or":
            return max(a, b)
        if node.op == "imp":
            return min(top, top - a + b)
        raise TypeError(f"unexpected operator {node.op}")
    if isinstance(node, Unary):
        v = _mv_eval(node.child, point, q)
        name = node.name
        if name == "neg":
            return top - v
        if name[0] == "G":
            return top if v >= int(name[1:]) else 0
        if name[0] == "c":
            return int(name[1:]) if v == top else 0
    raise TypeError(f"unexpected node {node!r}")


def _is_monotone_bits(bits, n) -> bool:
    size = 1 << n
    return all(bits[x] <= bits[x | 1 << j] for x in range(size) for j in range(n))


def direct_dual_decomposition(values, leq, q: int):
    """Dual decomposition on a chain 0..q-1 with the Lukasiewicz/Boolean dual pair, written out directly.

    ``values`` is the map as a list over elements 0..m-1 and ``leq(x, y)`` the
    domain order. Region: the down-closure of the lower ends of violated
    pairs. Approximant: min over the up-set. Residual: the first z with
    (z -> approx) == target, 1 where approx == target.
    """
    top = q - 1
    m = len(values)
    imp = lambda a, b: min(top, top - a + b)  # noqa: E731
    cur = list(values)
    parts = []
    for _ in range(m + 2):
        lows = {x for x in range(m) for y in range(m) if x != y and leq(x, y) and cur[x] > cur[y]}
        if not lows:
            break
        region = {x for x in range(m) if any(leq(x, w) for w in lows)}
        phi = [min(cur[y] for y in range(m) if leq(x, y)) if x in region else cur[x] for x in range(m)]
        res = []
        for x in range(m):
            if phi[x] == cur[x]:
                res.append(top)
            else:
                res.append(next(z for z in range(q) if imp(z, phi[x]) == cur[x]))
        parts.append(phi)
        cur = res
    parts.append(cur)
    return parts


# -- criteria ---------------------------------------------------------------------
def criterion_1() -> CriterionResult:
    t = _Tally("1", "Boolean algebras satisfy their axiom systems", limit=1.0)
    cube = boolean_cube(3)
    for name, systems in (("boolean-dual", ("A*", "B+*")), ("boolean-primal", ("A", "B"))):
        alg = builtin_algebra(name)
        for system in systems:
            for M in (None, cube):
                rep = check_axioms(alg, system, M)
                t.check(rep.ok, f"{name} {system}: {rep.verdicts}")
                t.detail[f"{name} {system}"] = rep.verdicts
    return t.result()


def criterion_2(max_n: int = 4) -> CriterionResult:
    t = _Tally("2", f"implicative normal form for every Boolean function with n <= {max_n}", limit=60.0)
    worst = {}
    for n in range(1, max_n + 1):
        size = 1 << n
        worst[n] = 0
        for f in range(1 << size):
            bits = [(f >> (size - 1 - i)) & 1 for i in range(size)]
            tt = TruthTable.from_bits(n, bits)
            inf = synth_inf(tt)
            acc = inf.parts[0].bits()
            for p in inf.parts[1:]:
                acc = [(1 - a) | b for a, b in zip(acc, p.bits())]
            ok = (acc == bits and inf.arrows <= n
                  and all(_is_monotone_bits(p.bits(), n) for p in inf.parts))
            t.check(ok, tt.values)
            worst[n] = max(worst[n], inf.arrows)
    t.detail["max_arrows_by_n"] = worst
    return t.result()


def criterion_3() -> CriterionResult:
    t = _Tally("3", "XOR has a two-arrow implicative form")
    tt = TruthTable(2, "0110")
    inf = synth_inf(tt)
    node = inf_formula(tt)
    want = lambda a, b: (1 - ((1 - (a | b)) | (a & b))) | 0  # noqa: E731
    t.check(inf.arrows == 2, f"arrows={inf.arrows}")
    for a, b in itertools.product((0, 1), repeat=2):
        t.check(_bool_eval(node, (a, b)) == want(a, b) == int(tt[2 * a + b]), (a, b))
    t.detail["parts"] = [p.values for p in inf.parts]
    return t.result()


def suite_4_cases(seed: int = 0, posets: int = 200, maps_per_poset: int = 5):
    """Seeded random posets of at most 10 elements with random maps into chains of at most 5 levels."""
    rng = random.Random(seed)
    for i in range(posets):
        P = random_poset(rng, rng.randint(1, 10), density=rng.choice((0.2, 0.35, 0.5)))
        for _ in range(maps_per_poset):
            q = rng.randint(2, 5)
            yield i, P, q, [rng.randrange(q) for _ in range(len(P))]


def criterion_4(seed: int = 0) -> tuple[CriterionResult, CriterionResult]:
    """Returns the construction check and, separately, the n-shrink clause."""
    t = _Tally("4", "primal decomposition on random posets (recompose, monotone parts, bound)", limit=30.0)
    s = _Tally("4-nshrink", "non-monotonicity domain strictly shrinks at every step")
    for i, P, q, vals in suite_4_cases(seed):
        alg = builtin_algebra("chain-primal", q)
        psi = PosetMap.from_indices(P, alg.L, vals)
        form, trace = decompose(psi, alg, "t1")
        back = recompose(form, alg)
        ok = (back.idx == psi.idx and all(is_monotone(p) for p in form.parts)
              and form.compose_ops <= P.height)
        t.check(ok, {"poset": i, "q": q, "values": vals})
        if trace.steps:
            s.check(all(trace.n_shrinks()), {"poset": i, "q": q, "values": vals,
                                             "covers": [[P.elements[c], e] for e, cs in zip(P.elements, P.lower_covers) for c in cs]})
    return t.result(), s.result()


def criterion_5(max_n: int = 3) -> CriterionResult:
    t = _Tally("5", f"dual path equals the direct dual decomposition (all n <= {max_n})")
    alg = builtin_algebra("boolean-dual")
    for n in range(1, max_n + 1):
        size = 1 << n
        leq = lambda x, y: x & ~y == 0  # noqa: E731
        for f in range(1 << size):
            bits = [(f >> (size - 1 - i)) & 1 for i in range(size)]
            form, _ = decompose(PosetMap.from_indices(boolean_cube(n), alg.L, bits), alg, "t1")
            got = [list(p.idx) for p in form.parts]
            t.check(got == direct_dual_decomposition(bits, leq, 2), "".join(map(str, bits)))
    return t.result()


def diamond():
    P = build_poset(["bot", "a", "b", "top"], [("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")])
    alg = builtin_algebra("chain-primal", 3)
    return PosetMap(P, alg.L, [0, 2, 0, 1]), alg


def criterion_6(seed: int = 0) -> CriterionResult:
    t = _Tally("6", "t2-fold agrees with t1 on ACI algebras; t2-chain fails on the diamond")
    for i, P, q, vals in suite_4_cases(seed):
        names = ["chain-primal", "chain-dual"] + (["boolean-primal", "boolean-dual"] if q == 2 else [])
        for name in names:
            alg = builtin_algebra(name, q if name.startswith("chain") else None)
            psi = PosetMap.from_indices(P, alg.L, vals)
            a, _ = decompose(psi, alg, "t1")
            b, _ = decompose(psi, alg, "t2-fold")
            t.check(a.parts == b.parts, {"poset": i, "algebra": name, "values": vals})
    psi, alg = diamond()
    witness = None
    for _ in range(2):
        try:
            decompose(psi, alg, "t2-chain")
        except NonMonotonePart as exc:
            witness = exc.witness
        t.check(witness == ("a", "top"), f"diamond witness {witness}")
    t.detail["diamond_witness"] = list(witness) if witness else None
    return t.result()


def _monomial_leaf(node) -> bool:
    if isinstance(node, (Var, Const)):
        return True
    return isinstance(node, Bin) and node.op == "and" and all(
        isinstance(c, (Var, Bin)) and (not isinstance(c, Bin) or c.op == "and") for c in walk(node))


def _boxtree_ok(node) -> bool:
    if isinstance(node, Bin) and node.op in ("boxminus", "boxplus"):
        return _boxtree_ok(node.left) and _boxtree_ok(node.right)
    return _monomial_leaf(node)


def criterion_7() -> CriterionResult:
    t = _Tally("7", "theta decomposition of every 3-ary Boolean function", limit=10.0)
    alg = builtin_algebra("boolean-primal")
    cube = boolean_cube(3)
    for f in range(256):
        bits = [(f >> (7 - i)) & 1 for i in range(8)]
        node, _ = decompose_T3(PosetMap.from_indices(cube, alg.L, bits), alg)
        ok = _boxtree_ok(node) and all(_bool_eval(node, cube.elements[i]) == bits[i] for i in range(8))
        t.check(ok, "".join(map(str, bits)))
    return t.result()


def criterion_8(seed: int = 0, samples: int = 500) -> CriterionResult:
    t = _Tally("8", "many-valued synthesis on L3 and classical agreement at q=2", limit=10.0)
    rng = random.Random(seed)
    tables = [(list(v), 1) for v in itertools.product(range(3), repeat=3)]
    tables += [([rng.randrange(3) for _ in range(9)], 2) for _ in range(samples)]
    for table, n in tables:
        node = synthesize_mv(table, 3, n)
        pts = itertools.product(range(3), repeat=n)
        t.check(all(_mv_eval(node, p, 3) == v for p, v in zip(pts, table)), {"n": n, "table": table})
    for n in (1, 2):
        for f in range(1 << (1 << n)):
            table = [(f >> i) & 1 for i in range(1 << n)]
            node = synthesize_mv(table, 2, n)
            classical = all(isinstance(x, (Var, Const)) or (isinstance(x, Bin) and x.op in ("and", "or", "imp"))
                            for x in walk(node))
            pts = itertools.product((0, 1), repeat=n)
            t.check(classical and all(_bool_eval(node, p) == v for p, v in zip(pts, table)),
                    {"q": 2, "table": table})
    return t.result()


def criterion_9(seed: int = 0, count: int = 100) -> CriterionResult:
    t = _Tally("9", "random posets embed into Boolean cubes")
    rng = random.Random(seed)
    for i in range(count):
        P = random_poset(rng, rng.randint(1, 8), density=rng.choice((0.2, 0.35, 0.5)))
        emb = embed_into_cube(P)
        img = [emb(e) for e in P.elements]
        ok = all(P.leq(a, b) == all(u <= v for u, v in zip(img[i], img[j]))
                 for i, a in enumerate(P.elements) for j, b in enumerate(P.elements))
        t.check(ok and len(img[0]) == len(P), i)
    return t.result()


def criterion_10() -> CriterionResult:
    t = _Tally("10", "chain algebras satisfy their axiom systems; q=2 matches Boolean", limit=5.0)
    for q in (3, 4, 5):
        for name, systems in (("chain-primal", ("A", "B")), ("chain-dual", ("A*", "B*"))):
            alg = builtin_algebra(name, q)
            for system in systems:
                rep = check_axioms(alg, system, chain(q))
                t.check(rep.ok, f"{name}:{q} {system}: {rep.verdicts}")
    for c, b in (("chain-primal", "boolean-primal"), ("chain-dual", "boolean-dual")):
        x: ApproximationAlgebra = builtin_algebra(c, 2)
        y = builtin_algebra(b)
        t.check((x.boxminus, x.boxplus, x.dot) == (y.boxminus, y.boxplus, y.dot), f"{c}:2 vs {b}")
    return t.result()


def run_all(seed: int = 0, max_n: int = 4) -> list[CriterionResult]:
    out = [criterion_1(), criterion_2(max_n), criterion_3()]
    out.extend(criterion_4(seed))
    out += [criterion_5(min(max_n, 3)), criterion_6(seed), criterion_7(), criterion_8(seed),
            criterion_9(seed), criterion_10()]
    return out
