"""Operation triples (boxminus, boxplus, dot) over a finite poset L, their
dual views, exhaustive axiom checkers and the built-in instances.

Tables are stored by L index. For the built-in chains the index of a level
is the level itself.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property, lru_cache, reduce
from typing import Sequence

from .errors import AlgebraDefect, ChainSizeOutOfRange, DomainTooLarge, InputError, NoResidual, UnknownName
from .order import Poset, _bits, chain, minimal_elements

PRIMAL, DUAL = "primal", "dual"
SYSTEMS = ("A", "A*", "B", "B*", "B+", "B+*")
_AXIOMS = {
    "A": ("A1", "A2", "A3", "A4"),
    "B": ("B1", "B2", "B3", "B4"),
    "B+": ("B1", "B2", "B3", "B4", "B5+"),
}
BUILTINS = ("boolean-primal", "boolean-dual", "chain-primal", "chain-dual")
MAX_LEVELS = 16
MAX_SUBSET_LEVELS = 12
MAX_SUBSET_DOMAIN = 12


@dataclass(frozen=True)
class ApproximationAlgebra:
    L: Poset
    boxminus: tuple
    boxplus: tuple
    dot: tuple
    orientation: str = PRIMAL
    # how boxplus acts on subsets: "sup"/"inf" of L's order, or a fold of the binary table
    set_rule: str = "fold"
    name: str = field(default="custom", compare=False)
    claims: tuple = field(default=(), compare=False)
    passed: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        q = len(self.L)
        if q > MAX_LEVELS:
            raise DomainTooLarge(f"|L| = {q} exceeds {MAX_LEVELS}")
        for tab in (self.boxminus, self.boxplus):
            if len(tab) != q or any(len(row) != q for row in tab):
                raise InputError(f"binary tables must be {q}x{q}")
        if len(self.dot) != q:
            raise InputError(f"dot table must have {q} entries")
        for v in [*self.dot, *(x for row in self.boxminus for x in row), *(x for row in self.boxplus for x in row)]:
            if not 0 <= v < q:
                raise InputError(f"table entry {v} outside L")
        if self.orientation not in (PRIMAL, DUAL):
            raise InputError(f"orientation must be primal or dual, got {self.orientation!r}")
        if self.set_rule not in ("sup", "inf", "fold"):
            raise InputError(f"unknown set rule {self.set_rule!r}")

    def __hash__(self):
        return hash((self.L, self.boxminus, self.boxplus, self.dot, self.orientation, self.set_rule))

    @property
    def q(self) -> int:
        return len(self.L)

    @property
    def levels(self) -> tuple:
        return self.L.elements

    # -- index-level operations -----------------------------------------
    def compose_idx(self, approx: int, residual: int) -> int:
        if self.orientation == PRIMAL:
            return self.boxminus[approx][residual]
        return self.boxminus[residual][approx]

    def boxplus_set_idx(self, mask: int) -> int:
        """boxplus on the subset of L whose indices are the bits of ``mask``."""
        try:
            return self._set_cache[mask]
        except KeyError:
            pass
        members = list(_bits(mask))
        if not members:
            raise AlgebraDefect("boxplus is undefined on the empty set")
        if self.set_rule == "fold":
            val = reduce(lambda acc, v: self.boxplus[v][acc], reversed(members[:-1]), members[-1])
        else:
            order = self.L if self.set_rule == "sup" else self.L.dual
            val = _least_upper_bound(order, members)
            if val is None:
                raise AlgebraDefect(f"no {self.set_rule} in L for {[self.levels[m] for m in members]}")
        self._set_cache[mask] = val
        return val

    @cached_property
    def _set_cache(self) -> dict:
        return {}

    @cached_property
    def dual(self) -> ApproximationAlgebra:
        """The same tables read over L reversed, with boxminus's arguments swapped.

        System X* on an algebra holds iff system X holds on its dual view, and
        the dual view of a dual-oriented algebra is primal.
        """
        q = self.q
        d = ApproximationAlgebra(
            L=self.L.dual,
            boxminus=tuple(tuple(self.boxminus[b][a] for b in range(q)) for a in range(q)),
            boxplus=self.boxplus,
            dot=self.dot,
            orientation=DUAL if self.orientation == PRIMAL else PRIMAL,
            set_rule={"sup": "inf", "inf": "sup", "fold": "fold"}[self.set_rule],
            name=f"dual({self.name})",
            claims=tuple(_star(s) for s in self.claims),
        )
        d.__dict__["dual"] = self
        return d

    @property
    def primal_view(self) -> ApproximationAlgebra:
        return self if self.orientation == PRIMAL else self.dual

    @cached_property
    def constant_dot(self):
        """Index of the dot value if dot is constant, else None."""
        return self.dot[0] if len(set(self.dot)) == 1 else None

    def to_json(self) -> dict:
        return {
            "levels": self.q,
            "orientation": self.orientation,
            "boxminus": [list(r) for r in self.boxminus],
            "boxplus": [list(r) for r in self.boxplus],
            "dot": list(self.dot),
        }


def _star(system: str) -> str:
    return system[:-1] if system.endswith("*") else system + "*"


def _least_upper_bound(order: Poset, members) -> int | None:
    ub = (1 << len(order)) - 1
    for m in members:
        ub &= order.up_masks[m]
    for u in _bits(ub):
        if ub & ~order.up_masks[u] == 0:
            return u
    return None


# -- built-ins ----------------------------------------------------------------
def _table2(q, fn):
    return tuple(tuple(fn(a, b) for b in range(q)) for a in range(q))


@lru_cache(maxsize=None)
def builtin_algebra(name: str, q: int | None = None) -> ApproximationAlgebra:
    if name not in BUILTINS:
        raise UnknownName(f"unknown algebra {name!r}; choose from {', '.join(BUILTINS)}")
    if name.startswith("boolean"):
        if q not in (None, 2):
            raise ChainSizeOutOfRange("boolean algebras have exactly 2 levels")
        q = 2
    elif q is None or not 2 <= q <= MAX_LEVELS:
        raise ChainSizeOutOfRange(f"chain size must be in 2..{MAX_LEVELS}, got {q}")
    top = q - 1
    L = chain(q)
    if name == "boolean-primal":
        return ApproximationAlgebra(L, _table2(2, lambda a, b: a & (1 - b)), _table2(2, max), (0, 0),
                                    PRIMAL, "sup", name, ("A", "B", "B+"))
    if name == "boolean-dual":
        return ApproximationAlgebra(L, _table2(2, lambda a, b: (1 - a) | b), _table2(2, min), (1, 1),
                                    DUAL, "inf", name, ("A*", "B*", "B+*"))
    if name == "chain-primal":
        return ApproximationAlgebra(L, _table2(q, lambda a, b: max(a - b, 0)), _table2(q, max), (0,) * q,
                                    PRIMAL, "sup", f"{name}:{q}", ("A", "B", "B+"))
    return ApproximationAlgebra(L, _table2(q, lambda a, b: min(top, top - a + b)), _table2(q, min), (top,) * q,
                                DUAL, "inf", f"{name}:{q}", ("A*", "B*", "B+*"))


def algebra_from_json(data: dict) -> ApproximationAlgebra:
    try:
        q = int(data["levels"])
        orientation = data.get("orientation", PRIMAL)
        boxminus = tuple(tuple(int(v) for v in row) for row in data["boxminus"])
        boxplus = tuple(tuple(int(v) for v in row) for row in data["boxplus"])
        dot = tuple(int(v) for v in data["dot"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed algebra description: {exc}") from None
    if not 2 <= q <= MAX_LEVELS:
        raise ChainSizeOutOfRange(f"levels must be in 2..{MAX_LEVELS}")
    return ApproximationAlgebra(chain(q), boxminus, boxplus, dot, orientation, "fold", data.get("name", "custom"))


_SELECTOR = re.compile(r"^(boolean-primal|boolean-dual|chain-primal|chain-dual)(?::(\d+))?$")


def resolve_algebra(selector: str) -> ApproximationAlgebra:
    """Accept "boolean-dual", "chain-primal:5", or a path to an algebra JSON file."""
    m = _SELECTOR.match(selector)
    if m:
        return builtin_algebra(m.group(1), int(m.group(2)) if m.group(2) else None)
    if selector.endswith(".json"):
        try:
            with open(selector) as fh:
                return algebra_from_json(json.load(fh))
        except OSError as exc:
            raise InputError(f"cannot read algebra file: {exc}") from None
    raise UnknownName(f"cannot resolve algebra {selector!r}")


# -- level-level API ------------------------------------------------------------
def compose(alg: ApproximationAlgebra, approx, residual):
    """One recomposition step: boxminus(approx, residual), or boxminus*(residual, approx) when dual."""
    L = alg.L
    return L.elements[alg.compose_idx(L.index(approx), L.index(residual))]


def solve_residual_idx(alg: ApproximationAlgebra, approx: int, target: int) -> int:
    view = alg.primal_view
    floor = view.dot[approx]
    row = view.boxminus[approx]
    for z in range(view.q):
        if row[z] == target and view.L.leq_idx(floor, z):
            return z
    raise NoResidual(
        f"{alg.name}: no residual z with compose({view.levels[approx]}, z) = {view.levels[target]}; "
        "the algebra violates axiom 4 (or its dual)")


def solve_residual(alg: ApproximationAlgebra, approx, target):
    """First z in canonical order with compose(approx, z) == target above the dot floor.

    Primal algebras require target <= approx, dual ones target >= approx.
    """
    L = alg.L
    a, t = L.index(approx), L.index(target)
    if not alg.primal_view.L.leq_idx(t, a):
        rel = "<=" if alg.orientation == PRIMAL else ">="
        raise InputError(f"solve_residual needs target {rel} approx, got target={target}, approx={approx}")
    return L.elements[solve_residual_idx(alg, a, t)]


# -- axiom checking ---------------------------------------------------------------
PASS, FAIL, FINITE, DEFERRED = "pass", "fail", "holds by finiteness", "deferred"


@dataclass
class AxiomReport:
    system: str
    algebra: str
    verdicts: dict = field(default_factory=dict)
    counterexamples: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v != FAIL for v in self.verdicts.values())

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "algebra": self.algebra,
            "ok": self.ok,
            "verdicts": self.verdicts,
            "counterexamples": self.counterexamples,
            "notes": self.notes,
        }


def check_axioms(alg: ApproximationAlgebra, system: str, M: Poset | None = None) -> AxiomReport:
    """Exhaustively check one axiom system; starred systems are checked on the dual view."""
    if system not in SYSTEMS:
        raise UnknownName(f"unknown axiom system {system!r}; choose from {', '.join(SYSTEMS)}")
    if alg.q > MAX_LEVELS:
        raise DomainTooLarge(f"|L| = {alg.q} exceeds {MAX_LEVELS}")
    starred = system.endswith("*")
    view = alg.dual if starred else alg
    dom = M.dual if (starred and M is not None) else M
    base = system.rstrip("*")
    report = AxiomReport(system, alg.name)
    suffix = "*" if starred else ""
    L, q, lv = view.L, view.q, view.levels

    def record(axiom, cex):
        key = axiom + suffix
        report.verdicts[key] = FAIL if cex is not None else PASS
        if cex is not None:
            report.counterexamples[key] = cex

    for axiom in _AXIOMS[base]:
        if axiom in ("A1", "B1"):
            if dom is None or len(dom) > MAX_SUBSET_DOMAIN:
                report.verdicts[axiom + suffix] = FINITE
            else:
                record(axiom, _check_minimal_antichains(dom))
        elif axiom == "A2":
            if q > MAX_SUBSET_LEVELS:
                report.verdicts[axiom + suffix] = DEFERRED
            else:
                record(axiom, _check_set_boxplus(view))
        elif axiom == "B2":
            cex = None
            for x in range(q):
                for y in range(q):
                    s = view.boxplus[x][y]
                    if not (L.leq_idx(x, s) and L.leq_idx(y, s)):
                        cex = {"x": lv[x], "y": lv[y], "boxplus": lv[s]}
                        break
                if cex:
                    break
            record(axiom, cex)
        elif axiom in ("A3", "B3"):
            cex = None
            for l in range(q):
                if view.boxminus[l][view.dot[l]] != l:
                    cex = {"l": lv[l], "dot(l)": lv[view.dot[l]], "boxminus(l, dot(l))": lv[view.boxminus[l][view.dot[l]]]}
                    break
            if cex is None:
                for l in range(q):
                    for l2 in range(q):
                        if L.leq_idx(l, l2) and not L.leq_idx(view.dot[l], view.dot[l2]):
                            cex = {"l": lv[l], "l'": lv[l2], "reason": "dot not monotone"}
                            break
                    if cex:
                        break
            record(axiom, cex)
        elif axiom in ("A4", "B4"):
            cex = None
            for l in range(q):
                for l2 in range(q):
                    if not L.leq_idx(l, l2):
                        continue
                    if not any(view.boxminus[l2][z] == l and L.leq_idx(view.dot[l2], z) for z in range(q)):
                        cex = {"l": lv[l], "l'": lv[l2]}
                        break
                if cex:
                    break
            record(axiom, cex)
        elif axiom == "B5+":
            maximal = [m for m in range(q) if not L.upper_covers[m]]
            cex = None
            for l in range(q):
                if not any(L.leq_idx(l, m) for m in maximal):
                    cex = {"l": lv[l]}
                    break
            record(axiom, cex)

    report.notes["boxplus_aci"] = is_aci(view.boxplus)
    report.notes["set_rule"] = alg.set_rule
    if M is None:
        alg.passed[system] = report.ok
    return report


def _check_minimal_antichains(dom: Poset):
    n = len(dom)
    for mask in range(1, 1 << n):
        members = [dom.elements[i] for i in _bits(mask)]
        mins = minimal_elements(dom, members)
        for s in members:
            if not any(dom.leq(m, s) for m in mins):
                return {"S": members, "undominated": s}
        for a in mins:
            for b in mins:
                if a != b and dom.leq(a, b):
                    return {"S": members, "comparable": [a, b]}
    return None


def _check_set_boxplus(view: ApproximationAlgebra):
    L, q, lv = view.L, view.q, view.levels
    full = (1 << q) - 1
    values = {}
    for mask in range(1, full + 1):
        try:
            values[mask] = view.boxplus_set_idx(mask)
        except AlgebraDefect as exc:
            return {"subset": [lv[i] for i in _bits(mask)], "reason": str(exc)}
    for mask, u in values.items():
        for x in _bits(mask):
            if not L.leq_idx(x, u):
                return {"subset": [lv[i] for i in _bits(mask)], "x": lv[x], "boxplus": lv[u]}
        # inclusion monotonicity; one-element extensions suffice by transitivity
        for e in _bits(full & ~mask):
            bigger = values[mask | (1 << e)]
            if not L.leq_idx(u, bigger):
                return {"subset": [lv[i] for i in _bits(mask)], "superset": [lv[i] for i in _bits(mask | 1 << e)],
                        "reason": "boxplus not inclusion-monotone"}
    return None


def is_aci(table: Sequence[Sequence[int]]) -> bool:
    q = len(table)
    r = range(q)
    return (all(table[a][a] == a for a in r)
            and all(table[a][b] == table[b][a] for a in r for b in r)
            and all(table[table[a][b]][c] == table[a][table[b][c]] for a in r for b in r for c in r))


def ensure_axioms(alg: ApproximationAlgebra, system: str) -> AxiomReport | None:
    """Raise AlgebraDefect unless ``alg`` satisfies ``system``; a recorded pass is reused."""
    if alg.passed.get(system):
        return None
    report = check_axioms(alg, system)
    if not report.ok:
        failed = [k for k, v in report.verdicts.items() if v == FAIL]
        raise AlgebraDefect(f"algebra {alg.name} fails {system}: {failed} {report.counterexamples}")
    return report
