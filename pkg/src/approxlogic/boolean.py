"""Implicative normal form for Boolean functions.

Every f on B^n is written ``((P_k -> P_{k-1}) -> ...) -> P_1`` with monotone
P_i, by running the dual decomposition with implication as the peeling
operation, conjunction as aggregation and constant 1 as the neutral residual.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass

from .algebra import builtin_algebra
from .decompose import decompose
from .errors import ArityMismatch, BadChar, BadLength, ConstructionError, NotMonotone
from .formula import Bin, Const, Node, Semantics, Var, conj, count_literals, evaluate_formula, max_var
from .order import MAX_CUBE, PosetMap, boolean_cube, chain, is_monotone

EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class TruthTable:
    n: int
    values: str

    def __post_init__(self):
        if len(self.values) != 1 << self.n:
            raise BadLength(f"arity {self.n} needs {1 << self.n} values, got {len(self.values)}")
        bad = set(self.values) - {"0", "1"}
        if bad:
            raise BadChar(f"truth table characters must be 0/1, found {sorted(bad)}")

    def __str__(self):
        return self.values

    def __getitem__(self, i: int) -> int:
        return int(self.values[i])

    @classmethod
    def from_bits(cls, n: int, bits) -> TruthTable:
        return cls(n, "".join(str(int(b)) for b in bits))

    def bits(self) -> list[int]:
        return [int(c) for c in self.values]

    def to_map(self) -> PosetMap:
        return PosetMap.from_indices(boolean_cube(self.n), chain(2), self.bits())

    @classmethod
    def from_map(cls, f: PosetMap) -> TruthTable:
        return cls(f.domain.n, "".join(str(v) for v in f.idx))

    def is_monotone(self) -> bool:
        return bool(is_monotone(self.to_map()))


def parse_tt(text: str) -> TruthTable:
    """Accept "0110", the two-line "n=2\\n0110" file form, or {"n":2,"values":"0110"}."""
    text = text.strip()
    if text.startswith("{"):
        data = json.loads(text)
        values = data["values"]
        if isinstance(values, list):
            values = "".join(str(v) for v in values)
        return TruthTable(int(data["n"]), values)
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    n = None
    if lines and lines[0].startswith("n="):
        n = int(lines[0][2:])
        lines = lines[1:]
    values = "".join(lines)
    if n is None:
        n = len(values).bit_length() - 1
        if len(values) == 0 or 1 << n != len(values):
            raise BadLength(f"length {len(values)} is not a power of two")
        if not 1 <= n <= MAX_CUBE:
            raise BadLength(f"arity {n} outside 1..{MAX_CUBE}")
    return TruthTable(n, values)


def tt_of_formula(ast: Node, n: int | None = None) -> TruthTable:
    n = n or max_var(ast)
    sem = Semantics(2)
    return TruthTable(n, "".join(str(evaluate_formula(ast, p, sem))
                                 for p in itertools.product((0, 1), repeat=n)))


@dataclass(frozen=True)
class INF:
    """Parts listed innermost first: ``parts[0]`` is P_k, ``parts[-1]`` is P_1."""

    n: int
    parts: tuple

    @property
    def arrows(self) -> int:
        return len(self.parts) - 1

    def to_json(self) -> dict:
        return {"n": self.n, "parts": [p.values for p in self.parts], "arrows": self.arrows}


def _inf_table(parts) -> list[int]:
    acc = parts[0].bits()
    for p in parts[1:]:
        acc = [(1 - a) | b for a, b in zip(acc, p.bits())]
    return acc


def synth_inf(tt: TruthTable) -> INF:
    form, _ = decompose(tt.to_map(), builtin_algebra("boolean-dual"), "t1")
    parts = tuple(TruthTable.from_map(p) for p in reversed(form.parts))
    inf = INF(tt.n, parts)
    if tt.n <= EXHAUSTIVE_LIMIT:
        if _inf_table(parts) != tt.bits():
            raise ConstructionError(f"implicative form does not reproduce {tt.values}")
        for p in parts:
            if not p.is_monotone():
                raise ConstructionError(f"part {p.values} is not monotone")
    return inf


def minimal_true_points(part: TruthTable) -> list[int]:
    cube = boolean_cube(part.n)
    bits = part.bits()
    return [i for i in range(len(bits)) if bits[i] and not any(bits[c] for c in cube.lower_covers[i])]


def monotone_dnf(part: TruthTable) -> Node:
    """Join of positive monomials over the minimal true points."""
    v = is_monotone(part.to_map())
    if not v:
        raise NotMonotone(f"{part.values} is not monotone (witness {v.witness})")
    n = part.n
    supports = sorted((tuple(j + 1 for j in range(n) if i >> (n - 1 - j) & 1)
                       for i in minimal_true_points(part)), key=lambda t: (len(t), t))
    terms = [conj([Var(j) for j in t], "and", Const(1)) for t in supports]
    node = conj(terms, "or", Const(0))
    if n <= EXHAUSTIVE_LIMIT and tt_of_formula(node, n) != part:
        raise ConstructionError(f"monotone DNF does not reproduce {part.values}")
    return node


def inf_formula(tt: TruthTable) -> Node:
    """Left-nested implication chain over the grounded parts, checked against ``tt``."""
    inf = synth_inf(tt)
    node = monotone_dnf(inf.parts[0])
    for p in inf.parts[1:]:
        node = Bin("imp", node, monotone_dnf(p))
    if tt.n <= EXHAUSTIVE_LIMIT:
        v = verify_equiv(node, tt)
        if not v.ok:
            raise ConstructionError(f"implicative formula differs at {v.witness}")
    return node


@dataclass(frozen=True)
class EquivVerdict:
    ok: bool
    witness: tuple | None = None
    expected: int | None = None
    got: int | None = None

    def __bool__(self):
        return self.ok


def verify_equiv(ast: Node, tt: TruthTable) -> EquivVerdict:
    if max_var(ast) > tt.n:
        raise ArityMismatch(f"formula mentions x{max_var(ast)} but the table has arity {tt.n}")
    sem = Semantics(2)
    for i, point in enumerate(itertools.product((0, 1), repeat=tt.n)):
        got = evaluate_formula(ast, point, sem)
        if got != tt[i]:
            return EquivVerdict(False, point, tt[i], got)
    return EquivVerdict(True)


def baseline_sizes(tt: TruthTable) -> dict:
    ones = tt.values.count("1")
    node = inf_formula(tt)
    return {
        "dnf_terms": ones,
        "cnf_clauses": len(tt.values) - ones,
        "inf_arrows": synth_inf(tt).arrows,
        "inf_literals": count_literals(node),
    }
