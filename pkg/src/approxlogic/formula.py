"""Formula trees over a finite chain of levels 0..q-1.

Text form is a fully parenthesised s-expression::

    (imp (imp (or x1 x2) (and x1 x2)) lit:0)
    (or (u:c1 (u:G1 x2)) x1)

``x<j>`` are 1-based input variables, ``z<k>`` are substitution slots,
``lit:<c>`` are level constants, ``(u:NAME e)`` applies a declared unary
table and ``theta:LABEL`` names a theta leaf.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Union

from .errors import ArityMismatch, FormulaSyntaxError, InputError, UnboundUnary, UnboundVariable

BIN_OPS = ("and", "or", "imp", "boxminus", "boxplus")


@dataclass(frozen=True)
class Var:
    j: int


@dataclass(frozen=True)
class Const:
    level: int


@dataclass(frozen=True)
class ZVar:
    k: int


@dataclass(frozen=True)
class Unary:
    name: str
    child: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class ThetaLeaf:
    label: str
    theta: object = field(compare=False, hash=False, repr=False)


Node = Union[Var, Const, ZVar, Unary, Bin, ThetaLeaf]


def to_sexpr(node: Node) -> str:
    if isinstance(node, Var):
        return f"x{node.j}"
    if isinstance(node, Const):
        return f"lit:{node.level}"
    if isinstance(node, ZVar):
        return f"z{node.k}"
    if isinstance(node, ThetaLeaf):
        return f"theta:{node.label}"
    if isinstance(node, Unary):
        return f"(u:{node.name} {to_sexpr(node.child)})"
    if isinstance(node, Bin):
        return f"({node.op} {to_sexpr(node.left)} {to_sexpr(node.right)})"
    raise TypeError(f"not a formula node: {node!r}")


_TOKEN = re.compile(r"\s*(\(|\)|[^\s()]+)")


def _tokenize(text: str) -> list[str]:
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"bad character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


def parse_sexpr(text: str, thetas: dict | None = None) -> Node:
    """Parse the s-expression syntax; n-ary and/or/... fold to the left."""
    tokens = _tokenize(text)
    if not tokens:
        raise FormulaSyntaxError("empty formula")
    pos = 0

    def atom(tok):
        if m := re.fullmatch(r"x(\d+)", tok):
            if int(m.group(1)) < 1:
                raise FormulaSyntaxError("variables are 1-based")
            return Var(int(m.group(1)))
        if m := re.fullmatch(r"z(\d+)", tok):
            return ZVar(int(m.group(1)))
        if m := re.fullmatch(r"lit:(\d+)", tok):
            return Const(int(m.group(1)))
        if tok.startswith("theta:"):
            label = tok[len("theta:"):]
            if thetas is None or label not in thetas:
                raise FormulaSyntaxError(f"theta leaf {label!r} has no definition in this context")
            return ThetaLeaf(label, thetas[label])
        raise FormulaSyntaxError(f"unknown atom {tok!r}")

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input")
        tok = tokens[pos]
        pos += 1
        if tok == ")":
            raise FormulaSyntaxError("unbalanced ')'")
        if tok != "(":
            return atom(tok)
        if pos >= len(tokens):
            raise FormulaSyntaxError("unexpected end of input")
        head = tokens[pos]
        pos += 1
        args = []
        while pos < len(tokens) and tokens[pos] != ")":
            args.append(expr())
        if pos >= len(tokens):
            raise FormulaSyntaxError("missing ')'")
        pos += 1
        if head.startswith("u:"):
            if len(args) != 1:
                raise FormulaSyntaxError(f"{head} takes one argument")
            return Unary(head[2:], args[0])
        if head in BIN_OPS:
            if len(args) < 2:
                raise FormulaSyntaxError(f"{head} needs at least two arguments")
            acc = args[0]
            for a in args[1:]:
                acc = Bin(head, acc, a)
            return acc
        raise FormulaSyntaxError(f"unknown operator {head!r}")

    node = expr()
    if pos != len(tokens):
        raise FormulaSyntaxError(f"trailing input: {' '.join(tokens[pos:])}")
    return node


def standard_unaries(q: int) -> dict[str, tuple]:
    """Threshold tables G<i>, the swap ``neg`` and the scalers c<v> (top -> v, else bottom)."""
    top = q - 1
    tables = {f"G{i}": tuple(top if i <= v else 0 for v in range(q)) for i in range(q)}
    tables["neg"] = tuple(top - v for v in range(q))
    for c in range(q):
        tables[f"c{c}"] = tuple(c if v == top else 0 for v in range(q))
    return tables


@dataclass
class Semantics:
    """Evaluation environment: level count, unary tables and the ambient algebra.

    ``and``/``or`` are min/max; ``imp`` is the dual algebra's boxminus when one
    is supplied, otherwise the Lukasiewicz implication; ``boxminus``/``boxplus``
    read the ambient algebra's raw tables.
    """

    q: int = 2
    unaries: dict = field(default_factory=dict)
    algebra: object = None
    arity: int | None = None

    @classmethod
    def for_chain(cls, q: int, algebra=None, arity=None) -> Semantics:
        return cls(q, standard_unaries(q), algebra, arity)

    def binary(self, op: str, a: int, b: int) -> int:
        if op == "and":
            return min(a, b)
        if op == "or":
            return max(a, b)
        if op == "imp":
            alg = self.algebra
            if alg is not None and alg.orientation == "dual":
                return alg.boxminus[a][b]
            top = self.q - 1
            return min(top, top - a + b)
        if self.algebra is None:
            raise InputError(f"{op} needs an ambient algebra")
        if op == "boxminus":
            return self.algebra.boxminus[a][b]
        if op == "boxplus":
            return self.algebra.boxplus[a][b]
        raise InputError(f"unknown operator {op!r}")


def evaluate_formula(node: Node, assignment, sem: Semantics | None = None) -> int:
    """Evaluate at one point; ``assignment`` is a level vector (or a poset element for theta leaves)."""
    sem = sem or Semantics()
    if sem.arity is not None and isinstance(assignment, tuple) and len(assignment) != sem.arity:
        raise ArityMismatch(f"expected {sem.arity} values, got {len(assignment)}")
    return _eval(node, assignment, sem)


def _eval(node, point, sem):
    if isinstance(node, Bin):
        return sem.binary(node.op, _eval(node.left, point, sem), _eval(node.right, point, sem))
    if isinstance(node, Var):
        try:
            return point[node.j - 1]
        except (IndexError, TypeError):
            raise ArityMismatch(f"x{node.j} is not bound by assignment {point!r}") from None
    if isinstance(node, Const):
        return node.level
    if isinstance(node, Unary):
        table = sem.unaries.get(node.name)
        if table is None:
            raise UnboundUnary(f"unary {node.name!r} is not declared")
        return table[_eval(node.child, point, sem)]
    if isinstance(node, ThetaLeaf):
        return node.theta.map.codomain.index(node.theta.map(point))
    if isinstance(node, ZVar):
        raise UnboundVariable(f"z{node.k} must be substituted before evaluation")
    raise TypeError(f"not a formula node: {node!r}")


def substitute(node: Node, p: dict) -> Node:
    """Replace every slot z<k> by ``p[k]`` (a formula node, or a theta function wrapped as a leaf)."""
    if isinstance(node, ZVar):
        if node.k not in p:
            raise UnboundVariable(f"no substitution for z{node.k}")
        val = p[node.k]
        if hasattr(val, "map") and hasattr(val, "label"):
            return ThetaLeaf(val.label, val)
        return val
    if isinstance(node, Unary):
        return Unary(node.name, substitute(node.child, p))
    if isinstance(node, Bin):
        return Bin(node.op, substitute(node.left, p), substitute(node.right, p))
    return node


def walk(node: Node) -> Iterator[Node]:
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        if isinstance(n, Bin):
            stack.append(n.right)
            stack.append(n.left)
        elif isinstance(n, Unary):
            stack.append(n.child)


def operators(node: Node) -> set[str]:
    out = set()
    for n in walk(node):
        if isinstance(n, Bin):
            out.add(n.op)
        elif isinstance(n, Unary):
            out.add("u:" + n.name)
    return out


def count_literals(node: Node) -> int:
    return sum(1 for n in walk(node) if isinstance(n, Var))


def max_var(node: Node) -> int:
    return max((n.j for n in walk(node) if isinstance(n, Var)), default=0)


def conj(nodes: list, op: str = "and", empty: Node | None = None) -> Node:
    """Left-nested fold of ``nodes`` under ``op``."""
    if not nodes:
        if empty is None:
            raise ValueError("empty fold without a unit")
        return empty
    acc = nodes[0]
    for n in nodes[1:]:
        acc = Bin(op, acc, n)
    return acc


# -- formula files ------------------------------------------------------------
def dump_formula_file(node: Node, sem: Semantics, arity: int | None = None) -> str:
    used = sorted({n.name for n in walk(node) if isinstance(n, Unary)})
    fields = [f"q={sem.q}", f"arity={arity if arity is not None else (sem.arity or max_var(node))}"]
    if sem.algebra is not None:
        fields.append(f"algebra={sem.algebra.name}")
    for name in used:
        fields.append(f"u:{name}=" + ",".join(str(v) for v in sem.unaries[name]))
    return "# " + " ".join(fields) + "\n" + to_sexpr(node) + "\n"


def load_formula_file(text: str) -> tuple[Node, Semantics]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormulaSyntaxError("empty formula file")
    sem = Semantics()
    body = lines
    if lines[0].lstrip().startswith("#"):
        body = lines[1:]
        for item in lines[0].lstrip()[1:].split():
            key, _, val = item.partition("=")
            if key == "q":
                sem.q = int(val)
            elif key == "arity":
                sem.arity = int(val)
            elif key == "algebra":
                from .algebra import resolve_algebra
                sem.algebra = resolve_algebra(val)
            elif key.startswith("u:"):
                sem.unaries[key[2:]] = tuple(int(v) for v in val.split(","))
            else:
                raise FormulaSyntaxError(f"unknown header field {key!r}")
    for name, table in sem.unaries.items():
        if len(table) != sem.q or any(not 0 <= v < sem.q for v in table):
            raise FormulaSyntaxError(f"unary {name} is not a total table over {sem.q} levels")
    return parse_sexpr(" ".join(body)), sem
