"""Finite posets, maps between them, and the order primitives the
decomposition engine consumes.

Elements are opaque hashable ids. Internally everything runs on integer
indices into ``Poset.elements``; that enumeration is the canonical order used
for every tie-break downstream.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from graphlib import CycleError, TopologicalSorter
from typing import Hashable, Iterable, NamedTuple, Sequence

from .errors import ArityOutOfRange, ConstructionError, CycleDetected, InputError, ShapeMismatch, UnknownElement

MAX_POSET = 4096
MAX_CUBE = 16


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """A finite partial order given by its cover relation.

    ``lower_covers[i]`` lists the indices directly below element ``i``; the
    constructor trusts that it is a transitive reduction of an acyclic
    relation (use :func:`build_poset` for unchecked input).
    """

    def __init__(self, elements: Sequence[Hashable], lower_covers: Sequence[Iterable[int]], topo=None):
        self.elements = tuple(elements)
        self._index = {e: i for i, e in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise InputError("duplicate element ids")
        self.lower_covers = tuple(tuple(sorted(c)) for c in lower_covers)
        if len(self.lower_covers) != len(self.elements):
            raise ShapeMismatch("one cover list per element required")
        upper = [[] for _ in self.elements]
        for hi, lows in enumerate(self.lower_covers):
            for lo in lows:
                upper[lo].append(hi)
        self.upper_covers = tuple(tuple(u) for u in upper)
        self.topo = tuple(topo) if topo is not None else self._topological_order()

    def _topological_order(self):
        # Kahn's algorithm; ties broken by canonical index.
        indeg = [len(c) for c in self.lower_covers]
        heap = [i for i, d in enumerate(indeg) if d == 0]
        heapq.heapify(heap)
        out = []
        while heap:
            i = heapq.heappop(heap)
            out.append(i)
            for j in self.upper_covers[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    heapq.heappush(heap, j)
        return tuple(out)

    # -- basic protocol -------------------------------------------------
    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e):
        return e in self._index

    def __repr__(self):
        return f"{type(self).__name__}(size={len(self)})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Poset):
            return NotImplemented
        return self.elements == other.elements and self.lower_covers == other.lower_covers

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash((self.elements, self.lower_covers))

    def index(self, e) -> int:
        try:
            return self._index[e]
        except (KeyError, TypeError):
            raise UnknownElement(f"unknown element {e!r}") from None

    # -- order queries on indices ---------------------------------------
    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        masks = [0] * len(self)
        for i in self.topo:
            m = 1 << i
            for c in self.lower_covers[i]:
                m |= masks[c]
            masks[i] = m
        return tuple(masks)

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        masks = [0] * len(self)
        for i in reversed(self.topo):
            m = 1 << i
            for c in self.upper_covers[i]:
                m |= masks[c]
            masks[i] = m
        return tuple(masks)

    def leq_idx(self, i: int, j: int) -> bool:
        return bool((self.down_masks[j] >> i) & 1)

    def down_indices(self, i: int) -> list[int]:
        return list(_bits(self.down_masks[i]))

    def up_indices(self, i: int) -> list[int]:
        return list(_bits(self.up_masks[i]))

    def strict_pairs(self):
        """Yield every (i, j) with i < j in the order, grouped by upper end."""
        for j in range(len(self)):
            for i in self.down_indices(j):
                if i != j:
                    yield i, j

    # -- element-level API ----------------------------------------------
    def leq(self, a, b) -> bool:
        return self.leq_idx(self.index(a), self.index(b))

    def lt(self, a, b) -> bool:
        return a != b and self.leq(a, b)

    @property
    def covers(self) -> list[tuple]:
        e = self.elements
        return [(e[lo], e[hi]) for hi in range(len(e)) for lo in self.lower_covers[hi]]

    def is_cover(self, a, b) -> bool:
        return self.index(a) in self.lower_covers[self.index(b)]

    @cached_property
    def height(self) -> int:
        if not self.elements:
            return 0
        h = [0] * len(self)
        for i in self.topo:
            h[i] = 1 + max((h[c] for c in self.lower_covers[i]), default=0)
        return max(h)

    @cached_property
    def dual(self) -> Poset:
        return DualPoset(self)

    def leq_matrix(self) -> list[list[bool]]:
        n = len(self)
        return [[self.leq_idx(i, j) for j in range(n)] for i in range(n)]


class DualPoset(Poset):
    """Order-reversed view sharing the base poset's structure."""

    def __init__(self, base: Poset):
        self.base = base
        self.elements = base.elements
        self._index = base._index
        self.lower_covers = base.upper_covers
        self.upper_covers = base.lower_covers
        self.topo = tuple(reversed(base.topo))

    @cached_property
    def down_masks(self):
        return self.base.up_masks

    @cached_property
    def up_masks(self):
        return self.base.down_masks

    def leq_idx(self, i, j):
        return self.base.leq_idx(j, i)

    def down_indices(self, i):
        return self.base.up_indices(i)

    def up_indices(self, i):
        return self.base.down_indices(i)

    @cached_property
    def height(self):
        return self.base.height

    @property
    def dual(self):
        return self.base


class BooleanCube(Poset):
    """B^n under the componentwise order; element i has x1 as its MSB."""

    def __init__(self, n: int):
        self.n = n
        size = 1 << n
        elements = [tuple((i >> (n - 1 - j)) & 1 for j in range(n)) for i in range(size)]
        lower = [[i ^ (1 << b) for b in range(n) if i >> b & 1] for i in range(size)]
        super().__init__(elements, lower, topo=range(size))

    def leq_idx(self, i, j):
        return not (i & ~j)

    def down_indices(self, i):
        subs = []
        s = i
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & i
        subs.reverse()
        return subs

    def up_indices(self, i):
        full = (1 << self.n) - 1
        free = full & ~i
        return [i | s for s in self._submasks(free)]

    @staticmethod
    def _submasks(m):
        subs = []
        s = m
        while True:
            subs.append(s)
            if s == 0:
                break
            s = (s - 1) & m
        subs.reverse()
        return subs

    @cached_property
    def height(self):
        return self.n + 1


def build_poset(elements: Sequence[Hashable], covers: Iterable[tuple]) -> Poset:
    """Build a poset from ids and a generating relation.

    The relation need not be reduced; its transitive closure is taken and
    the stored cover list is the transitive reduction.
    """
    elements = list(elements)
    if len(set(elements)) != len(elements):
        raise InputError("duplicate element ids")
    if len(elements) > MAX_POSET:
        raise InputError(f"poset larger than {MAX_POSET} elements")
    index = {e: i for i, e in enumerate(elements)}
    preds: dict[int, set[int]] = {i: set() for i in range(len(elements))}
    for a, b in covers:
        if a not in index:
            raise UnknownElement(f"unknown element {a!r}")
        if b not in index:
            raise UnknownElement(f"unknown element {b!r}")
        if a == b:
            raise CycleDetected(f"self-loop on {a!r}")
        preds[index[b]].add(index[a])
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        cycle = [elements[i] for i in exc.args[1]]
        raise CycleDetected(f"relation has a cycle through {cycle}") from None

    down = [0] * len(elements)
    for i in order:
        m = 1 << i
        for p in preds[i]:
            m |= down[p]
        down[i] = m
    lower = []
    for i in range(len(elements)):
        strict = down[i] & ~(1 << i)
        below = 0
        for c in _bits(strict):
            below |= down[c] & ~(1 << c)
        lower.append(list(_bits(strict & ~below)))
    return Poset(elements, lower)


@lru_cache(maxsize=None)
def boolean_cube(n: int) -> BooleanCube:
    if not 1 <= n <= MAX_CUBE:
        raise ArityOutOfRange(f"cube arity must be in 1..{MAX_CUBE}, got {n}")
    return BooleanCube(n)


@lru_cache(maxsize=None)
def chain(q: int) -> Poset:
    """The chain 0 < 1 < ... < q-1 with integer elements."""
    if q < 1:
        raise InputError("chain needs at least one element")
    return Poset(range(q), [[i - 1] if i else [] for i in range(q)], topo=range(q))


@lru_cache(maxsize=None)
def chain_power(q: int, n: int) -> Poset:
    """L_q^n under the componentwise order, enumerated MSB-first."""
    if q ** n > 1 << 16:
        raise ArityOutOfRange("q**n exceeds 65536")
    elements = list(itertools.product(range(q), repeat=n))
    weights = [q ** (n - 1 - j) for j in range(n)]
    lower = [[i - weights[j] for j in range(n) if e[j] > 0] for i, e in enumerate(elements)]
    return Poset(elements, lower, topo=range(len(elements)))


def antichain(ids: Sequence[Hashable]) -> Poset:
    return Poset(ids, [[] for _ in ids])


def down_set(p: Poset, x) -> frozenset:
    return frozenset(p.elements[i] for i in p.down_indices(p.index(x)))


def up_set(p: Poset, x) -> frozenset:
    return frozenset(p.elements[i] for i in p.up_indices(p.index(x)))


def minimal_elements(p: Poset, s: Iterable) -> frozenset:
    idx = sorted({p.index(e) for e in s})
    out = []
    for m in idx:
        if not any(o != m and p.leq_idx(o, m) for o in idx):
            out.append(p.elements[m])
    return frozenset(out)


def maximal_elements(p: Poset, s: Iterable) -> frozenset:
    return minimal_elements(p.dual, s)


def max_chain_elements(p: Poset) -> int:
    return p.height


def dualize(p: Poset) -> Poset:
    return p.dual


def is_isomorphic(p: Poset, q: Poset) -> dict | None:
    """Backtracking order-isomorphism search; returns the bijection or None."""
    n = len(p)
    if n != len(q) or len(p.covers) != len(q.covers):
        return None

    def signature(poset, i):
        return (len(poset.down_indices(i)), len(poset.up_indices(i)))

    sp = [signature(p, i) for i in range(n)]
    sq = [signature(q, i) for i in range(n)]
    if sorted(sp) != sorted(sq):
        return None
    image = [-1] * n
    used = [False] * n

    def extend(i):
        if i == n:
            return True
        for j in range(n):
            if used[j] or sq[j] != sp[i]:
                continue
            if all(p.leq_idx(k, i) == q.leq_idx(image[k], j) and p.leq_idx(i, k) == q.leq_idx(j, image[k])
                   for k in range(i)):
                image[i], used[j] = j, True
                if extend(i + 1):
                    return True
                used[j] = False
        image[i] = -1
        return False

    if not extend(0):
        return None
    return {p.elements[i]: q.elements[image[i]] for i in range(n)}


def is_self_dual(p: Poset) -> bool:
    if len(p) > 12:
        raise InputError("self-duality search is limited to 12 elements")
    return is_isomorphic(p, p.dual) is not None


class PosetMap:
    """A total table from ``domain`` to ``codomain``.

    Values are stored as codomain indices aligned with the domain's canonical
    enumeration.
    """

    __slots__ = ("domain", "codomain", "idx", "__weakref__")

    def __init__(self, domain: Poset, codomain: Poset, values):
        if isinstance(values, dict):
            missing = [e for e in domain.elements if e not in values]
            if missing:
                raise ShapeMismatch(f"map is not total: missing {missing[:3]}")
            extra = [k for k in values if k not in domain]
            if extra:
                raise UnknownElement(f"map mentions unknown elements {extra[:3]}")
            seq = [values[e] for e in domain.elements]
        else:
            seq = list(values)
            if len(seq) != len(domain):
                raise ShapeMismatch(f"expected {len(domain)} values, got {len(seq)}")
        self.domain = domain
        self.codomain = codomain
        self.idx = tuple(codomain.index(v) for v in seq)

    @classmethod
    def from_indices(cls, domain: Poset, codomain: Poset, idx) -> PosetMap:
        m = cls.__new__(cls)
        m.domain = domain
        m.codomain = codomain
        m.idx = tuple(idx)
        return m

    def __call__(self, x):
        return self.codomain.elements[self.idx[self.domain.index(x)]]

    @property
    def values(self) -> tuple:
        cod = self.codomain.elements
        return tuple(cod[i] for i in self.idx)

    @property
    def table(self) -> dict:
        return dict(zip(self.domain.elements, self.values))

    def __eq__(self, other):
        if not isinstance(other, PosetMap):
            return NotImplemented
        return self.idx == other.idx and self.domain == other.domain and self.codomain == other.codomain

    def __hash__(self):
        return hash(self.idx)

    def __repr__(self):
        return f"PosetMap({list(self.values)!r})"

    def with_domain(self, domain: Poset, codomain: Poset) -> PosetMap:
        """Same table over other posets with identical element enumeration."""
        if domain.elements != self.domain.elements or codomain.elements != self.codomain.elements:
            raise ShapeMismatch("element enumerations differ")
        return PosetMap.from_indices(domain, codomain, self.idx)


class Verdict(NamedTuple):
    ok: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class NonMonoDomain:
    pairs: frozenset

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)

    def __contains__(self, pair):
        return pair in self.pairs

    def __bool__(self):
        return bool(self.pairs)

    @property
    def upper_ends(self) -> frozenset:
        return frozenset(b for _, b in self.pairs)


def _first_violation(domain: Poset, codomain: Poset, idx) -> tuple[int, int] | None:
    leq = codomain.leq_idx
    for hi in range(len(domain)):
        vh = idx[hi]
        for lo in domain.lower_covers[hi]:
            if not leq(idx[lo], vh):
                return lo, hi
    return None


def is_monotone(f: PosetMap) -> Verdict:
    # Cover pairs suffice: a violation on any comparable pair shows up on some
    # cover along a maximal chain between its ends.
    hit = _first_violation(f.domain, f.codomain, f.idx)
    if hit is None:
        return Verdict(True)
    e = f.domain.elements
    return Verdict(False, (e[hit[0]], e[hit[1]]))


def nonmono_domain(f: PosetMap) -> NonMonoDomain:
    d, c, idx = f.domain, f.codomain, f.idx
    e = d.elements
    return NonMonoDomain(frozenset((e[i], e[j]) for i, j in d.strict_pairs() if not c.leq_idx(idx[i], idx[j])))


def embed_into_cube(p: Poset) -> PosetMap:
    """Send x to the characteristic vector of its down-set."""
    n = len(p)
    if not 1 <= n <= MAX_CUBE:
        raise ArityOutOfRange(f"cannot embed a poset of size {n} (limit {MAX_CUBE})")
    cube = boolean_cube(n)
    images = [tuple(int(p.leq_idx(j, i)) for j in range(n)) for i in range(n)]
    f = PosetMap(p, cube, images)
    for i in range(n):
        for j in range(n):
            if p.leq_idx(i, j) != cube.leq_idx(f.idx[i], f.idx[j]):
                raise ConstructionError(f"embedding check failed at {(p.elements[i], p.elements[j])}")
    return f


def element_key(e) -> str:
    """Stable text id: bit-vectors print as "0110", other tuples comma-joined."""
    if isinstance(e, tuple):
        if all(v in (0, 1) for v in e):
            return "".join(str(v) for v in e)
        return ",".join(str(v) for v in e)
    return str(e)


def random_poset(rng, size: int, density: float = 0.35, prefix: str = "e") -> Poset:
    """Random poset on ``size`` ids; edges only go forward so the input is acyclic."""
    ids = [f"{prefix}{i}" for i in range(size)]
    rel = [(ids[i], ids[j]) for i in range(size) for j in range(i + 1, size) if rng.random() < density]
    return build_poset(ids, rel)
