"""Successive-approximation decomposition of a poset map into monotone parts.

Primal forms nest to the right, ``psi = bm(phi1, bm(phi2, ... bm(phi_t, rest)))``;
dual forms nest to the left, ``psi = bm*(bm*(... bm*(rest, phi_t) ...), phi1)``.
Both are built by one loop: a dual decomposition runs the primal loop on the
reversed domain and codomain against the algebra's dual view.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

from .algebra import DUAL, PRIMAL, ApproximationAlgebra, ensure_axioms, solve_residual_idx
from .errors import AlgebraDefect, IterationOverflow, NonMonotonePart, NoProgress, ShapeMismatch, UnknownName
from .order import Poset, PosetMap, Verdict, _bits, _first_violation, element_key, nonmono_domain

log = logging.getLogger(__name__)

STRATEGIES = ("t1", "t2-fold", "t2-chain")


@dataclass(frozen=True)
class ApproximatingForm:
    orientation: str
    parts: tuple
    domain: Poset
    codomain: Poset
    strategy: str = "t1"

    @property
    def compose_ops(self) -> int:
        return len(self.parts) - 1

    def to_json(self, algebra=None) -> dict:
        out = {
            "orientation": self.orientation,
            "strategy": self.strategy,
            "compose_ops": self.compose_ops,
            "parts": [{element_key(e): v for e, v in zip(self.domain.elements, p.values)} for p in self.parts],
        }
        if algebra is not None:
            out["algebra"] = algebra.name if algebra.name != "custom" else algebra.to_json()
        return out


@dataclass
class TraceStep:
    """One peel: input residual, region M_i, its complement, minimal antichain, approximant, new residual."""

    index: int
    domain: Poset
    codomain: Poset
    psi_idx: tuple
    region_mask: int
    minimal_mask: int
    phi_idx: tuple
    residual_idx: tuple

    def _elements(self, mask):
        e = self.domain.elements
        return frozenset(e[i] for i in _bits(mask))

    @property
    def region(self) -> frozenset:
        return self._elements(self.region_mask)

    @property
    def complement(self) -> frozenset:
        return self._elements(((1 << len(self.domain)) - 1) & ~self.region_mask)

    @property
    def minimal(self) -> frozenset:
        return self._elements(self.minimal_mask)

    @property
    def psi(self) -> PosetMap:
        return PosetMap.from_indices(self.domain, self.codomain, self.psi_idx)

    @property
    def phi(self) -> PosetMap:
        return PosetMap.from_indices(self.domain, self.codomain, self.phi_idx)

    @property
    def residual(self) -> PosetMap:
        return PosetMap.from_indices(self.domain, self.codomain, self.residual_idx)

    @cached_property
    def n_before(self):
        return nonmono_domain(self.psi)

    @cached_property
    def n_after(self):
        return nonmono_domain(self.residual)

    def to_json(self) -> dict:
        key = element_key
        order = self.domain.elements
        pick = lambda s: [key(e) for e in order if e in s]  # noqa: E731
        cod = self.codomain.elements
        return {
            "step": self.index,
            "region": pick(self.region),
            "complement": pick(self.complement),
            "minimal": pick(self.minimal),
            "psi": [cod[i] for i in self.psi_idx],
            "phi": [cod[i] for i in self.phi_idx],
            "residual": [cod[i] for i in self.residual_idx],
            "nonmono_before": sorted([key(a), key(b)] for a, b in self.n_before),
            "nonmono_after": sorted([key(a), key(b)] for a, b in self.n_after),
        }


@dataclass
class DecompositionTrace:
    orientation: str
    strategy: str
    steps: list = field(default_factory=list)

    def regions(self) -> list[frozenset]:
        return [s.region for s in self.steps]

    def nonmono_chain(self) -> list:
        """n(psi_0), n(psi_1), ... ending with the final (monotone) residual."""
        if not self.steps:
            return []
        return [s.n_before for s in self.steps] + [self.steps[-1].n_after]

    def n_shrinks(self) -> list[bool]:
        """Whether n(psi_i) is a strict subset of n(psi_{i-1}) at each step."""
        return [s.n_after.pairs < s.n_before.pairs for s in self.steps]

    def region_shrinks(self) -> list[bool]:
        """M_{i+1} inside M_i minus its minimal elements, for consecutive steps."""
        out = []
        for a, b in zip(self.steps, self.steps[1:]):
            out.append(b.region_mask & ~(a.region_mask & ~a.minimal_mask) == 0 and b.region_mask != a.region_mask)
        return out

    def to_json(self) -> dict:
        return {"orientation": self.orientation, "strategy": self.strategy,
                "steps": [s.to_json() for s in self.steps]}


def required_system(alg: ApproximationAlgebra, strategy: str) -> str:
    base = "A" if strategy == "t1" else "B"
    return base + ("*" if alg.orientation == DUAL else "")


def decompose(psi: PosetMap, alg: ApproximationAlgebra, strategy: str = "t1"):
    """Peel monotone approximants off ``psi`` until the residual is monotone.

    Returns ``(form, trace)``. A monotone input gives a one-part form.
    """
    if strategy not in STRATEGIES:
        raise UnknownName(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if psi.codomain != alg.L:
        raise ShapeMismatch("map codomain differs from the algebra's level set")
    ensure_axioms(alg, required_system(alg, strategy))

    dual = alg.orientation == DUAL
    view = alg.primal_view
    M = psi.domain.dual if dual else psi.domain
    trace = DecompositionTrace(alg.orientation, strategy)
    try:
        tables = _peel(M, view, psi.idx, strategy, trace, psi.domain, psi.codomain, dual)
    except (NonMonotonePart, NoProgress, IterationOverflow) as exc:
        exc.trace = trace
        raise
    parts = tuple(PosetMap.from_indices(psi.domain, psi.codomain, t) for t in tables)
    return ApproximatingForm(alg.orientation, parts, psi.domain, psi.codomain, strategy), trace


def _mask_of(flags) -> int:
    return int("".join("1" if f else "0" for f in reversed(flags)) or "0", 2)


def _peel(M: Poset, view: ApproximationAlgebra, start, strategy, trace, domain, codomain, dual):
    L = view.L
    below = L.down_masks
    lower, topo = M.lower_covers, M.topo
    n = len(M)
    bplus, dot = view.boxplus, view.dot
    solved = {}
    cur = list(start)
    parts = []
    prev_region = prev_min = None

    for step in range(1, n + 2):
        values = [0] * n
        inreg = [False] * n
        for x in topo:
            m = 1 << cur[x]
            r = False
            for c in lower[x]:
                m |= values[c]
                r = r or inreg[c]
            values[x] = m
            # x is in the region if some comparable pair below it breaks monotonicity
            inreg[x] = r or bool(m & ~below[cur[x]])
        region = _mask_of(inreg)
        if not region:
            break
        if step > n:
            raise IterationOverflow(f"more than {n} peeling steps")
        if prev_region is not None and (region & ~(prev_region & ~prev_min) or region == prev_region):
            raise NoProgress(f"step {step}: region did not shrink below the previous one")
        minimal = _mask_of([inreg[x] and not any(inreg[c] for c in lower[x]) for x in range(n)])

        if strategy == "t1":
            phi = [view.boxplus_set_idx(values[x]) if inreg[x] else cur[x] for x in range(n)]
        elif strategy == "t2-fold":
            phi = list(cur)
            for x in range(n):
                if inreg[x]:
                    vals = [cur[z] for z in M.down_indices(x)]
                    acc = vals[-1]
                    for v in reversed(vals[:-1]):
                        acc = bplus[v][acc]
                    phi[x] = acc
        else:
            phi = list(cur)
            for x in topo:
                if inreg[x]:
                    # parent: the last lower cover in canonical order
                    phi[x] = bplus[cur[x]][phi[lower[x][-1]]]

        for x in range(n):
            if not L.leq_idx(cur[x], phi[x]):
                e = domain.elements[x]
                raise AlgebraDefect(f"approximant is not an upper bound at {e!r}; boxplus violates axiom 2")
        hit = _first_violation(M, L, phi)
        if hit is not None:
            lo, hi = (hit[1], hit[0]) if dual else hit
            pair = (domain.elements[lo], domain.elements[hi])
            raise NonMonotonePart(f"step {step} ({strategy}): approximant not monotone on {pair}", witness=pair)

        res = [0] * n
        for x in range(n):
            a, t = phi[x], cur[x]
            if a == t:
                res[x] = dot[t]
            else:
                key = (a, t)
                if key not in solved:
                    solved[key] = solve_residual_idx(view, a, t)
                res[x] = solved[key]

        trace.steps.append(TraceStep(step, domain, codomain, tuple(cur), region, minimal, tuple(phi), tuple(res)))
        parts.append(tuple(phi))
        cur = res
        prev_region, prev_min = region, minimal

    parts.append(tuple(cur))
    return parts


def recompose(form: ApproximatingForm, alg: ApproximationAlgebra) -> PosetMap:
    if not form.parts:
        raise ShapeMismatch("form has no parts")
    for p in form.parts:
        if p.domain != form.domain or p.codomain != form.codomain:
            raise ShapeMismatch("parts disagree on domain or codomain")
    if form.codomain != alg.L:
        raise ShapeMismatch("form codomain differs from the algebra's level set")
    acc = list(form.parts[-1].idx)
    for part in reversed(form.parts[:-1]):
        acc = [alg.compose_idx(a, r) for a, r in zip(part.idx, acc)]
    return PosetMap.from_indices(form.domain, form.codomain, acc)


@dataclass
class FormReport:
    ok: bool
    recompose_ok: bool
    mismatch: object = None
    monotone_ok: bool = True
    nonmonotone_part: tuple | None = None
    bound_ok: bool = True
    stats: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        mismatch = None if self.mismatch is None else element_key(self.mismatch)
        bad = None
        if self.nonmonotone_part is not None:
            i, (a, b) = self.nonmonotone_part
            bad = {"part": i, "pair": [element_key(a), element_key(b)]}
        return {"ok": self.ok, "recompose_ok": self.recompose_ok, "mismatch": mismatch,
                "monotone_ok": self.monotone_ok, "nonmonotone_part": bad,
                "bound_ok": self.bound_ok, "stats": self.stats}


def verify_form(form: ApproximatingForm, psi: PosetMap, alg: ApproximationAlgebra) -> FormReport:
    """Check recomposition, monotonicity of every part and the chain-length bound."""
    from .order import is_monotone

    if psi.domain != form.domain or psi.codomain != form.codomain:
        raise ShapeMismatch("form and map live on different posets")
    back = recompose(form, alg)
    mismatch = None
    for e, a, b in zip(psi.domain.elements, back.idx, psi.idx):
        if a != b:
            mismatch = e
            break
    bad = None
    for i, part in enumerate(form.parts):
        v: Verdict = is_monotone(part)
        if not v:
            bad = (i, v.witness)
            break
    stats = form_stats(form)
    ok = mismatch is None and bad is None and stats["bound_ok"]
    return FormReport(ok, mismatch is None, mismatch, bad is None, bad, stats["bound_ok"], stats)


def form_stats(form: ApproximatingForm) -> dict:
    chain_len = form.domain.height
    return {
        "parts": len(form.parts),
        "compose_ops": form.compose_ops,
        "domain_chain_elements": chain_len,
        "domain_chain_edges": max(chain_len - 1, 0),
        "bound_ok": form.compose_ops <= chain_len,
    }


def form_from_json(data: dict, domain: Poset, codomain: Poset) -> ApproximatingForm:
    from .errors import InputError

    try:
        orientation = data.get("orientation", PRIMAL)
        raw_parts = data["parts"]
    except (AttributeError, KeyError):
        raise InputError("form file needs 'orientation' and 'parts'") from None
    keyed = {element_key(e): e for e in domain.elements}
    levels = {element_key(v): v for v in codomain.elements}
    parts = []
    for raw in raw_parts:
        if isinstance(raw, list):
            vals = [levels.get(element_key(v), v) for v in raw]
            parts.append(PosetMap(domain, codomain, vals))
        else:
            table = {}
            for k, v in raw.items():
                if k not in keyed:
                    from .errors import UnknownElement
                    raise UnknownElement(f"unknown element {k!r} in form part")
                table[keyed[k]] = levels.get(element_key(v), v)
            parts.append(PosetMap(domain, codomain, table))
    if not parts:
        raise InputError("form has no parts")
    return ApproximatingForm(orientation, tuple(parts), domain, codomain, data.get("strategy", "t1"))
