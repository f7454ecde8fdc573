"""JSON and text file formats.

Poset: ``{"elements": [...], "covers": [[lo, hi], ...]}``.
Map: ``{"domain": <poset> | "cube:n" | "chain:q" | "chain:q^n", "codomain": <poset> | "chain:q",
"values": {"elem": level, ...}}`` (a list aligned with the enumeration is accepted too).
Cube and chain-power elements are keyed as bit strings ("01") or comma-joined levels ("2,0").
"""
from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import InputError, ShapeMismatch, UnknownElement
from .order import Poset, PosetMap, boolean_cube, build_poset, chain, chain_power, element_key

_CUBE = re.compile(r"^cube:(\d+)$")
_CHAIN = re.compile(r"^chain:(\d+)(?:\^(\d+))?$")


def read_json(path) -> object:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def read_text(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def dumps(data) -> str:
    """Deterministic JSON rendering used by every emitter."""
    return json.dumps(data, indent=2, sort_keys=False, ensure_ascii=False)


# -- posets -------------------------------------------------------------------
def poset_from_json(data) -> Poset:
    if isinstance(data, str):
        if m := _CUBE.match(data):
            return boolean_cube(int(m.group(1)))
        if m := _CHAIN.match(data):
            q = int(m.group(1))
            return chain_power(q, int(m.group(2))) if m.group(2) else chain(q)
        raise InputError(f"unknown poset shorthand {data!r}")
    if not isinstance(data, dict) or "elements" not in data:
        raise InputError("poset needs an 'elements' list")
    elements = data["elements"]
    if not isinstance(elements, list):
        raise InputError("'elements' must be a list")
    covers = data.get("covers", [])
    try:
        pairs = [(a, b) for a, b in covers]
    except (TypeError, ValueError):
        raise InputError("'covers' must be a list of [lower, upper] pairs") from None
    return build_poset(elements, pairs)


def poset_to_json(p: Poset) -> dict:
    keys = [element_key(e) for e in p.elements]
    return {
        "elements": keys,
        "covers": [[keys[lo], keys[i]] for i in range(len(p)) for lo in p.lower_covers[i]],
    }


def _lookup(p: Poset, key, what: str):
    if key in p:
        return key
    keyed = {element_key(e): e for e in p.elements}
    k = element_key(key)
    if k in keyed:
        return keyed[k]
    raise UnknownElement(f"{what} {key!r} is not an element")


# -- maps ---------------------------------------------------------------------
def map_from_json(data) -> PosetMap:
    if not isinstance(data, dict):
        raise InputError("map file must be a JSON object")
    for field in ("domain", "codomain", "values"):
        if field not in data:
            raise InputError(f"map file is missing {field!r}")
    dom = poset_from_json(data["domain"])
    cod = poset_from_json(data["codomain"])
    values = data["values"]
    if isinstance(values, dict):
        table = {_lookup(dom, k, "domain element"): _lookup(cod, v, "level") for k, v in values.items()}
        return PosetMap(dom, cod, table)
    if isinstance(values, (list, str)):
        if len(values) != len(dom):
            raise ShapeMismatch(f"expected {len(dom)} values, got {len(values)}")
        return PosetMap(dom, cod, [_lookup(cod, v, "level") for v in values])
    raise InputError("'values' must be an object or a list")


def _poset_ref(p: Poset):
    from .order import BooleanCube

    if isinstance(p, BooleanCube):
        return f"cube:{p.n}"
    if p == chain(len(p)):
        return f"chain:{len(p)}"
    return poset_to_json(p)


def map_to_json(f: PosetMap) -> dict:
    return {
        "domain": _poset_ref(f.domain),
        "codomain": _poset_ref(f.codomain),
        "values": {element_key(e): v for e, v in zip(f.domain.elements, f.values)},
    }


# -- multi-valued tables --------------------------------------------------------
def mv_table_from_json(data) -> tuple[list[int], int, int]:
    try:
        q, n, values = int(data["q"]), int(data["n"]), [int(v) for v in data["values"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed table file: {exc}") from None
    if len(values) != q ** n:
        raise ShapeMismatch(f"q={q}, n={n} needs {q ** n} values, got {len(values)}")
    return values, q, n
