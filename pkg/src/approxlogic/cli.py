"""Command-line entry point: ``approxlogic <subcommand> ...``.

Exit codes: 0 ok, 1 verification or axiom failure, 2 bad input,
3 a construction that should have succeeded did not (trace dumped).
"""
from __future__ import annotations

import argparse
import json
import sys

from .algebra import SYSTEMS, check_axioms, resolve_algebra
from .boolean import baseline_sizes, inf_formula, parse_tt, synth_inf
from .decompose import STRATEGIES, decompose, form_from_json, verify_form
from .errors import AlgebraDefect, ConstructionError, InputError
from .formula import dump_formula_file, to_sexpr
from .io import dumps, map_from_json, map_to_json, mv_table_from_json, poset_from_json, read_json, read_text
from .order import embed_into_cube, element_key
from .theta import decompose_T3, mv_semantics, synthesize_mv

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONSTRUCTION = 0, 1, 2, 3


def _emit(text: str):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_decompose(args) -> int:
    psi = map_from_json(read_json(args.map))
    alg = resolve_algebra(args.algebra)
    trace = None
    try:
        form, trace = decompose(psi, alg, args.strategy)
    finally:
        if args.trace is not None:
            t = trace
            if t is None:
                t = getattr(sys.exc_info()[1], "trace", None)
            if t is not None:
                payload = dumps(t.to_json()) + "\n"
                if args.trace == "-":
                    sys.stderr.write(payload)
                else:
                    with open(args.trace, "w") as fh:
                        fh.write(payload)
    out = form.to_json(alg)
    out["domain"] = map_to_json(psi)["domain"]
    out["codomain"] = map_to_json(psi)["codomain"]
    _emit(dumps(out))
    return EXIT_OK


def cmd_inf(args) -> int:
    tt = parse_tt(read_text(args.tt))
    if args.emit == "formula":
        _emit(to_sexpr(inf_formula(tt)))
    elif args.emit == "parts":
        _emit("\n".join(p.values for p in synth_inf(tt).parts))
    else:
        data = synth_inf(tt).to_json()
        data["formula"] = to_sexpr(inf_formula(tt))
        data["sizes"] = baseline_sizes(tt)
        _emit(dumps(data))
    return EXIT_OK


def cmd_mv(args) -> int:
    table, q, n = mv_table_from_json(read_json(args.table))
    node = synthesize_mv(table, q, n)
    if args.emit == "file":
        _emit(dump_formula_file(node, mv_semantics(q, n), n).rstrip("\n"))
    else:
        _emit(to_sexpr(node))
    return EXIT_OK


def cmd_theta(args) -> int:
    psi = map_from_json(read_json(args.map))
    alg = resolve_algebra(args.algebra)
    node, report = decompose_T3(psi, alg)
    if args.emit == "json":
        data = report.to_json()
        data["formula"] = to_sexpr(node)
        _emit(dumps(data))
    else:
        _emit(to_sexpr(node))
    return EXIT_OK


def cmd_check_axioms(args) -> int:
    alg = resolve_algebra(args.algebra)
    M = poset_from_json(read_json(args.poset)) if args.poset else None
    report = check_axioms(alg, args.system, M)
    _emit(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_embed(args) -> int:
    P = poset_from_json(read_json(args.poset))
    emb = embed_into_cube(P)
    if args.emit == "json":
        _emit(dumps({"coordinates": [element_key(e) for e in P.elements],
                     "embedding": {element_key(e): element_key(emb(e)) for e in P.elements}}))
    else:
        _emit("\n".join(f"{element_key(e)}\t{element_key(emb(e))}" for e in P.elements))
    return EXIT_OK


def cmd_verify(args) -> int:
    psi = map_from_json(read_json(args.against))
    data = read_json(args.form)
    selector = args.algebra or data.get("algebra")
    if selector is None:
        raise InputError("no algebra given in the form file or on the command line")
    from .algebra import algebra_from_json

    alg = algebra_from_json(selector) if isinstance(selector, dict) else resolve_algebra(selector)
    form = form_from_json(data, psi.domain, psi.codomain)
    report = verify_form(form, psi, alg)
    _emit(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_selftest(args) -> int:
    from .selftest import run_all

    results = run_all(seed=args.seed, max_n=args.max_n)
    if args.emit == "json":
        _emit(dumps([r.to_json() for r in results]))
    else:
        for r in results:
            _emit(r.line())
    return EXIT_OK if all(r.ok for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="approxlogic",
                                description="Monotone decompositions of poset maps and the formulas they yield.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="split a map into monotone parts")
    d.add_argument("--map", required=True)
    d.add_argument("--algebra", required=True)
    d.add_argument("--strategy", choices=STRATEGIES, default="t1")
    d.add_argument("--trace", nargs="?", const="-", default=None,
                   help="write the step trace as JSON (stderr unless a path is given)")
    d.set_defaults(func=cmd_decompose)

    i = sub.add_parser("inf", help="implicative normal form of a truth table")
    i.add_argument("--tt", required=True)
    i.add_argument("--emit", choices=("formula", "parts", "json"), default="formula")
    i.set_defaults(func=cmd_inf)

    m = sub.add_parser("mv", help="formula for a many-valued table")
    m.add_argument("--table", required=True)
    m.add_argument("--emit", choices=("text", "file"), default="text")
    m.set_defaults(func=cmd_mv)

    t = sub.add_parser("theta", help="boxminus/boxplus formula over theta leaves")
    t.add_argument("--map", required=True)
    t.add_argument("--algebra", required=True)
    t.add_argument("--emit", choices=("text", "json"), default="text")
    t.set_defaults(func=cmd_theta)

    c = sub.add_parser("check-axioms", help="check an algebra against an axiom system")
    c.add_argument("--algebra", required=True)
    c.add_argument("--system", choices=SYSTEMS, required=True)
    c.add_argument("--poset", help="domain poset for the antichain axiom")
    c.set_defaults(func=cmd_check_axioms)

    e = sub.add_parser("embed", help="order-embed a poset into a Boolean cube")
    e.add_argument("--poset", required=True)
    e.add_argument("--emit", choices=("text", "json"), default="text")
    e.set_defaults(func=cmd_embed)

    v = sub.add_parser("verify", help="check a form file against a map")
    v.add_argument("--form", required=True)
    v.add_argument("--against", required=True)
    v.add_argument("--algebra")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("selftest", help="run the acceptance suites")
    s.add_argument("--max-n", type=int, default=4)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--emit", choices=("text", "json"), default="text")
    s.set_defaults(func=cmd_selftest)
    return p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConstructionError as exc:
        print(f"construction failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        if exc.witness is not None:
            w = exc.witness
            print("witness: " + json.dumps([element_key(x) for x in w] if isinstance(w, tuple) else w,
                                           default=str), file=sys.stderr)
        if getattr(exc, "trace", None) is not None and getattr(args, "trace", None) is None:
            sys.stderr.write(dumps(exc.trace.to_json()) + "\n")
        return EXIT_CONSTRUCTION
    except AlgebraDefect as exc:
        print(f"algebra defect: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
