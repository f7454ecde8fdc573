"""Successive monotone approximation of maps between finite posets.

A map that is not order-preserving is peeled into monotone parts joined by a
difference-like operation; on Boolean cubes this yields an implicative normal
form, and on finite chains a many-valued functional completeness result.
"""
from .algebra import (ApproximationAlgebra, AxiomReport, builtin_algebra, check_axioms, compose,
                      resolve_algebra, solve_residual)
from .boolean import INF, TruthTable, baseline_sizes, inf_formula, monotone_dnf, parse_tt, synth_inf, verify_equiv
from .decompose import ApproximatingForm, DecompositionTrace, decompose, recompose, verify_form
from .errors import (AlgebraDefect, ApproxLogicError, ConstructionError, InputError, NonMonotonePart,
                     NoProgress, NoResidual)
from .formula import evaluate_formula, parse_sexpr, to_sexpr
from .order import (Poset, PosetMap, boolean_cube, build_poset, chain, chain_power, embed_into_cube,
                    is_monotone, nonmono_domain)
from .theta import KClass, ThetaFunction, decompose_T3, special_theta, synthesize_mv

__version__ = "0.1.0"

__all__ = [
    "ApproximationAlgebra", "AxiomReport", "builtin_algebra", "check_axioms", "compose",
    "resolve_algebra", "solve_residual",
    "INF", "TruthTable", "baseline_sizes", "inf_formula", "monotone_dnf", "parse_tt", "synth_inf",
    "verify_equiv",
    "ApproximatingForm", "DecompositionTrace", "decompose", "recompose", "verify_form",
    "AlgebraDefect", "ApproxLogicError", "ConstructionError", "InputError", "NonMonotonePart",
    "NoProgress", "NoResidual",
    "evaluate_formula", "parse_sexpr", "to_sexpr",
    "Poset", "PosetMap", "boolean_cube", "build_poset", "chain", "chain_power", "embed_into_cube",
    "is_monotone", "nonmono_domain",
    "KClass", "ThetaFunction", "decompose_T3", "special_theta", "synthesize_mv",
]
