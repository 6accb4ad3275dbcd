"""Exact compilation of partitioned quantum cellular automata into lambda-q terms.

Modules: :mod:`terms` (syntax), :mod:`reduction` (parallel reduction),
:mod:`canonical` (signed multisets), :mod:`encodings` (Church data),
:mod:`pqca` (reference simulator), :mod:`compiler` and :mod:`harness`.
"""
from .canonical import CanonicalSuperposition, canonicalize
from .compiler import (CompiledAutomaton, ScaleLedger, compile_spec, decode_config,
                       decode_superposition, encode_config, run_compiled, scale_matrix)
from .pqca import PqcaSpec, global_matrix, parse_spec, run, sigma, step, validate
from .reduction import ReductionTrace, reduce, reduce_compressed
from .terms import (Abs, App, Neg, Sup, Term, Var, alpha_eq, parse_term, show,
                    substitute)

__version__ = "0.1.0"

__all__ = [
    "Abs", "App", "CanonicalSuperposition", "CompiledAutomaton", "Neg", "PqcaSpec",
    "ReductionTrace", "ScaleLedger", "Sup", "Term", "Var", "alpha_eq", "canonicalize",
    "compile_spec", "decode_config", "decode_superposition", "encode_config",
    "global_matrix", "parse_spec", "parse_term", "reduce", "reduce_compressed", "run",
    "run_compiled", "scale_matrix", "show", "sigma", "step", "substitute", "validate",
]
