"""Reversible logic synthesis by swapping bit strings, with Toffoli network reduction."""

from .core import (
    BitString,
    Circuit,
    ContractError,
    NotReversibleError,
    Order,
    ParseError,
    Permutation,
    ToffoliGate,
    apply_gate,
    apply_gate_output_side,
    complexity,
    format_gate,
    hamming,
    invert,
    parse_gate,
    parse_gates,
    simulate,
    swap_gate,
)
from .oracle import build_distances, exhaustive_benchmark, optimal_circuit
from .reduction import apply_templates, can_interchange, reduce, reduce_controls, remove_useless
from .synthesis import SynthOptions, SynthResult, synthesize, synthesize_random
from .templates import Template, builtin_templates

__version__ = "0.1.0"
