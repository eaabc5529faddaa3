"""Exact multi-j symbols from loop and curve generating functions on trivalent ribbon graphs."""
from .exact import RootRational
from .graph import (
    RecouplingGraph,
    STANDARD_GRAPHS,
    five_j,
    glue_legs,
    nine_j,
    parse_graph,
    six_j,
    three_j,
)
from .curves import MultilinearPolynomial, count_sets, curve_polynomial, loop_polynomial
from .series import TruncatedSeries, glue_series
from .quantum import QuantumAssignment, selection_flags
from .symbols import (
    SymbolEvaluator,
    SymbolValue,
    expand_eq5,
    expand_eq6,
    generating_function,
    symbol_value,
    symbol_via_layer_sums,
)
from .oracles import contraction_oracle, racah_3j, racah_6j

__version__ = "0.1.0"
