"""Cycle integrals of modular functions along closed geodesics of the modular surface."""

from .cycle import (
    CycleIntegralResult, EtaForm, decompose_integral, geodesic_integral, tilde_f, tilde_integral,
    value, value_of_word,
)
from .lab import ExperimentRow, Schedule, TheoremConfig, emit, papcke_sequence, run_experiment, theorem_limit
from .modular import J, J1, ONE, QExpansion, function_from_spec, j_expansion, load_expansion
from .surds import (
    QuadNumber, QuadraticSurd, QuadUnit, automorph, cf_expand, fixed_point, matrix_from_unit,
    minimal_polynomial, papcke_surd, periodic_form, unit_from_matrix,
)
from .wordexpr import expand, parse_word_expr
from .words import EvenWord, Mat2Z, WordError, gamma_of_word, multiplicity, primitive_decomposition

__version__ = "0.1.0"
