"""Exact analysis of finitely ambiguous probabilistic automata.

The package keeps every probability an exact rational: emptiness is a
strict-inequality decision, and rounding would change answers.
Floating point appears only inside clearly marked approximate pruning.
"""

from .ambiguity import AmbiguityClass, ambiguity_profile, classify, is_k_ambiguous
from .automaton import (
    ProbabilisticAutomaton,
    Run,
    acceptance_probability,
    enumerate_accepting_runs,
    forward_vector,
    normalize_initial,
    parse_automaton,
    serialize_automaton,
    trim,
)
from .errors import (
    AmbiguityError,
    BudgetExceededError,
    FormatError,
    InvariantError,
    NotFinitelyAmbiguousError,
    PbaError,
    PrecisionError,
)
from .witness import (
    WitnessReport,
    exhaustive_emptiness,
    exhaustive_value,
    shorten_witness_finite,
    shorten_witness_k,
    witness_bound,
)

__all__ = [
    "AmbiguityClass",
    "AmbiguityError",
    "BudgetExceededError",
    "FormatError",
    "InvariantError",
    "NotFinitelyAmbiguousError",
    "PbaError",
    "PrecisionError",
    "ProbabilisticAutomaton",
    "Run",
    "WitnessReport",
    "acceptance_probability",
    "ambiguity_profile",
    "classify",
    "enumerate_accepting_runs",
    "exhaustive_emptiness",
    "exhaustive_value",
    "forward_vector",
    "is_k_ambiguous",
    "normalize_initial",
    "parse_automaton",
    "serialize_automaton",
    "shorten_witness_finite",
    "shorten_witness_k",
    "trim",
    "witness_bound",
]

__version__ = "0.1.0"
