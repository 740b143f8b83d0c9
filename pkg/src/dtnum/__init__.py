"""Numeration systems generated by substitutions.

Build systems for N, the negative integers, or all of Z from a
substitution and a seed, compute and invert digit representations,
decide whether the system is positional (with weight sequences or a
counterexample certificate), and classify fixed-point systems against
Bertrand/Parry numeration. Everything is exact integer arithmetic.
"""

from .core import (
    DOMAINS,
    Domain,
    NumerationSystem,
    SeedSpec,
    Substitution,
    find_seeds,
    first_letter_cycle,
    image_length,
    is_primitive,
    last_letter_cycle,
    make_system,
    minimal_period,
    parse_seed,
    parse_substitution,
    reachable_letters,
    restrict,
    substitution_from_text,
    validate_seed,
)
from .numeration import (
    AdmissibleSequence,
    AdmissibleStep,
    DigitWord,
    decompose_prefix,
    rep,
    rep_classic_N,
    twos_complement_rep,
    twos_complement_val,
    val,
    val_classic_N,
)
from .trees import (
    ExpansionOracle,
    TreeNode,
    TreeSlice,
    expand,
    oracle_rep,
    to_dot,
    to_tsv,
)
from .positionality import (
    ConditionC,
    ConsistentWeights,
    Counterexample,
    PositionalityReport,
    ResidueSets,
    WeightContradiction,
    WeightTable,
    check_positional,
    compute_residue_sets,
    evaluate_with_weights,
    fit_weights_oracle,
    weights,
)
from .classify import (
    BERTRAND_CLASSES,
    FabreForm,
    UPWord,
    bertrand_classify,
    classification_json,
    expansion_word,
    fabre_form,
    fabre_like_periodic,
    greedy_rep,
    inverse_quasi_greedy,
    nonfinal_letters,
    parry_check,
    quasi_greedy,
    simplify,
    tree_shape_equal,
)
from . import errors

__version__ = "0.1.0"
