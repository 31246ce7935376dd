"""Morphisms between primitive substitution subshifts.

Substitutions and their factor languages, exact spectral predicates,
recognizers, dill maps as finite tables, conjugation trajectories and
exhaustive enumeration of block maps up to shift.
"""

from .dill import (
    BlockRule,
    DillTable,
    InvariantReport,
    almost_equivalent,
    almost_inverse,
    apply_prefix,
    canonicalize,
    compose,
    compose_invariant_bounds,
    from_block_map,
    from_substitution,
    identity_rule,
    invariants,
    shift_rule,
    symbol_rule,
)
from .conjugation import alpha_bound, conjugate_step, reduce_to_representative, trajectory
from .enumeration import build_example_family, dedupe_up_to_shift, enumerate_block_maps, period_class
from .recognizer import build_recognizer, cut_data, decode
from .substitution import (
    FactorLanguage,
    Substitution,
    fibonacci,
    language,
    parse_substitution,
    thue_morse,
    tribonacci,
)
from .words import Alphabet

__version__ = "0.1.0"
