"""Exact, finite tooling for cellular automata given as rule tables.

The package covers one- and two-dimensional rules on finite windows,
exhaustive trace/space-time pattern enumeration with entropy estimates,
bounded-radius inverse search, the two-track coupling construction with
its conjugacy witness, and oriented-path automata on 2d grids, plus
plain-text formats and a ``catk`` command line for all of it.
"""

from .core import (ABSENT, DEFAULT_BUDGET, ONE_SIDED, PERIODIC, TWO_SIDED,
                   BudgetError, RuleTable, SpaceTimeDiagram, WindowConfig,
                   apply, compose, constant_rule, equal_ca, extend_rule,
                   identity_rule, iterate, pair_state, product, rotate,
                   split_state, window1d, window2d, word_string)
from .formats import (ParseError, document_kind, parse_orientation,
                      parse_path_config, parse_permutation_family,
                      parse_rule, parse_rule_file, parse_trace,
                      render_spacetime, serialize_orientation,
                      serialize_path_config, serialize_permutation_family,
                      serialize_rule, serialize_trace)
from .onesided import (PermutationFamily, family_021, family_from_rule,
                       family_to_rule, inverse_family_021,
                       invert_up_to_radius, rho_orbit_length, rho_step,
                       rule_021)
from .oriented import (BRANCH_ALL, BRANCH_PATTERN_VALID, ROLE_BEGIN,
                       ROLE_BEGIN_END, ROLE_END, ROLE_INVALID, ROLE_MIDDLE,
                       VARIANT_MOBIUS, VARIANT_SHIFT, VARIANT_ZOT,
                       Orientation, PathDecomposition, PathLayerConfig,
                       apply_hphi, apply_path_ca, classify_cells,
                       extract_paths, loop_word, word_mobius, word_phi,
                       word_phi_inverse, word_shift)
from .reduction import (GraphSubshift, ReductionSpec, WitnessReport,
                        build_f, build_g, build_phi, graph_subshift,
                        reversible_power, verify_witness)
from .trace import (EntropyEstimate, TraceSet, avoiding_window_exists,
                    entropy_estimate, find_spreading_states,
                    is_nilpotent_within, spacetime_patterns, trace_counts,
                    trace_words)
from .cli import (ExperimentSpec, parse_experiment, run_experiment,
                  serialize_experiment)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
