"""factorlab: a workbench for truncated factor sets of words.

Generation from substitutions and interval exchanges, extension-graph
structure checks, return words and derived sets, bifix codes and their
decodings, and free-group certificates (folded graphs, basis and tame
decompositions, adic representations).
"""

from .words import (FactorSet, ExtensionGraph, ExtensionRecord, Verdict,
                    extension_graph, extensions, factors,
                    generalized_extension_graph, is_acyclic_set,
                    is_recurrent_desk, is_special, is_tree_set)
from .morphisms import (FixedPointSpec, Morphism, compose,
                        episturmian_morphism, factor_set_of_fixed_point,
                        is_primitive)
from .iet import IntervalExchange, Quad, SemiInterval, parse_iet
from .returns import (DerivedSet, ReturnData, derived_set, derived_word,
                      left_right_conjugation, return_words,
                      uniform_recurrence_check)
from .codes import (Automaton, GroupMorphism, compose_codes, decompose_over,
                    group_code_intersection, in_star, internal_factors,
                    is_bifix_code, is_code, is_prefix_code,
                    is_s_maximal_bifix, is_s_maximal_prefix,
                    is_s_maximal_suffix, is_suffix_code, kernel,
                    minimal_automaton_of_star, parse_count, parses, s_degree)
from .freegroup import (FoldedGraph, TameDecomposition,
                        elementary_automorphism, fold, is_basis,
                        reduce_word, saturation_check, tame_decompose)
from .decoding import (AdicRepresentation, DecodedSet, SetSource,
                       degree_multiplicativity, max_bifix_decode,
                       sadic_extract, sadic_replay,
                       verify_decoding_closure)
from . import presets

__version__ = "0.1.0"
