"""Subshifts, symbol streams, covers and sliding block codes."""

from .words import Alphabet, AlphabetError, Cylinder, Word, as_word, parse_word, word_str
from .streams import (EventuallyPeriodic, ExplicitPrefix, GeneratedStream, HorizonError,
                      LadderStream, ShiftedStream, SubstitutionFixedPoint, SymbolStream,
                      morse, periodic, shift_stream)
from .graphs import LabeledGraph, SubsetAutomaton, isomorphic, morse_cover, prune_sinks
from .shifts import (SFT, Admissibility, CoverWalkShift, FullShift, NotIrreducibleError,
                     SoficShift, Subshift, SubstitutionShift, UnsupportedPresentationError,
                     glue, is_admissible, is_irreducible, is_synchronizing, language,
                     morse_cover_shift, shift_from_dict, subshift_periodic_points,
                     transitive_stream)
from .covers import (BlockMap, EdgeShift, MappedStream, NotSoficError, ReducibleShiftError,
                     apply_block_map, edge_shift, fischer_cover, substitution_fixed_point)
