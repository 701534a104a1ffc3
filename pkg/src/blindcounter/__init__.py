"""Exact toolkit for blind counter automata, semilinear sets and word-problem groups."""

from .blind import (Alphabet, AutomatonCache, BlindAutomaton, Edge, accept,
                    accept_with_certificate, automaton_constants, normalize, parse_word,
                    short_witness)
from .cho import ChoAutomaton, blind_det_to_cho, cho_accept, cho_to_blind
from .config import Config, ResourceLimitError
from .semilinear import (LinearMap, LinearSet, SemilinearSet, bounded_preimage, compute_LM,
                         intersect_witness, intersection_bound)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "AutomatonCache", "BlindAutomaton", "ChoAutomaton", "Config", "Edge",
    "LinearMap", "LinearSet", "ResourceLimitError", "SemilinearSet", "accept",
    "accept_with_certificate", "automaton_constants", "blind_det_to_cho", "bounded_preimage",
    "cho_accept", "cho_to_blind", "compute_LM", "intersect_witness", "intersection_bound",
    "normalize", "parse_word", "short_witness",
]
