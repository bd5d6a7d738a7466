"""Interval rearrangement ensembles, scheme duality, induction and circle rotations."""

from .canonical import CanonicalForm, canonicalize, is_canonical
from .circle import (ArcUnion, CircleRotation, ReturnMapResult, dual_from_return_map, first_return_map,
                     perturb_to_irrational, realize, realize_canonical, shift_equivalence)
from .errors import IREError, ParseError, ValidationError
from .induction import InductionStep, MergeOp, Transcript, apply_step, dual_step_correspondence, replay
from .lengths import FixedIRE, FloatingIRE, endpoints_from_lengths, is_allowed, is_rotational
from .scheme import Scheme, Sym, cycles, dual, is_irreducible, twist_number, twist_total_pair
from .textio import format_scheme, parse_scheme

__version__ = "0.1.0"

__all__ = [
    "ArcUnion", "CanonicalForm", "CircleRotation", "FixedIRE", "FloatingIRE", "IREError", "InductionStep",
    "MergeOp", "ParseError", "ReturnMapResult", "Scheme", "Sym", "Transcript", "ValidationError",
    "apply_step", "canonicalize", "cycles", "dual", "dual_from_return_map", "dual_step_correspondence",
    "endpoints_from_lengths", "first_return_map", "format_scheme", "is_allowed", "is_canonical",
    "is_irreducible", "is_rotational", "parse_scheme", "perturb_to_irrational", "realize",
    "realize_canonical", "replay", "shift_equivalence", "twist_number", "twist_total_pair",
]
