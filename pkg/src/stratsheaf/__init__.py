"""Exact, desk-scale computations with stratified spaces over finite posets.

Posets and their Alexandrov opens, functor-valued sheaves with Kan
extensions, stratified simplicial complexes and exit simplices, nerves,
towers over filtrations, and the exponential and cone metrics.
"""

from .errors import StratError
from .poset import (MonotoneMap, OmegaFiltration, Poset, UpwardClosedSet, validate_omega_filtration,
                    validate_poset)
from .report import FAIL, FINDING, PASS, Report
from .sheaf import SET, VECT, SheafFunctor

__all__ = [
    "StratError", "MonotoneMap", "OmegaFiltration", "Poset", "UpwardClosedSet", "validate_omega_filtration",
    "validate_poset", "FAIL", "FINDING", "PASS", "Report", "SET", "VECT", "SheafFunctor",
]
