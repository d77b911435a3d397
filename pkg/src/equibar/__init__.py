"""Simplicial, bar and subdivision constructions with exact integral homology.

Covers monoids with anti-involution, categories with strict duality and
unimodular forms over the integers.
"""
__version__ = "0.1.0"

from .errors import (CategoryError, EquibarError, FormError, HypothesisError, MonoidError,
                     NotSimplicialError, RelationError, TruncationError)
from .simplicial import (BisimplicialSet, RealStructure, SimplicialMap, SimplicialSet,
                         attach_real_structure, diagonal, fixed_points, sd, sd_action, sd_h,
                         sd_v)
from .monoid import FiniteMonoid, corpus, load_monoid
from .homology import homology_groups, induced_map

__all__ = [
    "CategoryError", "EquibarError", "FormError", "HypothesisError", "MonoidError",
    "NotSimplicialError", "RelationError", "TruncationError",
    "BisimplicialSet", "RealStructure", "SimplicialMap", "SimplicialSet",
    "attach_real_structure", "diagonal", "fixed_points", "sd", "sd_action", "sd_h", "sd_v",
    "FiniteMonoid", "corpus", "load_monoid", "homology_groups", "induced_map",
]
