"""Exact word, tuple and subgroup measures on finite groups."""

from .errors import *  # noqa: F401,F403
from .groups import (DEFAULT_CATALOG, FiniteGroup, Subgroup, all_subgroups, alternating,
                     automorphism_search, automorphisms, catalog, catalog_group, cyclic, dihedral,
                     direct_product, from_table, generated_closure, quaternion8, symmetric)
from .measures import (CharQuotient, Fingerprint, char_quotient, condition5_check,
                       epi_fingerprint_direct, epi_fingerprint_recursive, evaluate, hom_fingerprint,
                       im_epi, subgroup_fingerprint, tuple_measures_equal)
from .stallings import StallingsGraph, basis, build, membership, rank
from .whitehead import OrbitVerdict, Status, WhiteheadMove, minimize, moves, same_orbit
from .words import (Endomorphism, Word, apply_endo, concat, cyclically_reduce, format_word, invert,
                    parse_tuple, parse_word, reduce)

__version__ = "0.1.0"
