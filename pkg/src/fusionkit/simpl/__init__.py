"""Nerves, simplicial groups, W-bar, twisting functions and twisted products, truncated at level N."""

from __future__ import annotations

from .simplicial import (DEFAULT_N, IdentityReport, Nerve, SimplicialSet, boundary_of_triangle, from_rows,
                         group_category, nerve)
from .groups import (AutTypGroup, AutTypTables, ConstantGroup, SimplicialGroup, WBar, aut_typ_category,
                     aut_typ_tables, check_action, wbar)
from .twisting import (TwistingFunction, check_cocycle, check_twisting, check_wbar_map, cocycle, default_section,
                       pair_from_twisting, pair_isomorphism, random_section, random_split_pairs, roundtrip_pair,
                       roundtrip_twisting, split_pair, trivial_twisting, twisting_from_pair)
from .tcp import (NotACategoryError, TwistedProduct, category_from_simplicial, check_nerve_iso,
                  check_segal_maps, edges, twisted_product)

__all__ = ["DEFAULT_N", "IdentityReport", "Nerve", "SimplicialSet", "boundary_of_triangle", "from_rows",
           "group_category", "nerve", "AutTypGroup", "AutTypTables", "ConstantGroup", "SimplicialGroup", "WBar",
           "aut_typ_category", "aut_typ_tables", "check_action", "wbar", "TwistingFunction", "check_cocycle",
           "check_twisting", "check_wbar_map", "cocycle", "default_section", "pair_from_twisting",
           "pair_isomorphism", "random_section", "random_split_pairs", "roundtrip_pair", "roundtrip_twisting", "split_pair",
           "trivial_twisting", "twisting_from_pair", "NotACategoryError", "TwistedProduct",
           "category_from_simplicial", "check_nerve_iso", "check_segal_maps", "edges", "twisted_product"]
