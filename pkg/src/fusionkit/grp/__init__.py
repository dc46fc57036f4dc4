"""Finite groups, discrete p-toral groups, subgroups and morphisms."""

from __future__ import annotations

from .finite import FiniteGroup, enumerate_elements, parse_cycles, all_homomorphisms, automorphisms
from .ptoral import (Order, PToralGroup, PToralSubgroup, GroupMorphism, inclusion, conjugation,
                     torus_map, morphism_from_images)
from .ops import (snf_kernel, subgroup_closure, normalizer, centralizer, power_subgroup, order_of,
                  compare_order, hom_search, ambient_pgroup, infinite_dihedral, truncation_group,
                  truncated_family)

__all__ = [
    "FiniteGroup", "enumerate_elements", "parse_cycles", "all_homomorphisms", "automorphisms",
    "Order", "PToralGroup", "PToralSubgroup", "GroupMorphism", "inclusion", "conjugation",
    "torus_map", "morphism_from_images", "snf_kernel", "subgroup_closure", "normalizer",
    "centralizer", "power_subgroup", "order_of", "compare_order", "hom_search", "ambient_pgroup",
    "infinite_dihedral", "truncation_group", "truncated_family",
]
