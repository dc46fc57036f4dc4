"""Finite transporter and linking systems as explicit categories."""

from __future__ import annotations

from .category import AxiomReport, CatFunctor, FiniteCategory
from .transporter import (LinkingSystem, TransporterSystem, check_linking_axioms, check_transporter_axioms,
                          extend_morphism, is_T_radical, kernel_splitting, linking_quotient, orbit_category,
                          restrict_morphism, transporter_of)
from .autos import (IsotypicalData, center_of, center_oracle, check_fusion_preserving, conj_functor,
                    is_isotypical, isotypical_autos, restriction_to_S, top_object)
from .normal import NormalityReport, is_normal_subsystem
from .faults import FAULTS, full_subsystem

__all__ = ["AxiomReport", "CatFunctor", "FiniteCategory", "LinkingSystem", "TransporterSystem",
           "check_linking_axioms", "check_transporter_axioms", "extend_morphism", "is_T_radical",
           "kernel_splitting", "linking_quotient", "orbit_category", "restrict_morphism", "transporter_of",
           "IsotypicalData", "center_of", "center_oracle", "check_fusion_preserving", "conj_functor",
           "is_isotypical", "isotypical_autos", "restriction_to_S", "top_object",
           "NormalityReport", "is_normal_subsystem", "FAULTS", "full_subsystem"]
