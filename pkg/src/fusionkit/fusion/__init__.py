"""Fusion systems and saturation checks."""

from __future__ import annotations

from .core import FusionSystem, AmbientFinite, Generated, Subsystem, inner_system, close_matrix_group
from .saturation import (ConjugacyClass, SaturationReport, Witness, Chain, f_classes, classify_subgroup,
                         check_saturated, rep_classes, fully_normalized, fully_centralized,
                         fully_automized, is_receptive, is_centric, is_radical, extension_domain,
                         find_extension, normalizer_transfer)
from .criteria import check_conditions_star, check_H_properties, check_criterion, generated_by, member_of

__all__ = [
    "FusionSystem", "AmbientFinite", "Generated", "Subsystem", "inner_system", "close_matrix_group",
    "ConjugacyClass", "SaturationReport", "Witness", "Chain", "f_classes", "classify_subgroup",
    "check_saturated", "rep_classes", "fully_normalized", "fully_centralized", "fully_automized",
    "is_receptive", "is_centric", "is_radical", "extension_domain", "find_extension",
    "normalizer_transfer", "check_conditions_star", "check_H_properties", "check_criterion",
    "generated_by", "member_of",
]
