"""Extension pairs (L, U) and the extension of a linking system by a group."""

from __future__ import annotations

from .core import (CanonicalPair, ExtensionPair, ExtensionPairError, LUCategory, PipelineResult, build_LU,
                   canonical_pair_from_group_extension, elementwise_theta, extension_pipeline,
                   fusion_isomorphic_by_map, split_trivial_pair, validate_extension_pair)

__all__ = ["CanonicalPair", "ExtensionPair", "ExtensionPairError", "LUCategory", "PipelineResult", "build_LU",
           "canonical_pair_from_group_extension", "elementwise_theta", "extension_pipeline",
           "fusion_isomorphic_by_map", "split_trivial_pair", "validate_extension_pair"]
