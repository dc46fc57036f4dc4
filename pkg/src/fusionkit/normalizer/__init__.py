"""K-normalizers N_S^K(Q) and the fusion subsystems N_F^K(Q)."""

from __future__ import annotations

from .core import (AutSubgroupK, k_normalizer, classify_K, normalizer_system, centralizer_system,
                   verify_normalizer_saturation, NormalizerReport)

__all__ = ["AutSubgroupK", "k_normalizer", "classify_K", "normalizer_system", "centralizer_system",
           "verify_normalizer_saturation", "NormalizerReport"]
