"""The bullet construction P -> P* = P . I(P^[m])_0 and its induced maps."""

from __future__ import annotations

from .core import BulletContext, I_of, bullet, bullet_map, f_bullet, bullet_table

__all__ = ["BulletContext", "I_of", "bullet", "bullet_map", "f_bullet", "bullet_table"]
