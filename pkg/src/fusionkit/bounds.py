"""Enumeration bounds, overridable through the FUSIONKIT_BOUNDS variable.

The variable holds comma separated ``key=value`` pairs, for example
``FUSIONKIT_BOUNDS="torsion_exponent=5,composite_length=6"``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields, replace


class BoundExceeded(RuntimeError):
    """An enumeration hit a configured limit before finishing."""


@dataclass(frozen=True)
class Bounds:
    max_group_order: int = 2048
    torsion_exponent: int = 6
    composite_length: int = 8
    bullet_cap: int = 64
    max_components: int = 4096
    max_reps: int = 512
    functor_search: int = 200000
    truncation: int = 4

    def with_overrides(self, **kw) -> "Bounds":
        return replace(self, **kw)


def parse_bounds(text: str, base: Bounds | None = None) -> Bounds:
    base = base or Bounds()
    names = {f.name for f in fields(Bounds)}
    kw = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if "=" not in chunk:
            raise ValueError(f"malformed bound {chunk!r}")
        key, val = (s.strip() for s in chunk.split("=", 1))
        if key not in names:
            raise ValueError(f"unknown bound {key!r}")
        kw[key] = int(val)
    return base.with_overrides(**kw)


def get_bounds() -> Bounds:
    return parse_bounds(os.environ.get("FUSIONKIT_BOUNDS", ""))
