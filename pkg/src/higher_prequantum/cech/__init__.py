"""Cech-de Rham and Cech-Deligne cochains on the built-in covers."""

from .cochain import (
    Cochain,
    CocycleCheck,
    curvature,
    from_global,
    is_cocycle,
    lift_global,
    restrict,
    total_differential,
    zero_cochain,
)
from .nerve import CoverNerve

__all__ = [
    "Cochain", "CocycleCheck", "CoverNerve", "curvature", "from_global", "is_cocycle",
    "lift_global", "restrict", "total_differential", "zero_cochain",
]
