"""Global sign conventions.

Two choices are not fixed by the underlying mathematics and are switchable:

``contraction``
    ``"first-inner"`` (default): i_{v1 ^ ... ^ vk} = i_{vk} o ... o i_{v1},
    so ``v1`` is contracted into the first slot.
    ``"last-inner"``: i_{v1 ^ ... ^ vk} = i_{v1} o ... o i_{vk}.

``jacobi``
    ``"shuffle"`` (default): sum chi(sigma) (-1)^{i(j-1)} l_j(l_i(...), ...).
    ``"alternate"``: the same sum weighted by (-1)^{ij}.

Both live in a :class:`contextvars.ContextVar`, so concurrent callers may use
different settings without interfering.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, replace

CONTRACTIONS = ("first-inner", "last-inner")
JACOBI_SIGNS = ("shuffle", "alternate")


@dataclass(frozen=True)
class Conventions:
    contraction: str = "first-inner"
    jacobi: str = "shuffle"

    def __post_init__(self):
        if self.contraction not in CONTRACTIONS:
            raise ValueError(f"unknown contraction convention {self.contraction!r}")
        if self.jacobi not in JACOBI_SIGNS:
            raise ValueError(f"unknown jacobi convention {self.jacobi!r}")

    def as_dict(self) -> dict:
        return {"contraction": self.contraction, "jacobi": self.jacobi}


_current: contextvars.ContextVar[Conventions] = contextvars.ContextVar(
    "higher_prequantum_conventions", default=Conventions()
)


def current() -> Conventions:
    return _current.get()


@contextlib.contextmanager
def using(**changes):
    """Temporarily override conventions, e.g. ``with using(jacobi="alternate"):``."""
    token = _current.set(replace(_current.get(), **changes))
    try:
        yield _current.get()
    finally:
        _current.reset(token)
