from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


@dataclass(frozen=True)
class Chart:
    """A flat coordinate chart.

    A *manifold* chart models R^a x T^b with unit periods on the periodic axes.
    A *patch* chart (``branch`` set) is a box of branch coordinates inside a
    contractible open set; all of its axes are non-periodic.
    """

    dim: int
    periodic: tuple[bool, ...]
    branch: tuple[tuple[Fraction, Fraction], ...] | None = None
    label: str = ""

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("chart dimension must be >= 1")
        if len(self.periodic) != self.dim:
            raise ValueError("one periodicity flag per axis")
        object.__setattr__(self, "periodic", tuple(bool(p) for p in self.periodic))
        if self.branch is not None:
            if any(self.periodic):
                raise ValueError("patch charts are contractible: no periodic axes")
            if len(self.branch) != self.dim:
                raise ValueError("one branch interval per axis")
            br = tuple((Fraction(lo), Fraction(hi)) for lo, hi in self.branch)
            for lo, hi in br:
                if not (0 < hi - lo <= 1):
                    raise ValueError(f"branch interval ({lo}, {hi}) must have length in (0, 1]")
            object.__setattr__(self, "branch", br)

    @classmethod
    def euclidean(cls, dim: int) -> "Chart":
        return cls(dim, (False,) * dim, label=f"R{dim}")

    @classmethod
    def torus(cls, dim: int) -> "Chart":
        return cls(dim, (True,) * dim, label=f"T{dim}")

    @classmethod
    def patch(cls, intervals, label: str = "") -> "Chart":
        intervals = tuple(intervals)
        return cls(len(intervals), (False,) * len(intervals), tuple(intervals), label)

    @property
    def is_patch(self) -> bool:
        return self.branch is not None

    @property
    def fully_periodic(self) -> bool:
        return all(self.periodic)

    def contains(self, point) -> bool:
        if len(point) != self.dim:
            return False
        if self.branch is None:
            return True
        return all(lo < Fraction(x) < hi for x, (lo, hi) in zip(point, self.branch))

    def describe(self) -> str:
        if self.label:
            return self.label
        return f"chart(dim={self.dim}, periodic={self.periodic})"
