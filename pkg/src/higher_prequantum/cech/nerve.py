"""Nerves of the built-in good covers.

The circle is covered by three arcs, written in their own branch
coordinates:

    U0 = (-1/8, 3/8),  U1 = (1/8, 5/8),  U2 = (3/8, 9/8)

U2 meets U0 across the cut at 0 == 1, where x_2 = x_0 + 1.  There are no
triple overlaps, and every cut point used by holonomy sits on a quarter
point so Fourier modes evaluate exactly.  T^d uses the product cover.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from ..errors import NerveMismatch
from ..exterior import AffineMap, Chart

ARCS = (
    (Fraction(-1, 8), Fraction(3, 8)),
    (Fraction(1, 8), Fraction(5, 8)),
    (Fraction(3, 8), Fraction(9, 8)),
)


def winding(a: int, b: int) -> int:
    """x_b = x_a + winding(a, b) on the overlap of arcs a and b."""
    if (a, b) == (0, 2):
        return 1
    if (a, b) == (2, 0):
        return -1
    return 0


def _arc_overlap(arcs, base: int):
    """Intersection of ``arcs`` written in the coordinates of arc ``base``."""
    lo, hi = ARCS[base]
    for b in arcs:
        blo, bhi = ARCS[b]
        w = winding(base, b)
        lo, hi = max(lo, blo - w), min(hi, bhi - w)
    return (lo, hi) if lo < hi else None


class CoverNerve:
    """Simplicial nerve with a branch chart per simplex.

    Simplices are increasing tuples of vertex indices.  The chart of a
    simplex uses the branch coordinates of its first vertex.
    """

    def __init__(self, kind: str, manifold: Chart, vertices: list):
        self.kind = kind
        self.manifold = manifold
        self.vertices = vertices
        self._simplices: dict = {}

    # -- constructors -----------------------------------------------------
    @classmethod
    def circle(cls) -> "CoverNerve":
        return cls.torus(1)

    @classmethod
    def torus(cls, dim: int) -> "CoverNerve":
        if not 1 <= dim <= 3:
            raise ValueError("torus covers are built for d = 1, 2, 3")
        verts = list(itertools.product(range(3), repeat=dim))
        return cls("torus", Chart.torus(dim), verts)

    @classmethod
    def trivial(cls, chart: Chart) -> "CoverNerve":
        """One patch equal to the whole chart."""
        return cls("trivial", chart, [None])

    # -- structure --------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.manifold.dim

    def describe(self) -> dict:
        if self.kind == "trivial":
            return {"kind": "trivial", "chart": self.manifold.describe()}
        return {"kind": "torus", "dim": self.dim, "patches": len(self.vertices)}

    def __eq__(self, other):
        return (isinstance(other, CoverNerve) and self.kind == other.kind
                and self.manifold == other.manifold)

    def __hash__(self):
        return hash((self.kind, self.manifold))

    def check_same(self, other: "CoverNerve"):
        if self != other:
            raise NerveMismatch(f"{self.describe()} vs {other.describe()}")

    def is_simplex(self, sigma) -> bool:
        if self.kind == "trivial":
            return tuple(sigma) == (0,)
        if len(set(sigma)) != len(sigma):
            return False
        for j in range(self.dim):
            if len({self.vertices[v][j] for v in sigma}) > 2:
                return False
        return True

    def simplices(self, q: int) -> list:
        if q < 0:
            return []
        if q not in self._simplices:
            if q == 0:
                self._simplices[0] = [(v,) for v in range(len(self.vertices))]
            else:
                out = []
                for s in self.simplices(q - 1):
                    for v in range(s[-1] + 1, len(self.vertices)):
                        if self.is_simplex(s + (v,)):
                            out.append(s + (v,))
                self._simplices[q] = out
        return self._simplices[q]

    def cofaces(self, sigma) -> list:
        """(tau, i) with tau of one dimension higher and sigma = tau minus its i-th vertex."""
        out = []
        if self.kind == "trivial":
            return out
        for v in range(len(self.vertices)):
            if v in sigma:
                continue
            tau = tuple(sorted(sigma + (v,)))
            if self.is_simplex(tau):
                out.append((tau, tau.index(v)))
        return out

    def chart(self, sigma) -> Chart:
        return _simplex_chart(self, tuple(sigma))

    def winding(self, a: int, b: int) -> tuple:
        """Per-axis lift offsets: x_b = x_a + winding on the overlap."""
        if self.kind == "trivial":
            return (0,) * self.dim
        va, vb = self.vertices[a], self.vertices[b]
        return tuple(winding(x, y) for x, y in zip(va, vb))

    def face_map(self, tau, sigma) -> AffineMap:
        """Inclusion of tau's chart into sigma's chart (sigma a face of tau)."""
        shift = self.winding(tau[0], sigma[0])
        return AffineMap.translation(self.chart(tau), self.chart(sigma), shift)

    def global_map(self, sigma) -> AffineMap:
        """Branch chart of sigma into the manifold chart."""
        return AffineMap.translation(self.chart(sigma), self.manifold, (0,) * self.dim)

    def to_json(self) -> dict:
        out = self.describe()
        if self.kind == "trivial":
            from ..exterior.serialize import chart_to_json
            out["chart"] = chart_to_json(self.manifold)
        return out

    @classmethod
    def from_json(cls, data) -> "CoverNerve":
        if data["kind"] == "trivial":
            from ..exterior.serialize import chart_from_json
            return cls.trivial(chart_from_json(data["chart"]))
        return cls.torus(int(data["dim"]))


_CHARTS: dict = {}


def _simplex_chart(nerve: CoverNerve, sigma: tuple) -> Chart:
    key = (nerve.kind, nerve.manifold, sigma)
    hit = _CHARTS.get(key)
    if hit is not None:
        return hit
    if nerve.kind == "trivial":
        if sigma != (0,):
            raise NerveMismatch(f"{sigma} is not a simplex of the trivial cover")
        chart = nerve.manifold
    else:
        if not nerve.is_simplex(sigma):
            raise NerveMismatch(f"{sigma} is not a simplex")
        base = nerve.vertices[sigma[0]]
        box = []
        for j in range(nerve.dim):
            iv = _arc_overlap([nerve.vertices[v][j] for v in sigma], base[j])
            if iv is None:
                raise NerveMismatch(f"{sigma} has empty intersection")
            box.append(iv)
        label = "U[" + ",".join("".join(map(str, nerve.vertices[v])) for v in sigma) + "]"
        chart = Chart.patch(box, label)
    _CHARTS[key] = chart
    return chart
