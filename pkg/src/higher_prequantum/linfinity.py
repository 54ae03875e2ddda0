"""Finite-dimensional L-infinity algebras given by structure constants.

Brackets use homological grading: ``l_k`` has degree ``k - 2`` and is
graded antisymmetric, ``l_k(.., x, y, ..) = -(-1)^{|x||y|} l_k(.., y, x, ..)``.
Only non-decreasing generator tuples are stored; other orderings are
recovered with the Koszul sign.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import conventions, jacobi, linalg
from .errors import DegreeMismatch, NotAComplex, NotACocycle
from .exterior.scalar import ZERO, Scalar, as_scalar


class Element:
    """Homogeneous vector: generator index -> coefficient."""

    __slots__ = ("terms", "degree")

    def __init__(self, terms: dict, degree: int | None):
        self.terms = {g: c for g, c in terms.items() if c}
        self.degree = degree

    def __add__(self, other: "Element") -> "Element":
        out = dict(self.terms)
        for g, c in other.terms.items():
            out[g] = out.get(g, ZERO) + c
        deg = self.degree if self.degree is not None else other.degree
        return Element(out, deg)

    def scale(self, c) -> "Element":
        c = as_scalar(c)
        return Element({g: v * c for g, v in self.terms.items()}, self.degree)

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Element) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def render(self, names) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c.render()}*{names[g]}" for g, c in sorted(self.terms.items()))


@dataclass
class LInfinityData:
    names: list
    degrees: list
    max_arity: int
    # k -> {non-decreasing generator tuple: {generator: Scalar}}
    brackets: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.names) != len(self.degrees):
            raise ValueError("one degree per generator")
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be unique")
        raw, self.brackets = self.brackets, {}
        for k, table in raw.items():
            for tup, val in table.items():
                self.set_bracket(tup, val)

    @property
    def size(self) -> int:
        return len(self.names)

    def index(self, name) -> int:
        return name if isinstance(name, int) else self.names.index(name)

    def normal_form(self, tup) -> tuple[int, tuple]:
        """(chi, sorted tuple) with l(tup) = chi * l(sorted); chi = 0 if forced zero."""
        tup = tuple(self.index(t) for t in tup)
        order = sorted(range(len(tup)), key=lambda p: (tup[p], p))
        srt = tuple(tup[p] for p in order)
        for a, b in zip(srt, srt[1:]):
            if a == b and self.degrees[a] % 2 == 0:
                return 0, srt
        chi = jacobi.koszul_antisymmetric([self.degrees[t] for t in tup], order)
        return chi, srt

    def set_bracket(self, tup, value) -> None:
        """Record l_k(tup) = value (a dict generator -> coefficient)."""
        tup = tuple(self.index(t) for t in tup)
        k = len(tup)
        if k < 1 or k > self.max_arity:
            raise ValueError(f"arity {k} outside 1..{self.max_arity}")
        val = {self.index(g): as_scalar(c) for g, c in value.items() if as_scalar(c)}
        target = sum(self.degrees[t] for t in tup) + k - 2
        for g in val:
            if self.degrees[g] != target:
                raise DegreeMismatch(f"l_{k}{tup} must land in degree {target}")
        chi, srt = self.normal_form(tup)
        if chi == 0:
            if val:
                raise ValueError(f"l_{k}{tup} is forced to vanish by antisymmetry")
            return
        table = self.brackets.setdefault(k, {})
        if val:
            table[srt] = {g: c * chi for g, c in val.items()}
        else:
            table.pop(srt, None)

    def bracket_basis(self, tup) -> Element:
        tup = tuple(self.index(t) for t in tup)
        k = len(tup)
        deg = sum(self.degrees[t] for t in tup) + k - 2
        chi, srt = self.normal_form(tup)
        if chi == 0:
            return Element({}, deg)
        val = self.brackets.get(k, {}).get(srt)
        if not val:
            return Element({}, deg)
        return Element({g: c * chi for g, c in val.items()}, deg)

    def bracket(self, elements) -> Element:
        """Multilinear extension of l_k to homogeneous elements."""
        k = len(elements)
        deg = sum(e.degree for e in elements) + k - 2
        if k > self.max_arity or any(e.is_zero() for e in elements):
            return Element({}, deg)
        out = Element({}, deg)
        for combo in itertools.product(*(sorted(e.terms.items()) for e in elements)):
            coeff = Scalar(1)
            for _, c in combo:
                coeff = coeff * c
            out = out + self.bracket_basis([g for g, _ in combo]).scale(coeff)
        return out

    def basis(self, g) -> Element:
        g = self.index(g)
        return Element({g: Scalar(1)}, self.degrees[g])

    def is_lie(self) -> bool:
        return all(deg == 0 for deg in self.degrees) and set(self.brackets) <= {2}

    def tuples(self, k: int):
        """Non-decreasing tuples that are not forced to vanish."""
        for tup in itertools.combinations_with_replacement(range(self.size), k):
            if all(not (a == b and self.degrees[a] % 2 == 0) for a, b in zip(tup, tup[1:])):
                yield tup

    def to_json(self) -> dict:
        return {
            "generators": [{"name": n, "degree": g} for n, g in zip(self.names, self.degrees)],
            "max_arity": self.max_arity,
            "brackets": [
                {"arity": k, "inputs": [self.names[t] for t in tup],
                 "output": [{"generator": self.names[g], "c": c.render()}
                            for g, c in sorted(val.items())]}
                for k in sorted(self.brackets) for tup, val in sorted(self.brackets[k].items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "LInfinityData":
        from .exterior.grammar import parse_scalar
        names = [g["name"] for g in data["generators"]]
        L = cls(names, [int(g["degree"]) for g in data["generators"]], int(data["max_arity"]))
        for b in data.get("brackets", []):
            val = {o["generator"]: parse_scalar(str(o["c"]).replace("^", "**"))
                   for o in b["output"]}
            L.set_bracket(tuple(b["inputs"]), val)
        return L


def lie_algebra(names, structure: dict) -> LInfinityData:
    """Lie algebra from {(a, b): {c: coefficient}} with a, b names."""
    L = LInfinityData(list(names), [0] * len(names), 2)
    for (a, b), val in structure.items():
        L.set_bracket((a, b), val)
    return L


def su2() -> LInfinityData:
    """[e1, e2] = e3 and cyclic."""
    return lie_algebra(["e1", "e2", "e3"], {
        ("e1", "e2"): {"e3": 1}, ("e2", "e3"): {"e1": 1}, ("e3", "e1"): {"e2": 1},
    })


def abelian(names, degrees=None) -> LInfinityData:
    degrees = degrees or [0] * len(names)
    return LInfinityData(list(names), list(degrees), 2)


def _sum(terms, degree) -> Element:
    out = Element({}, degree)
    for sign, x in terms:
        out = out + (x if sign > 0 else -x)
    return out


def jacobi_residual(L: LInfinityData, tup, shifted: bool = False) -> Element:
    xs = [L.basis(t) for t in tup]
    fn = jacobi.shifted_jacobiator if shifted else jacobi.jacobiator
    terms = fn(L.bracket, xs, lambda x: x.degree, L.max_arity)
    return _sum(terms, sum(x.degree for x in xs) + len(xs) - 3)


def verify_l_infinity(L: LInfinityData, max_arity: int, shifted: bool = False) -> dict:
    """Brute-force every generalized Jacobi identity on basis tuples.

    ``shifted=True`` evaluates the identities in the suspended symmetric
    picture instead; both must agree on vanishing.
    """
    if max_arity > min(L.max_arity + 2, 5):
        raise ValueError(f"max_arity must be <= {min(L.max_arity + 2, 5)}")
    rows = []
    per_arity = {}
    for k in range(1, max_arity + 1):
        checked = bad = 0
        for tup in L.tuples(k):
            res = jacobi_residual(L, tup, shifted)
            checked += 1
            if not res.is_zero():
                bad += 1
                rows.append({"arity": k, "inputs": [L.names[t] for t in tup],
                             "residual": res.render(L.names)})
        per_arity[str(k)] = {"checked": checked, "nonzero": bad}
    return {
        "conventions": conventions.current().as_dict(),
        "picture": "shifted-symmetric" if shifted else "antisymmetric",
        "max_arity": max_arity,
        "per_arity": per_arity,
        "nonzero_residuals": rows,
        "all_zero": not rows,
    }


@dataclass
class LieCocycle:
    """Fully skew m-linear form on a Lie algebra, stored on increasing tuples."""

    base: LInfinityData
    degree: int
    values: dict

    def __post_init__(self):
        vals, self.values = self.values, {}
        for tup, c in vals.items():
            tup = tuple(self.base.index(t) for t in tup)
            if len(tup) != self.degree:
                raise DegreeMismatch(f"cochain of degree {self.degree} evaluated on {tup}")
            sign, srt = _perm_sign(tup)
            c = as_scalar(c)
            if sign == 0:
                if c:
                    raise ValueError("skew cochains vanish on repeated arguments")
                continue
            if c:
                self.values[srt] = c * sign

    def __call__(self, tup) -> Scalar:
        sign, srt = _perm_sign(tuple(self.base.index(t) for t in tup))
        if sign == 0:
            return ZERO
        return self.values.get(srt, ZERO) * sign

    def evaluate(self, elements) -> Scalar:
        total = ZERO
        for combo in itertools.product(*(sorted(e.terms.items()) for e in elements)):
            c = Scalar(1)
            for _, x in combo:
                c = c * x
            total = total + self([g for g, _ in combo]) * c
        return total


def _perm_sign(tup):
    from .exterior.forms import sort_index
    return sort_index(tup)


def invariant_three_form(g: LInfinityData) -> LieCocycle:
    """<x, [y, z]> with the identity matrix as inner product."""
    vals = {}
    for tup in itertools.combinations(range(g.size), 3):
        a, b, c = tup
        vals[tup] = g.bracket_basis((b, c)).terms.get(a, ZERO)
    return LieCocycle(g, 3, vals)


def ce_coboundary(g: LInfinityData, mu: LieCocycle, tup) -> Scalar:
    """(d mu)(x_0..x_m) = sum_{i<j} (-1)^{i+j} mu([x_i, x_j], x_0..^i..^j..x_m)."""
    xs = [g.basis(t) for t in tup]
    total = ZERO
    for i, j in itertools.combinations(range(len(xs)), 2):
        br = g.bracket([xs[i], xs[j]])
        rest = [x for p, x in enumerate(xs) if p not in (i, j)]
        val = mu.evaluate([br] + rest)
        total = total + (val if (i + j) % 2 == 0 else -val)
    return total


def is_cocycle(g: LInfinityData, mu: LieCocycle) -> tuple[bool, dict]:
    if not g.is_lie():
        raise DegreeMismatch("is_cocycle expects a Lie algebra (only l_2, degree 0)")
    if mu.base is not g and mu.base.names != g.names:
        raise ValueError("cochain lives on another Lie algebra")
    residual = {}
    for tup in itertools.combinations(range(g.size), mu.degree + 1):
        r = ce_coboundary(g, mu, tup)
        if r:
            residual[tuple(g.names[t] for t in tup)] = r
    return not residual, residual


def string_extension(g: LInfinityData, mu: LieCocycle, central: str = "c") -> LInfinityData:
    """g in degree 0 plus a line in degree m-2; l_m = mu times the central generator."""
    ok, res = is_cocycle(g, mu)
    if not ok:
        raise NotACocycle(f"coboundary nonzero on {sorted(res)}")
    m = mu.degree
    if m < 2:
        raise DegreeMismatch("the extending cocycle needs degree >= 2")
    names = list(g.names) + [central]
    degrees = list(g.degrees) + [m - 2]
    ext = LInfinityData(names, degrees, max(2, m))
    for tup, val in g.brackets.get(2, {}).items():
        ext.set_bracket(tup, dict(val))
    c_idx = len(names) - 1
    for tup, val in mu.values.items():
        cur = ext.bracket_basis(tup).terms if m == 2 else {}
        cur = dict(cur)
        cur[c_idx] = cur.get(c_idx, ZERO) + val
        ext.set_bracket(tup, cur)
    return ext


def verify_morphism(components: dict, src: LInfinityData, dst: LInfinityData,
                    max_arity: int) -> dict:
    """Check the L-infinity morphism relations on basis tuples.

    ``components[k]`` maps non-decreasing source tuples to dicts over ``dst``
    generators (F_k has degree k-1).  The relations are evaluated in the
    suspended symmetric picture:

        sum f(q(x_S), x_R) = sum q'(f(x_B1), ..., f(x_Bj))

    over unshuffles on the left and block partitions on the right.
    """
    F = {}
    for k, table in components.items():
        F[k] = {}
        for tup, val in table.items():
            tup = tuple(src.index(t) for t in tup)
            chi, srt = src.normal_form(tup)
            if chi == 0:
                continue
            vals = {dst.index(g): as_scalar(c) * chi for g, c in val.items() if as_scalar(c)}
            target = sum(src.degrees[t] for t in tup) + k - 1
            for g in vals:
                if dst.degrees[g] != target:
                    raise DegreeMismatch(f"F_{k}{tup} must land in degree {target}")
            F[k][srt] = vals

    def F_apply(elements) -> Element:
        k = len(elements)
        deg = sum(e.degree for e in elements) + k - 1
        out = Element({}, deg)
        table = F.get(k, {})
        for combo in itertools.product(*(sorted(e.terms.items()) for e in elements)):
            tup = [g for g, _ in combo]
            chi, srt = src.normal_form(tup)
            if chi == 0 or srt not in table:
                continue
            coeff = Scalar(chi)
            for _, c in combo:
                coeff = coeff * c
            out = out + Element(dict(table[srt]), deg).scale(coeff)
        return out

    rows = []
    per_arity = {}
    for k in range(1, max_arity + 1):
        checked = bad = 0
        for tup in src.tuples(k):
            xs = [src.basis(t) for t in tup]
            degs = [x.degree for x in xs]
            shifted = [g + 1 for g in degs]
            lhs = Element({}, None)
            for i in range(1, k + 1):
                if i > src.max_arity:
                    continue
                for order in jacobi.unshuffles(k, i):
                    eps = jacobi.koszul_symmetric(shifted, order)
                    head = [xs[t] for t in order[:i]]
                    rest = [xs[t] for t in order[i:]]
                    inner = src.bracket(head)
                    if inner.is_zero():
                        continue
                    s1 = jacobi.decalage_sign([degs[t] for t in order[:i]])
                    y_deg = inner.degree
                    out = F_apply([inner] + rest)
                    s2 = jacobi.decalage_sign([y_deg] + [degs[t] for t in order[i:]])
                    lhs = lhs + out.scale(eps * s1 * s2)
            rhs = Element({}, None)
            for blocks in _ordered_partitions(k):
                order = tuple(t for b in blocks for t in b)
                eps = jacobi.koszul_symmetric(shifted, order)
                images = []
                sign = eps
                for b in blocks:
                    img = F_apply([xs[t] for t in b])
                    sign *= jacobi.decalage_sign([degs[t] for t in b])
                    images.append(img)
                if any(im.is_zero() for im in images) or len(blocks) > dst.max_arity:
                    continue
                out = dst.bracket(images)
                sign *= jacobi.decalage_sign([im.degree for im in images])
                rhs = rhs + out.scale(sign)
            res = lhs + (-rhs)
            checked += 1
            if not res.is_zero():
                bad += 1
                rows.append({"arity": k, "inputs": [src.names[t] for t in tup],
                             "residual": res.render(dst.names)})
        per_arity[str(k)] = {"checked": checked, "nonzero": bad}
    return {"max_arity": max_arity, "per_arity": per_arity,
            "nonzero_residuals": rows, "all_zero": not rows}


def _ordered_partitions(k: int):
    """Set partitions of range(k), blocks sorted internally and by minimum."""
    def rec(items):
        if not items:
            yield []
            return
        first, rest = items[0], items[1:]
        for part in rec(rest):
            # put first into an existing block or a new one
            yield [[first]] + part
            for i in range(len(part)):
                yield part[:i] + [[first] + part[i]] + part[i + 1:]
    for part in rec(list(range(k))):
        yield sorted((tuple(sorted(b)) for b in part), key=lambda b: b[0])


# ---------------------------------------------------------------------------
# homology of finite complexes
# ---------------------------------------------------------------------------

def _normalize(mat, ns=None):
    """Accept dense lists or (rows, ncols, nrows) triples; return (rows, ncols, nrows)."""
    if isinstance(mat, tuple) and len(mat) == 3:
        return mat
    rows = linalg.dense_rows(mat)
    ncols = len(mat[0]) if mat else (ns or 0)
    return rows, ncols, len(mat)


def _compose_zero(a, b) -> bool:
    """Is b . a == 0 for sparse row matrices a: U -> V, b: V -> W?"""
    a_rows, _, _ = a
    b_rows, _, _ = b
    for brow in b_rows:
        acc: dict = {}
        for vidx, bc in brow.items():
            if vidx >= len(a_rows):
                continue
            for uidx, ac in a_rows[vidx].items():
                acc[uidx] = acc.get(uidx, ZERO) + bc * ac
        if any(v for v in acc.values()):
            return False
    return True


def homology(dims, differentials) -> list[int]:
    """Betti numbers of  C_0 -> C_1 -> ... (cochain direction).

    ``differentials[p]`` maps C_p to C_{p+1}, as a dense matrix with
    ``dims[p+1]`` rows or as ``(sparse rows, ncols, nrows)``.
    """
    dims = list(dims)
    mats = [_normalize(m, dims[p] if p < len(dims) else 0) for p, m in enumerate(differentials)]
    if len(mats) > max(len(dims) - 1, 0):
        raise ValueError("one differential between each pair of consecutive spaces")
    for p, (rows, ncols, nrows) in enumerate(mats):
        if ncols != dims[p] or (p + 1 < len(dims) and nrows != dims[p + 1]):
            raise ValueError(f"differential {p} has shape {nrows}x{ncols}, "
                             f"expected {dims[p + 1] if p + 1 < len(dims) else '?'}x{dims[p]}")
    for p in range(len(mats) - 1):
        if not _compose_zero(mats[p], mats[p + 1]):
            raise NotAComplex(f"d_{p + 1} o d_{p} != 0")
    ranks = [linalg.rank(rows, ncols) if rows else 0 for rows, ncols, _ in mats]
    betti = []
    for p, dim in enumerate(dims):
        out_rank = ranks[p] if p < len(ranks) else 0
        in_rank = ranks[p - 1] if 0 < p <= len(ranks) else 0
        betti.append(dim - out_rank - in_rank)
    return betti
