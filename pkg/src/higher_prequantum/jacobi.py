"""Generalized Jacobi identities for L-infinity brackets (homological grading).

For graded elements x_1..x_k the identity of arity k is

    sum_{i+j=k+1} sum_{unshuffles s} chi(s) e(i, j) l_j(l_i(x_s1..x_si), x_s(i+1)..x_sk) = 0

where chi is the antisymmetric Koszul sign and ``e`` is picked by the
``jacobi`` convention: ``(-1)^{i(j-1)}`` ("shuffle") or ``(-1)^{ij}``
("alternate").
"""

from __future__ import annotations

import itertools

from . import conventions


def koszul_antisymmetric(degrees, order) -> int:
    """chi(order): sign of reordering graded elements antisymmetrically.

    Each inversion of elements a, b contributes -(-1)^{|a||b|}.
    """
    sign = 1
    for p in range(len(order)):
        for q in range(p + 1, len(order)):
            a, b = order[p], order[q]
            if a > b:
                if (degrees[a] * degrees[b]) % 2 == 0:
                    sign = -sign
    return sign


def koszul_symmetric(degrees, order) -> int:
    """epsilon(order): Koszul sign only, each inversion contributes (-1)^{|a||b|}."""
    sign = 1
    for p in range(len(order)):
        for q in range(p + 1, len(order)):
            a, b = order[p], order[q]
            if a > b and (degrees[a] * degrees[b]) % 2:
                sign = -sign
    return sign


def unshuffles(k: int, i: int):
    """Index tuples (first i in increasing order, remaining k-i increasing)."""
    for head in itertools.combinations(range(k), i):
        rest = tuple(x for x in range(k) if x not in head)
        yield head + rest


def convention_sign(i: int, j: int, which: str | None = None) -> int:
    which = which or conventions.current().jacobi
    if which == "shuffle":
        return -1 if (i * (j - 1)) % 2 else 1
    return -1 if (i * j) % 2 else 1


def jacobiator(bracket, xs, degree, max_arity: int | None = None):
    """List of ``(sign, value)`` summands of the arity-``len(xs)`` identity.

    ``bracket(list)`` evaluates l_m on a list; ``degree(x)`` reads gradings.
    Brackets of arity above ``max_arity`` are treated as zero.
    """
    k = len(xs)
    degs = [degree(x) for x in xs]
    which = conventions.current().jacobi
    out = []
    for i in range(1, k + 1):
        j = k + 1 - i
        if max_arity is not None and (i > max_arity or j > max_arity):
            continue
        e = convention_sign(i, j, which)
        for order in unshuffles(k, i):
            chi = koszul_antisymmetric(degs, order)
            inner = bracket([xs[t] for t in order[:i]])
            if inner is None:
                continue
            outer = bracket([inner] + [xs[t] for t in order[i:]])
            if outer is None:
                continue
            out.append((chi * e, outer))
    return out


def decalage_sign(degrees) -> int:
    """Sign relating q_k(sx_1..sx_k) to s l_k(x_1..x_k): (-1)^{sum (k-i)|x_i|}."""
    k = len(degrees)
    return -1 if sum((k - 1 - i) * deg for i, deg in enumerate(degrees)) % 2 else 1


def shifted_jacobiator(bracket, xs, degree, max_arity: int | None = None):
    """Summands of the same identity written in the suspended symmetric picture.

    Uses only symmetric Koszul signs on shifted degrees and the decalage
    sign; it is an independent route to the same vanishing statement.
    """
    k = len(xs)
    degs = [degree(x) for x in xs]
    shifted = [g + 1 for g in degs]
    out = []
    for i in range(1, k + 1):
        j = k + 1 - i
        if max_arity is not None and (i > max_arity or j > max_arity):
            continue
        for order in unshuffles(k, i):
            eps = koszul_symmetric(shifted, order)
            head = [xs[t] for t in order[:i]]
            rest = [xs[t] for t in order[i:]]
            inner = bracket(head)
            if inner is None:
                continue
            s_inner = decalage_sign([degs[t] for t in order[:i]])
            y_deg = sum(degs[t] for t in order[:i]) + i - 2
            outer = bracket([inner] + rest)
            if outer is None:
                continue
            s_outer = decalage_sign([y_deg] + [degs[t] for t in order[i:]])
            out.append((eps * s_inner * s_outer, outer))
    return out
