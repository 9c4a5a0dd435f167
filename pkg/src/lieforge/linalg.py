"""Exact linear algebra over Q and over polynomial rings.

Matrices are plain lists of rows.  Rational matrices hold ``int`` or
``Fraction`` entries; polynomial matrices hold :class:`Poly` entries that
share a registry.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Sequence

from .ring import COORDINATE, Poly, _c

RANDOM_BOUND = 10007


def shape(m):
    return len(m), (len(m[0]) if m else 0)


def rref(rows: Sequence[Sequence]):
    """Reduced row-echelon form over Q; returns (rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return [], []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        row = [x * inv for x in a[r]]
        a[r] = row
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], row)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return [[_c(x) for x in row] for row in a[:r]], pivots


def rank(m) -> int:
    return len(rref(m)[1])


def nullspace(m, ncols: int | None = None) -> List[List]:
    """Right kernel basis; each vector's first nonzero entry is 1."""
    if ncols is None:
        ncols = shape(m)[1]
    rows, pivots = rref(m) if m else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            v[p] = -Fraction(row[f])
        lead = next(x for x in v if x)
        basis.append([_c(x / lead) for x in v])
    return basis


def det(m) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c]), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def matmul(a, b):
    bt = list(zip(*b))
    return [[_c(sum(x * y for x, y in zip(row, col))) for col in bt] for row in a]


def matvec(a, v):
    return [_c(sum(x * y for x, y in zip(row, v))) for row in a]


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def is_zero_matrix(m):
    return all(not x for row in m for x in row)


def transpose(m):
    return [list(r) for r in zip(*m)]


def inverse(m):
    n = len(m)
    aug = [list(r) + e for r, e in zip(m, identity(n))]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in rows]


# -- polynomial matrices -----------------------------------------------------

def _pick_pivot(a, k, nr, nc):
    best = None
    for j in range(k, nc):
        for i in range(k, nr):
            e = a[i][j]
            if e:
                key = (e.total_degree(), len(e.terms), j, i)
                if best is None or key < best[0]:
                    best = (key, i, j)
    return best


def _bareiss(m, want_det=False):
    """Fraction-free elimination with full pivoting; returns (rank, det-or-None)."""
    a = [list(r) for r in m]
    nr, nc = shape(a)
    if not nr or not nc:
        return 0, None
    reg = next((e.reg for r in a for e in r if isinstance(e, Poly)), None)
    prev = Poly.const(reg, 1)
    sign = 1
    r = 0
    for k in range(min(nr, nc)):
        piv = _pick_pivot(a, k, nr, nc)
        if piv is None:
            break
        _, i, j = piv
        if i != k:
            a[k], a[i] = a[i], a[k]
            sign = -sign
        if j != k:
            for row in a:
                row[k], row[j] = row[j], row[k]
            sign = -sign
        pk = a[k][k]
        for i in range(k + 1, nr):
            aik = a[i][k]
            for j in range(k + 1, nc):
                v = pk * a[i][j]
                if aik and a[k][j]:
                    v = v - aik * a[k][j]
                a[i][j] = v.divexact(prev) if not prev.is_constant() else v / prev.constant()
            a[i][k] = Poly.zero(reg)
        prev = pk
        r += 1
    d = None
    if want_det and nr == nc:
        d = prev * sign if r == nr else Poly.zero(reg)
    return r, d


def random_point(rng: random.Random, n: int) -> List[Fraction]:
    return [Fraction(rng.randint(1, RANDOM_BOUND), rng.randint(1, RANDOM_BOUND)) for _ in range(n)]


def bareiss_rank(m, strategy: str = "symbolic", seed: int = 0, trials: int = 5) -> int:
    """Generic rank of a polynomial matrix.

    ``symbolic`` runs fraction-free elimination over the polynomial ring.
    ``random`` evaluates the coordinate variables at ``trials`` seeded random
    rational points and returns the largest rank seen; parameters must have
    been substituted beforehand.
    """
    if strategy == "symbolic":
        return _bareiss(m)[0]
    if strategy != "random":
        raise ValueError(f"unknown rank strategy {strategy!r}")
    entries = [e for r in m for e in r if isinstance(e, Poly)]
    if not entries:
        return rank(m)
    reg = entries[0].reg
    used = set()
    for e in entries:
        used |= e.free_vars()
    stray = [reg.names[i] for i in used if reg.kinds[i] != COORDINATE]
    if stray:
        raise ValueError(f"random rank needs substituted parameters; found {sorted(stray)}")
    rng = random.Random(seed)
    coords = reg.coordinates
    best = 0
    for _ in range(trials):
        pt = dict(zip(coords, random_point(rng, len(coords))))
        num = [[(e.subs(pt).constant() if isinstance(e, Poly) else e) for e in r] for r in m]
        best = max(best, rank(num))
    return best


def bareiss_det(m) -> Poly:
    return _bareiss(m, want_det=True)[1]
