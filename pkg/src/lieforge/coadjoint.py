"""Coadjoint vector fields, invariant counts and generalized Casimir checks.

A candidate invariant is a :class:`GenExpr`: a finite sum of terms

    coeff * prod_b B_b**e_b * prod_b (ln B_b)**m_b

over caller-declared polynomial bases ``B_b``.  Term coefficients are
rational functions whose numerators may involve coordinates and parameters
and whose denominators involve parameters only.  Exponents are rationals, or
rational functions of the parameters (e.g. ``-(4 + 2 l)/(3 + 2 l)``).

All identities are decided on the open set where every base is positive,
which is where real powers and logarithms are single valued.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .liealg import LieAlgebra
from .ring import COORDINATE, Poly, RatFunc, VarRegistry, poly_from


def parse_ratfunc(reg: VarRegistry, text: str) -> RatFunc:
    """Parse ``P`` or ``(P)/(Q)`` into a rational function."""
    text = text.strip()
    m = re.fullmatch(r"\((.*)\)\s*/\s*\((.*)\)", text)
    if m:
        try:
            return RatFunc(Poly.parse(reg, m.group(1)), Poly.parse(reg, m.group(2)))
        except ValueError:
            pass
    return RatFunc(Poly.parse(reg, text), 1, reg)


def _rf(reg, x) -> RatFunc:
    if isinstance(x, str):
        return parse_ratfunc(reg, x)
    return RatFunc.of(reg, x)


def _integer_offset(a: RatFunc, b: RatFunc) -> Optional[int]:
    d = (a - b).constant_value()
    if d is None or d.denominator != 1:
        return None
    return d.numerator


# -- generalized expressions -------------------------------------------------

class GenExpr:
    """Sum of ``coeff * prod B**e * prod (ln B)**m`` terms over fixed bases."""

    def __init__(self, reg: VarRegistry, bases: Sequence[Poly] = (), terms=()):
        self.reg = reg
        self.bases = tuple(poly_from(reg, b) for b in bases)
        coords = set(reg.coordinates)
        for i, b in enumerate(self.bases):
            if b.is_constant():
                raise ValueError("a base must involve coordinate variables")
            if b.free_vars() - coords:
                raise ValueError(f"base {b} involves non-coordinate variables")
            if b.leading()[1] < 0:
                raise ValueError(f"base {b} must have a positive leading coefficient")
            if b in self.bases[:i]:
                raise ValueError(f"duplicate base {b}")
        nb = len(self.bases)
        merged: List[list] = []
        for coeff, exps, logs in terms:
            coeff = _rf(reg, coeff)
            if coeff.is_zero():
                continue
            exps = tuple(_rf(reg, e) for e in exps) if exps else tuple(RatFunc.of(reg, 0) for _ in range(nb))
            logs = tuple(int(x) for x in logs) if logs else (0,) * nb
            if len(exps) != nb or len(logs) != nb:
                raise ValueError("exponent/log vectors must match the base list")
            if any(x < 0 for x in logs):
                raise ValueError("log powers must be non-negative")
            for t in merged:
                if t[2] == logs and all(x == y for x, y in zip(t[1], exps)):
                    t[0] = t[0] + coeff
                    break
            else:
                merged.append([coeff, exps, logs])
        self.terms = [tuple(t) for t in merged if not t[0].is_zero()]

    # -- constructors ----------------------------------------------------
    @classmethod
    def constant(cls, reg, c):
        return cls(reg, (), [(c, (), ())])

    @classmethod
    def from_poly(cls, p: Poly):
        return cls(p.reg, (), [(RatFunc(p, 1), (), ())])

    @classmethod
    def power(cls, base: Poly, exponent, coeff=1):
        reg = base.reg
        return cls(reg, [base], [(coeff, (_rf(reg, exponent),), (0,))])

    @classmethod
    def log(cls, base: Poly, power: int = 1, coeff=1):
        reg = base.reg
        return cls(reg, [base], [(coeff, (RatFunc.of(reg, 0),), (power,))])

    # -- algebra ---------------------------------------------------------
    def _rebase(self, bases):
        """Terms re-expressed over a superset of this expression's bases."""
        pos = [bases.index(b) for b in self.bases]
        zero = RatFunc.of(self.reg, 0)
        out = []
        for c, exps, logs in self.terms:
            e = [zero] * len(bases)
            lg = [0] * len(bases)
            for p, x, m in zip(pos, exps, logs):
                e[p], lg[p] = x, m
            out.append((c, tuple(e), tuple(lg)))
        return out

    def _union(self, other: "GenExpr"):
        bases = list(self.bases)
        for b in other.bases:
            if b not in bases:
                bases.append(b)
        return bases

    def _lift(self, other):
        if isinstance(other, GenExpr):
            return other
        if isinstance(other, Poly):
            return GenExpr.from_poly(other)
        return GenExpr.constant(self.reg, other)

    def __add__(self, other):
        other = self._lift(other)
        bases = self._union(other)
        return GenExpr(self.reg, bases, self._rebase(bases) + other._rebase(bases))

    __radd__ = __add__

    def __neg__(self):
        return GenExpr(self.reg, self.bases, [(-c, e, m) for c, e, m in self.terms])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Poly, RatFunc)):
            return GenExpr(self.reg, self.bases, [(c * other, e, m) for c, e, m in self.terms])
        other = self._lift(other)
        bases = self._union(other)
        out = []
        for c1, e1, m1 in self._rebase(bases):
            for c2, e2, m2 in other._rebase(bases):
                out.append((c1 * c2, tuple(x + y for x, y in zip(e1, e2)),
                            tuple(x + y for x, y in zip(m1, m2))))
        return GenExpr(self.reg, bases, out)

    __rmul__ = __mul__

    def is_polynomial(self) -> bool:
        for c, exps, logs in self.terms:
            if any(logs) or not c.is_polynomial():
                return False
            for e in exps:
                v = e.constant_value()
                if v is None or v.denominator != 1 or v < 0:
                    return False
        return True

    def to_poly(self) -> Poly:
        """Expand an expression with non-negative integer exponents and no logs."""
        if not self.is_polynomial():
            raise ValueError("expression is not a polynomial")
        total = Poly.zero(self.reg)
        for c, exps, _ in self.terms:
            t = c.as_poly()
            for b, e in zip(self.bases, exps):
                t = t * b ** int(e.constant_value())
            total = total + t
        return total

    def __str__(self):
        if not self.terms:
            return "0"
        names = [f"B{i + 1}" for i in range(len(self.bases))]
        parts = []
        for c, exps, logs in self.terms:
            f = [f"({c})"]
            for nm, e, m in zip(names, exps, logs):
                if not e.is_zero():
                    f.append(f"{nm}^({e})")
                if m:
                    f.append(f"ln({nm})^{m}" if m > 1 else f"ln({nm})")
            parts.append("*".join(f))
        legend = ", ".join(f"{nm}={b}" for nm, b in zip(names, self.bases))
        return " + ".join(parts) + (f"  [{legend}]" if legend else "")

    __repr__ = __str__


@dataclass
class _Group:
    logs: Tuple[int, ...]
    rep: Tuple[RatFunc, ...]
    members: list          # (coeff, integer offsets from rep)

    def shift(self):
        return [min(off[b] for _, off in self.members) for b in range(len(self.rep))]

    def combined(self, bases, shift=None) -> RatFunc:
        shift = shift or self.shift()
        total = None
        for c, off in self.members:
            t = c
            for b, base in enumerate(bases):
                k = off[b] - shift[b]
                if k:
                    t = t * base ** k
            total = t if total is None else total + t
        return total


def _groups(e: GenExpr) -> List[_Group]:
    groups: List[_Group] = []
    for c, exps, logs in e.terms:
        for g in groups:
            if g.logs != logs:
                continue
            off = [_integer_offset(x, r) for x, r in zip(exps, g.rep)]
            if all(o is not None for o in off):
                g.members.append((c, off))
                break
        else:
            groups.append(_Group(logs, exps, [(c, [0] * len(exps))]))
    return groups


def genexpr_zero_test(e: GenExpr) -> bool:
    """True iff ``e`` vanishes identically where all bases are positive.

    Terms are grouped by log powers and by exponent class modulo integer
    shifts; each group is multiplied through by the smallest power of every
    base and tested as an exact rational function.  Bases are never
    factored, so multiplicatively dependent bases can produce a false
    ``False``.
    """
    return all(g.combined(e.bases).is_zero() for g in _groups(e))


# -- coadjoint representation --------------------------------------------------

def commutator_matrix(g: LieAlgebra) -> List[List[Poly]]:
    """Antisymmetric matrix with entry (i, j) = sum_k C_ij^k x_k."""
    reg = g.registry
    m = [[Poly.zero(reg) for _ in range(g.dim)] for _ in range(g.dim)]
    for (i, j), row in g.pairs():
        p = Poly.zero(reg)
        for k, c in row.items():
            p = p + c * Poly.var(reg, k)
        m[i][j] = p
        m[j][i] = -p
    return m


def num_invariants_bb(g: LieAlgebra, strategy: str = "symbolic", seed: int = 0, trials: int = 5) -> int:
    """dim g minus the generic rank of the commutator matrix."""
    return g.dim - linalg.bareiss_rank(commutator_matrix(g), strategy, seed=seed, trials=trials)


@dataclass
class CoadjointField:
    """``-C_ij^k x_k d/dx_j`` for a fixed generator index i."""

    algebra: LieAlgebra
    index: int
    coeffs: List[Poly]

    def on_poly(self, p: Poly) -> Poly:
        total = Poly.zero(p.reg)
        for j, c in enumerate(self.coeffs):
            if c:
                d = p.diff(j)
                if d:
                    total = total + c * d
        return total

    def on_ratfunc(self, r: RatFunc) -> RatFunc:
        dn = self.on_poly(r.num)
        if r.den.free_vars() & set(r.reg.coordinates):
            dd = self.on_poly(r.den)
            return RatFunc(dn * r.den - r.num * dd, r.den * r.den)
        return RatFunc(dn, r.den)

    def __call__(self, e: GenExpr) -> GenExpr:
        return apply_field(self, e)

    def __str__(self):
        parts = [f"({c})*d/d{self.algebra.registry.names[j]}" for j, c in enumerate(self.coeffs) if c]
        return " + ".join(parts) or "0"


def coadjoint_fields(g: LieAlgebra) -> List[CoadjointField]:
    a = commutator_matrix(g)
    return [CoadjointField(g, i, [-x for x in a[i]]) for i in range(g.dim)]


def apply_field(f: CoadjointField, e: GenExpr) -> GenExpr:
    """Exact derivative of a generalized expression along a coadjoint field."""
    reg = e.reg
    db = [f.on_poly(b) for b in e.bases]
    out = []
    one = RatFunc.of(reg, 1)
    for c, exps, logs in e.terms:
        dc = f.on_ratfunc(c)
        if not dc.is_zero():
            out.append((dc, exps, logs))
        for b, d in enumerate(db):
            if d.is_zero():
                continue
            if not exps[b].is_zero():
                ne = list(exps)
                ne[b] = exps[b] - one
                out.append((c * exps[b] * d, tuple(ne), logs))
            if logs[b]:
                ne = list(exps)
                ne[b] = exps[b] - one
                nl = list(logs)
                nl[b] -= 1
                out.append((c * logs[b] * d, tuple(ne), tuple(nl)))
    return GenExpr(reg, e.bases, out)


def is_invariant(g: LieAlgebra, e: GenExpr):
    """``[]`` when every coadjoint field annihilates ``e``; else the residuals."""
    if e.reg != g.registry and not g.registry.is_prefix_of(e.reg):
        raise ValueError("expression registry does not match the algebra")
    failures = []
    for f in coadjoint_fields(g):
        r = apply_field(f, e)
        if not genexpr_zero_test(r):
            failures.append((f.index, r))
    return failures


def semi_invariant_weight(f: CoadjointField, e: GenExpr) -> Optional[RatFunc]:
    """``mu`` with ``f(e) = mu * e`` (verified exactly), or None."""
    reg = e.reg
    if not e.terms:
        return RatFunc.of(reg, 0)
    d = apply_field(f, e)
    ge = _groups(e)[0]
    target = None
    for g in _groups(d):
        if g.logs != ge.logs:
            continue
        off = [_integer_offset(x, r) for x, r in zip(g.rep, ge.rep)]
        if all(o is not None for o in off):
            target = (g, off)
            break
    if target is None:
        mu = RatFunc.of(reg, 0)
    else:
        g, off = target
        se = ge.shift()
        sd = [s + o for s, o in zip(g.shift(), off)]
        low = [min(a, b) for a, b in zip(se, sd)]
        pe = ge.combined(e.bases)
        pd = g.combined(e.bases)
        for b, base in enumerate(e.bases):
            if se[b] - low[b]:
                pe = pe * base ** (se[b] - low[b])
            if sd[b] - low[b]:
                pd = pd * base ** (sd[b] - low[b])
        coords = reg.coordinates
        ne = pe.num.split(coords)
        lead = max(ne)
        nd = pd.num.split(coords)
        mu = RatFunc(nd.get(lead, Poly.zero(reg)) * pe.den, ne[lead] * pd.den)
        if mu.free_vars() & set(coords):
            return None
    if genexpr_zero_test(d - e * mu):
        return mu
    return None


def quadratic_invariants(g: LieAlgebra) -> List[Poly]:
    """Basis of homogeneous quadratic polynomials killed by every field."""
    if not g.is_numeric():
        raise ValueError("quadratic_invariants needs numeric structure constants")
    reg = g.registry
    n = g.dim
    monos = [(a, b) for a in range(n) for b in range(a, n)]
    polys = [Poly.var(reg, a) * Poly.var(reg, b) for a, b in monos]
    fields = coadjoint_fields(g)
    rows: Dict[tuple, Dict[int, object]] = {}
    for f in fields:
        for col, p in enumerate(polys):
            for m, c in f.on_poly(p).terms.items():
                rows.setdefault((f.index, m), {})[col] = c
    mat = [[row.get(c, 0) for c in range(len(monos))] for row in rows.values()]
    basis = linalg.nullspace(mat, len(monos))
    out = []
    for v in basis:
        q = Poly.zero(reg)
        for c, p in zip(v, polys):
            if c:
                q = q + p * c
        out.append(q)
    return out


def coordinate_registry(dim: int, parameters=()) -> VarRegistry:
    return VarRegistry.make([f"x{i + 1}" for i in range(dim)], parameters)


def jacobian_rank(polys: Sequence[Poly]) -> int:
    """Generic rank of the Jacobian of ``polys`` with respect to coordinates."""
    reg = polys[0].reg
    coords = [i for i in range(len(reg)) if reg.kinds[i] == COORDINATE]
    return linalg.bareiss_rank([[p.diff(j) for j in coords] for p in polys])
