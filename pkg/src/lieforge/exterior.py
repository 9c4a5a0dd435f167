"""Maurer-Cartan forms, wedge products and the invariant count from j0.

Indices in :class:`ExtForm` are 0-based positions in the algebra's basis
(torus generators last), so ``(0, 5)`` is ``w1 ^ w6``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .liealg import LieAlgebra, SymbolicParameterError
from .linalg import random_point
from .ring import AUXILIARY, Poly, VarRegistry, poly_from

Key = Tuple[int, ...]


def _merge_sign(a: Key, b: Key) -> int:
    """Sign of the permutation sorting ``a + b`` (both already increasing)."""
    inv = 0
    j = 0
    for x in a:
        while j < len(b) and b[j] < x:
            j += 1
        inv += j
    return -1 if inv & 1 else 1


class ExtForm:
    """A degree-d form ``sum c_I w_I`` with polynomial coefficients."""

    __slots__ = ("degree", "dim", "reg", "coeffs")

    def __init__(self, degree: int, dim: int, reg: VarRegistry, coeffs: Dict[Key, Poly] | None = None):
        self.degree = degree
        self.dim = dim
        self.reg = reg
        self.coeffs: Dict[Key, Poly] = {}
        for k, c in (coeffs or {}).items():
            k = tuple(k)
            if len(k) != degree or list(k) != sorted(set(k)) or (k and not 0 <= k[0] <= k[-1] < dim):
                raise ValueError(f"bad index tuple {k} for a {degree}-form in dimension {dim}")
            c = poly_from(reg, c)
            if c:
                self.coeffs[k] = c

    @classmethod
    def basis(cls, dim, reg, *idx):
        """Single wedge of basis 1-forms, e.g. ``basis(6, reg, 0, 1)``; unsorted input is allowed."""
        order = sorted(range(len(idx)), key=lambda i: idx[i])
        if len(set(idx)) < len(idx):
            return cls(len(idx), dim, reg)
        inv = sum(1 for i in range(len(idx)) for j in range(i + 1, len(idx)) if idx[i] > idx[j])
        return cls(len(idx), dim, reg, {tuple(idx[i] for i in order): -1 if inv & 1 else 1})

    def _same(self, other):
        if self.dim != other.dim or self.reg != other.reg:
            raise ValueError("forms live on different spaces")

    def __add__(self, other):
        self._same(other)
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            s = out.get(k)
            s = c if s is None else s + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return ExtForm._raw(self.degree, self.dim, self.reg, out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = poly_from(self.reg, c)
        if not c:
            return ExtForm(self.degree, self.dim, self.reg)
        return ExtForm._raw(self.degree, self.dim, self.reg, {k: v * c for k, v in self.coeffs.items()})

    @classmethod
    def _raw(cls, degree, dim, reg, coeffs):
        f = cls.__new__(cls)
        f.degree, f.dim, f.reg, f.coeffs = degree, dim, reg, coeffs
        return f

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, ExtForm):
            return NotImplemented
        return (self.degree, self.dim) == (other.degree, other.dim) and self.coeffs == other.coeffs

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in sorted(self.coeffs):
            w = "^".join(f"w{i + 1}" for i in k) or "1"
            parts.append(f"({self.coeffs[k]})*{w}")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExtForm({self})"

    def wedge(self, other: "ExtForm") -> "ExtForm":
        return wedge(self, other)

    __xor__ = wedge


def wedge(a: ExtForm, b: ExtForm) -> ExtForm:
    a._same(b)
    out: Dict[Key, Poly] = {}
    for ka, ca in a.coeffs.items():
        sa = set(ka)
        for kb, cb in b.coeffs.items():
            if sa.intersection(kb):
                continue
            key = tuple(sorted(ka + kb))
            v = ca * cb
            if _merge_sign(ka, kb) < 0:
                v = -v
            s = out.get(key)
            s = v if s is None else s + v
            if s:
                out[key] = s
            else:
                del out[key]
    return ExtForm._raw(a.degree + b.degree, a.dim, a.reg, out)


def wedge_power(w: ExtForm, k: int) -> ExtForm:
    """k-fold wedge power by left folding; the 0th power is the constant 1."""
    out = ExtForm(0, w.dim, w.reg, {(): 1})
    for _ in range(k):
        out = wedge(out, w)
        if out.is_zero():
            return ExtForm(w.degree * k, w.dim, w.reg)
    return out


def volume_coefficient(w: ExtForm) -> Poly:
    """Coefficient of ``w1 ^ ... ^ w_dim`` in a top-degree form."""
    if w.degree != w.dim:
        raise ValueError(f"degree {w.degree} form is not top-degree in dimension {w.dim}")
    return w.coeffs.get(tuple(range(w.dim)), Poly.zero(w.reg))


@dataclass
class MCSystem:
    """The Maurer-Cartan 2-forms ``d w_k = sum_{i<j} C_ij^k w_i ^ w_j``."""

    algebra: LieAlgebra
    forms: List[ExtForm]
    reg: VarRegistry = field(repr=False, default=None)

    def __getitem__(self, k):
        return self.forms[k]


def maurer_cartan(g: LieAlgebra, reg: VarRegistry | None = None) -> MCSystem:
    reg = reg or g.registry
    coeffs: List[Dict[Key, Poly]] = [{} for _ in range(g.dim)]
    for (i, j), row in g.pairs():
        for k, c in row.items():
            coeffs[k][(i, j)] = c.lift(reg) if c.reg != reg else c
    return MCSystem(g, [ExtForm(2, g.dim, reg, c) for c in coeffs], reg)


def d_of_one_form(mc: MCSystem, coeffs: Sequence) -> ExtForm:
    """``d(sum c_i w_i) = sum c_i d w_i``."""
    if len(coeffs) != len(mc.forms):
        raise ValueError(f"expected {len(mc.forms)} coefficients, got {len(coeffs)}")
    out = ExtForm(2, mc.algebra.dim, mc.reg)
    for c, f in zip(coeffs, mc.forms):
        c = poly_from(mc.reg, c)
        if c and not f.is_zero():
            out = out + f.scale(c)
    return out


def one_form(dim: int, reg: VarRegistry, coeffs: Sequence) -> ExtForm:
    return ExtForm(1, dim, reg, {(i,): c for i, c in enumerate(coeffs)})


def j0_of_form(w: ExtForm) -> int:
    if w.degree != 2:
        raise ValueError("j0 is defined for 2-forms")
    j = 0
    p = ExtForm(0, w.dim, w.reg, {(): 1})
    while True:
        p = wedge(p, w)
        if p.is_zero():
            return j
        j += 1


def generic_registry(g: LieAlgebra, prefix: str = "a") -> VarRegistry:
    names = [f"{prefix}{i + 1}" for i in range(g.dim)]
    clash = [n for n in names if n in g.registry]
    if clash:
        raise ValueError(f"auxiliary names {clash} collide with the algebra's variables")
    return g.registry.extend(names, AUXILIARY)


def j0_of_algebra(g: LieAlgebra) -> int:
    """Generic j0 of ``w = sum a_i d w_i`` with auxiliary a_1..a_dim."""
    reg = generic_registry(g, "a")
    mc = maurer_cartan(g, reg)
    a = [Poly.var(reg, f"a{i + 1}") for i in range(g.dim)]
    return j0_of_form(d_of_one_form(mc, a))


def num_invariants_rc(g: LieAlgebra) -> int:
    return g.dim - 2 * j0_of_algebra(g)


def top_power_coefficient(g: LieAlgebra, coeffs: Sequence) -> Poly:
    """Volume coefficient of ``(d w)^(dim/2)`` for ``w = sum c_i w_i`` (even dim)."""
    if g.dim % 2:
        raise ValueError("top power of a 2-form needs even dimension")
    mc = maurer_cartan(g)
    return volume_coefficient(wedge_power(d_of_one_form(mc, coeffs), g.dim // 2))


def _contact_coefficient(mc: MCSystem, coeffs) -> Poly:
    g = mc.algebra
    w = one_form(g.dim, mc.reg, coeffs)
    dw = d_of_one_form(mc, coeffs)
    return volume_coefficient(wedge(w, wedge_power(dw, g.dim // 2)))


def contact_check(g: LieAlgebra, coeffs: Sequence) -> Poly:
    """Coefficient of the volume form in ``w ^ (d w)^m``, dim = 2m+1."""
    if g.dim % 2 == 0:
        raise ValueError(f"contact forms need odd dimension (got {g.dim})")
    return _contact_coefficient(maurer_cartan(g), coeffs)


@dataclass
class ContactResult:
    found: bool
    witness: Optional[List] = None
    polynomial: Optional[Poly] = None
    value: Optional[object] = None

    @property
    def proof_of_none(self) -> bool:
        return not self.found


def contact_search(g: LieAlgebra, seed: int = 0, samples: int = 20) -> ContactResult:
    """Find a linear contact form or certify that none exists.

    The volume coefficient is computed with generic coefficients c_1..c_dim.
    If it is the zero polynomial no linear contact form exists; otherwise a
    witness is found by seeded sampling, then by an integer grid.
    """
    if g.dim % 2 == 0:
        raise ValueError(f"contact forms need odd dimension (got {g.dim})")
    if not g.is_numeric():
        raise SymbolicParameterError("contact_search needs numeric parameters")
    reg = generic_registry(g, "c")
    mc = maurer_cartan(g, reg)
    cvars = [f"c{i + 1}" for i in range(g.dim)]
    poly = _contact_coefficient(mc, [Poly.var(reg, v) for v in cvars])
    if poly.is_zero():
        return ContactResult(False, None, poly)
    rng = random.Random(seed)
    for _ in range(samples):
        pt = random_point(rng, g.dim)
        v = poly.subs(dict(zip(cvars, pt))).constant()
        if v:
            return ContactResult(True, pt, poly, v)
    deg = max(poly.total_degree(), 1)
    for pt in itertools.product(range(deg + 1), repeat=g.dim):
        v = poly.subs(dict(zip(cvars, pt))).constant()
        if v:
            return ContactResult(True, list(pt), poly, v)
    raise AssertionError("nonzero polynomial vanished on a full grid")  # impossible by degree bound

