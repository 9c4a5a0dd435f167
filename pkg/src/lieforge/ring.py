"""Exact rationals, sparse multivariate polynomials and rational functions.

Coefficients are kept as ``int`` whenever they are integral and as
``fractions.Fraction`` otherwise; every public constructor normalizes so
that no zero coefficient is ever stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Tuple, Union

Rat = Fraction
Scalar = Union[int, Fraction]
Monomial = Tuple[int, ...]

COORDINATE = "coordinate"
PARAMETER = "parameter"
AUXILIARY = "auxiliary"
_KINDS = (COORDINATE, PARAMETER, AUXILIARY)


class RegistryError(KeyError):
    pass


def _c(x) -> Scalar:
    """Normalize a scalar to int when integral."""
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, float):
        raise TypeError("floats are not exact; use Fraction or a 'p/q' string")
    return _c(Fraction(x))


def rat(x) -> Fraction:
    """Parse ``x`` (int, Fraction, or 'p/q' string) into an exact Fraction."""
    if isinstance(x, float):
        raise TypeError("floats are not exact; use Fraction or a 'p/q' string")
    if isinstance(x, str) and re.search(r"[.eE]", x):
        raise ValueError(f"not an exact rational: {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class VarRegistry:
    names: Tuple[str, ...]
    kinds: Tuple[str, ...]
    _index: Dict[str, int] = field(default=None, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.names) != len(self.kinds):
            raise ValueError("names and kinds differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate variable names in {self.names}")
        for k in self.kinds:
            if k not in _KINDS:
                raise ValueError(f"unknown variable kind {k!r}")
        object.__setattr__(self, "_index", {n: i for i, n in enumerate(self.names)})

    @classmethod
    def make(cls, coordinates=(), parameters=(), auxiliary=()):
        names = tuple(coordinates) + tuple(parameters) + tuple(auxiliary)
        kinds = ((COORDINATE,) * len(coordinates) + (PARAMETER,) * len(parameters)
                 + (AUXILIARY,) * len(auxiliary))
        return cls(names, kinds)

    def __len__(self):
        return len(self.names)

    def index(self, v) -> int:
        if isinstance(v, int):
            if 0 <= v < len(self.names):
                return v
            raise RegistryError(f"variable index {v} out of range")
        try:
            return self._index[v]
        except KeyError:
            raise RegistryError(f"unknown variable {v!r}") from None

    def __contains__(self, name):
        return name in self._index

    def of_kind(self, kind) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k == kind)

    @property
    def coordinates(self):
        return self.of_kind(COORDINATE)

    @property
    def parameters(self):
        return self.of_kind(PARAMETER)

    def extend(self, names: Iterable[str], kind: str) -> "VarRegistry":
        names = tuple(names)
        return VarRegistry(self.names + names, self.kinds + (kind,) * len(names))

    def is_prefix_of(self, other: "VarRegistry") -> bool:
        n = len(self.names)
        return other.names[:n] == self.names and other.kinds[:n] == self.kinds


def _common(a: VarRegistry, b: VarRegistry) -> VarRegistry:
    if a is b or a == b:
        return a
    if a.is_prefix_of(b):
        return b
    if b.is_prefix_of(a):
        return a
    raise RegistryError("polynomials live in incompatible registries")


class Poly:
    """Sparse polynomial over Q; immutable once built."""

    __slots__ = ("reg", "terms", "_hash")

    def __init__(self, reg: VarRegistry, terms: Mapping[Monomial, Scalar] | None = None):
        self.reg = reg
        clean = {}
        n = len(reg)
        for m, c in (terms or {}).items():
            if len(m) != n:
                raise ValueError("exponent vector length does not match registry")
            c = _c(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, reg, terms):
        p = cls.__new__(cls)
        p.reg = reg
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, reg):
        return cls._raw(reg, {})

    @classmethod
    def const(cls, reg, c):
        c = _c(c)
        return cls._raw(reg, {(0,) * len(reg): c} if c else {})

    @classmethod
    def var(cls, reg, v):
        i = reg.index(v)
        m = [0] * len(reg)
        m[i] = 1
        return cls._raw(reg, {tuple(m): 1})

    @classmethod
    def parse(cls, reg, text: str) -> "Poly":
        return _Parser(reg, text).parse()

    # -- conversions ---------------------------------------------------
    def lift(self, reg: VarRegistry) -> "Poly":
        if reg is self.reg or reg == self.reg:
            return self
        if not self.reg.is_prefix_of(reg):
            raise RegistryError("target registry does not extend this one")
        pad = (0,) * (len(reg) - len(self.reg))
        return Poly._raw(reg, {m + pad: c for m, c in self.terms.items()})

    def restrict(self, reg: VarRegistry) -> "Poly":
        """Move to a registry holding every variable this polynomial uses."""
        used = sorted(self.free_vars())
        pos = [reg.index(self.reg.names[i]) for i in used]
        out = {}
        for m, c in self.terms.items():
            e = [0] * len(reg)
            for i, j in zip(used, pos):
                e[j] = m[i]
            out[tuple(e)] = c
        return Poly._raw(reg, out)

    def _coerce(self, other):
        if isinstance(other, Poly):
            reg = _common(self.reg, other.reg)
            return self.lift(reg), other.lift(reg)
        if isinstance(other, (int, Fraction)):
            return self, Poly.const(self.reg, other)
        return None, None

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if len(a.terms) < len(b.terms):
            a, b = b, a
        out = dict(a.terms)
        for m, c in b.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = _c(s)
            else:
                out.pop(m, None)
        return Poly._raw(a.reg, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.reg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _c(other)
            if not other:
                return Poly.zero(self.reg)
            return Poly._raw(self.reg, {m: _c(c * other) for m, c in self.terms.items()})
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        out: Dict[Monomial, Scalar] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                m = tuple([x + y for x, y in zip(m1, m2)])
                out[m] = out.get(m, 0) + c1 * c2
        return Poly._raw(a.reg, {m: _c(c) for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Poly) and other.is_constant():
            return self * (Fraction(1) / Fraction(other.constant()))
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Poly.const(self.reg, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(self.reg, other)
        if not isinstance(other, Poly):
            return NotImplemented
        try:
            a, b = self._coerce(other)
        except RegistryError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- queries -------------------------------------------------------
    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant(self) -> Scalar:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return next(iter(self.terms.values()), 0)

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def degree_in(self, v) -> int:
        i = self.reg.index(v)
        return max((m[i] for m in self.terms), default=-1)

    def free_vars(self) -> set:
        used = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def free_names(self) -> set:
        return {self.reg.names[i] for i in self.free_vars()}

    def is_homogeneous(self, degree: int, among=None) -> bool:
        idx = range(len(self.reg)) if among is None else among
        return all(sum(m[i] for i in idx) == degree for m in self.terms)

    def leading(self):
        """Lex-leading (monomial, coefficient) under registration order."""
        m = max(self.terms)
        return m, self.terms[m]

    def content_sign(self) -> int:
        return 1 if not self.terms or self.leading()[1] > 0 else -1

    # -- calculus and substitution --------------------------------------
    def diff(self, v) -> "Poly":
        i = self.reg.index(v)
        out = {}
        for m, c in self.terms.items():
            e = m[i]
            if e:
                mm = list(m)
                mm[i] = e - 1
                out[tuple(mm)] = c * e
        return Poly._raw(self.reg, out)

    def subs(self, assignment: Mapping) -> "Poly":
        """Substitute variables by scalars or polynomials (same registry family)."""
        if not assignment:
            return self
        vals = {self.reg.index(k): v for k, v in assignment.items()}
        if all(isinstance(v, (int, Fraction)) for v in vals.values()):
            out: Dict[Monomial, Scalar] = {}
            for m, c in self.terms.items():
                mm = list(m)
                for i, v in vals.items():
                    e = mm[i]
                    if e:
                        c = c * Fraction(v) ** e
                        mm[i] = 0
                c = _c(c)
                if c:
                    t = tuple(mm)
                    out[t] = out.get(t, 0) + c
            return Poly._raw(self.reg, {m: _c(c) for m, c in out.items() if c})
        result = Poly.zero(self.reg)
        for m, c in self.terms.items():
            mm = list(m)
            term = Poly.const(self.reg, c)
            for i, v in vals.items():
                e = mm[i]
                if e:
                    mm[i] = 0
                    term = term * (v ** e if isinstance(v, Poly) else Fraction(v) ** e)
            rest = Poly._raw(self.reg, {tuple(mm): 1})
            result = result + term * rest
        return result

    def split(self, indices) -> Dict[Monomial, "Poly"]:
        """Group by the exponents of ``indices``; values are polys in the rest."""
        indices = tuple(indices)
        groups: Dict[Monomial, Dict[Monomial, Scalar]] = {}
        for m, c in self.terms.items():
            key = tuple(m[i] for i in indices)
            mm = list(m)
            for i in indices:
                mm[i] = 0
            groups.setdefault(key, {})[tuple(mm)] = c
        return {k: Poly._raw(self.reg, v) for k, v in groups.items()}

    # -- division --------------------------------------------------------
    def divmod(self, d: "Poly"):
        """Multivariate division by ``d`` with lex order; returns (q, r)."""
        a, d = self._coerce(d)
        if not d.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        ltd, lcd = d.leading()
        work = dict(a.terms)
        q: Dict[Monomial, Scalar] = {}
        r: Dict[Monomial, Scalar] = {}
        dterms = list(d.terms.items())
        while work:
            lt = max(work)
            c = work.pop(lt)
            if all(x >= y for x, y in zip(lt, ltd)):
                shift = tuple([x - y for x, y in zip(lt, ltd)])
                qc = _c(Fraction(c) / lcd)
                q[shift] = qc
                for m, dc in dterms:
                    if m == ltd:
                        continue
                    t = tuple([x + y for x, y in zip(m, shift)])
                    s = work.get(t, 0) - qc * dc
                    if s:
                        work[t] = _c(s)
                    else:
                        work.pop(t, None)
            else:
                r[lt] = c
        return Poly._raw(a.reg, q), Poly._raw(a.reg, r)

    def divexact(self, d: "Poly") -> "Poly":
        q, r = self.divmod(d)
        if r:
            raise ArithmeticError(f"({self}) is not divisible by ({d})")
        return q

    # -- printing ----------------------------------------------------------
    def _mono_str(self, m):
        parts = []
        for i, e in enumerate(m):
            if e == 1:
                parts.append(self.reg.names[i])
            elif e:
                parts.append(f"{self.reg.names[i]}^{e}")
        return "*".join(parts)

    def __str__(self):
        if not self.terms:
            return "0"
        order = sorted(self.terms, key=lambda m: (-sum(m), tuple(-x for x in m)))
        out = []
        for k, m in enumerate(order):
            c = self.terms[m]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            mono = self._mono_str(m)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            if k == 0:
                out.append(("-" if sign == "-" else "") + body)
            else:
                out.append(f" {sign} {body}")
        return "".join(out)

    def __repr__(self):
        return f"Poly({self})"


def poly_from(reg, x) -> Poly:
    if isinstance(x, Poly):
        return x.lift(_common(reg, x.reg))
    if isinstance(x, str):
        return Poly.parse(reg, x)
    return Poly.const(reg, x)


def eval_poly(p: Poly, assignment: Mapping):
    """Substitute; a Rat when nothing is left, otherwise a Poly."""
    q = p.subs(assignment)
    if q.is_constant():
        return Fraction(q.constant())
    return q


def differentiate(p: Poly, v) -> Poly:
    return p.diff(v)


def _common_monomial(p: Poly) -> Monomial:
    it = iter(p.terms)
    low = list(next(it))
    for m in it:
        low = [min(a, b) for a, b in zip(low, m)]
    return tuple(low)


class RatFunc:
    """Quotient of two polynomials sharing a registry.

    Normal form: common monomial factors cancelled, exact polynomial
    divisibility reduced, and the denominator scaled so its lex-leading
    coefficient is 1 (hence positive).  Without polynomial gcds the form is
    not unique, so equality cross-multiplies.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1, reg=None):
        if reg is None:
            reg = num.reg if isinstance(num, Poly) else den.reg
        num = poly_from(reg, num)
        den = poly_from(reg, den)
        reg = _common(num.reg, den.reg)
        num, den = num.lift(reg), den.lift(reg)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            self.num, self.den = num, Poly.const(reg, 1)
            return
        if not den.is_constant():
            low = [min(a, b) for a, b in zip(_common_monomial(num), _common_monomial(den))]
            if any(low):
                num = Poly._raw(reg, {tuple(x - y for x, y in zip(m, low)): c for m, c in num.terms.items()})
                den = Poly._raw(reg, {tuple(x - y for x, y in zip(m, low)): c for m, c in den.terms.items()})
        if not den.is_constant():
            q, r = num.divmod(den)
            if r.is_zero():
                num, den = q, Poly.const(reg, 1)
            elif num.total_degree() <= den.total_degree():
                q, r = den.divmod(num)
                if r.is_zero():
                    num, den = Poly.const(reg, 1), q
        lc = den.leading()[1]
        if lc != 1:
            inv = Fraction(1) / Fraction(lc)
            num, den = num * inv, den * inv
        self.num, self.den = num, den

    @property
    def reg(self):
        return self.num.reg

    @classmethod
    def of(cls, reg, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(poly_from(reg, x), 1, reg)

    def _other(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (Poly, int, Fraction)):
            return RatFunc.of(self.reg, other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        r = RatFunc.__new__(RatFunc)
        r.num, r.den = -self.num, self.den
        return r

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.den.is_constant() and self.den.is_constant():
            r = RatFunc.__new__(RatFunc)
            r.num, r.den = self.num * o.num, self.den
            return r if not r.num.is_zero() else RatFunc(r.num, 1)
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return RatFunc.of(self.reg, other) / self

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return (self.num * o.den - o.num * self.den).is_zero()

    __hash__ = None

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def is_polynomial(self):
        return self.den.is_constant()

    def as_poly(self) -> Poly:
        if not self.den.is_constant():
            raise ValueError(f"{self} is not a polynomial")
        return self.num / self.den.constant()

    def is_constant(self):
        return self.den.is_constant() and self.num.is_constant()

    def constant_value(self):
        """Fraction value when constant in every variable, else None."""
        if self.num.is_zero():
            return Fraction(0)
        if self.den.is_constant():
            return Fraction(self.num.constant()) / self.den.constant() if self.num.is_constant() else None
        (m, c) = self.den.leading()
        k = Fraction(self.num.terms.get(m, 0)) / c
        if k and (self.num - self.den * k).is_zero():
            return k
        return None

    def free_vars(self):
        return self.num.free_vars() | self.den.free_vars()

    def subs(self, assignment) -> "RatFunc":
        return RatFunc(self.num.subs(assignment), self.den.subs(assignment))

    def diff(self, v) -> "RatFunc":
        if self.den.is_constant():
            return RatFunc(self.num.diff(v), self.den)
        return RatFunc(self.num.diff(v) * self.den - self.num * self.den.diff(v), self.den * self.den)

    def lift(self, reg):
        return RatFunc(self.num.lift(reg), self.den.lift(reg))

    def __str__(self):
        if self.den.is_constant():
            return str(self.num / self.den.constant())
        n = str(self.num)
        if len(self.num.terms) > 1:
            n = f"({n})"
        return f"{n}/({self.den})"

    def __repr__(self):
        return f"RatFunc({self})"


class _Parser:
    """Recursive-descent parser for the infix polynomial grammar.

    Integers, names, ``+ - * / ^`` and parentheses.  Division is only by
    constants; floats are rejected.
    """

    _tok = re.compile(r"\s*(?:(\d+\.\d*|\d*\.\d+|\d+[eE])|(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^()]))")

    def __init__(self, reg, text):
        self.reg = reg
        self.tokens = []
        pos = 0
        text = text.strip()
        while pos < len(text):
            m = self._tok.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse polynomial {text!r} at position {pos}")
            if m.group(1):
                raise ValueError(f"floating point literal in {text!r}; exact rationals only")
            if m.group(2):
                self.tokens.append(("num", int(m.group(2))))
            elif m.group(3):
                self.tokens.append(("name", m.group(3)))
            else:
                op = m.group(4)
                self.tokens.append(("op", "^" if op == "**" else op))
            pos = m.end()
        self.i = 0
        self.text = text

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else (None, None)

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Poly:
        if not self.tokens:
            raise ValueError("empty polynomial string")
        p = self.expr()
        if self.i != len(self.tokens):
            raise ValueError(f"trailing input in {self.text!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while self.peek() in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or q.is_zero():
                    raise ValueError(f"division by non-constant or zero in {self.text!r}")
                p = p / q.constant()
        return p

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        p = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ValueError(f"exponent must be a non-negative integer in {self.text!r}")
            p = p ** val
        return p

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return Poly.const(self.reg, val)
        if kind == "name":
            if val not in self.reg:
                raise RegistryError(f"unknown variable {val!r} in {self.text!r}")
            return Poly.var(self.reg, val)
        if (kind, val) == ("op", "("):
            p = self.expr()
            if self.take() != ("op", ")"):
                raise ValueError(f"unbalanced parentheses in {self.text!r}")
            return p
        raise ValueError(f"unexpected token {val!r} in {self.text!r}")
