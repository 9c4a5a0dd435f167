"""Constructors for the algebras studied here and their closed-form invariants.

Generator order is always ``X1..X_{2n}`` followed by the torus generators
(``Y`` or ``Y1, Y2``); coordinates ``x1..x_dim`` follow the same order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence

from .coadjoint import GenExpr
from .liealg import LieAlgebra, jacobi_check, subalgebra_restrict
from .ring import Poly, RatFunc, VarRegistry, rat

FAMILIES = ("abelian", "heisenberg", "n_n1", "Q", "A622", "r_lambda", "r_eps",
            "r_taillist", "r_max", "k_sub")


class ConstraintError(ValueError):
    pass


@dataclass
class FamilySpec:
    """Which algebra to build.

    ``size`` means: dimension for ``abelian`` and ``n_n1``; ``m`` with
    dimension 2m+1 for ``heisenberg``; ``m`` with dimension 2m for ``Q``;
    ``n`` (nilradical Q_{2n}) for the solvable families and ``k_sub``.
    ``params`` maps parameter names to rationals; a missing parameter stays
    symbolic.
    """

    family: str
    size: int = 0
    params: Dict[str, object] = field(default_factory=dict)


def _q_brackets(m: int) -> Dict:
    b: Dict = {}
    for i in range(2, 2 * m - 1):
        b[(0, i - 1)] = {i: 1}
    for k in range(2, m + 1):
        b.setdefault((k - 1, 2 * m - k), {})[2 * m - 1] = (-1) ** k
    return b


def abelian(n: int) -> LieAlgebra:
    return LieAlgebra([f"X{i + 1}" for i in range(n)], {}, name=f"a{n}")


def heisenberg(m: int) -> LieAlgebra:
    """h_m of dimension 2m+1 with [X_i, X_{m+i}] = X_{2m+1}."""
    if m < 1:
        raise ConstraintError("heisenberg needs m >= 1")
    b = {(i, m + i): {2 * m: 1} for i in range(m)}
    return LieAlgebra([f"X{i + 1}" for i in range(2 * m + 1)], b, name=f"h{m}")


def n_n1(n: int) -> LieAlgebra:
    """Filiform n_{n,1}: [X1, Xi] = X_{i+1} for 2 <= i <= n-1."""
    if n < 2:
        raise ConstraintError("n_{n,1} needs n >= 2")
    b = {(0, i - 1): {i: 1} for i in range(2, n)}
    return LieAlgebra([f"X{i + 1}" for i in range(n)], b, name=f"n_{n},1")


def Q(m: int) -> LieAlgebra:
    """Q_{2m} (m >= 3)."""
    if m < 3:
        raise ConstraintError(f"Q_2m requires m >= 3 (got m={m}); for m=2, Q_4 is isomorphic to n_4,1")
    return LieAlgebra([f"X{i + 1}" for i in range(2 * m)], _q_brackets(m), name=f"Q{2 * m}")


def A622() -> LieAlgebra:
    b = {(1, 5): {0: 1}, (2, 3): {0: 1}, (2, 4): {1: 1}, (3, 5): {1: 1},
         (3, 4): {2: 1}, (4, 5): {3: 1}}
    return LieAlgebra([f"X{i + 1}" for i in range(6)], b, name="A6,22")


def _check_n(n):
    if n < 3:
        raise ConstraintError(f"the nilradical Q_2n requires n >= 3 (got n={n})")


def _param(reg, name, values):
    if name in values and values[name] is not None:
        return Poly.const(reg, rat(values[name]))
    return Poly.var(reg, name)


def _finish(labels, brackets, reg, name):
    g = LieAlgebra(labels, brackets, registry=reg, name=name)
    bad = jacobi_check(g)
    if bad:
        i, j, k, _ = bad[0]
        raise ConstraintError(f"{name}: Jacobi identity fails on ({labels[i]}, {labels[j]}, {labels[k]})")
    return g


def _solvable_registry(n, dim, symbolic: Sequence[str]):
    return VarRegistry.make([f"x{i + 1}" for i in range(dim)], symbolic)


def r_lambda(n: int, lambda2=None) -> LieAlgebra:
    """r_{2n+1}(lambda2): Y acts diagonally with weights (1, l, 1+l, ..., 2n-3+2l)."""
    _check_n(n)
    dim = 2 * n + 1
    reg = _solvable_registry(n, dim, [] if lambda2 is not None else ["lambda2"])
    lam = _param(reg, "lambda2", {"lambda2": lambda2})
    b = dict(_q_brackets(n))
    y = 2 * n
    b[(y, 0)] = {0: 1}
    for k in range(2, 2 * n):
        b[(y, k - 1)] = {k - 1: lam + (k - 2)}
    b[(y, 2 * n - 1)] = {2 * n - 1: lam * 2 + (2 * n - 3)}
    return _finish([f"X{i + 1}" for i in range(2 * n)] + ["Y"], b, reg, f"r{dim}(lambda2)")


def r_eps(n: int, epsilon=None) -> LieAlgebra:
    """r_{2n+1}(2-n, epsilon): [Y, X1] = X1 + epsilon X_{2n}, [Y, Xk] = (k-n) Xk."""
    _check_n(n)
    dim = 2 * n + 1
    reg = _solvable_registry(n, dim, [] if epsilon is not None else ["epsilon"])
    eps = _param(reg, "epsilon", {"epsilon": epsilon})
    b = dict(_q_brackets(n))
    y = 2 * n
    b[(y, 0)] = {0: 1, 2 * n - 1: eps}
    for k in range(2, 2 * n):
        if k != n:
            b[(y, k - 1)] = {k - 1: k - n}
    b[(y, 2 * n - 1)] = {2 * n - 1: 1}
    # weights on [X_k, X_{2n+1-k}] must add up to the weight of X_{2n}
    for k in range(2, n + 1):
        assert (k - n) + (n + 1 - k) == 1
    return _finish([f"X{i + 1}" for i in range(2 * n)] + ["Y"], b, reg, f"r{dim}(2-n,epsilon)")


def tail_names(n: int) -> List[str]:
    return [f"lambda2_{2 * k + 1}" for k in range(2, n)]


def r_taillist(n: int, tails: Optional[Mapping] = None, bound: str = "derivation") -> LieAlgebra:
    """r_{2n+1}(l^5, ..., l^{2n-1}): Y acts as F_2^2 plus tails sum l^{2k+1} F_2^{2k+1}.

    ``[Y, X_{2+t}] = X_{2+t} + sum_k l^{2k+1} X_{2k+1+t}`` with k running up to
    ``(2n-2-t)//2``, the range on which ``X_{2+t} -> X_{2k+1+t}`` is part of a
    derivation.  ``bound="literal"`` uses ``(2n-3-t)//2`` instead, which breaks
    the Jacobi identity for n >= 4 and is kept only to demonstrate that.
    """
    _check_n(n)
    tails = dict(tails or {})
    names = tail_names(n)
    for k in tails:
        if k not in names:
            raise KeyError(f"unknown tail parameter {k!r}; expected one of {names}")
    symbolic = [nm for nm in names if tails.get(nm) is None]
    dim = 2 * n + 1
    reg = _solvable_registry(n, dim, symbolic)
    b = dict(_q_brackets(n))
    y = 2 * n
    top = {"derivation": 2 * n - 2, "literal": 2 * n - 3}[bound]
    for t in range(0, 2 * n - 3):
        row = {1 + t: Poly.const(reg, 1)}
        for k in range(2, (top - t) // 2 + 1):
            row[2 * k + t] = _param(reg, f"lambda2_{2 * k + 1}", tails)
        b[(y, 1 + t)] = row
    b[(y, 2 * n - 2)] = {2 * n - 2: 1}
    b[(y, 2 * n - 1)] = {2 * n - 1: 2}
    labels = [f"X{i + 1}" for i in range(2 * n)] + ["Y"]
    first = next((tails[nm] for nm in names if tails.get(nm) not in (None, 0)), None)
    if first is not None and rat(first) != 1:
        import warnings
        warnings.warn("the first nonvanishing tail parameter can be normalized to 1", stacklevel=2)
    if bound == "literal":
        return LieAlgebra(labels, b, registry=reg, name=f"r{dim}(tails, literal)")
    return _finish(labels, b, reg, f"r{dim}(tails)")


def r_max(n: int) -> LieAlgebra:
    """r_{2n+2} with the two nil-independent torus generators Y1, Y2."""
    _check_n(n)
    b = dict(_q_brackets(n))
    y1, y2 = 2 * n, 2 * n + 1
    for k in range(1, 2 * n):
        b[(y1, k - 1)] = {k - 1: k}
    b[(y1, 2 * n - 1)] = {2 * n - 1: 2 * n + 1}
    for k in range(2, 2 * n):
        b[(y2, k - 1)] = {k - 1: 1}
    b[(y2, 2 * n - 1)] = {2 * n - 1: 2}
    reg = VarRegistry.make([f"x{i + 1}" for i in range(2 * n + 2)])
    return _finish([f"X{i + 1}" for i in range(2 * n)] + ["Y1", "Y2"], b, reg, f"r{2 * n + 2}")


def k_sub(n: int) -> LieAlgebra:
    """The subalgebra of Q_{2n} spanned by X1, X3, ..., X_{2n}."""
    q = Q(n)
    k = subalgebra_restrict(q, ["X1"] + [f"X{i}" for i in range(3, 2 * n + 1)])
    k.name = f"k{n}"
    return k


def build(spec: FamilySpec) -> LieAlgebra:
    f, s, p = spec.family, spec.size, spec.params
    if f == "abelian":
        return abelian(s)
    if f == "heisenberg":
        return heisenberg(s)
    if f == "n_n1":
        return n_n1(s)
    if f == "Q":
        return Q(s)
    if f == "A622":
        return A622()
    if f == "r_lambda":
        return r_lambda(s, p.get("lambda2"))
    if f == "r_eps":
        return r_eps(s, p.get("epsilon"))
    if f == "r_taillist":
        return r_taillist(s, p)
    if f == "r_max":
        return r_max(s)
    if f == "k_sub":
        return k_sub(s)
    raise ValueError(f"unknown family {f!r}; choose from {FAMILIES}")


# -- invariants ---------------------------------------------------------------

def quadratic_casimir(n: int, reg: VarRegistry, form: str = "verified") -> Poly:
    """The quadratic Casimir of Q_{2n} in coordinates x1..x_{2n}.

    ``verified``: x1 x_{2n} + sum_{k=3..n} (-1)^{k+1} x_k x_{2n+2-k} + (-1)^n/2 x_{n+1}^2.
    ``alternate``: the variant with every sign from k=4 on flipped and the
    square term negated; it is not annihilated by the X1 field.
    """
    x = [None] + [Poly.var(reg, f"x{i}") for i in range(1, 2 * n + 1)]
    p = x[1] * x[2 * n]
    for k in range(3, n + 1):
        s = (-1) ** (k + 1) if (form == "verified" or k == 3) else (-1) ** k
        p = p + x[k] * x[2 * n + 2 - k] * s
    sq = Fraction((-1) ** n if form == "verified" else (-1) ** (n + 1), 2)
    return p + x[n + 1] ** 2 * sq


class InvariantList(list):
    note = ""


def canonical_invariants(spec: FamilySpec, algebra: LieAlgebra | None = None) -> InvariantList:
    """Closed-form fundamental invariants for the documented families."""
    g = algebra or build(spec)
    reg = g.registry
    out = InvariantList()
    f, n = spec.family, spec.size
    if f == "abelian":
        out.extend(GenExpr.from_poly(Poly.var(reg, i)) for i in range(g.dim))
        return out
    if f == "heisenberg":
        out.append(GenExpr.from_poly(Poly.var(reg, g.dim - 1)))
        return out
    if f == "r_max":
        out.note = "no invariants"
        return out
    if f == "k_sub":
        last, prev = Poly.var(reg, g.dim - 1), Poly.var(reg, g.dim - 2)
        i2 = _casimir_on_k(n, reg)
        out.extend(GenExpr.from_poly(p) for p in (last, prev, i2))
        return out
    if f not in ("Q", "r_lambda", "r_eps", "r_taillist"):
        raise ValueError(f"no documented closed-form invariants for family {f!r}")
    x2n = Poly.var(reg, f"x{2 * n}")
    i2 = quadratic_casimir(n, reg)
    if f == "Q":
        out.extend([GenExpr.from_poly(x2n), GenExpr.from_poly(i2)])
    elif f == "r_lambda":
        lam = spec.params.get("lambda2")
        lam_p = Poly.var(reg, "lambda2") if lam is None else Poly.const(reg, rat(lam))
        top = lam_p * 2 + (2 * n - 2)
        bottom = lam_p * 2 + (2 * n - 3)
        if bottom.is_zero():
            out.append(GenExpr.from_poly(x2n))
            out.note = "x_2n is itself invariant"
        elif top.is_zero():
            out.append(GenExpr.from_poly(i2))
            out.note = "I2 is a quadratic Casimir operator"
        else:
            alpha = RatFunc(top, bottom)
            out.append(GenExpr(reg, [i2, x2n], [(1, (1, -alpha), (0, 0))]))
    elif f == "r_eps":
        eps = spec.params.get("epsilon")
        eps_p = Poly.var(reg, "epsilon") if eps is None else Poly.const(reg, rat(eps))
        out.append(GenExpr(reg, [i2, x2n], [(1, (1, -2), (0, 0)), (-eps_p, (0, 0), (0, 1))]))
    else:
        out.append(GenExpr(reg, [i2, x2n], [(1, (1, -1), (0, 0))]))
    return out


def _casimir_on_k(n, reg):
    """I2 of Q_{2n} written in the coordinates of k_n (x2 dropped, rest shifted)."""
    full = VarRegistry.make([f"x{i}" for i in range(1, 2 * n + 1)])
    i2 = quadratic_casimir(n, full)
    rename = {0: 0}
    rename.update({i: i - 1 for i in range(2, 2 * n)})
    out = {}
    for m, c in i2.terms.items():
        e = [0] * len(reg)
        for i, v in enumerate(m):
            if v:
                e[rename[i]] = v
        out[tuple(e)] = c
    return Poly(reg, out)


def contraction_spec_Q_to_n(m: int):
    """Basis change whose eps -> 0 limit turns Q_{2m} into n_{2m,1}.

    Column j holds the components of the new generator X'_j:
    X'_1 = X1 + X2 and X'_j = eps X_j for j >= 2.
    """
    from .structure import ContractionSpec

    if m < 3:
        raise ConstraintError(f"Q_2m requires m >= 3 (got m={m})")
    reg = VarRegistry.make(parameters=["eps"])
    eps = Poly.var(reg, "eps")
    dim = 2 * m
    mat = [[Poly.zero(reg) for _ in range(dim)] for _ in range(dim)]
    mat[0][0] = Poly.const(reg, 1)
    mat[1][0] = Poly.const(reg, 1)
    for i in range(1, dim):
        mat[i][i] = eps
    return ContractionSpec(mat, "eps")
