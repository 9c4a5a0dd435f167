"""Derivations, nilpotency tests, quadratic forms and contractions."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from . import linalg
from .coadjoint import quadratic_invariants
from .liealg import LieAlgebra, SymbolicParameterError, is_ideal, is_nilpotent, jacobi_check, subalgebra_restrict
from .ring import AUXILIARY, COORDINATE, Poly, RatFunc, VarRegistry, _c


def _vector(g: LieAlgebra, x) -> list:
    if isinstance(x, (str, int)):
        v = [0] * g.dim
        v[g.index(x)] = 1
        return v
    if len(x) != g.dim:
        raise ValueError(f"vector must have length {g.dim}")
    return list(x)


def ad_matrix(g: LieAlgebra, x) -> List[list]:
    """Matrix of ``Y -> [X, Y]``; column b is ``[X, X_b]``.

    Entries are rationals for numeric algebras, else :class:`Poly`.
    """
    v = _vector(g, x)
    numeric = g.is_numeric()
    zero = 0 if numeric else Poly.zero(g.registry)
    m = [[zero] * g.dim for _ in range(g.dim)]
    for a, xa in enumerate(v):
        if not xa:
            continue
        for b in range(g.dim):
            for k, c in g.structure(a, b).items():
                term = c.constant() * xa if numeric else c * xa
                m[k][b] = m[k][b] + term
    if numeric:
        return [[_c(e) for e in row] for row in m]
    return m


def is_nilpotent_matrix(m) -> bool:
    n = len(m)
    p = m
    for _ in range(n - 1):
        if linalg.is_zero_matrix(p):
            return True
        p = linalg.matmul(p, m)
    return linalg.is_zero_matrix(p)


# -- derivations -------------------------------------------------------------

@dataclass
class DerivationSpace:
    """Basis of Der(g); ``D[b][a]`` is the coefficient of X_b in D(X_a)."""

    algebra: LieAlgebra
    basis: List[List[list]]
    inner_dim: int

    @property
    def total_dim(self):
        return len(self.basis)

    @property
    def outer_dim(self):
        return self.total_dim - self.inner_dim


def _leibniz_rows(table, n):
    """Rows of the linear system in the n*n unknowns D[b][a] (index b*n + a)."""
    def c(i, j, k):
        if i < j:
            return table.get((i, j), {}).get(k, 0)
        if i > j:
            return -table.get((j, i), {}).get(k, 0)
        return 0

    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            for k in range(n):
                row = [Fraction(0)] * (n * n)
                # D[X_a, X_b] = [D X_a, X_b] + [X_a, D X_b]
                for m in range(n):
                    cab = c(a, b, m)
                    if cab:
                        row[k * n + m] += cab
                    cmb = c(m, b, k)
                    if cmb:
                        row[m * n + a] -= cmb
                    cam = c(a, m, k)
                    if cam:
                        row[m * n + b] -= cam
                if any(row):
                    rows.append(row)
    return rows


def leibniz_defect(g: LieAlgebra, d) -> List[list]:
    """Equations of the derivation identity that ``d`` violates."""
    table = g.numeric_table()
    n = g.dim
    flat = [d[b][a] for b in range(n) for a in range(n)]
    return [row for row in _leibniz_rows(table, n) if sum(x * y for x, y in zip(row, flat))]


def derivation_space(g: LieAlgebra) -> DerivationSpace:
    if not g.is_numeric():
        raise SymbolicParameterError("derivation_space needs numeric structure constants")
    n = g.dim
    table = g.numeric_table()
    rows = _leibniz_rows(table, n)
    kernel = linalg.nullspace(rows, n * n) if rows else linalg.identity(n * n)
    reduced, _ = linalg.rref(kernel) if kernel else ([], [])
    basis = [[list(v[b * n:(b + 1) * n]) for b in range(n)] for v in reduced]
    for d in basis:
        if leibniz_defect(g, d):
            raise AssertionError("solved derivation fails the Leibniz identity")
    inner = linalg.rank([[e for row in ad_matrix(g, a) for e in row] for a in range(n)])
    return DerivationSpace(g, basis, inner)


def derivation_profile_check(ds: DerivationSpace) -> List[str]:
    """Compare Der(Q_{2n}) with its documented parametric form; ``[]`` on a match.

    Every derivation D must satisfy: D(X1) in span{X1, X3..X2n};
    D(X2) in span{X2, X3, X5, X7, .., X_{2n-1}, X_{2n}}; D(X_{2n}) in
    span{X_{2n}}; diagonal entries d_{2+t} = t d_1 + d_2 and
    d_{2n} = (2n-3) d_1 + 2 d_2.  The dimensions must be 3n total and n+1
    outer.
    """
    g = ds.algebra
    problems = []
    if g.dim % 2 or g.dim < 6:
        return [f"expected a Q_2n algebra, got dimension {g.dim}"]
    n = g.dim // 2
    top = 2 * n - 1
    allowed1 = {0} | set(range(2, 2 * n))
    allowed2 = {1, 2, top} | set(range(4, top, 2))
    for num, d in enumerate(ds.basis):
        col = lambda a: [d[b][a] for b in range(g.dim)]
        if leibniz_defect(g, d):
            problems.append(f"basis element {num} is not a derivation")
        if any(x for b, x in enumerate(col(0)) if b not in allowed1):
            problems.append(f"basis element {num}: D(X1) leaves its span")
        if any(x for b, x in enumerate(col(1)) if b not in allowed2):
            problems.append(f"basis element {num}: D(X2) leaves its span")
        if any(x for b, x in enumerate(col(top)) if b != top):
            problems.append(f"basis element {num}: D(X{2 * n}) is not a multiple of X{2 * n}")
        d1, d2 = d[0][0], d[1][1]
        for t in range(0, 2 * n - 2):
            if d[1 + t][1 + t] != t * d1 + d2:
                problems.append(f"basis element {num}: diagonal at X{2 + t} breaks d = {t}*d1 + d2")
        if d[top][top] != (2 * n - 3) * d1 + 2 * d2:
            problems.append(f"basis element {num}: d_{2 * n} != {2 * n - 3}*d1 + 2*d2")
    if ds.total_dim != 3 * n:
        problems.append(f"dim Der = {ds.total_dim}, expected {3 * n}")
    if ds.outer_dim != n + 1:
        problems.append(f"outer derivations = {ds.outer_dim}, expected {n + 1}")
    return problems


# -- quadratic forms ---------------------------------------------------------

@dataclass
class QuadraticForm:
    algebra: LieAlgebra
    matrix: List[list]

    @property
    def rank(self):
        return linalg.rank(self.matrix)

    def is_symmetric(self):
        return self.matrix == linalg.transpose(self.matrix)


def quadratic_form_of(g: LieAlgebra, q: Poly) -> QuadraticForm:
    """Symmetric matrix of a quadratic form, cross terms split in half."""
    reg = q.reg
    coords = reg.coordinates
    n = g.dim
    m = [[Fraction(0)] * n for _ in range(n)]
    for mono, c in q.terms.items():
        if any(e for i, e in enumerate(mono) if reg.kinds[i] != COORDINATE):
            raise ValueError("quadratic form coefficients must be numeric")
        if sum(mono) != 2:
            raise ValueError("expected a homogeneous quadratic polynomial")
        idx = [i for i in coords for _ in range(mono[i])]
        a, b = coords.index(idx[0]), coords.index(idx[1])
        if a == b:
            m[a][a] += c
        else:
            m[a][b] += Fraction(c) / 2
            m[b][a] += Fraction(c) / 2
    return QuadraticForm(g, [[_c(x) for x in row] for row in m])


def associativity_defects(g: LieAlgebra, h) -> List[tuple]:
    """Triples (i, j, k) with ``H([X_i, X_j], X_k) != H(X_i, [X_j, X_k])``."""
    n = g.dim
    table = g.numeric_table()

    def br(i, j):
        if i < j:
            return table.get((i, j), {})
        if i > j:
            return {k: -c for k, c in table.get((j, i), {}).items()}
        return {}

    bad = []
    for i, j, k in itertools.product(range(n), repeat=3):
        left = sum(c * h[m][k] for m, c in br(i, j).items())
        right = sum(c * h[i][m] for m, c in br(j, k).items())
        if left != right:
            bad.append((i, j, k))
    return bad


@dataclass
class QuasiClassicalResult:
    certified: bool
    form: Optional[QuadraticForm] = None
    casimir: Optional[Poly] = None
    bilinear: Optional[List[list]] = None
    reason: str = ""


def quasi_classical_check(g: LieAlgebra, seed: int = 0, samples: int = 20) -> QuasiClassicalResult:
    """Look for a nondegenerate quadratic Casimir.

    Tries each basis invariant, then seeded random combinations, then the
    determinant of a generic combination (conclusive).  A nondegenerate
    Casimir matrix G gives the invariant bilinear form H = G^-1, which is
    checked for associativity on all basis triples.
    """
    qs = quadratic_invariants(g)
    if not qs:
        return QuasiClassicalResult(False, reason="no quadratic invariant")
    forms = [quadratic_form_of(g, q).matrix for q in qs]

    def combo(coeffs):
        q = Poly.zero(qs[0].reg)
        for c, p in zip(coeffs, qs):
            if c:
                q = q + p * c
        return q

    choice = None
    for i in range(len(qs)):
        if linalg.det(forms[i]):
            choice = [1 if j == i else 0 for j in range(len(qs))]
            break
    if choice is None and len(qs) > 1:
        rng = random.Random(seed)
        for _ in range(samples):
            pt = linalg.random_point(rng, len(qs))
            if linalg.det(_combine(forms, pt)):
                choice = pt
                break
    if choice is None:
        reg = VarRegistry.make(auxiliary=[f"t{i + 1}" for i in range(len(qs))])
        ts = [Poly.var(reg, i) for i in range(len(qs))]
        n = g.dim
        sym = [[sum((t * f[a][b] for t, f in zip(ts, forms)), Poly.zero(reg)) for b in range(n)] for a in range(n)]
        d = linalg.bareiss_det(sym)
        if d.is_zero():
            return QuasiClassicalResult(False, reason="all quadratic invariants degenerate")
        for pt in itertools.product(range(d.total_degree() + 1), repeat=len(qs)):
            if d.subs(dict(zip(reg.names, pt))).constant():
                choice = list(pt)
                break
    q = combo(choice)
    form = quadratic_form_of(g, q)
    h = linalg.inverse(form.matrix)
    if associativity_defects(g, h):
        return QuasiClassicalResult(False, form, q, h, reason="inverse form is not associative")
    return QuasiClassicalResult(True, form, q, h)


def _combine(forms, coeffs):
    n = len(forms[0])
    return [[sum(c * f[a][b] for c, f in zip(coeffs, forms)) for b in range(n)] for a in range(n)]


# -- contractions --------------------------------------------------------------

class ContractionError(ValueError):
    pass


@dataclass
class ContractionSpec:
    """Basis change ``X'_j = sum_i M[i][j] X_i`` with entries polynomial in ``var``."""

    matrix: List[List[Poly]]
    var: str = "eps"
    reg: VarRegistry = field(init=False)

    def __post_init__(self):
        self.reg = next(e.reg for row in self.matrix for e in row if isinstance(e, Poly))
        self.matrix = [[e if isinstance(e, Poly) else Poly.const(self.reg, e) for e in row] for row in self.matrix]

    def at(self, value) -> List[list]:
        return [[e.subs({self.var: value}).constant() for e in row] for row in self.matrix]


def _ratfunc_inverse(m: List[List[RatFunc]]) -> List[List[RatFunc]]:
    n = len(m)
    reg = m[0][0].reg
    one, zero = RatFunc.of(reg, 1), RatFunc.of(reg, 0)
    a = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(m)]
    for c in range(n):
        p = next((r for r in range(c, n) if not a[r][c].is_zero()), None)
        if p is None:
            raise ContractionError("basis change is singular for generic parameter")
        a[c], a[p] = a[p], a[c]
        inv = one / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for r in range(n):
            if r != c and not a[r][c].is_zero():
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return [row[n:] for row in a]


def transformed_constants(g: LieAlgebra, spec: ContractionSpec) -> Dict[tuple, Dict[int, RatFunc]]:
    """Structure constants in the primed basis, rational in the spec variable."""
    if not g.is_numeric():
        raise SymbolicParameterError("contractions need numeric structure constants")
    n = g.dim
    if len(spec.matrix) != n:
        raise ValueError(f"spec is {len(spec.matrix)}x{len(spec.matrix)}, algebra has dimension {n}")
    reg = spec.reg
    m = [[RatFunc.of(reg, e) for e in row] for row in spec.matrix]
    q = _ratfunc_inverse(m)
    table = g.numeric_table()
    out = {}
    zero = RatFunc.of(reg, 0)
    for a in range(n):
        for b in range(a + 1, n):
            # [X'_a, X'_b] in the old basis
            w = [zero] * n
            for (i, j), row in table.items():
                coef = m[i][a] * m[j][b] - m[j][a] * m[i][b]
                if coef.is_zero():
                    continue
                for k, c in row.items():
                    w[k] = w[k] + coef * c
            row = {}
            for cc in range(n):
                s = zero
                for k in range(n):
                    if not w[k].is_zero() and not q[cc][k].is_zero():
                        s = s + q[cc][k] * w[k]
                if not s.is_zero():
                    row[cc] = s
            if row:
                out[(a, b)] = row
    return out


def _order(p: Poly, v: int) -> int:
    return min(m[v] for m in p.terms)


def _limit_at_zero(r: RatFunc, v: int):
    num, den = r.num, r.den
    a, b = _order(num, v), _order(den, v)
    if a < b:
        return None
    if a > b:
        return Fraction(0)
    lead_n = sum((c for m, c in num.terms.items() if m[v] == a), Fraction(0))
    lead_d = sum((c for m, c in den.terms.items() if m[v] == b), Fraction(0))
    return Fraction(lead_n) / Fraction(lead_d)


def contraction_limit(g: LieAlgebra, spec: ContractionSpec, name: str | None = None) -> LieAlgebra:
    """Limit of the transformed constants as the spec variable tends to 0."""
    v = spec.reg.index(spec.var)
    brackets = {}
    for ij, row in transformed_constants(g, spec).items():
        lim = {}
        for k, r in row.items():
            if r.free_vars() - {v}:
                raise ContractionError("spec entries may only involve the contraction variable")
            val = _limit_at_zero(r, v)
            if val is None:
                raise ContractionError(
                    f"not a contraction along this spec: constant ({ij[0] + 1},{ij[1] + 1};{k + 1}) has a pole")
            if val:
                lim[k] = _c(val)
        if lim:
            brackets[ij] = lim
    h = LieAlgebra(g.labels, brackets, name=name or (f"lim({g.name})" if g.name else None))
    if jacobi_check(h):
        raise AssertionError("contraction limit violates the Jacobi identity")
    return h


def transform_at(g: LieAlgebra, spec: ContractionSpec, value) -> LieAlgebra:
    """The algebra in the primed basis at a fixed nonzero parameter value."""
    brackets = {}
    for ij, row in transformed_constants(g, spec).items():
        vals = {}
        for k, r in row.items():
            x = r.subs({spec.var: value}).constant_value()
            if x:
                vals[k] = x
        if vals:
            brackets[ij] = vals
    return LieAlgebra(g.labels, brackets)


def same_constants(a: LieAlgebra, b: LieAlgebra, params: Dict | None = None) -> bool:
    """Entrywise equality of structure constants in the given bases."""
    if a.dim != b.dim:
        return False
    if params:
        a = a.substitute({k: v for k, v in params.items() if k in a.parameters})
        b = b.substitute({k: v for k, v in params.items() if k in b.parameters})
    for i in range(a.dim):
        for j in range(i + 1, a.dim):
            sa, sb = a.structure(i, j), b.structure(i, j)
            if set(sa) != set(sb):
                return False
            if any(_by_name(sa[k]) != _by_name(sb[k]) for k in sa):
                return False
    return True


def _by_name(p: Poly) -> dict:
    names = p.reg.names
    return {tuple((names[i], e) for i, e in enumerate(m) if e): c for m, c in p.terms.items()}


# -- nil-independence --------------------------------------------------------

@dataclass
class NilIndependenceReport:
    passed: bool
    results: List[tuple]
    certificates: List[Poly]


def nil_independence_check(g: LieAlgebra, elements: Sequence, grid: Sequence[Sequence],
                           seed: int = 0, samples: int = 20) -> NilIndependenceReport:
    """Check that no tested nonzero combination of ad(X_i) is nilpotent.

    ``certificates`` are tr(M(alpha)^k), k = 1..dim, in symbolic alpha; a
    combination is nilpotent exactly when all of them vanish.
    """
    if not g.is_numeric():
        raise SymbolicParameterError("nil-independence needs numeric structure constants")
    ads = [ad_matrix(g, _vector(g, x)) for x in elements]
    tuples = [list(t) for t in grid]
    for t in tuples:
        if len(t) != len(ads):
            raise ValueError(f"tuple {t} has the wrong length")
        if not any(t):
            raise ValueError("coefficient tuples must be nonzero")
    rng = random.Random(seed)
    tuples += [linalg.random_point(rng, len(ads)) for _ in range(samples)]
    results = []
    for t in tuples:
        m = [[_c(sum(c * a[i][j] for c, a in zip(t, ads))) for j in range(g.dim)] for i in range(g.dim)]
        results.append((tuple(_c(x) for x in t), not is_nilpotent_matrix(m)))
    reg = VarRegistry.make(auxiliary=[f"alpha{i + 1}" for i in range(len(ads))])
    al = [Poly.var(reg, i) for i in range(len(ads))]
    n = g.dim
    sym = [[sum((x * a[i][j] for x, a in zip(al, ads) if a[i][j]), Poly.zero(reg)) for j in range(n)]
           for i in range(n)]
    certs = []
    p = sym
    for _ in range(n):
        certs.append(sum((p[i][i] for i in range(n)), Poly.zero(reg)))
        p = [[sum((p[i][k] * sym[k][j] for k in range(n) if p[i][k] and sym[k][j]), Poly.zero(reg))
              for j in range(n)] for i in range(n)]
    return NilIndependenceReport(all(ok for _, ok in results), results, certs)


def nilpotent_ideal_dim(g: LieAlgebra, generators: Sequence) -> int:
    """Dimension of the span of ``generators`` after checking it is a nilpotent ideal."""
    if not is_ideal(g, generators):
        raise ValueError("generators do not span an ideal")
    sub = subalgebra_restrict(g, generators)
    if not sub.is_numeric():
        raise SymbolicParameterError("substitute parameters first")
    if not is_nilpotent(sub):
        raise ValueError("the ideal is not nilpotent")
    return sub.dim
