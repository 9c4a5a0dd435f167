"""Lie algebras given by structure constants, and their ideal series."""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from . import linalg
from .ring import PARAMETER, Poly, VarRegistry, _c, poly_from


class ClosureError(ValueError):
    pass


class SymbolicParameterError(ValueError):
    pass


class LieAlgebra:
    """Structure constants ``[X_i, X_j] = C_ij^k X_k`` (0-based indices).

    Only ``i < j`` is stored; ``const(j, i, k)`` is ``-const(i, j, k)``.
    Constants are polynomials in the declared parameters only.  The registry
    holds coordinates ``x1..x_dim`` (the dual coordinates used by coadjoint
    fields) followed by the parameters.
    """

    def __init__(self, labels: Sequence[str], brackets: Mapping, parameters: Sequence[str] = (),
                 name: str | None = None, registry: VarRegistry | None = None):
        self.labels = tuple(labels)
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"duplicate generator labels {self.labels}")
        self.dim = len(self.labels)
        self.name = name
        if registry is None:
            registry = VarRegistry.make([f"x{i + 1}" for i in range(self.dim)], parameters)
        self.registry = registry
        self.parameters = tuple(registry.names[i] for i in registry.parameters)
        coords = set(registry.coordinates)
        table: Dict[Tuple[int, int], Dict[int, Poly]] = {}
        for (i, j), terms in brackets.items():
            if i == j:
                if any(poly_from(registry, c) for c in terms.values()):
                    raise ValueError(f"[X{i + 1}, X{i + 1}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise IndexError(f"bracket index ({i}, {j}) out of range")
            row = table.setdefault((i, j), {})
            for k, c in terms.items():
                p = poly_from(registry, c) * sign
                if p.free_vars() & coords:
                    raise ValueError("structure constants may not involve coordinate variables")
                s = row.get(k, Poly.zero(registry)) + p
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
            if not row:
                del table[(i, j)]
        self._table = table

    # -- access ------------------------------------------------------------
    def pairs(self):
        """Nonzero brackets as ((i, j), {k: Poly}) with i < j."""
        return sorted(self._table.items())

    def structure(self, i: int, j: int) -> Dict[int, Poly]:
        if i == j:
            return {}
        if i < j:
            return self._table.get((i, j), {})
        return {k: -c for k, c in self._table.get((j, i), {}).items()}

    def const(self, i, j, k) -> Poly:
        return self.structure(i, j).get(k, Poly.zero(self.registry))

    def index(self, g) -> int:
        if isinstance(g, int):
            if not 0 <= g < self.dim:
                raise IndexError(f"generator index {g} out of range")
            return g
        try:
            return self.labels.index(g)
        except ValueError:
            raise KeyError(f"unknown generator {g!r}") from None

    def is_numeric(self) -> bool:
        return all(c.is_constant() for row in self._table.values() for c in row.values())

    def used_parameters(self) -> set:
        used = set()
        for row in self._table.values():
            for c in row.values():
                used |= c.free_names()
        return used

    def coordinate(self, i) -> Poly:
        return Poly.var(self.registry, i)

    def numeric_table(self) -> Dict[Tuple[int, int], Dict[int, Fraction]]:
        if not self.is_numeric():
            raise SymbolicParameterError(
                f"parameters {sorted(self.used_parameters())} must be substituted first")
        return {ij: {k: Fraction(c.constant()) for k, c in row.items()} for ij, row in self._table.items()}

    def substitute(self, values: Mapping[str, object]) -> "LieAlgebra":
        """New algebra with the given parameters replaced by rationals."""
        values = {k: Fraction(v) if not isinstance(v, Poly) else v for k, v in values.items()}
        for k in values:
            if k not in self.parameters:
                raise KeyError(f"{k!r} is not a parameter of this algebra")
        keep = [p for p in self.parameters if p not in values]
        reg = VarRegistry.make([f"x{i + 1}" for i in range(self.dim)], keep)
        brackets = {}
        for ij, row in self._table.items():
            brackets[ij] = {k: c.subs(values).restrict(reg) for k, c in row.items()}
        return LieAlgebra(self.labels, brackets, registry=reg, name=self.name)

    def __repr__(self):
        return f"LieAlgebra({self.name or 'anonymous'}, dim={self.dim})"

    def describe(self) -> List[str]:
        lines = []
        for (i, j), row in self.pairs():
            rhs = " + ".join(f"({c})*{self.labels[k]}" for k, c in sorted(row.items()))
            lines.append(f"[{self.labels[i]}, {self.labels[j]}] = {rhs}")
        return lines


# -- brackets -------------------------------------------------------------

def bracket(g: LieAlgebra, u: Sequence, v: Sequence, param_values: Mapping | None = None) -> List:
    """Bilinear bracket of coordinate vectors: ``w_k = sum u_i v_j C_ij^k``."""
    if len(u) != g.dim or len(v) != g.dim:
        raise ValueError(f"vectors must have length {g.dim}")
    h = g.substitute(param_values) if param_values else g
    w = [0] * g.dim
    for (i, j), row in h._table.items():
        a = u[i] * v[j] - u[j] * v[i]
        if not a:
            continue
        for k, c in row.items():
            w[k] = w[k] + (a * c.constant() if c.is_constant() else c * a)
    return [x if isinstance(x, Poly) else _c(x) for x in w]


def _basis(n, i):
    e = [0] * n
    e[i] = 1
    return e


def jacobi_check(g: LieAlgebra):
    """``[]`` when Jacobi holds identically, else ``[(i, j, k, residual)]``."""
    zero = Poly.zero(g.registry)
    violations = []

    def br(vec_i: Dict[int, Poly], j: int) -> Dict[int, Poly]:
        out: Dict[int, Poly] = {}
        for a, ca in vec_i.items():
            for k, c in g.structure(a, j).items():
                out[k] = out.get(k, zero) + ca * c
        return out

    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            for k in range(j + 1, g.dim):
                res: Dict[int, Poly] = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for m, p in br(g.structure(a, b), c).items():
                        res[m] = res.get(m, zero) + p
                res = {m: p for m, p in res.items() if p}
                if res:
                    violations.append((i, j, k, [res.get(m, zero) for m in range(g.dim)]))
    return violations


# -- subspaces --------------------------------------------------------------

class Subspace:
    """Span of rational vectors, stored in reduced row-echelon form."""

    def __init__(self, ambient: int, vectors: Iterable[Sequence] = ()):
        self.ambient = ambient
        vectors = [list(v) for v in vectors]
        self.basis, self.pivots = linalg.rref(vectors) if vectors else ([], [])

    @property
    def dim(self):
        return len(self.basis)

    def contains(self, v) -> bool:
        return linalg.rank(self.basis + [list(v)]) == self.dim

    def __contains__(self, v):
        return self.contains(v)

    def __repr__(self):
        return f"Subspace(dim={self.dim} in {self.ambient})"


def _numeric_bracket(table, u, v, n):
    w = [Fraction(0)] * n
    for (i, j), row in table.items():
        a = u[i] * v[j] - u[j] * v[i]
        if a:
            for k, c in row.items():
                w[k] += a * c
    return w


def bracket_span(g: LieAlgebra, a: Subspace, b: Subspace) -> Subspace:
    table = g.numeric_table()
    vecs = [_numeric_bracket(table, u, v, g.dim) for u in a.basis for v in b.basis]
    return Subspace(g.dim, [w for w in vecs if any(w)])


def whole(g: LieAlgebra) -> Subspace:
    return Subspace(g.dim, linalg.identity(g.dim))


def _series(g, step):
    current = whole(g)
    dims = [current.dim]
    spaces = [current]
    while current.dim:
        nxt = step(current)
        if nxt.dim == current.dim:
            break
        current = nxt
        dims.append(current.dim)
        spaces.append(current)
    return dims, spaces


def derived_series(g: LieAlgebra) -> List[int]:
    """Dimensions of D^k g until the series stabilizes."""
    return _series(g, lambda s: bracket_span(g, s, s))[0]


def lower_central_series(g: LieAlgebra) -> List[int]:
    """Dimensions of C^k g = [g, C^{k-1} g] until stabilization."""
    full = whole(g)
    return _series(g, lambda s: bracket_span(g, full, s))[0]


def lower_central_spaces(g: LieAlgebra) -> List[Subspace]:
    full = whole(g)
    return _series(g, lambda s: bracket_span(g, full, s))[1]


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1] == 0


def is_solvable(g: LieAlgebra) -> bool:
    return derived_series(g)[-1] == 0


def center(g: LieAlgebra) -> Subspace:
    """Kernel of ``v -> [v, X_j]`` for every generator j."""
    table = g.numeric_table()
    rows = []
    for j in range(g.dim):
        for k in range(g.dim):
            rows.append([_numeric_bracket(table, _basis(g.dim, i), _basis(g.dim, j), g.dim)[k]
                         for i in range(g.dim)])
    return Subspace(g.dim, linalg.nullspace(rows, g.dim))


def _complement(inner: Subspace, outer: Subspace) -> List[List]:
    """Vectors completing ``inner`` to ``outer``; standard basis vectors first."""
    n = outer.ambient
    candidates = [_basis(n, i) for i in range(n)] + [list(v) for v in outer.basis]
    chosen = []
    current = list(inner.basis)
    r = len(current)
    for c in candidates:
        if len(chosen) == outer.dim - inner.dim:
            break
        if not outer.contains(c):
            continue
        if linalg.rank(current + [c]) > r:
            current.append(c)
            chosen.append(c)
            r += 1
    return chosen


def graded_algebra(g: LieAlgebra) -> LieAlgebra:
    """Associated graded algebra of the lower central series.

    The adapted basis completes each C^{i+1} inside C^i, preferring standard
    basis vectors, and is listed in order of each vector's first nonzero
    coordinate so that coordinate-aligned filtrations keep their labels.
    """
    if not is_nilpotent(g):
        raise ValueError("graded_algebra needs a nilpotent algebra")
    spaces = lower_central_spaces(g)
    spaces.append(Subspace(g.dim))
    layered = []
    for layer, (outer, inner) in enumerate(zip(spaces, spaces[1:]), start=1):
        for v in _complement(inner, outer):
            layered.append((layer, v))
    layered.sort(key=lambda lv: next(i for i, x in enumerate(lv[1]) if x))
    basis = [v for _, v in layered]
    layers = [lay for lay, _ in layered]
    binv = linalg.inverse(linalg.transpose(basis))
    table = g.numeric_table()
    brackets = {}
    for a in range(g.dim):
        for b in range(a + 1, g.dim):
            w = _numeric_bracket(table, [Fraction(x) for x in basis[a]], [Fraction(x) for x in basis[b]], g.dim)
            if not any(w):
                continue
            coords = linalg.matvec(binv, w)
            target = layers[a] + layers[b]
            row = {k: c for k, c in enumerate(coords) if c and layers[k] == target}
            if row:
                brackets[(a, b)] = row
    if all(sum(1 for x in v if x) == 1 for v in basis):
        labels = [g.labels[next(i for i, x in enumerate(v) if x)] for v in basis]
    else:
        labels = [f"E{i + 1}" for i in range(g.dim)]
    h = LieAlgebra(labels, brackets, name=f"gr({g.name})" if g.name else None)
    h.adapted_basis = basis
    h.layers = layers
    return h


def subalgebra_restrict(g: LieAlgebra, generators: Sequence) -> LieAlgebra:
    """Induced algebra on a subset of basis generators (must be closed)."""
    idx = [g.index(x) for x in generators]
    if len(set(idx)) != len(idx):
        raise ValueError("repeated generator in subset")
    pos = {i: n for n, i in enumerate(idx)}
    brackets = {}
    for a, i in enumerate(idx):
        for b in range(a + 1, len(idx)):
            j = idx[b]
            row = g.structure(i, j)
            outside = [k for k in row if k not in pos]
            if outside:
                raise ClosureError(
                    f"[{g.labels[i]}, {g.labels[j]}] has a component on {g.labels[outside[0]]}, "
                    "outside the chosen span")
            if row:
                brackets[(a, b)] = {pos[k]: c for k, c in row.items()}
    params = [p for p in g.parameters]
    reg = VarRegistry.make([f"x{n + 1}" for n in range(len(idx))], params)
    brackets = {ij: {k: c.restrict(reg) for k, c in row.items()} for ij, row in brackets.items()}
    return LieAlgebra([g.labels[i] for i in idx], brackets, registry=reg)


def is_ideal(g: LieAlgebra, generators: Sequence) -> bool:
    idx = {g.index(x) for x in generators}
    for i in idx:
        for j in range(g.dim):
            if any(k not in idx for k in g.structure(i, j)):
                return False
    return True
