"""End-to-end acceptance checks; one test group per criterion.

Weights and wedge coefficients are compared by magnitude because the
coadjoint fields carry a minus sign relative to the usual textbook display.
"""

from fractions import Fraction
from itertools import product
from math import factorial

import pytest

from lieforge import families as fam
from lieforge.coadjoint import (GenExpr, apply_field, coadjoint_fields, commutator_matrix, genexpr_zero_test,
                                is_invariant, num_invariants_bb)
from lieforge.exterior import contact_check, contact_search, j0_of_algebra, num_invariants_rc, top_power_coefficient
from lieforge.liealg import (LieAlgebra, derived_series, graded_algebra, is_solvable, jacobi_check,
                             lower_central_series)
from lieforge.linalg import bareiss_rank
from lieforge.ring import Poly
from lieforge.structure import (contraction_limit, derivation_profile_check, derivation_space, nilpotent_ideal_dim,
                                quasi_classical_check, same_constants)

SEEDS = (0, 7, 11)


def x(g, i):
    return Poly.var(g.registry, f"x{i}")


def expand_field(g, i, p):
    """-C_ij^k x_k dp/dx_j expanded directly from the bracket table."""
    out = Poly.zero(p.reg)
    for j in range(g.dim):
        for k, c in g.structure(i, j).items():
            out = out - c * Poly.var(p.reg, k) * p.diff(j)
    return out


# -- 1. invariant count of Q_2n ---------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_1_invariant_count(n):
    q = fam.Q(n)
    assert num_invariants_bb(q) == 2
    assert num_invariants_rc(q) == 2
    assert j0_of_algebra(q) == n - 1


# -- 2. Casimir verification ------------------------------------------------------

@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_2_casimirs(n):
    q = fam.Q(n)
    i1 = x(q, 2 * n)
    i2 = fam.quadratic_casimir(n, q.registry)
    assert is_invariant(q, GenExpr.from_poly(i1)) == []
    assert is_invariant(q, GenExpr.from_poly(i2)) == []


@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_2_engine_matches_expansion(n):
    q = fam.Q(n)
    probes = [fam.quadratic_casimir(n, q.registry), fam.quadratic_casimir(n, q.registry, form="alternate"),
              x(q, 2 * n), x(q, 3) * x(q, 4) - x(q, 1) ** 2]
    for p in probes:
        e = GenExpr.from_poly(p)
        for f in coadjoint_fields(q):
            assert apply_field(f, e).to_poly().terms == expand_field(q, f.index, p).terms


# -- 3. derivation algebra -------------------------------------------------------

@pytest.mark.parametrize("n,total,outer", [(3, 9, 4), (4, 12, 5)])
def test_criterion_3_derivations(n, total, outer):
    ds = derivation_space(fam.Q(n))
    assert ds.total_dim == total
    assert ds.outer_dim == outer
    assert derivation_profile_check(ds) == []


# -- 4. invariants of the solvable extensions ----------------------------------------

def _single_invariant(spec):
    g = fam.build(spec)
    inv = fam.canonical_invariants(spec, g)
    assert len(inv) == 1
    assert is_invariant(g, inv[0]) == []
    assert num_invariants_bb(g) == 1
    return g, inv[0]


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_4_power_law_symbolic(n):
    g, j = _single_invariant(fam.FamilySpec("r_lambda", n))
    assert "lambda2" in g.parameters and not j.is_polynomial()


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_4_power_law_special_values(n):
    g, j = _single_invariant(fam.FamilySpec("r_lambda", n, {"lambda2": Fraction(3 - 2 * n, 2)}))
    assert j.to_poly() == x(g, 2 * n)
    g, j = _single_invariant(fam.FamilySpec("r_lambda", n, {"lambda2": 1 - n}))
    assert j.to_poly() == fam.quadratic_casimir(n, g.registry)


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_4_logarithmic(n):
    g, _ = _single_invariant(fam.FamilySpec("r_eps", n))
    reg = g.registry
    y = coadjoint_fields(g)[g.dim - 1]
    x2n = x(g, 2 * n)
    eps = GenExpr.constant(reg, Poly.var(reg, "epsilon"))
    one = GenExpr.constant(reg, 1)
    a = apply_field(y, GenExpr(reg, [fam.quadratic_casimir(n, reg), x2n], [(1, (1, -2), (0, 0))]))
    b = apply_field(y, GenExpr.log(x2n))
    signs = [s for s in (1, -1) if genexpr_zero_test(a - eps * s) and genexpr_zero_test(b - one * s)]
    assert len(signs) == 1


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_4_rational_tails(n):
    g, j = _single_invariant(fam.FamilySpec("r_taillist", n))
    assert set(fam.tail_names(n)) <= set(g.parameters)


# -- 5. no invariants for the two-torus extension ----------------------------------

@pytest.mark.parametrize("n", [3, 4])
def test_criterion_5_counts(n):
    g = fam.r_max(n)
    assert num_invariants_bb(g) == 0
    assert num_invariants_rc(g) == 0


@pytest.mark.parametrize("n,magnitude", [(3, 36), (4, 192)])
def test_criterion_5_witness_magnitude(n, magnitude):
    g = fam.r_max(n)
    c = [0] * g.dim
    c[0] = c[2 * n - 1] = 1
    w = top_power_coefficient(g, c)
    assert w.is_constant() and w.constant() != 0
    assert abs(w.constant()) == magnitude == 2 * n * factorial(n)


# -- 6. contact forms -------------------------------------------------------------

def _omega(n):
    c = [0] * (2 * n + 1)
    c[0] = c[2 * n - 1] = 1
    return c


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_6_coefficients(n):
    g = fam.r_lambda(n)
    want = (Poly.var(g.registry, "lambda2") + (n - 2)) * (2 * n * factorial(n - 1))
    assert contact_check(g, _omega(n)) in (want, -want)
    g = fam.r_eps(n)
    want = Poly.var(g.registry, "epsilon") * factorial(n)
    assert contact_check(g, _omega(n)) in (want, -want)
    p = contact_check(fam.r_taillist(n), _omega(n))
    assert p.is_constant() and abs(p.constant()) == 2 * factorial(n)


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("seed", SEEDS)
def test_criterion_6_search(n, seed):
    assert contact_search(fam.r_eps(n, 0), seed).proof_of_none
    for g in (fam.r_lambda(n, 1), fam.r_lambda(n, Fraction(-1, 2)), fam.r_eps(n, 1), fam.r_eps(n, -3),
              fam.r_taillist(n, {k: 1 for k in fam.tail_names(n)})):
        res = contact_search(g, seed)
        assert res.found
        assert contact_check(g, res.witness).constant() != 0


# -- 7. quasi-classical ------------------------------------------------------------

def _associative(g, h):
    def br(i, j):
        return g.structure(i, j)
    for i, j, k in product(range(g.dim), repeat=3):
        lhs = sum(c * h[m][k] for m, c in br(i, j).items())
        rhs = sum(c * h[i][m] for m, c in br(j, k).items())
        if lhs != rhs:
            return False
    return True


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_7_certified(n):
    g = fam.k_sub(n)
    res = quasi_classical_check(g)
    assert res.certified
    assert res.form.is_symmetric() and res.form.rank == g.dim == 2 * n - 1
    h = [[Fraction(v.constant()) if isinstance(v, Poly) else Fraction(v) for v in row] for row in res.bilinear]
    assert h == [list(r) for r in zip(*h)]
    assert _associative(g, h)


@pytest.mark.parametrize("n", [3, 4])
def test_criterion_7_refused(n):
    res = quasi_classical_check(fam.Q(n))
    assert not res.certified
    assert res.reason == "all quadratic invariants degenerate"


# -- 8. contraction and grading ---------------------------------------------------

@pytest.mark.parametrize("n", [3, 4])
def test_criterion_8_contraction(n):
    lim = contraction_limit(fam.Q(n), fam.contraction_spec_Q_to_n(n))
    assert same_constants(lim, fam.build(fam.FamilySpec("n_n1", 2 * n)))


def test_criterion_8_graded():
    g = fam.A622()
    gr = graded_algebra(g)
    listed = {(1, 5): {0: 1}, (2, 3): {0: 1}, (2, 4): {1: 1}, (3, 4): {2: 1}, (4, 5): {3: 1}}
    assert same_constants(gr, LieAlgebra(g.labels, listed))
    assert not same_constants(gr, g)


# -- 9. cross-formula properties ----------------------------------------------------

def _all_samples():
    out = []
    for m in (3, 4, 5):
        out.append((f"Q{2 * m}", fam.Q(m)))
    for d in (4, 6, 8):
        out.append((f"n{d},1", fam.n_n1(d)))
    for m in (1, 2, 3):
        out.append((f"h{2 * m + 1}", fam.heisenberg(m)))
    for d in (1, 3, 5):
        out.append((f"a{d}", fam.abelian(d)))
    out.append(("A6,22", fam.A622()))
    for n in (3, 4):
        out.append((f"k{n}", fam.k_sub(n)))
        out.append((f"r{2 * n + 2}", fam.r_max(n)))
        for lam in (1, Fraction(-1, 2), 2 - n):
            out.append((f"r{2 * n + 1}(lambda2={lam})", fam.r_lambda(n, lam)))
        for eps in (-1, 0, 1):
            out.append((f"r{2 * n + 1}(epsilon={eps})", fam.r_eps(n, eps)))
        names = fam.tail_names(n)
        for vals in ([1] * len(names), [0] * len(names), [1] + [-2] * (len(names) - 1)):
            out.append((f"r{2 * n + 1}(tails={vals})", fam.r_taillist(n, dict(zip(names, vals)))))
    return out


SAMPLES = _all_samples()


@pytest.mark.parametrize("name,g", SAMPLES, ids=[s[0] for s in SAMPLES])
def test_criterion_9_counts_agree(name, g):
    a = commutator_matrix(g)
    r = bareiss_rank(a)
    assert r % 2 == 0
    for seed in SEEDS:
        assert bareiss_rank(a, "random", seed) == r
    assert g.dim - r == num_invariants_bb(g) == num_invariants_rc(g)


@pytest.mark.parametrize("spec", [fam.FamilySpec("Q", 3), fam.FamilySpec("r_lambda", 3), fam.FamilySpec("r_eps", 4),
                                  fam.FamilySpec("r_taillist", 3), fam.FamilySpec("r_taillist", 4),
                                  fam.FamilySpec("r_max", 3), fam.FamilySpec("k_sub", 4), fam.FamilySpec("A622"),
                                  fam.FamilySpec("n_n1", 6), fam.FamilySpec("heisenberg", 2)],
                         ids=lambda s: f"{s.family}-{s.size}")
def test_criterion_9_jacobi_symbolic(spec):
    assert jacobi_check(fam.build(spec)) == []


@pytest.mark.parametrize("name,g", [s for s in SAMPLES if s[0].startswith("r")],
                         ids=[s[0] for s in SAMPLES if s[0].startswith("r")])
def test_criterion_9_nilradical_half(name, g):
    assert is_solvable(g)
    n = (g.dim - 1) // 2
    nil = nilpotent_ideal_dim(g, [f"X{i}" for i in range(1, 2 * n + 1)])
    assert 2 * nil >= g.dim


# -- 10. series ---------------------------------------------------------------

def test_criterion_10_series_A622():
    g = fam.A622()
    assert derived_series(g) == [6, 4, 1, 0]
    assert lower_central_series(g) == [6, 4, 3, 2, 1, 0]


@pytest.mark.parametrize("n", [3, 4, 5])
def test_criterion_10_series_Q(n):
    assert lower_central_series(fam.Q(n)) == [2 * n] + list(range(2 * n - 2, -1, -1))
