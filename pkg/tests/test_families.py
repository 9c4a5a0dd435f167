from fractions import Fraction

import pytest

from lieforge import families as fam
from lieforge.coadjoint import is_invariant, num_invariants_bb
from lieforge.liealg import jacobi_check, lower_central_series, subalgebra_restrict
from lieforge.structure import ad_matrix, derivation_profile_check, DerivationSpace, leibniz_defect, same_constants


def test_build_q6_brackets():
    q = fam.build(fam.FamilySpec("Q", 3))
    assert q.dim == 6
    assert q.const(1, 4, 5) == 1 and q.const(2, 3, 5) == -1
    assert lower_central_series(q) == [6, 4, 3, 2, 1, 0]


def test_build_r_max_brackets():
    g = fam.build(fam.FamilySpec("r_max", 3))
    assert g.dim == 8
    assert g.const(6, 5, 5) == 7 and g.const(7, 5, 5) == 2


def test_q_bound():
    with pytest.raises(fam.ConstraintError, match="m >= 3"):
        fam.build(fam.FamilySpec("Q", 2))
    assert fam.n_n1(4).dim == 4


@pytest.mark.parametrize("spec", [
    fam.FamilySpec("abelian", 4), fam.FamilySpec("heisenberg", 2), fam.FamilySpec("n_n1", 6),
    fam.FamilySpec("Q", 4), fam.FamilySpec("A622"), fam.FamilySpec("r_lambda", 4),
    fam.FamilySpec("r_eps", 4), fam.FamilySpec("r_taillist", 4), fam.FamilySpec("r_max", 4),
    fam.FamilySpec("k_sub", 4)], ids=lambda s: f"{s.family}{s.size}")
def test_every_family_satisfies_jacobi(spec):
    assert jacobi_check(fam.build(spec)) == []


@pytest.mark.parametrize("n", [3, 4])
@pytest.mark.parametrize("family", ["r_lambda", "r_eps", "r_taillist"])
def test_nilradical_and_torus_derivation(family, n):
    g = fam.build(fam.FamilySpec(family, n))
    x = [f"X{i}" for i in range(1, 2 * n + 1)]
    assert same_constants(subalgebra_restrict(g, x), fam.Q(n))
    assert 2 * (2 * n) >= g.dim


@pytest.mark.parametrize("n", [3, 4])
def test_torus_action_is_a_derivation_of_q(n):
    names = fam.tail_names(n)
    samples = [fam.r_lambda(n, 2), fam.r_eps(n, 1), fam.r_taillist(n, {k: 1 for k in names})]
    q = fam.Q(n)
    for g in samples:
        ad = ad_matrix(g, "Y")
        d = [row[:2 * n] for row in ad[:2 * n]]
        assert leibniz_defect(q, d) == []
        assert derivation_profile_check(DerivationSpace(q, [d], 0))[:-2] == []


def test_literal_tail_bound_breaks_jacobi():
    assert jacobi_check(fam.r_taillist(4, {}, bound="literal"))
    assert jacobi_check(fam.r_taillist(4)) == []
    g = fam.r_taillist(3)
    assert str(g.const(6, 1, 4)) == "lambda2_5"


def test_tail_normalization_warning():
    with pytest.warns(UserWarning):
        fam.r_taillist(3, {"lambda2_5": 2})


def test_canonical_invariants_q():
    inv = fam.canonical_invariants(fam.FamilySpec("Q", 3))
    assert [str(e) for e in inv] == ["(x6)", "(x1*x6 + x3*x5 - 1/2*x4^2)"]


def test_canonical_invariants_r_lambda_symbolic():
    spec = fam.FamilySpec("r_lambda", 3)
    g = fam.build(spec)
    (j,) = fam.canonical_invariants(spec, g)
    lam = fam.Poly.var(g.registry, "lambda2")
    assert j.terms[0][1][1] == fam.RatFunc(-(lam * 2 + 4), lam * 2 + 3)
    assert is_invariant(g, j) == []


def test_canonical_invariants_r_max():
    inv = fam.canonical_invariants(fam.FamilySpec("r_max", 3))
    assert inv == [] and inv.note == "no invariants"


@pytest.mark.parametrize("spec", [
    fam.FamilySpec("Q", 3), fam.FamilySpec("Q", 4), fam.FamilySpec("r_lambda", 3, {"lambda2": 1}),
    fam.FamilySpec("r_lambda", 3, {"lambda2": Fraction(-3, 2)}), fam.FamilySpec("r_lambda", 4, {"lambda2": -3}),
    fam.FamilySpec("r_eps", 3, {"epsilon": 1}), fam.FamilySpec("r_taillist", 4, {"lambda2_5": 1, "lambda2_7": 3}),
    fam.FamilySpec("heisenberg", 2), fam.FamilySpec("abelian", 3), fam.FamilySpec("k_sub", 3),
    fam.FamilySpec("r_max", 3)], ids=lambda s: f"{s.family}{s.size}{sorted(s.params.items())}")
def test_canonical_invariants_count_matches_rank(spec):
    g = fam.build(spec)
    inv = fam.canonical_invariants(spec, g)
    assert all(is_invariant(g, e) == [] for e in inv)
    assert len(inv) == num_invariants_bb(g)


def test_contraction_spec_shape():
    spec = fam.contraction_spec_Q_to_n(3)
    m = spec.at(Fraction(1, 2))
    assert m[0][0] == 1 and m[1][0] == 1 and m[1][1] == Fraction(1, 2) and m[0][1] == 0
    with pytest.raises(fam.ConstraintError):
        fam.contraction_spec_Q_to_n(2)
