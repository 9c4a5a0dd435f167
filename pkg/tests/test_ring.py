from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from lieforge.coadjoint import commutator_matrix
from lieforge.families import Q, abelian, heisenberg
from lieforge.linalg import bareiss_det, bareiss_rank, det, matvec, nullspace, rank
from lieforge.ring import Poly, RatFunc, RegistryError, VarRegistry, differentiate, eval_poly, rat

REG = VarRegistry.make([f"x{i}" for i in range(1, 7)], ["lambda2"])


def P(text):
    return Poly.parse(REG, text)


def test_differentiate_casimir():
    assert differentiate(P("x1*x6 + x3*x5 - 1/2*x4^2"), "x4") == P("-x4")


def test_differentiate_missing_variable():
    assert differentiate(P("x3"), "x2").is_zero()


def test_differentiate_parameter_is_constant():
    assert differentiate(P("lambda2*x2"), "x2") == P("lambda2")


def test_differentiate_unknown_variable():
    with pytest.raises(RegistryError):
        differentiate(P("x1"), "y7")


def test_eval_poly_full_assignment():
    assert eval_poly(P("x1*x6 - 1/2*x4^2"), {"x1": 2, "x6": 3, "x4": 2}) == 4


def test_eval_poly_cancellation():
    reg = VarRegistry.make(parameters=["lambda2"])
    n = 3
    p = Poly.parse(reg, "lambda2") + (n - 2)
    assert eval_poly(p, {"lambda2": 2 - n}) == 0


def test_eval_poly_partial_returns_poly():
    out = eval_poly(P("x1*x2 + x3"), {"x1": Fraction(1, 2)})
    assert isinstance(out, Poly) and out == P("1/2*x2 + x3")


def test_commutator_matrix_at_point_is_rational():
    m = commutator_matrix(Q(3))
    rng = random.Random(3)
    pt = {f"x{i}": Fraction(rng.randint(1, 50), rng.randint(1, 50)) for i in range(1, 7)}
    vals = [[eval_poly(e, pt) for e in row] for row in m]
    assert all(isinstance(v, (int, Fraction)) for row in vals for v in row)
    assert rank(vals) == 4


def test_bareiss_rank_examples():
    assert bareiss_rank(commutator_matrix(Q(3))) == 4
    assert bareiss_rank(commutator_matrix(abelian(5))) == 0
    assert bareiss_rank(commutator_matrix(heisenberg(1))) == 2


def test_bareiss_rank_h1_brute_force():
    # minors of the 3x3 matrix [[0, x3, 0], [-x3, 0, 0], [0, 0, 0]]: a nonzero 2x2 minor, zero det
    m = commutator_matrix(heisenberg(1))
    assert bareiss_det(m).is_zero()
    minor = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert not minor.is_zero()


def test_random_rank_refuses_parameters():
    reg = VarRegistry.make(["x1"], ["lambda2"])
    m = [[Poly.parse(reg, "lambda2*x1")]]
    with pytest.raises(ValueError):
        bareiss_rank(m, "random", seed=0)


def test_nullspace_examples():
    assert nullspace([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == []
    assert len(nullspace([[0, 0, 0], [0, 0, 0]])) == 3


def test_nullspace_heisenberg_leibniz_system():
    from lieforge.structure import _leibniz_rows

    rows = _leibniz_rows(heisenberg(1).numeric_table(), 3)
    assert len(nullspace(rows, 9)) == 6


def test_nullspace_first_nonzero_is_one():
    for v in nullspace([[1, 2, 3, 4], [2, 4, 7, 1]]):
        assert next(x for x in v if x) == 1


def test_parse_rejects_floats():
    with pytest.raises(ValueError):
        P("0.5*x1")
    with pytest.raises(ValueError):
        rat("1.5")
    with pytest.raises(TypeError):
        rat(1.5)


def test_parse_printing_round_trip():
    p = P("x1*x6 + x3*x5 - 1/2*x4^2 + 3*lambda2")
    assert P(str(p)) == p


def test_ratfunc_normal_form():
    r = RatFunc(P("2*x1*x2"), P("4*x1"))
    assert r.is_polynomial() and r.as_poly() == P("1/2*x2")
    s = RatFunc(P("1"), P("-2*lambda2 - 3"))
    assert s.den.leading()[1] == 1
    assert s == RatFunc(P("-1"), P("2*lambda2 + 3"))


def test_ratfunc_arithmetic():
    a = RatFunc(P("1"), P("lambda2 + 1"))
    b = RatFunc(P("lambda2"), P("lambda2 + 1"))
    assert (a + b).constant_value() == 1
    assert ((a * b) / b) == a


# -- properties ---------------------------------------------------------------

SMALL = VarRegistry.make(["x1", "x2", "x3"])
monos = st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
polys = st.dictionaries(monos, coeffs, max_size=5).map(lambda d: Poly(SMALL, d))


@given(polys, polys, st.sampled_from(["x1", "x2", "x3"]))
def test_leibniz_rule(p, q, v):
    assert differentiate(p * q, v) == differentiate(p, v) * q + p * differentiate(q, v)


@given(polys, polys)
def test_ring_axioms(p, q):
    assert p * q == q * p
    assert (p + q) - q == p
    assert p * (q + 1) == p * q + p


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(0, 10 ** 6), st.data())
def test_antisymmetric_rank_is_even_and_random_bounded(n, seed, data):
    reg = VarRegistry.make(["x1", "x2", "x3"])
    lin = st.tuples(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2))
    m = [[Poly.zero(reg)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            a, b, c = data.draw(lin)
            e = Poly.parse(reg, "x1") * a + Poly.parse(reg, "x2") * b + Poly.parse(reg, "x3") * c
            m[i][j], m[j][i] = e, -e
    r = bareiss_rank(m)
    assert r % 2 == 0
    assert bareiss_rank(m, "random", seed=seed, trials=3) <= r


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_nullspace_kernel_property(m):
    ns = nullspace(m, 4)
    for v in ns:
        assert all(x == 0 for x in matvec(m, v))
    assert rank(m) + len(ns) == 4


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=3, max_size=3))
def test_bareiss_det_matches_rational_det(m):
    reg = VarRegistry.make(["x1"])
    pm = [[Poly.const(reg, x) for x in row] for row in m]
    d = bareiss_det(pm)
    assert (d.constant() if not d.is_zero() else 0) == det(m)
