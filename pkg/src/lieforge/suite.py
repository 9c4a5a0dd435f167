"""Named end-to-end checks over the Q_{2n} family and its solvable extensions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, List, Sequence

from . import families as fam
from .coadjoint import (GenExpr, apply_field, coadjoint_fields, commutator_matrix, genexpr_zero_test,
                        is_invariant, num_invariants_bb)
from .exterior import contact_check, contact_search, j0_of_algebra, num_invariants_rc, top_power_coefficient
from .liealg import graded_algebra, jacobi_check, derived_series, lower_central_series
from .linalg import bareiss_rank
from .ring import Poly
from .structure import (contraction_limit, derivation_profile_check, derivation_space, nilpotent_ideal_dim,
                        quasi_classical_check, same_constants)


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


def _ok(name, cond, detail=""):
    return Check(name, bool(cond), detail)


def _torus(g):
    return coadjoint_fields(g)[g.dim - 1]


def invariant_count(n, seed):
    q = fam.Q(n)
    bb, rnd, rc, j0 = num_invariants_bb(q), num_invariants_bb(q, "random", seed), num_invariants_rc(q), j0_of_algebra(q)
    return _ok(f"Q{2 * n}: invariant count", bb == rnd == rc == 2 and j0 == n - 1,
               f"N_bb={bb} N_random={rnd} N_rc={rc} j0={j0}")


def casimirs(n, seed):
    q = fam.Q(n)
    inv = fam.canonical_invariants(fam.FamilySpec("Q", n), q)
    fails = [str(e) for e in inv if is_invariant(q, e)]
    return _ok(f"Q{2 * n}: I1 and I2 are Casimir invariants", not fails, "; ".join(fails))


def derivations(n, seed):
    ds = derivation_space(fam.Q(n))
    problems = derivation_profile_check(ds)
    return _ok(f"Q{2 * n}: derivation algebra", not problems,
               f"dim={ds.total_dim} outer={ds.outer_dim}" + ("; " + problems[0] if problems else ""))


def theorem_invariants(n, seed):
    notes = []
    ok = True
    for spec in (fam.FamilySpec("r_lambda", n), fam.FamilySpec("r_eps", n), fam.FamilySpec("r_taillist", n)):
        g = fam.build(spec)
        inv = fam.canonical_invariants(spec, g)
        good = len(inv) == 1 and not is_invariant(g, inv[0]) and num_invariants_bb(g) == 1
        ok &= good
        if not good:
            notes.append(spec.family)
    for lam in (Fraction(3 - 2 * n, 2), Fraction(1 - n)):
        spec = fam.FamilySpec("r_lambda", n, {"lambda2": lam})
        g = fam.build(spec)
        inv = fam.canonical_invariants(spec, g)
        good = len(inv) == 1 and inv[0].is_polynomial() and not is_invariant(g, inv[0])
        ok &= good
        if not good:
            notes.append(f"lambda2={lam}")
    # intermediate identities of the logarithmic case
    g = fam.r_eps(n)
    reg = g.registry
    y = _torus(g)
    x2n = Poly.var(reg, f"x{2 * n}")
    i2 = fam.quadratic_casimir(n, reg)
    eps = Poly.var(reg, "epsilon")
    a = apply_field(y, GenExpr(reg, [i2, x2n], [(1, (1, -2), (0, 0))]))
    b = apply_field(y, GenExpr.log(x2n))
    one = GenExpr.constant(reg, 1)
    eps_e = GenExpr.constant(reg, eps)
    a_val = -1 if genexpr_zero_test(a + eps_e) else (1 if genexpr_zero_test(a - eps_e) else 0)
    b_val = -1 if genexpr_zero_test(b + one) else (1 if genexpr_zero_test(b - one) else 0)
    good = a_val != 0 and b_val == a_val
    ok &= good
    if not good:
        notes.append("log identities")
    return _ok(f"r{2 * n + 1}: one invariant per family", ok, ", ".join(notes))


def no_invariants(n, seed):
    g = fam.r_max(n)
    bb, rc = num_invariants_bb(g), num_invariants_rc(g)
    c = [0] * g.dim
    c[0] = c[2 * n - 1] = 1
    w = top_power_coefficient(g, c).constant()
    want = 2 * n * factorial(n)
    return _ok(f"r{2 * n + 2}: no invariants, witness magnitude (2n)*n!", bb == rc == 0 and abs(w) == want,
               f"N_bb={bb} N_rc={rc} witness={w} expected=+-{want}")


def contact(n, seed):
    c = [0] * (2 * n + 1)
    c[0] = c[2 * n - 1] = 1
    got = []
    g = fam.r_lambda(n)
    lam = Poly.var(g.registry, "lambda2")
    p = contact_check(g, c)
    want = (lam + (n - 2)) * (2 * factorial(n))
    got.append(p == want or p == -want)
    g = fam.r_eps(n)
    eps = Poly.var(g.registry, "epsilon")
    p = contact_check(g, c)
    got.append(p == eps * factorial(n) or p == eps * -factorial(n))
    p = contact_check(fam.r_taillist(n), c)
    got.append(abs(p.constant()) == 2 * factorial(n) if p.is_constant() else False)
    got.append(not contact_search(fam.r_eps(n, 0), seed).found)
    got.append(contact_search(fam.r_eps(n, 1), seed).found)
    got.append(contact_search(fam.r_lambda(n, 1), seed).found)
    got.append(contact_search(fam.r_taillist(n, {}).substitute(
        {k: 1 for k in fam.tail_names(n)}), seed).found)
    return _ok(f"r{2 * n + 1}: contact forms", all(got), "" if all(got) else f"flags={got}")


def quasi_classical(n, seed):
    k = quasi_classical_check(fam.k_sub(n), seed)
    q = quasi_classical_check(fam.Q(n), seed)
    good = k.certified and k.form.rank == 2 * n - 1 and not q.certified and q.reason == "all quadratic invariants degenerate"
    return _ok(f"k{n} quasi-classical, Q{2 * n} not", good, q.reason)


def contraction(n, seed):
    lim = contraction_limit(fam.Q(n), fam.contraction_spec_Q_to_n(n))
    return _ok(f"Q{2 * n} contracts to n_{2 * n},1", same_constants(lim, fam.n_n1(2 * n)))


def graded(n, seed):
    g = fam.A622()
    gr = graded_algebra(g)
    target = {(1, 5): {0: 1}, (2, 3): {0: 1}, (2, 4): {1: 1}, (3, 4): {2: 1}, (4, 5): {3: 1}}
    good = same_constants(gr, fam.LieAlgebra(g.labels, target)) and not same_constants(gr, g)
    return _ok("gr(A6,22) and its brackets", good)


def builtin_samples(n):
    """(name, algebra) pairs covering every family at a few parameter points."""
    out = [(f"Q{2 * n}", fam.Q(n)), (f"k{n}", fam.k_sub(n)), (f"r{2 * n + 2}", fam.r_max(n))]
    for lam in (1, Fraction(-1, 2), 2 - n):
        out.append((f"r{2 * n + 1}(lambda2={lam})", fam.r_lambda(n, lam)))
    for eps in (-1, 0, 1):
        out.append((f"r{2 * n + 1}(2-n,{eps})", fam.r_eps(n, eps)))
    names = fam.tail_names(n)
    for vals in ([1] * len(names), [0] * len(names), [1] + [-2] * (len(names) - 1)):
        out.append((f"r{2 * n + 1}(tails={vals})", fam.r_taillist(n, dict(zip(names, vals)))))
    return out


def cross_formula(n, seed):
    bad = []
    for name, g in builtin_samples(n):
        a = commutator_matrix(g)
        r = bareiss_rank(a)
        if r % 2 or r != bareiss_rank(a, "random", seed) or g.dim - r != num_invariants_rc(g) or jacobi_check(g):
            bad.append(name)
        if name.startswith("r"):
            nil = nilpotent_ideal_dim(g, [f"X{i}" for i in range(1, 2 * n + 1)])
            if 2 * nil < g.dim:
                bad.append(name + " nilradical")
    return _ok(f"n={n}: N_bb = N_rc on all builtin samples", not bad, ", ".join(bad))


def series(n, seed):
    q = fam.Q(n)
    want = [2 * n] + list(range(2 * n - 2, -1, -1))
    a = fam.A622()
    good = (lower_central_series(q) == want and derived_series(a) == [6, 4, 1, 0]
            and lower_central_series(a) == [6, 4, 3, 2, 1, 0])
    return _ok(f"series of Q{2 * n} and A6,22", good)


CHECKS: Sequence[Callable] = (invariant_count, casimirs, derivations, theorem_invariants, no_invariants,
                              contact, quasi_classical, contraction, graded, cross_formula, series)


def run(ns: Sequence[int], seed: int = 0) -> List[Check]:
    for n in ns:
        if n < 3:
            raise fam.ConstraintError(f"Q_2n requires n >= 3 (got n={n})")
    out = []
    for n in ns:
        for check in CHECKS:
            out.append(check(n, seed))
    return out
