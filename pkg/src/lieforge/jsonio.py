"""JSON documents for algebras and generalized expressions.

Algebra::

    {"dim": 3, "generators": ["X1", "X2", "X3"], "parameters": [],
     "brackets": [{"left": "X1", "right": "X2",
                   "terms": [{"gen": "X3", "coeff": "1"}]}]}

Expression (bases in coordinates x1..x_dim; coefficients and exponents are
exact rationals or rational functions of the algebra's parameters)::

    {"bases": [{"name": "I2", "poly": "x1*x6 + x3*x5 - 1/2*x4^2"}],
     "terms": [{"coeff": "1", "exponents": {"I2": "1"}, "logs": {}}]}
"""

from __future__ import annotations

import json
from typing import Dict, List, Sequence

from .coadjoint import GenExpr, parse_ratfunc
from .liealg import LieAlgebra
from .ring import Poly, RatFunc, VarRegistry


class FormatError(ValueError):
    pass


def _need(doc, key, kind):
    if key not in doc:
        raise FormatError(f"missing field {key!r}")
    if not isinstance(doc[key], kind):
        raise FormatError(f"field {key!r} has the wrong type")
    return doc[key]


def ratfunc_text(r: RatFunc) -> str:
    if r.den.is_constant():
        return str(r.num / r.den.constant())
    return f"({r.num})/({r.den})"


# -- algebras ----------------------------------------------------------------

def algebra_to_dict(g: LieAlgebra) -> dict:
    brackets = []
    for (i, j), row in g.pairs():
        terms = [{"gen": g.labels[k], "coeff": str(c)} for k, c in sorted(row.items())]
        brackets.append({"left": g.labels[i], "right": g.labels[j], "terms": terms})
    return {"dim": g.dim, "generators": list(g.labels), "parameters": list(g.parameters),
            "brackets": brackets}


def algebra_from_dict(doc: dict, name: str | None = None) -> LieAlgebra:
    if not isinstance(doc, dict):
        raise FormatError("algebra document must be a JSON object")
    dim = _need(doc, "dim", int)
    gens = _need(doc, "generators", list)
    params = doc.get("parameters", [])
    if not isinstance(params, list) or not all(isinstance(p, str) for p in params):
        raise FormatError("parameters must be a list of names")
    if len(gens) != dim or not all(isinstance(x, str) for x in gens):
        raise FormatError(f"expected {dim} generator names")
    if len(set(gens)) != dim:
        raise FormatError("generator names must be unique")
    coords = [f"x{i + 1}" for i in range(dim)]
    clash = set(params) & set(coords)
    if clash:
        raise FormatError(f"parameter names {sorted(clash)} collide with coordinates")
    try:
        reg = VarRegistry.make(coords, params)
    except ValueError as exc:
        raise FormatError(str(exc)) from None
    pos = {x: i for i, x in enumerate(gens)}
    seen = set()
    brackets: Dict = {}
    for b in _need(doc, "brackets", list):
        try:
            i, j = pos[b["left"]], pos[b["right"]]
        except (KeyError, TypeError):
            raise FormatError(f"bracket {b!r} references an undeclared generator") from None
        pair = frozenset((i, j))
        if i == j or pair in seen:
            raise FormatError(f"bracket [{b['left']}, {b['right']}] is repeated or trivial")
        seen.add(pair)
        row = {}
        for t in b.get("terms", []):
            try:
                k = pos[t["gen"]]
            except (KeyError, TypeError):
                raise FormatError(f"term {t!r} references an undeclared generator") from None
            try:
                c = Poly.parse(reg, str(t["coeff"]))
            except (KeyError, ValueError) as exc:
                raise FormatError(f"bad coefficient {t.get('coeff')!r}: {exc}") from None
            if c.free_vars() & set(reg.coordinates):
                raise FormatError(f"coefficient {t['coeff']!r} uses a coordinate variable")
            row[k] = row.get(k, Poly.zero(reg)) + c
        brackets[(i, j)] = row
    return LieAlgebra(gens, brackets, registry=reg, name=name)


def dump_algebra(g: LieAlgebra) -> str:
    return json.dumps(algebra_to_dict(g), indent=2) + "\n"


def load_algebra(text: str, name: str | None = None) -> LieAlgebra:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return algebra_from_dict(doc, name)


# -- expressions ---------------------------------------------------------------

def expr_to_dict(e: GenExpr, names: Sequence[str] | None = None) -> dict:
    names = list(names or [f"B{i + 1}" for i in range(len(e.bases))])
    terms = []
    for c, exps, logs in e.terms:
        terms.append({
            "coeff": ratfunc_text(c),
            "exponents": {n: ratfunc_text(x) for n, x in zip(names, exps) if not x.is_zero()},
            "logs": {n: m for n, m in zip(names, logs) if m},
        })
    return {"bases": [{"name": n, "poly": str(b)} for n, b in zip(names, e.bases)], "terms": terms}


def expr_from_dict(doc: dict, reg: VarRegistry) -> GenExpr:
    if not isinstance(doc, dict):
        raise FormatError("expression document must be a JSON object")
    names: List[str] = []
    bases = []
    try:
        for b in _need(doc, "bases", list):
            names.append(b["name"])
            bases.append(Poly.parse(reg, b["poly"]))
        terms = []
        for t in _need(doc, "terms", list):
            exps = [parse_ratfunc(reg, "0")] * len(names)
            logs = [0] * len(names)
            for n, x in t.get("exponents", {}).items():
                exps[names.index(n)] = parse_ratfunc(reg, str(x))
            for n, m in t.get("logs", {}).items():
                if not isinstance(m, int):
                    raise FormatError(f"log power for {n!r} must be an integer")
                logs[names.index(n)] = m
            terms.append((parse_ratfunc(reg, str(t["coeff"])), exps, logs))
        return GenExpr(reg, bases, terms)
    except FormatError:
        raise
    except (KeyError, ValueError, TypeError) as exc:
        raise FormatError(f"bad expression document: {exc}") from None


def dump_expr(e: GenExpr, names: Sequence[str] | None = None) -> str:
    return json.dumps(expr_to_dict(e, names), indent=2) + "\n"


def load_expr(text: str, reg: VarRegistry) -> GenExpr:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None
    return expr_from_dict(doc, reg)
