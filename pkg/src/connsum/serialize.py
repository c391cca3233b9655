"""JSON codecs for every value that crosses the CLI boundary.

Rationals travel as [numerator, denominator]; integers too wide for exact
double round-trips are emitted as decimal strings and both forms are accepted
on input.  A finite scalar is {"re": [n, d], "im": [n, d]}, infinity is the
string "inf"; a bare integer is accepted as a scalar shorthand.
"""
from __future__ import annotations

from fractions import Fraction
from .errors import DomainError
from .model import MplExpr, MplTerm, Pair, ZExpr, ZTerm
from .records import Relation
from .scalars import INF, Scalar

_SAFE = 1 << 53


def _int_out(v: int):
    return v if abs(v) < _SAFE else str(v)


def _int_in(v) -> int:
    if isinstance(v, bool):
        raise DomainError("booleans are not integers here")
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return int(v, 10)
    raise DomainError(f"expected an integer, got {v!r}")


def frac_to_json(q: Fraction) -> list:
    return [_int_out(q.numerator), _int_out(q.denominator)]


def frac_from_json(obj) -> Fraction:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return Fraction(_int_in(obj))
    if isinstance(obj, list) and len(obj) == 2:
        return Fraction(_int_in(obj[0]), _int_in(obj[1]))
    raise DomainError(f"expected [num, den], got {obj!r}")


def scalar_to_json(z: Scalar):
    if z.is_inf:
        return "inf"
    return {"re": frac_to_json(z.re), "im": frac_to_json(z.im)}


def scalar_from_json(obj) -> Scalar:
    if obj == "inf":
        return INF
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return Scalar.of(_int_in(obj))
    if isinstance(obj, dict):
        return Scalar(frac_from_json(obj.get("re", 0)), frac_from_json(obj.get("im", 0)))
    raise DomainError(f"cannot parse scalar from {obj!r}")


def pair_to_json(p: Pair) -> dict:
    return {"k": list(p.k), "z": [scalar_to_json(v) for v in p.z]}


def pair_from_json(obj) -> Pair:
    if not isinstance(obj, dict):
        raise DomainError(f"expected a pair object, got {obj!r}")
    k = tuple(_int_in(e) for e in obj.get("k", []))
    z = obj.get("z")
    if z is None:
        zz = tuple(Scalar.of(1) for _ in k)  # all-ones shorthand
    else:
        zz = tuple(scalar_from_json(v) for v in z)
    return Pair(k, zz)


def zterm_to_json(t: ZTerm) -> dict:
    return {
        "coef": frac_to_json(t.coef),
        "components": [pair_to_json(p) for p in t.components],
        "bar": pair_to_json(t.bar),
    }


def zterm_from_json(obj) -> ZTerm:
    coef = frac_from_json(obj.get("coef", 1))
    comps = tuple(pair_from_json(p) for p in obj["components"])
    bar = pair_from_json(obj["bar"]) if "bar" in obj else Pair.ones((1,))
    return ZTerm(coef, comps, bar)


def zexpr_to_json(e: ZExpr) -> list:
    return [zterm_to_json(t) for t in e.as_terms()]


def zexpr_from_json(obj) -> ZExpr:
    return ZExpr.of([zterm_from_json(t) for t in obj])


def mplterm_to_json(t: MplTerm, coef: Fraction | None = None) -> dict:
    out = {"kind": t.kind, "k": list(t.k), "z": [scalar_to_json(v) for v in t.z]}
    if coef is not None:
        out["coef"] = frac_to_json(coef)
    return out


def mplterm_from_json(obj) -> MplTerm:
    return MplTerm(
        obj.get("kind", "shuffle"),
        tuple(_int_in(e) for e in obj["k"]),
        tuple(scalar_from_json(v) for v in obj["z"]),
    )


def mplexpr_to_json(e: MplExpr) -> list:
    return [mplterm_to_json(t, coef=c) for c, t in e.terms]


def mplexpr_from_json(obj) -> MplExpr:
    items = []
    for rec in obj:
        items.append((frac_from_json(rec.get("coef", 1)), mplterm_from_json(rec)))
    return MplExpr.of(items)


def _side_to_json(side) -> dict:
    if isinstance(side, ZExpr):
        return {"type": "z", "terms": zexpr_to_json(side)}
    return {"type": "mpl", "terms": mplexpr_to_json(side)}


def _side_from_json(obj):
    if obj.get("type") == "z":
        return zexpr_from_json(obj["terms"])
    return mplexpr_from_json(obj["terms"])


def relation_to_json(r: Relation) -> dict:
    return {
        "lhs": _side_to_json(r.lhs),
        "rhs": _side_to_json(r.rhs),
        "provenance": r.provenance,
    }


def relation_from_json(obj) -> Relation:
    return Relation(
        lhs=_side_from_json(obj["lhs"]),
        rhs=_side_from_json(obj["rhs"]),
        provenance=dict(obj.get("provenance", {})),
    )
