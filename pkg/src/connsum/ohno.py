"""Word algebra over letters {x, e_z} with truncated t-power series.

Words encode polylog arguments: e_{z_1} x^{k_1-1} ... e_{z_r} x^{k_r-1}
corresponds to the pair (z, k).  Two automorphisms and two anti-automorphisms
act on the series ring by geometric-series substitution on letters; composing
them turns the transport/boundary machinery into lift-by-h relations, checked
both through the series route and through a direct combinatorial expansion.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .boundary import boundary_reduce
from .duality import dagger, dual_condition, iota
from .errors import (
    AlphabetViolation,
    DualConditionViolated,
    GuardViolation,
    NotA0,
    PreconditionViolated,
    TruncationTooSmall,
)
from .model import MplExpr, MplTerm, Pair, ZExpr, zterm
from .records import Relation
from .scalars import ONE, Scalar, sc
from .transport import reduce_to_z1


class _XLetter:
    """The weight letter; singleton."""

    _instance: Optional["_XLetter"] = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "x"


X = _XLetter()
Letter = Union[_XLetter, Scalar]
Word = tuple[Letter, ...]


def letter_allowed(z: Scalar) -> bool:
    """e_z exists for finite nonzero z with |z| <= 1 and Re(z) <= 1/2, or z = 1."""
    if z.is_inf or z.is_zero() or not z.in_closed_disk():
        return False
    return z.re_leq_half() or z.is_one()


def _check_word(w: Word) -> None:
    for letter in w:
        if isinstance(letter, Scalar) and not letter_allowed(letter):
            raise AlphabetViolation(f"letter variable {letter} outside the alphabet")


def in_a1(w: Word) -> bool:
    return len(w) == 0 or isinstance(w[0], Scalar)


def in_a0(w: Word) -> bool:
    """Convergent words: start with e_z, Re(z) != 1/2; end with x, or with
    e_z' of modulus != 1 (a single letter must satisfy both)."""
    if len(w) == 0:
        return True
    head = w[0]
    if not isinstance(head, Scalar) or head.re_eq_half():
        return False
    tail = w[-1]
    if isinstance(tail, Scalar):
        return not tail.abs_eq_one()
    return True


def word_of_pair(p: Pair) -> Word:
    out: list[Letter] = []
    for v, e in p.letters():
        if not letter_allowed(v):
            raise AlphabetViolation(f"pair variable {v} outside the alphabet")
        out.append(v)
        out.extend([X] * (e - 1))
    return tuple(out)


def pair_of_word(w: Word) -> Pair:
    _check_word(w)
    if not in_a1(w):
        raise AlphabetViolation("word must be empty or start with a variable letter")
    letters: list[tuple[Scalar, int]] = []
    for letter in w:
        if isinstance(letter, Scalar):
            letters.append((letter, 1))
        else:
            letters[-1] = (letters[-1][0], letters[-1][1] + 1)
    return Pair.from_letters(letters)


Poly = dict[Word, Fraction]


@dataclass(frozen=True)
class HSeries:
    """Truncated formal t-power series with word-combination coefficients."""

    order: int
    coeffs: tuple[tuple[int, tuple[tuple[Word, Fraction], ...]], ...]

    @staticmethod
    def make(order: int, data: dict[int, Poly]) -> "HSeries":
        if order < 0:
            raise TruncationTooSmall("truncation order must be >= 0")
        rows = []
        for deg in sorted(data):
            if deg > order:
                continue
            row = tuple(sorted(
                ((w, c) for w, c in data[deg].items() if c != 0),
                key=lambda wc: (len(wc[0]), repr(wc[0])),
            ))
            if row:
                rows.append((deg, row))
        return HSeries(order, tuple(rows))

    def data(self) -> dict[int, Poly]:
        return {deg: dict(row) for deg, row in self.coeffs}

    @staticmethod
    def zero(order: int) -> "HSeries":
        return HSeries.make(order, {})

    @staticmethod
    def one(order: int) -> "HSeries":
        return HSeries.make(order, {0: {(): Fraction(1)}})

    @staticmethod
    def from_word(w: Word, order: int, deg: int = 0, coef=1) -> "HSeries":
        _check_word(w)
        return HSeries.make(order, {deg: {tuple(w): Fraction(coef)}})

    def __add__(self, other: "HSeries") -> "HSeries":
        out = self.data()
        for deg, row in other.data().items():
            dst = out.setdefault(deg, {})
            for w, c in row.items():
                dst[w] = dst.get(w, Fraction(0)) + c
        return HSeries.make(self.order, out)

    def scaled(self, c) -> "HSeries":
        c = Fraction(c)
        return HSeries.make(self.order, {
            deg: {w: co * c for w, co in row.items()} for deg, row in self.data().items()
        })

    def __mul__(self, other: "HSeries") -> "HSeries":
        out: dict[int, Poly] = {}
        for d1, row1 in self.data().items():
            for d2, row2 in other.data().items():
                if d1 + d2 > self.order:
                    continue
                dst = out.setdefault(d1 + d2, {})
                for w1, c1 in row1.items():
                    for w2, c2 in row2.items():
                        w = w1 + w2
                        dst[w] = dst.get(w, Fraction(0)) + c1 * c2
        return HSeries.make(self.order, out)

    def degree_words(self, deg: int) -> Poly:
        for d, row in self.coeffs:
            if d == deg:
                return dict(row)
        return {}

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        chunks = []
        for deg, row in self.coeffs:
            for w, c in row:
                word = "".join(repr(l) if isinstance(l, _XLetter) else f"e[{l}]" for l in w) or "1"
                chunks.append(f"{c}*{word}*t^{deg}" if deg else f"{c}*{word}")
        return " + ".join(chunks)


def _geometric(letter: Letter, order: int, sign: int, outer: Letter) -> HSeries:
    """outer * (1 - sign * letter * t)^(-1) truncated: sum sign^j outer letter^j t^j."""
    data: dict[int, Poly] = {}
    for j in range(order + 1):
        data[j] = {(outer,) + (letter,) * j: Fraction(sign ** j)}
    return HSeries.make(order, data)


def _image_x(name: str, order: int) -> HSeries:
    if name in ("sigma", "rho", "sigma_inv", "rho_inv"):
        return HSeries.from_word((X,), order)
    if name == "tau":
        return HSeries.from_word((ONE,), order)
    if name == "tau_prime":
        return _geometric(ONE, order, -1, ONE)
    raise AlphabetViolation(f"unknown map {name!r}")


def _image_e(name: str, z: Scalar, order: int) -> HSeries:
    if name == "sigma":
        return _geometric(X, order, 1, z)
    if name == "sigma_inv":
        data = {0: {(z,): Fraction(1)}}
        if order >= 1:
            data[1] = {(z, X): Fraction(-1)}
        return HSeries.make(order, data)
    if name == "rho":
        return _geometric(z, order, 1, z)
    if name == "rho_inv":
        return _geometric(z, order, -1, z)
    if name == "tau":
        if z.is_one():
            return HSeries.from_word((X,), order)
        zz = z.mobius()
        return _geometric(zz, order, 1, zz).scaled(-1)
    if name == "tau_prime":
        if z.is_one():
            return _geometric(X, order, 1, X)
        zz = z.mobius()
        return _geometric(zz, order, -1, zz).scaled(-1)
    raise AlphabetViolation(f"unknown map {name!r}")


_ANTI = {"tau", "tau_prime"}
MAP_NAMES = ("sigma", "rho", "tau", "tau_prime", "sigma_inv", "rho_inv")


def apply_map(name: str, s: HSeries) -> HSeries:
    """Extend the named (anti-)automorphism from letters to a whole series."""
    if name not in MAP_NAMES:
        raise AlphabetViolation(f"unknown map {name!r}")
    order = s.order
    cache: dict[Letter, HSeries] = {}

    def image(letter: Letter) -> HSeries:
        if letter not in cache:
            if isinstance(letter, _XLetter):
                cache[letter] = _image_x(name, order)
            else:
                if not letter_allowed(letter):
                    raise AlphabetViolation(f"letter {letter} outside the alphabet")
                cache[letter] = _image_e(name, letter, order)
        return cache[letter]

    out = HSeries.zero(order)
    for deg, row in s.data().items():
        for w, c in row.items():
            letters = tuple(reversed(w)) if name in _ANTI else w
            prod = HSeries.one(order)
            for letter in letters:
                prod = prod * image(letter)
            shifted = HSeries.make(order, {
                d + deg: p for d, p in prod.data().items() if d + deg <= order
            })
            out = out + shifted.scaled(c)
    return out


def apply_map_word(name: str, w: Word, order: int) -> HSeries:
    return apply_map(name, HSeries.from_word(w, order))


def words_to_mpl(poly: Poly) -> MplExpr:
    """Interpret a word combination through the polylog evaluation map."""
    items = []
    for w, c in poly.items():
        if not in_a0(w):
            raise NotA0(f"word {w!r} is outside the convergent subalgebra")
        p = pair_of_word(w)
        items.append((c, MplTerm("shuffle", p.k, p.z)))
    return MplExpr.of(items)


def boundary_series(w: Word, order: int) -> list[MplExpr]:
    """Degree-h coefficients of the lifted boundary identity.

    Entry h is the polylog expansion of the arity-2 sum with empty mate and
    all-ones bar of length h+1, obtained by the composed substitution
    sigma(rho(word)).
    """
    if not in_a0(w):
        raise NotA0(f"word {w!r} is outside the convergent subalgebra")
    s = apply_map("sigma", apply_map("rho", HSeries.from_word(w, order)))
    return [words_to_mpl(s.degree_words(h)) for h in range(order + 1)]


# ---------------------------------------------------------------------------
# lift-by-h relations


def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    if parts == 0:
        if total == 0:
            yield ()
        return
    for cuts in itertools.combinations(range(total + parts - 1), parts - 1):
        out = []
        prev = -1
        for c in cuts:
            out.append(c - prev - 1)
            prev = c
        out.append(total + parts - 2 - prev)
        yield tuple(out)


def lift_sum(p: Pair, h: int) -> MplExpr:
    """Sum of shuffle polylogs over all exponent lifts of total h."""
    if p.is_empty():
        return MplExpr.single(MplTerm("shuffle", (), ())) if h == 0 else MplExpr.zero()
    if p.k[-1] == 1 and p.z[-1].abs_eq_one():
        raise GuardViolation("lift needs |last variable| != 1 when the last exponent is 1")
    items = []
    for comp in _compositions(h, p.dep):
        k = tuple(e + c for e, c in zip(p.k, comp))
        items.append((Fraction(1), MplTerm("shuffle", k, p.z)))
    return MplExpr.of(items)


@dataclass(frozen=True)
class LiftBlocks:
    """Unique split of a pair at its non-1 variables.

    blocks[i] = (all-ones letters, exceptional variable z_i, its exponent
    l_i); tail holds the closing all-ones letters.  Reassembly is exact and
    the number of blocks equals the count of non-1 variables.
    """

    blocks: tuple[tuple[tuple[tuple[Scalar, int], ...], Scalar, int], ...]
    tail: tuple[tuple[Scalar, int], ...]

    @property
    def d(self) -> int:
        return len(self.blocks)

    def reassemble(self) -> Pair:
        return self.insert((0,) * self.d)

    def insert(self, bs: Sequence[int]) -> Pair:
        """Prefix each exceptional letter with b_i depth-1 copies of itself."""
        if len(bs) != self.d:
            raise PreconditionViolated(
                f"need {self.d} insertion counts, got {len(bs)}"
            )
        letters: list[tuple[Scalar, int]] = []
        for (ones, v, e), b in zip(self.blocks, bs):
            letters.extend(ones)
            letters.extend([(v, 1)] * b)
            letters.append((v, e))
        letters.extend(self.tail)
        return Pair.from_letters(letters)


def lift_blocks(p: Pair) -> LiftBlocks:
    blocks = []
    ones: list[tuple[Scalar, int]] = []
    for v, e in p.letters():
        if v.is_one():
            ones.append((v, e))
        else:
            blocks.append((tuple(ones), v, e))
            ones = []
    return LiftBlocks(tuple(blocks), tuple(ones))


def insert_lift(p: Pair, bs: Sequence[int]) -> Pair:
    """Insert b_i depth-1 copies of each exceptional variable before its letter."""
    return lift_blocks(p).insert(bs)


def ohno_relation(p: Pair, h: int) -> Relation:
    """Lift-by-h relation: lift_sum(p, h) against the signed dual expansion."""
    if not dual_condition(p):
        raise DualConditionViolated(f"{p} fails the dual condition")
    if not p.is_empty() and p.k[-1] == 1 and p.z[-1].abs_eq_one():
        raise GuardViolation("|last variable| != 1 required when the last exponent is 1")
    if h < 0:
        raise PreconditionViolated("h must be non-negative")
    d = iota(p.z)
    sign, dual = dagger(p)
    lhs = lift_sum(p, h)
    rhs = MplExpr.zero()
    for i in range(h + 1):
        for bs in _compositions(i, d):
            rhs = rhs + lift_sum(insert_lift(dual, bs), h - i)
    rhs = rhs.scaled(sign)
    return Relation(lhs=lhs, rhs=rhs, provenance={
        "route": "ohno",
        "pair": str(p),
        "h": h,
        "sign": sign,
    })


def thm_sides(w: Word, order: int) -> list[tuple[MplExpr, MplExpr]]:
    """Degree-wise sides of the series identity L(sigma(w)) = L(sigma(tau(w)))."""
    if not in_a0(w):
        raise NotA0(f"word {w!r} is outside the convergent subalgebra")
    lhs_series = apply_map("sigma", HSeries.from_word(w, order))
    rhs_series = apply_map("sigma", apply_map("tau", HSeries.from_word(w, order)))
    return [
        (words_to_mpl(lhs_series.degree_words(hh)), words_to_mpl(rhs_series.degree_words(hh)))
        for hh in range(order + 1)
    ]


def algebraic_ohno_check(w: Word, order: int, bound: int = 400,
                         tol: float = 1e-6) -> bool:
    """Check the series route numerically and against the combinatorial route.

    Returns True when both emission paths produce identical normalized
    expressions for every degree <= order and the relations verify
    numerically.
    """
    from .numeric import verify_relation

    sides = thm_sides(w, order)
    p = pair_of_word(w)
    for hh, (lhs, rhs) in enumerate(sides):
        rel = ohno_relation(p, hh)
        if rel.lhs.terms != lhs.terms or rel.rhs.terms != rhs.terms:
            return False
        report = verify_relation(Relation(lhs=lhs, rhs=rhs, provenance={}),
                                 bound=bound, tol=tol)
        if not report.ok:
            return False
    return True


# ---------------------------------------------------------------------------
# cyclic multi-term relations from the reciprocal-sum identity


def _g(a: Scalar, b: Scalar) -> Scalar:
    return (a * b) / (a * b - a - b)


def multi_term_relations(zs: Sequence[Scalar]) -> Relation:
    """Three-term (n = 3) or eight-term (n = 4) relation for depth-(n-1) polylogs.

    The inputs must be nonzero, strictly inside the disk, have Re < 1/2, and
    reciprocal sum exactly 1; the four-variable case also needs the cyclic
    pair values g(a, b) = ab/(ab-a-b) inside the closed disk.
    """
    zs = tuple(zs)
    n = len(zs)
    if n not in (3, 4):
        raise PreconditionViolated("need exactly 3 or 4 variables")
    for i, z in enumerate(zs):
        if z.is_zero() or z.is_inf:
            raise PreconditionViolated(f"z{i + 1} must be finite nonzero")
        if not z.in_open_disk():
            raise PreconditionViolated(f"|z{i + 1}| < 1 fails")
        if not z.re_lt_half():
            raise PreconditionViolated(f"Re(z{i + 1}) < 1/2 fails")
    from .scalars import reciprocal_sum

    if reciprocal_sum(zs) != ONE:
        raise PreconditionViolated("sum of reciprocals must equal 1")
    if n == 4:
        for i in range(4):
            a, b = zs[i], zs[(i + 1) % 4]
            if not _g(a, b).in_closed_disk():
                raise PreconditionViolated(f"|g(z{i + 1}, z{(i + 1) % 4 + 1})| <= 1 fails")

    total = MplExpr.zero()
    windows = []
    if n == 3:
        for i in range(3):
            window = (zs[(i + 1) % 3], zs[i])
            windows.append([str(v) for v in window])
            term = zterm([Pair((1,), (v,)) for v in window])
            total = total + _mpl_of_z1(reduce_to_z1(term, j=1))
    else:
        for i in range(4):
            window = (zs[i], zs[(i + 1) % 4], zs[(i + 2) % 4])
            windows.append([str(v) for v in window])
            term = zterm([Pair((1,), (v,)) for v in window])
            total = total + _mpl_of_z1(reduce_to_z1(term, j=2))
    if total.terms and total.terms[0][0] < 0:
        total = total.scaled(-1)
    return Relation(lhs=total, rhs=MplExpr.zero(), provenance={
        "route": "reciprocal-cycle",
        "variables": [str(z) for z in zs],
        "windows": windows,
    })


def _mpl_of_z1(expr: ZExpr) -> MplExpr:
    items = []
    for term in expr.as_terms():
        items.extend(boundary_reduce(term).terms)
    return MplExpr.of(items)
