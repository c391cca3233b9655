"""Core vocabulary: indices, decorated pairs, connected-sum terms, expressions.

An index is a plain tuple of positive integers.  A Pair decorates an index
with same-length unit-disk variables.  A ZTerm is one rational-coefficient
connected-sum value with n >= 1 components and one bar slot; ZExpr / MplExpr
are normalized linear combinations.  All values are immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, NamedTuple, Sequence

from .errors import (
    DomainError,
    EmptyArrowOnInfinity,
    NoEmptyComponent,
    NotPeelable,
)
from .scalars import INF, ONE, ZERO, Scalar, sc

Index = tuple[int, ...]


def weight(k: Index) -> int:
    return sum(k)


def depth(k: Index) -> int:
    return len(k)


def is_admissible(k: Index) -> bool:
    """Empty, or last entry >= 2."""
    return len(k) == 0 or k[-1] >= 2


def _as_index(entries: Iterable[int]) -> Index:
    k = tuple(int(e) for e in entries)
    if any(e < 1 for e in k):
        raise DomainError(f"index entries must be positive: {k}")
    return k


def _as_scalar(z) -> Scalar:
    if isinstance(z, Scalar):
        return z
    return sc(z)


@dataclass(frozen=True)
class Pair:
    """An index decorated with variables, one per entry.

    Variables must be finite and lie in the closed unit disk.  The empty pair
    is allowed and is its own vertical-arrow image.
    """

    k: Index = ()
    z: tuple[Scalar, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "k", _as_index(self.k))
        object.__setattr__(self, "z", tuple(_as_scalar(v) for v in self.z))
        if len(self.k) != len(self.z):
            raise DomainError(f"index/variable length mismatch: {self.k} vs {self.z}")
        for v in self.z:
            if v.is_inf or not v.in_closed_disk():
                raise DomainError(f"pair variable {v} outside the closed unit disk")

    @staticmethod
    def ones(k: Iterable[int]) -> "Pair":
        """All-ones decoration of an index."""
        kk = _as_index(k)
        return Pair(kk, (ONE,) * len(kk))

    def is_empty(self) -> bool:
        return len(self.k) == 0

    @property
    def wt(self) -> int:
        return weight(self.k)

    @property
    def dep(self) -> int:
        return depth(self.k)

    def letters(self) -> tuple[tuple[Scalar, int], ...]:
        return tuple(zip(self.z, self.k))

    @staticmethod
    def from_letters(letters: Sequence[tuple[Scalar, int]]) -> "Pair":
        return Pair(tuple(e for _, e in letters), tuple(v for v, _ in letters))

    def sort_key(self):
        return (self.k, tuple(v.sort_key() for v in self.z))

    def __str__(self) -> str:
        if self.is_empty():
            return "()"
        ks = ",".join(str(e) for e in self.k)
        zs = ",".join(str(v) for v in self.z)
        return f"({zs} / {ks})"


EMPTY_PAIR = Pair()


class SignedPair(NamedTuple):
    """Arrow images carry a sign: the infinity arrow negates."""

    sign: int
    pair: Pair


def arrow(p: Pair, v: Scalar) -> SignedPair:
    """Append the arrow decorated by v.

    Finite nonzero v appends the letter (v, 1); v = 0 increments the last
    exponent (empty pair unchanged); v = inf does the same with sign -1.
    """
    if v.is_inf:
        if p.is_empty():
            raise EmptyArrowOnInfinity("infinity arrow on the empty pair")
        return SignedPair(-1, Pair(p.k[:-1] + (p.k[-1] + 1,), p.z))
    if not v.in_closed_disk():
        raise DomainError(f"arrow value {v} outside the closed unit disk")
    if v.is_zero():
        if p.is_empty():
            return SignedPair(1, p)
        return SignedPair(1, Pair(p.k[:-1] + (p.k[-1] + 1,), p.z))
    return SignedPair(1, Pair(p.k + (1,), p.z + (v,)))


Slot = Literal["component", "bar"]


def peel(p: Pair, slot: Slot) -> tuple[Scalar, Pair, int]:
    """Invert the arrow notation: return (value, base, sign).

    A trailing exponent 1 peels horizontally to its own variable.  A trailing
    exponent >= 2 peels vertically; in a component slot the vertical arrow is
    the infinity arrow (sign -1), in the bar slot it is the 0 arrow (sign +1).
    """
    if p.is_empty():
        raise NotPeelable("cannot peel the empty pair")
    last_v, last_e = p.z[-1], p.k[-1]
    if last_e == 1:
        if last_v.is_zero():
            raise NotPeelable("trailing (0, 1) letter has no arrow preimage")
        return last_v, Pair(p.k[:-1], p.z[:-1]), 1
    base = Pair(p.k[:-1] + (last_e - 1,), p.z)
    if slot == "component":
        return INF, base, -1
    return ZERO, base, 1


def _coef(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    return Fraction(c)


@dataclass(frozen=True)
class ZTerm:
    """coef * Z_n(components | bar)."""

    coef: Fraction
    components: tuple[Pair, ...]
    bar: Pair

    def __post_init__(self):
        object.__setattr__(self, "coef", _coef(self.coef))
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) < 1:
            raise DomainError("a connected-sum term needs at least one component")

    @property
    def arity(self) -> int:
        return len(self.components)

    def key(self):
        return (self.components, self.bar)

    def is_structurally_zero(self) -> bool:
        """Zero by convention: empty bar, a 0 variable at a strict slot, or all
        components empty (the bar chain then has no admissible top)."""
        if self.bar.is_empty():
            return True
        if all(p.is_empty() for p in self.components):
            return True
        for p in self.components:
            if any(v.is_zero() for v in p.z):
                return True
        if not self.bar.is_empty() and self.bar.z[0].is_zero():
            return True
        return False

    def scaled(self, c: Fraction) -> "ZTerm":
        return ZTerm(self.coef * c, self.components, self.bar)

    def with_coef(self, c: Fraction) -> "ZTerm":
        return ZTerm(c, self.components, self.bar)

    def transport_measure(self) -> int:
        """Total weight outside the receiving slot; drops by 1 per rewrite."""
        return sum(p.wt for p in self.components[:-1]) + self.bar.wt

    def sort_key(self):
        return (
            len(self.components),
            tuple(p.sort_key() for p in self.components),
            self.bar.sort_key(),
        )

    def __str__(self) -> str:
        comps = "; ".join(str(p) for p in self.components)
        c = "" if self.coef == 1 else f"{self.coef}*"
        return f"{c}Z{len(self.components)}({comps} | {self.bar})"


def zterm(components: Sequence[Pair], bar: Pair | None = None, coef=1) -> ZTerm:
    """Build a term; a missing bar means the conventional (1 / 1) slot."""
    if bar is None:
        bar = Pair.ones((1,))
    return ZTerm(_coef(coef), tuple(components), bar)


MplKind = Literal["shuffle", "harmonic"]


@dataclass(frozen=True)
class MplTerm:
    """A polylogarithm value of one of the two series shapes.

    shuffle: variables enter through consecutive differences of the summation
    indices; harmonic: each variable is raised to its own index.
    """

    kind: MplKind
    k: Index
    z: tuple[Scalar, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", _as_index(self.k))
        object.__setattr__(self, "z", tuple(_as_scalar(v) for v in self.z))
        if len(self.k) != len(self.z):
            raise DomainError("index/variable length mismatch")
        if self.kind not in ("shuffle", "harmonic"):
            raise DomainError(f"unknown polylog kind {self.kind!r}")

    @property
    def dep(self) -> int:
        return len(self.k)

    @property
    def wt(self) -> int:
        return weight(self.k)

    def guard_ok(self) -> bool:
        """Absolute-convergence guard for this term's kind."""
        if self.dep == 0:
            return True
        if self.kind == "shuffle":
            if any(not v.in_closed_disk() for v in self.z):
                return False
            if not is_admissible(self.k) and not self.z[-1].in_open_disk():
                return False
            return True
        suffix = ONE
        for j in range(self.dep - 1, -1, -1):
            suffix = suffix * self.z[j]
            if not suffix.in_closed_disk():
                return False
        if self.k[-1] == 1 and not self.z[-1].in_open_disk():
            return False
        return True

    def key(self):
        return (self.kind, self.k, self.z)

    def sort_key(self):
        return (self.kind, self.k, tuple(v.sort_key() for v in self.z))

    def __str__(self) -> str:
        name = "Li" if self.kind == "shuffle" else "Li*"
        ks = ",".join(str(e) for e in self.k)
        zs = ", ".join(str(v) for v in self.z)
        return f"{name}[{ks}]({zs})"


def _normalize(items, zero_term_pred, term_sort):
    acc: dict = {}
    order: dict = {}
    for coef, term in items:
        coef = _coef(coef)
        if coef == 0 or zero_term_pred(term):
            continue
        key = term.key()
        if key in acc:
            acc[key] = (acc[key][0] + coef, term)
        else:
            acc[key] = (coef, term)
    out = [(c, t) for c, t in acc.values() if c != 0]
    out.sort(key=lambda ct: term_sort(ct[1]))
    return tuple(out)


@dataclass(frozen=True)
class ZExpr:
    """Normalized linear combination of connected-sum terms."""

    terms: tuple[tuple[Fraction, ZTerm], ...] = ()

    @staticmethod
    def of(terms: Iterable[ZTerm]) -> "ZExpr":
        return ZExpr(_normalize(
            ((t.coef, t.with_coef(Fraction(1))) for t in terms),
            lambda t: t.is_structurally_zero(),
            lambda t: t.sort_key(),
        ))

    def as_terms(self) -> list[ZTerm]:
        return [t.with_coef(c) for c, t in self.terms]

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "ZExpr") -> "ZExpr":
        return ZExpr.of(self.as_terms() + other.as_terms())

    def scaled(self, c) -> "ZExpr":
        return ZExpr.of([t.scaled(_coef(c)) for t in self.as_terms()])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{t}" if c != 1 else str(t) for c, t in self.terms)


@dataclass(frozen=True)
class MplExpr:
    """Normalized linear combination of polylogarithm terms."""

    terms: tuple[tuple[Fraction, MplTerm], ...] = ()

    @staticmethod
    def of(items: Iterable[tuple[Fraction, MplTerm]]) -> "MplExpr":
        return MplExpr(_normalize(
            items,
            lambda t: False,
            lambda t: t.sort_key(),
        ))

    @staticmethod
    def single(term: MplTerm, coef=1) -> "MplExpr":
        return MplExpr.of([(_coef(coef), term)])

    @staticmethod
    def zero() -> "MplExpr":
        return MplExpr()

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "MplExpr") -> "MplExpr":
        return MplExpr.of(list(self.terms) + list(other.terms))

    def __sub__(self, other: "MplExpr") -> "MplExpr":
        return self + other.scaled(-1)

    def scaled(self, c) -> "MplExpr":
        c = _coef(c)
        return MplExpr.of([(co * c, t) for co, t in self.terms])

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, t in self.terms:
            parts.append(f"{c}*{t}" if c != 1 else str(t))
        return " + ".join(parts)


def swap_components(t: ZTerm, perm: Sequence[int]) -> ZTerm:
    """Reorder components by perm (a permutation of range(n)); value-preserving."""
    n = t.arity
    if sorted(perm) != list(range(n)):
        raise DomainError(f"{perm} is not a permutation of 0..{n - 1}")
    return ZTerm(t.coef, tuple(t.components[i] for i in perm), t.bar)


def drop_empty_component(t: ZTerm) -> ZTerm:
    """Remove one empty component (arity must stay >= 1); value-preserving."""
    if t.arity <= 1:
        raise NoEmptyComponent("arity floor: cannot drop below one component")
    for i, p in enumerate(t.components):
        if p.is_empty():
            return ZTerm(t.coef, t.components[:i] + t.components[i + 1:], t.bar)
    raise NoEmptyComponent("no empty component to drop")


def drop_all_empty_components(t: ZTerm) -> ZTerm:
    """Repeatedly drop empty components while more than one component remains."""
    while t.arity > 1 and any(p.is_empty() for p in t.components):
        t = drop_empty_component(t)
    return t


def is_convergent(t: ZTerm) -> bool:
    """Absolute-convergence guard.

    Arity >= 2 requires all components non-empty.  Arity 1 requires, when both
    the component index and the bar index end in 1, that one of the trailing
    variables lies strictly inside the disk.  Structurally-zero terms pass.
    """
    if t.is_structurally_zero():
        return True
    if t.arity >= 2:
        return all(not p.is_empty() for p in t.components)
    p = t.components[0]
    if p.is_empty() or t.bar.is_empty():
        return True
    if not is_admissible(p.k) and not is_admissible(t.bar.k):
        return p.z[-1].in_open_disk() or t.bar.z[-1].in_open_disk()
    return True
