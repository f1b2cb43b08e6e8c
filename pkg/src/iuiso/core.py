"""Binary, order-preserving AST for intersection/union types.

No flattening, reordering or deduplication happens on construction; all
AC reasoning lives in explicit canonicalization calls.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Union


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Arrow:
    lhs: "TypeExpr"
    rhs: "TypeExpr"


@dataclass(frozen=True)
class And:
    left: "TypeExpr"
    right: "TypeExpr"


@dataclass(frozen=True)
class Or:
    left: "TypeExpr"
    right: "TypeExpr"


TypeExpr = Union[Atom, Arrow, And, Or]


class Stratum(Enum):
    ATOMIC = "Atomic"
    ARROW_TYPE = "ArrowType"
    BASIC_INTERSECTION = "BasicIntersection"
    BASIC_UNION = "BasicUnion"
    GENERAL = "General"


def is_atom_or_arrow(t: TypeExpr) -> bool:
    return isinstance(t, (Atom, Arrow))


def classify(t: TypeExpr) -> Stratum:
    """Finest stratum containing t."""
    if isinstance(t, Atom):
        return Stratum.ATOMIC
    if isinstance(t, Arrow):
        return Stratum.ARROW_TYPE
    if isinstance(t, And):
        if all(is_atom_or_arrow(c) for c in conjuncts(t)):
            return Stratum.BASIC_INTERSECTION
        return Stratum.GENERAL
    if all(is_atom_or_arrow(d) for d in disjuncts(t)):
        return Stratum.BASIC_UNION
    return Stratum.GENERAL


def is_basic_intersection(t: TypeExpr) -> bool:
    # single atoms and arrows count as intersections (and as unions)
    return classify(t) in (Stratum.ATOMIC, Stratum.ARROW_TYPE, Stratum.BASIC_INTERSECTION)


def is_basic_union(t: TypeExpr) -> bool:
    return classify(t) in (Stratum.ATOMIC, Stratum.ARROW_TYPE, Stratum.BASIC_UNION)


def conjuncts(t: TypeExpr) -> list[TypeExpr]:
    """Members of the maximal top-level intersection spine, in written order."""
    if isinstance(t, And):
        return conjuncts(t.left) + conjuncts(t.right)
    return [t]


def disjuncts(t: TypeExpr) -> list[TypeExpr]:
    if isinstance(t, Or):
        return disjuncts(t.left) + disjuncts(t.right)
    return [t]


def build_and(parts: list[TypeExpr]) -> TypeExpr:
    if not parts:
        raise ValueError("empty intersection")
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def build_or(parts: list[TypeExpr]) -> TypeExpr:
    if not parts:
        raise ValueError("empty union")
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def sort_key(t: TypeExpr):
    """Total syntactic order: Atom < Arrow < And < Or, then children."""
    if isinstance(t, Atom):
        return (0, t.name)
    if isinstance(t, Arrow):
        return (1, sort_key(t.lhs), sort_key(t.rhs))
    if isinstance(t, And):
        return (2, sort_key(t.left), sort_key(t.right))
    return (3, sort_key(t.left), sort_key(t.right))


def node_count(t: TypeExpr) -> int:
    if isinstance(t, Atom):
        return 1
    if isinstance(t, Arrow):
        return 1 + node_count(t.lhs) + node_count(t.rhs)
    return 1 + node_count(t.left) + node_count(t.right)


@dataclass(frozen=True)
class CanonicalTop:
    """Top-level type modulo idempotence/commutativity/associativity.

    Conjuncts are disjunct tuples; both levels are sorted and deduplicated.
    Anything below the first non-and/or constructor is kept verbatim.
    """

    conjuncts: tuple[tuple[TypeExpr, ...], ...]

    def expand(self) -> TypeExpr:
        return build_and([build_or(list(d)) for d in self.conjuncts])


def _sorted_unique(parts: list[TypeExpr]) -> tuple[TypeExpr, ...]:
    out: list[TypeExpr] = []
    for p in sorted(parts, key=sort_key):
        if not out or out[-1] != p:
            out.append(p)
    return tuple(out)


def canonical_top(t: TypeExpr) -> CanonicalTop:
    sets = [_sorted_unique(disjuncts(c)) for c in conjuncts(t)]
    uniq: list[tuple[TypeExpr, ...]] = []
    for s in sorted(sets, key=lambda ds: [sort_key(d) for d in ds]):
        if not uniq or uniq[-1] != s:
            uniq.append(s)
    return CanonicalTop(tuple(uniq))


def ac_equal_top(t1: TypeExpr, t2: TypeExpr) -> bool:
    return canonical_top(t1) == canonical_top(t2)


def dnf_conjuncts(t: TypeExpr) -> list[TypeExpr]:
    """Components of the disjunctive weak normal form w(t).

    Arrows are opaque here; only top-level unions/intersections distribute.
    """
    if is_atom_or_arrow(t):
        return [t]
    if isinstance(t, Or):
        return dnf_conjuncts(t.left) + dnf_conjuncts(t.right)
    left = dnf_conjuncts(t.left)
    right = dnf_conjuncts(t.right)
    return [And(l, r) for l in left for r in right]


def top_dnf(t: TypeExpr) -> TypeExpr:
    return build_or(dnf_conjuncts(t))


def cnf_conjuncts(t: TypeExpr) -> list[TypeExpr]:
    """Components of the conjunctive weak normal form cw(t); each is a basic union.

    Arrows split against both sides: the components of cw(a -> b) are the
    arrows from each w(a)-component to each cw(b)-component.
    """
    if isinstance(t, Atom):
        return [t]
    if isinstance(t, Arrow):
        return [Arrow(k, l) for k in dnf_conjuncts(t.lhs) for l in cnf_conjuncts(t.rhs)]
    if isinstance(t, And):
        return cnf_conjuncts(t.left) + cnf_conjuncts(t.right)
    left = cnf_conjuncts(t.left)
    right = cnf_conjuncts(t.right)
    return [Or(l, r) for l in left for r in right]


def top_cnf(t: TypeExpr) -> TypeExpr:
    return build_and(cnf_conjuncts(t))


def support(t: TypeExpr) -> frozenset[TypeExpr]:
    """Atom/arrow components of a basic intersection or union."""
    if isinstance(t, And):
        return support(t.left) | support(t.right)
    if isinstance(t, Or):
        return support(t.left) | support(t.right)
    return frozenset([t])
