"""Preorders on basic intersections and basic unions, with proof objects.

Each proof carries enough structure to extract its set of difference
paths: the paths a hereditary identity must traverse to map the left
side to the right one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from itertools import product

from .core import (Arrow, Atom, TypeExpr, conjuncts, disjuncts,
                   is_basic_intersection, is_basic_union)
from .errors import StrataMismatch
from .paths import DPath, EPSILON, PathSet, prefixed


class LeqKind(Enum):
    MEET = "meet"
    JOIN = "join"


@dataclass(frozen=True)
class ArrowPair:
    """One component correspondence inside an arrow schema application.

    covered is the index on the fully-matched side, partner the index on
    the side that may carry extra components; meet compares the partner
    and covered left-hand sides contravariantly, join the right-hand
    sides covariantly.
    """

    covered: int
    partner: int
    meet: "LeqProof"
    join: "LeqProof"


@dataclass(frozen=True)
class LeqProof:
    kind: LeqKind
    lhs: TypeExpr
    rhs: TypeExpr
    rule: str  # refl | refl_ac | atom | arrow
    extra_present: bool = False
    pairs: tuple[ArrowPair, ...] = ()


def _components(t: TypeExpr, kind: LeqKind) -> list[TypeExpr]:
    return conjuncts(t) if kind is LeqKind.MEET else disjuncts(t)


def e_set(proof: LeqProof) -> PathSet:
    """Difference paths of a preorder derivation.

    The empty set marks syntactic equality; epsilon marks differences
    fixable in place; arrow schemas prefix their children's paths.
    """
    if proof.rule == "refl":
        return frozenset()
    if proof.rule in ("refl_ac", "atom"):
        return frozenset([EPSILON])
    child = [(e_set(p.meet), e_set(p.join)) for p in proof.pairs]
    if proof.extra_present and all(not m and not j for m, j in child):
        return frozenset([EPSILON])
    out: PathSet = frozenset()
    for m, j in child:
        out |= prefixed("L", m) | prefixed("R", j)
    return out


def leq(a: TypeExpr, b: TypeExpr, kind: LeqKind):
    """Search the preorder schemas; None when the sides are unrelated."""
    if kind is LeqKind.MEET:
        if not (is_basic_intersection(a) and is_basic_intersection(b)):
            raise StrataMismatch("meet comparisons need basic intersections")
    else:
        if not (is_basic_union(a) and is_basic_union(b)):
            raise StrataMismatch("join comparisons need basic unions")
    return _leq(a, b, kind)


@lru_cache(maxsize=None)
def _leq(a: TypeExpr, b: TypeExpr, kind: LeqKind):
    if a == b:
        return LeqProof(kind, a, b, "refl")
    ca, cb = _components(a, kind), _components(b, kind)
    if any(not isinstance(c, (Atom, Arrow)) for c in ca + cb):
        return None
    sa, sb = frozenset(ca), frozenset(cb)
    if sa == sb:
        # equal modulo idempotence/commutativity/associativity; an identity
        # fixes it in place, so the difference set is {epsilon}, not {}
        return LeqProof(kind, a, b, "refl_ac")
    smaller, bigger = (sb, sa) if kind is LeqKind.MEET else (sa, sb)
    if smaller < bigger and any(isinstance(c, Atom) for c in smaller):
        return LeqProof(kind, a, b, "atom")
    # arrow schemas: the covered side is matched component by component,
    # the other side may keep extras and may serve several components
    covered, free = (cb, ca) if kind is LeqKind.MEET else (ca, cb)
    if any(not isinstance(c, Arrow) for c in covered):
        return None
    options: list[list[tuple[int, LeqProof, LeqProof, PathSet]]] = []
    for c in covered:
        opts = []
        for idx, f in enumerate(free):
            if not isinstance(f, Arrow):
                continue
            if kind is LeqKind.MEET:
                m = _try_leq(c.lhs, f.lhs, LeqKind.MEET)
                j = _try_leq(f.rhs, c.rhs, LeqKind.JOIN)
            else:
                m = _try_leq(f.lhs, c.lhs, LeqKind.MEET)
                j = _try_leq(c.rhs, f.rhs, LeqKind.JOIN)
            if m is None or j is None:
                continue
            opts.append((idx, m, j, prefixed("L", e_set(m)) | prefixed("R", e_set(j))))
        if not opts:
            return None
        opts.sort(key=lambda o: (len(o[3]), sorted(str(p) for p in o[3]), o[0]))
        options.append(opts)
    assign = _pick_assignment(options)
    used = {opt[0] for opt in assign}
    extra = len(used) < len(free)
    pairs = tuple(ArrowPair(ci, opt[0], opt[1], opt[2]) for ci, opt in enumerate(assign))
    return LeqProof(kind, a, b, "arrow", extra_present=extra, pairs=pairs)


def _try_leq(a, b, kind):
    if kind is LeqKind.MEET:
        if not (is_basic_intersection(a) and is_basic_intersection(b)):
            return None
    else:
        if not (is_basic_union(a) and is_basic_union(b)):
            return None
    return _leq(a, b, kind)


_ASSIGN_CAP = 4096


def _pick_assignment(options):
    """Choice map minimizing the overall difference-path set."""
    total = 1
    for opts in options:
        total *= len(opts)
        if total > _ASSIGN_CAP:
            return [opts[0] for opts in options]
    best = None
    best_key = None
    for combo in product(*options):
        union: PathSet = frozenset()
        for opt in combo:
            union |= opt[3]
        key = (len(union), sorted(str(p) for p in union), tuple(opt[0] for opt in combo))
        if best_key is None or key < best_key:
            best, best_key = combo, key
    return list(best)
