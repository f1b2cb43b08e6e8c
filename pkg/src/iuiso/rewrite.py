"""Isomorphism-preserving normalization of types.

Seven rules: two distributions, two arrow splittings, three erasures.
Spines at positions with a defined d-path are matched as multisets, and
every rule application rebuilds the layers it produced in a canonically
sorted order, so different strategies land on the same normal form up to
top-level AC equality.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, product
from typing import Callable, Optional

from .core import (And, Arrow, Atom, Or, TypeExpr, build_and, build_or,
                   conjuncts, disjuncts, is_atom_or_arrow, is_basic_union,
                   node_count, sort_key)
from .errors import InvalidRedex, SpineCapExceeded, StepBudgetExceeded
from .paths import (AndLeft, AndRight, ArrowLhs, ArrowRhs, DPath, OrLeft,
                    OrRight, PathSet, TypeContext, agrees_set, concat_prefix,
                    path_of_context, plug)
from .preorder import LeqKind, LeqProof, e_set, leq

DEFAULT_STEP_BUDGET = 10_000
DEFAULT_SPINE_CAP = 16
_SUBSET_CAP = 4096
_CHOICE_CAP = 256


class RuleId(Enum):
    DIST_OR_OVER_AND = "dist-or-over-and"
    DIST_AND_OVER_OR = "dist-and-over-or"
    SPLIT_ARROW_AND = "split-arrow-and"
    SPLIT_ARROW_OR = "split-arrow-or"
    ERASE_TOP_UNION_CONJUNCTS = "erase-top-union-conjuncts"
    ERASE_INTERSECTION_COMPONENTS = "erase-intersection-components"
    ERASE_UNION_COMPONENTS = "erase-union-components"


DISTRIBUTIONS = (RuleId.DIST_OR_OVER_AND, RuleId.DIST_AND_OVER_OR)
SPLITS = (RuleId.SPLIT_ARROW_AND, RuleId.SPLIT_ARROW_OR)
ERASURES = (RuleId.ERASE_TOP_UNION_CONJUNCTS, RuleId.ERASE_INTERSECTION_COMPONENTS,
            RuleId.ERASE_UNION_COMPONENTS)


@dataclass(frozen=True)
class Redex:
    rule: RuleId
    context: TypeContext
    focus: TypeExpr
    # distributions: spine index of the member being distributed
    member: int = -1
    # erasures: spine member indexes that survive, the dominator choice for
    # each erased index, the matching preorder proofs and the agreement set
    kept: tuple[int, ...] = ()
    choice: tuple[tuple[int, int], ...] = ()
    proofs: tuple[LeqProof, ...] = ()
    pset: PathSet = frozenset()


@dataclass(frozen=True)
class RewriteStep:
    before: TypeExpr
    after: TypeExpr
    redex: Redex


@dataclass(frozen=True)
class RewriteTrace:
    steps: tuple[RewriteStep, ...] = ()


def sort_layers(t: TypeExpr) -> TypeExpr:
    """Sort and left-associate the and/or layers of t, leaving arrows opaque."""
    if isinstance(t, And):
        members = [sort_layers(m) for m in conjuncts(t)]
        return build_and(sorted(members, key=sort_key))
    if isinstance(t, Or):
        members = [sort_layers(m) for m in disjuncts(t)]
        return build_or(sorted(members, key=sort_key))
    return t


def _spine_members(rule: RuleId, focus: TypeExpr) -> list[TypeExpr]:
    if rule in (RuleId.DIST_AND_OVER_OR, RuleId.ERASE_TOP_UNION_CONJUNCTS,
                RuleId.ERASE_INTERSECTION_COMPONENTS):
        return conjuncts(focus)
    return disjuncts(focus)


def result_subtree(r: Redex) -> TypeExpr:
    """The rewritten subtree that replaces the focus."""
    if r.rule is RuleId.DIST_OR_OVER_AND:
        members = disjuncts(r.focus)
        m = members[r.member]
        rest = build_or([x for i, x in enumerate(members) if i != r.member])
        return sort_layers(And(Or(m.left, rest), Or(m.right, rest)))
    if r.rule is RuleId.DIST_AND_OVER_OR:
        members = conjuncts(r.focus)
        m = members[r.member]
        rest = build_and([x for i, x in enumerate(members) if i != r.member])
        return sort_layers(Or(And(m.left, rest), And(m.right, rest)))
    if r.rule is RuleId.SPLIT_ARROW_AND:
        return sort_layers(And(Arrow(r.focus.lhs, r.focus.rhs.left),
                               Arrow(r.focus.lhs, r.focus.rhs.right)))
    if r.rule is RuleId.SPLIT_ARROW_OR:
        return sort_layers(And(Arrow(r.focus.lhs.left, r.focus.rhs),
                               Arrow(r.focus.lhs.right, r.focus.rhs)))
    members = _spine_members(r.rule, r.focus)
    kept = [members[j] for j in r.kept]
    build = build_and if r.rule is not RuleId.ERASE_UNION_COMPONENTS else build_or
    return sort_layers(build(kept))


def apply(t: TypeExpr, r: Redex) -> TypeExpr:
    """Fire a redex against t; the redex must still match."""
    def replace(node: TypeExpr, depth: int) -> TypeExpr:
        if depth == len(r.context.frames):
            if node != r.focus:
                raise InvalidRedex("focus does not match the type at the redex position")
            return result_subtree(r)
        f = r.context.frames[depth]
        if isinstance(f, ArrowLhs):
            if not isinstance(node, Arrow) or node.rhs != f.rhs:
                raise InvalidRedex("context frame mismatch")
            return Arrow(replace(node.lhs, depth + 1), node.rhs)
        if isinstance(f, ArrowRhs):
            if not isinstance(node, Arrow) or node.lhs != f.lhs:
                raise InvalidRedex("context frame mismatch")
            return Arrow(node.lhs, replace(node.rhs, depth + 1))
        if isinstance(f, AndLeft):
            if not isinstance(node, And) or node.right != f.right:
                raise InvalidRedex("context frame mismatch")
            return And(replace(node.left, depth + 1), node.right)
        if isinstance(f, AndRight):
            if not isinstance(node, And) or node.left != f.left:
                raise InvalidRedex("context frame mismatch")
            return And(node.left, replace(node.right, depth + 1))
        if isinstance(f, OrLeft):
            if not isinstance(node, Or) or node.right != f.right:
                raise InvalidRedex("context frame mismatch")
            return Or(replace(node.left, depth + 1), node.right)
        if not isinstance(node, Or) or node.left != f.left:
            raise InvalidRedex("context frame mismatch")
        return Or(node.left, replace(node.right, depth + 1))

    if not _conditions_hold(r):
        raise InvalidRedex(f"side conditions fail for {r.rule.value}")
    return replace(t, 0)


def _conditions_hold(r: Redex) -> bool:
    if r.rule is RuleId.DIST_OR_OVER_AND:
        d = path_of_context(r.context, "d")
        members = disjuncts(r.focus)
        return (d is not None and (not d.dirs or d.dirs[-1] == "R")
                and len(members) >= 2 and 0 <= r.member < len(members)
                and isinstance(members[r.member], And))
    if r.rule is RuleId.DIST_AND_OVER_OR:
        d = path_of_context(r.context, "d")
        members = conjuncts(r.focus)
        return (d is not None and bool(d.dirs) and d.dirs[-1] == "L"
                and len(members) >= 2 and 0 <= r.member < len(members)
                and isinstance(members[r.member], Or))
    if r.rule is RuleId.SPLIT_ARROW_AND:
        return (isinstance(r.focus, Arrow) and isinstance(r.focus.rhs, And)
                and path_of_context(r.context, "s") is not None)
    if r.rule is RuleId.SPLIT_ARROW_OR:
        return (isinstance(r.focus, Arrow) and isinstance(r.focus.lhs, Or)
                and path_of_context(r.context, "s") is not None)
    return _erasure_conditions_hold(r)


def _erasure_conditions_hold(r: Redex) -> bool:
    members = _spine_members(r.rule, r.focus)
    kept = set(r.kept)
    erased = {i for i, _ in r.choice}
    if r.rule is RuleId.ERASE_TOP_UNION_CONJUNCTS:
        if r.context.frames or not all(is_basic_union(m) for m in members):
            return False
        participating = set(range(len(members)))
    else:
        participating = {i for i, m in enumerate(members) if is_atom_or_arrow(m)}
        if path_of_context(r.context, "d") is None:
            return False
    if not erased or not kept or not kept <= participating or not erased <= participating:
        return False
    if kept & erased or kept | erased != participating:
        return False
    union: PathSet = frozenset()
    for (i, j), proof in zip(r.choice, r.proofs):
        if j not in kept:
            return False
        if r.rule is RuleId.ERASE_UNION_COMPONENTS:
            lhs, rhs = members[i], members[j]
        else:
            lhs, rhs = members[j], members[i]
        if proof.lhs != lhs or proof.rhs != rhs:
            return False
        kind = LeqKind.JOIN if r.rule is RuleId.ERASE_TOP_UNION_CONJUNCTS else LeqKind.MEET
        if leq(lhs, rhs, kind) is None:
            return False
        union |= e_set(proof)
    if r.rule is RuleId.ERASE_TOP_UNION_CONJUNCTS:
        pset = union
        ok_agree = all(agrees_set(members[j], pset) for j in r.kept)
    else:
        d = path_of_context(r.context, "d")
        pset = concat_prefix(d, union)
        passive = [m for i, m in enumerate(members) if i not in participating]
        ok_agree = all(
            agrees_set(plug(r.context, build_and(passive + [members[j]])
                            if r.rule is RuleId.ERASE_INTERSECTION_COMPONENTS
                            else build_or(passive + [members[j]])), pset)
            for j in r.kept)
    return pset == r.pset and ok_agree


def _emit_distributions(out, ctx, node):
    d = path_of_context(ctx, "d")
    if d is None:
        return
    if isinstance(node, Or) and (not d.dirs or d.dirs[-1] == "R"):
        for i, m in enumerate(disjuncts(node)):
            if isinstance(m, And):
                out.append(Redex(RuleId.DIST_OR_OVER_AND, ctx, node, member=i))
    if isinstance(node, And) and d.dirs and d.dirs[-1] == "L":
        for i, m in enumerate(conjuncts(node)):
            if isinstance(m, Or):
                out.append(Redex(RuleId.DIST_AND_OVER_OR, ctx, node, member=i))


def _dominance(members, participating, rule):
    dom: dict[int, dict[int, LeqProof]] = {i: {} for i in participating}
    for i in participating:
        for j in participating:
            if i == j:
                continue
            if rule is RuleId.ERASE_TOP_UNION_CONJUNCTS:
                proof = leq(members[j], members[i], LeqKind.JOIN)
            elif rule is RuleId.ERASE_INTERSECTION_COMPONENTS:
                proof = leq(members[j], members[i], LeqKind.MEET)
            else:
                proof = leq(members[i], members[j], LeqKind.MEET)
            if proof is not None:
                dom[i][j] = proof
    return dom


def _emit_erasures(out, ctx, node, rule, spine_cap):
    members = _spine_members(rule, node)
    if rule is RuleId.ERASE_TOP_UNION_CONJUNCTS:
        if not all(is_basic_union(m) for m in members):
            return
        participating = list(range(len(members)))
    else:
        participating = [i for i, m in enumerate(members) if is_atom_or_arrow(m)]
    if len(participating) < 2:
        return
    dom = _dominance(members, participating, rule)
    erasable = [i for i in participating if dom[i]]
    if not erasable:
        return
    passive = [m for i, m in enumerate(members) if i not in participating]

    def check(erased: tuple[int, ...]) -> list[Redex]:
        kept = tuple(i for i in participating if i not in erased)
        if not kept:
            return []
        domsets = []
        for i in erased:
            js = [j for j in dom[i] if j in kept]
            if not js:
                return []
            domsets.append(sorted(js))
        found = []
        n_choices = 1
        for ds in domsets:
            n_choices *= len(ds)
        for combo in product(*domsets):
            union: PathSet = frozenset()
            proofs = []
            for i, j in zip(erased, combo):
                proofs.append(dom[i][j])
                union |= e_set(dom[i][j])
            if rule is RuleId.ERASE_TOP_UNION_CONJUNCTS:
                pset = union
                ok = all(agrees_set(members[j], pset) for j in kept)
            else:
                d = path_of_context(ctx, "d")
                pset = concat_prefix(d, union)
                rebuild = build_and if rule is RuleId.ERASE_INTERSECTION_COMPONENTS else build_or
                ok = all(agrees_set(plug(ctx, rebuild(passive + [members[j]])), pset)
                         for j in kept)
            if ok:
                found.append(Redex(rule, ctx, node, kept=kept,
                                   choice=tuple(zip(erased, combo)),
                                   proofs=tuple(proofs), pset=pset))
                break  # first satisfying choice map per erased subset
            if len(found) == 0 and n_choices > _CHOICE_CAP:
                break
        return found

    if len(participating) > spine_cap:
        # wide spine: only the duplicate-collapsing and maximal erasures are
        # attempted; anything subtler raises so the cap stays honest
        emitted = _wide_spine_erasures(out, members, participating, dom, check)
        if not emitted:
            raise SpineCapExceeded(
                f"erasure search over {len(participating)} components exceeds the cap {spine_cap}")
        return

    count = 0
    for size in range(len(erasable), 0, -1):
        for erased in combinations(sorted(erasable), size):
            count += 1
            if count > _SUBSET_CAP:
                return
            out.extend(check(erased))


def _wide_spine_erasures(out, members, participating, dom, check):
    emitted = False
    # exact duplicates keep their first occurrence
    first: dict = {}
    dups = []
    for i in participating:
        if members[i] in first:
            dups.append(i)
        else:
            first[members[i]] = i
    if dups:
        got = check(tuple(dups))
        if got:
            out.extend(got)
            emitted = True
    # canonical maximal erasure: drop everything dominated by an undominated
    # representative
    erasable_all = tuple(sorted(i for i in participating if dom[i]))
    if erasable_all and len(erasable_all) < len(participating):
        got = check(erasable_all)
        if got:
            out.extend(got)
            emitted = True
    for i in (i for i in participating if dom[i]):
        got = check((i,))
        if got:
            out.extend(got)
            emitted = True
    return emitted


def find_redexes(t: TypeExpr, spine_cap: int = DEFAULT_SPINE_CAP) -> list[Redex]:
    """Every rule instantiation whose side conditions hold, in pre-order."""
    out: list[Redex] = []

    def walk(node: TypeExpr, frames: tuple, parent_op: Optional[str]) -> None:
        if isinstance(node, Atom):
            return
        ctx = TypeContext(frames)
        if isinstance(node, Arrow):
            if path_of_context(ctx, "s") is not None:
                if isinstance(node.rhs, And):
                    out.append(Redex(RuleId.SPLIT_ARROW_AND, ctx, node))
                if isinstance(node.lhs, Or):
                    out.append(Redex(RuleId.SPLIT_ARROW_OR, ctx, node))
            walk(node.lhs, frames + (ArrowLhs(node.rhs),), None)
            walk(node.rhs, frames + (ArrowRhs(node.lhs),), None)
            return
        if isinstance(node, And):
            if parent_op != "and":
                _emit_distributions(out, ctx, node)
                if path_of_context(ctx, "d") is not None:
                    if not frames:
                        _emit_erasures(out, ctx, node, RuleId.ERASE_TOP_UNION_CONJUNCTS, spine_cap)
                    _emit_erasures(out, ctx, node, RuleId.ERASE_INTERSECTION_COMPONENTS, spine_cap)
            walk(node.left, frames + (AndLeft(node.right),), "and")
            walk(node.right, frames + (AndRight(node.left),), "and")
            return
        if parent_op != "or":
            _emit_distributions(out, ctx, node)
            if path_of_context(ctx, "d") is not None:
                _emit_erasures(out, ctx, node, RuleId.ERASE_UNION_COMPONENTS, spine_cap)
        walk(node.left, frames + (OrLeft(node.right),), "or")
        walk(node.right, frames + (OrRight(node.left),), "or")

    walk(t, (), None)
    return out


def is_normal(t: TypeExpr, spine_cap: int = DEFAULT_SPINE_CAP) -> bool:
    return not find_redexes(t, spine_cap)


def _position_key(r: Redex) -> tuple:
    idx = tuple(0 if isinstance(f, (ArrowLhs, AndLeft, OrLeft)) else 1
                for f in r.context.frames)
    return (len(idx), idx)


def pick_redex(redexes: list[Redex], strategy: str, rng: random.Random) -> Redex:
    if strategy in ("lo", "leftmost-outermost"):
        return redexes[0]
    if strategy in ("ri", "rightmost-innermost"):
        return max(enumerate(redexes), key=lambda ir: (_position_key(ir[1]), ir[0]))[1]
    if strategy == "random":
        return rng.choice(redexes)
    raise ValueError(f"unknown strategy {strategy!r}")


def normalize(t: TypeExpr, strategy: str = "lo", step_budget: int = DEFAULT_STEP_BUDGET,
              spine_cap: int = DEFAULT_SPINE_CAP, seed: Optional[int] = None
              ) -> tuple[TypeExpr, RewriteTrace]:
    rng = random.Random(seed)
    cur = t
    steps: list[RewriteStep] = []
    for _ in range(step_budget):
        redexes = find_redexes(cur, spine_cap)
        if not redexes:
            return cur, RewriteTrace(tuple(steps))
        r = pick_redex(redexes, strategy, rng)
        nxt = apply(cur, r)
        steps.append(RewriteStep(cur, nxt, r))
        cur = nxt
    raise StepBudgetExceeded(f"normalization did not finish within {step_budget} steps")


# ---------------------------------------------------------------------------
# termination certificate


class Polarity(Enum):
    TOP_OR_RIGHT = "top-or-right"
    LEFT_OF_ARROW = "left-of-arrow"


_PREC = {
    Polarity.TOP_OR_RIGHT: {"arrow": 3, "or": 2, "and": 1, "atom": 0},
    Polarity.LEFT_OF_ARROW: {"arrow": 3, "and": 2, "or": 1, "atom": 0},
}


def _sym(t: TypeExpr):
    if isinstance(t, Atom):
        return ("atom", t.name)
    if isinstance(t, Arrow):
        return ("arrow",)
    if isinstance(t, And):
        return ("and",)
    return ("or",)


def _children(t: TypeExpr) -> list[TypeExpr]:
    if isinstance(t, Atom):
        return []
    if isinstance(t, Arrow):
        return [t.lhs, t.rhs]
    return [t.left, t.right]


def rpo_greater(t1: TypeExpr, t2: TypeExpr, polarity: Polarity) -> bool:
    """Recursive path ordering with the polarity-dependent precedence."""
    prec = _PREC[polarity]

    def gt(s: TypeExpr, t: TypeExpr) -> bool:
        if any(sub == t or gt(sub, t) for sub in _children(s)):
            return True
        ss, st = _sym(s), _sym(t)
        if prec[ss[0]] > prec[st[0]]:
            return all(gt(s, sub) for sub in _children(t))
        if ss == st and ss[0] != "atom":
            return _multiset_gt(_children(s), _children(t))
        return False

    def _multiset_gt(ms: list[TypeExpr], mt: list[TypeExpr]) -> bool:
        ms, mt = list(ms), list(mt)
        for x in list(mt):
            if x in ms:
                ms.remove(x)
                mt.remove(x)
        if not mt:
            return bool(ms)
        return bool(ms) and all(any(gt(m, n) for m in ms) for n in mt)

    return t1 != t2 and gt(t1, t2)
