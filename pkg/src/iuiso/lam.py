"""Linear lambda terms, beta/eta normalization, permutators and identities.

Terms compare and hash up to alpha-equivalence; free variables compare by
name.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .errors import NotFhi, StepBudgetExceeded
from .paths import DPath, EPSILON, PathSet, SPath, left_residuals, right_residuals

BETA_BUDGET = 100_000


@dataclass(frozen=True, eq=False)
class Var:
    name: str


@dataclass(frozen=True, eq=False)
class Abs:
    binder: str
    body: "Term"


@dataclass(frozen=True, eq=False)
class App:
    fun: "Term"
    arg: "Term"


Term = Union[Var, Abs, App]


def _canon(t: Term, env: dict[str, int], depth: int):
    if isinstance(t, Var):
        lvl = env.get(t.name)
        return ("v", depth - lvl) if lvl is not None else ("f", t.name)
    if isinstance(t, Abs):
        saved = env.get(t.binder)
        env[t.binder] = depth
        body = _canon(t.body, env, depth + 1)
        if saved is None:
            del env[t.binder]
        else:
            env[t.binder] = saved
        return ("l", body)
    return ("a", _canon(t.fun, env, depth), _canon(t.arg, env, depth))


def alpha_canon(t: Term):
    return _canon(t, {}, 0)


def _alpha_eq(a: Term, b: Term) -> bool:
    return alpha_canon(a) == alpha_canon(b)


def _term_eq(self, other):
    if not isinstance(other, (Var, Abs, App)):
        return NotImplemented
    return _alpha_eq(self, other)


def _term_hash(self):
    return hash(alpha_canon(self))


for _cls in (Var, Abs, App):
    _cls.__eq__ = _term_eq
    _cls.__hash__ = _term_hash


def free_vars(t: Term) -> set[str]:
    if isinstance(t, Var):
        return {t.name}
    if isinstance(t, Abs):
        return free_vars(t.body) - {t.binder}
    return free_vars(t.fun) | free_vars(t.arg)


def _fresh(base: str, avoid: set[str]) -> str:
    if base not in avoid:
        return base
    i = 1
    while f"{base}{i}" in avoid:
        i += 1
    return f"{base}{i}"


def subst(t: Term, x: str, s: Term) -> Term:
    """Capture-avoiding substitution t[s/x]."""
    if isinstance(t, Var):
        return s if t.name == x else t
    if isinstance(t, App):
        return App(subst(t.fun, x, s), subst(t.arg, x, s))
    if t.binder == x:
        return t
    if t.binder in free_vars(s) and x in free_vars(t.body):
        new = _fresh(t.binder, free_vars(s) | free_vars(t.body))
        return Abs(new, subst(subst(t.body, t.binder, Var(new)), x, s))
    return Abs(t.binder, subst(t.body, x, s))


def rename_free(t: Term, x: str, y: str) -> Term:
    return subst(t, x, Var(y))


def occurrences(t: Term, x: str) -> int:
    """Free occurrences of x in t."""
    if isinstance(t, Var):
        return 1 if t.name == x else 0
    if isinstance(t, Abs):
        return 0 if t.binder == x else occurrences(t.body, x)
    return occurrences(t.fun, x) + occurrences(t.arg, x)


def is_linear(m: Term) -> bool:
    """Every free or bound variable occurs exactly once."""
    ok = True

    def counts(t: Term) -> dict[str, int]:
        nonlocal ok
        if isinstance(t, Var):
            return {t.name: 1}
        if isinstance(t, App):
            out = counts(t.fun)
            for k, v in counts(t.arg).items():
                out[k] = out.get(k, 0) + v
            return out
        out = counts(t.body)
        if out.pop(t.binder, 0) != 1:
            ok = False
        return out

    free = counts(m)
    return ok and all(v == 1 for v in free.values())


def _beta_step(t: Term) -> Optional[Term]:
    if isinstance(t, App):
        if isinstance(t.fun, Abs):
            return subst(t.fun.body, t.fun.binder, t.arg)
        f = _beta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = _beta_step(t.arg)
        if a is not None:
            return App(t.fun, a)
        return None
    if isinstance(t, Abs):
        b = _beta_step(t.body)
        return Abs(t.binder, b) if b is not None else None
    return None


def beta_nf(m: Term, budget: int = BETA_BUDGET) -> Term:
    cur = m
    for _ in range(budget):
        nxt = _beta_step(cur)
        if nxt is None:
            return cur
        cur = nxt
    raise StepBudgetExceeded("beta reduction budget exhausted")


def _eta_pass(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    if isinstance(t, App):
        return App(_eta_pass(t.fun), _eta_pass(t.arg))
    body = _eta_pass(t.body)
    if isinstance(body, App) and isinstance(body.arg, Var) and body.arg.name == t.binder \
            and t.binder not in free_vars(body.fun):
        return _eta_pass(body.fun)
    return Abs(t.binder, body)


def beta_eta_nf(m: Term, budget: int = BETA_BUDGET) -> Term:
    cur = beta_nf(m, budget)
    while True:
        nxt = _eta_pass(cur)
        if _alpha_eq(nxt, cur):
            return cur
        cur = nxt


IDENTITY = Abs("x", Var("x"))


# ---------------------------------------------------------------------------
# finite hereditary permutators


@dataclass(frozen=True)
class FhpShape:
    """Head shape of an invertible term: a permutation with sub-permutators.

    perm[k] is the (0-based) binder index heading argument k.
    """

    perm: tuple[int, ...] = ()
    subs: tuple["FhpShape", ...] = ()

    @property
    def arity(self) -> int:
        return len(self.perm)


IDENTITY_SHAPE = FhpShape()


def _spine(t: Term) -> tuple[Term, list[Term]]:
    args: list[Term] = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    return t, list(reversed(args))


def _parse_applied(t: Term) -> Optional[tuple[str, FhpShape]]:
    # t is either a bare variable or \b1..bm. v A1..Am with each Ai headed
    # by a distinct bj; returns (v, shape)
    if isinstance(t, Var):
        return t.name, IDENTITY_SHAPE
    binders: list[str] = []
    while isinstance(t, Abs):
        binders.append(t.binder)
        t = t.body
    if not binders:
        return None
    head, args = _spine(t)
    if not isinstance(head, Var) or len(args) != len(binders):
        return None
    perm: list[int] = []
    subs: list[FhpShape] = []
    for a in args:
        parsed = _parse_applied(a)
        if parsed is None:
            return None
        hname, shape = parsed
        if hname not in binders:
            return None
        perm.append(binders.index(hname))
        subs.append(shape)
    if sorted(perm) != list(range(len(binders))):
        return None
    return head.name, FhpShape(tuple(perm), tuple(subs))


def recognize_fhp(m: Term) -> Optional[FhpShape]:
    """Shape of m if its beta-normal form is a finite hereditary permutator."""
    nf = beta_nf(m)
    if not isinstance(nf, Abs):
        return None
    parsed = _parse_applied(nf.body)
    if parsed is None or parsed[0] != nf.binder:
        return None
    return parsed[1]


def term_of_shape(s: FhpShape) -> Term:
    counter = [0]

    def fresh(base: str) -> str:
        counter[0] += 1
        return f"{base}{counter[0]}"

    def applied(shape: FhpShape, head: Term) -> Term:
        if shape.arity == 0:
            return head
        binders = [fresh("y") for _ in range(shape.arity)]
        out = head
        for k in range(shape.arity):
            out = App(out, applied(shape.subs[k], Var(binders[shape.perm[k]])))
        for b in reversed(binders):
            out = Abs(b, out)
        return out

    return Abs("x", applied(s, Var("x")))


def fhp_compose(p: FhpShape, q: FhpShape) -> FhpShape:
    t = Abs("x", App(term_of_shape(p), App(term_of_shape(q), Var("x"))))
    shape = recognize_fhp(t)
    assert shape is not None, "composition of permutators must be a permutator"
    return shape


def fhp_inverse(s: FhpShape) -> FhpShape:
    """Inverse permutation with re-paired inverted sub-permutators.

    The paper never states this formula, so every result is validated
    against the beta-eta oracle.
    """
    inv_perm = [0] * s.arity
    for k, b in enumerate(s.perm):
        inv_perm[b] = k
    inv = FhpShape(tuple(inv_perm), tuple(fhp_inverse(s.subs[inv_perm[k]]) for k in range(s.arity)))
    for a, b in ((s, inv), (inv, s)):
        comp = Abs("x", App(term_of_shape(a), App(term_of_shape(b), Var("x"))))
        assert beta_eta_nf(comp) == IDENTITY, "inverse failed the beta-eta oracle"
    return inv


# ---------------------------------------------------------------------------
# finite hereditary identities induced by paths


class _Namer:
    def __init__(self):
        self.n = 0

    def __call__(self, base: str) -> str:
        self.n += 1
        return f"{base}{self.n}"


def spath_expansion(p: SPath, namer: Optional[_Namer] = None) -> Term:
    """Beta-expanded identity for an s-path, before normalization."""
    namer = namer or _Namer()
    if not p.dirs:
        x, y = namer("x"), namer("y")
        return Abs(x, Abs(y, App(Var(x), Var(y))))
    inner = spath_expansion(SPath(p.dirs[1:]), namer)
    x, y = namer("x"), namer("y")
    if p.dirs[0] == "L":
        return Abs(x, Abs(y, App(Var(x), App(inner, Var(y)))))
    return Abs(x, Abs(y, App(inner, App(Var(x), Var(y)))))


def pathset_expansion(ps: PathSet, namer: Optional[_Namer] = None) -> Term:
    """Beta-expanded identity for a set of d-paths, before normalization."""
    namer = namer or _Namer()
    if not ps or ps == frozenset([EPSILON]):
        x = namer("x")
        return Abs(x, Var(x))
    lt = pathset_expansion(left_residuals(ps), namer)
    rt = pathset_expansion(right_residuals(ps), namer)
    x, y = namer("x"), namer("y")
    return Abs(x, Abs(y, App(rt, App(Var(x), App(lt, Var(y))))))


def fhi_of_path(p) -> Term:
    """Beta-normal hereditary identity for an s-path, d-path or path set."""
    if isinstance(p, SPath):
        return beta_nf(spath_expansion(p))
    if isinstance(p, DPath):
        return beta_nf(pathset_expansion(frozenset([p])))
    return beta_nf(pathset_expansion(frozenset(p)))


def _identity_perm(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _is_fhi_shape(s: FhpShape) -> bool:
    return s.perm == _identity_perm(s.arity) and all(_is_fhi_shape(c) for c in s.subs)


def _shape_paths(s: FhpShape) -> PathSet:
    if s.arity == 0:
        return frozenset([EPSILON])
    # unique decomposition \x y. Id1 (x (Id2 y)): Id2 guards the first
    # argument, Id1 is the rest of the spine
    id2 = s.subs[0]
    id1 = FhpShape(_identity_perm(s.arity - 1), s.subs[1:])
    left = frozenset(DPath(("L",) + p.dirs) for p in _shape_paths(id2))
    right = frozenset(DPath(("R",) + p.dirs) for p in _shape_paths(id1))
    return left | right


def dpaths_of_fhi(m: Term) -> PathSet:
    shape = recognize_fhp(m)
    if shape is None or not _is_fhi_shape(shape):
        raise NotFhi("term does not beta-expand to a hereditary identity")
    return _shape_paths(shape)
