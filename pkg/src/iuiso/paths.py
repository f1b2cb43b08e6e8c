"""Navigation paths over arrows, agreement, and one-hole type contexts.

A d-path is a string over {L, R}; an s-path is a d-path with an implicit
terminal hash, demanding one more arrow beyond its end.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

from .core import And, Arrow, Atom, Or, TypeExpr


@dataclass(frozen=True)
class DPath:
    dirs: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "".join(self.dirs)


@dataclass(frozen=True)
class SPath:
    dirs: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "".join(self.dirs) + "#"


Path = Union[DPath, SPath]
EPSILON = DPath(())
PathSet = frozenset  # of DPath


def agrees(t: TypeExpr, p: Path) -> bool:
    """Whether t can be traversed along p without hitting a blocking atom."""
    dirs = p.dirs
    want_arrow_at_end = isinstance(p, SPath)

    def go(t: TypeExpr, i: int) -> bool:
        if isinstance(t, (And, Or)):
            return go(t.left, i) and go(t.right, i)
        if i == len(dirs):
            return isinstance(t, Arrow) if want_arrow_at_end else True
        if not isinstance(t, Arrow):
            return False
        return go(t.lhs, i + 1) if dirs[i] == "L" else go(t.rhs, i + 1)

    return go(t, 0)


def agrees_set(t: TypeExpr, ps: PathSet) -> bool:
    return all(agrees(t, p) for p in ps)


def concat(p: DPath, q: DPath) -> DPath:
    return DPath(p.dirs + q.dirs)


def concat_prefix(p: DPath, ps: PathSet) -> PathSet:
    """p . PS in the path-set sense: every prefixed path plus p itself."""
    return frozenset(concat(p, q) for q in ps) | {p}


def prefixed(d: str, ps: PathSet) -> PathSet:
    """Plain elementwise prefixing, used by preorder e-sets."""
    return frozenset(DPath((d,) + q.dirs) for q in ps)


def left_residuals(ps: PathSet) -> PathSet:
    return frozenset(DPath(p.dirs[1:]) for p in ps if p.dirs and p.dirs[0] == "L")


def right_residuals(ps: PathSet) -> PathSet:
    return frozenset(DPath(p.dirs[1:]) for p in ps if p.dirs and p.dirs[0] == "R")


# ---------------------------------------------------------------------------
# one-hole contexts, stored as the frame sequence from root to hole


@dataclass(frozen=True)
class ArrowLhs:
    rhs: TypeExpr


@dataclass(frozen=True)
class ArrowRhs:
    lhs: TypeExpr


@dataclass(frozen=True)
class AndLeft:
    right: TypeExpr  # hole & right


@dataclass(frozen=True)
class AndRight:
    left: TypeExpr  # left & hole


@dataclass(frozen=True)
class OrLeft:
    right: TypeExpr


@dataclass(frozen=True)
class OrRight:
    left: TypeExpr


Frame = Union[ArrowLhs, ArrowRhs, AndLeft, AndRight, OrLeft, OrRight]


@dataclass(frozen=True)
class TypeContext:
    frames: tuple[Frame, ...] = ()


def plug(c: TypeContext, t: TypeExpr) -> TypeExpr:
    out = t
    for f in reversed(c.frames):
        if isinstance(f, ArrowLhs):
            out = Arrow(out, f.rhs)
        elif isinstance(f, ArrowRhs):
            out = Arrow(f.lhs, out)
        elif isinstance(f, AndLeft):
            out = And(out, f.right)
        elif isinstance(f, AndRight):
            out = And(f.left, out)
        elif isinstance(f, OrLeft):
            out = Or(out, f.right)
        else:
            out = Or(f.left, out)
    return out


def path_of_context(c: TypeContext, kind: str) -> Optional[Path]:
    """d- or s-path of a context; None when a sibling fails agreement.

    Frames are scanned from the hole outward: and/or frames pass the path
    through unchanged only when the sibling agrees with it.
    """
    if kind not in ("d", "s"):
        raise ValueError(f"kind must be 'd' or 's', got {kind!r}")
    dirs: tuple[str, ...] = ()
    for f in reversed(c.frames):
        cur: Path = SPath(dirs) if kind == "s" else DPath(dirs)
        if isinstance(f, ArrowLhs):
            dirs = ("L",) + dirs
        elif isinstance(f, ArrowRhs):
            dirs = ("R",) + dirs
        else:
            sibling = f.right if isinstance(f, (AndLeft, OrLeft)) else f.left
            if not agrees(sibling, cur):
                return None
    return SPath(dirs) if kind == "s" else DPath(dirs)


def parse_path_literal(text: str) -> Path:
    """L/R characters with an optional trailing # marking an s-path."""
    s = text.strip()
    terminal = s.endswith("#")
    if terminal:
        s = s[:-1]
    if any(ch not in "LR" for ch in s):
        raise ValueError(f"bad path literal {text!r}")
    dirs = tuple(s)
    return SPath(dirs) if terminal else DPath(dirs)
