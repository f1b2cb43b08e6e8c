"""Concrete syntax: parsing and minimal-parenthesization printing.

Type grammar (arrow binds loosest, right-associative; & over |):

    type  := union ('->' type)?
    union := inter ('|' inter)*
    inter := prim ('&' prim)*
    prim  := IDENT | '(' type ')'

Terms:

    term   := '\\' IDENT+ '.' term | appseq
    appseq := prim prim*
    prim   := IDENT | '(' term ')'
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import And, Arrow, Atom, Or, TypeExpr
from .errors import ParseError, SourceSpan
from .lam import Abs, App, Term, Var
from .paths import (AndLeft, AndRight, ArrowLhs, ArrowRhs, OrLeft, OrRight,
                    TypeContext, parse_path_literal)


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    start: int
    end: int

    @property
    def span(self) -> SourceSpan:
        return SourceSpan(self.start, self.end)


_PUNCT = {"->": "ARROW", "&": "AND", "|": "OR", "(": "LP", ")": "RP",
          "\\": "LAM", ".": "DOT", "[]": "HOLE"}


def _lex(text: str) -> list[_Tok]:
    toks = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if text.startswith("->", i):
            toks.append(_Tok("ARROW", "->", i, i + 2))
            i += 2
            continue
        if text.startswith("[]", i) or text.startswith("[ ]", i):
            w = 3 if text.startswith("[ ]", i) else 2
            toks.append(_Tok("HOLE", "[]", i, i + w))
            i += w
            continue
        if c in "&|().\\":
            toks.append(_Tok(_PUNCT[c], c, i, i + 1))
            i += 1
            continue
        if c.isalpha() or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            toks.append(_Tok("IDENT", text[i:j], i, j))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", SourceSpan(i, i + 1))
    toks.append(_Tok("EOF", "", n, n))
    return toks


class _Cursor:
    def __init__(self, toks: list[_Tok]):
        self.toks = toks
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def next(self) -> _Tok:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str) -> _Tok:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {kind}, found {t.text or 'end of input'!r}", t.span)
        return self.next()


_HOLE = Atom("\x00hole")


def _parse_type(c: _Cursor, allow_hole: bool) -> TypeExpr:
    lhs = _parse_union(c, allow_hole)
    if c.peek().kind == "ARROW":
        c.next()
        return Arrow(lhs, _parse_type(c, allow_hole))
    return lhs


def _parse_union(c: _Cursor, allow_hole: bool) -> TypeExpr:
    out = _parse_inter(c, allow_hole)
    while c.peek().kind == "OR":
        c.next()
        out = Or(out, _parse_inter(c, allow_hole))
    return out


def _parse_inter(c: _Cursor, allow_hole: bool) -> TypeExpr:
    out = _parse_tprim(c, allow_hole)
    while c.peek().kind == "AND":
        c.next()
        out = And(out, _parse_tprim(c, allow_hole))
    return out


def _parse_tprim(c: _Cursor, allow_hole: bool) -> TypeExpr:
    t = c.peek()
    if t.kind == "IDENT":
        c.next()
        return Atom(t.text)
    if t.kind == "HOLE" and allow_hole:
        c.next()
        return _HOLE
    if t.kind == "LP":
        c.next()
        inner = _parse_type(c, allow_hole)
        c.expect("RP")
        return inner
    raise ParseError(f"expected a type, found {t.text or 'end of input'!r}", t.span)


def parse_type(text: str) -> TypeExpr:
    c = _Cursor(_lex(text))
    out = _parse_type(c, allow_hole=False)
    c.expect("EOF")
    return out


def print_type(t: TypeExpr) -> str:
    # levels: 0 = type, 1 = union member, 2 = intersection member, 3 = prim
    def go(t: TypeExpr, level: int) -> str:
        if isinstance(t, Atom):
            return t.name
        if isinstance(t, Arrow):
            s = f"{go(t.lhs, 1)} -> {go(t.rhs, 0)}"
            return f"({s})" if level > 0 else s
        if isinstance(t, Or):
            s = f"{go(t.left, 1)} | {go(t.right, 2)}"
            return f"({s})" if level > 1 else s
        s = f"{go(t.left, 2)} & {go(t.right, 3)}"
        return f"({s})" if level > 2 else s

    return go(t, 0)


def parse_context(text: str) -> TypeContext:
    c = _Cursor(_lex(text))
    tree = _parse_type(c, allow_hole=True)
    c.expect("EOF")

    frames = []

    def locate(t: TypeExpr) -> bool:
        # appends the frames from t's root to the unique hole
        if t == _HOLE:
            return True
        if isinstance(t, Atom):
            return False
        if isinstance(t, Arrow):
            children = [(t.lhs, ArrowLhs(t.rhs)), (t.rhs, ArrowRhs(t.lhs))]
        elif isinstance(t, And):
            children = [(t.left, AndLeft(t.right)), (t.right, AndRight(t.left))]
        else:
            children = [(t.left, OrLeft(t.right)), (t.right, OrRight(t.left))]
        for child, frame in children:
            frames.append(frame)
            if locate(child):
                return True
            frames.pop()
        return False

    def holes(t: TypeExpr) -> int:
        if t == _HOLE:
            return 1
        if isinstance(t, Atom):
            return 0
        if isinstance(t, Arrow):
            return holes(t.lhs) + holes(t.rhs)
        return holes(t.left) + holes(t.right)

    n = holes(tree)
    if n != 1:
        raise ParseError(f"context must contain exactly one hole, found {n}", SourceSpan(0, len(text)))
    locate(tree)
    return TypeContext(tuple(frames))


def print_context(c: TypeContext) -> str:
    from .paths import plug

    # reuse the type printer by plugging a sentinel and patching its name
    s = print_type(plug(c, _HOLE))
    return s.replace(_HOLE.name, "[]")


def parse_term(text: str) -> Term:
    c = _Cursor(_lex(text))
    out = _parse_term(c)
    c.expect("EOF")
    return out


def _parse_term(c: _Cursor) -> Term:
    if c.peek().kind == "LAM":
        c.next()
        binders = [c.expect("IDENT").text]
        while c.peek().kind == "IDENT":
            binders.append(c.next().text)
        c.expect("DOT")
        body = _parse_term(c)
        for b in reversed(binders):
            body = Abs(b, body)
        return body
    return _parse_appseq(c)


def _parse_appseq(c: _Cursor) -> Term:
    out = _parse_mprim(c)
    while c.peek().kind in ("IDENT", "LP"):
        out = App(out, _parse_mprim(c))
    return out


def _parse_mprim(c: _Cursor) -> Term:
    t = c.peek()
    if t.kind == "IDENT":
        c.next()
        return Var(t.text)
    if t.kind == "LP":
        c.next()
        inner = _parse_term(c)
        c.expect("RP")
        return inner
    raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.span)


def print_term(m: Term) -> str:
    # levels: 0 = term, 1 = application function, 2 = application argument
    def go(m: Term, level: int) -> str:
        if isinstance(m, Var):
            return m.name
        if isinstance(m, Abs):
            binders = []
            body = m
            while isinstance(body, Abs):
                binders.append(body.binder)
                body = body.body
            s = f"\\{' '.join(binders)}. {go(body, 0)}"
            return f"({s})" if level > 0 else s
        s = f"{go(m.fun, 1)} {go(m.arg, 2)}"
        return f"({s})" if level > 1 else s

    return go(m, 0)


def parse_path(text: str):
    try:
        return parse_path_literal(text)
    except ValueError:
        raise ParseError("path literals use L, R and an optional trailing #",
                         SourceSpan(0, len(text))) from None
