"""CTL formulas: syntax tree, core expansion, measures, parser and printer.

Core connectives are ``Prop``, ``Not``, ``And``, ``EX``, ``EU`` and ``EW``
(existential weak until). Everything else is sugar with a fixed expansion
into the core.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

from .ocp import RESERVED_PROP


class FormulaError(ValueError):
    """Syntax error or illegal use of the reserved proposition."""

    def __init__(self, msg: str, pos: int | None = None):
        self.pos = pos
        super().__init__(msg if pos is None else f"{msg} at position {pos}")


class NotCoreError(TypeError):
    """A core-only operation received a formula that still contains sugar."""


class Formula:
    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Prop(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class EX(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class EU(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class EW(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


# --- sugar ---


@dataclass(frozen=True)
class TrueF(Formula):
    pass


@dataclass(frozen=True)
class FalseF(Formula):
    pass


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)


@dataclass(frozen=True)
class AX(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class EF(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


@dataclass(frozen=True)
class EG(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)


CORE = (Prop, Not, And, EX, EU, EW)

_TT = Prop(RESERVED_PROP)


def subformulas(f: Formula) -> Iterator[Formula]:
    """Post-order walk; every node is yielded after its children."""
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            yield node
            continue
        stack.append((node, True))
        for c in reversed(node.children()):
            stack.append((c, False))


def is_core(f: Formula) -> bool:
    return all(isinstance(g, CORE) for g in subformulas(f))


def disj(a: Formula, b: Formula) -> Formula:
    return Not(And(Not(a), Not(b)))


@lru_cache(maxsize=None)
def expand(f: Formula) -> Formula:
    """Rewrite ``f`` into core connectives only."""
    if isinstance(f, Prop):
        return f
    if isinstance(f, (Not, EX)):
        arg = expand(f.arg)
        return f if arg is f.arg else type(f)(arg)
    if isinstance(f, (And, EU, EW)):
        left, right = expand(f.left), expand(f.right)
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    if isinstance(f, TrueF):
        return Not(_TT)
    if isinstance(f, FalseF):
        return _TT
    if isinstance(f, Or):
        return disj(expand(f.left), expand(f.right))
    if isinstance(f, Implies):
        return disj(Not(expand(f.left)), expand(f.right))
    if isinstance(f, AX):
        return Not(EX(Not(expand(f.arg))))
    if isinstance(f, EF):
        return EU(disj(_TT, Not(_TT)), expand(f.arg))
    if isinstance(f, EG):
        return EW(expand(f.arg), And(_TT, Not(_TT)))
    raise TypeError(f"not a CTL formula: {f!r}")


@lru_cache(maxsize=None)
def size(f: Formula) -> int:
    if isinstance(f, Prop):
        return 1
    if isinstance(f, (Not, EX)):
        return size(f.arg) + 1
    if isinstance(f, (And, EU, EW)):
        return size(f.left) + size(f.right) + 1
    raise NotCoreError(f"size is defined on core formulas only, got {type(f).__name__}")


@lru_cache(maxsize=None)
def lud(f: Formula) -> int:
    """Leftward until depth."""
    if isinstance(f, Prop):
        return 0
    if isinstance(f, (Not, EX)):
        return lud(f.arg)
    if isinstance(f, And):
        return max(lud(f.left), lud(f.right))
    if isinstance(f, (EU, EW)):
        return max(lud(f.left) + 1, lud(f.right))
    raise NotCoreError(f"lud is defined on core formulas only, got {type(f).__name__}")


def propositions(f: Formula) -> set[str]:
    return {g.name for g in subformulas(f) if isinstance(g, Prop)}


# --- parsing ---------------------------------------------------------------

KEYWORDS = frozenset({"true", "false", "EX", "AX", "EF", "EG", "E", "U", "W"})

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<sym>[!&|()\[\]]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while True:
        while pos < n and text[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("eof", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_reserved: bool):
        self.toks = _tokenize(text)
        self.i = 0
        self.allow_reserved = allow_reserved

    def peek(self):
        return self.toks[self.i]

    def take(self, value: str | None = None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            shown = tok[1] or "end of input"
            raise FormulaError(f"expected {value!r}, found {shown!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.implication()
        tok = self.peek()
        if tok[0] != "eof":
            raise FormulaError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def implication(self):
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self):
        f = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self):
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self):
        kind, val, pos = self.peek()
        if val == "!":
            self.take()
            return Not(self.unary())
        if val in ("EX", "AX", "EF", "EG"):
            self.take()
            return {"EX": EX, "AX": AX, "EF": EF, "EG": EG}[val](self.unary())
        if val == "E":
            self.take()
            self.take("[")
            left = self.implication()
            op = self.take()
            if op[1] not in ("U", "W"):
                raise FormulaError(f"expected 'U' or 'W', found {op[1]!r}", op[2])
            right = self.implication()
            self.take("]")
            return (EU if op[1] == "U" else EW)(left, right)
        if val == "(":
            self.take()
            f = self.implication()
            self.take(")")
            return f
        if val == "true":
            self.take()
            return TrueF()
        if val == "false":
            self.take()
            return FalseF()
        if kind == "ident" and val not in KEYWORDS:
            self.take()
            if val == RESERVED_PROP and not self.allow_reserved:
                raise FormulaError(f"proposition {RESERVED_PROP!r} is reserved", pos)
            return Prop(val)
        raise FormulaError(f"unexpected {val or 'end of input'!r}", pos)


def parse_formula(text: str, *, allow_reserved: bool = False) -> Formula:
    return _Parser(text, allow_reserved).parse()


# --- printing ----------------------------------------------------------------

# binding strength: higher binds tighter
_LEVEL = {Implies: 1, Or: 2, And: 3}


def _level(f: Formula) -> int:
    return _LEVEL.get(type(f), 4)


def format_formula(f: Formula) -> str:
    """Canonical ASCII rendering; ``parse_formula`` inverts it exactly."""
    if isinstance(f, Prop):
        return f.name
    if isinstance(f, TrueF):
        return "true"
    if isinstance(f, FalseF):
        return "false"
    if isinstance(f, (Not, EX, AX, EF, EG)):
        op = {Not: "!", EX: "EX ", AX: "AX ", EF: "EF ", EG: "EG "}[type(f)]
        inner = format_formula(f.arg)
        if _level(f.arg) < 4:
            inner = f"({inner})"
        return op + inner
    if isinstance(f, (EU, EW)):
        op = "U" if isinstance(f, EU) else "W"
        return f"E[ {format_formula(f.left)} {op} {format_formula(f.right)} ]"
    lvl = _level(f)
    op = {And: "&", Or: "|", Implies: "->"}[type(f)]
    left, right = format_formula(f.left), format_formula(f.right)
    if isinstance(f, Implies):
        # right-associative
        if _level(f.left) <= lvl:
            left = f"({left})"
        if _level(f.right) < lvl:
            right = f"({right})"
    else:
        if _level(f.left) < lvl:
            left = f"({left})"
        if _level(f.right) <= lvl:
            right = f"({right})"
    return f"{left} {op} {right}"
