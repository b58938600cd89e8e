"""Formulas of the multi-agent modal language K_n.

Formulas are immutable, hashable values.  ``And``/``Or`` are n-ary and
flattened on construction; ``Bot`` is a first-class constant.  Variables and
agents are identified by their (interned) names.
"""

from __future__ import annotations

import re
import sys
from typing import Iterable, Iterator, Sequence

__all__ = [
    "Formula", "Top", "Bot", "Var", "Not", "And", "Or", "Box", "Dia",
    "TOP", "BOT", "conj", "disj", "neg", "implies", "iff",
    "ParseError", "UnknownAgentError", "parse", "to_str",
    "size", "depth", "variables", "agents", "to_nnf", "is_nnf",
    "is_propositional", "subformulas", "substitute",
]


class Formula:
    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if type(other) is not type(self) or other._hash != self._hash:
            return False
        return self._key() == other._key()

    def __ne__(self, other) -> bool:
        return not self == other

    def __str__(self) -> str:
        return to_str(self)

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {to_str(self)}>"

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)

    @property
    def children(self) -> tuple["Formula", ...]:
        return ()


class Top(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("T")

    def _key(self):
        return ()


class Bot(Formula):
    __slots__ = ()

    def __init__(self):
        self._hash = hash("F")

    def _key(self):
        return ()


TOP = Top()
BOT = Bot()


class Var(Formula):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = sys.intern(name)
        self._hash = hash(("v", self.name))

    def _key(self):
        return (self.name,)


class Not(Formula):
    __slots__ = ("arg",)

    def __init__(self, arg: Formula):
        self.arg = arg
        self._hash = hash(("n", arg._hash))

    def _key(self):
        return (self.arg,)

    @property
    def children(self):
        return (self.arg,)


class _Nary(Formula):
    __slots__ = ("args",)
    _tag = ""

    def __init__(self, args: Iterable[Formula]):
        flat: list[Formula] = []
        cls = type(self)
        for a in args:
            if type(a) is cls:
                flat.extend(a.args)
            else:
                flat.append(a)
        if len(flat) < 2:
            raise ValueError(f"{cls.__name__} needs at least two operands")
        self.args = tuple(flat)
        self._hash = hash((self._tag, self.args))

    def _key(self):
        return self.args

    @property
    def children(self):
        return self.args


class And(_Nary):
    __slots__ = ()
    _tag = "a"


class Or(_Nary):
    __slots__ = ()
    _tag = "o"


class _Modal(Formula):
    __slots__ = ("agent", "arg")
    _tag = ""

    def __init__(self, agent: str, arg: Formula):
        self.agent = sys.intern(agent)
        self.arg = arg
        self._hash = hash((self._tag, self.agent, arg._hash))

    def _key(self):
        return (self.agent, self.arg)

    @property
    def children(self):
        return (self.arg,)


class Box(_Modal):
    __slots__ = ()
    _tag = "b"


class Dia(_Modal):
    __slots__ = ()
    _tag = "d"


# -- smart constructors -------------------------------------------------------

def conj(*fs: Formula) -> Formula:
    """Conjunction with unit/zero simplification (``TOP``/``BOT``)."""
    out: list[Formula] = []
    seen = set()
    for f in fs:
        parts = f.args if isinstance(f, And) else (f,)
        for p in parts:
            if p is TOP or isinstance(p, Top):
                continue
            if isinstance(p, Bot):
                return BOT
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return TOP
    if len(out) == 1:
        return out[0]
    return And(out)


def disj(*fs: Formula) -> Formula:
    out: list[Formula] = []
    seen = set()
    for f in fs:
        parts = f.args if isinstance(f, Or) else (f,)
        for p in parts:
            if isinstance(p, Bot):
                continue
            if isinstance(p, Top):
                return TOP
            if p not in seen:
                seen.add(p)
                out.append(p)
    if not out:
        return BOT
    if len(out) == 1:
        return out[0]
    return Or(out)


def neg(f: Formula) -> Formula:
    """Negation that folds constants and double negation."""
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, Not):
        return f.arg
    return Not(f)


def implies(a: Formula, b: Formula) -> Formula:
    return Or((Not(a), b))


def iff(a: Formula, b: Formula) -> Formula:
    return And((Or((Not(a), b)), Or((Not(b), a))))


# -- measures -----------------------------------------------------------------

def size(f: Formula) -> int:
    """Occurrences of variables, constants, connectives and modalities.

    An n-ary conjunction or disjunction counts as n-1 binary connectives.
    """
    stack = [f]
    n = 0
    while stack:
        g = stack.pop()
        if isinstance(g, _Nary):
            n += len(g.args) - 1
            stack.extend(g.args)
        elif isinstance(g, (Not, _Modal)):
            n += 1
            stack.append(g.arg)
        else:
            n += 1
    return n


def depth(f: Formula) -> int:
    """Maximal nesting of modal operators."""
    if isinstance(f, _Modal):
        return 1 + depth(f.arg)
    best = 0
    for c in f.children:
        d = depth(c)
        if d > best:
            best = d
    return best


def variables(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            out.add(g.name)
        else:
            stack.extend(g.children)
    return frozenset(out)


def agents(f: Formula) -> frozenset[str]:
    out: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, _Modal):
            out.add(g.agent)
        stack.extend(g.children)
    return frozenset(out)


def is_propositional(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, _Modal):
            return False
        stack.extend(g.children)
    return True


def subformulas(f: Formula) -> Iterator[Formula]:
    """Pre-order walk over all subformula occurrences."""
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(reversed(g.children))


def substitute(f: Formula, mapping: dict[str, Formula]) -> Formula:
    """Replace variables by formulas (no simplification)."""
    if isinstance(f, Var):
        return mapping.get(f.name, f)
    if isinstance(f, Not):
        return Not(substitute(f.arg, mapping))
    if isinstance(f, _Nary):
        return type(f)(substitute(a, mapping) for a in f.args)
    if isinstance(f, _Modal):
        return type(f)(f.agent, substitute(f.arg, mapping))
    return f


# -- negation normal form -----------------------------------------------------

def to_nnf(f: Formula) -> Formula:
    """Push negations down to variables.

    Uses De Morgan, double negation and the duality of box and diamond.
    Constants are negated in place (``~true`` becomes ``false``).
    """
    return _nnf(f, True)


def _nnf(f: Formula, pos: bool) -> Formula:
    if isinstance(f, Var):
        return f if pos else Not(f)
    if isinstance(f, Top):
        return TOP if pos else BOT
    if isinstance(f, Bot):
        return BOT if pos else TOP
    if isinstance(f, Not):
        return _nnf(f.arg, not pos)
    if isinstance(f, And):
        args = [_nnf(a, pos) for a in f.args]
        return And(args) if pos else Or(args)
    if isinstance(f, Or):
        args = [_nnf(a, pos) for a in f.args]
        return Or(args) if pos else And(args)
    if isinstance(f, Box):
        return Box(f.agent, _nnf(f.arg, pos)) if pos else Dia(f.agent, _nnf(f.arg, False))
    if isinstance(f, Dia):
        return Dia(f.agent, _nnf(f.arg, pos)) if pos else Box(f.agent, _nnf(f.arg, False))
    raise TypeError(f"not a formula: {f!r}")


def is_nnf(f: Formula) -> bool:
    for g in subformulas(f):
        if isinstance(g, Not) and not isinstance(g.arg, Var):
            return False
    return True


# -- printing -----------------------------------------------------------------

_PREC_OR, _PREC_AND, _PREC_UNARY = 1, 2, 3


def to_str(f: Formula) -> str:
    """Render in the surface grammar; ``parse(to_str(f)) == f``."""
    return _show(f, 0)


def _show(f: Formula, ctx: int) -> str:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Not):
        return "~" + _show(f.arg, _PREC_UNARY)
    if isinstance(f, Box):
        return f"[{f.agent}]" + _show(f.arg, _PREC_UNARY)
    if isinstance(f, Dia):
        return f"<{f.agent}>" + _show(f.arg, _PREC_UNARY)
    if isinstance(f, And):
        # a nested Or needs parens; a nested And cannot occur (flattened)
        s = " & ".join(_show(a, _PREC_AND + 1) for a in f.args)
        return f"({s})" if ctx > _PREC_AND else s
    if isinstance(f, Or):
        s = " | ".join(_show(a, _PREC_OR + 1) for a in f.args)
        return f"({s})" if ctx > _PREC_OR else s
    raise TypeError(f"not a formula: {f!r}")


# -- parsing ------------------------------------------------------------------

class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


class UnknownAgentError(ParseError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<iff><->)
  | (?P<imp>->)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>[~&|()\[\]<>])
""", re.VERBOSE)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", *_linecol(text, pos))
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            toks.append((val if kind in ("op", "iff", "imp") else kind, val, pos))
        pos = m.end()
    toks.append(("eof", "", len(text)))
    return toks


def _linecol(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, roster: Sequence[str] | None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.roster = None if roster is None else set(roster)

    def peek(self) -> str:
        return self.toks[self.i][0]

    def fail(self, msg: str, cls=ParseError):
        raise cls(msg, *_linecol(self.text, self.toks[self.i][2]))

    def expect(self, kind: str) -> str:
        if self.peek() != kind:
            got = self.toks[self.i][1] or "end of input"
            self.fail(f"expected {kind!r}, got {got!r}")
        val = self.toks[self.i][1]
        self.i += 1
        return val

    def formula(self) -> Formula:
        left = self.imp()
        while self.peek() == "<->":
            self.i += 1
            left = iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek() == "->":
            self.i += 1
            return implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        parts = [self.conj()]
        while self.peek() == "|":
            self.i += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(parts)

    def conj(self) -> Formula:
        parts = [self.unary()]
        while self.peek() == "&":
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(parts)

    def agent(self, close: str) -> str:
        if self.peek() != "ident":
            self.fail("expected agent name")
        name = self.toks[self.i][1]
        if self.roster is not None and name not in self.roster:
            self.fail(f"unknown agent {name!r}", UnknownAgentError)
        self.i += 1
        self.expect(close)
        return name

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "~":
            self.i += 1
            return Not(self.unary())
        if kind == "[":
            self.i += 1
            a = self.agent("]")
            return Box(a, self.unary())
        if kind == "<":
            self.i += 1
            a = self.agent(">")
            return Dia(a, self.unary())
        if kind == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if kind == "ident":
            name = self.toks[self.i][1]
            self.i += 1
            if name == "true":
                return TOP
            if name == "false":
                return BOT
            return Var(name)
        got = self.toks[self.i][1] or "end of input"
        self.fail(f"unexpected {got!r}")


def parse(text: str, roster: Sequence[str] | None = None) -> Formula:
    """Parse the surface syntax.

    ``->`` and ``<->`` are desugared.  When ``roster`` is given, any other
    agent name raises :class:`UnknownAgentError`.

    >>> to_str(parse("[i](p | q) & <i>~q"))
    '[i](p | q) & <i>~q'
    """
    p = _Parser(text, roster)
    f = p.formula()
    if p.peek() != "eof":
        p.fail(f"trailing input {p.toks[p.i][1]!r}")
    return f
