"""A small expression language for twisted-algebra elements.

Grammar (``*`` and ``/`` bind tighter than ``+`` and ``-``; ``^`` tighter still)::

    expr    := term (("+" | "-") term)*
    term    := unary (("*" | "/") unary)*
    unary   := "-" unary | power
    power   := atom ("^" INT)?
    atom    := NUMBER | "(" expr ")" | "Theta"
             | "x" "(" INT ("," INT)* ")"        weight coordinates, optional trailing gamma
             | "X_" INT | "T_" INT | "d_" WORD    WORD is "e" or digits such as 121
             | "kappa" "(" weight ")" | "mu" "(" weight ")"
             | "kpair" "(" weight "," weight ")"
             | NAME                               a law parameter
    weight  := INT                                  the simple root alpha_INT
             | "[" INT ("," INT)* "]"               explicit coordinates

Division is only by scalars that are either products of x(...) atoms or
have a unit numerator; anything else is rejected with the offending span.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import AlgebraError, NotAUnit
from .fga import FGAContext
from .localized import LocElem
from .twisted import TwistedAlgebra, TwistedElem


class ExprSyntaxError(SyntaxError):
    """Parse failure carrying the byte offset and line/column of the problem."""

    def __init__(self, message: str, source: str, offset: int):
        line = source.count("\n", 0, offset) + 1
        col = offset - (source.rfind("\n", 0, offset) + 1) + 1
        super().__init__(f"{message} at line {line}, column {col}")
        self.msg = message
        self.pos = offset
        self.line = line
        self.column = col

    def __str__(self) -> str:
        return f"{self.msg} at line {self.line}, column {self.column}"


class ElaborationError(AlgebraError):
    """A domain error raised while evaluating the subexpression at ``span``."""

    def __init__(self, message: str, span: tuple[int, int]):
        super().__init__(f"{message} (in characters {span[0]}-{span[1]})")
        self.span = span


# syntax tree -------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    span: tuple[int, int] = field(default=(0, 0), compare=False, kw_only=True)


@dataclass(frozen=True)
class Num(Node):
    text: str


@dataclass(frozen=True)
class Param(Node):
    name: str


@dataclass(frozen=True)
class XAtom(Node):
    coords: tuple[int, ...]


@dataclass(frozen=True)
class Gen(Node):
    kind: str
    index: int


@dataclass(frozen=True)
class Delta(Node):
    word: str


@dataclass(frozen=True)
class Weight(Node):
    root: int | None = None
    coords: tuple[int, ...] | None = None


@dataclass(frozen=True)
class Func(Node):
    name: str
    args: tuple[Weight, ...]


@dataclass(frozen=True)
class Theta(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: int


# lexer -------------------------------------------------------------------------

_TOKENS = re.compile(
    r"(?P<ws>\s+)"
    r"|(?P<gen>[XT]_\d+)"
    r"|(?P<delta>d_(?:e|\d+))"
    r"|(?P<num>\d+)"
    r"|(?P<name>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),\[\]])"
)

FUNCS = {"kappa": 1, "mu": 1, "kpair": 2}


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out, pos = [], 0
    while pos < len(src):
        m = _TOKENS.match(src, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", src, pos)
        if m.lastgroup != "ws":
            out.append(Token(m.lastgroup, m.group(), pos))
        pos = m.end()
    out.append(Token("end", "", len(src)))
    return out


# parser ------------------------------------------------------------------------


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.peek()
        if t.text != text:
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", self.src, t.pos)
        return self.take()

    def error(self, message: str, tok: Token):
        raise ExprSyntaxError(message, self.src, tok.pos)

    def parse(self) -> Node:
        node = self.expr()
        t = self.peek()
        if t.kind != "end":
            self.error(f"unexpected {t.text!r}", t)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.take().text
            right = self.term()
            node = BinOp(op, node, right, span=(node.span[0], right.span[1]))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.peek().text in ("*", "/"):
            op = self.take().text
            right = self.unary()
            node = BinOp(op, node, right, span=(node.span[0], right.span[1]))
        return node

    def unary(self) -> Node:
        t = self.peek()
        if t.text == "-":
            self.take()
            inner = self.unary()
            return Neg(inner, span=(t.pos, inner.span[1]))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek().text == "^":
            self.take()
            t = self.take()
            if t.kind != "num":
                self.error("exponent must be a non-negative integer", t)
            return Pow(base, int(t.text), span=(base.span[0], t.pos + len(t.text)))
        return base

    def _int(self) -> int:
        sign = 1
        if self.peek().text == "-":
            self.take()
            sign = -1
        t = self.take()
        if t.kind != "num":
            self.error("expected an integer", t)
        return sign * int(t.text)

    def _int_list(self, close: str) -> tuple[int, ...]:
        vals = [self._int()]
        while self.peek().text == ",":
            self.take()
            vals.append(self._int())
        self.expect(close)
        return tuple(vals)

    def weight(self) -> Weight:
        t = self.peek()
        if t.text == "[":
            self.take()
            coords = self._int_list("]")
            return Weight(coords=coords, span=(t.pos, self.toks[self.i - 1].pos + 1))
        if t.kind == "num":
            self.take()
            return Weight(root=int(t.text), span=(t.pos, t.pos + len(t.text)))
        self.error("expected a weight: a simple-root index or [c1,...]", t)

    def atom(self) -> Node:
        t = self.peek()
        start = t.pos
        if t.kind == "num":
            self.take()
            return Num(t.text, span=(start, start + len(t.text)))
        if t.text == "(":
            self.take()
            inner = self.expr()
            close = self.expect(")")
            return _respan(inner, (start, close.pos + 1))
        if t.kind == "gen":
            self.take()
            return Gen(t.text[0], int(t.text[2:]), span=(start, start + len(t.text)))
        if t.kind == "delta":
            self.take()
            return Delta(t.text[2:], span=(start, start + len(t.text)))
        if t.kind == "name":
            self.take()
            if t.text == "Theta":
                return Theta(span=(start, start + 5))
            if t.text == "x" and self.peek().text == "(":
                self.take()
                coords = self._int_list(")")
                return XAtom(coords, span=(start, self.toks[self.i - 1].pos + 1))
            if t.text in FUNCS:
                self.expect("(")
                args = [self.weight()]
                while self.peek().text == ",":
                    self.take()
                    args.append(self.weight())
                close = self.expect(")")
                if len(args) != FUNCS[t.text]:
                    raise ExprSyntaxError(f"{t.text} takes {FUNCS[t.text]} argument(s)", self.src, start)
                return Func(t.text, tuple(args), span=(start, close.pos + 1))
            return Param(t.text, span=(start, start + len(t.text)))
        found = "end of input" if t.kind == "end" else repr(t.text)
        self.error(f"unexpected {found}", t)


def _respan(node: Node, span) -> Node:
    return type(node)(**{k: getattr(node, k) for k in node.__dataclass_fields__ if k != "span"}, span=span)


def parse(src: str) -> Node:
    return _Parser(src).parse()


# rendering -----------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def _weight_text(w: Weight) -> str:
    if w.root is not None:
        return str(w.root)
    return "[" + ",".join(str(c) for c in w.coords) + "]"


def render(node: Node) -> str:
    """Canonical text; parsing it gives back an equal tree."""
    return _render(node, 0)


def _render(node: Node, outer: int) -> str:
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Param):
        return node.name
    if isinstance(node, XAtom):
        return "x(" + ",".join(str(c) for c in node.coords) + ")"
    if isinstance(node, Gen):
        return f"{node.kind}_{node.index}"
    if isinstance(node, Delta):
        return f"d_{node.word}"
    if isinstance(node, Theta):
        return "Theta"
    if isinstance(node, Func):
        return f"{node.name}(" + ",".join(_weight_text(a) for a in node.args) + ")"
    if isinstance(node, Neg):
        text = "-" + _render(node.operand, 3)
        return f"({text})" if outer > 1 else text
    if isinstance(node, Pow):
        text = _render(node.base, 4) + "^" + str(node.exponent)
        return f"({text})" if outer > 3 else text
    if isinstance(node, BinOp):
        p = _PREC[node.op]
        text = f"{_render(node.left, p)} {node.op} {_render(node.right, p + 1)}"
        return f"({text})" if p < outer else text
    raise TypeError(f"cannot render {node!r}")


def walk(node: Node):
    yield node
    for name in ("operand", "left", "right", "base"):
        child = getattr(node, name, None)
        if isinstance(child, Node):
            yield from walk(child)
    for a in getattr(node, "args", ()) or ():
        yield a


def needs_gamma(node: Node, rank: int) -> bool:
    """Whether the expression mentions T_i, Theta or a gamma coordinate."""
    for n in walk(node):
        if isinstance(n, (Theta,)) or (isinstance(n, Gen) and n.kind == "T"):
            return True
        if isinstance(n, XAtom) and len(n.coords) == rank + 1:
            return True
    return False


# elaboration ---------------------------------------------------------------------


def elaborate(node: Node, ctx: FGAContext) -> TwistedElem:
    """Evaluate the tree in the twisted algebra of ``ctx``."""
    return _Elab(ctx).run(node)


class _Elab:
    def __init__(self, ctx: FGAContext):
        self.ctx = ctx
        self.alg = TwistedAlgebra(ctx)
        self.datum = ctx.datum

    def run(self, node: Node) -> TwistedElem:
        return self.eval(node)

    def scalar(self, value) -> TwistedElem:
        return TwistedElem(self.ctx, {self.datum.identity: LocElem.of(self.ctx, value)})

    def _index(self, i: int, node: Node) -> int:
        if not 1 <= i <= self.datum.rank:
            raise ElaborationError(f"simple root index {i} outside 1..{self.datum.rank}", node.span)
        return i - 1

    def _weight(self, w: Weight):
        d = self.datum
        if w.root is not None:
            return d.alpha(self._index(w.root, w))
        return self._coords(w.coords, w)

    def _coords(self, coords, node):
        d = self.datum
        if len(coords) == d.rank and d.hecke:
            coords = tuple(coords) + (0,)
        if len(coords) != d.width:
            raise ElaborationError(f"weight needs {d.rank} coordinates (plus an optional gamma one)", node.span)
        if not any(coords):
            raise ElaborationError("x of the zero weight is zero", node.span)
        return tuple(coords)

    def eval(self, node: Node) -> TwistedElem:
        try:
            return self._eval(node)
        except ElaborationError:
            raise
        except (AlgebraError, ValueError, KeyError) as exc:
            raise ElaborationError(f"{type(exc).__name__}: {exc}", node.span) from exc

    def _eval(self, node: Node) -> TwistedElem:
        ctx = self.ctx
        if isinstance(node, Num):
            return self.scalar(ctx.const(int(node.text)))
        if isinstance(node, Param):
            values = ctx.law.values
            if node.name not in values:
                raise ElaborationError(f"unknown parameter {node.name!r}", node.span)
            return self.scalar(ctx.const(values[node.name]))
        if isinstance(node, XAtom):
            return self.scalar(ctx.x(self._coords(node.coords, node)))
        if isinstance(node, Gen):
            i = self._index(node.index, node)
            if node.kind == "T" and not self.datum.hecke:
                raise ElaborationError("T_i needs the gamma factor", node.span)
            return self.alg.generator(node.kind, i)
        if isinstance(node, Delta):
            try:
                w = self.datum.from_word(node.word)
            except ValueError as exc:
                raise ElaborationError(str(exc), node.span) from exc
            return self.alg.delta(w)
        if isinstance(node, Theta):
            if not self.datum.hecke:
                raise ElaborationError("Theta needs the gamma factor", node.span)
            return self.scalar(ctx.theta())
        if isinstance(node, Func):
            ws = [self._weight(a) for a in node.args]
            if node.name == "kappa":
                return self.scalar(ctx.kappa(ws[0]))
            if node.name == "mu":
                return self.scalar(ctx.mu_at(ctx.x(ws[0])))
            return self.scalar(ctx.kappa_pair(ws[0], ws[1]))
        if isinstance(node, Neg):
            return -self.eval(node.operand)
        if isinstance(node, Pow):
            return self.eval(node.base) ** node.exponent
        if isinstance(node, BinOp):
            left = self.eval(node.left)
            if node.op == "/":
                return left.right_scale(self._inverse(node.right))
            right = self.eval(node.right)
            if node.op == "+":
                return left + right
            if node.op == "-":
                return left - right
            return left * right
        raise ElaborationError(f"cannot evaluate {type(node).__name__}", node.span)

    def _inverse(self, node: Node) -> LocElem:
        """Inverse of a scalar divisor: x(...) atoms go to the denominator, units are inverted."""
        if isinstance(node, XAtom):
            return LocElem.inv_x(self.ctx, self._coords(node.coords, node))
        if isinstance(node, BinOp) and node.op == "*":
            return self._inverse(node.left) * self._inverse(node.right)
        value = self.eval(node)
        if set(value.coeffs) - {self.datum.identity}:
            raise ElaborationError("can only divide by scalars", node.span)
        psi = value.coefficient(self.datum.identity)
        c0 = psi.num.constant_term()
        if psi.num.is_zero() or c0.is_zero():
            raise ElaborationError("divisor is not a unit and not a product of x(...) atoms", node.span)
        try:
            inv = psi.num.invert_unit()
        except NotAUnit as exc:
            raise ElaborationError(str(exc), node.span) from exc
        out = LocElem(self.ctx, inv)
        for d in psi.den:
            out = out.mul_x(d)
        return out

