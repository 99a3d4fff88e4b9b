"""Coefficient ring: exact rationals extended by named formal parameters.

A :class:`ParamRing` fixes the parameter names and which of them are
invertible.  A :class:`ParamElement` is a sparse Laurent polynomial in those
parameters with ``gmpy2.mpq`` coefficients; negative exponents are only
allowed on invertible parameters.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from gmpy2 import mpq

from .errors import NotAUnit, RingMismatch

Number = int | Fraction | str


def to_mpq(value) -> mpq:
    """Convert an int, Fraction, mpq or ``"p/q"`` string to ``mpq``."""
    if isinstance(value, str):
        value = value.strip()
        if "/" in value:
            p, q = value.split("/")
            return mpq(int(p), int(q))
        return mpq(int(value))
    if isinstance(value, Fraction):
        return mpq(value.numerator, value.denominator)
    return mpq(value)


def format_rational(c: mpq) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class ParamRing:
    """Ordered parameter names with per-parameter invertibility flags."""

    names: tuple[str, ...] = ()
    invertible: tuple[bool, ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.invertible):
            raise ValueError("names and invertible flags differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate parameter names in {self.names}")
        for n in self.names:
            if not n or not n.isidentifier():
                raise ValueError(f"invalid parameter name {n!r}")

    @classmethod
    def parse(cls, spec: str | Iterable[str]) -> "ParamRing":
        """Build from ``name[:inv]`` tokens, e.g. ``"beta:inv"`` or ``"a1,a2"``."""
        if isinstance(spec, str):
            tokens = [t for t in spec.replace(" ", ",").split(",") if t]
        else:
            tokens = list(spec)
        names, inv = [], []
        for tok in tokens:
            name, _, flag = tok.partition(":")
            if flag not in ("", "inv"):
                raise ValueError(f"unknown parameter flag {flag!r} in {tok!r}")
            names.append(name)
            inv.append(flag == "inv")
        return cls(tuple(names), tuple(inv))

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def tokens(self) -> list[str]:
        return [n + (":inv" if f else "") for n, f in zip(self.names, self.invertible)]

    def zero(self) -> "ParamElement":
        return ParamElement(self, {})

    def one(self) -> "ParamElement":
        return self.const(1)

    def const(self, value) -> "ParamElement":
        c = to_mpq(value)
        return ParamElement(self, {(0,) * len(self.names): c} if c else {})

    def gen(self, name: str, power: int = 1) -> "ParamElement":
        i = self.index(name)
        if power < 0 and not self.invertible[i]:
            raise NotAUnit(f"parameter {name} is not invertible")
        e = [0] * len(self.names)
        e[i] = power
        return ParamElement(self, {tuple(e): mpq(1)})


class ParamElement:
    """Immutable sparse Laurent polynomial over a :class:`ParamRing`."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: ParamRing, terms: Mapping[tuple[int, ...], object]):
        clean = {}
        for e, c in terms.items():
            c = c if isinstance(c, mpq) else to_mpq(c)
            if c:
                for k, flag in zip(e, ring.invertible):
                    if k < 0 and not flag:
                        raise NotAUnit("negative exponent on a non-invertible parameter")
                clean[tuple(e)] = c
        self.ring = ring
        self.terms = clean
        self._hash = None

    def _check(self, other: "ParamElement") -> None:
        if self.ring != other.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def _coerce(self, other) -> "ParamElement":
        if isinstance(other, ParamElement):
            self._check(other)
            return other
        return self.ring.const(other)

    def __add__(self, other) -> "ParamElement":
        other = self._coerce(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return ParamElement(self.ring, out)

    __radd__ = __add__

    def __neg__(self) -> "ParamElement":
        return ParamElement(self.ring, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "ParamElement":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "ParamElement":
        return self._coerce(other) - self

    def __mul__(self, other) -> "ParamElement":
        other = self._coerce(other)
        out: dict[tuple[int, ...], mpq] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return ParamElement(self.ring, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ParamElement":
        if n < 0:
            return self.invert() ** (-n)
        out = self.ring.one()
        for _ in range(n):
            out = out * self
        return out

    def invert(self) -> "ParamElement":
        """Inverse of a unit monomial; raises :class:`NotAUnit` otherwise."""
        if len(self.terms) != 1:
            raise NotAUnit(f"{self} is not a monomial unit")
        (e, c), = self.terms.items()
        for k, flag, name in zip(e, self.ring.invertible, self.ring.names):
            if k and not flag:
                raise NotAUnit(f"{self} involves non-invertible parameter {name}")
        return ParamElement(self.ring, {tuple(-k for k in e): 1 / c})

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> mpq:
        return self.terms.get((0,) * len(self.ring.names), mpq(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, ParamElement):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, (int, Fraction, mpq)):
            return self.terms == self.ring.const(other).terms
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[tuple[int, ...], mpq]]:
        """Terms by total degree, then lexicographically with earlier names first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), [-k for k in t[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return join_signed(monomial_text(c, self.ring.names, e) for e, c in self.sorted_terms())

    def __repr__(self) -> str:
        return f"ParamElement({self})"


def monomial_text(c: mpq, names: Iterable[str], exps: Iterable[int]) -> str:
    """Render ``c * prod name^e`` as e.g. ``-3/2*beta^2*u``."""
    factors = []
    for n, k in zip(names, exps):
        if k == 1:
            factors.append(n)
        elif k:
            factors.append(f"{n}^{k}")
    if not factors:
        return format_rational(c)
    if c == 1:
        return "*".join(factors)
    if c == -1:
        return "-" + "*".join(factors)
    return format_rational(c) + "*" + "*".join(factors)


def join_signed(parts: Iterable[str]) -> str:
    out = ""
    for p in parts:
        if not out:
            out = p
        elif p.startswith("-"):
            out += " - " + p[1:]
        else:
            out += " + " + p
    return out or "0"
