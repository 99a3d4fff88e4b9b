"""Fractions over the formal group algebra with denominators that are products of x_lambda.

A :class:`LocElem` is ``num / prod(x_lambda for lambda in den)``.  Its
absolute precision is ``num.prec - len(den)``: every x_lambda with lambda
nonzero has valuation one, so that many low degrees of the numerator are
absorbed by the denominator.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import DegenerateWeights, NotAUnit, NotDivisible, PrecisionExhausted
from .fga import FGAContext, FGAElem
from .rootdata import Weight, WeylElement
from .series import Series


def _sorted(weights) -> tuple:
    return tuple(sorted(weights))


def _multiset_minus(a: tuple, b: tuple) -> tuple:
    c = Counter(a)
    c.subtract(Counter(b))
    return _sorted(k for k, n in c.items() for _ in range(max(n, 0)))


def _multiset_lcm(a: tuple, b: tuple) -> tuple:
    c = Counter(a) | Counter(b)
    return _sorted(c.elements())


def _multiset_common(a: tuple, b: tuple) -> tuple:
    c = Counter(a) & Counter(b)
    return _sorted(c.elements())


class LocElem:
    """An element of the localisation num / prod x_lambda."""

    __slots__ = ("ctx", "num", "den")

    def __init__(self, ctx: FGAContext, num: Series, den=()):
        den = _sorted(tuple(w) for w in den)
        for w in den:
            if not any(w):
                raise DegenerateWeights("zero weight in a denominator")
        self.ctx = ctx
        self.num = num
        self.den = den

    # construction ---------------------------------------------------------
    @classmethod
    def of(cls, ctx: FGAContext, value) -> "LocElem":
        if isinstance(value, LocElem):
            return value
        if isinstance(value, FGAElem):
            return cls(ctx, value.series)
        if isinstance(value, Series):
            return cls(ctx, value)
        return cls(ctx, ctx.const(value))

    @classmethod
    def inv_x(cls, ctx: FGAContext, weight: Weight) -> "LocElem":
        """1 / x_lambda."""
        return cls(ctx, ctx.one(), (tuple(weight),))

    @property
    def precision(self) -> int:
        """Absolute degree through which the value is known."""
        return self.num.prec - len(self.den)

    def is_zero(self) -> bool:
        """Zero to its known precision."""
        return self.num.is_zero()

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> "LocElem":
        return other if isinstance(other, LocElem) else LocElem.of(self.ctx, other)

    def _padded(self, target: tuple) -> Series:
        extra = _multiset_minus(target, self.den)
        if not extra:
            return self.num
        return self.num * self.ctx.x_product(extra)

    def __add__(self, other) -> "LocElem":
        other = self._coerce(other)
        if self.den == other.den:
            return LocElem(self.ctx, self.num + other.num, self.den)
        lcm = _multiset_lcm(self.den, other.den)
        return LocElem(self.ctx, self._padded(lcm) + other._padded(lcm), lcm)

    __radd__ = __add__

    def __neg__(self) -> "LocElem":
        return LocElem(self.ctx, -self.num, self.den)

    def __sub__(self, other) -> "LocElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "LocElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "LocElem":
        if isinstance(other, LocElem):
            return LocElem(self.ctx, self.num * other.num, self.den + other.den)
        if isinstance(other, (FGAElem, Series)):
            s = other.series if isinstance(other, FGAElem) else other
            return LocElem(self.ctx, self.num * s, self.den)
        return LocElem(self.ctx, self.num * other, self.den)

    __rmul__ = __mul__

    def mul_x(self, weight: Weight) -> "LocElem":
        """Multiply by x_lambda, cancelling a denominator factor when present."""
        weight = tuple(weight)
        if weight in self.den:
            den = list(self.den)
            den.remove(weight)
            return LocElem(self.ctx, self.num, den)
        return LocElem(self.ctx, self.num * self.ctx.x(weight), self.den)

    def div_x(self, weight: Weight) -> "LocElem":
        return LocElem(self.ctx, self.num, self.den + (tuple(weight),))

    def div_series(self, s: Series) -> "LocElem":
        """Exact division of the numerator by a series coprime to every x_lambda."""
        return LocElem(self.ctx, self.num.div_exact(s), self.den)

    def act(self, w: WeylElement) -> "LocElem":
        """w(num) / prod x_{w(lambda)}."""
        if w == self.ctx.datum.identity:
            return self
        return LocElem(self.ctx, self.ctx.act(w, self.num), (w.act(d) for d in self.den))

    def truncate(self, precision: int) -> "LocElem":
        return LocElem(self.ctx, self.num.truncate(precision + len(self.den)), self.den)

    def reduce(self) -> "LocElem":
        """Cancel every denominator factor that divides the numerator."""
        num, den = self.num, list(self.den)
        kept = []
        for d in den:
            try:
                num = num.div_exact(self.ctx.x(d))
            except (NotDivisible, PrecisionExhausted):
                kept.append(d)
        return LocElem(self.ctx, num, kept)

    def render(self) -> str:
        body = self.num.render()
        if not self.den:
            return body
        factors = "*".join("x(" + ",".join(str(c) for c in d) + ")" for d in self.den)
        return f"({body}) / {factors}"

    def __str__(self) -> str:
        return self.render()

    __repr__ = __str__


def loc_add(a: LocElem, b: LocElem) -> LocElem:
    return a + b


def loc_mul(a: LocElem, b: LocElem) -> LocElem:
    return a * b


def cross_terms(a: LocElem, b: LocElem) -> tuple[Series, Series, int]:
    """Numerators of a and b over their least common denominator, and its size."""
    common = _multiset_common(a.den, b.den)
    ra = _multiset_minus(a.den, common)
    rb = _multiset_minus(b.den, common)
    left = a.num * a.ctx.x_product(rb) if rb else a.num
    right = b.num * b.ctx.x_product(ra) if ra else b.num
    return left, right, len(common) + len(ra) + len(rb)


def loc_difference(a: LocElem, b: LocElem, degree: int):
    """First discrepancy between a and b through absolute degree ``degree``, or None."""
    left, right, size = cross_terms(a, b)
    return left.first_difference(right, degree + size)


def loc_eq(a: LocElem, b: LocElem, degree: int) -> bool:
    """a == b through absolute degree ``degree``; raises PrecisionExhausted when unknowable."""
    return loc_difference(a, b, degree) is None


@dataclass
class Member:
    quotient: FGAElem
    status = "member"


@dataclass
class NotMember:
    degree: int | None
    status = "not-member"


@dataclass
class Undecided:
    reason: str
    status = "undecided"


def membership_in_fga(a: LocElem, degree: int):
    """Divide the numerator by each denominator factor in turn.

    Member(quotient) when every division succeeds and the quotient is known
    through ``degree``; NotMember when some division has no solution within
    the known range; Undecided when precision runs out first.
    """
    num = a.num
    try:
        for d in a.den:
            num = num.div_exact(a.ctx.x(d))
    except NotDivisible as exc:
        return NotMember(exc.degree)
    except PrecisionExhausted as exc:
        return Undecided(str(exc))
    if num.prec < degree:
        return Undecided(f"quotient known to degree {num.prec}, need {degree}")
    return Member(FGAElem(a.ctx, num.truncate(degree)))


def invert_kappa(ctx: FGAContext, root: Weight) -> LocElem:
    """kappa_alpha^{-1} as a unit series; NotAUnit when a11 is not invertible."""
    k = ctx.kappa(root)
    c0 = k.constant_term()
    if c0.is_zero():
        raise NotAUnit("kappa_alpha has zero constant term (a11 = 0)")
    return LocElem(ctx, k.invert_unit())


def loc_demazure(ctx: FGAContext, root: Weight, psi: LocElem) -> LocElem:
    """Delta_alpha on the localisation: (psi - s_alpha(psi)) / x_alpha."""
    s = ctx.datum.reflection_of(root)
    return (psi - psi.act(s)).div_x(ctx.datum.lift(root))


def fraction_sum(ctx: FGAContext, terms) -> LocElem:
    """sum of sign / prod x_lambda over ``terms`` given as (sign, [weights])."""
    total = LocElem.of(ctx, 0)
    for sign, weights in terms:
        total = total + LocElem(ctx, ctx.const(sign), weights)
    return total
