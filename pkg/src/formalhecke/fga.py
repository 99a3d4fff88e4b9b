"""The formal group algebra of a weight lattice, with Weyl action and Demazure operators.

Elements are power series in one variable per fundamental weight (``x1``,
``x2``, ...) plus ``xg`` for the rank-one factor gamma when present.  The
class of x_lambda for any other weight is expanded through the law, so only
basis variables are ever stored.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateWeights, PrecisionExhausted
from .fgl import Law, LawSpec, build_law
from .rootdata import RootDatum, Weight, WeylElement
from .series import Series, series_ring

# laws are expanded this many degrees past the working degree so that g^F and
# mu_F, which lose degrees to division, still cover the working degree
LAW_HEADROOM = 2


@dataclass(frozen=True)
class FGAConfig:
    """Law, root datum and working degree of a formal group algebra."""

    law: LawSpec
    datum: str = "A2"
    degree: int = 6
    hecke: bool = False


class FGAContext:
    """Shared state for one (law, root datum, working degree) triple."""

    def __init__(self, datum: RootDatum, law: Law | LawSpec | str, degree: int):
        if not isinstance(law, Law):
            law = build_law(law, degree + LAW_HEADROOM, check_axioms=degree + LAW_HEADROOM <= 10)
        if law.degree < degree:
            raise PrecisionExhausted(f"law known to degree {law.degree}, need {degree}")
        self.datum = datum
        self.law = law
        self.degree = degree
        names = tuple(f"x{i + 1}" for i in range(datum.rank)) + (("xg",) if datum.hecke else ())
        self.ring = series_ring(names, law.ring)
        self.names = names
        self._x: dict[Weight, Series] = {}
        self._images: dict[WeylElement, dict[str, Series]] = {}
        self._products: dict[tuple, Series] = {}
        self._kappa: dict[Weight, Series] = {}
        self._uvring = series_ring(("u", "v"), law.ring)

    @classmethod
    def from_config(cls, cfg: FGAConfig) -> "FGAContext":
        from .rootdata import build_datum

        return cls(build_datum(cfg.datum, hecke=cfg.hecke), cfg.law, cfg.degree)

    def __repr__(self) -> str:
        return f"FGAContext({self.law.spec.label()}, {self.datum.describe()}, degree={self.degree})"

    # constants --------------------------------------------------------------
    def one(self) -> Series:
        return self.ring.const(1, self.degree)

    def zero(self) -> Series:
        return self.ring.zero(self.degree)

    def const(self, value) -> Series:
        return self.ring.const(value, self.degree)

    def elem(self, series: Series) -> "FGAElem":
        return FGAElem(self, series)

    # x_lambda ---------------------------------------------------------------
    def x(self, weight: Weight) -> Series:
        """The class of x_lambda, folded through the law over the basis variables."""
        weight = tuple(weight)
        if len(weight) != self.datum.width:
            raise ValueError(f"weight {weight} needs {self.datum.width} coordinates")
        hit = self._x.get(weight)
        if hit is not None:
            return hit
        parts = []
        for coord, name in zip(weight, self.names):
            if coord:
                parts.append(self._nmult(coord, name))
        if not parts:
            out = self.zero()
        else:
            out = parts[0]
            for p in parts[1:]:
                out = self.law.apply(out, p).truncate(self.degree)
        self._x[weight] = out
        return out

    def _nmult(self, n: int, name: str) -> Series:
        key = ("nmult", n, name)
        hit = self._products.get(key)
        if hit is None:
            hit = self.law.n_mult(n).truncate(self.degree).rename(self.ring, {"u": name})
            self._products[key] = hit
        return hit

    def x_product(self, weights) -> Series:
        """Product of x_lambda over a multiset of weights (cached)."""
        key = tuple(sorted(weights))
        hit = self._products.get(key)
        if hit is not None:
            return hit
        if not key:
            out = self.one()
        elif len(key) == 1:
            out = self.x(key[0])
        else:
            out = self.x_product(key[:-1]) * self.x(key[-1])
        self._products[key] = out
        return out

    # Weyl action --------------------------------------------------------------
    def act(self, w: WeylElement, phi: Series) -> Series:
        """w(phi): x_i goes to x_{w(omega_i)}, x_gamma is fixed."""
        if w == self.datum.identity or phi.is_constant():
            return phi
        cache = phi.cache
        if cache is None:
            cache = phi.cache = {}
        hit = cache.get(w)
        if hit is not None:
            return hit
        out = phi.subst(self._weyl_images(w), self.ring)
        cache[w] = out
        return out

    def _weyl_images(self, w: WeylElement) -> dict[str, Series]:
        imgs = self._images.get(w)
        if imgs is None:
            imgs = {}
            for i, name in enumerate(self.names):
                imgs[name] = self.x(w.act(self.datum.omega(i)))
            self._images[w] = imgs
        return imgs

    # Demazure and kappa ------------------------------------------------------------
    def demazure(self, root: Weight, phi: Series) -> Series:
        """Delta_alpha(phi) = (phi - s_alpha(phi)) / x_alpha."""
        s = self.datum.reflection_of(root)
        return (phi - self.act(s, phi)).div_exact(self.x(self.datum.lift(root)))

    def c_operator(self, root: Weight, phi: Series) -> Series:
        """C_alpha(phi) = kappa_alpha phi - Delta_alpha(phi)."""
        return self.kappa(root) * phi - self.demazure(root, phi)

    def g_at(self, a: Series, b: Series) -> Series:
        return self.law.g.subst({"u": a, "v": b}, self.ring)

    def kappa(self, root: Weight) -> Series:
        """kappa_alpha = g(x_alpha, x_{-alpha})."""
        root = self.datum.lift(root)
        hit = self._kappa.get(root)
        if hit is None:
            neg = tuple(-c for c in root)
            hit = self.g_at(self.x(root), self.x(neg))
            self._kappa[root] = hit
        return hit

    def kappa_pair(self, lam: Weight, nu: Weight) -> Series:
        """kappa_{lambda,nu} via (g(x_{lambda+nu}, x_{-lambda}) - g(x_lambda, x_{-lambda})) / x_nu."""
        lam, nu = tuple(lam), tuple(nu)
        tot = tuple(a + b for a, b in zip(lam, nu))
        for w, label in ((lam, "lambda"), (nu, "nu"), (tot, "lambda+nu")):
            if not any(w):
                raise DegenerateWeights(f"{label} is zero")
        neg = tuple(-c for c in lam)
        diff = self.g_at(self.x(tot), self.x(neg)) - self.g_at(self.x(lam), self.x(neg))
        return diff.div_exact(self.x(nu))

    def mu_at(self, phi: Series) -> Series:
        return self.law.mu.subst({"u": phi}, self.ring)

    def theta(self) -> Series:
        """Theta_F = mu_F(x_gamma) - mu_F(x_{-gamma})."""
        g = self.datum.gamma()
        return self.mu_at(self.x(g)) - self.mu_at(self.x(tuple(-c for c in g)))

    # convenience ---------------------------------------------------------------
    def simple(self, i: int) -> Weight:
        return self.datum.alpha(i)

    def root(self, *coeffs: int) -> Weight:
        """Weight of sum_k coeffs[k] * alpha_k (gamma coordinate zero)."""
        n = self.datum.rank
        out = [0] * self.datum.width
        for k, c in enumerate(coeffs):
            for r in range(n):
                out[r] += c * self.datum.simple_roots[k][r]
        return tuple(out)


@dataclass(eq=False)
class FGAElem:
    """An element of the formal group algebra with its context."""

    ctx: FGAContext
    series: Series = field(repr=False)

    @property
    def prec(self) -> int:
        return self.series.prec

    def augmentation(self):
        return self.series.constant_term()

    def _wrap(self, s: Series) -> "FGAElem":
        return FGAElem(self.ctx, s)

    def _other(self, o) -> Series:
        return o.series if isinstance(o, FGAElem) else self.ctx.const(o)

    def __add__(self, o):
        return self._wrap(self.series + self._other(o))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.series - self._other(o))

    def __rsub__(self, o):
        return self._wrap(self._other(o) - self.series)

    def __neg__(self):
        return self._wrap(-self.series)

    def __mul__(self, o):
        return self._wrap(self.series * self._other(o))

    __rmul__ = __mul__

    def act(self, w: WeylElement) -> "FGAElem":
        return self._wrap(self.ctx.act(w, self.series))

    def demazure(self, root: Weight) -> "FGAElem":
        return self._wrap(self.ctx.demazure(root, self.series))

    def agrees(self, other: "FGAElem", degree: int) -> bool:
        return self.series.agrees(other.series, degree)

    def __str__(self) -> str:
        return str(self.series)


def x_of_weight(ctx: FGAContext, weight: Weight) -> FGAElem:
    return FGAElem(ctx, ctx.x(weight))


def weyl_act(ctx: FGAContext, w: WeylElement, phi: FGAElem) -> FGAElem:
    return FGAElem(ctx, ctx.act(w, phi.series))


def demazure(ctx: FGAContext, root: Weight, phi: FGAElem) -> FGAElem:
    return FGAElem(ctx, ctx.demazure(root, phi.series))


def c_operator(ctx: FGAContext, root: Weight, phi: FGAElem) -> FGAElem:
    return FGAElem(ctx, ctx.c_operator(root, phi.series))


def kappa_alpha(ctx: FGAContext, root: Weight) -> FGAElem:
    return FGAElem(ctx, ctx.kappa(root))


def kappa_pair(ctx: FGAContext, lam: Weight, nu: Weight) -> FGAElem:
    return FGAElem(ctx, ctx.kappa_pair(lam, nu))
