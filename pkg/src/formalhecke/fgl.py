"""Formal group laws and their derived series.

Builtin kinds: additive, multiplicative, lorentz, elliptic (Tate model),
universal (free logarithm coefficients over Q) and custom.  Parameters are
either symbolic (optionally invertible) or specialised to rationals; see
:class:`LawSpec`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .coeffring import ParamElement, ParamRing, to_mpq
from .errors import AxiomViolation, InternalInconsistency, MissingParam, NotDivisible
from .series import Series, series_ring

KINDS = ("additive", "multiplicative", "lorentz", "elliptic", "universal", "custom")
ELLIPTIC_PARAMS = ("a1", "a2", "a3", "a4", "a6")


def default_param_names(kind: str, degree: int, terms: int | None = None) -> tuple[str, ...]:
    if kind in ("multiplicative", "lorentz"):
        return ("beta",)
    if kind == "elliptic":
        return ELLIPTIC_PARAMS
    if kind == "universal":
        k = degree - 1 if terms is None else terms
        return tuple(f"m{i}" for i in range(1, k + 1))
    return ()


@dataclass(frozen=True)
class LawSpec:
    """Hashable law descriptor.

    ``params`` maps a parameter name to ``"sym"`` (symbolic), ``"inv"``
    (symbolic and invertible) or a rational literal such as ``"0"`` or
    ``"1/2"``.  Unlisted parameters are symbolic.  For the universal law,
    ``terms`` fixes how many logarithm coefficients m1..mk are free; by
    default it is one less than the law degree.  ``series`` holds the text
    of a custom law.
    """

    kind: str
    params: tuple[tuple[str, str], ...] = ()
    terms: int | None = None
    series: str | None = None

    @classmethod
    def make(cls, kind: str, terms: int | None = None, series: str | None = None, **params: str) -> "LawSpec":
        if kind not in KINDS:
            raise ValueError(f"unknown law kind {kind!r}; expected one of {KINDS}")
        return cls(kind, tuple(sorted((k, str(v)) for k, v in params.items())), terms, series)

    def with_params(self, **params: str) -> "LawSpec":
        merged = dict(self.params)
        merged.update({k: str(v) for k, v in params.items()})
        return LawSpec(self.kind, tuple(sorted(merged.items())), self.terms, self.series)

    def param_dict(self) -> dict[str, str]:
        return dict(self.params)

    def describe(self) -> dict:
        out = {"kind": self.kind, "params": self.param_dict()}
        if self.terms is not None:
            out["terms"] = self.terms
        if self.series is not None:
            out["series"] = self.series
        return out

    def label(self) -> str:
        bits = [f"{k}={v}" for k, v in self.params]
        if self.terms is not None:
            bits.append(f"terms={self.terms}")
        return self.kind + (f"[{','.join(bits)}]" if bits else "")


@dataclass
class KappaClass:
    zero: bool

    def __str__(self) -> str:
        return "Zero" if self.zero else "NonZero"


class Law:
    """A formal group law F(u, v) known to total degree ``degree``."""

    def __init__(self, spec: LawSpec, ring: ParamRing, F: Series, values: dict[str, ParamElement]):
        self.spec = spec
        self.kind = spec.kind
        self.ring = ring
        self.F = F
        self.degree = F.prec
        self.values = values
        self.uv = F.ring
        self.uring = series_ring(("u",), ring)
        self._nmult: dict[int, Series] = {}

    def __repr__(self) -> str:
        return f"Law({self.spec.label()}, degree={self.degree})"

    # helpers -----------------------------------------------------------
    def u(self, prec: int | None = None) -> Series:
        return self.uring.var("u", self.degree if prec is None else prec)

    def coeff(self, i: int, j: int) -> ParamElement:
        """The coefficient a_ij of u^i v^j in F."""
        return self.F.coefficient((i, j))

    def apply(self, a: Series, b: Series) -> Series:
        """F(a, b) for series a, b in a common ring (both of positive valuation)."""
        return self.F.subst({"u": a, "v": b}, a.ring)

    # derived series ------------------------------------------------------
    @cached_property
    def inverse(self) -> Series:
        """Formal inverse i(u) with F(u, i(u)) = 0, by precision-doubling Newton steps."""
        D = self.degree
        u = self.u()
        Fv = self.F.derivative("v")
        i = -self.u(1)
        p = 1
        while p < D:
            p = min(2 * p, D)
            i = Series(i.ring, i.terms, p)
            val = self.F.subst({"u": u, "v": i}, self.uring).truncate(p)
            slope = Fv.subst({"u": u, "v": i}, self.uring).truncate(p)
            step = val.mul_to(slope.invert_unit(), p)
            i = Series(i.ring, (i - step).terms, p)
        check = self.F.subst({"u": u, "v": i}, self.uring)
        if not check.truncate(D).is_zero():
            raise InternalInconsistency("formal inverse failed to annihilate F")
        return i

    @cached_property
    def mu(self) -> Series:
        """mu_F(u) = (-_F u) / (-u)."""
        return self.inverse.div_exact(-self.u())

    @cached_property
    def g(self) -> Series:
        """g^F(u, v) = (u + v - F(u, v)) / (u v)."""
        u = self.uv.var("u", self.degree)
        v = self.uv.var("v", self.degree)
        return (u + v - self.F).div_exact(u * v)

    @cached_property
    def log(self) -> Series:
        """Logarithm: integral of 1 / F_v(u, 0)."""
        dv = self.F.derivative("v").set_zero("v").rename(self.uring, {"u": "u", "v": "u"})
        return dv.invert_unit().integrate("u")

    @cached_property
    def exp(self) -> Series:
        """Exponential e_F, the compositional inverse of the logarithm."""
        return self.log.compose_inverse()

    @cached_property
    def kappa_class(self) -> KappaClass:
        mu_trivial = (self.mu - 1).is_zero()
        u = self.uv.var("u", self.degree)
        v = self.uv.var("v", self.degree)
        try:
            self.F.div_exact(u + v)
            divisible = True
        except NotDivisible:
            divisible = False
        if mu_trivial != divisible:
            raise InternalInconsistency(
                f"mu_F = 1 is {mu_trivial} but divisibility of F by u+v is {divisible}"
            )
        return KappaClass(mu_trivial)

    def n_mult(self, n: int) -> Series:
        """n ._F u for any integer n."""
        if n in self._nmult:
            return self._nmult[n]
        u = self.u()
        if n == 0:
            out = self.uring.zero(self.degree)
        elif n == 1:
            out = u
        elif n > 1:
            out = self.F.subst({"u": u, "v": self.n_mult(n - 1)}, self.uring)
        else:
            out = self.inverse.subst({"u": self.n_mult(-n)}, self.uring)
        self._nmult[n] = out
        return out

    # axioms ----------------------------------------------------------------
    def axiom_failures(self, degree: int | None = None, associativity: bool = True) -> list[str]:
        D = self.degree if degree is None else degree
        F = self.F.truncate(D)
        u = self.uv.var("u", D)
        v = self.uv.var("v", D)
        bad = []
        if not F.set_zero("v").agrees(u, D) or not F.set_zero("u").agrees(v, D):
            bad.append("unit")
        if not F.rename(self.uv, {"u": "v", "v": "u"}).agrees(F, D):
            bad.append("symmetry")
        if associativity:
            R3 = series_ring(("u", "v", "w"), self.ring)
            x, y, z = (R3.var(n, D) for n in ("u", "v", "w"))
            left = F.subst({"u": x, "v": F.subst({"u": y, "v": z}, R3)}, R3)
            right = F.subst({"u": F.subst({"u": x, "v": y}, R3), "v": z}, R3)
            if not left.agrees(right, D):
                bad.append("associativity")
        return bad


# construction -------------------------------------------------------------


def _resolve(spec: LawSpec, names: tuple[str, ...], ring: ParamRing | None):
    """Split parameters into symbolic ones (forming the ring) and specialised values."""
    given = spec.param_dict()
    unknown = set(given) - set(names)
    if unknown:
        raise MissingParam(f"law {spec.kind} has no parameters {sorted(unknown)}")
    symbolic, flags, fixed = [], [], {}
    for n in names:
        v = given.get(n, "sym")
        if v in ("sym", "inv"):
            symbolic.append(n)
            flags.append(v == "inv")
        else:
            fixed[n] = to_mpq(v)
    if ring is None:
        ring = ParamRing(tuple(symbolic), tuple(flags))
    else:
        missing = [n for n in symbolic if n not in ring.names]
        if missing:
            raise MissingParam(f"parameters {missing} are neither in the ring nor specialised")
    values = {n: ring.gen(n) for n in symbolic}
    values.update({n: ring.const(c) for n, c in fixed.items()})
    return ring, values


def build_law(spec: LawSpec | str, degree: int, ring: ParamRing | None = None, check_axioms: bool | None = None) -> Law:
    """Expand a law to total degree ``degree`` and check the axioms.

    ``check_axioms`` defaults to a full check (unit, symmetry, associativity)
    for custom laws and for builtin laws up to degree 10; builtin laws at
    higher degree get the unit and symmetry checks, associativity holding by
    construction.
    """
    if isinstance(spec, str):
        spec = LawSpec.make(spec)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    names = default_param_names(spec.kind, degree, spec.terms)
    ring, values = _resolve(spec, names, ring)
    uv = series_ring(("u", "v"), ring)
    D = degree
    u, v = uv.var("u", D), uv.var("v", D)
    if spec.kind == "additive":
        F = u + v
    elif spec.kind == "multiplicative":
        F = u + v - (u * v).scale_param(values["beta"])
    elif spec.kind == "lorentz":
        t = -(u * v).scale_param(values["beta"])
        geo = uv.const(1, D)
        power = uv.const(1, D)
        for _ in range(D // 2 + 1):
            power = power * t
            geo = geo + power
        F = (u + v) * geo
    elif spec.kind == "elliptic":
        F = _elliptic(uv, values, D)
    elif spec.kind == "universal":
        F = _universal(uv, values, names, D)
    elif spec.kind == "custom":
        if not spec.series:
            raise MissingParam("custom law needs a series text")
        F = uv.parse(spec.series, D)
    else:
        raise ValueError(spec.kind)
    law = Law(spec, ring, F.truncate(D), values)
    if check_axioms is None:
        full = spec.kind == "custom" or D <= 10
    else:
        full = check_axioms
    bad = law.axiom_failures(D, associativity=full)
    if bad:
        raise AxiomViolation(f"law {spec.label()} fails {', '.join(bad)} to degree {D}")
    return law


def _elliptic(uv, values, D: int) -> Series:
    """Chord construction on the Tate model w = z^3 + a1 z w + a2 z^2 w + a3 w^2 + a4 z w^2 + a6 w^3."""
    a1, a2, a3, a4, a6 = (values[n] for n in ELLIPTIC_PARAMS)
    ur = series_ring(("u",), uv.params)
    W = D + 1
    z = ur.var("u", W)
    w = ur.zero(W)
    for _ in range(W + 1):
        nxt = (z ** 3 + (z * w) * a1 + (z * z * w) * a2 + (w * w) * a3 + (z * w * w) * a4 + (w * w * w) * a6).truncate(W)
        if nxt == w:
            break
        w = nxt
    # slope of the chord through (u, w(u)) and (v, w(v))
    lam_terms = {}
    for n in range(3, W + 1):
        A = w.coefficient((n,))
        if A.is_zero():
            continue
        for k in range(n):
            mono = (k, n - 1 - k)
            lam_terms[mono] = lam_terms.get(mono, uv.params.zero()) + A
    lam = uv.from_terms(lam_terms, D)
    u, v = uv.var("u", D), uv.var("v", D)
    w1 = w.rename(uv, {"u": "u"}).truncate(D)
    nu = w1 - lam * u
    lam2 = lam * lam
    # third root of the cubic in z cut out by the chord w = lam*z + nu
    num = lam * a1 + nu * a2 + lam2 * a3 + (lam * nu) * (2 * a4) + (lam2 * nu) * (3 * a6)
    den = uv.const(1, D) + lam * a2 + lam2 * a4 + (lam2 * lam) * a6
    z3 = -u - v - num * den.invert_unit()
    w3 = lam * z3 + nu
    return (-z3) * (uv.const(1, D) - z3 * a1 - w3 * a3).invert_unit()


def _universal(uv, values, names, D: int) -> Series:
    ur = series_ring(("u",), uv.params)
    terms = {(1,): 1}
    for i, n in enumerate(names, start=1):
        if i + 1 <= D:
            terms[(i + 1,)] = values[n]
    log = ur.from_terms(terms, D)
    exp = log.compose_inverse()
    lu = log.rename(uv, {"u": "u"})
    lv = log.rename(uv, {"u": "v"})
    return exp.subst({"u": lu + lv}, uv)
