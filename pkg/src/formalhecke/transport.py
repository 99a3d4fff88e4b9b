"""Transport along the exponential: x_lambda^F goes to e_F(x_lambda^A).

The target is the additive formal group algebra over the same coefficient
ring.  Since e_F(x_lambda) = x_lambda * (unit), denominators carry over as
the same weights with the unit folded into the numerator.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NotDivisible, PrecisionExhausted
from .fga import LAW_HEADROOM, FGAContext
from .fgl import LawSpec, build_law
from .localized import LocElem
from .rootdata import Weight
from .series import Series
from .twisted import TwistedAlgebra, TwistedElem, equal_to


class TransportMap:
    """e_F^* from the F-algebra of ``source`` to the additive algebra on the same datum."""

    def __init__(self, source: FGAContext):
        self.source = source
        add = build_law(LawSpec.make("additive"), source.degree + LAW_HEADROOM, ring=source.law.ring)
        self.target = FGAContext(source.datum, add, source.degree)
        exp = source.law.exp.truncate(source.degree)
        self.images = {name: exp.rename(self.target.ring, {"u": name}) for name in source.names}
        self._unit_inv: dict[Weight, Series] = {}

    def series(self, phi: Series) -> Series:
        if phi.is_constant():
            return Series(self.target.ring, dict(phi.terms), phi.prec)
        return phi.subst(self.images, self.target.ring)

    def ratio(self, weight: Weight) -> Series:
        """q_lambda = e_F(x_lambda)/x_lambda, found by dividing the transported x_lambda."""
        return self.series(self.source.x(weight)).div_exact(self.target.x(weight))

    def unit_inverse(self, weight: Weight) -> Series:
        weight = tuple(weight)
        hit = self._unit_inv.get(weight)
        if hit is None:
            hit = self.ratio(weight).invert_unit()
            self._unit_inv[weight] = hit
        return hit

    def loc(self, psi: LocElem) -> LocElem:
        num = self.series(psi.num)
        for d in psi.den:
            num = num * self.unit_inverse(d)
        return LocElem(self.target, num, psi.den)

    def twisted(self, a: TwistedElem) -> TwistedElem:
        return TwistedElem(self.target, {w: self.loc(c) for w, c in a.coeffs.items()})


def transport_fga(tmap: TransportMap, phi: Series) -> Series:
    return tmap.series(phi)


@dataclass
class CheckResult:
    ok: bool
    witness: dict = field(default_factory=dict)


def transport_demazure_check(tmap: TransportMap, i: int, degree: int) -> CheckResult:
    """e^*(X_i^F) == (x_i / e_F(x_i)) X_i^A, and e_F(x_i)/x_i has constant term 1."""
    src, tgt = TwistedAlgebra(tmap.source), TwistedAlgebra(tmap.target)
    ai = tmap.source.datum.alpha(i)
    q = tmap.ratio(ai)
    c0 = q.constant_term()
    if c0 != 1:
        return CheckResult(False, {"unit_constant_term": str(c0)})
    lhs = tmap.twisted(src.X(i))
    rhs = tgt.X(i).left_scale(LocElem(tmap.target, tmap.unit_inverse(ai)))
    diff = equal_to(lhs, rhs, degree)
    if diff is not None:
        return CheckResult(False, _diff_witness(diff))
    return CheckResult(True, {"unit": q.truncate(min(q.prec, 3)).render()})


def _diff_witness(diff) -> dict:
    w, (deg, mono, a, b) = diff
    return {"element": w.word_str(), "degree": deg, "monomial": list(mono), "left": a, "right": b}


def hecke_ratio(tmap: TransportMap, i: int) -> tuple[LocElem, LocElem]:
    """(generator image numerator, ratio) for the gamma-inverted transport.

    Zero branch: Xi_i = 1 - 2x_gamma/x_i.  Otherwise
    rho_i = mu(x_gamma) - Theta/(x_i kappa_i).  The ratio divides the image by
    Xi_i^A = x_{alpha_i - 2 gamma}/x_i, written with additive x's.
    """
    src = tmap.source
    alg = TwistedAlgebra(src)
    datum = src.datum
    ai = datum.alpha(i)
    g = datum.gamma()
    a, b = alg.hecke_coefficients(i)
    gen = LocElem.of(src, b) - LocElem(src, a, (ai,))
    image = tmap.loc(gen)
    shifted = tuple(x - 2 * y for x, y in zip(ai, g))
    return image, image.mul_x(ai).div_x(shifted)


def lambda_constant(ctx: FGAContext, s: Series) -> Series:
    """Set every lattice variable to zero, keeping x_gamma."""
    out = s
    for name in ctx.names:
        if name != "xg":
            out = out.set_zero(name)
    return out


def ratio_is_unit(tmap: TransportMap, ratio: LocElem, degree: int) -> CheckResult:
    """Membership in the x_gamma-inverted additive algebra plus a constant-term-1 check.

    Lattice-only denominator factors must divide the numerator.  Factors with
    a gamma component are units once x_gamma is inverted; at lattice degree
    zero each contributes c * x_gamma, so the lattice-constant term of the
    ratio is N(0, x_gamma) / (prod c * x_gamma^m), which must be 1 + O(x_gamma).
    """
    ctx = tmap.target
    num = ratio.num
    gamma_dens = []
    try:
        for d in ratio.den:
            if d[-1] == 0:
                num = num.div_exact(ctx.x(d))
            else:
                gamma_dens.append(d)
    except NotDivisible as exc:
        return CheckResult(False, {"not_member_degree": exc.degree})
    scale = 1
    for d in gamma_dens:
        scale *= d[-1]
    m = len(gamma_dens)
    if num.prec - m < degree:
        raise PrecisionExhausted(f"ratio known to degree {num.prec - m}, need {degree}")
    const = lambda_constant(ctx, num)
    if const.is_zero():
        return CheckResult(False, {"lattice_constant": "0"})
    xg = ctx.names.index("xg")
    lead = const.valuation()
    mono = tuple(lead if k == xg else 0 for k in range(len(ctx.names)))
    value = const.coefficient(mono) * ctx.law.ring.const(scale).invert()
    witness = {"lattice_constant_order": lead - m, "leading_coefficient": str(value)}
    one = ctx.law.ring.one()
    return CheckResult(lead == m and value == one, witness)


def transport_hecke_check(tmap: TransportMap, i: int, degree: int) -> CheckResult:
    """Ratio of the transported generator to Xi_i^A is a unit with constant term 1,
    and e^*(T_i^F - b) equals ratio * (T_i^A - 1)."""
    image, ratio = hecke_ratio(tmap, i)
    res = ratio_is_unit(tmap, ratio, degree)
    if not res.ok:
        return res
    src, tgt = TwistedAlgebra(tmap.source), TwistedAlgebra(tmap.target)
    _, b = src.hecke_coefficients(i)
    lhs = tmap.twisted(src.T(i) - TwistedElem.scalar(tmap.source, b))
    rhs = (tgt.T(i) - tgt.one()).left_scale(ratio)
    diff = equal_to(lhs, rhs, degree)
    if diff is not None:
        return CheckResult(False, _diff_witness(diff))
    return res
