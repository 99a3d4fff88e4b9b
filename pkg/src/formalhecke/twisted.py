"""The twisted formal group algebra: sums of delta_w with coefficients on the right.

Multiplication follows (delta_a psi)(delta_b phi) = delta_{ab} b^{-1}(psi) phi.
Demazure elements X_alpha and Hecke elements T_i are built from it, along
with triangular conversion to the X_w and T_w bases and the braid
discrepancy between the two alternating products.
"""
from __future__ import annotations

from .errors import AssertionFailure, NotAUnit, NotInAlgebra, PrecisionExhausted
from .fga import FGAContext, FGAElem
from .localized import LocElem, Member, NotMember, invert_kappa, membership_in_fga
from .rootdata import Weight, WeylElement
from .series import Series


class TwistedElem:
    """Finite sum of delta_w * psi_w with psi_w in the localisation."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: FGAContext, coeffs: dict[WeylElement, LocElem] | None = None):
        self.ctx = ctx
        self.coeffs = dict(coeffs or {})

    # construction --------------------------------------------------------
    @classmethod
    def scalar(cls, ctx: FGAContext, value) -> "TwistedElem":
        return cls(ctx, {ctx.datum.identity: LocElem.of(ctx, value)})

    @classmethod
    def delta(cls, ctx: FGAContext, w: WeylElement) -> "TwistedElem":
        return cls(ctx, {w: LocElem.of(ctx, 1)})

    # arithmetic ---------------------------------------------------------------
    def _coerce(self, other) -> "TwistedElem":
        if isinstance(other, TwistedElem):
            return other
        return TwistedElem.scalar(self.ctx, other)

    def __add__(self, other) -> "TwistedElem":
        other = self._coerce(other)
        out = dict(self.coeffs)
        for w, c in other.coeffs.items():
            out[w] = out[w] + c if w in out else c
        return TwistedElem(self.ctx, out)

    __radd__ = __add__

    def __neg__(self) -> "TwistedElem":
        return TwistedElem(self.ctx, {w: -c for w, c in self.coeffs.items()})

    def __sub__(self, other) -> "TwistedElem":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "TwistedElem":
        return self._coerce(other) - self

    def __mul__(self, other) -> "TwistedElem":
        if isinstance(other, TwistedElem):
            return t_mul(self, other)
        return self.right_scale(LocElem.of(self.ctx, other))

    def __rmul__(self, other) -> "TwistedElem":
        return self.left_scale(LocElem.of(self.ctx, other))

    def right_scale(self, phi: LocElem) -> "TwistedElem":
        """(sum delta_w psi_w) * phi."""
        return TwistedElem(self.ctx, {w: c * phi for w, c in self.coeffs.items()})

    def left_scale(self, phi: LocElem) -> "TwistedElem":
        """phi * (sum delta_w psi_w) = sum delta_w w^{-1}(phi) psi_w."""
        return TwistedElem(self.ctx, {w: phi.act(w.inverse()) * c for w, c in self.coeffs.items()})

    def __pow__(self, n: int) -> "TwistedElem":
        out = TwistedElem.scalar(self.ctx, 1)
        for _ in range(n):
            out = self * out
        return out

    # queries -----------------------------------------------------------------
    def coefficient(self, w: WeylElement) -> LocElem:
        return self.coeffs.get(w, LocElem.of(self.ctx, 0))

    def support(self) -> list[WeylElement]:
        """Elements whose coefficient is not zero to its known precision."""
        return sorted(w for w, c in self.coeffs.items() if not c.is_zero())

    def precision(self) -> int:
        return min((c.precision for c in self.coeffs.values()), default=self.ctx.degree)

    def render(self) -> str:
        parts = [f"d[{w.word_str()}]*({self.coeffs[w].render()})" for w in self.support()]
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return self.render()


def t_mul(a: TwistedElem, b: TwistedElem) -> TwistedElem:
    """Product in the smash product; left coefficients are twisted by b's group elements."""
    out: dict[WeylElement, LocElem] = {}
    for u, psi in a.coeffs.items():
        for w, phi in b.coeffs.items():
            term = psi.act(w.inverse()) * phi
            key = u * w
            out[key] = out[key] + term if key in out else term
    return TwistedElem(a.ctx, out)


def is_zero_to(c: LocElem, degree: int) -> bool:
    """Zero through absolute ``degree``; raises PrecisionExhausted when unknowable."""
    if c.precision < degree:
        raise PrecisionExhausted(f"coefficient known to degree {c.precision}, need {degree}")
    return c.num.truncate(degree + len(c.den)).is_zero()


def equal_to(a: TwistedElem, b: TwistedElem, degree: int):
    """First (element, discrepancy) where a and b differ through ``degree``, or None."""
    from .localized import loc_difference

    zero = LocElem.of(a.ctx, 0)
    for w in sorted(set(a.coeffs) | set(b.coeffs)):
        diff = loc_difference(a.coeffs.get(w, zero), b.coeffs.get(w, zero), degree)
        if diff is not None:
            return w, diff
    return None


class TwistedAlgebra:
    """Generators and basis elements of the twisted algebra over one context."""

    def __init__(self, ctx: FGAContext):
        self.ctx = ctx
        self.datum = ctx.datum
        self._X: dict[Weight, TwistedElem] = {}
        self._T: dict[int, TwistedElem] = {}
        self._basis: dict[tuple[str, WeylElement], TwistedElem] = {}
        self._hecke_coeffs: tuple[LocElem, Series] | None = None

    # generators -----------------------------------------------------------
    def one(self) -> TwistedElem:
        return TwistedElem.scalar(self.ctx, 1)

    def scalar(self, value) -> TwistedElem:
        return TwistedElem.scalar(self.ctx, value)

    def delta(self, w) -> TwistedElem:
        if isinstance(w, str):
            w = self.datum.from_word(w)
        return TwistedElem.delta(self.ctx, w)

    def X(self, root) -> TwistedElem:
        """X_alpha = delta_e (1/x_alpha) - delta_{s_alpha} (1/x_{-alpha}); an int means alpha_i."""
        if isinstance(root, int):
            root = self.datum.alpha(root)
        root = self.datum.lift(root)
        hit = self._X.get(root)
        if hit is None:
            neg = tuple(-c for c in root)
            s = self.datum.reflection_of(root)
            hit = TwistedElem(
                self.ctx,
                {self.datum.identity: LocElem.inv_x(self.ctx, root), s: -LocElem.inv_x(self.ctx, neg)},
            )
            self._X[root] = hit
        return hit

    def kappa_zero(self) -> bool:
        return self.ctx.law.kappa_class.zero

    def hecke_coefficients(self, i: int) -> tuple[Series, Series]:
        """(a, b) with T_i = X_i a + delta_i b."""
        ctx = self.ctx
        if not self.datum.hecke:
            raise ValueError("Hecke elements need a datum with the gamma factor")
        g = self.datum.gamma()
        if self.kappa_zero():
            return ctx.x(g) * 2, ctx.one()
        kinv = invert_kappa(ctx, self.datum.alpha(i)).num
        return ctx.theta() * kinv, ctx.mu_at(ctx.x(g))

    def T(self, i: int) -> TwistedElem:
        """T_i = delta_e (a/x_i) + delta_i (b - a/x_{-i})."""
        hit = self._T.get(i)
        if hit is None:
            a, b = self.hecke_coefficients(i)
            ai = self.datum.alpha(i)
            neg = tuple(-c for c in ai)
            rho = b * self.ctx.x(neg) - a
            hit = TwistedElem(
                self.ctx,
                {self.datum.identity: LocElem(self.ctx, a, (ai,)), self.datum.simple[i]: LocElem(self.ctx, rho, (neg,))},
            )
            self._T[i] = hit
        return hit

    def generator(self, kind: str, i: int) -> TwistedElem:
        return self.X(i) if kind == "X" else self.T(i)

    # products and bases ----------------------------------------------------------
    def word_product(self, kind: str, word) -> TwistedElem:
        """G_{i1} ... G_{ik} built by left multiplication from the right end."""
        out = self.one()
        for i in reversed(list(word)):
            out = t_mul(self.generator(kind, i), out)
        return out

    def basis(self, kind: str, w: WeylElement) -> TwistedElem:
        """X_w or T_w along the canonical reduced word of w."""
        key = (kind, w)
        hit = self._basis.get(key)
        if hit is None:
            if w.length == 0:
                hit = self.one()
            else:
                first = w.word[0]
                rest = self.datum.simple[first] * w
                hit = t_mul(self.generator(kind, first), self.basis(kind, rest))
            self._basis[key] = hit
        return hit

    def to_basis(self, a: TwistedElem, kind: str = "X") -> dict[WeylElement, LocElem]:
        """Coefficients c_w with a = sum_w B_w c_w (B = X or T), by downward length induction."""
        rem = dict(a.coeffs)
        out: dict[WeylElement, LocElem] = {}
        for w in sorted(self.datum.elements, key=lambda e: (-e.length, e.word)):
            psi = rem.pop(w, None)
            if psi is None:
                continue
            B = self.basis(kind, w)
            c = _divide_by_lead(psi, B.coeffs[w])
            out[w] = c
            for v, coeff in B.coeffs.items():
                if v != w:
                    term = coeff * c
                    rem[v] = rem[v] - term if v in rem else -term
        return out

    def from_basis(self, coeffs: dict[WeylElement, LocElem], kind: str = "X") -> TwistedElem:
        out = TwistedElem(self.ctx)
        for w, c in coeffs.items():
            out = out + self.basis(kind, w).right_scale(c)
        return out


def _divide_by_lead(psi: LocElem, lead: LocElem) -> LocElem:
    """psi / lead where lead = num / prod x with num a constant or a series coprime to every x."""
    c = psi
    for d in lead.den:
        c = c.mul_x(d)
    num = lead.num
    if num.is_constant():
        return c * num.constant_term().invert()
    return c.div_series(num)


# named operations ------------------------------------------------------------------


def demazure_element(alg: TwistedAlgebra, root) -> TwistedElem:
    return alg.X(root)


def hecke_element(alg: TwistedAlgebra, i: int) -> TwistedElem:
    return alg.T(i)


def act_on(a: TwistedElem, phi, degree: int | None = None) -> FGAElem:
    """(sum delta_w psi_w)(phi) = sum_w w(psi_w phi), returned as an algebra element."""
    ctx = a.ctx
    phi = LocElem.of(ctx, phi)
    total = LocElem.of(ctx, 0)
    for w, psi in sorted(a.coeffs.items()):
        total = total + (psi * phi).act(w)
    degree = total.precision if degree is None else degree
    res = membership_in_fga(total, degree)
    if isinstance(res, Member):
        return res.quotient
    if isinstance(res, NotMember):
        raise NotInAlgebra(f"result has a pole (division failed at degree {res.degree})")
    raise PrecisionExhausted(res.reason)


def commutation_defect(alg: TwistedAlgebra, i: int, psi, mode: str = "X", degree: int | None = None) -> LocElem:
    """psi G - G s_i(psi) for G = X_i or T_i; must be supported on delta_e."""
    ctx = alg.ctx
    psi = LocElem.of(ctx, psi)
    G = alg.generator(mode, i)
    s = alg.datum.simple[i]
    left = TwistedElem(ctx, {ctx.datum.identity: psi}) * G
    right = G * TwistedElem(ctx, {ctx.datum.identity: psi.act(s)})
    diff = left - right
    deg = diff.precision() if degree is None else degree
    for w, c in diff.coeffs.items():
        if w != ctx.datum.identity and not is_zero_to(c, deg):
            raise AssertionFailure(f"commutation defect has a delta_{w.word_str()} component")
    return diff.coefficient(ctx.datum.identity)


def alternating_word(i: int, j: int, m: int, start: int) -> list[int]:
    other = j if start == i else i
    return [start if k % 2 == 0 else other for k in range(m)]


def braid_discrepancy(alg: TwistedAlgebra, i: int, j: int, mode: str = "X", degree: int | None = None):
    """Basis coefficients of (G_j G_i ...) - (G_i G_j ...), m_ij factors each.

    Asserts that coefficients vanish above length m_ij - 2 and, in X-mode, at
    the identity.  Returns the dictionary of all basis coefficients.
    """
    datum = alg.datum
    m = datum.m(i, j)
    lhs = alg.word_product(mode, alternating_word(i, j, m, j))
    rhs = alg.word_product(mode, alternating_word(i, j, m, i))
    coeffs = alg.to_basis(lhs - rhs, mode)
    deg = alg.ctx.degree if degree is None else degree
    for w, c in coeffs.items():
        too_long = w.length > m - 2
        constant = mode == "X" and w.length == 0
        if (too_long or constant) and not is_zero_to(c, deg):
            raise AssertionFailure(f"braid discrepancy has a nonzero coefficient at {w.word_str()}")
    return coeffs


def chi(alg: TwistedAlgebra, root: Weight) -> LocElem:
    """chi_alpha = Theta/(x_alpha kappa_alpha), or 2 x_gamma / x_alpha when kappa = 0."""
    ctx = alg.ctx
    root = alg.datum.lift(root)
    if alg.kappa_zero():
        return LocElem(ctx, ctx.x(alg.datum.gamma()) * 2, (root,))
    return LocElem(ctx, ctx.theta() * invert_kappa(ctx, root).num, (root,))


def sigma_ij(alg: TwistedAlgebra, i: int, j: int) -> LocElem:
    """sigma_ij = chi_{i+j}(chi_j - chi_{-i}) - chi_i chi_j."""
    if alg.datum.m(i, j) != 3:
        raise ValueError("sigma_ij is defined for m_ij = 3")
    ctx = alg.ctx
    ai, aj = alg.datum.alpha(i), alg.datum.alpha(j)
    aij = tuple(a + b for a, b in zip(ai, aj))
    neg_i = tuple(-c for c in ai)
    return chi(alg, aij) * (chi(alg, aj) - chi(alg, neg_i)) - chi(alg, ai) * chi(alg, aj)


__all__ = [
    "TwistedElem",
    "TwistedAlgebra",
    "t_mul",
    "act_on",
    "commutation_defect",
    "braid_discrepancy",
    "sigma_ij",
    "chi",
    "equal_to",
    "is_zero_to",
    "NotAUnit",
]
