"""Verification suites with structured pass/fail/undecided reports.

Every check computes both sides independently and compares them through a
certified degree.  When an intermediate result runs out of known degree the
check is retried at a higher working degree; a check that still cannot be
certified is reported as undecided, never as a pass.
"""
from __future__ import annotations

import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import AlgebraError, PrecisionExhausted
from .fga import LAW_HEADROOM, FGAContext
from .fgl import LawSpec, build_law
from .localized import (
    LocElem,
    Member,
    NotMember,
    fraction_sum,
    loc_demazure,
    loc_difference,
    membership_in_fga,
)
from .rootdata import RootDatum, build_datum
from .series import Series
from .transport import TransportMap, transport_demazure_check, transport_hecke_check
from .twisted import (
    TwistedAlgebra,
    TwistedElem,
    act_on,
    braid_discrepancy,
    commutation_defect,
    equal_to,
    is_zero_to,
    sigma_ij,
)

RETRIES = 2
DEFAULT_DEGREE = 6

# parameter flags applied unless the caller sets them: each makes a11 a unit
# so that the Hecke generators of the nonzero branch exist
DEFAULT_PARAMS = {
    "multiplicative": {"beta": "inv"},
    "elliptic": {"a1": "inv"},
    "universal": {"m1": "inv"},
}

CHECKS = (
    "law.axioms",
    "law.formal_inverse",
    "law.mu_pairing",
    "law.exp_log",
    "demazure.square",
    "demazure.commutation",
    "demazure.kappa_pair",
    "demazure.braid",
    "demazure.kappa_vanishing",
    "demazure.specialization",
    "demazure.basis_roundtrip",
    "demazure.action_homomorphism",
    "demazure.xi_membership",
    "hecke.commutation",
    "hecke.quadratic",
    "hecke.quadratic_factored",
    "hecke.braid",
    "hecke.sigma",
    "hecke.action_unit",
    "hecke.degenerate_shadow",
    "hecke.periodic_shadow",
    "hecke.basis_roundtrip",
    "transport.demazure",
    "transport.weyl",
    "transport.hecke",
    "probe.xi_membership",
    "law.build",
)

# identity -> checks that exercise it; a meta-test keeps this in sync with CHECKS
COVERAGE = {
    "formal_inverse_annihilates": ("law.formal_inverse",),
    "law_unit_symmetry_associativity": ("law.axioms",),
    "mu_times_reflected_mu_is_one": ("law.mu_pairing",),
    "exponential_inverts_logarithm": ("law.exp_log", "transport.demazure"),
    "demazure_square_is_kappa_multiple": ("demazure.square",),
    "demazure_commutation_with_scalars": ("demazure.commutation",),
    "kappa_pair_lies_in_algebra": ("demazure.kappa_pair",),
    "commuting_braid_relation": ("demazure.braid", "hecke.braid"),
    "type_a2_braid_defect": ("demazure.braid",),
    "type_b2_braid_defect": ("demazure.braid",),
    "type_g2_braid_defect": ("demazure.braid",),
    "braid_defect_constant_term_vanishes": ("demazure.braid",),
    "kappa_ij_vanishing_classification": ("demazure.kappa_vanishing",),
    "nil_and_idempotent_specializations": ("demazure.specialization",),
    "lorentz_braid_defect": ("demazure.braid",),
    "xi_coefficients_membership": ("demazure.xi_membership", "probe.xi_membership"),
    "demazure_basis_triangularity": ("demazure.basis_roundtrip",),
    "hecke_basis_triangularity": ("hecke.basis_roundtrip",),
    "action_is_multiplicative": ("demazure.action_homomorphism",),
    "hecke_commutation_with_scalars": ("hecke.commutation",),
    "hecke_quadratic_relation": ("hecke.quadratic",),
    "hecke_factored_quadratic_relation": ("hecke.quadratic_factored",),
    "hecke_braid_relation": ("hecke.braid",),
    "sigma_symmetric_and_reflection_invariant": ("hecke.sigma",),
    "sigma_in_zero_branch": ("hecke.sigma",),
    "hecke_generator_on_one": ("hecke.action_unit",),
    "degenerate_affine_hecke_shadow": ("hecke.degenerate_shadow",),
    "periodic_affine_hecke_shadow": ("hecke.periodic_shadow",),
    "exponential_transport_of_demazure": ("transport.demazure",),
    "transport_commutes_with_weyl": ("transport.weyl",),
    "exponential_transport_of_hecke": ("transport.hecke",),
    "law_build_failures_reported": ("law.build",),
}


# reports ----------------------------------------------------------------------


@dataclass
class Report:
    check: str
    law: dict
    datum: str
    degree: int
    words: dict = field(default_factory=dict)
    status: str = "pass"
    witness: dict = field(default_factory=dict)
    ms: int = 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "check": self.check,
            "law": self.law,
            "datum": self.datum,
            "degree": self.degree,
            "words": self.words,
            "status": self.status,
            "witness": self.witness,
        }
        if timing:
            out["ms"] = self.ms
        return out

    def sort_key(self) -> tuple:
        return (self.datum, json.dumps(self.law, sort_keys=True), self.degree, CHECKS.index(self.check))


def reports_json(reports: list[Report], timing: bool = True) -> str:
    return json.dumps([r.to_dict(timing) for r in reports], sort_keys=True, indent=1)


def exit_status(reports: list[Report], strict_undecided: bool = False) -> int:
    bad = {"fail", "undecided"} if strict_undecided else {"fail"}
    return 1 if any(r.status in bad for r in reports) else 0


# configuration ----------------------------------------------------------------


def normalize_law(spec: LawSpec, degree: int) -> LawSpec:
    """Apply default invertibility flags and the universal term count."""
    given = spec.param_dict()
    extra = {k: v for k, v in DEFAULT_PARAMS.get(spec.kind, {}).items() if k not in given}
    if extra:
        spec = spec.with_params(**extra)
    if spec.kind == "universal" and spec.terms is None:
        spec = LawSpec(spec.kind, spec.params, max(degree - 1, 1), spec.series)
    return spec


@dataclass(frozen=True)
class Cell:
    law: LawSpec
    datum: str = "A2"
    degree: int = DEFAULT_DEGREE
    suites: tuple[str, ...] = ("law", "demazure", "hecke", "transport")


@dataclass(frozen=True)
class VerifyConfig:
    cells: tuple[Cell, ...] = ()
    workers: int = 1


def default_laws() -> tuple[LawSpec, ...]:
    return tuple(LawSpec.make(k) for k in ("additive", "multiplicative", "lorentz", "elliptic", "universal"))


def default_config() -> VerifyConfig:
    cells = tuple(Cell(law, tag, DEFAULT_DEGREE) for tag in ("A2", "B2") for law in default_laws())
    return VerifyConfig(cells)


# contexts ------------------------------------------------------------------------


def x_slack(datum: RootDatum) -> int:
    """Working-degree slack for X-basis work: two per division step in a braid word."""
    n = datum.rank
    longest = max((datum.m(i, j) for i in range(n) for j in range(n) if i != j), default=2)
    return max(2, 2 * (longest - 2))


@lru_cache(maxsize=32)
def context(spec: LawSpec, datum: RootDatum, degree: int) -> FGAContext:
    law = build_law(spec, degree + LAW_HEADROOM, check_axioms=degree + LAW_HEADROOM <= 10)
    return FGAContext(datum, law, degree)


def _memo(ctx: FGAContext) -> dict:
    memo = getattr(ctx, "_verify_memo", None)
    if memo is None:
        memo = ctx._verify_memo = {}
    return memo


class _Runner:
    """Runs named checks with adaptive working degree for one (law, datum, degree)."""

    def __init__(self, spec: LawSpec, datum: RootDatum, degree: int, slack: int):
        self.spec = spec
        self.datum = datum
        self.degree = degree
        self.slack = slack
        self.reports: list[Report] = []

    def run(self, name: str, fn, extra: int = 0) -> Report:
        start = time.perf_counter()
        words: dict = {}
        working = self.degree + self.slack + extra
        status, witness = "undecided", {}
        for _ in range(RETRIES + 1):
            words.clear()
            try:
                ctx = context(self.spec, self.datum, working)
                ok, witness = fn(ctx, self.degree, words)
                status = "pass" if ok else "fail"
                break
            except PrecisionExhausted as exc:
                witness = {"reason": str(exc), "working_degree": working}
                working += 2
            except AlgebraError as exc:
                status, witness = "fail", {"error": type(exc).__name__, "message": str(exc)}
                break
        rep = Report(
            check=name,
            law=self.spec.describe(),
            datum=self.datum.describe(),
            degree=self.degree,
            words=dict(words),
            status=status,
            witness=witness,
            ms=int((time.perf_counter() - start) * 1000),
        )
        self.reports.append(rep)
        return rep


# witnesses and oracles -------------------------------------------------------------


def _loc_witness(diff) -> dict:
    deg, mono, left, right = diff
    return {"degree": deg, "monomial": list(mono), "left": left, "right": right}


def _twisted_witness(diff) -> dict:
    w, d = diff
    return {"element": w.word_str(), **_loc_witness(d)}


def _compare(a, b, degree: int):
    """None when equal through ``degree``, else a witness dict."""
    if isinstance(a, Series) and isinstance(b, Series):
        diff = a.first_difference(b, degree)
    else:
        ctx = a.ctx if isinstance(a, LocElem) else b.ctx
        diff = loc_difference(LocElem.of(ctx, a), LocElem.of(ctx, b), degree)
    return None if diff is None else _loc_witness(diff)


def _neg(w):
    return tuple(-c for c in w)


def _combo(datum: RootDatum, i: int, j: int, a: int, b: int):
    """a alpha_i + b alpha_j as a weight."""
    ai, aj = datum.alpha(i), datum.alpha(j)
    return tuple(a * p + b * q for p, q in zip(ai, aj))


def kappa_fraction(ctx: FGAContext, lam, nu) -> LocElem:
    """1/(x_{lam+nu} x_nu) - 1/(x_{lam+nu} x_{-lam}) - 1/(x_lam x_nu)."""
    tot = tuple(p + q for p, q in zip(lam, nu))
    return fraction_sum(ctx, [(1, [tot, nu]), (-1, [tot, _neg(lam)]), (-1, [lam, nu])])


# (sign, [(a, b), ...]) with (a, b) meaning a alpha_i + b alpha_j
XI_IJ = (
    (1, ((1, 0), (1, 1), (1, 2), (2, 3))),
    (1, ((1, 0), (0, 1), (1, 2), (-2, -3))),
    (1, ((1, 0), (0, 1), (2, 3), (-1, -1))),
    (-1, ((1, 0), (1, 1), (1, 2), (-1, -3))),
    (-1, ((1, 0), (1, 1), (1, 3), (0, -1))),
    (1, ((1, 1), (1, 3), (0, -1), (-2, -3))),
    (1, ((1, 3), (2, 3), (0, -1), (-1, -2))),
    (1, ((1, 1), (1, 2), (-1, -3), (-2, -3))),
    (-1, ((1, 0), (0, 1), (1, 2), (1, 3))),
)
XI_JI = (
    (1, ((1, 0), (0, 1), (2, 3), (-1, -2))),
    (1, ((1, 0), (0, 1), (1, 2), (-1, -3))),
    (1, ((0, 1), (1, 2), (1, 3), (2, 3))),
    (-1, ((1, 0), (0, 1), (1, 1), (2, 3))),
    (1, ((1, 1), (1, 2), (-1, 0), (-2, -3))),
    (1, ((1, 3), (2, 3), (-1, -1), (-1, -2))),
    (1, ((1, 1), (1, 3), (-1, 0), (-1, -2))),
    (-1, ((0, 1), (1, 3), (2, 3), (-1, -1))),
    (-1, ((0, 1), (1, 1), (1, 3), (-1, 0))),
)


def xi_fraction(ctx: FGAContext, i: int, j: int, table) -> LocElem:
    d = ctx.datum
    return fraction_sum(ctx, [(s, [_combo(d, i, j, a, b) for a, b in ws]) for s, ws in table])


def long_short(datum: RootDatum, i: int, j: int) -> tuple[int, int]:
    """Order a pair so that <alpha_i^vee, alpha_j> = -1 (alpha_i is the long root)."""
    return (i, j) if datum.cartan[i][j] == -1 else (j, i)


def braid_rhs(ctx: FGAContext, i: int, j: int) -> dict:
    """Closed-form X-basis coefficients of the braid defect, keyed by 0-based words."""
    d = ctx.datum
    m = d.m(i, j)
    if m == 2:
        return {}

    def kp(a, b, c, e):
        return LocElem.of(ctx, ctx.kappa_pair(_combo(d, i, j, a, b), _combo(d, i, j, c, e)))

    def dem(k, psi):
        return loc_demazure(ctx, d.alpha(k), psi)

    if m == 3:
        return {(i,): kp(1, 0, 0, 1), (j,): -kp(0, 1, 1, 0)}
    if m == 4:
        a = kp(1, 2, 0, -1) + kp(0, 1, 1, 0)
        b = kp(1, 1, 0, 1) + kp(1, 0, 0, 1)
        return {(i, j): a, (j, i): -b, (j,): dem(i, b), (i,): -dem(j, a)}
    k1 = kp(0, 1, 1, 0) + kp(2, 3, -1, -2) + kp(-1, -3, 1, 2) + kp(1, 2, 0, -1)
    k2 = kp(1, 0, 0, 1) + kp(-2, -3, 1, 2) + kp(-1, -2, 1, 3) + kp(1, 1, 0, 1)
    xij = xi_fraction(ctx, i, j, XI_IJ)
    xji = xi_fraction(ctx, i, j, XI_JI)
    return {
        (i, j, i, j): k1,
        (j, i, j, i): -k2,
        (j, i, j): dem(i, k2),
        (i, j, i): -dem(j, k1),
        (i, j): xij,
        (j, i): -xji,
        (j,): dem(i, xji),
        (i,): -dem(j, xij),
    }


def _pairs(datum: RootDatum):
    return [(i, j) for i in range(datum.rank) for j in range(i + 1, datum.rank)]


def _oriented(datum: RootDatum, i: int, j: int) -> tuple[int, int]:
    return long_short(datum, i, j) if datum.m(i, j) in (4, 6) else (i, j)


def _word_label(word) -> str:
    return "".join(str(k + 1) for k in word) or "e"


def _samples(ctx: FGAContext, seed: int, count: int = 3, with_gamma: bool = False) -> list[Series]:
    """Deterministic small polynomials in the basis variables."""
    rng = random.Random(seed)
    names = [n for n in ctx.names if with_gamma or n != "xg"]
    out = []
    for _ in range(count):
        terms = {}
        for _ in range(3):
            exps = tuple(rng.randint(0, 2) if n in names else 0 for n in ctx.names)
            if sum(exps) == 0:
                continue
            terms[exps] = rng.randint(-3, 3) or 1
        out.append(ctx.ring.from_terms(terms, ctx.degree))
    return out


def _law_kappa_constant(ctx: FGAContext):
    """kappa as a constant when the law forces one, else None."""
    spec = ctx.law.spec
    vals = ctx.law.values
    params = spec.param_dict()
    if spec.kind in ("additive", "lorentz"):
        return ctx.law.ring.zero()
    if spec.kind == "multiplicative":
        return vals["beta"]
    if spec.kind == "elliptic" and params.get("a3") == "0":
        return vals["a1"]
    return None


def _quadratic_law(ctx: FGAContext, degree: int) -> bool:
    """F(u, v) == u + v + a11 u v through ``degree``."""
    law = ctx.law
    u = law.uv.var("u", law.degree)
    v = law.uv.var("v", law.degree)
    target = u + v + (u * v).scale_param(law.coeff(1, 1))
    return law.F.agrees(target, min(degree, law.degree))


# law checks -------------------------------------------------------------------------


def _law_axioms(ctx, D, words):
    bad = ctx.law.axiom_failures(D)
    return not bad, {"failures": bad} if bad else {}


def _law_inverse(ctx, D, words):
    law = ctx.law
    u = law.u()
    res = law.F.subst({"u": u, "v": law.inverse}, law.uring)
    diff = res.first_difference(law.uring.zero(res.prec), D)
    return diff is None, {} if diff is None else _loc_witness(diff)


def _law_mu(ctx, D, words):
    law = ctx.law
    prod = law.mu * law.mu.subst({"u": law.inverse}, law.uring)
    diff = prod.first_difference(law.uring.const(1, prod.prec), D)
    return diff is None, {} if diff is None else _loc_witness(diff)


def _law_exp_log(ctx, D, words):
    law = ctx.law
    back = law.exp.subst({"u": law.log}, law.uring)
    diff = back.first_difference(law.u(back.prec), D)
    return diff is None, {} if diff is None else _loc_witness(diff)


# demazure checks -------------------------------------------------------------------


def _square(ctx, D, words):
    alg = TwistedAlgebra(ctx)
    for i in range(ctx.datum.rank):
        words[f"s{i + 1}"] = str(i + 1)
        X = alg.X(i)
        diff = equal_to(X * X, X.right_scale(LocElem.of(ctx, ctx.kappa(ctx.datum.alpha(i)))), D)
        if diff is not None:
            return False, {"simple": i + 1, **_twisted_witness(diff)}
    return True, {}


def _commutation(mode: str, seed: int):
    def check(ctx, D, words):
        alg = TwistedAlgebra(ctx)
        for i in range(ctx.datum.rank):
            words[f"s{i + 1}"] = str(i + 1)
            if mode == "T":
                a, _ = alg.hecke_coefficients(i)
            for psi in _samples(ctx, seed + i, with_gamma=mode == "T"):
                got = commutation_defect(alg, i, psi, mode, D)
                expected = ctx.demazure(ctx.datum.alpha(i), psi)
                if mode == "T":
                    expected = a * expected
                bad = _compare(got, expected, D)
                if bad:
                    return False, {"simple": i + 1, "psi": psi.render(), **bad}
        return True, {}

    return check


def _kappa_pair(ctx, D, words):
    d = ctx.datum
    checked = []
    for i in range(d.rank):
        for j in range(d.rank):
            lam, nu = d.alpha(i), d.alpha(j)
            res = membership_in_fga(kappa_fraction(ctx, lam, nu), D)
            label = f"{i + 1},{j + 1}"
            if isinstance(res, NotMember):
                return False, {"pair": label, "outcome": "not-member", "degree": res.degree}
            if not isinstance(res, Member):
                raise PrecisionExhausted(res.reason)
            bad = _compare(res.quotient.series, ctx.kappa_pair(lam, nu), D)
            if bad:
                return False, {"pair": label, "outcome": "routes disagree", **bad}
            checked.append(label)
    return True, {"pairs": checked}


def _braid(ctx, D, words):
    d = ctx.datum
    alg = TwistedAlgebra(ctx)
    kappa_const = _law_kappa_constant(ctx)
    for i0, j0 in _pairs(d):
        i, j = _oriented(d, i0, j0)
        m = d.m(i, j)
        words[f"lhs_{i0 + 1}{j0 + 1}"] = _word_label([j, i] * m)[:m]
        words[f"rhs_{i0 + 1}{j0 + 1}"] = _word_label([i, j] * m)[:m]
        got = braid_discrepancy(alg, i, j, "X", D)
        expected = {d.from_word(list(w)): v for w, v in braid_rhs(ctx, i, j).items()}
        oracles = [("closed form", expected)]
        if m == 3 and ctx.law.spec.kind == "lorentz":
            beta = LocElem.of(ctx, ctx.const(ctx.law.values["beta"]))
            oracles.append(("beta(X_i - X_j)", {d.simple[i]: beta, d.simple[j]: -beta}))
        if m == 3 and kappa_const is not None and ctx.law.spec.kind != "lorentz":
            oracles.append(("vanishing", {}))
        zero = LocElem.of(ctx, 0)
        for w in got:
            words[f"X_{w.word_str()}"] = w.word_str()
        for label, table in oracles:
            for w in sorted(set(got) | set(table)):
                bad = _compare(got.get(w, zero), table.get(w, zero), D)
                if bad:
                    return False, {"pair": f"{i + 1},{j + 1}", "oracle": label, "element": w.word_str(), **bad}
    return True, {}


def _kappa_vanishing(ctx, D, words):
    d = ctx.datum
    quadratic = _quadratic_law(ctx, ctx.law.degree)
    for i in range(d.rank):
        for j in range(d.rank):
            if i == j:
                continue
            k = ctx.kappa_pair(d.alpha(i), d.alpha(j))
            vanishes = is_zero_to(LocElem.of(ctx, k), D)
            if vanishes != quadratic:
                return False, {"pair": f"{i + 1},{j + 1}", "kappa_vanishes": vanishes, "law_quadratic": quadratic}
    return True, {"law_quadratic": quadratic}


def _specialization(ctx, D, words):
    c = _law_kappa_constant(ctx)
    alg = TwistedAlgebra(ctx)
    scalar = LocElem.of(ctx, ctx.const(c))
    for i in range(ctx.datum.rank):
        words[f"s{i + 1}"] = str(i + 1)
        X = alg.X(i)
        diff = equal_to(X * X, X.right_scale(scalar), D)
        if diff is not None:
            return False, {"simple": i + 1, "constant": str(c), **_twisted_witness(diff)}
    return True, {"constant": str(c)}


def _roundtrip_element(alg: TwistedAlgebra, kind: str) -> TwistedElem:
    """A mixed element; the T version keeps algebra coefficients so that it has a T-expansion
    without inverting x_gamma."""
    ctx = alg.ctx
    d = ctx.datum
    gen = alg.generator(kind, 0)
    other = alg.generator(kind, d.rank - 1)
    psi = LocElem.of(ctx, ctx.x(d.omega(d.rank - 1)))
    a = gen * other + gen.right_scale(psi) + alg.scalar(ctx.const(3))
    if kind == "X":
        a = a + alg.delta(d.simple[d.rank - 1]).right_scale(LocElem.inv_x(ctx, d.alpha(0)))
    return a


def _roundtrip(kind: str):
    def check(ctx, D, words):
        alg = TwistedAlgebra(ctx)
        a = _roundtrip_element(alg, kind)
        coeffs = alg.to_basis(a, kind)
        for w in coeffs:
            words[f"{kind}_{w.word_str()}"] = w.word_str()
        diff = equal_to(a, alg.from_basis(coeffs, kind), D)
        return diff is None, {} if diff is None else _twisted_witness(diff)

    return check


def _action_hom(ctx, D, words):
    alg = TwistedAlgebra(ctx)
    d = ctx.datum
    rng = random.Random(11)
    gens = [alg.X(i) for i in range(d.rank)] + [alg.delta(s) for s in d.simple]
    gens.append(alg.scalar(ctx.x(d.omega(0))))
    for k, phi in enumerate(_samples(ctx, 5, count=3)):
        a, b = rng.choice(gens), rng.choice(gens)
        left = act_on(a * b, phi, D)
        right = act_on(a, act_on(b, phi).series, D)
        bad = _compare(left.series, right.series, D)
        if bad:
            return False, {"sample": k, **bad}
    return True, {}


def xi_membership(ctx: FGAContext, D: int) -> dict:
    """Membership outcomes of both xi sums for the (long, short) G2 pair."""
    d = ctx.datum
    pair = next((p for p in _pairs(d) if d.m(*p) == 6), None)
    if pair is None:
        raise ValueError("datum has no pair with m_ij = 6")
    i, j = long_short(d, *pair)
    out = {}
    for label, table in (("xi_ij", XI_IJ), ("xi_ji", XI_JI)):
        res = membership_in_fga(xi_fraction(ctx, i, j, table), D)
        if isinstance(res, Member):
            out[label] = {"outcome": "member", "quotient": res.quotient.series.render()}
        elif isinstance(res, NotMember):
            out[label] = {"outcome": "not-member", "degree": res.degree}
        else:
            raise PrecisionExhausted(res.reason)
    return out


def _xi_check(ctx, D, words):
    return True, xi_membership(ctx, D)


# hecke checks ----------------------------------------------------------------------


def _quadratic(ctx, D, words):
    alg = TwistedAlgebra(ctx)
    theta = LocElem.of(ctx, ctx.theta())
    for i in range(ctx.datum.rank):
        words[f"s{i + 1}"] = str(i + 1)
        T = alg.T(i)
        diff = equal_to(T * T, T.right_scale(theta) + alg.one(), D)
        if diff is not None:
            return False, {"simple": i + 1, **_twisted_witness(diff)}
    return True, {}


def _quadratic_factored(ctx, D, words):
    alg = TwistedAlgebra(ctx)
    g = ctx.datum.gamma()
    plus = alg.scalar(ctx.mu_at(ctx.x(_neg(g))))
    minus = alg.scalar(ctx.mu_at(ctx.x(g)))
    for i in range(ctx.datum.rank):
        words[f"s{i + 1}"] = str(i + 1)
        T = alg.T(i)
        diff = equal_to((T + plus) * (T - minus), TwistedElem(ctx), D)
        if diff is not None:
            return False, {"simple": i + 1, **_twisted_witness(diff)}
    return True, {}


def _hecke_braid(ctx, D, words):
    d = ctx.datum
    alg = TwistedAlgebra(ctx)
    zero = LocElem.of(ctx, 0)
    for i, j in _pairs(d):
        m = d.m(i, j)
        got = braid_discrepancy(alg, i, j, "T", D)
        for w in got:
            words[f"T_{w.word_str()}"] = w.word_str()
        oracles = []
        if m == 2:
            oracles.append(("commuting", {}))
        if m == 3:
            s = sigma_ij(alg, i, j)
            oracles.append(("sigma", {d.simple[i]: s, d.simple[j]: -s}))
            if ctx.law.spec.kind == "lorentz":
                c = ctx.x(d.gamma()) ** 2 * ctx.const(ctx.law.values["beta"]) * 4
                oracles.append(("4 beta x_gamma^2", {d.simple[i]: LocElem.of(ctx, c), d.simple[j]: LocElem.of(ctx, -c)}))
        for label, table in oracles:
            for w in sorted(set(got) | set(table)):
                bad = _compare(got.get(w, zero), table.get(w, zero), D)
                if bad:
                    return False, {"pair": f"{i + 1},{j + 1}", "oracle": label, "element": w.word_str(), **bad}
    return True, {}


def _sigma(ctx, D, words):
    d = ctx.datum
    alg = TwistedAlgebra(ctx)
    checked = []
    for i, j in _pairs(d):
        if d.m(i, j) != 3:
            continue
        s = sigma_ij(alg, i, j)
        bad = _compare(s, sigma_ij(alg, j, i), D)
        if bad:
            return False, {"pair": f"{i + 1},{j + 1}", "property": "symmetry", **bad}
        for k in (i, j):
            delta = alg.delta(d.simple[k])
            diff = equal_to(delta * TwistedElem(ctx, {d.identity: s}), TwistedElem(ctx, {d.identity: s}) * delta, D)
            if diff is not None:
                return False, {"pair": f"{i + 1},{j + 1}", "property": f"commutes with delta_{k + 1}", **_twisted_witness(diff)}
        if alg.kappa_zero():
            expected = ctx.x(d.gamma()) ** 2 * ctx.kappa_pair(d.alpha(i), d.alpha(j)) * 4
            bad = _compare(s, expected, D)
            if bad:
                return False, {"pair": f"{i + 1},{j + 1}", "property": "zero branch value", **bad}
        checked.append(f"{i + 1},{j + 1}")
    return True, {"pairs": checked}


def _action_unit(ctx, D, words):
    alg = TwistedAlgebra(ctx)
    expected = ctx.one() if alg.kappa_zero() else ctx.mu_at(ctx.x(ctx.datum.gamma()))
    for i in range(ctx.datum.rank):
        got = act_on(alg.T(i), ctx.one(), D)
        bad = _compare(got.series, expected, D)
        if bad:
            return False, {"simple": i + 1, **bad}
    return True, {}


def _degenerate_shadow(ctx, D, words):
    d = ctx.datum
    alg = TwistedAlgebra(ctx)
    xg = ctx.x(d.gamma())
    for i in range(d.rank):
        for k in range(d.rank):
            lam = d.omega(k)
            got = commutation_defect(alg, i, ctx.x(lam), "T", D)
            expected = xg * (2 * d.coroot_pairing(d.alpha(i), lam))
            bad = _compare(got, expected, D)
            if bad:
                return False, {"simple": i + 1, "weight": list(lam), **bad}
    return True, {}


def _periodic_shadow(ctx, D, words):
    d = ctx.datum
    alg = TwistedAlgebra(ctx)
    beta = ctx.const(ctx.law.values["beta"])
    t = ctx.one() - beta * ctx.x(_neg(d.gamma()))
    t_inv = t.invert_unit()
    for i in range(d.rank):
        T = alg.T(i)
        diff = equal_to((T + alg.scalar(t_inv)) * (T - alg.scalar(t)), TwistedElem(ctx), D)
        if diff is not None:
            return False, {"simple": i + 1, **_twisted_witness(diff)}
    return True, {"t": t.render()}


# transport checks -------------------------------------------------------------------


def _transport_map(ctx: FGAContext) -> TransportMap:
    memo = _memo(ctx)
    if "transport" not in memo:
        memo["transport"] = TransportMap(ctx)
    return memo["transport"]


def _transport_generators(checker):
    def check(ctx, D, words):
        tmap = _transport_map(ctx)
        units = {}
        for i in range(ctx.datum.rank):
            words[f"s{i + 1}"] = str(i + 1)
            res = checker(tmap, i, D)
            if not res.ok:
                return False, {"simple": i + 1, **res.witness}
            units[f"s{i + 1}"] = res.witness
        return True, units

    return check


def _transport_weyl(ctx, D, words):
    tmap = _transport_map(ctx)
    d = ctx.datum
    for phi in _samples(ctx, 23, count=2):
        for k, s in enumerate(d.simple):
            left = tmap.series(ctx.act(s, phi))
            right = tmap.target.act(s, tmap.series(phi))
            diff = left.first_difference(right, D)
            if diff is not None:
                return False, {"simple": k + 1, "phi": phi.render(), **_loc_witness(diff)}
    return True, {}


# suites ----------------------------------------------------------------------------


def _datum(datum) -> RootDatum:
    return datum if isinstance(datum, RootDatum) else build_datum(datum)


def suite_law(law: LawSpec, degree: int = DEFAULT_DEGREE) -> list[Report]:
    spec = normalize_law(law, degree)
    runner = _Runner(spec, build_datum("A2"), degree, 0)
    runner.run("law.axioms", _law_axioms)
    runner.run("law.formal_inverse", _law_inverse)
    runner.run("law.mu_pairing", _law_mu)
    runner.run("law.exp_log", _law_exp_log)
    for r in runner.reports:
        r.datum = "-"
    return runner.reports


# name -> (check function, family, fixed slack or None for the family slack)
_REGISTRY = {
    "demazure.square": (_square, "demazure", None),
    "demazure.commutation": (_commutation("X", 101), "demazure", None),
    # the fraction form has four distinct denominator factors; no braid words are involved
    "demazure.kappa_pair": (_kappa_pair, "demazure", 4),
    "demazure.braid": (_braid, "demazure", None),
    "demazure.kappa_vanishing": (_kappa_vanishing, "demazure", None),
    "demazure.specialization": (_specialization, "demazure", None),
    "demazure.basis_roundtrip": (_roundtrip("X"), "demazure", None),
    "demazure.action_homomorphism": (_action_hom, "demazure", None),
    "demazure.xi_membership": (_xi_check, "demazure", None),
    "hecke.commutation": (_commutation("T", 202), "hecke", None),
    "hecke.quadratic": (_quadratic, "hecke", None),
    "hecke.quadratic_factored": (_quadratic_factored, "hecke", None),
    "hecke.braid": (_hecke_braid, "hecke", None),
    "hecke.sigma": (_sigma, "hecke", None),
    "hecke.action_unit": (_action_unit, "hecke", None),
    "hecke.degenerate_shadow": (_degenerate_shadow, "hecke", None),
    "hecke.periodic_shadow": (_periodic_shadow, "hecke", None),
    "hecke.basis_roundtrip": (_roundtrip("T"), "hecke", None),
    "transport.demazure": (_transport_generators(transport_demazure_check), "transport", None),
    "transport.weyl": (_transport_weyl, "transport", None),
    "transport.hecke": (_transport_generators(transport_hecke_check), "hecke", None),
}


def _runner_for(family: str, spec: LawSpec, datum: RootDatum, degree: int) -> _Runner:
    d = datum.with_hecke(family == "hecke")
    return _Runner(spec, d, degree, x_slack(d) if family == "demazure" else 2)


def _run(runner: _Runner, name: str) -> Report:
    fn, _, slack = _REGISTRY[name]
    return runner.run(name, fn, extra=0 if slack is None else slack - runner.slack)


def run_check(name: str, law: LawSpec, datum, degree: int = DEFAULT_DEGREE) -> Report:
    """Run one named demazure, hecke or transport check on its own."""
    if name not in _REGISTRY:
        raise ValueError(f"unknown check {name!r}; expected one of {sorted(_REGISTRY)}")
    spec = normalize_law(law, degree)
    return _run(_runner_for(_REGISTRY[name][1], spec, _datum(datum), degree), name)


def suite_demazure(law: LawSpec, datum, degree: int = DEFAULT_DEGREE) -> list[Report]:
    spec = normalize_law(law, degree)
    d = _datum(datum)
    runner = _runner_for("demazure", spec, d, degree)
    names = ["demazure.square", "demazure.commutation", "demazure.kappa_pair", "demazure.braid"]
    if d.rank > 1:
        names.append("demazure.kappa_vanishing")
    if _law_kappa_constant(context(spec, runner.datum, degree + runner.slack)) is not None:
        names.append("demazure.specialization")
    names += ["demazure.basis_roundtrip", "demazure.action_homomorphism"]
    if any(d.m(i, j) == 6 for i, j in _pairs(d)):
        names.append("demazure.xi_membership")
    for name in names:
        _run(runner, name)
    return runner.reports


def suite_hecke(law: LawSpec, datum, degree: int = DEFAULT_DEGREE) -> list[Report]:
    spec = normalize_law(law, degree)
    runner = _runner_for("hecke", spec, _datum(datum), degree)
    names = ["hecke.commutation", "hecke.quadratic", "hecke.quadratic_factored", "hecke.braid", "hecke.sigma", "hecke.action_unit"]
    if spec.kind == "additive":
        names.append("hecke.degenerate_shadow")
    if spec.kind == "multiplicative":
        names.append("hecke.periodic_shadow")
    names.append("hecke.basis_roundtrip")
    for name in names:
        _run(runner, name)
    return runner.reports


def suite_transport(law: LawSpec, datum, degree: int = DEFAULT_DEGREE, hecke: bool = False) -> list[Report]:
    spec = normalize_law(law, degree)
    d = _datum(datum)
    runner = _runner_for("transport", spec, d, degree)
    _run(runner, "transport.demazure")
    _run(runner, "transport.weyl")
    out = runner.reports
    if hecke:
        hr = _runner_for("hecke", spec, d, degree)
        _run(hr, "transport.hecke")
        out = out + hr.reports
    return out


def probe_xi_membership(law: LawSpec, degree: int = 5) -> Report:
    spec = normalize_law(law, degree)
    d = build_datum("G2")
    runner = _Runner(spec, d, degree, x_slack(d) - 2)
    return runner.run("probe.xi_membership", _xi_check)


SUITES = {"law", "demazure", "hecke", "transport"}


def run_cell(cell: Cell) -> list[Report]:
    spec = normalize_law(cell.law, cell.degree)
    try:
        build_law(spec, cell.degree, check_axioms=True)
    except AlgebraError as exc:
        return [
            Report(
                check="law.build",
                law=spec.describe(),
                datum=cell.datum,
                degree=cell.degree,
                status="fail",
                witness={"error": type(exc).__name__, "message": str(exc)},
            )
        ]
    out: list[Report] = []
    if "law" in cell.suites:
        out += suite_law(spec, cell.degree)
    if "demazure" in cell.suites:
        out += suite_demazure(spec, cell.datum, cell.degree)
    if "hecke" in cell.suites:
        out += suite_hecke(spec, cell.datum, cell.degree)
    if "transport" in cell.suites:
        out += suite_transport(spec, cell.datum, cell.degree, hecke="hecke" in cell.suites)
    return out


def suite_all(config: VerifyConfig | None = None) -> list[Report]:
    config = default_config() if config is None else config
    cells = list(config.cells)
    if config.workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            chunks = list(pool.map(run_cell, cells))
    else:
        chunks = [run_cell(c) for c in cells]
    seen, out = set(), []
    for chunk in chunks:
        for r in chunk:
            key = json.dumps(r.to_dict(timing=False), sort_keys=True)
            if key not in seen:
                seen.add(key)
                out.append(r)
    return sorted(out, key=Report.sort_key)
