"""Truncated multivariate power series with honest precision tracking.

Storage is a flat sparse map from a packed integer key to an ``mpq``
coefficient.  A key packs, from the most significant field down, the total
degree in the series variables, each variable exponent, and each parameter
exponent (offset so invertible parameters may carry negative exponents).
Multiplying monomials is integer addition of keys, and sorting keys sorts by
total degree first, which lets products stop early at the truncation bound.

Every series carries ``prec``: coefficients of total degree ``<= prec`` are
correct, everything above is unknown.
"""
from __future__ import annotations

import heapq
import re
from bisect import bisect_left
from functools import lru_cache
from typing import Iterable, Mapping

from gmpy2 import mpq

from .coeffring import ParamElement, ParamRing, format_rational, join_signed, to_mpq
from .errors import (
    NotAUnit,
    NotDivisible,
    PrecisionExhausted,
    RingMismatch,
    ZeroConstantViolation,
)

FIELD_BITS = 16
FIELD_MASK = (1 << FIELD_BITS) - 1
PARAM_OFFSET = 1 << (FIELD_BITS - 1)
ZERO = mpq(0)
ONE = mpq(1)


class SeriesRing:
    """Variable names plus a parameter ring, with the key-packing layout."""

    def __init__(self, variables: tuple[str, ...], params: ParamRing):
        self.vars = tuple(variables)
        self.params = params
        nv, npar = len(self.vars), len(params)
        self.pbits = FIELD_BITS * npar
        self.pshift = tuple(FIELD_BITS * (npar - 1 - j) for j in range(npar))
        self.vshift = tuple(FIELD_BITS * (npar + nv - 1 - i) for i in range(nv))
        self.dshift = FIELD_BITS * (npar + nv)
        self.one = sum(PARAM_OFFSET << s for s in self.pshift)
        self.pmask = (1 << self.pbits) - 1
        self.deg_unit = 1 << self.dshift
        self.var_unit = tuple((1 << s) + self.deg_unit for s in self.vshift)

    def __repr__(self) -> str:
        return f"SeriesRing({self.vars}, {self.params.tokens()})"

    # packing -----------------------------------------------------------
    def encode(self, xexps: Iterable[int], pexps: Iterable[int] | None = None) -> int:
        xexps = tuple(xexps)
        key = sum(xexps) << self.dshift
        for e, s in zip(xexps, self.vshift):
            if e < 0:
                raise ValueError("negative variable exponent")
            key |= e << s
        if pexps is None:
            return key | self.one
        for e, s in zip(pexps, self.pshift):
            key |= (e + PARAM_OFFSET) << s
        return key

    def decode(self, key: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        x = tuple((key >> s) & FIELD_MASK for s in self.vshift)
        p = tuple(((key >> s) & FIELD_MASK) - PARAM_OFFSET for s in self.pshift)
        return x, p

    def xexps(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & FIELD_MASK for s in self.vshift)

    def pkey_of(self, p: ParamElement) -> dict[int, mpq]:
        """Param element as a degree-zero term map."""
        if p.ring != self.params:
            raise RingMismatch("parameter ring mismatch")
        out = {}
        for e, c in p.terms.items():
            k = 0
            for x, s in zip(e, self.pshift):
                k |= (x + PARAM_OFFSET) << s
            out[k] = c
        return out

    def param_of(self, terms: Mapping[int, mpq]) -> ParamElement:
        return ParamElement(self.params, {self.decode(k)[1]: c for k, c in terms.items()})

    # constructors ------------------------------------------------------
    def zero(self, prec: int) -> "Series":
        return Series(self, {}, prec)

    def const(self, value, prec: int) -> "Series":
        if isinstance(value, ParamElement):
            return Series(self, self.pkey_of(value), prec)
        c = to_mpq(value)
        return Series(self, {self.one: c} if c else {}, prec)

    def var(self, name: str, prec: int) -> "Series":
        i = self.vars.index(name)
        return Series(self, {self.one + self.var_unit[i]: ONE} if prec >= 1 else {}, prec)

    def monomial(self, xexps, coeff=1, prec: int = 0) -> "Series":
        c = coeff if isinstance(coeff, ParamElement) else self.params.const(coeff)
        shift = self.encode(xexps, (0,) * len(self.params)) - self.one
        terms = {k + shift: v for k, v in self.pkey_of(c).items()}
        return Series(self, terms, prec)._truncated(prec)

    def from_terms(self, terms: Mapping[tuple, object], prec: int) -> "Series":
        """Build from ``{(xexps, pexps): coeff}`` or ``{xexps: coeff}``."""
        out: dict[int, mpq] = {}
        npar = len(self.params)
        for mono, c in terms.items():
            if mono and isinstance(mono[0], tuple):
                xexps, pexps = mono
            else:
                xexps, pexps = mono, (0,) * npar
            if isinstance(c, ParamElement):
                base = self.encode(xexps, (0,) * npar) - self.one
                for k, v in self.pkey_of(c).items():
                    out[k + base] = out.get(k + base, ZERO) + v
            else:
                k = self.encode(xexps, pexps)
                out[k] = out.get(k, ZERO) + to_mpq(c)
        return Series(self, {k: v for k, v in out.items() if v}, prec)._truncated(prec)

    def parse(self, text: str, prec: int) -> "Series":
        """Parse canonical text such as ``u + v - 3/2*beta*u^2*v``."""
        return _parse_series(self, text, prec)


@lru_cache(maxsize=None)
def series_ring(variables: tuple[str, ...], params: ParamRing) -> SeriesRing:
    """Interned ring so identity comparison is enough on hot paths."""
    return SeriesRing(variables, params)


def same_layout(a: SeriesRing, b: SeriesRing) -> bool:
    return a.vars == b.vars and a.params == b.params


def _mul_terms(a: list, b: list, cap: int, ring: SeriesRing) -> dict[int, mpq]:
    """Product of two sorted term lists, dropping total degree > cap."""
    if len(a) > len(b):
        a, b = b, a
    if not a:
        return {}
    ds = ring.dshift
    one = ring.one
    bkeys = [k for k, _ in b]
    out: dict[int, mpq] = {}
    get = out.get
    for k1, c1 in a:
        room = cap - (k1 >> ds)
        if room < 0:
            break
        stop = bisect_left(bkeys, (room + 1) << ds)
        base = k1 - one
        for idx in range(stop):
            k2, c2 = b[idx]
            k = base + k2
            out[k] = get(k, ZERO) + c1 * c2
    return {k: c for k, c in out.items() if c}


class Series:
    """Immutable truncated power series; see module docstring for semantics."""

    __slots__ = ("ring", "terms", "prec", "_items", "_val", "__weakref__", "cache")

    def __init__(self, ring: SeriesRing, terms: dict[int, mpq], prec: int):
        self.ring = ring
        self.terms = terms
        self.prec = prec
        self._items = None
        self._val = None
        self.cache = None

    # basic queries -----------------------------------------------------
    def items(self) -> list[tuple[int, mpq]]:
        if self._items is None:
            self._items = sorted(self.terms.items())
        return self._items

    def degree_of(self, key: int) -> int:
        return key >> self.ring.dshift

    def valuation(self) -> int:
        """Lowest total degree with a nonzero coefficient; ``prec + 1`` for zero."""
        if self._val is None:
            self._val = (self.items()[0][0] >> self.ring.dshift) if self.terms else self.prec + 1
        return self._val

    def max_degree(self) -> int:
        return (self.items()[-1][0] >> self.ring.dshift) if self.terms else -1

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all((k >> self.ring.dshift) == 0 for k in self.terms)

    def constant_term(self) -> ParamElement:
        ds = self.ring.dshift
        return self.ring.param_of({k: c for k, c in self.terms.items() if (k >> ds) == 0})

    def coefficient(self, xexps: tuple[int, ...]) -> ParamElement:
        r = self.ring
        base = r.encode(xexps, (0,) * len(r.params)) - r.one
        lo = base
        hi = base + (1 << r.pbits)
        return r.param_of({k - base: c for k, c in self.terms.items() if lo <= k < hi})

    def homogeneous(self, d: int) -> "Series":
        ds = self.ring.dshift
        return Series(self.ring, {k: c for k, c in self.terms.items() if (k >> ds) == d}, self.prec)

    def _truncated(self, prec: int) -> "Series":
        ds = self.ring.dshift
        lim = (prec + 1) << ds
        if all(k < lim for k in self.terms):
            return Series(self.ring, self.terms, prec)
        return Series(self.ring, {k: c for k, c in self.terms.items() if k < lim}, prec)

    def truncate(self, prec: int) -> "Series":
        """Forget coefficients above ``prec`` (never raises precision)."""
        return self._truncated(min(prec, self.prec))

    def with_prec(self, prec: int) -> "Series":
        """Same terms at a lower claimed precision."""
        return self.truncate(prec)

    # arithmetic ---------------------------------------------------------
    def _same(self, other: "Series") -> None:
        if other.ring is not self.ring and not same_layout(other.ring, self.ring):
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other) -> "Series":
        if not isinstance(other, Series):
            return self._add_scalar(other)
        self._same(other)
        prec = min(self.prec, other.prec)
        lim = (prec + 1) << self.ring.dshift
        out = {k: c for k, c in self.terms.items() if k < lim}
        for k, c in other.terms.items():
            if k < lim:
                v = out.get(k, ZERO) + c
                if v:
                    out[k] = v
                else:
                    out.pop(k, None)
        return Series(self.ring, out, prec)

    __radd__ = __add__

    def _add_scalar(self, value) -> "Series":
        return self + self.ring.const(value, self.prec)

    def __neg__(self) -> "Series":
        return Series(self.ring, {k: -c for k, c in self.terms.items()}, self.prec)

    def __sub__(self, other) -> "Series":
        return self + (-other)

    def __rsub__(self, other) -> "Series":
        return (-self) + other

    def __mul__(self, other) -> "Series":
        if isinstance(other, Series):
            self._same(other)
            va, vb = self.valuation(), other.valuation()
            prec = min(self.prec + vb, other.prec + va)
            return Series(self.ring, _mul_terms(self.items(), other.items(), prec, self.ring), prec)
        if isinstance(other, ParamElement):
            return self.scale_param(other)
        c = to_mpq(other)
        if not c:
            return Series(self.ring, {}, self.prec)
        return Series(self.ring, {k: v * c for k, v in self.terms.items()}, self.prec)

    __rmul__ = __mul__

    def mul_to(self, other: "Series", cap: int) -> "Series":
        """Product computed only up to ``cap`` (precision capped accordingly)."""
        self._same(other)
        prec = min(self.prec + other.valuation(), other.prec + self.valuation(), cap)
        return Series(self.ring, _mul_terms(self.items(), other.items(), prec, self.ring), prec)

    def scale_param(self, p: ParamElement) -> "Series":
        pk = sorted(self.ring.pkey_of(p).items())
        return Series(self.ring, _mul_terms(self.items(), pk, self.prec, self.ring), self.prec)

    def __pow__(self, n: int) -> "Series":
        if n < 0:
            return self.invert_unit() ** (-n)
        out = self.ring.const(1, self.prec)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, xexps: tuple[int, ...]) -> "Series":
        """Multiply by the monomial ``x^xexps`` (exact; precision rises)."""
        r = self.ring
        delta = r.encode(xexps, (0,) * len(r.params)) - r.one
        return Series(r, {k + delta: c for k, c in self.terms.items()}, self.prec + sum(xexps))

    # inversion and division ------------------------------------------------
    def invert_unit(self) -> "Series":
        """Multiplicative inverse; the constant term must be a monomial unit."""
        c0 = self.constant_term()
        try:
            inv0 = c0.invert()
        except NotAUnit as exc:
            raise NotAUnit(f"constant term {c0} is not a unit") from exc
        r = self.ring
        P = self.prec
        b = r.pkey_of(inv0)
        p = 0
        while p < P:
            p2 = min(2 * p + 1, P)
            bi = sorted(b.items())
            ab = _mul_terms(self.items(), bi, p2, r)
            err = {k: -c for k, c in ab.items()}
            err[r.one] = err.get(r.one, ZERO) + 1
            corr = _mul_terms(bi, sorted((k, c) for k, c in err.items() if c), p2, r)
            for k, c in corr.items():
                v = b.get(k, ZERO) + c
                if v:
                    b[k] = v
                else:
                    b.pop(k, None)
            p = p2
        return Series(r, b, P)

    def div_exact(self, b: "Series") -> "Series":
        """Quotient ``q`` with ``b*q = self``; graded solve against b's lowest part."""
        self._same(b)
        if b.is_zero():
            raise NotDivisible("division by a series that is zero to its known degree")
        r = self.ring
        ds = r.dshift
        v = b.valuation()
        # an error in b above b.prec moves q only from degree val(q) + b.prec - v + 1 on
        qprec = min(self.prec, b.prec + self.valuation() - v) - v
        if qprec < 0:
            raise PrecisionExhausted(f"known degree {self.prec} is below divisor valuation {v}")
        top = qprec + v
        lim_low = v << ds
        if any(k < lim_low for k in self.terms):
            raise NotDivisible("dividend has terms below the divisor valuation", degree=0)
        if v == 0:
            return self.truncate(top) * b.truncate(top).invert_unit()
        pb = r.pbits
        low = [(k, c) for k, c in b.items() if (k >> ds) == v]
        rest = [(k, c) for k, c in b.items() if (k >> ds) != v]
        lowx: dict[int, dict[int, mpq]] = {}
        for k, c in low:
            lowx.setdefault(k >> pb, {})[k & r.pmask] = c
        lead_x = max(lowx)
        lead_p = r.param_of(lowx[lead_x])
        try:
            inv = lead_p.invert()
        except NotAUnit as exc:
            raise NotAUnit(f"leading coefficient {lead_p} of the divisor is not a unit") from exc
        (inv_k, inv_c), = r.pkey_of(inv).items()
        lead_fields = [(lead_x >> (s - pb)) & FIELD_MASK for s in r.vshift]
        low_list = [(xk, sorted(pm.items())) for xk, pm in lowx.items()]
        one = r.one
        # remainder grouped by degree then x-part
        rem: dict[int, dict[int, dict[int, mpq]]] = {}
        lim = (top + 1) << ds
        for k, c in self.terms.items():
            if k < lim:
                rem.setdefault(k >> ds, {}).setdefault(k >> pb, {})[k & r.pmask] = c
        quotient: dict[int, mpq] = {}
        for e in range(qprec + 1):
            R = rem.pop(e + v, None)
            if not R:
                continue
            heap = [-xk for xk in R]
            heapq.heapify(heap)
            piece: dict[int, mpq] = {}
            while heap:
                xk = -heapq.heappop(heap)
                coeffs = R.pop(xk, None)
                if not coeffs:
                    continue
                for f, s in zip(lead_fields, r.vshift):
                    if ((xk >> (s - pb)) & FIELD_MASK) < f:
                        raise NotDivisible(f"no quotient term at degree {e}", degree=e)
                dx = xk - lead_x
                tq = {}
                for pk, c in coeffs.items():
                    tq[pk + inv_k - one] = c * inv_c
                for pk, c in tq.items():
                    piece[(dx << pb) + pk] = c
                # subtract tq * x^dx * low from R
                for bx, bterms in low_list:
                    tx = dx + bx
                    if tx == xk:
                        continue
                    tgt = R.get(tx)
                    if tgt is None:
                        tgt = R[tx] = {}
                        heapq.heappush(heap, -tx)
                    for pk, c in tq.items():
                        for bk, bc in bterms:
                            kk = pk + bk - one
                            val = tgt.get(kk, ZERO) - c * bc
                            if val:
                                tgt[kk] = val
                            else:
                                tgt.pop(kk, None)
            quotient.update(piece)
            if rest:
                prod = _mul_terms(sorted(piece.items()), rest, top, r)
                for k, c in prod.items():
                    d = rem.setdefault(k >> ds, {}).setdefault(k >> pb, {})
                    pk = k & r.pmask
                    val = d.get(pk, ZERO) - c
                    if val:
                        d[pk] = val
                    else:
                        d.pop(pk, None)
        return Series(r, quotient, qprec)

    # composition --------------------------------------------------------
    def subst(self, images: Mapping[str, "Series"], target: SeriesRing | None = None) -> "Series":
        """Compose: replace each variable by its image series (valuation >= 1)."""
        if target is None:
            target = next(iter(images.values())).ring if images else self.ring
        if target.params != self.ring.params:
            raise RingMismatch("substitution across different parameter rings")
        src = self.ring
        used = [False] * len(src.vars)
        for k in self.terms:
            for i, e in enumerate(src.xexps(k)):
                if e:
                    used[i] = True
        passthrough: dict[int, int] = {}
        active: list[int] = []
        vmin = None
        img_prec = None
        for i, name in enumerate(src.vars):
            img = images.get(name)
            if img is None:
                raise KeyError(f"no image for variable {name}")
            if img.ring is not target and not same_layout(img.ring, target):
                raise RingMismatch("images must share the target ring")
            val = img.valuation()
            if any((k >> target.dshift) == 0 for k in img.terms):
                raise ZeroConstantViolation(f"image of {name} has a nonzero constant term")
            tv = _single_var(img)
            if tv is not None:
                passthrough[i] = tv
                val = 1
            elif used[i]:
                active.append(i)
                img_prec = img.prec if img_prec is None else min(img_prec, img.prec)
            vmin = val if vmin is None else min(vmin, val)
        vmin = 1 if vmin is None else max(vmin, 1)
        prec = (self.prec + 1) * vmin - 1
        # translate each term: active exponents + a target key carrying the rest
        zero_p = (0,) * len(src.params)
        rows = []
        for k, c in self.terms.items():
            xe = src.xexps(k)
            tx = [0] * len(target.vars)
            for i, j in passthrough.items():
                tx[j] += xe[i]
            pk = k & src.pmask
            tkey = target.encode(tx, zero_p) - target.one + pk
            rows.append((tuple(xe[i] for i in active), tkey, c))
        imgs = [images[src.vars[i]] for i in active]
        if imgs:
            # a term of active degree a >= 1 is known through img_prec + (a - 1) * v
            vact = max(min(img.valuation() for img in imgs), 1)
            for exps, tkey, _ in rows:
                a = sum(exps)
                if a:
                    prec = min(prec, img_prec + (a - 1) * vact + (tkey >> target.dshift))
        terms = _horner(rows, imgs, 0, prec, target, {"prec": prec})
        return Series(target, terms, prec)

    def compose_inverse(self) -> "Series":
        """Compositional inverse of a univariate ``c*u + O(u^2)`` (Lagrange inversion)."""
        r = self.ring
        if len(r.vars) != 1:
            raise ValueError("compose_inverse needs a univariate series")
        if any((k >> r.dshift) == 0 for k in self.terms):
            raise ZeroConstantViolation("series to invert has a constant term")
        P = self.prec
        unit = r.var_unit[0]
        h = Series(r, {k - unit: c for k, c in self.terms.items()}, P - 1)
        phi = h.invert_unit()
        out: dict[int, mpq] = {}
        power = r.const(1, P - 1)
        for n in range(1, P + 1):
            power = power.mul_to(phi, P - 1)
            target_deg = n - 1
            for k, c in power.terms.items():
                if (k >> r.dshift) == target_deg:
                    out[k + unit] = c / n
        return Series(r, out, P)

    # calculus helpers -----------------------------------------------------
    def derivative(self, name: str) -> "Series":
        r = self.ring
        i = r.vars.index(name)
        s = r.vshift[i]
        unit = r.var_unit[i]
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & FIELD_MASK
            if e:
                out[k - unit] = c * e
        return Series(r, out, self.prec - 1)

    def integrate(self, name: str) -> "Series":
        r = self.ring
        i = r.vars.index(name)
        s = r.vshift[i]
        unit = r.var_unit[i]
        return Series(r, {k + unit: c / (((k >> s) & FIELD_MASK) + 1) for k, c in self.terms.items()}, self.prec + 1)

    def set_zero(self, name: str) -> "Series":
        r = self.ring
        s = r.vshift[r.vars.index(name)]
        return Series(r, {k: c for k, c in self.terms.items() if not (k >> s) & FIELD_MASK}, self.prec)

    def rename(self, target: SeriesRing, mapping: Mapping[str, str]) -> "Series":
        """Re-encode in ``target`` sending variable ``a`` to variable ``mapping[a]``."""
        src = self.ring
        if target.params != src.params:
            raise RingMismatch("rename across different parameter rings")
        idx = [target.vars.index(mapping[v]) for v in src.vars]
        zero_p = (0,) * len(src.params)
        out = {}
        for k, c in self.terms.items():
            xe = src.xexps(k)
            tx = [0] * len(target.vars)
            for i, j in enumerate(idx):
                tx[j] += xe[i]
            nk = target.encode(tx, zero_p) - target.one + (k & src.pmask)
            out[nk] = out.get(nk, ZERO) + c
        return Series(target, {k: c for k, c in out.items() if c}, self.prec)

    # comparison -------------------------------------------------------------
    def first_difference(self, other: "Series", degree: int):
        """Lowest-degree monomial where the two differ, or None, up to ``degree``."""
        self._same(other)
        if min(self.prec, other.prec) < degree:
            raise PrecisionExhausted(
                f"comparison to degree {degree} needs known degree {degree}, have {min(self.prec, other.prec)}"
            )
        diff = (self - other).truncate(degree)
        if diff.is_zero():
            return None
        k, _ = diff.items()[0]
        mono = self.ring.xexps(k)
        return (
            k >> self.ring.dshift,
            mono,
            str(self.coefficient(mono)),
            str(other.coefficient(mono)),
        )

    def agrees(self, other: "Series", degree: int) -> bool:
        return self.first_difference(other, degree) is None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return same_layout(self.ring, other.ring) and self.prec == other.prec and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((id(self.ring), self.prec, frozenset(self.terms.items())))

    # rendering ----------------------------------------------------------------
    def render(self) -> str:
        """Canonical text: graded-lex in the variable order, parameters likewise."""
        r = self.ring
        rows = []
        for k, c in self.terms.items():
            x, p = r.decode(k)
            rows.append(((sum(x), [-e for e in x], sum(p), [-e for e in p]), c, x, p))
        rows.sort(key=lambda t: t[0])
        parts = []
        for _, c, x, p in rows:
            parts.append(_term_text(c, r.params.names + r.vars, p + x))
        return join_signed(parts)

    def __str__(self) -> str:
        return f"{self.render()} + O({self.prec + 1})"

    __repr__ = __str__


def _term_text(c: mpq, names, exps) -> str:
    factors = []
    for n, k in zip(names, exps):
        if k == 1:
            factors.append(n)
        elif k:
            factors.append(f"{n}^{k}")
    if not factors:
        return format_rational(c)
    body = "*".join(factors)
    if c == 1:
        return body
    if c == -1:
        return "-" + body
    return f"{format_rational(c)}*{body}"


def _single_var(s: Series) -> int | None:
    """Index of v if ``s`` is exactly the variable v, else None."""
    if len(s.terms) != 1:
        return None
    (k, c), = s.terms.items()
    if c != 1:
        return None
    r = s.ring
    for i, u in enumerate(r.var_unit):
        if k == r.one + u:
            return i
    return None


def _horner(rows, imgs, level, prec, target, power_cache) -> dict[int, mpq]:
    """Evaluate ``sum c * tkey * prod imgs^exps`` (rows) by nested Horner.

    After folding in the coefficient of img^j the accumulator is multiplied
    by img j more times, so only degrees <= prec - j * val(img) matter there.
    """
    ds = target.dshift
    lim = (prec + 1) << ds
    if level == len(imgs):
        out: dict[int, mpq] = {}
        for _, tk, c in rows:
            if tk < lim:
                out[tk] = out.get(tk, ZERO) + c
        return {k: c for k, c in out.items() if c}
    groups: dict[int, list] = {}
    for row in rows:
        groups.setdefault(row[0][level], []).append(row)
    img = imgs[level]
    v = max(img.valuation(), 1)
    if level == len(imgs) - 1:
        full = power_cache["prec"]
        powers = power_cache.setdefault(level, [target.const(1, full)])
        top = max(groups)
        while len(powers) <= top:
            powers.append(powers[-1].mul_to(img, full))
        out = {}
        for j, grp in groups.items():
            cap = prec - j * v
            if cap < 0:
                continue
            clim = (cap + 1) << ds
            poly: dict[int, mpq] = {}
            for _, tk, c in grp:
                if tk < clim:
                    poly[tk] = poly.get(tk, ZERO) + c
            if not poly:
                continue
            if j == 0:
                prod = poly
            else:
                prod = _mul_terms(sorted(poly.items()), powers[j].items(), prec, target)
            for k, c in prod.items():
                out[k] = out.get(k, ZERO) + c
        return {k: c for k, c in out.items() if c}
    acc = None
    for j in range(max(groups), -1, -1):
        cap = prec - j * v
        if cap < 0:
            continue
        if acc is not None:
            acc = _mul_terms(sorted(acc.items()), img.items(), cap, target)
        grp = groups.get(j)
        if grp:
            inner = _horner(grp, imgs, level + 1, cap, target, power_cache)
            if acc is None:
                acc = inner
            else:
                for k, c in inner.items():
                    val = acc.get(k, ZERO) + c
                    if val:
                        acc[k] = val
                    else:
                        acc.pop(k, None)
    return acc or {}


_TOKEN = re.compile(r"\s*(?:(\d+(?:/\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(\^)(-?\d+)|([+\-*]))")


def _parse_series(ring: SeriesRing, text: str, prec: int) -> Series:
    pos = 0
    sign = 1
    terms: dict[int, mpq] = {}
    coeff = mpq(1)
    x = [0] * len(ring.vars)
    p = [0] * len(ring.params)
    have_term = False
    last = None

    def flush():
        nonlocal coeff, x, p, have_term
        if have_term:
            k = ring.encode(x, p)
            terms[k] = terms.get(k, ZERO) + sign * coeff
        coeff, x, p, have_term = mpq(1), [0] * len(ring.vars), [0] * len(ring.params), False

    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse series text at offset {pos}: {text[pos:pos+10]!r}")
        pos = m.end()
        num, name, caret, exp, op = m.groups()
        if num:
            coeff *= to_mpq(num)
            have_term = True
            last = None
        elif name:
            if name in ring.vars:
                last = ("x", ring.vars.index(name))
                x[last[1]] += 1
            elif name in ring.params.names:
                last = ("p", ring.params.index(name))
                p[last[1]] += 1
            else:
                raise ValueError(f"unknown symbol {name!r}")
            have_term = True
        elif caret:
            if last is None:
                raise ValueError("exponent without a base")
            e = int(exp)
            if last[0] == "x":
                x[last[1]] += e - 1
            else:
                p[last[1]] += e - 1
        elif op in "+-":
            if have_term:
                flush()
                sign = 1 if op == "+" else -1
            else:
                sign = sign * (1 if op == "+" else -1)
            last = None
        elif op == "*":
            last = None
    flush()
    return Series(ring, {k: c for k, c in terms.items() if c}, prec)._truncated(prec)
