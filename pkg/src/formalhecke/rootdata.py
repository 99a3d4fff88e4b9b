"""Root data and finite Weyl groups in fundamental-weight coordinates.

Weights are integer tuples in the basis of fundamental weights, so the simple
root alpha_j has coordinates given by column j of the Cartan matrix and the
pairing <alpha_i^vee, lambda> is the i-th coordinate.  An optional extra
coordinate carries the rank-one factor gamma, fixed by the Weyl group.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import NotFiniteType

Weight = tuple[int, ...]
Matrix = tuple[tuple[int, ...], ...]

MAX_ORDER = 48

BUILTIN_CARTAN: dict[str, list[list[int]]] = {
    "A1xA1": [[2, 0], [0, 2]],
    "A2": [[2, -1], [-1, 2]],
    # <alpha_1^vee, alpha_2> = -1 and <alpha_2^vee, alpha_1> = -2: alpha_1 is long
    "B2": [[2, -1], [-2, 2]],
    # <alpha_1^vee, alpha_2> = -1 and <alpha_2^vee, alpha_1> = -3: alpha_1 is long
    "G2": [[2, -1], [-3, 2]],
    "A3": [[2, -1, 0], [-1, 2, -1], [0, -1, 2]],
    "B3": [[2, -1, 0], [-1, 2, -1], [0, -2, 2]],
}

M_FROM_PRODUCT = {0: 2, 1: 3, 2: 4, 3: 6}


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


def _apply(m: Matrix, v: Weight) -> Weight:
    return tuple(sum(m[i][k] * v[k] for k in range(len(v))) for i in range(len(m)))


@dataclass(frozen=True, eq=False)
class WeylElement:
    """Weyl group element: integer action on weights plus canonical reduced word."""

    matrix: Matrix
    word: tuple[int, ...]
    datum: "RootDatum" = field(repr=False)

    @property
    def length(self) -> int:
        return len(self.word)

    def word_str(self) -> str:
        """Word with 1-based simple-reflection indices, ``e`` for the identity."""
        return "".join(str(i + 1) for i in self.word) or "e"

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash(self.matrix)

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return self.datum.element(_matmul(self.matrix, other.matrix))

    def inverse(self) -> "WeylElement":
        return self.datum.inverse(self)

    def act(self, weight: Weight) -> Weight:
        """w(lambda); a trailing gamma coordinate, if present, is fixed."""
        n = self.datum.rank
        head = _apply(self.matrix, weight[:n])
        return head + tuple(weight[n:])

    def __lt__(self, other: "WeylElement") -> bool:
        return (self.length, self.word) < (other.length, other.word)

    def __repr__(self) -> str:
        return f"W[{self.word_str()}]"


class RootDatum:
    """Cartan matrix, roots and the enumerated Weyl group."""

    def __init__(self, cartan, tag: str | None = None, hecke: bool = False):
        A = tuple(tuple(int(x) for x in row) for row in cartan)
        n = len(A)
        if n == 0 or any(len(r) != n for r in A):
            raise ValueError("Cartan matrix must be square and nonempty")
        if any(A[i][i] != 2 for i in range(n)):
            raise ValueError("Cartan matrix needs 2 on the diagonal")
        for i in range(n):
            for j in range(n):
                if i != j:
                    if A[i][j] > 0 or (A[i][j] == 0) != (A[j][i] == 0):
                        raise ValueError("not a generalized Cartan matrix")
                    if A[i][j] * A[j][i] >= 4:
                        raise NotFiniteType(f"s_{i+1} s_{j+1} has infinite order")
        self.cartan = A
        self.rank = n
        self.tag = tag or "cartan" + json.dumps([list(r) for r in A]).replace(" ", "")
        self.hecke = hecke
        self.simple_roots: tuple[Weight, ...] = tuple(tuple(A[i][j] for i in range(n)) for j in range(n))
        ident = tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
        self.reflections: tuple[Matrix, ...] = tuple(
            tuple(
                tuple(ident[r][c] - self.simple_roots[i][r] * int(c == i) for c in range(n))
                for r in range(n)
            )
            for i in range(n)
        )
        self._enumerate(ident)
        self._roots()

    # construction ---------------------------------------------------------
    def _enumerate(self, ident: Matrix) -> None:
        seen = {ident: ()}
        queue = deque([ident])
        while queue:
            m = queue.popleft()
            for i, s in enumerate(self.reflections):
                nm = _matmul(s, m)
                if nm not in seen:
                    seen[nm] = None
                    if len(seen) > MAX_ORDER:
                        raise NotFiniteType(f"Weyl group larger than {MAX_ORDER} elements is not supported")
                    queue.append(nm)
        self._matrices = list(seen)

    def _roots(self) -> None:
        roots = set()
        for m in self._matrices:
            for a in self.simple_roots:
                roots.add(_apply(m, a))
        self.roots = sorted(roots)
        self.positive_roots = sorted(
            (r for r in roots if self._is_positive(r)), key=lambda r: (sum(self.root_coords(r)), self.root_coords(r))
        )
        self._positive_set = set(self.positive_roots)
        # canonical words by descent-following: smallest i with w^{-1}(alpha_i) < 0
        self._by_matrix: dict[Matrix, WeylElement] = {}
        for m in self._matrices:
            self._by_matrix[m] = WeylElement(m, self._canonical_word(m), self)
        self.elements = sorted(self._by_matrix.values(), key=lambda w: (w.length, w.word))
        self.identity = self.elements[0]
        self.simple = tuple(self._by_matrix[s] for s in self.reflections)
        self.longest = self.elements[-1]
        self._inverse = {}
        for w in self.elements:
            for v in self.elements:
                if _matmul(w.matrix, v.matrix) == self.identity.matrix:
                    self._inverse[w.matrix] = v
                    break

    def root_coords(self, weight: Weight) -> tuple[Fraction, ...]:
        """Coordinates of a weight in the simple-root basis."""
        n = self.rank
        A = [[Fraction(self.cartan[i][j]) for j in range(n)] + [Fraction(weight[i])] for i in range(n)]
        for c in range(n):
            p = next(r for r in range(c, n) if A[r][c] != 0)
            A[c], A[p] = A[p], A[c]
            for r in range(n):
                if r != c and A[r][c] != 0:
                    f = A[r][c] / A[c][c]
                    A[r] = [x - f * y for x, y in zip(A[r], A[c])]
        return tuple(A[i][n] / A[i][i] for i in range(n))

    def _is_positive(self, root: Weight) -> bool:
        c = self.root_coords(root)
        return all(x >= 0 for x in c)

    def _canonical_word(self, m: Matrix) -> tuple[int, ...]:
        word = []
        while True:
            inv_cols = self._inverse_matrix(m)
            for i, a in enumerate(self.simple_roots):
                img = _apply(inv_cols, a)
                if not self._is_positive(img):
                    word.append(i)
                    m = _matmul(self.reflections[i], m)
                    break
            else:
                return tuple(word)

    def _inverse_matrix(self, m: Matrix) -> Matrix:
        # Weyl group elements have finite order; m^{-1} = m^{k-1}
        p = m
        prev = None
        ident = tuple(tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank))
        while p != ident:
            prev = p
            p = _matmul(p, m)
        return prev if prev is not None else ident

    # queries ----------------------------------------------------------------
    def element(self, matrix: Matrix) -> WeylElement:
        return self._by_matrix[matrix]

    def inverse(self, w: WeylElement) -> WeylElement:
        return self._inverse[w.matrix]

    def from_word(self, word) -> WeylElement:
        """Element for a word given as 0-based indices or a string like ``"121"``."""
        if isinstance(word, str):
            word = [] if word in ("", "e") else [int(ch) - 1 for ch in word]
        m = self.identity.matrix
        for i in word:
            if not 0 <= i < self.rank:
                raise ValueError(f"simple reflection index {i + 1} out of range")
            m = _matmul(m, self.reflections[i])
        return self._by_matrix[m]

    def reflect(self, i: int, weight: Weight) -> Weight:
        """s_i(lambda) = lambda - <alpha_i^vee, lambda> alpha_i (gamma coordinate fixed)."""
        a = self.simple_roots[i]
        k = weight[i]
        n = self.rank
        return tuple(weight[r] - k * a[r] for r in range(n)) + tuple(weight[n:])

    def m(self, i: int, j: int) -> int:
        if i == j:
            return 1
        return M_FROM_PRODUCT[self.cartan[i][j] * self.cartan[j][i]]

    def order_of_product(self, i: int, j: int) -> int:
        w = self.simple[i] * self.simple[j]
        p, k = w, 1
        while p != self.identity:
            p, k = p * w, k + 1
        return k

    def is_positive_root(self, root: Weight) -> bool:
        return tuple(root[: self.rank]) in self._positive_set

    def inversion_set(self, w: WeylElement) -> list[Weight]:
        return [a for a in self.positive_roots if _apply(w.matrix, a) not in self._positive_set]

    def reflection_of(self, root: Weight) -> WeylElement:
        """s_alpha for any root alpha, as w s_i w^{-1} with alpha = w(alpha_i)."""
        root = tuple(root[: self.rank])
        for w in self.elements:
            for i, a in enumerate(self.simple_roots):
                if w.act(a) == root:
                    return w * self.simple[i] * w.inverse()
        raise ValueError(f"{root} is not a root")

    def coroot_pairing(self, root: Weight, weight: Weight) -> int:
        """<alpha^vee, lambda> via s_alpha(lambda) = lambda - <alpha^vee, lambda> alpha."""
        s = self.reflection_of(root)
        diff = [a - b for a, b in zip(weight[: self.rank], s.act(weight)[: self.rank])]
        for d, r in zip(diff, root):
            if r:
                return d // r
        return 0

    # weights ------------------------------------------------------------------
    @property
    def width(self) -> int:
        """Number of coordinates of a weight (rank, plus one with gamma)."""
        return self.rank + (1 if self.hecke else 0)

    def weight(self, *coords: int) -> Weight:
        w = tuple(coords) + (0,) * (self.width - len(coords))
        if len(w) != self.width:
            raise ValueError(f"weight {coords} has too many coordinates")
        return w

    def alpha(self, i: int) -> Weight:
        return self.simple_roots[i] + ((0,) if self.hecke else ())

    def omega(self, i: int) -> Weight:
        return tuple(int(k == i) for k in range(self.width))

    def gamma(self) -> Weight:
        if not self.hecke:
            raise ValueError("datum has no gamma factor")
        return (0,) * self.rank + (1,)

    def lift(self, root: Weight) -> Weight:
        return tuple(root[: self.rank]) + ((0,) if self.hecke else ())

    def with_hecke(self, hecke: bool = True) -> "RootDatum":
        return build_datum(self.tag, hecke=hecke) if self.tag in BUILTIN_CARTAN else RootDatum(self.cartan, self.tag, hecke)

    def describe(self) -> str:
        return self.tag + ("+gamma" if self.hecke else "")

    def __repr__(self) -> str:
        return f"RootDatum({self.describe()})"


_CACHE: dict[tuple, RootDatum] = {}


def build_datum(tag_or_cartan, hecke: bool = False) -> RootDatum:
    """Builtin tag (A1xA1, A2, B2, G2, A3, B3), a Cartan matrix, or a JSON file path."""
    if isinstance(tag_or_cartan, str):
        if tag_or_cartan in BUILTIN_CARTAN:
            key = (tag_or_cartan, hecke)
            if key not in _CACHE:
                _CACHE[key] = RootDatum(BUILTIN_CARTAN[tag_or_cartan], tag_or_cartan, hecke)
            return _CACHE[key]
        path = Path(tag_or_cartan)
        if path.exists():
            return RootDatum(json.loads(path.read_text()), None, hecke)
        raise ValueError(f"unknown root datum {tag_or_cartan!r}")
    return RootDatum(tag_or_cartan, None, hecke)
