import json
from itertools import product

import pytest
from hypothesis import given, strategies as st

from formalhecke.errors import NotFiniteType
from formalhecke.rootdata import BUILTIN_CARTAN, RootDatum, build_datum

TYPES = [
    ("A1xA1", 4, 2),
    ("A2", 6, 3),
    ("B2", 8, 4),
    ("G2", 12, 6),
    ("A3", 24, 6),
    ("B3", 48, 9),
]


@pytest.mark.parametrize("tag,order,positive", TYPES)
def test_group_and_root_counts(tag, order, positive):
    d = build_datum(tag)
    assert len(d.elements) == order
    assert len(d.positive_roots) == positive
    assert len(d.roots) == 2 * positive
    assert d.longest.length == positive


@pytest.mark.parametrize("tag", [t for t, _, _ in TYPES])
def test_length_is_inversion_count(tag):
    d = build_datum(tag)
    for w in d.elements:
        assert len(d.inversion_set(w)) == w.length
        assert d.from_word(w.word) == w


def _brute_reduced_words(d: RootDatum, w):
    return [word for word in product(range(d.rank), repeat=w.length) if d.from_word(list(word)) == w]


@pytest.mark.parametrize("tag", ["A2", "B2", "G2", "A3"])
def test_canonical_word_is_lex_least_reduced(tag):
    d = build_datum(tag)
    for w in d.elements:
        if w.length > 6:
            continue
        words = _brute_reduced_words(d, w)
        assert words and w.word == min(words)


@pytest.mark.parametrize("tag,pairs", [("A1xA1", {(0, 1): 2}), ("A2", {(0, 1): 3}), ("B2", {(0, 1): 4}), ("G2", {(0, 1): 6}), ("B3", {(0, 1): 3, (0, 2): 2, (1, 2): 4})])
def test_braid_orders(tag, pairs):
    d = build_datum(tag)
    for (i, j), m in pairs.items():
        assert d.m(i, j) == m == d.order_of_product(i, j)


@pytest.mark.parametrize("tag", ["B2", "G2"])
def test_first_simple_root_is_long(tag):
    d = build_datum(tag)
    assert d.cartan[0][1] == -1
    assert d.cartan[1][0] in (-2, -3)


@pytest.mark.parametrize("tag", [t for t, _, _ in TYPES])
def test_reflections_of_roots(tag):
    d = build_datum(tag)
    for a in d.roots:
        s = d.reflection_of(a)
        assert s.act(a) == tuple(-c for c in a)
        assert s * s == d.identity
        assert d.coroot_pairing(a, a) == 2
        assert sorted(s.act(r) for r in d.roots) == d.roots


@pytest.mark.parametrize("tag", ["A2", "B2", "G2"])
def test_simple_root_columns_and_pairing(tag):
    d = build_datum(tag)
    for i in range(d.rank):
        for j in range(d.rank):
            assert d.alpha(j)[i] == d.cartan[i][j]
            assert d.coroot_pairing(d.alpha(i), d.alpha(j)) == d.cartan[i][j]


@given(st.sampled_from(["A2", "B2", "G2", "A3"]), st.lists(st.integers(0, 2), max_size=8), st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_word_action_matches_successive_reflections(tag, word, coords):
    d = build_datum(tag)
    word = [k % d.rank for k in word]
    lam = tuple(coords[: d.rank])
    expected = lam
    for i in reversed(word):
        expected = d.reflect(i, expected)
    assert d.from_word(word).act(lam) == expected


@given(st.sampled_from(["A2", "B2", "G2"]), st.integers(0, 47), st.integers(0, 47))
def test_group_structure(tag, a, b):
    d = build_datum(tag)
    v, w = d.elements[a % len(d.elements)], d.elements[b % len(d.elements)]
    assert (v * w).inverse() == w.inverse() * v.inverse()
    assert v * v.inverse() == d.identity


def test_gamma_coordinate_is_fixed():
    d = build_datum("A2", hecke=True)
    assert d.width == 3
    assert d.alpha(0) == (2, -1, 0)
    g = d.gamma()
    for w in d.elements:
        assert w.act(g) == g
    assert d.describe() == "A2+gamma"
    with pytest.raises(ValueError):
        build_datum("A2").gamma()


@pytest.mark.parametrize(
    "cartan,error",
    [
        ([[2, -2], [-2, 2]], NotFiniteType),
        ([[2, -1], [0, 2]], ValueError),
        ([[2, 1], [1, 2]], ValueError),
        ([[1, 0], [0, 2]], ValueError),
        ([], ValueError),
    ],
)
def test_rejects_bad_cartan(cartan, error):
    with pytest.raises(error):
        RootDatum(cartan)


def test_cartan_from_json_file(tmp_path):
    path = tmp_path / "g2.json"
    path.write_text(json.dumps(BUILTIN_CARTAN["G2"]))
    d = build_datum(str(path))
    assert len(d.elements) == 12
    with pytest.raises(ValueError):
        build_datum("E9")


def test_word_str():
    d = build_datum("B2")
    assert d.identity.word_str() == "e"
    assert d.from_word("21").word_str() == "21"
    with pytest.raises(ValueError):
        d.from_word([2])
