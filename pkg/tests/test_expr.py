from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from formalhecke.expr import (
    BinOp,
    Delta,
    ElaborationError,
    ExprSyntaxError,
    Func,
    Gen,
    Neg,
    Num,
    Param,
    Pow,
    Theta,
    Weight,
    XAtom,
    elaborate,
    needs_gamma,
    parse,
    render,
    walk,
)
from formalhecke.fga import FGAContext
from formalhecke.fgl import LawSpec
from formalhecke.rootdata import build_datum
from formalhecke.twisted import TwistedAlgebra, equal_to

D = 4

leaves = st.one_of(
    st.integers(0, 20).map(lambda n: Num(str(n))),
    st.just(Param("beta")),
    st.tuples(st.integers(-2, 2), st.integers(-2, 2)).filter(any).map(XAtom),
    st.tuples(st.sampled_from("XT"), st.integers(1, 2)).map(lambda t: Gen(*t)),
    st.sampled_from(["e", "1", "21", "121"]).map(Delta),
    st.just(Theta()),
    st.integers(1, 2).map(lambda i: Func("kappa", (Weight(root=i),))),
    st.just(Func("kpair", (Weight(root=1), Weight(coords=(0, 1))))),
)


def _extend(children):
    return st.one_of(
        children.map(Neg),
        st.tuples(st.sampled_from("+-*"), children, children).map(lambda t: BinOp(*t)),
        st.tuples(children, st.integers(0, 3)).map(lambda t: Pow(*t)),
    )


trees = st.recursive(leaves, _extend, max_leaves=8)


@given(trees)
def test_render_parse_roundtrip(tree):
    text = render(tree)
    assert parse(text) == tree
    assert render(parse(text)) == text


@pytest.mark.parametrize(
    "src,tree",
    [
        ("X_1 * X_2", BinOp("*", Gen("X", 1), Gen("X", 2))),
        ("1 + 2 * 3", BinOp("+", Num("1"), BinOp("*", Num("2"), Num("3")))),
        ("(1 + 2) * 3", BinOp("*", BinOp("+", Num("1"), Num("2")), Num("3"))),
        ("1 - 2 - 3", BinOp("-", BinOp("-", Num("1"), Num("2")), Num("3"))),
        ("-X_1^2", Neg(Pow(Gen("X", 1), 2))),
        ("d_121", Delta("121")),
        ("d_e / x(1,0)", BinOp("/", Delta("e"), XAtom((1, 0)))),
        ("kappa([2,-1])", Func("kappa", (Weight(coords=(2, -1)),))),
        ("kpair(1, 2)", Func("kpair", (Weight(root=1), Weight(root=2)))),
        ("mu(x)", None),
    ],
)
def test_parse_examples(src, tree):
    if tree is None:
        with pytest.raises(ExprSyntaxError):
            parse(src)
    else:
        assert parse(src) == tree


@pytest.mark.parametrize(
    "src,pos",
    [
        ("X_1**X_2", 4),
        ("X_1 +", 5),
        ("(1 + 2", 6),
        ("x(1,)", 4),
        ("kappa(1", 7),
        ("1 $ 2", 2),
    ],
)
def test_syntax_error_positions(src, pos):
    with pytest.raises(ExprSyntaxError) as info:
        parse(src)
    assert info.value.pos == pos
    assert info.value.line == 1
    assert info.value.column == pos + 1


def test_syntax_error_line_and_column():
    with pytest.raises(ExprSyntaxError) as info:
        parse("X_1 +\n  * X_2")
    assert (info.value.line, info.value.column) == (2, 3)


def test_spans_cover_subexpressions():
    src = "X_1 + kappa(2)"
    tree = parse(src)
    a, b = tree.right.span
    assert src[a:b] == "kappa(2)"
    assert tree.span == (0, len(src))


def test_walk_and_needs_gamma():
    tree = parse("X_1 * x(1,0) + kappa(2)")
    kinds = {type(n).__name__ for n in walk(tree)}
    assert {"BinOp", "Gen", "XAtom", "Func", "Weight"} <= kinds
    assert not needs_gamma(tree, 2)
    assert needs_gamma(parse("T_1"), 2)
    assert needs_gamma(parse("Theta"), 2)
    assert needs_gamma(parse("x(0,0,1)"), 2)


@lru_cache(maxsize=None)
def ctx_for(kind="elliptic", hecke=False):
    return FGAContext(build_datum("A2", hecke=hecke), LawSpec.make(kind, a1="inv") if kind == "elliptic" else LawSpec.make(kind), D + 4)


small_trees = st.recursive(
    st.one_of(
        st.integers(1, 5).map(lambda n: Num(str(n))),
        st.just(Param("a1")),
        st.tuples(st.integers(-1, 2), st.integers(-1, 2)).filter(any).map(XAtom),
        st.integers(1, 2).map(lambda i: Gen("X", i)),
        st.sampled_from(["e", "1", "2"]).map(Delta),
    ),
    lambda c: st.tuples(st.sampled_from("+-*"), c, c).map(lambda t: BinOp(*t)),
    max_leaves=4,
)


@given(st.sampled_from("+-*"), small_trees, small_trees)
def test_elaboration_is_compositional(op, left, right):
    ctx = ctx_for()
    a, b = elaborate(left, ctx), elaborate(right, ctx)
    expected = {"+": a + b, "-": a - b, "*": a * b}[op]
    assert equal_to(elaborate(BinOp(op, left, right), ctx), expected, D) is None


def test_elaborate_matches_direct_construction():
    ctx = ctx_for()
    alg = TwistedAlgebra(ctx)
    got = elaborate(parse("X_1 * X_1 - X_1 * kappa(1)"), ctx)
    assert equal_to(got, alg.X(0) * alg.X(0) - alg.X(0).right_scale(ctx.kappa(ctx.datum.alpha(0))), D) is None
    inv = elaborate(parse("d_e / x(2,-1)"), ctx)
    assert equal_to(inv, alg.delta("e").right_scale(__import__("formalhecke").localized.LocElem.inv_x(ctx, (2, -1))), D) is None


def test_division_by_unit_scalar():
    ctx = ctx_for()
    got = elaborate(parse("(1 + x(1,0)) / (1 + x(1,0))"), ctx)
    assert equal_to(got, TwistedAlgebra(ctx).one(), D) is None


@pytest.mark.parametrize(
    "src,fragment",
    [
        ("X_3", "X_3"),
        ("kappa(5)", "5"),
        ("x(0,0)", "x(0,0)"),
        ("x(1,2,3,4)", "x(1,2,3,4)"),
        ("gamma1", "gamma1"),
        ("T_1", "T_1"),
        ("Theta", "Theta"),
        ("d_13", "d_13"),
        ("1 / X_1", "X_1"),
        ("1 / (x(1,0) + x(0,1))", "(x(1,0) + x(0,1))"),
        ("kpair(1, [-2,1])", "kpair(1, [-2,1])"),
    ],
)
def test_elaboration_errors_carry_spans(src, fragment):
    ctx = ctx_for()
    with pytest.raises(ElaborationError) as info:
        elaborate(parse(src), ctx)
    a, b = info.value.span
    assert fragment in src[max(a - 1, 0) : b + 1]
