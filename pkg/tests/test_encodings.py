import pytest
from hypothesis import given, strategies as st

from lambdaq import encodings as enc
from lambdaq.encodings import (FALSE, NIL, TRUE, NotAList, NotANumeral, church, church_bool,
                               decode_list, encode_list, equal_term, if_term, library,
                               list_fold, select, unchurch, unchurch_bool)
from lambdaq.reduction import reduce
from lambdaq.terms import Var, alpha_eq, apply, parse_term

P = parse_term


def test_church_shapes():
    assert alpha_eq(church(0), P(r"\f. \x. x"))
    assert alpha_eq(church(2), P(r"\f. \x. f (f x)"))
    assert not alpha_eq(church(3), church(4))
    with pytest.raises(ValueError):
        church(-1)


def test_unchurch():
    assert unchurch(P(r"\g. \y. g y")) == 1
    assert unchurch(P(r"\f. \x. x")) == 0
    with pytest.raises(NotANumeral):
        unchurch(P(r"\x. x"))
    assert unchurch(apply(library("SUCC"), church(4))) == 5


@given(st.integers(0, 40))
def test_numeral_round_trip(n):
    assert unchurch(church(n)) == n


@given(st.integers(0, 8), st.integers(0, 8))
def test_equal_matches_integer_equality(m, n):
    assert unchurch_bool(apply(equal_term(), church(m), church(n))) == (m == n)


def test_equal_examples():
    assert alpha_eq(reduce(apply(equal_term(), church(2), church(2))).final, TRUE)
    assert alpha_eq(reduce(apply(equal_term(), church(1), church(2))).final, FALSE)


def test_if():
    assert reduce(apply(if_term(), TRUE, Var("a"), Var("b"))).final == Var("a")
    assert reduce(apply(if_term(), FALSE, Var("a"), Var("b"))).final == Var("b")


@given(st.integers(0, 6), st.integers(0, 6))
def test_arithmetic(m, n):
    assert unchurch(apply(library("PLUS"), church(m), church(n))) == m + n
    assert unchurch(apply(library("MULT"), church(m), church(n))) == m * n
    assert unchurch(apply(library("SUB"), church(m), church(n))) == max(m - n, 0)
    assert unchurch(apply(library("PRED"), church(m))) == max(m - 1, 0)
    assert unchurch_bool(apply(library("ISZERO"), church(m))) == (m == 0)
    assert unchurch_bool(apply(library("LEQ"), church(m), church(n))) == (m <= n)


@given(st.booleans(), st.booleans())
def test_logic(p, q):
    b = church_bool
    assert unchurch_bool(apply(library("AND"), b(p), b(q))) == (p and q)
    assert unchurch_bool(apply(library("OR"), b(p), b(q))) == (p or q)
    assert unchurch_bool(apply(library("NOT"), b(p))) == (not p)


def test_pairs():
    pair = apply(library("PAIR"), Var("a"), Var("b"))
    assert reduce(apply(library("FST"), pair)).final == Var("a")
    assert reduce(apply(library("SND"), pair)).final == Var("b")


@given(st.lists(st.integers(0, 9), max_size=8))
def test_list_round_trip(values):
    encoded = encode_list([church(v) for v in values])
    assert [unchurch(t) for t in decode_list(encoded)] == values
    assert unchurch_bool(apply(library("NULL"), encoded)) == (not values)


def test_list_built_with_cons_decodes():
    built = apply(library("CONS"), church(1), apply(library("CONS"), church(2), NIL))
    assert [unchurch(t) for t in decode_list(built)] == [1, 2]


def test_decode_list_rejects_non_lists():
    with pytest.raises(NotAList):
        decode_list(P(r"\s. s"))


@given(st.lists(st.integers(0, 4), min_size=1, max_size=4))
def test_select(values):
    table = encode_list([church(v) for v in values])
    for i, v in enumerate(values):
        assert unchurch(select(church(i), table)) == v


@given(st.lists(st.integers(0, 3), max_size=3))
def test_fold_sums_a_list(values):
    total = apply(list_fold(), library("PLUS"), church(0),
                  encode_list([church(v) for v in values]))
    assert unchurch(total) == sum(values)


def test_library_terms_are_closed():
    for name in ("TRUE", "FALSE", "IF", "AND", "OR", "NOT", "SUCC", "PLUS", "MULT", "PRED",
                 "ISZERO", "SUB", "LEQ", "EQUAL", "PAIR", "FST", "SND", "NIL", "NULL",
                 "CONS", "HEAD", "TAIL"):
        assert not library(name).free_vars, name
    assert not list_fold().free_vars
    assert not enc.pair(church(1), church(2)).free_vars


def test_unknown_library_name():
    with pytest.raises(KeyError):
        library("NOPE")


def test_equal_cost_is_polynomial():
    costs = [reduce(apply(equal_term(), church(n), church(n))).steps for n in range(9)]
    # second differences vanish or stay small: cost grows at most quadratically
    assert all(b > a for a, b in zip(costs, costs[1:]))
    assert costs[8] <= 9 * 9 * costs[1]
