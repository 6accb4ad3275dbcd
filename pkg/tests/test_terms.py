import pytest
from hypothesis import given, strategies as st

from lambdaq.terms import (Abs, App, Neg, Sup, TermSyntaxError, Var, alpha_eq, alpha_key,
                           apply, lam, parse_term, show, substitute, subterms)
from strategies import de_bruijn, pure_terms, terms


def test_parse_identity():
    assert parse_term(r"\x. x") == Abs("x", Var("x"))


def test_parse_superposition_with_negation():
    assert parse_term("[a, ~a]") == Sup([Var("a"), Neg(Var("a"))])


def test_parse_application_of_abstraction():
    assert parse_term(r"(\x. x x) y") == App(Abs("x", App(Var("x"), Var("x"))), Var("y"))


def test_application_is_left_associative():
    assert parse_term("a b c") == App(App(Var("a"), Var("b")), Var("c"))


def test_multi_binder_and_lambda_symbol():
    assert parse_term(r"\x y. x") == parse_term("λx. λy. x") == lam("x", "y", Var("x"))


def test_trailing_abstraction_argument():
    assert parse_term(r"f \x. x") == App(Var("f"), Abs("x", Var("x")))


def test_counts_and_empty_superposition():
    t = parse_term("[a : 6, b]")
    assert t.counts == (6, 1) and t.elements == (Var("a"), Var("b"))
    assert parse_term("[ ]") == Sup(())


def test_comments_are_ignored():
    assert parse_term("# identity\n\\x. x  # done\n") == Abs("x", Var("x"))


@pytest.mark.parametrize("source,line,column", [
    (r"\x x", 1, 5),
    (r"\x (x)", 1, 4),
    ("(a b", 1, 5),
    ("a\n  )", 2, 3),
    ("[a : 0]", 1, 6),
    ("", 1, 1),
])
def test_syntax_errors_carry_position(source, line, column):
    with pytest.raises(TermSyntaxError) as info:
        parse_term(source)
    assert (info.value.line, info.value.column) == (line, column)


def test_free_variables_are_legal():
    assert parse_term("free_var1 other").free_vars == {"free_var1", "other"}


@given(terms)
def test_print_parse_round_trip(t):
    assert parse_term(show(t)) == t


@given(terms)
def test_printing_is_stable_under_whitespace(t):
    assert show(parse_term("  " + show(t).replace(" ", "   ") + " \n")) == show(t)


def test_alpha_eq_examples():
    assert alpha_eq(parse_term(r"\x. x"), parse_term(r"\y. y"))
    assert not alpha_eq(parse_term(r"\x. x"), parse_term(r"\x. x x"))
    assert not alpha_eq(Var("x"), Var("y"))


def test_alpha_eq_is_order_sensitive_on_superpositions():
    assert not alpha_eq(parse_term("[a, b]"), parse_term("[b, a]"))


@given(terms, terms)
def test_alpha_eq_matches_de_bruijn_oracle(s, t):
    assert alpha_eq(s, t) == (de_bruijn(s) == de_bruijn(t))


@given(terms)
def test_alpha_key_ignores_binder_names(t):
    renamed = _rename_binders(t)
    assert alpha_eq(t, renamed)
    assert alpha_key(t) == alpha_key(renamed)


def _rename_binders(t, mapping=None):
    mapping = mapping or {}
    if t.tag == 0:
        return Var(mapping.get(t.name, t.name))
    if t.tag == 1:
        new = f"r{len(mapping)}_{t.binder}"
        return Abs(new, _rename_binders(t.body, {**mapping, t.binder: new}))
    if t.tag == 2:
        return App(_rename_binders(t.fn, mapping), _rename_binders(t.arg, mapping))
    if t.tag == 4:
        return Neg(_rename_binders(t.inner, mapping))
    return Sup([_rename_binders(e, mapping) for e in t.elements], t.counts)


def test_substitute_examples():
    ident = parse_term(r"\y. y")
    assert substitute(Var("x"), "x", ident) == ident
    out = substitute(parse_term(r"\x. x z"), "z", Var("x"))
    assert alpha_eq(out, parse_term(r"\w. w x"))
    assert out.binder != "x"
    n = parse_term(r"\q. q")
    assert substitute(parse_term("[x, ~x]"), "x", n) == Sup([n, Neg(n)])


@given(pure_terms, st.sampled_from(["a", "b", "x"]), pure_terms)
def test_substitution_matches_de_bruijn_semantics(body, name, value):
    out = substitute(body, name, value)
    # free names of the result: body's without name, plus value's if name occurred
    expected = set(body.free_vars) - {name}
    if name in body.free_vars:
        expected |= value.free_vars
    assert out.free_vars == expected
    # substituting a fresh variable and back is the identity up to alpha
    fresh = substitute(substitute(body, name, Var("fresh0")), "fresh0", Var(name))
    if "fresh0" not in body.free_vars:
        assert alpha_eq(fresh, body)


@given(pure_terms, pure_terms)
def test_substitution_leaves_terms_without_the_name_alone(body, value):
    assert substitute(body, "unused", value) is body


def test_helpers():
    assert apply(Var("f"), Var("a"), Var("b")) == parse_term("f a b")
    assert [show(t) for t in subterms(parse_term("f a"))] == ["f a", "f", "a"]


def test_constructor_validation():
    with pytest.raises(ValueError):
        Var("")
    with pytest.raises(ValueError):
        Abs("", Var("x"))
    with pytest.raises(ValueError):
        Sup([Var("a")], [0])


def test_terms_are_hashable_structurally():
    assert len({parse_term("f (a b)"), parse_term("f (a b)"), parse_term("f a b")}) == 2
