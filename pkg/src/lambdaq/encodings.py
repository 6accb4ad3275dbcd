"""Church encodings emitted by the compiler.

Every factory returns a closed term.  Numerals use the binders ``f`` and ``x``;
lists are chains of pairs ending in :data:`NIL`.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Sequence

from .reduction import reduce
from .terms import (ABS, APP, VAR, Abs, App, Term, Var, alpha_eq, apply, parse_term,
                    substitute)


class NotANumeral(ValueError):
    pass


class NotAList(ValueError):
    pass


_LIBRARY_SOURCE = {
    "TRUE": r"\a b. a",
    "FALSE": r"\a b. b",
    "IF": r"\p a b. p a b",
    "AND": r"\p q. p q p",
    "OR": r"\p q. p p q",
    "NOT": r"\p a b. p b a",
    "SUCC": r"\n f x. f (n f x)",
    "PLUS": r"\m n f x. m f (n f x)",
    "MULT": r"\m n f. m (n f)",
    "PRED": r"\n f x. n (\g h. h (g f)) (\u. x) (\u. u)",
    "ISZERO": r"\n. n (\x a b. b) (\a b. a)",
    "PAIR": r"\a b s. s a b",
    "FST": r"\p. p (\a b. a)",
    "SND": r"\p. p (\a b. b)",
    "NIL": r"\x a b. a",
    "NULL": r"\l. l (\h t a b. b)",
}


@lru_cache(maxsize=None)
def library(name: str) -> Term:
    """A closed library term by name (``TRUE``, ``EQUAL``, ``PAIR`` ...)."""
    if name in _LIBRARY_SOURCE:
        return parse_term(_LIBRARY_SOURCE[name])
    if name == "SUB":
        # m - n: apply PRED n times to m
        return Abs("m", Abs("n", apply(Var("n"), library("PRED"), Var("m"))))
    if name == "LEQ":
        return Abs("m", Abs("n", App(library("ISZERO"),
                                     apply(library("SUB"), Var("m"), Var("n")))))
    if name == "EQUAL":
        leq = library("LEQ")
        return Abs("m", Abs("n", apply(library("AND"),
                                       apply(leq, Var("m"), Var("n")),
                                       apply(leq, Var("n"), Var("m")))))
    if name in ("CONS",):
        return library("PAIR")
    if name in ("HEAD",):
        return library("FST")
    if name in ("TAIL",):
        return library("SND")
    raise KeyError(name)


TRUE = library("TRUE")
FALSE = library("FALSE")
NIL = library("NIL")


def equal_term() -> Term:
    return library("EQUAL")


def if_term() -> Term:
    return library("IF")


def church(n: int) -> Term:
    """``\\f. \\x. f (f ... (f x))`` with ``n`` applications."""
    if n < 0:
        raise ValueError("Church numerals are nonnegative")
    return _church(n)


@lru_cache(maxsize=256)
def _church(n: int) -> Term:
    body: Term = Var("x")
    f = Var("f")
    for _ in range(n):
        body = App(f, body)
    return Abs("f", Abs("x", body))


def church_bool(value: bool) -> Term:
    return TRUE if value else FALSE


def _match_numeral(t: Term) -> int | None:
    if t.tag != ABS or t.body.tag != ABS:
        return None
    f, x = t.binder, t.body.binder
    if f == x:
        return None
    body = t.body.body
    n = 0
    while body.tag == APP:
        if body.fn.tag != VAR or body.fn.name != f:
            return None
        body = body.arg
        n += 1
    if body.tag == VAR and body.name == x:
        return n
    return None


def unchurch(term: Term, fuel: int = 100_000) -> int:
    """Integer denoted by a term whose normal form is a Church numeral."""
    n = _match_numeral(term)
    if n is None and not term.normal:
        n = _match_numeral(reduce(term, fuel).final)
    if n is None:
        raise NotANumeral(f"not a Church numeral: {term}")
    return n


def unchurch_bool(term: Term, fuel: int = 100_000) -> bool:
    final = term if term.normal else reduce(term, fuel).final
    if alpha_eq(final, TRUE):
        return True
    if alpha_eq(final, FALSE):
        return False
    raise ValueError(f"not a Church boolean: {final}")


def pair(a: Term, b: Term) -> Term:
    """Normal-form pair ``\\s. s a b``."""
    return Abs("s", apply(Var("s"), a, b))


def encode_list(items: Sequence[Term]) -> Term:
    """Pair chain ``cons a (cons b ... nil)`` already in normal form."""
    out = NIL
    for item in reversed(items):
        out = pair(item, out)
    return out


def decode_list(term: Term, fuel: int = 100_000) -> list[Term]:
    """Elements of a normal-form pair chain (reduced first if necessary)."""
    if not term.normal:
        term = reduce(term, fuel).final
    items = []
    while True:
        if alpha_eq(term, NIL):
            return items
        if (term.tag == ABS and term.body.tag == APP and term.body.fn.tag == APP
                and term.body.fn.fn.tag == VAR and term.body.fn.fn.name == term.binder):
            head, tail = term.body.fn.arg, term.body.arg
            if term.binder in head.free_vars or term.binder in tail.free_vars:
                raise NotAList(f"not a pair chain: {term}")
            items.append(head)
            term = tail
            continue
        raise NotAList(f"not a pair chain: {term}")


def list_fold() -> Term:
    """``FOLD c n l`` folds ``c`` over a pair-chain list from the right."""
    # FOLD = Y (\r c z l. IF (NULL l) z (c (HEAD l) (r c z (TAIL l))))
    y = parse_term(r"\g. (\x. g (x x)) (\x. g (x x))")
    body = parse_term(r"\r c z l. IF (NULL l) z (c (HEAD l) (r c z (TAIL l)))")
    for name in ("IF", "NULL", "HEAD", "TAIL"):
        body = substitute(body, name, library(name))
    return App(y, body)


def select(index: Term, table: Term) -> Term:
    """``HEAD (index TAIL table)``: the index-th element of a pair chain."""
    return App(library("HEAD"), apply(index, library("TAIL"), table))
