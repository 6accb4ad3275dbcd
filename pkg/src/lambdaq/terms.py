"""Lambda-q abstract syntax, parsing, printing, alpha-equivalence and substitution.

Terms are immutable.  Every node lazily caches its free variables, whether it is
in normal form, and (for closed nodes) its alpha key, so that large terms built
from shared closed pieces stay cheap to inspect during reduction.
"""
from __future__ import annotations

import re
import sys
from typing import Iterable, Iterator, Sequence

# Compiled automata nest continuations several hundred levels deep.
sys.setrecursionlimit(max(sys.getrecursionlimit(), 50000))

VAR, ABS, APP, SUP, NEG = range(5)


class Term:
    """Base node.  ``normal`` (no rule applies anywhere) and the structural
    hash are computed on construction from the children's values."""

    __slots__ = ("_fv", "normal", "_akey", "_hash", "_size")
    tag = -1

    @property
    def free_vars(self) -> frozenset:
        fv = self._fv
        if fv is None:
            fv = self._fv = self._compute_fv()
        return fv

    @property
    def size(self) -> int:
        s = self._size
        if s is None:
            s = self._size = 1 + sum(c.size for c in self.children())
        return s

    def children(self) -> Sequence["Term"]:
        return ()

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {show(self)}>"

    def __str__(self) -> str:
        return show(self)


class Var(Term):
    __slots__ = ("name",)
    tag = VAR

    def __init__(self, name: str) -> None:
        if not name:
            raise ValueError("empty variable name")
        self.name = name
        self._fv = frozenset((name,))
        self.normal = True
        self._akey = self._size = None
        self._hash = hash((VAR, name))

    def _compute_fv(self):
        return frozenset((self.name,))

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Var and other.name == self.name)


class Abs(Term):
    __slots__ = ("binder", "body")
    tag = ABS

    def __init__(self, binder: str, body: Term) -> None:
        if not binder:
            raise ValueError("empty binder name")
        self.binder = binder
        self.body = body
        self.normal = body.normal
        self._fv = self._akey = self._size = None
        self._hash = hash((ABS, binder, body._hash))

    def children(self):
        return (self.body,)

    def _compute_fv(self):
        fv = self.body.free_vars
        return fv - {self.binder} if self.binder in fv else fv

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Abs and self._hash == other._hash
                and other.binder == self.binder and other.body == self.body)


_HEAD_REDEX = (ABS, SUP, NEG)
_ARG_REDEX = (SUP, NEG)


class App(Term):
    __slots__ = ("fn", "arg")
    tag = APP

    def __init__(self, fn: Term, arg: Term) -> None:
        self.fn = fn
        self.arg = arg
        self.normal = (fn.normal and arg.normal and fn.tag not in _HEAD_REDEX
                       and arg.tag not in _ARG_REDEX)
        self._fv = self._akey = self._size = None
        self._hash = hash((APP, fn._hash, arg._hash))

    def children(self):
        return (self.fn, self.arg)

    def _compute_fv(self):
        a, b = self.fn.free_vars, self.arg.free_vars
        if not b or a is b:
            return a
        if not a:
            return b
        return a | b

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is App and self._hash == other._hash
                and other.fn == self.fn and other.arg == self.arg)


class Sup(Term):
    """Superposition ``[M1, ..., Mn]``.

    ``counts`` gives each element's multiplicity (``[M : 6]`` is six copies of
    ``M``); it is surface compression only, every count is a positive integer.
    """

    __slots__ = ("elements", "counts")
    tag = SUP

    def __init__(self, elements: Iterable[Term], counts: Iterable[int] | None = None) -> None:
        self.elements = tuple(elements)
        if counts is None:
            self.counts = (1,) * len(self.elements)
        else:
            self.counts = tuple(counts)
            if len(self.counts) != len(self.elements):
                raise ValueError("counts and elements differ in length")
            if any(c < 1 for c in self.counts):
                raise ValueError("superposition counts must be positive")
        self.normal = all(e.tag != SUP and e.normal for e in self.elements)
        self._fv = self._akey = self._size = None
        self._hash = hash((SUP, tuple(e._hash for e in self.elements), self.counts))

    def children(self):
        return self.elements

    def _compute_fv(self):
        out = frozenset()
        for e in self.elements:
            out |= e.free_vars
        return out

    __hash__ = Term.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (type(other) is Sup and self._hash == other._hash
                and other.counts == self.counts and other.elements == self.elements)


class Neg(Term):
    __slots__ = ("inner",)
    tag = NEG

    def __init__(self, inner: Term) -> None:
        self.inner = inner
        self.normal = inner.normal and inner.tag not in _ARG_REDEX
        self._fv = self._akey = self._size = None
        self._hash = hash((NEG, inner._hash))

    def children(self):
        return (self.inner,)

    def _compute_fv(self):
        return self.inner.free_vars

    __hash__ = Term.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Neg and self._hash == other._hash
                                 and other.inner == self.inner)


# ---------------------------------------------------------------- helpers

def lam(*names_and_body) -> Term:
    """``lam("x", "y", body)`` builds ``\\x. \\y. body``."""
    *names, body = names_and_body
    for name in reversed(names):
        body = Abs(name, body)
    return body


def apply(fn: Term, *args: Term) -> Term:
    for a in args:
        fn = App(fn, a)
    return fn


# ---------------------------------------------------------------- parsing

class TermSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


_TOKEN = re.compile(
    r"(?P<ws>[ \t\r\n]+|#[^\n]*)"
    r"|(?P<ident>[A-Za-z][A-Za-z0-9_]*)"
    r"|(?P<int>-?[0-9]+)"
    r"|(?P<punct>[\\λ.()\[\],~:])"
)


def _tokenize(source: str) -> list[tuple[str, str, int, int]]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise TermSyntaxError(f"unexpected character {source[pos]!r}",
                                  line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        if kind != "ws":
            if kind == "punct" and text == "λ":
                text = "\\"
            tokens.append((kind, text, line, pos - line_start + 1))
        newlines = text.count("\n") if kind == "ws" else 0
        if newlines:
            line += newlines
            line_start = pos + text.rindex("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str) -> None:
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        return TermSyntaxError(message, tok[2], tok[3])

    def expect(self, text):
        tok = self.peek()
        if tok[1] != text or tok[0] not in ("punct",):
            raise self.error(f"expected {text!r}, found {tok[1] or 'end of input'!r}")
        return self.advance()

    def term(self) -> Term:
        tok = self.peek()
        if tok[1] == "\\" and tok[0] == "punct":
            self.advance()
            names = []
            while self.peek()[0] == "ident":
                names.append(self.advance()[1])
            if not names:
                raise self.error("expected binder name after '\\'")
            self.expect(".")
            return lam(*names, self.term())
        return self.application()

    def _starts_atom(self, tok) -> bool:
        return tok[0] == "ident" or (tok[0] == "punct" and tok[1] in ("(", "[", "~"))

    def application(self) -> Term:
        if not self._starts_atom(self.peek()):
            tok = self.peek()
            raise self.error(f"unexpected {tok[1] or 'end of input'!r}")
        result = self.atom()
        while True:
            tok = self.peek()
            if self._starts_atom(tok):
                result = App(result, self.atom())
            elif tok[0] == "punct" and tok[1] == "\\":
                # trailing abstraction extends to the right
                return App(result, self.term())
            else:
                return result

    def atom(self) -> Term:
        tok = self.advance()
        kind, text = tok[0], tok[1]
        if kind == "ident":
            return Var(text)
        if text == "(":
            inner = self.term()
            self.expect(")")
            return inner
        if text == "~":
            return Neg(self.atom())
        if text == "[":
            elements, counts = [], []
            if self.peek()[1] == "]":
                self.advance()
                return Sup(())
            while True:
                elements.append(self.term())
                count = 1
                if self.peek()[1] == ":":
                    self.advance()
                    ctok = self.advance()
                    if ctok[0] != "int" or int(ctok[1]) < 1:
                        raise self.error("expected positive count after ':'", ctok)
                    count = int(ctok[1])
                counts.append(count)
                sep = self.advance()
                if sep[1] == "]":
                    return Sup(elements, counts)
                if sep[1] != ",":
                    raise self.error("expected ',' or ']'", sep)
        raise self.error(f"unexpected {text or 'end of input'!r}", tok)


def parse_term(source: str) -> Term:
    """Parse lambda-q surface syntax.

    Grammar: ``\\x. M``, left-associative application, ``(M)``, ``[M, N : 3]``
    superpositions (``: n`` is an optional multiplicity), ``~M`` negation and
    ``#`` comments.  Free variables are allowed.
    """
    p = _Parser(source)
    t = p.term()
    if p.peek()[0] != "eof":
        raise p.error(f"unexpected {p.peek()[1]!r}")
    return t


# ---------------------------------------------------------------- printing

def show(t: Term) -> str:
    out: list[str] = []
    _show(t, 0, out)
    return "".join(out)


def _show(t: Term, ctx: int, out: list) -> None:
    # ctx 0: anything; 1: function position (no bare abstraction); 2: atom
    tag = t.tag
    if tag == VAR:
        out.append(t.name)
    elif tag == ABS:
        if ctx:
            out.append("(")
        out.append("\\")
        out.append(t.binder)
        body = t.body
        while body.tag == ABS:
            out.append(" ")
            out.append(body.binder)
            body = body.body
        out.append(". ")
        _show(body, 0, out)
        if ctx:
            out.append(")")
    elif tag == APP:
        if ctx == 2:
            out.append("(")
        _show(t.fn, 1, out)
        out.append(" ")
        _show(t.arg, 2, out)
        if ctx == 2:
            out.append(")")
    elif tag == NEG:
        out.append("~")
        _show(t.inner, 2, out)
    else:
        out.append("[")
        for i, (e, c) in enumerate(zip(t.elements, t.counts)):
            if i:
                out.append(", ")
            _show(e, 0, out)
            if c != 1:
                out.append(f" : {c}")
        out.append("]")


# ---------------------------------------------------------------- alpha equivalence

def alpha_key(t: Term) -> str:
    """Name-free rendering of ``t``: equal keys iff the terms are alpha-equivalent.

    Bound variables print as de Bruijn indices, free variables by name.  The
    key doubles as the canonical text used to order superposition entries.
    """
    return _akey(t, {}, 0)


def _akey(t: Term, env: dict, depth: int) -> str:
    if not t.free_vars:
        k = t._akey
        if k is None:
            k = t._akey = _akey_build(t, {}, 0)
        return k
    return _akey_build(t, env, depth)


def _akey_build(t: Term, env: dict, depth: int) -> str:
    tag = t.tag
    if tag == VAR:
        level = env.get(t.name)
        return t.name if level is None else f"%{depth - level}"
    if tag == ABS:
        inner = dict(env)
        inner[t.binder] = depth
        return "\\." + _akey(t.body, inner, depth + 1)
    if tag == APP:
        return "(" + _akey(t.fn, env, depth) + " " + _akey(t.arg, env, depth) + ")"
    if tag == NEG:
        return "~" + _akey(t.inner, env, depth)
    parts = []
    for e, c in zip(t.elements, t.counts):
        parts.append(_akey(e, env, depth) + (f":{c}" if c != 1 else ""))
    return "[" + ",".join(parts) + "]"


def alpha_eq(left: Term, right: Term) -> bool:
    """Equality up to consistent renaming of bound variables.

    Superpositions compare element by element, in order.
    """
    return left is right or alpha_key(left) == alpha_key(right)


# ---------------------------------------------------------------- substitution

def fresh_name(base: str, avoid) -> str:
    stem = base.rstrip("0123456789") or "v"
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(body: Term, name: str, value: Term) -> Term:
    """Capture-avoiding ``body[name := value]``."""
    if name not in body.free_vars:
        return body
    return _subst(body, name, value, value.free_vars)


def _subst(t: Term, name: str, value: Term, value_fv: frozenset) -> Term:
    fv = t._fv
    if fv is None:
        fv = t.free_vars
    if name not in fv:
        return t
    tag = t.tag
    if tag == VAR:
        return value
    if tag == APP:
        return App(_subst(t.fn, name, value, value_fv), _subst(t.arg, name, value, value_fv))
    if tag == ABS:
        binder, inner = t.binder, t.body
        if binder in value_fv:
            new = fresh_name(binder, value_fv | inner.free_vars | {name})
            inner = _subst(inner, binder, Var(new), frozenset((new,)))
            binder = new
        return Abs(binder, _subst(inner, name, value, value_fv))
    if tag == NEG:
        return Neg(_subst(t.inner, name, value, value_fv))
    return Sup((_subst(e, name, value, value_fv) for e in t.elements), t.counts)


def subterms(t: Term) -> Iterator[Term]:
    stack = [t]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))
