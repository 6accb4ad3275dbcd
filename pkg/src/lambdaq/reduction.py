"""Parallel beta-q reduction.

One parallel step contracts the leftmost-outermost redex of every reducible
element of a superposition at once.  Besides beta the rule set has

* distribution      ``[M_i] N -> [M_i N]``,
* sign lifting      ``(~M) N -> ~(M N)``,
* argument rules    ``M [N_i] -> [M N_i]`` and ``M (~N) -> ~(M N)``, only once
  ``M`` is a normal, non-abstraction head,
* normalisation     ``~~M -> M``, ``~[M_i] -> [~M_i]`` and flattening of a
  superposition nested directly inside another.

Distribution and flattening carry element signs outward in the same step
(``[~M] N -> [~(M N)]``, ``[~[M, ~N]] -> [~M, N]``), so a branch's sign never
changes how many steps it takes.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .canonical import CanonicalSuperposition, combine, canonicalize
from .terms import ABS, APP, NEG, SUP, Abs, App, Neg, Sup, Term, substitute

NORMAL = "normal"


def _signed(t: Term) -> tuple[Term, bool]:
    negative = False
    while t.tag == NEG:
        t = t.inner
        negative = not negative
    return t, negative


def _distribute(elements, make) -> Iterator[Term]:
    for e in elements:
        core, negative = _signed(e)
        out = make(core)
        yield Neg(out) if negative else out


def _flatten_into(e: Term, c: int, elements: list, counts: list) -> None:
    core, negative = _signed(e)
    for inner, ic in zip(core.elements, core.counts):
        icore, ineg = _signed(inner)
        elements.append(Neg(icore) if negative != ineg else icore)
        counts.append(c * ic)


def _is_nested_sup(e: Term) -> bool:
    while e.tag == NEG:
        e = e.inner
    return e.tag == SUP


def _step(t: Term):
    """Contract one parallel step inside ``t``; returns ``(term, work)``.

    Caller guarantees ``t`` is not normal.  The descent to the leftmost-outermost
    redex is iterative; only the nodes on the path back to the root are rebuilt.
    """
    path = []
    while True:
        tag = t.tag
        if tag == APP:
            f = t.fn
            ftag = f.tag
            if ftag == ABS:
                new, work = substitute(f.body, f.binder, t.arg), 1
                break
            if ftag == SUP:
                a = t.arg
                new, work = Sup(_distribute(f.elements, lambda e: App(e, a)), f.counts), 1
                break
            if ftag == NEG:
                new, work = Neg(App(f.inner, t.arg)), 1
                break
            if not f.normal:
                path.append(t)
                t = f
                continue
            a = t.arg
            atag = a.tag
            if atag == SUP:
                new, work = Sup(_distribute(a.elements, lambda e: App(f, e)), a.counts), 1
                break
            if atag == NEG:
                new, work = Neg(App(f, a.inner)), 1
                break
            path.append(t)
            t = a
        elif tag == ABS:
            path.append(t)
            t = t.body
        elif tag == NEG:
            inner = t.inner
            if inner.tag == NEG:
                new, work = inner.inner, 1
                break
            if inner.tag == SUP:
                new, work = Sup((Neg(e) for e in inner.elements), inner.counts), 1
                break
            path.append(t)
            t = inner
        elif tag == SUP:
            new, work = _step_sup(t)
            break
        else:
            raise AssertionError("variables are always normal")
    for node in reversed(path):
        tag = node.tag
        if tag == APP:
            if node.fn is t:
                new = App(new, node.arg)
            else:
                new = App(node.fn, new)
        elif tag == ABS:
            new = Abs(node.binder, new)
        else:
            new = Neg(new)
        t = node
    return new, work


def _step_sup(t: Sup):
    elements, counts, work = [], [], 0
    for e, c in zip(t.elements, t.counts):
        if _is_nested_sup(e):
            _flatten_into(e, c, elements, counts)
            work += 1
        elif e.normal:
            elements.append(e)
            counts.append(c)
        else:
            new, w = _step(e)
            elements.append(new)
            counts.append(c)
            work += w
    return Sup(elements, counts), work


def step(term: Term):
    """One parallel step; returns the new term or :data:`NORMAL`."""
    if term.normal:
        return NORMAL
    return _step(term)[0]


def step_with_work(term: Term) -> tuple[Term, int] | None:
    if term.normal:
        return None
    return _step(term)


@dataclass
class ReductionTrace:
    steps: int
    work: int
    final: Term
    fuel_exhausted: bool
    canonical: CanonicalSuperposition | None = None
    history: list = field(default_factory=list, repr=False)


def reduce(term: Term, fuel: int = 1_000_000, trace: bool = False) -> ReductionTrace:
    """Iterate :func:`step` until normal form or ``fuel`` parallel steps.

    A superposition result is replaced by its canonical (interfered) form.
    """
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    steps = work = 0
    history = [term] if trace else []
    while steps < fuel and not term.normal:
        term, w = _step(term)
        steps += 1
        work += w
        if trace:
            history.append(term)
    exhausted = not term.normal
    canon = None
    if term.tag == SUP:
        canon = canonicalize(term)
        if not exhausted:
            term = canon.to_term()
    return ReductionTrace(steps, work, term, exhausted, canon, history)


# ---------------------------------------------------------------- compressed reduction

def literal_entries(canon: CanonicalSuperposition) -> list[tuple[Term, int]]:
    """Entries as (element, positive multiplicity), negative counts as ``~M``."""
    return [(t if n > 0 else Neg(t), abs(n)) for t, n in canon.entries]


def compressed_steps(entries: Iterable[tuple[Term, int]]) -> Iterator[tuple[list, int]]:
    """Yield ``(entries, work)`` after every parallel step until all are normal.

    ``entries`` hold literal elements with positive multiplicities, exactly as
    if each element were repeated that many times in one superposition.  Each
    distinct element is stepped once per parallel step; identical results are
    merged so their work is not repeated.
    """
    current = _merge(entries)
    while True:
        pending = False
        nxt: list = []
        work = 0
        for t, c in current:
            if _is_nested_sup(t):
                elements: list = []
                counts: list = []
                _flatten_into(t, c, elements, counts)
                nxt.extend(zip(elements, counts))
                work += 1
                pending = True
            elif t.normal:
                nxt.append((t, c))
            else:
                new, w = _step(t)
                nxt.append((new, c))
                work += w
                pending = True
        if not pending:
            return
        current = _merge(nxt)
        yield current, work


def _merge(entries: Iterable[tuple[Term, int]]) -> list:
    merged: dict[Term, int] = {}
    for t, c in entries:
        merged[t] = merged.get(t, 0) + c
    return list(merged.items())


def reduce_compressed(canon: CanonicalSuperposition, fuel: int = 1_000_000
                      ) -> tuple[CanonicalSuperposition, ReductionTrace]:
    """Reduce a superposition held as (representative, net count) pairs.

    Agrees with expanding every entry into literal copies, reducing, and
    canonicalizing, but never materialises the copies.
    """
    if fuel < 0:
        raise ValueError("fuel must be nonnegative")
    entries = literal_entries(canon)
    steps = work = 0
    exhausted = False
    if fuel == 0:
        exhausted = any(not t.normal or _is_nested_sup(t) for t, _ in entries)
    else:
        for entries, w in compressed_steps(entries):
            steps += 1
            work += w
            if steps >= fuel:
                exhausted = any(not t.normal or _is_nested_sup(t) for t, _ in entries)
                break
    result = combine(entries)
    trace = ReductionTrace(steps, work, result.to_term(), exhausted, result)
    return result, trace
