"""Signed-multiset normal form of superpositions (interference bookkeeping)."""
from __future__ import annotations

from typing import Iterable, Iterator

from .terms import NEG, SUP, Neg, Sup, Term, alpha_key, show


class CanonicalSuperposition:
    """Distinct (up to alpha) representatives with nonzero signed net counts.

    Entries are ordered by the representative's alpha key, so two canonical
    superpositions of the same data always list entries identically.
    """

    __slots__ = ("entries", "_keys")

    def __init__(self, entries: Iterable[tuple[Term, int]] = ()) -> None:
        self.entries: tuple[tuple[Term, int], ...] = tuple(entries)
        self._keys = None

    @property
    def keys(self) -> tuple[str, ...]:
        if self._keys is None:
            self._keys = tuple(alpha_key(t) for t, _ in self.entries)
        return self._keys

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[tuple[Term, int]]:
        return iter(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CanonicalSuperposition):
            return NotImplemented
        return (self.keys == other.keys
                and all(a == b for (_, a), (_, b) in zip(self.entries, other.entries)))

    def __hash__(self):
        return hash((self.keys, tuple(n for _, n in self.entries)))

    def count_of(self, term: Term) -> int:
        key = alpha_key(term)
        for k, (_, n) in zip(self.keys, self.entries):
            if k == key:
                return n
        return 0

    def total(self) -> int:
        return sum(n for _, n in self.entries)

    def to_term(self) -> Sup:
        """Compressed superposition term; negative counts become ``~M``."""
        return Sup((t if n > 0 else Neg(t) for t, n in self.entries),
                   (abs(n) for _, n in self.entries))

    def expand(self) -> Sup:
        """Literal superposition: ``|n|`` separate copies of each entry."""
        elements = []
        for t, n in self.entries:
            elements.extend([t if n > 0 else Neg(t)] * abs(n))
        return Sup(elements)

    def __repr__(self) -> str:
        inner = ", ".join(f"{show(t)} : {n}" for t, n in self.entries)
        return f"CanonicalSuperposition({{{inner}}})"


def _signed_parts(t: Term, sign: int, out: list) -> None:
    while t.tag == NEG:
        sign = -sign
        t = t.inner
    if t.tag == SUP:
        for e, c in zip(t.elements, t.counts):
            _signed_parts(e, sign * c, out)
    else:
        out.append((t, sign))


def canonicalize(term: Term) -> CanonicalSuperposition:
    """Flatten, push negations inward, group alpha-equivalent elements.

    Net count per group is (positive occurrences) - (negated occurrences);
    zero groups vanish.  A non-superposition term counts as a singleton.
    """
    parts: list = []
    _signed_parts(term, 1, parts)
    return combine(parts)


def combine(parts: Iterable[tuple[Term, int]]) -> CanonicalSuperposition:
    """Group signed (term, count) pairs whose terms may be superpositions or negated."""
    totals: dict[str, int] = {}
    reps: dict[str, Term] = {}
    rep_text: dict[str, str] = {}
    for term, count in parts:
        if term.tag in (SUP, NEG):
            flat: list = []
            _signed_parts(term, count, flat)
        else:
            flat = [(term, count)]
        for t, n in flat:
            key = alpha_key(t)
            if key in totals:
                totals[key] += n
                # keep the lexically smallest spelling so the choice is order-free
                if t is not reps[key]:
                    text = show(t)
                    if text < rep_text.setdefault(key, show(reps[key])):
                        reps[key], rep_text[key] = t, text
            else:
                totals[key] = n
                reps[key] = t
    return CanonicalSuperposition(
        (reps[k], totals[k]) for k in sorted(totals) if totals[k] != 0)
