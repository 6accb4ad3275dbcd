"""Translate a partitioned QCA into lambda-q terms and decode results back.

Cell states become Church numerals, configurations become pair chains.  The
local matrix is scaled to integers (``T = b * matrix``) and rendered as a term
that compares its argument against each state and returns a superposition
whose multiplicities are one row of ``T``.  Amplitudes are recovered by dividing
counts by the tracked scale ``d * b ** (width * steps)``.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Mapping, Sequence

from . import encodings as enc
from .canonical import CanonicalSuperposition, combine
from .encodings import church, library
from .pqca import Configuration, PqcaSpec, SuperposedState, check_configuration
from .reduction import compressed_steps, reduce, reduce_compressed
from .terms import (Abs, App, Neg, Sup, Term, Var, alpha_eq, apply, lam, parse_term,
                    show)

DEFAULT_FUEL = 1_000_000


class MalformedConfiguration(ValueError):
    pass


class ZeroTotalCount(ZeroDivisionError):
    pass


# ---------------------------------------------------------------- scaling

def scale_matrix(matrix: Sequence[Sequence[Fraction]], lcm: bool = False
                 ) -> tuple[int, list[list[int]]]:
    """Integer matrix ``T = b * matrix``.

    ``b`` is the product of every entry's denominator (integers contribute 1),
    or their least common multiple when ``lcm`` is set.
    """
    dens = [Fraction(x).denominator for row in matrix for x in row]
    b = math.lcm(*dens) if lcm else math.prod(dens)
    scaled = [[Fraction(x) * b for x in row] for row in matrix]
    assert all(x.denominator == 1 for row in scaled for x in row)
    return b, [[int(x) for x in row] for row in scaled]


def scale_superposition(state: Mapping[Configuration, Fraction], lcm: bool = False
                        ) -> tuple[int, dict[Configuration, int]]:
    if not state:
        raise ValueError("cannot scale an empty superposition")
    dens = [Fraction(a).denominator for a in state.values()]
    d = math.lcm(*dens) if lcm else math.prod(dens)
    return d, {c: int(Fraction(a) * d) for c, a in state.items()}


@dataclass(frozen=True)
class ScaleLedger:
    b: int
    d: int
    width: int
    steps_applied: int = 0
    lcm: bool = False

    @property
    def total_scale(self) -> int:
        return self.d * self.b ** (self.width * self.steps_applied)

    def advanced(self, k: int = 1) -> "ScaleLedger":
        return replace(self, steps_applied=self.steps_applied + k)


# ---------------------------------------------------------------- encoding

def encode_state(q: int) -> Term:
    if q < 0:
        raise ValueError("state index must be nonnegative")
    return church(q)


def encode_config(config: Sequence[int]) -> Term:
    return enc.encode_list([church(q) for q in config])


def decode_config(term: Term, fuel: int = 100_000) -> Configuration:
    """Configuration whose encoding is alpha-equivalent to ``term``'s normal form."""
    try:
        items = enc.decode_list(term, fuel)
        return tuple(enc.unchurch(item) for item in items)
    except (enc.NotAList, enc.NotANumeral) as exc:
        raise MalformedConfiguration(f"not an encoded configuration: {show(term)}") from exc


def decode_superposition(canon: CanonicalSuperposition, ledger: ScaleLedger,
                         mode: str = "ledger") -> SuperposedState:
    """Amplitudes ``n_i / scale``.

    ``mode="paper"`` divides by the sum of all counts instead of the ledger
    scale; that only agrees with the ledger when every count sum equals the
    scale (e.g. a row-stochastic matrix).
    """
    if mode == "ledger":
        scale = ledger.total_scale
    elif mode == "paper":
        scale = canon.total()
        if scale == 0:
            raise ZeroTotalCount("counts sum to zero; count-sum normalisation undefined")
    else:
        raise ValueError(f"unknown decode mode {mode!r}")
    out: dict[Configuration, Fraction] = {}
    for term, n in canon:
        config = decode_config(term)
        out[config] = out.get(config, 0) + Fraction(n, scale)
    return {c: a for c, a in sorted(out.items()) if a}


# ---------------------------------------------------------------- term emission

IDENTITY = Abs("z", Var("z"))


def pad(p: int, term: Term) -> Term:
    """``p I term``: reduces to ``term`` after exactly ``p + 2`` idle steps."""
    return apply(church(p), IDENTITY, term)


def _cps_table(rows: Sequence[Sequence[Term]], pads: Sequence[int] | None = None) -> Term:
    """Pair chain whose i-th entry is ``\\k. k v1 ... vn`` for ``rows[i]``.

    With ``pads`` the entry becomes ``\\k. PAD(pads[i]) (k v1 ... vn)``.
    """
    entries = []
    for i, row in enumerate(rows):
        body = apply(Var("k"), *row)
        entries.append(Abs("k", pad(pads[i], body) if pads is not None else body))
    return enc.encode_list(entries)


def _selector(table: Term) -> Term:
    """``\\x k. HEAD (x TAIL table) k``: look up entry ``x`` and pass its values to ``k``."""
    return lam("x", "k", apply(library("HEAD"),
                                apply(Var("x"), library("TAIL"), table), Var("k")))


def numeral_forcer(n_states: int) -> Term:
    """Hands a freshly built numeral to a continuation when the numeral is a thunk."""
    return _selector(_cps_table([[church(q)] for q in range(n_states)]))


def digit_splitter(spec: PqcaSpec, pads: Sequence[int] | None = None) -> Term:
    """``SPLIT q k`` reduces to ``k l m r`` for the sublattice digits of ``q``."""
    return _selector(_cps_table([[church(d) for d in spec.split(q)]
                                 for q in range(spec.n_states)], pads))


def digit_joiner(spec: PqcaSpec) -> Term:
    """``\\l m r. (l * n_m + m) * n_r + r`` in Church arithmetic."""
    _, n_m, n_r = spec.sublattices
    plus, mult = library("PLUS"), library("MULT")
    inner = apply(plus, apply(mult, Var("l"), church(n_m)), Var("m"))
    return lam("l", "m", "r", apply(plus, apply(mult, inner, church(n_r)), Var("r")))


def _destructure(width: int, body: Term, cells: int | None = None) -> Term:
    """``\\c. c (\\h0 t0. t0 (\\h1 t1. ... body))`` binding the first ``cells`` heads."""
    cells = width if cells is None else cells
    inner = body
    for i in reversed(range(cells)):
        inner = lam(f"h{i}", f"t{i}", inner)
        if i:
            inner = App(Var(f"t{i - 1}"), inner)
    return Abs("c", App(Var("c"), inner))


def _cons_chain(items: Sequence[Term]) -> Term:
    out: Term = enc.NIL
    for item in reversed(items):
        out = apply(library("CONS"), item, out)
    return out


def emit_sigma_term(spec: PqcaSpec, pads: Sequence[int] | None = None) -> Term:
    """Closed ``P`` with ``P enc(c)`` normalising to ``enc(sigma(c))``.

    Each cell numeral is split into its (l, m, r) digits by table lookup and
    new cells are rebuilt arithmetically from the rotated neighbours.  ``pads``
    are idle steps added to the split of each state (see :func:`synchronize`).
    """
    w = spec.width
    split, join = digit_splitter(spec, pads), digit_joiner(spec)
    out = _cons_chain([apply(join, Var(f"l{(i + 1) % w}"), Var(f"m{i}"), Var(f"r{(i - 1) % w}"))
                       for i in range(w)])
    body = out
    for i in reversed(range(w)):
        body = apply(split, Var(f"h{i}"), lam(f"l{i}", f"m{i}", f"r{i}", body))
    return _destructure(w, body)


def _row_superposition(row: Sequence[int]) -> Sup:
    elements, counts = [], []
    for target, t in enumerate(row):
        if t:
            elements.append(church(target) if t > 0 else Neg(church(target)))
            counts.append(abs(t))
    return Sup(elements, counts)


def emit_transition_term(spec: PqcaSpec, scaled: Sequence[Sequence[int]] | None = None,
                         lcm: bool = False) -> Term:
    """``Q = \\s. IF (EQUAL s 0) S0 (IF (EQUAL s 1) S1 (... []))``.

    ``S_j`` holds ``|T[j][i]|`` copies of ``enc(i)`` (negated when ``T[j][i] < 0``).
    """
    if scaled is None:
        _, scaled = scale_matrix(spec.matrix, lcm)
    s = Var("s")
    branch: Term = Sup(())
    for j in reversed(range(spec.n_states)):
        test = apply(library("EQUAL"), s, church(j))
        branch = apply(library("IF"), test, _row_superposition(scaled[j]), branch)
    return Abs("s", branch)


def _transition_continuation(transition: Term, n_states: int,
                             state_pads: Sequence[int] | None = None,
                             literal_pads: Sequence[int] | None = None) -> Term:
    """``QK s k``: run Q on ``s`` and pass each resulting numeral, as a literal, to ``k``.

    ``literal_pads[t]`` idles the branch that produced ``t``; ``state_pads[s]``
    idles the whole stage before Q runs on ``s``.
    """
    lit_table = _cps_table([[church(q)] for q in range(n_states)], literal_pads)
    run = apply(library("HEAD"), apply(App(transition, Var("s")), library("TAIL"), lit_table),
                Var("k"))
    if state_pads is not None:
        pad_table = enc.encode_list([Abs("z", pad(p, Var("z"))) for p in state_pads])
        run = App(apply(library("HEAD"), apply(Var("s"), library("TAIL"), pad_table)), run)
    return lam("s", "k", run)


def emit_cell_map_term(spec: PqcaSpec, transition: Term,
                       timing: "Timing | None" = None) -> Term:
    """Apply the transition term to every cell of a (possibly unevaluated) configuration.

    The per-cell superpositions combine multiplicatively: each cell's result
    is fed to a continuation, so the branches of one cell distribute over the
    remaining cells in left-to-right order.
    """
    w = spec.width
    force = numeral_forcer(spec.n_states)
    if timing is None:
        qk = _transition_continuation(transition, spec.n_states)
    else:
        qk = _transition_continuation(transition, spec.n_states,
                                      timing.state_pads, timing.literal_pads)
    body: Term = _cons_chain([Var(f"y{i}") for i in range(w)])
    for i in reversed(range(w)):
        body = apply(qk, Var(f"v{i}"), Abs(f"y{i}", body))
    for i in reversed(range(w)):
        body = apply(force, Var(f"h{i}"), Abs(f"v{i}", body))
    return _destructure(w, body)


def emit_step_term(spec: PqcaSpec, sigma_term: Term | None = None,
                   transition: Term | None = None, lcm: bool = False,
                   timing: "Timing | None" = None) -> Term:
    """``STEP = \\c. MAP_Q (P c)``."""
    transition = transition or emit_transition_term(spec, lcm=lcm)
    if sigma_term is None:
        sigma_term = emit_sigma_term(spec, timing.split_pads if timing else None)
    return Abs("c", App(emit_cell_map_term(spec, transition, timing),
                        App(sigma_term, Var("c"))))


# ---------------------------------------------------------------- synchronisation
#
# A parallel step count is the length of the slowest branch, and the cost of a
# lookup depends on the numeral looked up.  Left alone, different branches of
# one STEP finish at different times, so the step count of k iterations is not
# linear in k and equal configurations reached by different routes are not
# structurally identical when compressed reduction compares them.  Padding
# every lookup leaf with idle steps makes every branch of STEP take the same
# number of steps.  All costs are measured on the emitted terms themselves.

PROBE = Var("probe")


@dataclass(frozen=True)
class Timing:
    split_pads: tuple[int, ...]
    state_pads: tuple[int, ...]
    literal_pads: tuple[int, ...]


def _cost(term: Term) -> int:
    trace = reduce(term, DEFAULT_FUEL)
    if trace.fuel_exhausted:
        raise RuntimeError("cost probe did not terminate")
    return trace.steps


def _stage_end(term: Term) -> tuple[int, bool]:
    """(steps until every branch is normal, whether all branches end together)."""
    seen_normal: dict = {}
    last = 0
    for n, (entries, _) in enumerate(compressed_steps([(term, 1)]), 1):
        last = n
        for t, _ in entries:
            if t.normal and t not in seen_normal:
                seen_normal[t] = n
    ends = set(seen_normal.values()) or {last}
    return last, len(ends) <= 1


def synchronize(spec: PqcaSpec, transition: Term) -> Timing | None:
    """Pads that give every branch of STEP the same length, or None if the
    per-digit costs are not additive (then STEP is emitted unpadded)."""
    n = spec.n_states
    split = digit_splitter(spec, [0] * n)
    join = digit_joiner(spec)
    force = numeral_forcer(n)

    # rebuilding a cell costs a sum of one term per incoming digit
    def rebuild(l, m, r):
        return _cost(apply(force, apply(join, church(l), church(m), church(r)), PROBE))
    base = rebuild(0, 0, 0)
    n_l, n_m, n_r = spec.sublattices
    g_l = [rebuild(l, 0, 0) - base for l in range(n_l)]
    g_m = [rebuild(0, m, 0) - base for m in range(n_m)]
    g_r = [rebuild(0, 0, r) - base for r in range(n_r)]
    for q in range(n):
        l, m, r = spec.split(q)
        if rebuild(l, m, r) != base + g_l[l] + g_m[m] + g_r[r]:
            return None
    own = []
    for q in range(n):
        l, m, r = spec.split(q)
        own.append(_cost(apply(split, church(q), PROBE)) + g_l[l] + g_m[m] + g_r[r])
    split_pads = tuple(max(own) - c for c in own)

    # a transition branch ends with a lookup of the produced numeral
    lit = [_cost(apply(church(t), library("TAIL"), _cps_table([[church(q)] for q in range(n)],
                                                              [0] * n),
                       enc.TRUE, PROBE)) for t in range(n)]
    literal_pads = tuple(max(lit) - c for c in lit)
    stage = []
    for v in range(n):
        qk = _transition_continuation(transition, n, [0] * n, literal_pads)
        steps, together = _stage_end(apply(qk, church(v), PROBE))
        if not together:
            return None
        stage.append(steps)
    state_pads = tuple(max(stage) - c for c in stage)
    return Timing(split_pads, state_pads, literal_pads)


def emit_accept_term(spec: PqcaSpec) -> Term:
    """``ACC enc(c)`` normalises to TRUE iff cell ``accept_cell`` holds an accepting state."""
    h = Var(f"h{spec.accept_cell}")
    test: Term = enc.FALSE
    for q in sorted(spec.accept_states, reverse=True):
        test = apply(library("IF"), apply(library("EQUAL"), h, church(q)), enc.TRUE, test)
    return _destructure(spec.width, test, cells=spec.accept_cell + 1)


def emit_iter_term(step_term: Term, k: int) -> Term:
    """``\\x. k STEP x``: k-fold iteration driven by a Church numeral."""
    return Abs("x", apply(church(k), step_term, Var("x")))


# ---------------------------------------------------------------- compiled bundle

@dataclass
class CompiledAutomaton:
    spec: PqcaSpec
    sigma_term: Term
    transition_term: Term
    step_term: Term
    accept_term: Term
    scaled_matrix: list[list[int]]
    ledger: ScaleLedger
    timing: Timing | None = None

    @property
    def synchronized(self) -> bool:
        return self.timing is not None

    @staticmethod
    def state_encoder(q: int) -> Term:
        return encode_state(q)


def compile_spec(spec: PqcaSpec, initial: Mapping[Configuration, Fraction] | None = None,
                 lcm: bool = False, sync: bool = True) -> CompiledAutomaton:
    """Emit P, Q, STEP and ACC for ``spec``.

    With ``sync`` (the default) STEP is padded so all of its branches take
    the same number of parallel steps; results are identical either way.
    """
    b, scaled = scale_matrix(spec.matrix, lcm)
    d = scale_superposition(initial, lcm)[0] if initial else 1
    transition = emit_transition_term(spec, scaled)
    timing = synchronize(spec, transition) if sync else None
    sigma_term = emit_sigma_term(spec, timing.split_pads if timing else None)
    return CompiledAutomaton(
        spec=spec,
        sigma_term=sigma_term,
        transition_term=transition,
        step_term=emit_step_term(spec, sigma_term, transition, timing=timing),
        accept_term=emit_accept_term(spec),
        scaled_matrix=scaled,
        ledger=ScaleLedger(b=b, d=d, width=spec.width, lcm=lcm),
        timing=timing,
    )


def encode_superposition(state: Mapping[Configuration, Fraction], lcm: bool = False
                         ) -> tuple[int, CanonicalSuperposition]:
    d, counts = scale_superposition(state, lcm)
    return d, combine((encode_config(c), n) for c, n in counts.items())


@dataclass
class IterationResult:
    k: int
    canonical: CanonicalSuperposition
    ledger: ScaleLedger
    steps: int
    work: int
    elapsed: float = field(default=0.0, compare=False)


@dataclass
class CompiledRun:
    iterations: list[IterationResult] = field(default_factory=list)
    fuel_exhausted: bool = False

    @property
    def final(self) -> IterationResult:
        return self.iterations[-1]

    def cumulative_steps(self) -> list[int]:
        total, out = 0, []
        for it in self.iterations:
            total += it.steps
            out.append(total)
        return out


def run_compiled(compiled: CompiledAutomaton, initial: Mapping[Configuration, Fraction],
                 k: int, fuel: int = DEFAULT_FUEL) -> CompiledRun:
    """Apply STEP ``k`` times to the encoded initial superposition.

    The driver distributes STEP over the canonical superposition, reduces all
    branches in parallel, and lets interference act between iterations.
    ``iterations[j]`` is the state after ``j`` applications.
    """
    for config in initial:
        check_configuration(config, compiled.spec)
    d, canon = encode_superposition(initial, compiled.ledger.lcm)
    ledger = replace(compiled.ledger, d=d, steps_applied=0)
    out = CompiledRun([IterationResult(0, canon, ledger, 0, 0)])
    remaining = fuel
    start = time.perf_counter()
    for j in range(1, k + 1):
        applied = CanonicalSuperposition((App(compiled.step_term, t), n) for t, n in canon)
        canon, trace = reduce_compressed(applied, remaining)
        remaining -= trace.steps
        ledger = ledger.advanced()
        out.iterations.append(IterationResult(j, canon, ledger, trace.steps, trace.work,
                                              time.perf_counter() - start))
        if trace.fuel_exhausted:
            out.fuel_exhausted = True
            break
    return out


def reduce_term(term: Term, fuel: int = DEFAULT_FUEL):
    return reduce(term, fuel)


# ---------------------------------------------------------------- manifest

MANIFEST_TERMS = ("P", "Q", "STEP", "ACC")


def write_manifest(compiled: CompiledAutomaton) -> str:
    spec, ledger = compiled.spec, compiled.ledger
    lines = [
        "# lambda-q compiled automaton",
        f"sublattices {' '.join(map(str, spec.sublattices))}",
        f"width {spec.width}",
        f"b {ledger.b}",
        f"d {ledger.d}",
        f"scaling {'lcm' if ledger.lcm else 'product'}",
    ]
    for j, row in enumerate(compiled.scaled_matrix):
        lines.append(f"T {j} " + " ".join(map(str, row)))
    terms = {"P": compiled.sigma_term, "Q": compiled.transition_term,
             "STEP": compiled.step_term, "ACC": compiled.accept_term}
    for name in MANIFEST_TERMS:
        lines.append(f"{name} = {show(terms[name])}")
    return "\n".join(lines) + "\n"


def read_manifest(text: str) -> dict:
    """Parse a manifest into ``{"b": int, "d": int, "w": int, "T": rows, "P": Term, ...}``."""
    out: dict = {"T": []}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if " = " in line:
            name, source = line.split(" = ", 1)
            out[name.strip()] = parse_term(source)
            continue
        words = line.split()
        if words[0] == "T":
            out["T"].append([int(x) for x in words[2:]])
        elif words[0] == "sublattices":
            out["sublattices"] = tuple(int(x) for x in words[1:])
        elif words[0] == "width":
            out["w"] = int(words[1])
        elif words[0] in ("b", "d"):
            out[words[0]] = int(words[1])
        elif words[0] == "scaling":
            out["scaling"] = words[1]
    return out


__all__ = [
    "CompiledAutomaton", "CompiledRun", "IterationResult", "MalformedConfiguration",
    "ScaleLedger", "ZeroTotalCount", "alpha_eq", "compile_spec", "decode_config",
    "decode_superposition", "emit_accept_term", "emit_cell_map_term", "emit_iter_term",
    "emit_sigma_term", "emit_step_term", "emit_transition_term", "encode_config",
    "encode_state", "encode_superposition", "read_manifest", "run_compiled",
    "scale_matrix", "scale_superposition", "write_manifest",
]
