"""Exact-rational reference simulator for one-dimensional partitioned QCA.

Each cell's state ``q`` factors as ``q = (l * n_m + m) * n_r + r``.  A step
first moves sub-states between neighbours (cell ``i`` takes ``l`` from cell
``i + 1`` and ``r`` from cell ``i - 1`` on a cyclic lattice), then applies the
local matrix to every cell.  ``matrix[s][t]`` is the amplitude for a cell in
state ``s`` to become state ``t``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple

Configuration = Tuple[int, ...]
SuperposedState = Dict[Configuration, Fraction]

GLOBAL_MATRIX_BOUND = 4096


class SpecError(ValueError):
    """Malformed automaton description."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class PqcaSpec:
    sublattices: tuple[int, int, int]
    width: int
    matrix: tuple[tuple[Fraction, ...], ...]
    accept_states: frozenset = frozenset()
    accept_cell: int = 0
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix",
                           tuple(tuple(Fraction(x) for x in row) for row in self.matrix))
        object.__setattr__(self, "accept_states", frozenset(self.accept_states))
        object.__setattr__(self, "sublattices", tuple(self.sublattices))

    @property
    def n_states(self) -> int:
        n_l, n_m, n_r = self.sublattices
        return n_l * n_m * n_r

    def split(self, q: int) -> tuple[int, int, int]:
        _, n_m, n_r = self.sublattices
        lm, r = divmod(q, n_r)
        l, m = divmod(lm, n_m)
        return l, m, r

    def join(self, l: int, m: int, r: int) -> int:
        _, n_m, n_r = self.sublattices
        return (l * n_m + m) * n_r + r

    def configurations(self) -> Iterable[Configuration]:
        return itertools.product(range(self.n_states), repeat=self.width)


@dataclass
class ValidationReport:
    errors: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    unitary: bool = False

    @property
    def ok(self) -> bool:
        return not self.errors


def is_unitary(matrix: Sequence[Sequence[Fraction]]) -> bool:
    """Exact check that ``transpose(M) @ M`` is the identity."""
    n = len(matrix)
    for i in range(n):
        for j in range(i, n):
            dot = sum(matrix[k][i] * matrix[k][j] for k in range(n))
            if dot != (1 if i == j else 0):
                return False
    return True


def validate(spec: PqcaSpec, strict: bool = False) -> ValidationReport:
    """Bounds, lowest-terms storage and exact unitarity.

    Non-unitarity is a warning unless ``strict``.
    """
    report = ValidationReport()
    n = spec.n_states
    if any(s < 1 for s in spec.sublattices):
        report.errors.append("sublattice sizes must be positive")
    if spec.width < 1:
        report.errors.append("width must be positive")
    if len(spec.matrix) != n or any(len(row) != n for row in spec.matrix):
        report.errors.append(f"matrix must be {n}x{n}")
        return report
    for row in spec.matrix:
        for x in row:
            if not isinstance(x, Fraction) or x.denominator < 1:
                report.errors.append(f"entry {x!r} not a lowest-terms rational")
    if not 0 <= spec.accept_cell < max(spec.width, 1):
        report.errors.append(f"accept cell {spec.accept_cell} outside [0, {spec.width})")
    for q in sorted(spec.accept_states):
        if not 0 <= q < n:
            report.errors.append(f"accept state {q} outside [0, {n})")
    report.unitary = is_unitary(spec.matrix)
    if not report.unitary:
        (report.errors if strict else report.warnings).append("matrix is not unitary")
    return report


def check_configuration(config: Configuration, spec: PqcaSpec) -> None:
    if len(config) != spec.width or any(not 0 <= q < spec.n_states for q in config):
        raise SpecError(f"invalid configuration {list(config)} for width {spec.width}, "
                        f"{spec.n_states} states")


def sigma(config: Configuration, spec: PqcaSpec) -> Configuration:
    """Partition shift: cell i takes l from cell i+1 and r from cell i-1."""
    w = len(config)
    parts = [spec.split(q) for q in config]
    return tuple(spec.join(parts[(i + 1) % w][0], parts[i][1], parts[(i - 1) % w][2])
                 for i in range(w))


def _cell_columns(spec: PqcaSpec) -> list[list[tuple[int, Fraction]]]:
    return [[(t, a) for t, a in enumerate(row) if a] for row in spec.matrix]


def step(state: Mapping[Configuration, Fraction], spec: PqcaSpec) -> SuperposedState:
    """One global step: shift, then the local matrix on each cell in turn.

    Applying the matrix cell by cell is the factored form of the tensor
    product over cells and needs far fewer multiplications on dense states.
    """
    current: dict[Configuration, Fraction] = {}
    for config in sorted(state):
        if state[config]:
            current[sigma(config, spec)] = state[config]
    successors = _cell_columns(spec)
    for i in range(spec.width):
        nxt: dict[Configuration, Fraction] = {}
        for config, alpha in current.items():
            head, tail = config[:i], config[i + 1:]
            for t, a in successors[config[i]]:
                key = head + (t,) + tail
                nxt[key] = nxt.get(key, 0) + alpha * a
        current = {c: a for c, a in nxt.items() if a}
    return {c: a for c, a in sorted(current.items())}


def run(spec: PqcaSpec, initial: Mapping[Configuration, Fraction], k: int) -> SuperposedState:
    if k < 0:
        raise ValueError("k must be nonnegative")
    state = dict(initial)
    for _ in range(k):
        state = step(state, spec)
    return state


def trajectory(spec: PqcaSpec, initial: Mapping[Configuration, Fraction], k: int
               ) -> list[SuperposedState]:
    """States after 0, 1, ..., k steps."""
    states = [dict(initial)]
    for _ in range(k):
        states.append(step(states[-1], spec))
    return states


def norm_squared(state: Mapping[Configuration, Fraction]) -> Fraction:
    return sum((a * a for a in state.values()), Fraction(0))


def acceptance_probability(state: Mapping[Configuration, Fraction], spec: PqcaSpec) -> Fraction:
    cell = spec.accept_cell
    return sum((a * a for c, a in state.items() if c[cell] in spec.accept_states),
               Fraction(0))


def basis(config: Sequence[int]) -> SuperposedState:
    return {tuple(config): Fraction(1)}


def config_index(config: Configuration, n_states: int) -> int:
    idx = 0
    for q in config:
        idx = idx * n_states + q
    return idx


def global_matrix(spec: PqcaSpec, bound: int = GLOBAL_MATRIX_BOUND) -> list[list[Fraction]]:
    """Dense ``G`` with ``G[target][source]``; one step is ``G @ v``.

    Built independently of :func:`step`: a sigma permutation matrix composed
    with the Kronecker power of the local matrix (transposed into column form).
    """
    n, w = spec.n_states, spec.width
    size = n ** w
    if size > bound:
        raise ValueError(f"global matrix would be {size}x{size}, bound is {bound}")
    local = [[spec.matrix[s][t] for s in range(n)] for t in range(n)]  # local[t][s]
    kron = [[Fraction(1)]]
    for _ in range(w):
        kron = [[a * b for a in ra for b in rb] for ra in kron for rb in local]
    # perm[k][j] = 1 iff configuration k is sigma(configuration j)
    image = [0] * size
    for config in spec.configurations():
        image[config_index(config, n)] = config_index(sigma(config, spec), n)
    return [[row[image[j]] for j in range(size)] for row in kron]


def matvec(matrix: Sequence[Sequence[Fraction]], vector: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * v for a, v in zip(row, vector) if a and v), Fraction(0)) for row in matrix]


def sparse_rows(matrix: Sequence[Sequence[Fraction]]) -> list[list[tuple[int, Fraction]]]:
    """Nonzero ``(column, entry)`` pairs of each row, for repeated products."""
    return [[(j, a) for j, a in enumerate(row) if a] for row in matrix]


def sparse_matvec(rows: Sequence[Sequence[tuple[int, Fraction]]],
                  vector: Sequence[Fraction]) -> list[Fraction]:
    return [sum((a * vector[j] for j, a in row), Fraction(0)) for row in rows]


def state_to_vector(state: Mapping[Configuration, Fraction], spec: PqcaSpec) -> list[Fraction]:
    vec = [Fraction(0)] * spec.n_states ** spec.width
    for c, a in state.items():
        vec[config_index(c, spec.n_states)] = a
    return vec


def vector_to_state(vector: Sequence[Fraction], spec: PqcaSpec) -> SuperposedState:
    return {c: vector[config_index(c, spec.n_states)]
            for c in spec.configurations() if vector[config_index(c, spec.n_states)]}


# ---------------------------------------------------------------- spec files

def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"bad rational {text!r}") from exc


def parse_spec(text: str, name: str = "") -> tuple[PqcaSpec, SuperposedState]:
    """Parse the line-oriented automaton format; returns the spec and initial state.

    Without ``init`` lines the initial state is the all-zero basis configuration.
    """
    sub = width = None
    rows: dict[int, tuple[Fraction, ...]] = {}
    accept_states: set[int] = set()
    accept_cell = 0
    basis_init = None
    amp_init: dict[Configuration, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            head = words[0]
            if head == "sublattices":
                if len(words) != 4:
                    raise SpecError("sublattices needs three sizes", lineno)
                sub = tuple(int(x) for x in words[1:])
            elif head == "width":
                width = int(words[1])
            elif head == "row":
                i = int(words[1])
                if i in rows:
                    raise SpecError(f"row {i} given twice", lineno)
                rows[i] = tuple(parse_fraction(x) for x in words[2:])
            elif head == "accept" and words[1:2] == ["states"]:
                accept_states.update(int(x) for x in words[2:])
            elif head == "accept" and words[1:2] == ["cell"]:
                accept_cell = int(words[2])
            elif head == "init" and words[1:2] == ["amp"]:
                amp = parse_fraction(words[2])
                config = tuple(int(x) for x in words[3:])
                amp_init[config] = amp_init.get(config, 0) + amp
            elif head == "init":
                basis_init = tuple(int(x) for x in words[1:])
            else:
                raise SpecError(f"unknown directive {head!r}", lineno)
        except (IndexError, ValueError) as exc:
            if isinstance(exc, SpecError) and exc.line:
                raise
            raise SpecError(str(exc) or "malformed line", lineno) from exc
    if sub is None or width is None:
        raise SpecError("missing 'sublattices' or 'width'")
    n = sub[0] * sub[1] * sub[2]
    if sorted(rows) != list(range(n)):
        raise SpecError(f"expected rows 0..{n - 1}")
    spec = PqcaSpec(sub, width, tuple(rows[i] for i in range(n)),
                    frozenset(accept_states), accept_cell, name)
    if amp_init and basis_init is not None:
        raise SpecError("mix of 'init' and 'init amp' lines")
    if amp_init:
        initial = {c: a for c, a in amp_init.items() if a}
    else:
        initial = basis(basis_init if basis_init is not None else (0,) * width)
    for config in initial:
        check_configuration(config, spec)
    return spec, initial


def load_spec(path) -> tuple[PqcaSpec, SuperposedState]:
    with open(path, encoding="utf-8") as fh:
        return parse_spec(fh.read(), name=str(path))


def format_spec(spec: PqcaSpec, initial: Mapping[Configuration, Fraction] | None = None) -> str:
    lines = [f"sublattices {' '.join(map(str, spec.sublattices))}", f"width {spec.width}"]
    for i, row in enumerate(spec.matrix):
        lines.append(f"row {i} " + " ".join(str(x) for x in row))
    if spec.accept_states:
        lines.append("accept states " + " ".join(map(str, sorted(spec.accept_states))))
    lines.append(f"accept cell {spec.accept_cell}")
    if initial:
        if len(initial) == 1 and next(iter(initial.values())) == 1:
            lines.append("init " + " ".join(map(str, next(iter(initial)))))
        else:
            for c, a in sorted(initial.items()):
                lines.append(f"init amp {a} " + " ".join(map(str, c)))
    return "\n".join(lines) + "\n"
