"""Side-by-side runs of the reference simulator and the compiled reduction."""
from __future__ import annotations

import statistics
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .compiler import (DEFAULT_FUEL, CompiledAutomaton, CompiledRun, compile_spec,
                       decode_superposition, run_compiled)
from .pqca import Configuration, PqcaSpec, SuperposedState, run


@dataclass
class ComparisonReport:
    spec: str
    k: int
    left: SuperposedState
    right: SuperposedState
    steps: int
    work: int
    wall_time: float = field(default=0.0, compare=False)
    fuel_exhausted: bool = False

    @property
    def equal(self) -> bool:
        return not self.fuel_exhausted and self.left == self.right

    def diffs(self) -> list[tuple[Configuration, Fraction, Fraction]]:
        """(configuration, reference amplitude, compiled amplitude) where they differ."""
        out = []
        for c in sorted(set(self.left) | set(self.right)):
            a, b = self.left.get(c, Fraction(0)), self.right.get(c, Fraction(0))
            if a != b:
                out.append((c, a, b))
        return out


def compare(spec: PqcaSpec, initial: Mapping[Configuration, Fraction], k: int,
            decode_mode: str = "ledger", lcm: bool = False, fuel: int = DEFAULT_FUEL,
            compiled: CompiledAutomaton | None = None) -> ComparisonReport:
    if k < 0:
        raise ValueError("k must be nonnegative")
    start = time.perf_counter()
    compiled = compiled or compile_spec(spec, initial, lcm)
    result = run_compiled(compiled, initial, k, fuel)
    report = report_from_run(spec, initial, result, k, decode_mode)
    report.wall_time = time.perf_counter() - start
    return report


def report_from_run(spec: PqcaSpec, initial: Mapping[Configuration, Fraction],
                    result: CompiledRun, k: int, decode_mode: str = "ledger"
                    ) -> ComparisonReport:
    """Compare iteration ``k`` of an existing compiled run with the reference simulator."""
    left = run(spec, initial, k)
    exhausted = result.fuel_exhausted and k >= len(result.iterations) - 1
    if k >= len(result.iterations) and not exhausted:
        raise ValueError(f"run has no iteration {k}")
    last = min(k, len(result.iterations) - 1)
    it = result.iterations[last]
    right = {} if exhausted else decode_superposition(it.canonical, it.ledger, decode_mode)
    steps = result.cumulative_steps()[last]
    work = sum(i.work for i in result.iterations[:last + 1])
    return ComparisonReport(spec.name, k, left, right, steps, work, it.elapsed, exhausted)


@dataclass
class BenchRow:
    k: int
    steps: int
    work: int
    wall_time: float


@dataclass
class LinearFit:
    slope: float
    intercept: float
    rms_residual: float
    relative_residual: float


def bench(spec: PqcaSpec, initial: Mapping[Configuration, Fraction], ks: Sequence[int],
          lcm: bool = False, fuel: int = DEFAULT_FUEL) -> tuple[list[BenchRow], bool]:
    """Steps, work and wall time after each requested k, from one run to ``max(ks)``.

    Iteration is deterministic, so the first k iterations of a longer run are
    exactly the run for k.  Returns the rows and whether fuel ran out; rows
    past the point where fuel ran out are omitted.
    """
    if any(k < 0 for k in ks):
        raise ValueError("k must be nonnegative")
    compiled = compile_spec(spec, initial, lcm)
    result = run_compiled(compiled, initial, max(ks, default=0), fuel)
    cumulative = result.cumulative_steps()
    rows = []
    work = 0
    works = []
    for it in result.iterations:
        work += it.work
        works.append(work)
    for k in ks:
        if k < len(result.iterations) and not (result.fuel_exhausted
                                               and k == len(result.iterations) - 1):
            rows.append(BenchRow(k, cumulative[k], works[k], result.iterations[k].elapsed))
    return rows, result.fuel_exhausted


def linear_fit(rows: Sequence[BenchRow]) -> LinearFit:
    """Least-squares ``steps = a k + c`` with RMS residual, also relative to mean steps."""
    ks = [r.k for r in rows]
    ys = [r.steps for r in rows]
    if len(set(ks)) < 2:
        raise ValueError("need at least two distinct k for a fit")
    slope, intercept = statistics.linear_regression(ks, ys)
    rms = (sum((y - (slope * k + intercept)) ** 2 for k, y in zip(ks, ys)) / len(ks)) ** 0.5
    mean = statistics.fmean(ys)
    return LinearFit(slope, intercept, rms, rms / mean if mean else 0.0)
