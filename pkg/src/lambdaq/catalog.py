"""Random automata built from exact rational orthogonal matrices."""
from __future__ import annotations

import random
from fractions import Fraction

from .pqca import PqcaSpec, SuperposedState, basis

ROTATION = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(-4, 5), Fraction(3, 5)))
REFLECTION = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(4, 5), Fraction(-3, 5)))
STOCHASTIC_MATRIX = ((Fraction(2, 3), Fraction(1, 3)), (Fraction(0), Fraction(1)))

SUBLATTICES = [(a, b, c) for a in range(1, 5) for b in range(1, 5) for c in range(1, 5)
               if a * b * c <= 4]


def identity(n: int) -> list[list[Fraction]]:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
             for j in range(len(b[0]))] for i in range(len(a))]


def permutation_matrix(perm) -> list[list[Fraction]]:
    n = len(perm)
    return [[Fraction(int(perm[i] == j)) for j in range(n)] for i in range(n)]


def embed_blocks(n: int, blocks) -> list[list[Fraction]]:
    """Identity with 2x2 ``blocks`` placed on the given disjoint index pairs."""
    m = identity(n)
    for (i, j), block in blocks:
        m[i][i], m[i][j] = block[0]
        m[j][i], m[j][j] = block[1]
    return m


def random_orthogonal(n: int, rng: random.Random) -> list[list[Fraction]]:
    """Permutation times a block-diagonal of the two 3-4-5 blocks (or identity)."""
    perm = list(range(n))
    rng.shuffle(perm)
    indices = list(range(n))
    rng.shuffle(indices)
    blocks = []
    for p in range(n // 2):
        if rng.random() < 0.6:
            pair = (indices[2 * p], indices[2 * p + 1])
            blocks.append((pair, rng.choice([ROTATION, REFLECTION])))
    return matmul(permutation_matrix(perm), embed_blocks(n, blocks))


def random_spec(rng: random.Random, max_states: int = 4, max_width: int = 4,
                name: str = "") -> tuple[PqcaSpec, SuperposedState]:
    sub = rng.choice([s for s in SUBLATTICES if s[0] * s[1] * s[2] <= max_states])
    n = sub[0] * sub[1] * sub[2]
    width = rng.randint(1, max_width)
    accept = frozenset(q for q in range(n) if rng.random() < 0.5)
    spec = PqcaSpec(sub, width, random_orthogonal(n, rng), accept,
                    rng.randrange(width), name)
    initial = basis([rng.randrange(n) for _ in range(width)])
    return spec, initial


def catalog(count: int, seed: int = 0, **kwargs) -> list[tuple[PqcaSpec, SuperposedState]]:
    rng = random.Random(seed)
    return [random_spec(rng, name=f"random-{seed}-{i}", **kwargs) for i in range(count)]
