"""Seeded random complete multi-fans."""
from __future__ import annotations

from itertools import combinations

from .errors import PreconditionError
from .exactmath import ZERO, det, kernel_basis
from .multifan import MultiFan, as_rng


def _boundary_rows(facets, n):
    ridges = sorted({I[:k] + I[k + 1:] for I in facets for k in range(n)})
    index = {r: t for t, r in enumerate(ridges)}
    rows = [[ZERO] * len(facets) for _ in ridges]
    for j, I in enumerate(facets):
        for k in range(n):
            rows[index[I[:k] + I[k + 1:]]][j] += 1 if k % 2 == 0 else -1
    return rows


def random_complete_fan(rng=None, n: int = 2, m: int = 5, bound: int = 5, tries: int = 200) -> MultiFan:
    """Integer lambda in [-bound, bound] and a random integer combination of
    one to three cycles of the matroid complex as weights."""
    rng = as_rng(rng)
    for _ in range(tries):
        lam = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(m)]
        facets = [I for I in combinations(range(m), n) if det([lam[i] for i in I]) != 0]
        if not facets:
            continue
        cycles = kernel_basis(_boundary_rows(facets, n), len(facets))
        if not cycles:
            continue
        k = rng.randint(1, min(3, len(cycles)))
        picks = rng.sample(range(len(cycles)), k)
        w = [ZERO] * len(facets)
        for t in picks:
            a = rng.choice((-1, 1)) * rng.randint(1, 3)
            w = [x + a * y for x, y in zip(w, cycles[t])]
        weights = {I: x for I, x in zip(facets, w) if x}
        if not weights:
            continue
        return MultiFan(lam, weights, n=n)
    raise PreconditionError("could not sample a nonzero complete multi-fan")
