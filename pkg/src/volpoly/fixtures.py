"""Reference multi-fans and complexes used by the tests and the CLI."""
from __future__ import annotations

from itertools import product

from .errors import PreconditionError, ValidationError
from .exactmath import det
from .multifan import MultiFan, as_rng
from .simplicial import SimplicialComplex, fundamental_chain


def cp2() -> MultiFan:
    """Normal fan of the standard triangle."""
    return MultiFan.from_oriented([(1, 0), (0, 1), (-1, -1)],
                                  {(0, 1): 1, (1, 2): 1, (0, 2): 1})


def square() -> MultiFan:
    return cube_fan(2)


def octahedron() -> MultiFan:
    return cube_fan(3)


def cube_fan(n: int) -> MultiFan:
    """Normal fan of the cube: vertex i is e_i, vertex n+i is -e_i."""
    lam = []
    for sgn in (1, -1):
        for i in range(n):
            lam.append(tuple(sgn if j == i else 0 for j in range(n)))
    weights = {}
    for choice in product((0, 1), repeat=n):
        weights[tuple(sorted(i + n * s for i, s in enumerate(choice)))] = 1
    return MultiFan.from_oriented(lam, weights)


def star() -> MultiFan:
    """Five rays on a 5-cycle winding twice around the origin."""
    return MultiFan.from_oriented([(1, 0), (-2, 1), (1, -2), (0, 1), (-1, -1)],
                                  {(0, 1): 1, (1, 2): 1, (2, 3): 1, (3, 4): 1, (0, 4): 1})


def torus_complex() -> SimplicialComplex:
    """Seven-vertex triangulation of the torus."""
    facets = set()
    for i in range(7):
        facets.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        facets.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    return SimplicialComplex(7, facets)


def torus() -> MultiFan:
    """Torus triangulation with lambda(i) on the moment curve (i, i^2, i^3)."""
    K = torus_complex()
    lam = [(i, i * i, i ** 3) for i in range(1, 8)]
    return fan_on_complex(K, lam)


def icosahedron_complex() -> SimplicialComplex:
    """Boundary of the icosahedron: apex 0, rings 1..5 and 6..10, apex 11."""
    facets = []
    for k in range(5):
        a, b = 1 + k, 1 + (k + 1) % 5
        c, d = 6 + k, 6 + (k + 1) % 5
        facets += [(0, a, b), (a, b, c), (b, c, d), (11, c, d)]
    return SimplicialComplex(12, facets)


def boundary_simplex_complex(n: int) -> SimplicialComplex:
    return SimplicialComplex(n + 1, [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)])


def fan_on_complex(K: SimplicialComplex, lam) -> MultiFan:
    """Multi-fan with weights given by the fundamental chain of K."""
    z = fundamental_chain(K)
    if z is None:
        raise PreconditionError("complex has no fundamental chain")
    return MultiFan(lam, z.terms)


def random_lambda(K: SimplicialComplex, n: int, rng=None, bound: int = 5, tries: int = 1000):
    """Integer characteristic vectors satisfying the star-condition on K."""
    rng = as_rng(rng)
    for _ in range(tries):
        lam = [tuple(rng.randint(-bound, bound) for _ in range(n)) for _ in range(K.m)]
        if all(det([lam[i] for i in f]) != 0 for f in K.facets):
            return lam
    raise PreconditionError("no characteristic map found")


FIXTURES = {"cp2": cp2, "sq": square, "oct": octahedron, "star": star, "tor": torus}


def by_name(name: str) -> MultiFan:
    try:
        return FIXTURES[name.lower()]()
    except KeyError:
        raise ValidationError(f"unknown fixture {name!r}; choose from {sorted(FIXTURES)}") from None
