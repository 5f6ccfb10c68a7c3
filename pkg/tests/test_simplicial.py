import random

from hypothesis import given, settings, strategies as st

from volpoly.fixtures import (boundary_simplex_complex, octahedron, square, torus,
                              torus_complex)
from volpoly.simplicial import (Chain, SimplicialComplex, boundary, classify, coboundary, link,
                                profile, reduced_betti)


def test_boundary_examples():
    assert boundary(square().underlying_chain()).is_zero()
    edge = boundary(Chain(1, {(0, 1): 1}))
    assert edge.terms == {(1,): 1, (0,): -1}


@given(st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_boundary_squared_is_zero(seed):
    rng = random.Random(seed)
    K = octahedron().complex
    c = Chain(2, {f: rng.randint(-3, 3) for f in K.facets})
    assert boundary(boundary(c)).is_zero()


def test_coboundary_squared_is_zero():
    K = octahedron().complex
    rng = random.Random(2)
    a = Chain(0, {v: rng.randint(-4, 4) for v in K.faces(0)})
    assert coboundary(coboundary(a, K), K).is_zero()


def test_reduced_betti():
    assert reduced_betti(boundary_simplex_complex(2)) == (0, 1)
    assert reduced_betti(torus_complex()) == (0, 2, 1)
    assert not any(reduced_betti(SimplicialComplex(3, [(0, 1, 2)])))


def test_profiles():
    assert profile(square().complex).h_vector == (1, 2, 1)
    oct_ = profile(octahedron().complex)
    assert oct_.f_vector == (6, 12, 8) and oct_.h_vector == (1, 3, 3, 1)
    tor = profile(torus_complex())
    assert tor.f_vector == (7, 21, 14)
    assert tor.h_vector == (1, 4, 10, -1)
    assert tor.h_prime == (1, 4, 10, 1)
    assert tor.h_double_prime == (1, 4, 4, 1)


def test_h_vector_of_sphere_is_palindromic():
    for K in (octahedron().complex, boundary_simplex_complex(3), boundary_simplex_complex(4)):
        h = profile(K).h_vector
        assert h == h[::-1]


def test_links():
    K = octahedron().complex
    L = link(K, (0,))
    assert len(L.facets) == 4 and reduced_betti(L) == (0, 1)
    assert link(K, ()) == K
    T = torus_complex()
    assert len(link(T, (0, 1)).facets) == 2


def test_classification():
    oct_ = classify(octahedron().complex)
    assert oct_.is_gorenstein_star and oct_.is_homology_manifold
    tor = classify(torus().complex)
    assert not tor.is_gorenstein_star
    assert tor.is_homology_manifold and tor.is_orientable
    two = SimplicialComplex(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not classify(two).is_pseudomanifold


def test_fundamental_chain_is_closed():
    for K in (octahedron().complex, torus_complex()):
        z = classify(K).fundamental_chain
        assert z is not None and boundary(z).is_zero()
        assert set(abs(x) for x in z.terms.values()) == {1}


def test_chain_json_roundtrip():
    c = Chain(1, {(0, 2): 3, (1, 2): -1})
    assert Chain.from_json(c.to_json()) == c
    K = torus_complex()
    assert SimplicialComplex.from_json(K.to_json()) == K
