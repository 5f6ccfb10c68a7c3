import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from volpoly.algebra import _coaugmented_cocycles
from volpoly.errors import PreconditionError
from volpoly.exactmath import SkewForm, rank
from volpoly.fixtures import cp2, octahedron, square, star, torus
from volpoly.polytope import (MultiPolytope, face, mc_volume, minkowski_cocycle_check,
                              minkowski_facet_check, wall_crossing, winding_number_2d)
from volpoly.simplicial import Chain, coboundary


def P(fan, c=None):
    return MultiPolytope(fan, [1] * fan.m if c is None else c)


def test_vertices():
    assert P(square()).vertex((0, 1)) == (1, 1)
    assert all(x == (0, 0) for x in P(cp2(), [0, 0, 0]).vertices().values())
    assert P(star()).vertex((0, 1)) == (1, 3)


def test_dh_values():
    assert P(star()).dh((0, 0)).value == 2
    sq = P(square())
    assert sq.dh((0, 0)).value == 1 and sq.dh((3, 0)).value == 0


def test_dh_independent_of_v():
    st_ = P(star())
    rng = random.Random(4)
    u = (F(1, 3), F(-1, 5))
    values = {st_.dh(u, st_.fan.generic_vector(rng)).value for _ in range(10)}
    assert len(values) == 1


def test_dh_on_wall_is_rejected():
    with pytest.raises(PreconditionError):
        P(square()).dh((1, 0))


def test_winding_examples():
    assert winding_number_2d(P(star()), (0, 0)) == 2
    assert winding_number_2d(P(square()), (F(1, 2), F(1, 3))) == 1
    assert winding_number_2d(P(star()), (40, -33)) == 0


@given(st.fractions(-4, 4, max_denominator=50), st.fractions(-4, 4, max_denominator=50),
       st.lists(st.integers(1, 4), min_size=5, max_size=5))
@settings(max_examples=60, deadline=None)
def test_dh_matches_winding(x, y, c):
    Q = P(star(), c)
    if any(Q.offset((x, y), i) == 0 for i in range(5)):
        return
    assert Q.dh((x, y)).value == winding_number_2d(Q, (x, y))


def test_mc_small():
    est, err = mc_volume(P(square()), 20000, seed=1)
    assert abs(est - 4.0) <= 3 * err + 1e-12
    est, err = mc_volume(P(cp2()), 20000, seed=1)
    assert abs(est - 4.5) <= 3 * err


def test_faces():
    f = face(P(octahedron()), (0,))
    assert f.polytope.fan.n == 2
    assert [f.polytope.c[i] for i in (1, 2, 4, 5)] == [1, 1, 1, 1]
    seg = face(P(square(), [1, 2, 3, 4]), (0,))
    assert seg.normalized_volume() == 2 + 4
    whole = face(P(square()), ())
    assert whole.polytope.c == P(square()).c and whole.polytope.fan == square()


def test_face_volume_two_routes_on_random_torus_faces():
    from volpoly.volume import derivative
    Q = P(torus(), [1, 2, 3, 5, 7, 11, 13])
    V = Q.volume_polynomial()
    for J in [(0,), (3,), (0, 1), (2, 5)]:
        if J in Q.fan.complex:
            assert face(Q, J).normalized_volume() == derivative(V, J).evaluate(Q.c)


def test_wall_crossing_square():
    lhs, rhs, _ = wall_crossing(P(square()), 0, (1, F(1, 3)), (1, 0))
    assert lhs == rhs == 1


def test_facet_minkowski():
    assert minkowski_facet_check(P(square(), [1, 2, 3, 4])) == (0, 0)
    rng = random.Random(8)
    c = [F(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(5)]
    assert minkowski_facet_check(P(star(), c)) == (0, 0)
    assert minkowski_facet_check(P(cp2(), [1, 0, 0])) == (0, 0)


def test_cocycle_minkowski():
    sq = square()
    K = sq.complex
    closed = _coaugmented_cocycles(K, sq.underlying_chain(), 1, exact=False)
    for t in closed:
        assert minkowski_cocycle_check(P(sq), Chain(0, t), SkewForm(2, 1, {(0,): 1})) == 0
    oct_ = octahedron()
    rng = random.Random(1)
    b = Chain(0, {(v,): rng.randint(-5, 5) for v in range(6)})
    exact = coboundary(b, oct_.complex)
    assert minkowski_cocycle_check(P(oct_, [1, 2, 3, 4, 5, 6]), exact, SkewForm(3, 2, {(0, 2): 1})) == 0
    tor = torus()
    closed = _coaugmented_cocycles(tor.complex, tor.underlying_chain(), 2, exact=False)
    exact = _coaugmented_cocycles(tor.complex, tor.underlying_chain(), 2, exact=True)
    # first cohomology of the torus has rank 2
    assert len(closed) - rank([[e.get(f, 0) for f in tor.complex.faces(1)] for e in exact]) == 2
    for t in _coaugmented_cocycles(tor.complex, tor.underlying_chain(), 2, exact=False):
        r = minkowski_cocycle_check(P(tor, [1, 2, 3, 5, 7, 11, 13]), Chain(1, t), SkewForm(3, 2, {(1, 2): 1}))
        assert r == 0


def test_cocycle_check_rejects_non_cocycle():
    with pytest.raises(PreconditionError):
        minkowski_cocycle_check(P(octahedron()), Chain(1, {(0, 1): 1}), SkewForm(3, 2, {(0, 1): 1}))
