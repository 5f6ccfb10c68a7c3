import random

import pytest
from hypothesis import given, settings, strategies as st

from volpoly.errors import PreconditionError, ValidationError
from volpoly.fixtures import cp2, octahedron, square, star
from volpoly.generators import random_complete_fan
from volpoly.multifan import (MultiFan, connected_sum, elementary, flip, linear_combine)
from volpoly.volume import volume_poly_index


def test_validate_examples():
    assert cp2().validate()["valid"]
    sq = square()
    lam = list(sq.lam)
    lam[2] = (1, 0)
    # {1,3} is not supported, so the star-condition is untouched
    assert MultiFan(lam, sq.weights).validate()["valid"]
    with pytest.raises(ValidationError):
        MultiFan(lam, {**sq.weights, (0, 2): 1})
    zero = MultiFan(sq.lam, {})
    rep = zero.validate()
    assert rep["valid"] and rep["zero"]


def test_completeness():
    assert star().is_complete()
    sq = square()
    w = dict(sq.weights)
    w[(0, 1)] *= 2
    assert not MultiFan(sq.lam, w).is_complete()
    assert MultiFan(sq.lam, {}).is_complete()


def test_degree():
    assert star().degree_at((1, 5)) == 2
    assert cp2().degree_at((1, 2)) == 1
    assert MultiFan(cp2().lam, {}).degree_at((1, 2)) == 0


@given(st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_degree_constant_on_complete_fans(seed):
    rng = random.Random(seed)
    fan = random_complete_fan(rng, rng.choice((2, 3)), rng.randint(4, 6))
    v1, v2 = fan.generic_vector(rng), fan.generic_vector(rng)
    assert fan.degree_at(v1) == fan.degree_at(v2)


def test_json_roundtrip():
    for fan in (cp2(), star(), octahedron()):
        assert MultiFan.from_json(fan.to_json()) == fan
    with pytest.raises(ValidationError):
        MultiFan.from_json({"format": "multifan/9", "n": 1, "m": 0, "lambda": [], "weights": []})


def test_projection():
    oct_ = octahedron()
    pr = oct_.project((0,))
    assert pr.fan.n == 2 and len(pr.fan.weights) == 4 and pr.fan.is_complete()
    assert oct_.project(()).fan == oct_
    for i, j in ((0, 1), (0, 2), (1, 5)):
        two = oct_.project((i, j))
        step = oct_.project((i,)).project((j,))
        assert step.simplex == two.simplex
        assert step.fan == two.fan and step.scale == two.scale


def test_projection_of_random_fan_is_complete():
    rng = random.Random(11)
    fan = random_complete_fan(rng, 3, 6)
    for v in sorted({v for I in fan.weights for v in I}):
        assert fan.project((v,)).fan.is_complete()


def test_elementary():
    e = elementary([(1, 0), (0, 1), (-1, -1)])
    assert e.is_complete()
    assert volume_poly_index(e).form in (volume_poly_index(cp2()).form, -volume_poly_index(cp2()).form)
    assert elementary([(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)]).is_complete()
    with pytest.raises(PreconditionError):
        elementary([(1, 0), (1, 0), (0, 1)])


def test_linear_combine():
    sq = square()
    assert linear_combine([(1, sq), (-1, sq)]).is_zero()
    V = volume_poly_index(sq).form
    assert volume_poly_index(linear_combine([(2, sq)])).form == 2 * V
    lam = [(1, 0), (0, 1), (-1, -1), (1, 1)]
    a = MultiFan(lam, {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    b = MultiFan(lam, {(0, 1): 2, (1, 3): 1})
    s = linear_combine([(1, a), (1, b)])
    assert s.weights[(0, 1)] == 3 and s.weights[(1, 3)] == 1


def test_connected_sum():
    c = cp2()
    cs = connected_sum(c, c, (0, 1))
    assert cs.m == 4 and cs.is_complete()
    other = MultiFan([(2, 0), (0, 1), (-1, -1)], {(0, 1): 1, (1, 2): 1, (0, 2): -1})
    with pytest.raises(PreconditionError):
        connected_sum(c, other, (0, 1))


def test_flips():
    c = cp2()
    g = flip(c, (0, 1), 1, (1, 1))
    assert g.m == 4 and g.is_complete()
    assert (0, 1) not in g.weights and {(0, 3), (1, 3)} <= set(g.weights)
    # the inverse (n,1)-flip at the new vertex gives the original fan back
    assert flip(g, (3,), 2) == c
    with pytest.raises(PreconditionError):
        flip(c, (0, 2, 3), 2)


def general_octahedron(seed, S=(0, 1, 2, 5)):
    from itertools import combinations
    from volpoly.exactmath import det
    from volpoly.fixtures import fan_on_complex, random_lambda
    rng = random.Random(seed)
    K = octahedron().complex
    while True:
        lam = random_lambda(K, 3, rng)
        if all(det([lam[i] for i in T]) != 0 for T in combinations(S, 3)):
            return fan_on_complex(K, lam)


def test_two_two_flip_swaps_facets():
    fan = general_octahedron(3)
    S = (0, 1, 2, 5)
    g = flip(fan, S, 2)
    assert g.is_complete()
    inside_before = sorted(f for f in fan.weights if set(f) <= set(S))
    inside_after = sorted(f for f in g.weights if set(f) <= set(S))
    assert inside_before == [(0, 1, 2), (0, 1, 5)]
    assert inside_after == [(0, 2, 5), (1, 2, 5)]
