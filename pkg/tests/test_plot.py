import pytest

from volpoly.errors import PreconditionError
from volpoly.fixtures import cp2, octahedron, square, star
from volpoly.multifan import MultiFan
from volpoly.plot import dh_chambers, emit_svg
from volpoly.polytope import MultiPolytope, winding_number_2d


def P(fan):
    return MultiPolytope(fan, [1] * fan.m)


def test_square_chambers():
    ch = dh_chambers(P(square()))
    assert len(ch) == 9
    centre = [c for c in ch if all(abs(x) < 1 for x in c.witness)]
    assert len(centre) == 1 and centre[0].value == 1


def test_star_labels():
    ch = dh_chambers(P(star()))
    assert {c.value for c in ch} == {0, 1, 2}
    assert sum(1 for c in ch if c.value == 1) == 5
    for c in ch:
        assert c.value == winding_number_2d(P(star()), c.witness)


def test_svg_is_deterministic():
    a = emit_svg(P(star()))
    assert a == emit_svg(P(star()))
    assert a.startswith("<svg") and 'width="800"' in a and ">2</text>" in a


def test_svg_errors():
    with pytest.raises(PreconditionError):
        emit_svg(P(octahedron()))
    with pytest.raises(PreconditionError):
        emit_svg(P(MultiFan(cp2().lam, {})))
