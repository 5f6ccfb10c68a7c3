"""The thirteen acceptance criteria, each at its stated tolerance."""
import functools
import random
import subprocess
import sys
import time
from fractions import Fraction as F
from itertools import combinations
from math import comb, factorial

import pytest

from volpoly.algebra import (_coaugmented_cocycles, build, sr_quotient_dims, verify_structure)
from volpoly.errors import InternalAssertionError
from volpoly.exactmath import HomogeneousForm, SkewForm, det
from volpoly.fixtures import (FIXTURES, boundary_simplex_complex, cp2, cube_fan, fan_on_complex,
                              icosahedron_complex, octahedron, random_lambda, square, star, torus)
from volpoly.generators import random_complete_fan
from volpoly.multifan import MultiFan, connected_sum, flip
from volpoly.plot import emit_svg
from volpoly.polytope import (MultiPolytope, mc_volume, minkowski_cocycle_check,
                              minkowski_facet_check, winding_number_2d)
from volpoly.recognize import is_volume_polynomial, reconstruct_detailed
from volpoly.simplicial import Chain, profile, reduced_betti
from volpoly.volume import recover_lambda, volume_poly_index, volume_poly_lawrence


def xs(m):
    return [HomogeneousForm.variable(m, i) for i in range(m)]


def dm(fan):
    return build(volume_poly_index(fan).form).dims


@functools.lru_cache(maxsize=None)
def random_suite():
    rng = random.Random(2024)
    fans = []
    for _ in range(50):
        n = rng.choice((2, 3))
        fans.append(random_complete_fan(rng, n, rng.randint(n + 2, 8), bound=5))
    return tuple(fans)


def test_criterion_01_cp2_volume_both_routes():
    start = time.perf_counter()
    c = xs(3)
    expected = F(1, 2) * (c[0] + c[1] + c[2]) ** 2
    assert volume_poly_index(cp2()).form == expected
    assert volume_poly_lawrence(cp2()).form == expected
    assert time.perf_counter() - start < 1.0


def polarization_rhs(n):
    """(1/n!) sum over I of (-1)^(n-|I|) c_I^n, in 2n variables."""
    c = xs(2 * n)
    total = HomogeneousForm(2 * n, n)
    for k in range(1, n + 1):
        for I in combinations(range(n), k):
            cI = c[I[0]]
            for i in I[1:]:
                cI = cI + c[i]
            total = total + (-1) ** (n - k) * cI ** n
    return F(1, factorial(n)) * total


def test_criterion_02_cube_fans_and_polarization():
    c = xs(4)
    assert volume_poly_index(square()).form == (c[0] + c[2]) * (c[1] + c[3])
    c = xs(6)
    assert volume_poly_index(octahedron()).form == (c[0] + c[3]) * (c[1] + c[4]) * (c[2] + c[5])
    for n in (2, 3, 4):
        fan = cube_fan(n)
        V = volume_poly_lawrence(fan, tuple(range(1, n + 1))).form
        lhs = V.specialize_zero(range(n, 2 * n))
        residual = lhs - polarization_rhs(n)
        assert residual.is_zero()
        prod = xs(2 * n)[0]
        for i in range(1, n):
            prod = prod * xs(2 * n)[i]
        assert lhs == prod


def test_criterion_03_route_equivalence():
    start = time.perf_counter()
    rng = random.Random(99)
    for fan in random_suite():
        v1 = fan.generic_vector(rng)
        v2 = fan.generic_vector(rng, avoid=[v1])
        idx = volume_poly_index(fan, rng).form
        assert idx == volume_poly_lawrence(fan, v1).form
        assert idx == volume_poly_lawrence(fan, v2).form
    assert time.perf_counter() - start < 120


def star_triangle_witnesses(P):
    """One point just inside each tip of the star, next to a vertex."""
    pts = []
    for u in P.vertices().values():
        pts.append(tuple(x * F(9, 10) for x in u))
    return pts


def test_criterion_04_dh_star():
    P = MultiPolytope(star(), [1] * 5)
    assert P.dh((0, 0)).value == 2
    witnesses = star_triangle_witnesses(P)
    cells = {tuple((P.offset(u, i) > 0) for i in range(5)) for u in witnesses}
    assert len(witnesses) == 5 and len(cells) == 5
    for u in witnesses:
        assert P.dh(u).value == 1
        assert winding_number_2d(P, u) == 1
    assert P.dh((100, 100)).value == 0
    rng = random.Random(17)
    checked = 0
    while checked < 100:
        u = (F(rng.randint(-400, 400), 97), F(rng.randint(-400, 400), 89))
        if any(P.offset(u, i) == 0 for i in range(5)):
            continue
        assert P.dh(u).value == winding_number_2d(P, u)
        checked += 1


@pytest.mark.parametrize("name", ["sq", "cp2", "star"])
def test_criterion_05_monte_carlo(name):
    fan = FIXTURES[name]()
    P = MultiPolytope(fan, [1] * fan.m)
    exact = float(P.volume())
    ok = []
    for seed in (0, 1):  # rerun once on failure
        est, err = mc_volume(P, 100000, seed)
        ok.append(abs(est - exact) <= 3 * err)
        if ok[-1]:
            break
    assert any(ok)


def test_criterion_06_sphere_theorem():
    oct_ = octahedron()
    assert dm(oct_) == profile(oct_.complex).h_vector == sr_quotient_dims(oct_.complex, oct_.lam) == (1, 3, 3, 1)
    K2 = boundary_simplex_complex(2)
    rng = random.Random(6)
    for lam in [cp2().lam] + [random_lambda(K2, 2, rng) for _ in range(5)]:
        fan = fan_on_complex(K2, lam)
        assert dm(fan) == sr_quotient_dims(K2, lam) == profile(K2).h_vector == (1, 1, 1)
    ico = icosahedron_complex()
    assert profile(ico).f_vector == (12, 30, 20)
    for _ in range(20):
        lam = random_lambda(ico, 3, rng)
        fan = fan_on_complex(ico, lam)
        assert dm(fan) == sr_quotient_dims(ico, lam) == profile(ico).h_vector == (1, 9, 9, 1)


def test_criterion_07_manifold_theorem():
    tor = torus()
    prof = profile(tor.complex)
    A = dm(tor)
    sr = sr_quotient_dims(tor.complex, tor.lam)
    assert A == prof.h_double_prime == (1, 4, 4, 1)
    assert sr == prof.h_prime == (1, 4, 10, 1)
    betti = reduced_betti(tor.complex)
    defects = tuple(a - b for a, b in zip(sr, A))
    assert defects == (0, 0, 6, 0)
    assert defects[1:3] == tuple(comb(3, j) * betti[j - 1] for j in (1, 2))
    assert verify_structure(tor)["verified"]


def test_criterion_08_dehn_sommerville():
    fans = [f() for f in FIXTURES.values()] + list(random_suite())
    for fan in fans:
        V = volume_poly_index(fan).form
        if V.is_zero():
            continue
        d = build(V).dims
        assert d == d[::-1]
    A = build(volume_poly_index(square()).form)
    A.dims = (1, 2, 3)
    with pytest.raises(InternalAssertionError):
        A._assert_duality()


def test_criterion_09_minkowski():
    rng = random.Random(9)
    for name, make in FIXTURES.items():
        fan = make()
        c = [F(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(fan.m)]
        P = MultiPolytope(fan, c)
        assert all(x == 0 for x in minkowski_facet_check(P))
        K, chain, n = fan.complex, fan.underlying_chain(), fan.n
        for k in range(1, n + 1):
            for a in _coaugmented_cocycles(K, chain, k, exact=True):
                for S in combinations(range(n), k):
                    assert minkowski_cocycle_check(P, Chain(k - 1, a), SkewForm(n, k, {S: 1})) == 0
    tor = torus()
    P = MultiPolytope(tor, [F(rng.randint(1, 9)) for _ in range(7)])
    closed = _coaugmented_cocycles(tor.complex, tor.underlying_chain(), 2, exact=False)
    assert len(closed) > len(tor.complex.faces(0)) - 1  # more than the exact ones
    for a in closed:
        for S in combinations(range(3), 2):
            assert minkowski_cocycle_check(P, Chain(1, a), SkewForm(3, 2, {S: 1})) == 0


def ones(k, n):
    return tuple(1 if j < k else 0 for j in range(n + 1))


def general_octahedron(rng, S):
    K = octahedron().complex
    while True:
        lam = random_lambda(K, 3, rng)
        if all(det([lam[i] for i in T]) != 0 for T in combinations(S, 3)):
            return fan_on_complex(K, lam)


def one_n_flip(fan, I, rng):
    """(1,n)-flip at facet I with a random apex in general position."""
    while True:
        apex = tuple(rng.randint(-5, 5) for _ in range(fan.n))
        vecs = [fan.lam[i] for i in I] + [apex]
        if all(det(list(T)) != 0 for T in combinations(vecs, fan.n)):
            return flip(fan, I, 1, apex)


def test_criterion_10_flips_and_connected_sums():
    rng = random.Random(10)
    cases = 0
    for fan in (cp2(), square(), octahedron(), torus()):
        n = fan.n
        before = dm(fan)
        for I in rng.sample(fan.facets, 3):
            g = one_n_flip(fan, I, rng)
            after = dm(g)
            assert tuple(a - b for a, b in zip(after, before)) == tuple(
                x - y for x, y in zip(ones(n, n), ones(1, n)))
            back = flip(g, (g.m - 1,), n)
            assert back == fan
            assert tuple(a - b for a, b in zip(dm(back), after)) == tuple(
                x - y for x, y in zip(ones(1, n), ones(n, n)))
            cases += 2
    for S in [(0, 1, 2, 5), (0, 1, 5, 2), (0, 4, 2, 3), (3, 4, 5, 0)]:
        S = tuple(sorted(S))
        fan = general_octahedron(rng, S)
        g = flip(fan, S, 2)
        assert tuple(a - b for a, b in zip(dm(g), dm(fan))) == tuple(
            x - y for x, y in zip(ones(2, 3), ones(2, 3)))
        cases += 1
    simplex3 = fan_on_complex(boundary_simplex_complex(3), [(1, 0, 0), (0, 1, 0), (0, 0, 1), (-1, -1, -1)])
    for f1, f2, I in [(cp2(), cp2(), (0, 1)), (square(), cp2(), (0, 1)),
                      (octahedron(), octahedron(), (0, 1, 2)), (octahedron(), simplex3, (0, 1, 2))]:
        s = connected_sum(f1, f2, I)
        n = f1.n
        expected = tuple(a + b - (1 if j in (0, n) else 0) for j, (a, b) in enumerate(zip(dm(f1), dm(f2))))
        assert s.is_complete() and dm(s) == expected
        cases += 1
    assert cases == 4 * 3 * 2 + 4 + 4


def test_criterion_11_recognition_round_trip():
    for k, fan in enumerate(random_suite()):
        V = volume_poly_index(fan).form
        assert is_volume_polynomial(V)["verdict"]
        if V.is_zero():
            continue
        rec = reconstruct_detailed(V, k)
        assert volume_poly_index(rec.fan).form == V
        assert rec.fan.is_complete()
    c = xs(2)
    res = is_volume_polynomial(c[0] * c[1])
    assert res["verdict"] is False and res["ann_dim"] == 0 and not res["ann_dim_ok"]


def test_criterion_12_lambda_recovery():
    for fan in (cp2(), square()):
        V = volume_poly_index(fan).form
        assert volume_poly_index(recover_lambda(V)).form == V


def cli(*args):
    return subprocess.run([sys.executable, "-m", "volpoly", *args], capture_output=True, check=True).stdout


@pytest.mark.parametrize("args", [
    ("--seed", "5", "volume", "--fixture", "star", "--route", "both"),
    ("--seed", "5", "mcvol", "--fixture", "star", "--samples", "5000"),
    ("--seed", "5", "recognize", "--poly", "{poly}", "--reconstruct"),
    ("--seed", "5", "plot-dh", "--fixture", "star", "--c", "1,1,1,1,1"),
    ("--seed", "5", "experiment-rigidity", "--fixture", "oct", "--trials", "4"),
])
def test_criterion_13_determinism(args, tmp_path):
    poly = tmp_path / "p.json"
    poly.write_text(__import__("json").dumps(volume_poly_index(octahedron()).form.to_json()))
    args = [a.replace("{poly}", str(poly)) for a in args]
    first, second = cli(*args), cli(*args)
    assert first and first == second
    if "plot-dh" in args:
        assert first == emit_svg(MultiPolytope(star(), [1] * 5), v=star().generic_vector(5)).encode()
