"""Multi-polytopes over complete multi-fans: vertices, faces, the
Duistermaat-Heckman function and Minkowski-type relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count

from .errors import PreconditionError, ValidationError
from .exactmath import (ZERO, DiffOp, dot, gram, pair_skew, q, qstr, qvec, sign, solve,
                        wedge, SkewForm, matvec)
from .multifan import MultiFan
from .simplicial import Chain, classify, coboundary
from .volume import as_form, derivative, volume_poly_index


class MultiPolytope:
    def __init__(self, fan: MultiFan, c):
        c = qvec(c)
        if len(c) != fan.m:
            raise ValidationError(f"expected {fan.m} support parameters, got {len(c)}")
        self.fan = fan
        self.c = c
        self._V = None

    @property
    def n(self):
        return self.fan.n

    def volume_polynomial(self):
        if self._V is None:
            self._V = volume_poly_index(self.fan).form
        return self._V

    def volume(self) -> Fraction:
        return self.volume_polynomial().evaluate(self.c)

    def vertex(self, I) -> tuple:
        I = tuple(sorted(I))
        if I not in self.fan.weights:
            raise PreconditionError(f"{[i + 1 for i in I]} is not a supported facet")
        x, _ = solve([self.fan.lam[i] for i in I], [self.c[i] for i in I])
        return x

    def vertices(self) -> dict:
        return {I: self.vertex(I) for I in self.fan.facets}

    def hyperplane_indices(self) -> tuple:
        return tuple(sorted({v for I in self.fan.weights for v in I}))

    def offset(self, u, i) -> Fraction:
        return dot(u, self.fan.lam[i]) - self.c[i]

    def dh(self, u, v=None, rng=None) -> "DHValue":
        return dh_eval(self, u, v, rng)


@dataclass
class DHValue:
    point: tuple
    value: Fraction
    certificate: list = field(default_factory=list)

    def to_json(self):
        return {"point": [qstr(x) for x in self.point], "value": qstr(self.value),
                "certificate": [{"simplex": [i + 1 for i in I], "sign": s, "member": b}
                                for I, s, b in self.certificate]}


def _check_off_walls(P, u):
    for i in P.hyperplane_indices():
        if P.offset(u, i) == 0:
            raise PreconditionError(f"point lies on hyperplane {i + 1}")


def dh_eval(P: MultiPolytope, u, v=None, rng=None) -> DHValue:
    fan = P.fan
    u = qvec(u)
    if len(u) != fan.n:
        raise ValidationError("point has the wrong dimension")
    _check_off_walls(P, u)
    if v is None:
        v = fan.generic_vector(rng)
    v = qvec(v)
    bad = fan.degenerate_cone(v)
    if bad is not None:
        raise PreconditionError(f"vector is not generic for cone {[i + 1 for i in bad]}")
    total = ZERO
    cert = []
    for I in fan.facets:
        alpha = fan.coords(I, v)
        s = -1 if sum(1 for a in alpha if a > 0) % 2 else 1
        member = all(sign(P.offset(u, i)) == sign(a) for i, a in zip(I, alpha))
        if member:
            total += s * fan.geometric_weight(I)
        cert.append((I, s, member))
    return DHValue(u, total, cert)


def winding_number_2d(P: MultiPolytope, u) -> int:
    """Winding number of the boundary path around u, by signed crossings of
    a ray. Each supported edge {i, j} contributes the path p_i -> H_ij -> p_j
    with its weight, p_i being the foot of the normal on the line H_i; the
    p_i cancel because the weights form a cycle."""
    fan = P.fan
    if fan.n != 2:
        raise PreconditionError("winding oracle needs n = 2")
    u = qvec(u)
    _check_off_walls(P, u)
    foot = {}
    for i in P.hyperplane_indices():
        lam = fan.lam[i]
        foot[i] = tuple(P.c[i] * x / dot(lam, lam) for x in lam)
    pieces = []
    for I, w in fan.weights.items():
        i, j = I
        h = P.vertex(I)
        pieces.append((w, [foot[i], h, foot[j]]))
    points = [p for _, path in pieces for p in path]

    def cross(d, x):
        return d[0] * (x[1] - u[1]) - d[1] * (x[0] - u[0])

    for k in count(1):
        d = (Fraction(1), Fraction(k, 7))
        if all(cross(d, p) != 0 for p in points):
            break
    total = ZERO
    for w, path in pieces:
        for A, B in zip(path, path[1:]):
            sa, sb = cross(d, A), cross(d, B)
            if (sa > 0) == (sb > 0):
                continue
            s = sa / (sa - sb)
            X = tuple(a + s * (b - a) for a, b in zip(A, B))
            if dot((X[0] - u[0], X[1] - u[1]), d) > 0:
                total += w if sa < 0 else -w
    if total.denominator != 1:
        raise PreconditionError("non-integral winding number; weights are not integral")
    return int(total)


# ------------------------------------------------------------ Monte Carlo

def bounding_box(P: MultiPolytope):
    verts = list(P.vertices().values())
    if not verts:
        raise PreconditionError("multi-polytope has no vertices")
    lo = tuple(min(v[k] for v in verts) for k in range(P.n))
    hi = tuple(max(v[k] for v in verts) for k in range(P.n))
    return lo, hi


def mc_volume(P: MultiPolytope, samples: int = 100000, seed: int = 0, v=None):
    """(estimate, stderr) of the integral of the DH function by uniform
    sampling in the vertex bounding box; floating point on purpose."""
    import numpy as np

    fan = P.fan
    if fan.is_zero():
        return 0.0, 0.0
    lo, hi = bounding_box(P)
    box = 1.0
    for a, b in zip(lo, hi):
        box *= float(b - a)
    if box == 0.0:
        return 0.0, 0.0
    if v is None:
        v = fan.generic_vector(seed)
    rng = np.random.default_rng(seed)
    pts = rng.uniform([float(x) for x in lo], [float(x) for x in hi], size=(samples, P.n))
    vals = np.zeros(samples)
    for I in fan.facets:
        alpha = fan.coords(I, v)
        s = -1 if sum(1 for a in alpha if a > 0) % 2 else 1
        L = np.array([[float(x) for x in fan.lam[i]] for i in I])
        cI = np.array([float(P.c[i]) for i in I])
        want = np.array([a > 0 for a in alpha])
        T = pts @ L.T - cI
        member = np.all((T > 0) == want, axis=1)
        vals += s * float(fan.geometric_weight(I)) * member
    vals *= box
    est = float(vals.mean())
    err = float(vals.std(ddof=1) / np.sqrt(samples)) if samples > 1 else float("inf")
    return est, err


# ------------------------------------------------------------ faces

@dataclass
class Face:
    """A face F_J written in the frame coordinates of the projected fan."""

    polytope: MultiPolytope
    projection: object
    simplex: tuple

    def coordinates(self, u) -> tuple:
        return matvec(self.projection.frame, qvec(u)) if self.projection.frame else ()

    def normalized_volume(self) -> Fraction:
        """Face volume divided by the covolume of the simplex."""
        P = self.polytope
        if P.fan.n == 0:
            return sum(P.fan.geometric_weight(I) for I in P.fan.weights) / self.projection.scale
        return P.volume() / self.projection.scale

    def dh(self, u, v=None, rng=None):
        return self.polytope.dh(self.coordinates(u), v, rng)


def projection_constants(fan: MultiFan, J, i) -> tuple:
    """Coefficients p_j with proj lambda(i) = sum_j p_j lambda(j), j in J."""
    base = [fan.lam[j] for j in J]
    coef, _ = solve(gram(base), [dot(b, fan.lam[i]) for b in base])
    return coef


def face(P: MultiPolytope, J) -> Face:
    J = tuple(sorted(J))
    proj = P.fan.project(J)
    link_vertices = {v for I in proj.fan.weights for v in I}
    c = []
    for i in range(P.fan.m):
        if not J:
            c.append(P.c[i])
        elif i in link_vertices:
            p = projection_constants(P.fan, J, i)
            c.append(P.c[i] - sum((a * P.c[j] for a, j in zip(p, J)), ZERO))
        else:
            c.append(ZERO)
    return Face(MultiPolytope(proj.fan, c), proj, J)


face_support_params = face


def same_hyperplane(P: MultiPolytope, i, j) -> bool:
    li, lj = P.fan.lam[i], P.fan.lam[j]
    k = next(t for t, x in enumerate(li) if x != 0)
    r = lj[k] / li[k]
    return r != 0 and all(b == r * a for a, b in zip(li, lj)) and P.c[j] == r * P.c[i]


def wall_crossing(P: MultiPolytope, i, mu, direction, eps=Fraction(1, 16)):
    """Both sides of the jump of the DH function across the wall H_i at mu.

    Returns (lhs, rhs, (u_alpha, u_beta)). The step is halved until the
    segment meets no other wall.
    """
    mu, d = qvec(mu), qvec(direction)
    if P.offset(mu, i) != 0:
        raise PreconditionError("mu is not on the wall")
    if dot(d, P.fan.lam[i]) == 0:
        raise PreconditionError("direction is parallel to the wall")
    walls = [j for j in P.hyperplane_indices() if same_hyperplane(P, i, j)]
    others = [j for j in P.hyperplane_indices() if j not in walls]
    if any(P.offset(mu, j) == 0 for j in others):
        raise PreconditionError("mu lies on another wall")
    eps = q(eps)
    while True:
        ua = tuple(x - eps * y for x, y in zip(mu, d))
        ub = tuple(x + eps * y for x, y in zip(mu, d))
        if all(sign(P.offset(ua, j)) == sign(P.offset(ub, j)) == sign(P.offset(mu, j)) for j in others):
            break
        eps /= 2
    lhs = P.dh(ua).value - P.dh(ub).value
    rhs = ZERO
    for j in walls:
        s = sign(dot(tuple(b - a for a, b in zip(ua, ub)), P.fan.lam[j]))
        rhs += s * face(P, (j,)).dh(mu).value
    return lhs, rhs, (ua, ub)


# ------------------------------------------------------------ Minkowski relations

def minkowski_facet_check(P: MultiPolytope, V=None) -> tuple:
    F = P.volume_polynomial() if V is None else as_form(V)
    out = [ZERO] * P.n
    for i in range(P.fan.m):
        a = derivative(F, (i,)).evaluate(P.c)
        if a:
            out = [x + a * y for x, y in zip(out, P.fan.lam[i])]
    return tuple(out)


def minkowski_operator(fan: MultiFan, a: Chain, mu: SkewForm) -> DiffOp:
    """sum over |I| = k of a(I) <lambda(I), mu> d_I."""
    k = a.degree + 1
    if mu.k != k or mu.n != fan.n:
        raise ValidationError(f"mu must be a skew form of rank {k} in dimension {fan.n}")
    terms = {}
    for I, x in a.terms.items():
        s = pair_skew(wedge([fan.lam[i] for i in I], fan.n), mu)
        if s:
            e = tuple(1 if t in I else 0 for t in range(fan.m))
            terms[e] = terms.get(e, ZERO) + x * s
    return DiffOp(fan.m, k, terms)


def minkowski_cocycle_check(P: MultiPolytope, a: Chain, mu: SkewForm, V=None) -> Fraction:
    fan = P.fan
    K = fan.complex
    info = classify(K)
    if not (info.is_homology_manifold and info.is_orientable):
        raise PreconditionError("support is not an orientable homology manifold")
    if a.degree < 0 or a.degree > fan.n - 1:
        raise PreconditionError(f"cochain degree {a.degree} out of range")
    restricted = Chain(a.degree, {s: x for s, x in a.terms.items() if s in K})
    if not coboundary(restricted, K, fan.underlying_chain()).is_zero():
        raise PreconditionError("cochain is not a coaugmented cocycle")
    F = P.volume_polynomial() if V is None else as_form(V)
    D = minkowski_operator(fan, restricted, mu)
    return D(F).evaluate(P.c)
