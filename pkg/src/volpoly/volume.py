"""Volume polynomials of complete multi-fans.

Two independent routes compute the same polynomial:

* ``volume_poly_index`` integrates every supported monomial of degree n by
  evaluating the index-map sum at two generic vectors;
* ``volume_poly_lawrence`` sums one n-th power of a linear form per cone.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import factorial

from .errors import InternalAssertionError, PreconditionError, ValidationError
from .exactmath import (ONE, ZERO, DiffOp, HomogeneousForm, apply_diff_op, det,
                        exp_factorial, qvec)
from .multifan import MultiFan, as_rng
from .simplicial import classify


@dataclass
class VolumePolynomial:
    form: HomogeneousForm
    route: str = ""
    vectors: list = field(default_factory=list)

    def __call__(self, c):
        return self.form.evaluate(c)

    def __eq__(self, other):
        return as_form(self) == as_form(other)

    def to_json(self):
        return {"format": "multifan/1", "nvars": self.form.nvars, "degree": self.form.degree,
                "terms": self.form.to_json()}


def as_form(V) -> HomogeneousForm:
    if isinstance(V, VolumePolynomial):
        return V.form
    if isinstance(V, HomogeneousForm):
        return V
    raise ValidationError(f"not a polynomial: {V!r}")


def _require_complete(fan: MultiFan):
    if not fan.is_complete():
        raise PreconditionError("multi-fan is not complete")


def _compositions(total, parts):
    """Positive integer tuples of the given length summing to total."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def supported_monomials(fan: MultiFan):
    """Exponents of degree n whose support is a face of the support complex."""
    n, m = fan.n, fan.m
    K = fan.complex
    seen = []
    for size in range(1, n + 1):
        for face in K.faces(size - 1):
            for parts in _compositions(n, size):
                e = [0] * m
                for v, k in zip(face, parts):
                    e[v] = k
                seen.append(tuple(e))
    if n == 0 and fan.weights:
        seen.append((0,) * m)
    return sorted(set(seen), key=lambda e: tuple(-x for x in e))


def _index_sum(fan, exp, v, cache):
    supp = {i for i, e in enumerate(exp) if e}
    total = ZERO
    for I, w in fan.weights.items():
        if not supp <= set(I):
            continue
        alpha = cache.get(I)
        if alpha is None:
            alpha = cache[I] = fan.coords(I, v)
        term = w / fan.det(I)
        for pos, i in enumerate(I):
            if exp[i] != 1:
                term *= alpha[pos] ** (exp[i] - 1)
        total += term
    return total


def _two_points(fan, rng):
    rng = as_rng(rng)
    v1 = fan.generic_vector(rng)
    v2 = fan.generic_vector(rng, avoid=[v1])
    return v1, v2


def integrate_monomial(fan: MultiFan, exp, rng=None, points=None) -> Fraction:
    """Evaluation of x^a on the fundamental class, certified at two points."""
    exp = tuple(int(e) for e in exp)
    if len(exp) != fan.m or sum(exp) != fan.n or any(e < 0 for e in exp):
        raise ValidationError(f"exponent {exp} is not of degree {fan.n} in {fan.m} variables")
    _require_complete(fan)
    v1, v2 = points if points is not None else _two_points(fan, rng)
    a = _index_sum(fan, exp, v1, {})
    b = _index_sum(fan, exp, v2, {})
    if a != b:
        raise InternalAssertionError(f"index-map value of {exp} depends on the generic vector")
    return a


def volume_poly_index(fan: MultiFan, rng=None) -> VolumePolynomial:
    _require_complete(fan)
    if fan.is_zero():
        return VolumePolynomial(HomogeneousForm(fan.m, fan.n), "index", [])
    v1, v2 = _two_points(fan, rng)
    c1, c2 = {}, {}
    terms = {}
    for e in supported_monomials(fan):
        a = _index_sum(fan, e, v1, c1)
        if a != _index_sum(fan, e, v2, c2):
            raise InternalAssertionError(f"index-map value of {e} depends on the generic vector")
        if a:
            terms[e] = a / exp_factorial(e)
    return VolumePolynomial(HomogeneousForm(fan.m, fan.n, terms), "index", [v1, v2])


def _power_terms(n, idx, alpha, m, scale, terms):
    """Add scale * (sum_j alpha_j c_{idx_j})^n into terms."""
    k = len(idx)

    def rec(pos, left, exp, coef):
        if pos == k - 1:
            e = list(exp) + [left]
            c = coef * alpha[pos] ** left / factorial(left)
            full = [0] * m
            for i, x in zip(idx, e):
                full[i] = x
            full = tuple(full)
            terms[full] = terms.get(full, ZERO) + c
            return
        for a in range(left, -1, -1):
            rec(pos + 1, left - a, exp + [a], coef * alpha[pos] ** a / factorial(a))

    if k == 0:
        full = (0,) * m
        terms[full] = terms.get(full, ZERO) + scale
        return
    rec(0, n, [], scale * factorial(n))


def lawrence_contributions(fan: MultiFan, v, facets=None) -> dict:
    """Per-cone terms of the Lawrence sum for unit weight (w = 1 relative to
    increasing order); used for linear solves over the weights."""
    v = qvec(v)
    n, m = fan.n, fan.m
    out = {}
    for I in (fan.facets if facets is None else facets):
        alpha = fan.coords(I, v)
        prod = ONE
        for a in alpha:
            prod *= a
        if prod == 0:
            raise PreconditionError(f"vector is not generic for cone {[i + 1 for i in I]}")
        terms = {}
        _power_terms(n, I, alpha, m, ONE / (fan.det(I) * prod * factorial(n)), terms)
        out[I] = terms
    return out


def volume_poly_lawrence(fan: MultiFan, v=None, rng=None) -> VolumePolynomial:
    _require_complete(fan)
    if v is None:
        v = fan.generic_vector(rng)
    v = qvec(v)
    if len(v) != fan.n:
        raise ValidationError("generic vector has the wrong length")
    bad = fan.degenerate_cone(v)
    if bad is not None:
        raise PreconditionError(f"vector is not generic for cone {[i + 1 for i in bad]}")
    terms = {}
    for I, contrib in lawrence_contributions(fan, v).items():
        w = fan.weights[I]
        for e, c in contrib.items():
            terms[e] = terms.get(e, ZERO) + w * c
    return VolumePolynomial(HomogeneousForm(fan.m, fan.n, terms), "lawrence", [v])


def volume_poly(fan: MultiFan, route="index", rng=None) -> VolumePolynomial:
    if route == "index":
        return volume_poly_index(fan, rng)
    if route == "lawrence":
        return volume_poly_lawrence(fan, rng=rng)
    if route == "both":
        rng = as_rng(rng)
        a = volume_poly_index(fan, rng)
        b = volume_poly_lawrence(fan, rng=rng)
        if a.form != b.form:
            raise InternalAssertionError("index and Lawrence routes disagree")
        return VolumePolynomial(a.form, "both", a.vectors + b.vectors)
    raise ValidationError(f"unknown route {route!r}")


# ------------------------------------------------------------ derivatives

def derivative(V, J) -> HomogeneousForm:
    """d_J V for a set J of variable indices."""
    F = as_form(V)
    return apply_diff_op(DiffOp.partial(F.nvars, sorted(set(J))), F)


def normalized_face_volume(fan: MultiFan, c, J, V=None) -> Fraction:
    """Face volume divided by covolume of J, read off as (d_J V)(c)."""
    V = volume_poly_index(fan) if V is None else V
    return derivative(V, J).evaluate(c)


def chern_operator(c) -> DiffOp:
    c = qvec(c)
    return DiffOp(len(c), 1, {tuple(1 if k == i else 0 for k in range(len(c))): x
                              for i, x in enumerate(c)})


def chern_power(V, c, k: int) -> HomogeneousForm:
    F = as_form(V)
    return apply_diff_op(chern_operator(c) ** k, F)


def theta_operators(fan: MultiFan) -> list:
    """The linear relations sum_i lambda_{i,j} d_i, one per coordinate j."""
    return [DiffOp(fan.m, 1, {tuple(1 if k == i else 0 for k in range(fan.m)): fan.lam[i][j]
                              for i in range(fan.m)}) for j in range(fan.n)]


def elementary_constant(fan: MultiFan, V=None) -> tuple:
    """For an elementary fan, V = const * (sum alpha_i c_i)^n where alpha is
    the linear relation among the vectors; returns (alpha, const)."""
    from .exactmath import kernel_basis
    if len(fan.weights) != fan.n + 1:
        raise PreconditionError("not an elementary multi-fan")
    verts = sorted({v for I in fan.weights for v in I})
    rel = kernel_basis([[fan.lam[i][j] for i in verts] for j in range(fan.n)], len(verts))
    if len(rel) != 1:
        raise PreconditionError("vectors are not in general position")
    alpha = [ZERO] * fan.m
    for i, a in zip(verts, rel[0]):
        alpha[i] = a
    F = as_form(volume_poly_index(fan) if V is None else V)
    J = fan.facets[0]
    dJ = derivative(F, J).evaluate([0] * fan.m)
    L = HomogeneousForm.linear(alpha) ** fan.n
    ref = derivative(L, J).evaluate([0] * fan.m)
    const = dJ / ref
    if F != L * const:
        raise InternalAssertionError("volume polynomial of an elementary fan is not a power")
    return tuple(alpha), const


# ------------------------------------------------------------ recovering lambda

def intersection_number(F: HomogeneousForm, exp) -> Fraction:
    return F.coefficient(exp) * exp_factorial(exp)


def support_from_polynomial(F: HomogeneousForm, n: int) -> list:
    """n-subsets J with d_J V nonzero (the squarefree coefficients)."""
    out = []
    for J in combinations(range(F.nvars), n):
        e = tuple(1 if i in J else 0 for i in range(F.nvars))
        if F.coefficient(e):
            out.append(J)
    return out


def recover_lambda(V, seed_facet=None, seed_basis=None) -> MultiFan:
    """Rebuild characteristic vectors (and weights) from a volume polynomial.

    ``seed_facet`` (sorted indices) receives ``seed_basis``; by default the
    first facet gets the standard basis.
    """
    F = as_form(V)
    n, m = F.degree, F.nvars
    if F.is_zero():
        raise PreconditionError("the zero polynomial determines no fan")
    facets = support_from_polynomial(F, n)
    if not facets:
        raise PreconditionError("polynomial has no squarefree top terms")
    from .simplicial import SimplicialComplex
    K = SimplicialComplex(m, facets)
    info = classify(K)
    if not info.is_pseudomanifold or not info.is_orientable:
        raise PreconditionError("support is not a strongly connected orientable pseudomanifold")
    I0 = tuple(sorted(seed_facet)) if seed_facet is not None else facets[0]
    if I0 not in facets:
        raise PreconditionError(f"seed {[i + 1 for i in I0]} is not a facet of the support")
    if seed_basis is None:
        seed_basis = [tuple(ONE if a == b else ZERO for b in range(n)) for a in range(n)]
    seed_basis = [qvec(b) for b in seed_basis]
    if len(seed_basis) != n or det(seed_basis) == 0:
        raise PreconditionError("seed basis must be n independent vectors")
    lam = {i: b for i, b in zip(I0, seed_basis)}
    ridges = {}
    for f in facets:
        for i in f:
            ridges.setdefault(tuple(v for v in f if v != i), []).append(f)

    def integral(J, extra):
        e = [0] * m
        for j in J:
            e[j] += 1
        e[extra] += 1
        return intersection_number(F, e)

    queue = [I0]
    done = {I0}
    while queue:
        I = queue.pop(0)
        for i1 in I:
            J = tuple(v for v in I if v != i1)
            for other in ridges[J]:
                if other == I:
                    continue
                k = next(v for v in other if v not in J)
                if k not in lam:
                    a = integral(J, k)
                    if a == 0:
                        raise PreconditionError("vanishing intersection number on an adjacent facet")
                    acc = [ZERO] * n
                    for j in J + (i1,):
                        c = integral(J, j)
                        acc = [x + c * y for x, y in zip(acc, lam[j])]
                    lam[k] = tuple(-x / a for x in acc)
                if other not in done:
                    done.add(other)
                    queue.append(other)
    vectors = [lam.get(i, (ZERO,) * n) for i in range(m)]
    shell = MultiFan(vectors, {}, n=n, check=False)
    weights = {}
    for J in facets:
        d = shell.det(J)
        if d == 0:
            raise PreconditionError(f"recovered vectors are dependent on {[i + 1 for i in J]}")
        weights[J] = F.coefficient(tuple(1 if i in J else 0 for i in range(m))) * d
    fan = MultiFan(vectors, weights, n=n)
    if not fan.is_complete() or volume_poly_index(fan).form != F:
        raise PreconditionError("polynomial is not the volume polynomial of the recovered fan")
    return fan
