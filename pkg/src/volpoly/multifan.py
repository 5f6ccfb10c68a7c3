"""Simplicial multi-fans: characteristic vectors plus a weight on
n-subsets of vertex slots.

Weights are stored relative to increasing vertex order. The *geometric*
weight of a cone (the one that counts it in degrees and Duistermaat-Heckman
sums) is ``w(I) * sign(det lambda_I)``, with the rows of ``lambda_I`` taken
in increasing order.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .errors import PreconditionError, ValidationError
from .exactmath import (ONE, ZERO, det, dot, inverse, kernel_basis, matvec, q, qstr,
                        qvec, sign, solve, transpose, gram)
from .simplicial import Chain, SimplicialComplex, boundary

GENERIC_RETRIES = 32


def as_rng(rng) -> random.Random:
    if isinstance(rng, random.Random):
        return rng
    return random.Random(0 if rng is None else rng)


class MultiFan:
    def __init__(self, lam, weights, n=None, check=True):
        self.lam = tuple(qvec(v) for v in lam)
        self.m = len(self.lam)
        if n is None:
            if not self.lam:
                raise ValidationError("cannot infer n from an empty lambda")
            n = len(self.lam[0])
        self.n = int(n)
        if any(len(v) != self.n for v in self.lam):
            raise ValidationError("characteristic vectors of unequal length")
        w = {}
        for key, val in dict(weights).items():
            s = tuple(int(v) for v in key)
            if len(s) != self.n or list(s) != sorted(set(s)) or (s and (s[0] < 0 or s[-1] >= self.m)):
                raise ValidationError(f"weight key {s} is not a sorted {self.n}-subset of 0..{self.m - 1}")
            val = q(val)
            if val:
                w[s] = val
        self.weights = w
        self._det = {}
        self._coord_maps = {}
        if check:
            bad = self.star_violations()
            if bad:
                raise ValidationError("star-condition fails on " + ", ".join(str([v + 1 for v in s]) for s in bad))

    @classmethod
    def from_oriented(cls, lam, weights, n=None):
        """Build from weights given relative to the det-positive order of each
        cone (the geometric weights)."""
        fan = cls(lam, {}, n=n, check=False)
        w = {}
        for key, val in dict(weights).items():
            s = tuple(sorted(key))
            d = fan.det(s)
            if d == 0:
                raise ValidationError(f"star-condition fails on {[v + 1 for v in s]}")
            w[s] = q(val) * sign(d)
        return cls(fan.lam, w, n=fan.n)

    # -------------------------------------------------------- basic data
    def det(self, I) -> Fraction:
        I = tuple(I)
        d = self._det.get(I)
        if d is None:
            d = det([self.lam[i] for i in I]) if I else ONE
            self._det[I] = d
        return d

    def geometric_weight(self, I) -> Fraction:
        I = tuple(sorted(I))
        w = self.weights.get(I, ZERO)
        return w * sign(self.det(I)) if w else ZERO

    @property
    def facets(self) -> tuple:
        return tuple(sorted(self.weights))

    @property
    def complex(self) -> SimplicialComplex:
        return SimplicialComplex(self.m, self.facets)

    def underlying_chain(self) -> Chain:
        return Chain(self.n - 1, dict(self.weights))

    def is_zero(self) -> bool:
        return not self.weights

    def star_violations(self) -> list:
        return [I for I in sorted(self.weights) if self.det(I) == 0]

    def ghost_vertices(self) -> tuple:
        used = {v for I in self.weights for v in I}
        return tuple(i for i in range(self.m) if i not in used)

    def validate(self) -> dict:
        bad = self.star_violations()
        return {"valid": not bad,
                "star_violations": [[v + 1 for v in s] for s in bad],
                "ghost_vertices": [v + 1 for v in self.ghost_vertices()],
                "zero": self.is_zero(),
                "complete": self.is_complete() if not bad else None}

    def is_complete(self) -> bool:
        if self.n == 0:
            return True
        return boundary(self.underlying_chain()).is_zero()

    def same_lambda(self, other) -> bool:
        return (self.n, self.m, self.lam) == (other.n, other.m, other.lam)

    def __eq__(self, other):
        return isinstance(other, MultiFan) and self.same_lambda(other) and self.weights == other.weights

    def __hash__(self):
        return hash((self.n, self.lam, frozenset(self.weights.items())))

    def __repr__(self):
        return f"MultiFan(n={self.n}, m={self.m}, facets={len(self.weights)})"

    # -------------------------------------------------------- coordinates
    def coords(self, I, v) -> tuple:
        """Coordinates of v in the basis lambda_I (increasing order)."""
        I = tuple(I)
        M = self._coord_maps.get(I)
        if M is None:
            if self.det(I) == 0:
                raise PreconditionError(f"lambda is dependent on {[i + 1 for i in I]}")
            M = inverse(transpose([self.lam[i] for i in I])) if I else []
            self._coord_maps[I] = M
        return matvec(M, v)

    def degenerate_cone(self, v, facets=None):
        """First facet in whose basis v has a zero coordinate, or None."""
        for I in (self.facets if facets is None else facets):
            if any(a == 0 for a in self.coords(I, v)):
                return I
        return None

    def is_generic(self, v, facets=None) -> bool:
        return self.degenerate_cone(qvec(v), facets) is None

    def generic_vector(self, rng=None, avoid=(), facets=None) -> tuple:
        return sample_generic_vector(self, rng, avoid=avoid, facets=facets)

    def degree_at(self, v) -> Fraction:
        v = qvec(v)
        bad = self.degenerate_cone(v)
        if bad is not None:
            raise PreconditionError(f"vector {list(map(qstr, v))} is not generic for cone {[i + 1 for i in bad]}")
        total = ZERO
        for I in self.facets:
            if all(a > 0 for a in self.coords(I, v)):
                total += self.geometric_weight(I)
        return total

    # -------------------------------------------------------- projection
    def project(self, I) -> "ProjectedMultiFan":
        I = tuple(sorted(I))
        if I and I not in self.complex:
            raise PreconditionError(f"{[i + 1 for i in I]} is not a face of the support")
        identity = [[ONE if a == b else ZERO for b in range(self.n)] for a in range(self.n)]
        geo = {J: self.geometric_weight(J) for J in self.weights}
        return _project(self, (), identity, [], self.lam, geo, I)

    # -------------------------------------------------------- serialisation
    def to_json(self):
        return {"format": "multifan/1", "n": self.n, "m": self.m,
                "lambda": [[qstr(x) for x in v] for v in self.lam],
                "weights": [{"simplex": [v + 1 for v in I], "w": qstr(w)}
                            for I, w in sorted(self.weights.items())]}

    @classmethod
    def from_json(cls, data, check=True):
        if not isinstance(data, dict):
            raise ValidationError("multi-fan JSON must be an object")
        fmt = data.get("format", "multifan/1")
        if fmt != "multifan/1":
            raise ValidationError(f"unsupported format {fmt!r}")
        try:
            n, m = int(data["n"]), int(data["m"])
            lam = [qvec(v) for v in data["lambda"]]
            weights = {}
            for t in data["weights"]:
                s = tuple(int(v) - 1 for v in t["simplex"])
                if list(s) != sorted(set(s)):
                    raise ValidationError(f"simplex {t['simplex']} is not sorted")
                weights[s] = weights.get(s, ZERO) + q(t["w"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad multi-fan JSON: {exc}") from exc
        if len(lam) != m:
            raise ValidationError(f"m={m} but {len(lam)} characteristic vectors")
        return cls(lam, weights, n=n, check=check)


def sample_generic_vector(fan: MultiFan, rng=None, avoid=(), facets=None) -> tuple:
    """Integer vector with no zero coordinate in any supported basis, and not
    parallel to any vector in ``avoid``."""
    rng = as_rng(rng)
    n, m = fan.n, fan.m
    bound = 16 * max(m, 1) * max(n, 1)
    avoid = [qvec(a) for a in avoid]
    for _ in range(GENERIC_RETRIES + 1):
        v = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(n))
        if n and all(x == 0 for x in v):
            bound *= 2
            continue
        if any(_parallel(v, a) for a in avoid):
            bound *= 2
            continue
        if fan.degenerate_cone(v, facets) is None:
            return v
        bound *= 2
    raise PreconditionError("could not sample a generic vector")


def _parallel(u, v) -> bool:
    if len(u) < 2:
        return False
    return all(u[i] * v[j] == u[j] * v[i] for i in range(len(u)) for j in range(i + 1, len(u)))


# ------------------------------------------------------------ projections

class ProjectedMultiFan:
    """Projection of a multi-fan along a face I of its support.

    ``vectors`` are the orthogonal projections lambda_I(j) in the ambient
    space (zero off the link), ``frame`` is a rational basis of the orthogonal
    complement of span(lambda(I)) and ``fan`` is the induced multi-fan written
    in frame coordinates. Volumes measured in frame coordinates differ from
    Euclidean ones by a factor; ``scale = |det[frame; span rows]|`` turns the
    volume polynomial of ``fan`` into face volume divided by covolume of I.
    """

    def __init__(self, parent, simplex, frame, span_rows, vectors, fan, scale):
        self.parent = parent
        self.simplex = simplex
        self.frame = frame
        self.span_rows = span_rows
        self.vectors = vectors
        self.fan = fan
        self.scale = scale

    @property
    def link(self) -> SimplicialComplex:
        return self.fan.complex

    def project(self, I2) -> "ProjectedMultiFan":
        """Project further along a face of the link, using only projected data."""
        I2 = tuple(sorted(I2))
        if I2 and I2 not in self.fan.complex:
            raise PreconditionError(f"{[i + 1 for i in I2]} is not a face of the link")
        geo = {J: self.fan.geometric_weight(J) for J in self.fan.weights}
        return _project(self.parent, self.simplex, self.frame, self.span_rows, self.vectors, geo, I2)

    def __repr__(self):
        return f"ProjectedMultiFan(simplex={[i + 1 for i in self.simplex]}, n={self.fan.n})"


def _project(parent, taken, frame, span_rows, vectors, geo, I):
    """Project ``vectors`` (living in span(frame)) off span{vectors[i] : i in I}.

    ``geo`` holds geometric weights of the current fan keyed by its facets.
    """
    n_amb = len(frame[0]) if frame else parent.n
    if I and any(all(x == 0 for x in vectors[i]) for i in I):
        raise PreconditionError("projection along a ghost vertex")
    base = [vectors[i] for i in I]
    link_facets = {}
    for J, w in geo.items():
        if set(I) <= set(J):
            rest = tuple(v for v in J if v not in I)
            link_facets[rest] = w
    link_vertices = sorted({v for J in link_facets for v in J})
    # orthogonal projection off span(base), via a Gram solve
    G = gram(base)
    new_vectors = []
    for j, vec in enumerate(vectors):
        if I and j not in link_vertices:
            new_vectors.append((ZERO,) * n_amb)
            continue
        if base:
            coef, _ = solve(G, [dot(b, vec) for b in base])
            vec = tuple(x - sum((c * b[k] for c, b in zip(coef, base)), ZERO)
                        for k, x in enumerate(vec))
        new_vectors.append(tuple(vec))
    # frame of the smaller subspace: y with (frame^T y) orthogonal to base
    if base:
        ys = kernel_basis([[dot(f, b) for f in frame] for b in base], len(frame))
        new_frame = [tuple(sum((y[a] * frame[a][k] for a in range(len(frame))), ZERO)
                           for k in range(n_amb)) for y in ys]
    else:
        new_frame = [tuple(f) for f in frame]
    new_span = list(span_rows) + base
    d = len(new_frame)
    # frame coordinates z with frame^T z = projected vector
    if d:
        Ginv = inverse(gram(new_frame))
        lam = [matvec(Ginv, [dot(f, v) for f in new_frame]) for v in new_vectors]
    else:
        lam = [() for _ in new_vectors]
    fan = MultiFan(lam, {}, n=d, check=False)
    weights = {}
    for J, w in link_facets.items():
        dj = fan.det(J)
        if dj == 0:
            raise ValidationError(f"projected star-condition fails on {[v + 1 for v in J]}")
        weights[J] = w * sign(dj)
    fan = MultiFan(lam, weights, n=d)
    scale = abs(det(list(new_frame) + new_span)) if (new_frame or new_span) else ONE
    simplex = tuple(sorted(tuple(taken) + tuple(I)))
    return ProjectedMultiFan(parent, simplex, new_frame, new_span, new_vectors, fan, scale)


# ------------------------------------------------------------ constructions

def elementary(vectors) -> MultiFan:
    """Multi-fan on the boundary of an n-simplex for n+1 vectors in general
    position, signed so that the first facet has weight +1."""
    vectors = [qvec(v) for v in vectors]
    if not vectors:
        raise ValidationError("no vectors")
    n = len(vectors[0])
    if len(vectors) != n + 1:
        raise ValidationError(f"an elementary fan in dimension {n} needs {n + 1} vectors")
    fan = MultiFan(vectors, {}, n=n, check=False)
    for I in combinations(range(n + 1), n):
        if fan.det(I) == 0:
            raise PreconditionError(f"vectors not in general position: {[i + 1 for i in I]} dependent")
    return MultiFan(vectors, {tuple(j for j in range(n + 1) if j != i): (-1) ** (i + n)
                              for i in range(n + 1)}, n=n)


def linear_combine(terms) -> MultiFan:
    terms = [(q(a), f) for a, f in terms]
    if not terms:
        raise ValidationError("empty combination")
    first = terms[0][1]
    w = {}
    for a, f in terms:
        if not f.same_lambda(first):
            raise ValidationError("linear combination of multi-fans with different lambda")
        for I, x in f.weights.items():
            w[I] = w.get(I, ZERO) + a * x
    return MultiFan(first.lam, w, n=first.n)


def relabel(fan: MultiFan, mapping, m_new: int, lam_new=None) -> MultiFan:
    """Move vertex i to slot mapping[i]; weights follow the geometric cones."""
    lam = list(lam_new) if lam_new is not None else [(ZERO,) * fan.n] * m_new
    if lam_new is None:
        for i, j in mapping.items():
            lam[j] = fan.lam[i]
    tmp = MultiFan(lam, {}, n=fan.n, check=False)
    w = {}
    for I, x in fan.weights.items():
        J = tuple(sorted(mapping[i] for i in I))
        w[J] = w.get(J, ZERO) + fan.geometric_weight(I) * sign(tmp.det(J))
    return MultiFan(lam, w, n=fan.n)


def connected_sum(fan1: MultiFan, fan2: MultiFan, I, I2=None) -> MultiFan:
    """Cone-wise sum after gluing the vertices ``I2`` of fan2 onto ``I`` of
    fan1 (I2 defaults to I). Remaining vertices of fan2 get new slots."""
    I = tuple(I)
    I2 = tuple(I) if I2 is None else tuple(I2)
    if fan1.n != fan2.n or len(I) != fan1.n or len(I2) != fan1.n:
        raise ValidationError("connected sum needs an n-subset in two n-dimensional fans")
    for a, b in zip(I, I2):
        if fan1.lam[a] != fan2.lam[b]:
            raise PreconditionError(f"lambda differs at glued vertex {a + 1} / {b + 1}")
    if not fan1.weights.get(tuple(sorted(I))) or not fan2.weights.get(tuple(sorted(I2))):
        raise PreconditionError("glued simplex must have nonzero weight in both fans")
    mapping = dict(zip(I2, I))
    extra = [j for j in range(fan2.m) if j not in mapping]
    for k, j in enumerate(extra):
        mapping[j] = fan1.m + k
    m_new = fan1.m + len(extra)
    lam = list(fan1.lam) + [fan2.lam[j] for j in extra]
    a = MultiFan(lam, {I_: w for I_, w in fan1.weights.items()}, n=fan1.n)
    b = relabel(fan2, mapping, m_new, lam_new=lam)
    return linear_combine([(1, a), (1, b)])


def _embedded_elementary(fan: MultiFan, S) -> MultiFan:
    S = tuple(sorted(S))
    e = elementary([fan.lam[i] for i in S])
    return relabel(e, {k: S[k] for k in range(len(S))}, fan.m, lam_new=fan.lam)


def flip(fan: MultiFan, S, p: int, new_lambda=None) -> MultiFan:
    """(p, q)-flip with p + q = n + 1, realised as adding a multiple of an
    elementary fan.

    p = 1: S is a facet and ``new_lambda`` the apex vector (new last slot).
    p = n: S is a single vertex whose link bounds a simplex; the vertex slot
    is removed afterwards. Otherwise S has n+1 vertices and spans the
    join of a (p-1)-sphere boundary with a (q-1)-simplex.
    """
    n = fan.n
    S = tuple(sorted(S))
    qq = n + 1 - p
    if p < 1 or qq < 1:
        raise PreconditionError(f"flip type ({p},{qq}) is not defined in dimension {n}")
    K = fan.complex
    if p == 1:
        if S not in fan.weights:
            raise PreconditionError(f"{[i + 1 for i in S]} is not a supported facet")
        if new_lambda is None:
            raise PreconditionError("a (1,n)-flip needs the new characteristic vector")
        lam = list(fan.lam) + [qvec(new_lambda)]
        base = MultiFan(lam, fan.weights, n=n)
        full = S + (fan.m,)
        removed, added = [S], [tuple(sorted(set(full) - {i})) for i in S]
        return _flip_by_elementary(base, full, removed, added)
    if qq == 1:
        if len(S) != 1:
            raise PreconditionError("an (n,1)-flip is performed at a single vertex")
        i = S[0]
        if (i,) not in K:
            raise PreconditionError(f"vertex {i + 1} is not in the support")
        lk = [tuple(v for v in f if v != i) for f in K.facets if i in f]
        verts = sorted({v for f in lk for v in f})
        if len(verts) != n or len(lk) != n:
            raise PreconditionError(f"link of vertex {i + 1} is not the boundary of a simplex")
        if fan.det(tuple(verts)) == 0:
            raise PreconditionError(f"link vectors of vertex {i + 1} are dependent")
        full = tuple(sorted(verts + [i]))
        removed = [tuple(sorted(f + (i,))) for f in lk]
        out = _flip_by_elementary(fan, full, removed, [tuple(verts)])
        keep = [j for j in range(fan.m) if j != i]
        return relabel(out, {j: k for k, j in enumerate(keep)}, fan.m - 1,
                       lam_new=[fan.lam[j] for j in keep])
    if len(S) != n + 1:
        raise PreconditionError(f"a ({p},{qq})-flip needs {n + 1} vertices")
    inside = [f for f in K.facets if set(f) <= set(S)]
    if len(inside) != p:
        raise PreconditionError(f"induced complex on {[i + 1 for i in S]} has {len(inside)} facets, expected {p}")
    B = set(S)
    for f in inside:
        B &= set(f)
    A = sorted(set(S) - B)
    if len(B) != qq or len(A) != p:
        raise PreconditionError(f"induced complex on {[i + 1 for i in S]} is not of the required join type")
    for r in range(1, n + 1):
        for sub in combinations(S, r):
            want = not set(A) <= set(sub)
            if (sub in K) != want:
                raise PreconditionError(f"induced complex on {[i + 1 for i in S]} is not of the required join type")
    removed = [tuple(sorted(set(S) - {a})) for a in A]
    added = [tuple(sorted(set(S) - {b})) for b in sorted(B)]
    return _flip_by_elementary(fan, S, removed, added)


def _flip_by_elementary(fan, S, removed, added):
    e = _embedded_elementary(fan, S)
    first = removed[0]
    t = -fan.weights[first] / e.weights[first]
    out = linear_combine([(1, fan), (t, e)])
    left = [f for f in removed if f in out.weights]
    if left:
        raise PreconditionError("weights around the flipped region are not proportional to a simplex boundary; "
                                f"{[[v + 1 for v in f] for f in left]} would survive")
    missing = [f for f in added if f not in out.weights]
    if missing:
        raise PreconditionError(f"flip did not create {[[v + 1 for v in f] for f in missing]}")
    return out
