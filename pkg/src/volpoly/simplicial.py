"""Simplicial complexes on the vertex slots 0..m-1, exact (co)chains,
rational homology and the f/h-vector family.

Every simplex is a sorted tuple and is oriented by increasing vertex order.
The complex ``{()}`` (only the empty face) is distinct from the void complex
with no faces at all.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .errors import PreconditionError, ValidationError
from .exactmath import ZERO, kernel_basis, q, qstr, rank


class SimplicialComplex:
    def __init__(self, m: int, facets):
        self.m = int(m)
        cleaned = set()
        for f in facets:
            s = tuple(sorted(set(int(v) for v in f)))
            if len(s) != len(tuple(f)):
                raise ValidationError(f"repeated vertex in {tuple(f)}")
            if s and (s[0] < 0 or s[-1] >= self.m):
                raise ValidationError(f"vertex out of range in {s}")
            cleaned.add(s)
        # keep maximal faces only
        ordered = sorted(cleaned, key=len, reverse=True)
        maximal = []
        for s in ordered:
            ss = set(s)
            if not any(ss < set(t) for t in maximal):
                maximal.append(s)
        self.facets = tuple(sorted(maximal, key=lambda s: (len(s), s)))
        self._faces = None

    @property
    def dim(self) -> int:
        return max((len(f) for f in self.facets), default=0) - 1

    def is_void(self) -> bool:
        return not self.facets

    def is_pure(self) -> bool:
        return len({len(f) for f in self.facets}) <= 1

    def _all_faces(self):
        if self._faces is None:
            by_size = {}
            seen = set()
            for f in self.facets:
                for k in range(len(f) + 1):
                    for s in combinations(f, k):
                        if s not in seen:
                            seen.add(s)
                            by_size.setdefault(k, []).append(s)
            self._faces = ({k: tuple(sorted(v)) for k, v in by_size.items()}, seen)
        return self._faces

    def faces(self, k: int) -> tuple:
        """Faces of dimension k (k+1 vertices); k = -1 gives the empty face."""
        return self._all_faces()[0].get(k + 1, ())

    def contains(self, s) -> bool:
        return tuple(sorted(s)) in self._all_faces()[1]

    __contains__ = contains

    def vertices(self) -> tuple:
        return tuple(s[0] for s in self.faces(0))

    def f_vector(self) -> tuple:
        """(f_{-1}, f_0, ..., f_{dim})."""
        return tuple(len(self.faces(k)) for k in range(-1, self.dim + 1))

    def to_json(self):
        return {"m": self.m, "facets": [[v + 1 for v in f] for f in self.facets]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(data["m"], [[int(v) - 1 for v in f] for f in data["facets"]])
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad complex: {exc}") from exc

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and (self.m, self.facets) == (other.m, other.facets)

    def __hash__(self):
        return hash((self.m, self.facets))

    def __repr__(self):
        return f"SimplicialComplex(m={self.m}, facets={[list(f) for f in self.facets]})"


def link(K: SimplicialComplex, simplex) -> SimplicialComplex:
    s = tuple(sorted(simplex))
    if s not in K:
        raise PreconditionError(f"{list(s)} is not a face")
    ss = set(s)
    return SimplicialComplex(K.m, [tuple(v for v in f if v not in ss)
                                   for f in K.facets if ss <= set(f)])


# ------------------------------------------------------------ chains

@dataclass
class Chain:
    """Finitely supported rational function on k-simplices (sorted tuples of
    length k+1). Used for both chains and cochains."""

    degree: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, c in self.terms.items():
            s = tuple(s)
            if len(s) != self.degree + 1 or list(s) != sorted(set(s)):
                raise ValidationError(f"{s} is not a sorted {self.degree}-simplex")
            c = q(c)
            if c:
                clean[s] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if self.degree != other.degree:
            raise ValidationError("adding chains of different degree")
        t = dict(self.terms)
        for s, c in other.terms.items():
            t[s] = t.get(s, ZERO) + c
        return type(self)(self.degree, t)

    def __rmul__(self, scalar):
        scalar = q(scalar)
        return type(self)(self.degree, {s: scalar * c for s, c in self.terms.items()})

    def __neg__(self):
        return (-1) * self

    def __sub__(self, other):
        return self + (-other)

    def to_json(self):
        return {"degree": self.degree,
                "terms": [{"simplex": [v + 1 for v in s], "coef": qstr(c)}
                          for s, c in sorted(self.terms.items())]}

    @classmethod
    def from_json(cls, data):
        try:
            return cls(int(data["degree"]),
                       {tuple(sorted(int(v) - 1 for v in t["simplex"])): q(t["coef"])
                        for t in data["terms"]})
        except (KeyError, TypeError, ValueError) as exc:
            raise ValidationError(f"bad chain: {exc}") from exc


class Cochain(Chain):
    pass


def boundary(c: Chain) -> Chain:
    """Alternating-sign boundary; the boundary of a 0-chain is its
    augmentation, a (-1)-chain on the empty simplex."""
    if c.degree < 0:
        raise PreconditionError("boundary of a (-1)-chain")
    out = {}
    for s, coef in c.terms.items():
        for i in range(len(s)):
            face = s[:i] + s[i + 1:]
            out[face] = out.get(face, ZERO) + (coef if i % 2 == 0 else -coef)
    return Chain(c.degree - 1, out)


def coboundary(a: Chain, K: SimplicialComplex, fundamental: Chain | None = None) -> Cochain:
    """Simplicial coboundary on K. At the top degree (dim K) the result is
    the evaluation of ``a`` on the fundamental chain, stored on the key ()
    of a cochain of degree dim K + 1."""
    top = K.dim
    if a.degree < -1 or a.degree > top:
        raise PreconditionError(f"coboundary out of range in degree {a.degree}")
    if a.degree == top:
        if fundamental is None:
            info = classify(K)
            if info.fundamental_chain is None:
                raise PreconditionError("top coboundary needs a fundamental chain")
            fundamental = info.fundamental_chain
        if fundamental.degree != top:
            raise ValidationError("fundamental chain has the wrong degree")
        val = sum((c * a.terms.get(s, ZERO) for s, c in fundamental.terms.items()), ZERO)
        out = Cochain(top + 1)
        out.terms = {(): val} if val else {}
        return out
    out = {}
    for s in K.faces(a.degree + 1):
        val = ZERO
        for i in range(len(s)):
            v = a.terms.get(s[:i] + s[i + 1:])
            if v:
                val += v if i % 2 == 0 else -v
        if val:
            out[s] = val
    return Cochain(a.degree + 1, out)


# ------------------------------------------------------------ homology

def boundary_matrix(K: SimplicialComplex, k: int):
    """Matrix of the boundary C_k -> C_{k-1} (rows = (k-1)-faces). For k = 0
    this is the augmentation onto the empty face."""
    rows_faces = K.faces(k - 1)
    cols_faces = K.faces(k)
    index = {s: r for r, s in enumerate(rows_faces)}
    M = [[0] * len(cols_faces) for _ in rows_faces]
    for j, s in enumerate(cols_faces):
        for i in range(len(s)):
            M[index[s[:i] + s[i + 1:]]][j] = 1 if i % 2 == 0 else -1
    return M, rows_faces, cols_faces


def _betti_all(K: SimplicialComplex) -> dict:
    """Reduced Betti numbers in degrees -1..dim K."""
    if K.is_void():
        return {}
    top = K.dim
    ranks = {}
    for k in range(0, top + 1):
        M, rows_, cols_ = boundary_matrix(K, k)
        ranks[k] = rank(M) if rows_ and cols_ else 0
    ranks[top + 1] = 0
    out = {}
    for k in range(-1, top + 1):
        out[k] = len(K.faces(k)) - ranks.get(k, 0) - ranks[k + 1]
    return out


def reduced_betti(K: SimplicialComplex) -> tuple:
    """Reduced Betti numbers over Q in degrees 0..dim K."""
    b = _betti_all(K)
    return tuple(b[k] for k in range(0, K.dim + 1))


@dataclass
class CombinatorialProfile:
    f_vector: tuple
    h_vector: tuple
    h_prime: tuple
    h_double_prime: tuple
    reduced_betti: tuple

    def to_json(self):
        return {"f": list(self.f_vector), "h": list(self.h_vector),
                "h_prime": list(self.h_prime), "h_double_prime": list(self.h_double_prime),
                "reduced_betti": list(self.reduced_betti)}


def h_from_f(f: tuple, n: int) -> tuple:
    """f = (f_{-1}, ..., f_{n-1}); sum h_j t^{n-j} = sum f_{j-1} (t-1)^{n-j}."""
    return tuple(sum((-1) ** (j - i) * comb(n - i, j - i) * f[i] for i in range(j + 1))
                 for j in range(n + 1))


def profile(K: SimplicialComplex) -> CombinatorialProfile:
    if K.is_void():
        raise PreconditionError("profile of the void complex")
    if not K.is_pure():
        raise PreconditionError("profile needs a pure complex")
    n = K.dim + 1
    f = K.f_vector()
    h = h_from_f(f, n)
    b = _betti_all(K)

    def beta(j):
        # beta_{-1} vanishes for a non-empty complex
        return b.get(j, 0) if j >= 0 else 0

    hp = tuple(h[j] + comb(n, j) * sum((-1) ** (j - s - 1) * beta(s - 1) for s in range(1, j))
               for j in range(n + 1))
    hpp = tuple(hp[j] - comb(n, j) * beta(j - 1) if j < n else hp[j] for j in range(n + 1))
    return CombinatorialProfile(f[1:], h, hp, hpp, tuple(beta(j) for j in range(n)))


# ------------------------------------------------------------ classification

@dataclass
class Classification:
    is_pure: bool
    is_pseudomanifold: bool
    is_strongly_connected: bool
    is_orientable: bool
    is_gorenstein_star: bool
    is_homology_manifold: bool
    is_connected: bool
    fundamental_chain: Chain | None = None

    def to_json(self):
        out = {k: v for k, v in self.__dict__.items() if k != "fundamental_chain"}
        out["fundamental_chain"] = self.fundamental_chain.to_json() if self.fundamental_chain else None
        return out


def strongly_connected(K: SimplicialComplex) -> bool:
    facets = K.facets
    if not facets:
        return False
    ridges = {}
    for idx, f in enumerate(facets):
        for i in range(len(f)):
            ridges.setdefault(f[:i] + f[i + 1:], []).append(idx)
    seen = {0}
    stack = [0]
    while stack:
        idx = stack.pop()
        f = facets[idx]
        for i in range(len(f)):
            for nb in ridges[f[:i] + f[i + 1:]]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
    return len(seen) == len(facets)


def _is_homology_sphere_link(L: SimplicialComplex, d: int) -> bool:
    b = _betti_all(L)
    if not b or L.dim != d:
        return False
    return all(b[j] == 0 for j in range(-1, d)) and b[d] == 1


def fundamental_chain(K: SimplicialComplex):
    """Generator of the top rational homology normalised to +1 on the first
    facet, when that homology has rank 1 and the generator is a +-1 chain on
    every facet; otherwise None."""
    top = K.dim
    if top < 0 or not K.is_pure():
        return None
    M, _, cols = boundary_matrix(K, top)
    ker = kernel_basis(M, len(cols))
    if len(ker) != 1:
        return None
    z = ker[0]
    z = [x / z[0] for x in z]
    if any(abs(x) != 1 for x in z):
        return None
    return Chain(top, dict(zip(cols, z)))


def classify(K: SimplicialComplex) -> Classification:
    pure = K.is_pure() and not K.is_void()
    if not pure:
        return Classification(False, False, False, False, False, False, False)
    top = K.dim
    ridge_count = {}
    for f in K.facets:
        for i in range(len(f)):
            r = f[:i] + f[i + 1:]
            ridge_count[r] = ridge_count.get(r, 0) + 1
    sc = strongly_connected(K)
    pseudo = sc and all(c == 2 for c in ridge_count.values())
    fund = fundamental_chain(K)
    connected = _betti_all(K).get(0, 0) == 0 if top >= 0 else False
    manifold = True
    for k in range(0, top + 1):
        for s in K.faces(k):
            if not _is_homology_sphere_link(link(K, s), top - len(s)):
                manifold = False
                break
        if not manifold:
            break
    gorenstein = manifold and _is_homology_sphere_link(K, top)
    return Classification(True, pseudo, sc, fund is not None, gorenstein, manifold,
                          connected, fund)
