"""Poincare duality algebras D/Ann(Psi) through Macaulay duality, plus the
structure checks linking them to face numbers of the support complex."""
from __future__ import annotations

import warnings
from itertools import combinations
from math import comb

from .errors import InternalAssertionError, PreconditionError
from .exactmath import (ZERO, DiffOp, HomogeneousForm, apply_diff_op, det, exp_factorial,
                        monomials, qvec, rank, rref, transpose, kernel_basis)
from .multifan import MultiFan
from .simplicial import SimplicialComplex, boundary_matrix, classify, profile
from .volume import as_form, volume_poly_index


class AlgebraClass:
    __slots__ = ("algebra", "degree", "coords", "rep")

    def __init__(self, algebra, degree, coords, rep):
        self.algebra = algebra
        self.degree = degree
        self.coords = coords
        self.rep = rep

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __mul__(self, other):
        return multiply(self.algebra, self, other)

    def __add__(self, other):
        return self.algebra.cls(self.rep + other.rep)

    def __eq__(self, other):
        return (isinstance(other, AlgebraClass) and self.degree == other.degree
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.degree, self.coords))

    def __repr__(self):
        return f"AlgebraClass(degree={2 * self.degree}, rep={self.rep})"


class DualityAlgebra:
    """Graded pieces of D/Ann(Psi). Operator degree k corresponds to
    cohomological degree 2k."""

    def __init__(self, psi):
        F = as_form(psi)
        if F.is_zero():
            raise PreconditionError("the duality algebra needs a nonzero polynomial")
        self.psi = F
        self.n = n = F.degree
        self.m = m = F.nvars
        self.monomials = {k: list(monomials(m, k)) for k in range(n + 1)}
        self._col_index = {k: {b: t for t, b in enumerate(self.monomials[k])} for k in range(n + 1)}
        self.matrices = {}
        self.dims = []
        self.reps = {}
        for k in range(n + 1):
            rows = [self._coords_of(DiffOp.monomial(b)) for b in self.monomials[k]]
            self.matrices[k] = rows
            cols = len(self.monomials[n - k])
            _, piv, rk = rref(transpose(rows, cols), len(rows)) if rows else (None, [], 0)
            self.dims.append(rk)
            self.reps[k] = [self.monomials[k][p] for p in piv]
        self.dims = tuple(self.dims)
        self.pairings = {}
        for k in range(n + 1):
            rows = [self.matrices[k][self._col_index[k][b]] for b in self.reps[k]]
            cols = [self._col_index[n - k][b] for b in self.reps[n - k]]
            self.pairings[k] = [[r[c] for c in cols] for r in rows]
        self._assert_duality()

    def _coords_of(self, D) -> tuple:
        k = D.degree
        G = apply_diff_op(D, self.psi)
        return tuple(G.coefficient(b) * exp_factorial(b) for b in self.monomials[self.n - k])

    def _assert_duality(self):
        n, d = self.n, self.dims
        if d[0] != 1 or d[n] != 1:
            raise InternalAssertionError(f"extreme dimensions are not 1: {d}")
        for k in range(n + 1):
            if d[k] != d[n - k]:
                raise InternalAssertionError(f"dimension vector is not symmetric: {d}")
            if rank(self.pairings[k]) != d[k]:
                raise InternalAssertionError(f"pairing in degree {2 * k} is degenerate")

    def cls(self, D) -> AlgebraClass:
        D = D if isinstance(D, DiffOp) else DiffOp(D.nvars, D.degree, D.terms)
        if D.degree > self.n:
            return AlgebraClass(self, D.degree, (), DiffOp(self.m, D.degree))
        return AlgebraClass(self, D.degree, self._coords_of(D), D)

    def unit(self) -> AlgebraClass:
        return self.cls(DiffOp.constant(self.m, 1))

    def generator(self, i) -> AlgebraClass:
        return self.cls(DiffOp.variable(self.m, i))

    def hilbert(self) -> str:
        parts = []
        for k, d in enumerate(self.dims):
            if d:
                t = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
                parts.append(f"{d}{t}" if d != 1 or not t else t)
        return " + ".join(parts)

    def report(self) -> dict:
        return {"dm": list(self.dims), "hilbert": self.hilbert(),
                "checks": {"poincare": True, "symmetric": True,
                           "pairing_ranks": [rank(self.pairings[k]) for k in range(self.n + 1)]}}


def build(psi) -> DualityAlgebra:
    return DualityAlgebra(psi)


def multiply(A: DualityAlgebra, x: AlgebraClass, y: AlgebraClass) -> AlgebraClass:
    deg = x.degree + y.degree
    if deg > A.n:
        warnings.warn(f"product lands in degree {2 * deg} above the top degree {2 * A.n}")
        return AlgebraClass(A, deg, (), DiffOp(A.m, deg))
    return A.cls(x.rep * y.rep)


def integrate_top(A: DualityAlgebra, x: AlgebraClass):
    if x.degree != A.n:
        raise PreconditionError(f"class of degree {2 * x.degree} is not top dimensional")
    return x.coords[0] if x.coords else ZERO


def lefschetz_rank(A: DualityAlgebra, omega: AlgebraClass, k: int) -> int:
    """Rank of multiplication by omega^(n-2k) from degree 2k to 2n-2k."""
    n = A.n
    if 2 * k > n:
        raise PreconditionError("Lefschetz rank needs 2k <= n")
    G = apply_diff_op(omega.rep ** (n - 2 * k), A.psi)
    reps = [DiffOp.monomial(b) for b in A.reps[k]]
    M = [[apply_diff_op(a * b, G).evaluate([0] * A.m) for b in reps] for a in reps]
    return rank(M)


def hessian(F: HomogeneousForm, c) -> list:
    m = F.nvars
    return [[apply_diff_op(DiffOp.partial(m, (i, j)), F).evaluate(c) for j in range(m)]
            for i in range(m)]


def power_map_jacobian_rank(A: DualityAlgebra, c) -> dict:
    """Rank of the derivative of c -> [d_c^(n-1)] at c.

    The coordinates of that class are (n-1)! times the gradient of Psi, so
    the derivative is a multiple of the Hessian.
    """
    n = A.n
    if A.dims[1] != A.dims[n - 1]:
        raise InternalAssertionError("d_1 differs from d_(n-1)")
    c = qvec(c)
    if n < 2:
        r = 0
    else:
        r = rank(hessian(A.psi, c))
    target = A.dims[n - 1]
    full = r == target
    return {"rank": r, "target_dim": target, "full": full,
            "verdict": "dominant (generically surjective over the algebraic closure)" if full
            else "not certified"}


# ------------------------------------------------------------ Stanley-Reisner side

def _supported_monomials(K: SimplicialComplex, m: int, j: int) -> list:
    return [b for b in monomials(m, j) if tuple(i for i, e in enumerate(b) if e) in K]


def sr_quotient_dims(K: SimplicialComplex, lam) -> tuple:
    """Graded dimensions of Q[K]/(theta_1..theta_n)."""
    lam = [qvec(v) for v in lam]
    if len(lam) != K.m:
        raise PreconditionError("need one characteristic vector per vertex slot")
    n = len(lam[0]) if lam else 0
    for f in K.facets:
        if len(f) != n or det([lam[i] for i in f]) == 0:
            raise PreconditionError(f"theta is not a linear system of parameters (facet {[i + 1 for i in f]})")
    dims = []
    prev = None
    for j in range(n + 1):
        cur = _supported_monomials(K, K.m, j)
        index = {b: t for t, b in enumerate(cur)}
        rows = []
        for b in (prev or []):
            for l in range(n):
                row = [ZERO] * len(cur)
                for i in range(K.m):
                    if lam[i][l]:
                        e = list(b)
                        e[i] += 1
                        t = index.get(tuple(e))
                        if t is not None:
                            row[t] += lam[i][l]
                rows.append(row)
        dims.append(len(cur) - (rank(rows) if rows else 0))
        prev = cur
    return tuple(dims)


def direct_sum(F1: HomogeneousForm, F2: HomogeneousForm) -> HomogeneousForm:
    """F1 + F2 in disjoint sets of variables (F2's variables come second)."""
    m = F1.nvars + F2.nvars
    a = F1.embed(m, range(F1.nvars))
    b = F2.embed(m, range(F1.nvars, m))
    return a + b


def verify_structure(fan: MultiFan) -> dict:
    """Compare the graded dimensions of the multi-fan algebra with h, h' and
    h'' of the support complex whenever a structure theorem applies."""
    if not fan.is_complete():
        raise PreconditionError("multi-fan is not complete")
    if fan.is_zero():
        raise PreconditionError("zero multi-fan has no algebra")
    K = fan.complex
    info = classify(K)
    prof = profile(K)
    A = build(volume_poly_index(fan).form)
    dm = A.dims
    n = fan.n
    report = {"classification": info.to_json(), "profile": prof.to_json(), "dm": list(dm)}
    checks = {}
    if info.is_gorenstein_star:
        report["theorem"] = "sphere"
        sr = sr_quotient_dims(K, fan.lam)
        report["sr_dims"] = list(sr)
        checks["dm_equals_h"] = tuple(dm) == tuple(prof.h_vector)
        checks["sr_equals_h"] = tuple(sr) == tuple(prof.h_vector)
    elif info.is_homology_manifold and info.is_orientable and info.is_connected:
        report["theorem"] = "manifold"
        sr = sr_quotient_dims(K, fan.lam)
        report["sr_dims"] = list(sr)
        defects = [sr[j] - dm[j] for j in range(n + 1)]
        expected = [comb(n, j) * prof.reduced_betti[j - 1] if 0 < j < n else 0 for j in range(n + 1)]
        report["socle_defects"] = defects
        report["expected_defects"] = expected
        checks["dm_equals_h_double_prime"] = tuple(dm) == tuple(prof.h_double_prime)
        checks["sr_equals_h_prime"] = tuple(sr) == tuple(prof.h_prime)
        checks["defects_match_betti"] = defects == expected
    else:
        report["theorem"] = "none"
    report["checks"] = checks
    report["verified"] = all(checks.values()) if checks else None
    if checks and not report["verified"]:
        raise InternalAssertionError("structure theorem check failed", report)
    return report


# ------------------------------------------------------------ Minkowski relations as a spanning test

def _coaugmented_cocycles(K, chain, k, exact):
    """Basis of exact, or coaugmented closed, (k-1)-cochains on K as dicts."""
    faces = K.faces(k - 1)
    if exact:
        M, rows, cols = boundary_matrix(K, k - 1)
        return [dict(zip(cols, row)) for row in M]
    top = K.dim
    if k - 1 == top:
        vec = [chain.terms.get(s, ZERO) for s in faces]
        ker = kernel_basis([vec], len(faces))
    else:
        M, rows, cols = boundary_matrix(K, k)
        ker = kernel_basis(transpose(M, len(faces)), len(faces)) if M else \
            kernel_basis([], len(faces))
    return [dict(zip(faces, v)) for v in ker]


def minkowski_quotient_dims(fan: MultiFan, exact: bool = False) -> tuple:
    """dim of <x_I : I in K, |I| = k> modulo Minkowski relations, k = 0..n.

    Relations are sum a(I) <lambda(I), e_S> x_I with a running over exact or
    over coaugmented closed (k-1)-cochains and S over k-subsets of the
    coordinates. Experimental hook for the question whether these relations
    present the multi-fan algebra in general.
    """
    K = fan.complex
    n = fan.n
    chain = fan.underlying_chain()
    out = []
    for k in range(n + 1):
        faces = K.faces(k - 1)
        if k == 0:
            out.append(len(faces))
            continue
        minors = {I: {S: det([[fan.lam[i][s] for s in S] for i in I]) for S in combinations(range(n), k)}
                  for I in faces}
        rows = []
        for a in _coaugmented_cocycles(K, chain, k, exact):
            for S in combinations(range(n), k):
                rows.append([a.get(I, ZERO) * minors[I][S] for I in faces])
        out.append(len(faces) - (rank(rows) if rows else 0))
    return tuple(out)
