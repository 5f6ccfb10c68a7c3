"""Deciding whether a form is a volume polynomial and building a witness
multi-fan; also the route from a Poincare duality algebra to a multi-fan."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebra import build
from .errors import InternalAssertionError, PreconditionError, ValidationError
from .exactmath import (ZERO, DiffOp, HomogeneousForm, apply_diff_op, det, exp_factorial,
                        kernel_basis, monomials, q, rank, solve, transpose)
from .multifan import MultiFan, as_rng, sample_generic_vector
from .volume import as_form, lawrence_contributions, volume_poly_index

RECONSTRUCT_RETRIES = 64


@dataclass
class AnnSquare:
    basis: list
    m: int

    @property
    def dim(self):
        return len(self.basis)

    def operators(self):
        return [DiffOp.linear(b) for b in self.basis]


def ann_square(psi) -> AnnSquare:
    F = as_form(psi)
    if F.is_zero():
        raise PreconditionError("Ann^2 of the zero polynomial is everything")
    m = F.nvars
    cols = list(monomials(m, F.degree - 1))
    rows = []
    for i in range(m):
        G = F.derivative(i)
        rows.append([G.coefficient(b) for b in cols])
    # D = sum d_i d/dc_i kills F iff d^T rows = 0
    return AnnSquare(kernel_basis(transpose(rows, m), m), m)


@dataclass
class DepSets:
    sets: frozenset
    m: int
    n: int

    def __contains__(self, I):
        return tuple(sorted(I)) in self.sets

    def __eq__(self, other):
        return isinstance(other, DepSets) and (self.sets, self.m, self.n) == (other.sets, other.m, other.n)

    def sorted(self):
        return sorted(self.sets, key=lambda s: (len(s), s))


def dep_sets(basis, m: int, n: int) -> DepSets:
    """Subsets I, |I| <= n, on which the coordinate projection of span(basis)
    is not onto (column rank of the I-columns below |I|)."""
    out = set()
    for k in range(1, n + 1):
        for I in combinations(range(m), k):
            if any(set(J) <= set(I) for J in out):
                out.add(I)
                continue
            cols = [[b[i] for i in I] for b in basis]
            if not basis or rank(cols) < k:
                out.add(I)
    return DepSets(frozenset(out), m, n)


def is_volume_polynomial(psi) -> dict:
    F = as_form(psi)
    n, m = F.degree, F.nvars
    if F.is_zero():
        return {"verdict": True, "reason": "zero polynomial (zero multi-fan)",
                "ann_dim": m, "n": n, "dep": [], "violations": []}
    ann = ann_square(F)
    dep = dep_sets(ann.basis, m, n)
    violations = []
    for I in dep.sorted():
        if not apply_diff_op(DiffOp.partial(m, I), F).is_zero():
            violations.append(I)
    ok_dim = ann.dim >= n
    verdict = ok_dim and not violations
    return {"verdict": verdict, "ann_dim": ann.dim, "n": n, "ann_dim_ok": ok_dim,
            "dep": [[i + 1 for i in I] for I in dep.sorted()],
            "violations": [[i + 1 for i in I] for I in violations]}


@dataclass
class Reconstruction:
    fan: MultiFan
    trials: int
    solution_space_dim: int
    lambda_basis: list = field(default_factory=list)

    def to_json(self):
        return {"trials": self.trials, "solution_space_dim": self.solution_space_dim,
                "fan": self.fan.to_json()}


def _sample_plane(ann: AnnSquare, n, rng, tried):
    p = ann.dim
    if p == n and not tried:
        return [list(b) for b in ann.basis]
    R = [[Fraction(rng.randint(-9, 9)) for _ in range(p)] for _ in range(n)]
    return [[sum((R[a][t] * ann.basis[t][i] for t in range(p)), ZERO) for i in range(ann.m)]
            for a in range(n)]


def reconstruct_detailed(psi, seed=0) -> Reconstruction:
    F = as_form(psi)
    n, m = F.degree, F.nvars
    check = is_volume_polynomial(F)
    if not check["verdict"]:
        raise PreconditionError("not a volume polynomial: " +
                                ("Ann^2 too small" if not check.get("ann_dim_ok", True)
                                 else f"d_I does not vanish for I in {check['violations']}"))
    if F.is_zero():
        return Reconstruction(MultiFan([(ZERO,) * n] * m, {}, n=n), 0, 0)
    ann = ann_square(F)
    dep = dep_sets(ann.basis, m, n)
    rng = as_rng(seed)
    sampled = []
    for trial in range(RECONSTRUCT_RETRIES):
        L = _sample_plane(ann, n, rng, trial)
        sampled.append(L)
        if rank(L) < n or dep_sets(L, m, n) != dep:
            continue
        lam = [tuple(L[a][i] for a in range(n)) for i in range(m)]
        fan, kdim = _solve_weights(F, lam, rng)
        return Reconstruction(fan, trial + 1, kdim, L)
    err = InternalAssertionError("no generic n-plane in Ann^2 found within the retry budget")
    err.report = {"sampled": [[[str(x) for x in row] for row in L] for L in sampled]}
    raise err


def reconstruct(psi, seed=0) -> MultiFan:
    return reconstruct_detailed(psi, seed).fan


def _solve_weights(F, lam, rng):
    n, m = F.degree, F.nvars
    shell = MultiFan(lam, {}, n=n, check=False)
    facets = [I for I in combinations(range(m), n) if shell.det(I) != 0]
    if not facets:
        raise InternalAssertionError("matroid of the reconstructed vectors has no bases")
    v = sample_generic_vector(shell, rng, facets=facets)
    contrib = lawrence_contributions(shell, v, facets)
    monos = sorted({e for terms in contrib.values() for e in terms} | set(F.terms),
                   key=lambda e: tuple(-x for x in e))
    rows, rhs = [], []
    for e in monos:
        rows.append([contrib[I].get(e, ZERO) for I in facets])
        rhs.append(F.coefficient(e))
    # closedness of the weight chain on the (n-2)-faces
    ridges = sorted({I[:k] + I[k + 1:] for I in facets for k in range(n)})
    index = {r: t for t, r in enumerate(ridges)}
    bd = [[ZERO] * len(facets) for _ in ridges]
    for j, I in enumerate(facets):
        for k in range(n):
            bd[index[I[:k] + I[k + 1:]]][j] += 1 if k % 2 == 0 else -1
    rows += bd
    rhs += [ZERO] * len(ridges)
    sol, kdim = solve(rows, rhs)
    if sol is None:
        raise InternalAssertionError("weight system is inconsistent for a certified polynomial")
    fan = MultiFan(lam, dict(zip(facets, sol)), n=n)
    if not fan.is_complete() or volume_poly_index(fan, rng).form != F:
        raise InternalAssertionError("reconstructed fan does not reproduce the polynomial")
    return fan, kdim


# ------------------------------------------------------------ from an algebra

def functional_form(values: dict, p: int, n: int) -> HomogeneousForm:
    """Psi_T(c) = (1/n!) T((sum c_k X_k)^n) = sum_a T(X^a) c^a / a!."""
    terms = {}
    for a, t in values.items():
        a = tuple(int(x) for x in a)
        if len(a) != p or sum(a) != n:
            raise ValidationError(f"monomial {a} is not of degree {n} in {p} generators")
        terms[a] = terms.get(a, ZERO) + q(t) / exp_factorial(a)
    return HomogeneousForm(p, n, terms)


def functional_from_algebra(A) -> dict:
    """Top-degree values on monomials in a basis of the degree-2 part."""
    gens = [DiffOp.monomial(b) for b in A.reps[1]] if A.n >= 1 else []
    p = len(gens)
    out = {}
    for a in monomials(p, A.n):
        D = DiffOp.constant(A.m, 1)
        for g, k in zip(gens, a):
            if k:
                D = D * g ** k
        out[a] = apply_diff_op(D, A.psi).evaluate([0] * A.m)
    return out


def from_poincare_algebra(values: dict, p: int, n: int, seed=0):
    """Multi-fan whose algebra is the Poincare duality algebra defined by the
    top-degree functional ``values`` on monomials of degree n in p generators.

    Returns (fan, certificate)."""
    psi_T = functional_form(values, p, n)
    if psi_T.is_zero():
        raise PreconditionError("zero functional")
    A = build(psi_T)
    if n >= 1 and A.dims[1] < p:
        raise PreconditionError(f"generators are dependent in degree 2 (d_1 = {A.dims[1]} < p = {p})")
    rng = as_rng(seed)
    m = p + n
    for _ in range(RECONSTRUCT_RETRIES):
        R = [[Fraction(rng.randint(-7, 7)) for _ in range(p)] for _ in range(m)]
        if all(det([R[i] for i in S]) != 0 for S in combinations(range(m), p)):
            break
    else:
        raise InternalAssertionError("no elements in general position found")
    # sum_i c_i x_i = sum_k (sum_i c_i R_ik) X_k
    subs = [HomogeneousForm.linear([R[i][k] for i in range(m)]) for k in range(p)]
    psi_A = psi_T.substitute_linear(subs)
    rec = reconstruct_detailed(psi_A, rng)
    B = build(volume_poly_index(rec.fan).form)
    cert = {"dm_algebra": list(A.dims), "dm_fan": list(B.dims),
            "pairing_ranks_algebra": [rank(A.pairings[k]) for k in range(n + 1)],
            "pairing_ranks_fan": [rank(B.pairings[k]) for k in range(n + 1)],
            "general_position_matrix": [[str(x) for x in row] for row in R],
            "solution_space_dim": rec.solution_space_dim}
    cert["isomorphic_dims"] = cert["dm_algebra"] == cert["dm_fan"] and \
        cert["pairing_ranks_algebra"] == cert["pairing_ranks_fan"]
    if not cert["isomorphic_dims"]:
        raise InternalAssertionError("algebra of the reconstructed fan has different dimensions", cert)
    return rec.fan, cert
