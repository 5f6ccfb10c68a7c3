"""Exact rational linear algebra, homogeneous forms, differential operators
and skew forms.

Scalars are :class:`fractions.Fraction`. Matrices are lists of rows. Nothing
in this module uses floating point.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import factorial, gcd

from .errors import ValidationError

Rational = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise ValidationError(f"not a rational: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"not a rational: {x!r}") from exc
    raise ValidationError(f"not a rational: {x!r}")


def qstr(x: Fraction) -> str:
    x = q(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def qvec(v) -> tuple:
    return tuple(q(x) for x in v)


def sign(x) -> int:
    return (x > 0) - (x < 0)


# ---------------------------------------------------------------- matrices

def qmatrix(rows) -> list:
    rows = [list(map(q, r)) for r in rows]
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValidationError("ragged matrix")
    return rows


def transpose(rows, ncols=None) -> list:
    if not rows:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*rows)]


def matvec(rows, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(r, v)), ZERO) for r in rows)


def dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), ZERO)


def rref(rows, ncols=None):
    """Reduced row echelon form with column-order pivoting.

    Returns ``(R, pivots, rank)``; ``R`` keeps the zero rows at the bottom.
    """
    R = qmatrix(rows)
    nrows = len(R)
    if ncols is None:
        ncols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if R[i][col] != 0), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = 1 / R[r][col]
        R[r] = [x * inv for x in R[r]]
        for i in range(nrows):
            if i != r and R[i][col] != 0:
                f = R[i][col]
                R[i] = [a - f * b for a, b in zip(R[i], R[r])]
        pivots.append(col)
        r += 1
    return R, pivots, len(pivots)


def kernel_basis(rows, ncols=None) -> list:
    """Basis of the right kernel; each vector has one free variable set to 1,
    the other free variables 0, in column order."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    R, pivots, _ = rref(rows, ncols)
    pivset = set(pivots)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -R[i][f]
        basis.append(tuple(v))
    return basis


def _integer_rows(rows):
    out = []
    for r in rows:
        r = [q(x) for x in r]
        den = 1
        for x in r:
            den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in r]
        if any(ints):
            out.append(ints)
    return out


def rank(rows) -> int:
    """Rank by fraction-free integer elimination (rows are cleared of
    denominators first, then reduced by their content after each step)."""
    M = _integer_rows(rows)
    if not M:
        return 0
    ncols = len(M[0])
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(M)) if M[i][col] != 0), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        p = M[rk]
        a = p[col]
        for i in range(rk + 1, len(M)):
            b = M[i][col]
            if b:
                row = [a * x - b * y for x, y in zip(M[i], p)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                M[i] = [x // g for x in row] if g > 1 else row
        rk += 1
        if rk == len(M):
            break
    return rk


def det(rows) -> Fraction:
    M = qmatrix(rows)
    n = len(M)
    if any(len(r) != n for r in M):
        raise ValidationError("determinant of a non-square matrix")
    result = ONE
    for col in range(n):
        piv = next((i for i in range(col, n) if M[i][col] != 0), None)
        if piv is None:
            return ZERO
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            result = -result
        p = M[col][col]
        result *= p
        for i in range(col + 1, n):
            f = M[i][col] / p
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[col])]
    return result


def inverse(rows) -> list:
    n = len(rows)
    aug = [list(r) + [ONE if i == j else ZERO for j in range(n)]
           for i, r in enumerate(qmatrix(rows))]
    R, pivots, rk = rref(aug, 2 * n)
    if rk < n or pivots[n - 1] != n - 1:
        raise ValidationError("singular matrix")
    return [r[n:] for r in R]


def solve(rows, rhs):
    """One solution of ``rows @ x = rhs`` with free variables zero, or None
    when the system is inconsistent. Also returns the kernel dimension."""
    ncols = len(rows[0]) if rows else 0
    aug = [list(r) + [q(b)] for r, b in zip(rows, rhs)]
    R, pivots, rk = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None, ncols - (rk - 1)
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = R[i][ncols]
    return tuple(x), ncols - rk


def gram(vectors) -> list:
    return [[dot(u, v) for v in vectors] for u in vectors]


# ---------------------------------------------------------------- monomials

def monomials(nvars: int, degree: int):
    """All exponent tuples of the given degree, lexicographically decreasing
    (so c1^d comes first)."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            yield (first,) + rest


def exp_factorial(a) -> int:
    out = 1
    for e in a:
        out *= factorial(e)
    return out


def _falling(a: int, b: int) -> int:
    out = 1
    for t in range(b):
        out *= a - t
    return out


class HomogeneousForm:
    """Homogeneous polynomial in c_1..c_m with rational coefficients, stored
    sparsely as {exponent tuple: coefficient}."""

    __slots__ = ("nvars", "degree", "terms")
    symbol = "c"

    def __init__(self, nvars: int, degree: int, terms=None):
        if nvars < 0 or degree < 0:
            raise ValidationError("negative size or degree")
        self.nvars = nvars
        self.degree = degree
        clean = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nvars or any(e < 0 for e in exp) or sum(exp) != degree:
                raise ValidationError(f"exponent {exp} does not fit {nvars} variables, degree {degree}")
            coef = q(coef)
            if coef:
                clean[exp] = clean.get(exp, ZERO) + coef
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, nvars, degree=0):
        return cls(nvars, degree)

    @classmethod
    def constant(cls, nvars, value):
        return cls(nvars, 0, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars, i):
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, 1, {tuple(e): ONE})

    @classmethod
    def linear(cls, coeffs):
        coeffs = list(coeffs)
        m = len(coeffs)
        terms = {}
        for i, a in enumerate(coeffs):
            e = [0] * m
            e[i] = 1
            terms[tuple(e)] = a
        return cls(m, 1, terms)

    @classmethod
    def monomial(cls, exp, coef=ONE):
        exp = tuple(exp)
        return cls(len(exp), sum(exp), {exp: coef})

    def _new(self, degree, terms):
        return type(self)(self.nvars, degree, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), ZERO)

    def _check_compatible(self, other):
        if self.nvars != other.nvars:
            raise ValidationError("forms over different numbers of variables")
        if self.degree != other.degree and not (self.is_zero() or other.is_zero()):
            raise ValidationError("adding forms of different degrees")

    def __add__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        self._check_compatible(other)
        degree = self.degree if self.terms else other.degree
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, ZERO) + c
        return self._new(degree, terms)

    def __neg__(self):
        return self._new(self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, HomogeneousForm):
            if self.nvars != other.nvars:
                raise ValidationError("forms over different numbers of variables")
            terms = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    terms[e] = terms.get(e, ZERO) + c1 * c2
            return self._new(self.degree + other.degree, terms)
        other = q(other)
        return self._new(self.degree, {e: c * other for e, c in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __pow__(self, k: int):
        result = self._new(0, {(0,) * self.nvars: ONE})
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        if self.nvars != other.nvars or self.terms != other.terms:
            return False
        return self.degree == other.degree or not self.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def evaluate(self, point) -> Fraction:
        point = qvec(point)
        total = ZERO
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= x ** k
            total += t
        return total

    __call__ = evaluate

    def derivative(self, i: int, k: int = 1):
        e = [0] * self.nvars
        e[i] = k
        return apply_diff_op(DiffOp.monomial(tuple(e)), self)

    def specialize_zero(self, indices):
        """Set the listed variables to zero."""
        idx = set(indices)
        return self._new(self.degree, {e: c for e, c in self.terms.items()
                                       if not any(e[i] for i in idx)})

    def substitute_linear(self, forms):
        """Replace c_k by the k-th linear form (all forms share nvars)."""
        if len(forms) != self.nvars:
            raise ValidationError("wrong number of substitutions")
        nv = forms[0].nvars if forms else 0
        out = HomogeneousForm(nv, self.degree)
        for e, c in self.terms.items():
            t = HomogeneousForm.constant(nv, c)
            for L, k in zip(forms, e):
                if k:
                    t = t * L ** k
            out = out + t
        return type(self)(nv, self.degree, out.terms)

    def embed(self, nvars: int, positions):
        """Re-express in ``nvars`` variables, variable k going to positions[k]."""
        terms = {}
        for e, c in self.terms.items():
            new = [0] * nvars
            for k, p in enumerate(positions):
                new[p] += e[k]
            terms[tuple(new)] = c
        return type(self)(nvars, self.degree, terms)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: tuple(-x for x in t[0]))

    def to_json(self):
        return [{"exp": list(e), "coef": qstr(c)} for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, data, nvars=None, degree=None):
        if isinstance(data, dict):
            nvars = data.get("nvars", nvars)
            degree = data.get("degree", degree)
            data = data.get("terms", [])
        if not isinstance(data, list):
            raise ValidationError("form must be a list of terms")
        terms = {}
        for t in data:
            try:
                exp = tuple(int(x) for x in t["exp"])
                coef = q(t["coef"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValidationError(f"bad term {t!r}") from exc
            terms[exp] = terms.get(exp, ZERO) + coef
        if nvars is None or degree is None:
            if not terms:
                raise ValidationError("cannot infer size of an empty form")
            first = next(iter(terms))
            nvars = len(first) if nvars is None else nvars
            degree = sum(first) if degree is None else degree
        return cls(nvars, degree, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(f"{self.symbol}{i + 1}" + (f"^{k}" if k > 1 else "")
                            for i, k in enumerate(e) if k)
            if not mono:
                parts.append(qstr(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{qstr(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"{type(self).__name__}({self})"


class DiffOp(HomogeneousForm):
    """Constant-coefficient differential operator, a form in d_1..d_m."""

    __slots__ = ()
    symbol = "d"

    def apply(self, F: HomogeneousForm) -> HomogeneousForm:
        return apply_diff_op(self, F)

    def __call__(self, F):
        return apply_diff_op(self, F)

    @classmethod
    def partial(cls, nvars, indices):
        """Product of d_i over the given indices (repeats allowed)."""
        e = [0] * nvars
        for i in indices:
            e[i] += 1
        return cls(nvars, len(indices), {tuple(e): ONE})


def apply_diff_op(D: HomogeneousForm, F: HomogeneousForm) -> HomogeneousForm:
    if D.nvars != F.nvars:
        raise ValidationError("operator and form over different numbers of variables")
    degree = F.degree - D.degree
    if degree < 0:
        return HomogeneousForm(F.nvars, 0)
    terms = {}
    for b, d in D.terms.items():
        for a, f in F.terms.items():
            coef = d * f
            ok = True
            for ai, bi in zip(a, b):
                if ai < bi:
                    ok = False
                    break
                if bi:
                    coef *= _falling(ai, bi)
            if ok:
                e = tuple(ai - bi for ai, bi in zip(a, b))
                terms[e] = terms.get(e, ZERO) + coef
    return HomogeneousForm(F.nvars, degree, terms)


# ---------------------------------------------------------------- skew forms

class SkewForm:
    """Element of the k-th exterior power of Q^n in Pluecker coordinates."""

    __slots__ = ("n", "k", "coords")

    def __init__(self, n: int, k: int, coords=None):
        self.n, self.k = n, k
        clean = {}
        for key, val in (coords or {}).items():
            key = tuple(key)
            if len(key) != k or list(key) != sorted(set(key)) or (key and key[-1] >= n):
                raise ValidationError(f"bad Pluecker index {key}")
            val = q(val)
            if val:
                clean[key] = val
        self.coords = clean

    def __eq__(self, other):
        return (isinstance(other, SkewForm) and (self.n, self.k) == (other.n, other.k)
                and self.coords == other.coords)

    def __neg__(self):
        return SkewForm(self.n, self.k, {s: -v for s, v in self.coords.items()})

    def __repr__(self):
        return f"SkewForm(n={self.n}, k={self.k}, {self.coords})"


def wedge(vectors, n=None) -> SkewForm:
    vectors = [qvec(v) for v in vectors]
    if n is None:
        if not vectors:
            raise ValidationError("empty wedge needs an explicit dimension")
        n = len(vectors[0])
    k = len(vectors)
    if k > n:
        raise ValidationError(f"wedge of {k} vectors in dimension {n}")
    if any(len(v) != n for v in vectors):
        raise ValidationError("vectors of unequal length")
    coords = {}
    for cols in combinations(range(n), k):
        d = det([[v[c] for c in cols] for v in vectors]) if k else ONE
        if d:
            coords[cols] = d
    return SkewForm(n, k, coords)


def pair_skew(a: SkewForm, b: SkewForm) -> Fraction:
    if (a.n, a.k) != (b.n, b.k):
        raise ValidationError("pairing skew forms of different shape")
    return sum((v * b.coords.get(s, ZERO) for s, v in a.coords.items()), ZERO)
