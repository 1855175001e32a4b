"""
Integer lattice tools (Smith form via sympy) and exact positivity questions
decided by Fourier-Motzkin elimination over Q.
"""

import math
from fractions import Fraction

import sympy
from sympy.matrices.normalforms import smith_normal_decomp

from .exact import Scalar, ZERO, NAMES, CTX


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def clear_denominators(rows):
    out = []
    for r in rows:
        d = 1
        for x in r:
            d = _lcm(d, Fraction(x).denominator)
        out.append([int(Fraction(x) * d) for x in r])
    return out


def smith(A_int, ncols):
    """(D, U, V) with D = U A V; handles empty matrices."""
    if not A_int:
        return None
    M = sympy.Matrix(A_int)
    return smith_normal_decomp(M, domain=sympy.ZZ)


def integer_solutions(rows, rhs, ncols):
    """
    Integer x with rows . x = rhs (rows rational).  Returns (particular, basis)
    with basis a Z-basis of the homogeneous lattice, or (None, basis) if no
    integer solution exists.
    """
    rows = [list(r) for r in rows]
    rhs = [Fraction(b) for b in rhs]
    keep = [(r, b) for r, b in zip(rows, rhs) if any(Fraction(x) != 0 for x in r) or b != 0]
    if not keep:
        return [0] * ncols, [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    if any(all(Fraction(x) == 0 for x in r) and b != 0 for r, b in keep):
        return None, None
    aug = clear_denominators([r + [b] for r, b in keep])
    A = [r[:-1] for r in aug]
    b = [r[-1] for r in aug]
    D, U, V = smith(A, ncols)
    m = len(A)
    c = list(U * sympy.Matrix(b))
    rank = 0
    while rank < min(m, ncols) and D[rank, rank] != 0:
        rank += 1
    y = [Fraction(0)] * ncols
    ok = True
    for i in range(m):
        if i < rank:
            q = Fraction(int(c[i]), int(D[i, i]))
            if q.denominator != 1:
                ok = False
            y[i] = q
        elif c[i] != 0:
            return None, None
    basis = [[int(V[k, j]) for k in range(ncols)] for j in range(rank, ncols)]
    if not ok:
        return None, basis
    x = [int(sum(int(V[k, j]) * y[j] for j in range(ncols))) for k in range(ncols)]
    return x, basis


def rational_solution(rows, rhs, ncols):
    """Some rational x with rows . x = rhs, or None."""
    A = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows])
    b = sympy.Matrix([sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in rhs])
    try:
        sol, params = A.gauss_jordan_solve(b)
    except ValueError:
        return None
    sol = sol.subs({p: 0 for p in params})
    return [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sol]


def lattice_index_of(rows, rhs, ncols):
    """Least k >= 1 with k*rhs in rows.Z^ncols, assuming rhs is in the rational image."""
    aug = clear_denominators([list(r) + [b] for r, b in zip(rows, rhs)])
    A = [r[:-1] for r in aug]
    b = [r[-1] for r in aug]
    D, U, V = smith(A, ncols)
    c = list(U * sympy.Matrix(b))
    order = 1
    for i in range(min(len(A), ncols)):
        if D[i, i] != 0:
            order = _lcm(order, Fraction(int(c[i]), int(D[i, i])).denominator)
    return order


def integer_kernel(rows, ncols):
    x, basis = integer_solutions(rows, [0] * len(rows), ncols)
    return basis


def rational_rank(vectors):
    if not vectors:
        return 0
    return sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in v]
                         for v in vectors]).rank()


# ---------------------------------------------------------------- exact linear forms

def _poly_terms(p):
    return list(zip(p.monoms(), p.coeffs()))


def linear_form_rows(coeffs, generic=True):
    """
    Rational rows R such that, for real x, sum_k x_k a_k = 0 (identically in all
    symbols when generic) iff R x = 0.  The a_k are Scalars.
    """
    coeffs = [Scalar.coerce(a) for a in coeffs]
    den = None
    for a in coeffs:
        if a.is_zero():
            continue
        den = a.den if den is None else den * a.den // den.gcd(a.den)
    if den is None:
        return []
    table = {}
    for k, a in enumerate(coeffs):
        if a.is_zero():
            continue
        f = den / a.den
        for part, poly in (("re", a.re * f), ("im", a.im * f)):
            for mono, c in _poly_terms(poly):
                key = (part, tuple(mono))
                table.setdefault(key, [Fraction(0)] * len(coeffs))
                table[key][k] += Fraction(int(c.p), int(c.q))
    return [row for _, row in sorted(table.items()) if any(row)]


def gaussian_rows(vectors):
    """Real coordinates of Gaussian-rational complex vectors: each vector -> (re..., im...)."""
    out = []
    for v in vectors:
        re, im = [], []
        for a in v:
            x, y = Scalar.coerce(a).gaussian()
            re.append(x)
            im.append(y)
        out.append(re + im)
    return out


# ---------------------------------------------------------------- Fourier-Motzkin

def fm_feasible(ineqs, nvars):
    """
    Find rational t with a . t >= b for every (a, b) in ineqs, or None.
    Exact Fourier-Motzkin elimination with back substitution.
    """
    system = [([Fraction(x) for x in a], Fraction(b)) for a, b in ineqs]
    stages = []
    for k in range(nvars - 1, -1, -1):
        pos = [(a, b) for a, b in system if a[k] > 0]
        neg = [(a, b) for a, b in system if a[k] < 0]
        zer = [(a, b) for a, b in system if a[k] == 0]
        stages.append((k, pos, neg))
        new = list(zer)
        for ap, bp in pos:
            for an, bn in neg:
                lp, ln = -an[k], ap[k]
                a = [lp * x + ln * y for x, y in zip(ap, an)]
                new.append((a, lp * bp + ln * bn))
        system = _dedupe(new)
    for a, b in system:
        if b > 0:
            return None
    t = [Fraction(0)] * nvars
    for k, pos, neg in reversed(stages):
        lo = max((( b - sum(a[i] * t[i] for i in range(nvars) if i != k)) / a[k] for a, b in pos), default=None)
        hi = min((( b - sum(a[i] * t[i] for i in range(nvars) if i != k)) / a[k] for a, b in neg), default=None)
        if lo is None and hi is None:
            t[k] = Fraction(0)
        elif lo is None:
            t[k] = min(hi, Fraction(0))
        elif hi is None:
            t[k] = max(lo, Fraction(0))
        else:
            if lo > hi:
                return None
            t[k] = lo if lo == hi else (lo + hi) / 2
    for a, b in ineqs:
        if sum(Fraction(x) * y for x, y in zip(a, t)) < Fraction(b):
            return None
    return t


def _dedupe(system):
    seen = set()
    out = []
    for a, b in system:
        g = 0
        for x in list(a) + [b]:
            if x:
                g = math.gcd(g, x.numerator) if g else abs(x.numerator)
        # normalise by a positive scale for deduplication
        scale = None
        for x in a:
            if x != 0:
                scale = abs(x)
                break
        if scale is None:
            key = (tuple(a), b)
        else:
            key = (tuple(x / scale for x in a), b / scale)
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def positive_kernel_vector(rows, nvars):
    """
    A vector theta with every theta_j >= 1 and rows . theta = 0 (rows rational), or None.
    Scaled to a primitive integer vector when found.
    """
    basis = rational_kernel(rows, nvars)
    if not basis:
        return None
    d = len(basis)
    ineqs = [([basis[i][j] for i in range(d)], 1) for j in range(nvars)]
    t = fm_feasible(ineqs, d)
    if t is None:
        return None
    theta = [sum(t[i] * basis[i][j] for i in range(d)) for j in range(nvars)]
    den = 1
    for x in theta:
        den = _lcm(den, x.denominator)
    ints = [int(x * den) for x in theta]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    return [x // g for x in ints] if g else ints


def rational_kernel(rows, nvars):
    rows = [r for r in rows if any(Fraction(x) != 0 for x in r)]
    if not rows:
        return [[Fraction(int(i == j)) for i in range(nvars)] for j in range(nvars)]
    M = sympy.Matrix([[sympy.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows])
    out = []
    for v in M.nullspace():
        out.append([Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v])
    return out
