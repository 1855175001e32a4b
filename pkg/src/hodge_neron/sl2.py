"""
sl2 data attached to an R-split mixed Hodge structure: the grading Y, the
raising operator N+, the constants R(a,b,l) and C, primitive decompositions
and the triangular system for the w-components.

Bracket convention: [Y,N] = -2N, [Y,N+] = 2N+, N+ N - N N+ = Y.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .exact import Matrix, Subspace, Scalar, ONE, ZERO, S, vadd, vscale, zero_vec, vis_zero
from .hodge import splitting_basis, components
from .errors import NoTriple, InconsistentTriple, IndexMismatch, NoSolution


@dataclass
class Sl2Triple:
    N: Matrix
    Y: Matrix
    Nplus: Matrix

    def check(self):
        N, Y, P = self.N, self.Y, self.Nplus
        return ((Y.commutator(N) + N.scale(2)).is_zero()
                and (Y.commutator(P) - P.scale(2)).is_zero()
                and (P @ N - N @ P - Y).is_zero())


def grading_Y(split, m):
    cols, labels = splitting_basis(split)
    n = len(cols)
    B = Matrix.from_columns(cols, n)
    D = Matrix([[S(p + q - m) if i == j else ZERO for j in range(n)]
                for i, (p, q) in enumerate(labels)], n)
    return B @ D @ B.inverse()


def complete_sl2(N, Y):
    """The unique N+ with [Y,N+] = 2N+ and N+ N - N N+ = Y."""
    n = N.nrows
    if not (Y.commutator(N) + N.scale(2)).is_zero():
        raise NoTriple("[Y,N] != -2N: Y is not the weight grading of N")
    if N.nilpotency_index() is None:
        raise NoTriple("N is not nilpotent")
    rows, rhs = [], []
    idx = lambda i, j: i * n + j
    for i in range(n):
        for j in range(n):
            # (YX - XY - 2X)_{ij} = 0
            r = [ZERO] * (n * n)
            for k in range(n):
                r[idx(k, j)] = r[idx(k, j)] + Y[i, k]
                r[idx(i, k)] = r[idx(i, k)] - Y[k, j]
            r[idx(i, j)] = r[idx(i, j)] - 2
            rows.append(r)
            rhs.append(ZERO)
            # (XN - NX)_{ij} = Y_{ij}
            r = [ZERO] * (n * n)
            for k in range(n):
                r[idx(i, k)] = r[idx(i, k)] + N[k, j]
                r[idx(k, j)] = r[idx(k, j)] - N[i, k]
            rows.append(r)
            rhs.append(Y[i, j])
    try:
        x = Matrix(rows, n * n).solve(rhs)
    except NoSolution:
        raise NoTriple("no raising operator solves the triple relations") from None
    P = Matrix([[x[idx(i, j)] for j in range(n)] for i in range(n)], n)
    if not Sl2Triple(N, Y, P).check():
        raise NoTriple("solution fails the triple relations")
    return P


def triple_from_splitting(N, split, m):
    Y = grading_Y(split, m)
    return Sl2Triple(N, Y, complete_sl2(N, Y))


# ---------------------------------------------------------------- constants

def r_const(a, b, l):
    """R(a,b,l) = b!(l+a-b)!/((l-b)!(b-a)!) for 0 <= a <= b <= l, else 0."""
    if not (0 <= a <= b <= l):
        return Fraction(0)
    f = math.factorial
    return Fraction(f(b) * f(l + a - b), f(l - b) * f(b - a))


@lru_cache(maxsize=None)
def c_const(l, b, k):
    """
    Coefficient of (N+)^k N^{b+k} h^{p+b,q+b} in h^{p,q}(b), with l = m - p - q.
    Obtained by descending induction on b; depends only on (l, b, k).
    """
    if l < 0 or b < 0 or b > l or k < 0:
        return Fraction(0)
    rbb = r_const(b, b, l)
    if k == 0:
        return 1 / rbb
    tot = Fraction(0)
    for j in range(1, k + 1):
        tot += r_const(b, b + j, l + 2 * j) * c_const(l + 2 * j, b + j, k - j)
    return -tot / rbb


def C_const(p, q, b, j, m=-1):
    return c_const(m - p - q, b, j)


@dataclass
class PrimitiveDecomposition:
    components: dict = field(default_factory=dict)   # (p,q,b) -> vector

    def recompose(self, Nplus):
        n = Nplus.nrows
        out = zero_vec(n)
        for (p, q, b), v in self.components.items():
            out = vadd(out, Nplus.power(b) @ v)
        return out


def primitive_decompose(h, triple, split, m):
    N, P = triple.N, triple.Nplus
    n = N.nrows
    comps = components(split, tuple(h))
    Npow = [Matrix.identity(n)]
    Ppow = [Matrix.identity(n)]
    for _ in range(2 * n + 2):
        Npow.append(Npow[-1] @ N)
        Ppow.append(Ppow[-1] @ P)
    out = {}
    for (p, q) in sorted(split):
        l = m - p - q
        if l < 0:
            continue
        for b in range(0, l + 1):
            src = comps.get((p + b, q + b))
            if src is None:
                continue
            v = zero_vec(n)
            for k in range(0, n + 1):
                if b + k >= len(Npow):
                    break
                c = c_const(l, b, k)
                if c == 0:
                    continue
                t = Ppow[k] @ (Npow[b + k] @ src)
                v = vadd(v, vscale(c, t))
            if not vis_zero(v):
                out[(p, q, b)] = v
    dec = PrimitiveDecomposition(out)
    for (p, q, b), v in out.items():
        if not vis_zero(N @ v) or not split[(p, q)].contains(v):
            raise InconsistentTriple(f"component ({p},{q},{b}) is not primitive of type ({p},{q})")
    if dec.recompose(P) != tuple(h):
        raise InconsistentTriple("recomposition does not reproduce the input")
    return dec


# ---------------------------------------------------------------- the w-system

@dataclass
class WSolution:
    w: dict                 # (p,q,b) -> vector
    determinants: dict      # (p,q) -> Scalar
    order: list             # unknown labels in solve order
    matrices: dict          # (p,q) -> (equation b list, unknown b list, Matrix)


def _coef(k, bp, l):
    c = S(0, -2) ** k / math.factorial(k)
    return c * r_const(k, bp, l)


def w_block(p, q):
    l = -1 - p - q
    if l < 0:
        raise IndexMismatch(f"({p},{q}) has negative string length")
    eqs = [b for b in range(0, l + 1) if p + b <= -1]
    unk = [b for b in range(0, l + 1) if q + b >= 0]
    unk = sorted(unk, reverse=True)
    A = Matrix([[_coef(bp - b, bp, l) if bp >= b else ZERO for bp in unk] for b in eqs], len(unk))
    return eqs, unk, A


def w_order(hodge_numbers):
    labels = []
    for (p, q) in sorted(hodge_numbers, key=lambda t: (t[0] + t[1], t[0])):
        eqs, unk, _ = w_block(p, q)
        labels.extend((p, q, b) for b in unk)
    return labels


def solve_w_system(hodge_numbers, g_components):
    """
    g^{p,q}(b) = sum_k ((-2i)^k/k!) R(k,k+b,-1-p-q) w^{p,q}(k+b), one block per (p,q).
    """
    for (p, q, b) in g_components:
        if (p, q) not in hodge_numbers:
            raise IndexMismatch(f"component ({p},{q},{b}) has no Hodge number")
        l = -1 - p - q
        if not (0 <= b <= l) or p + b > -1:
            raise IndexMismatch(f"component ({p},{q},{b}) violates p+b <= -1, 0 <= b <= l")
    w, dets, mats = {}, {}, {}
    order = []
    for (p, q) in sorted(hodge_numbers, key=lambda t: (t[0] + t[1], t[0])):
        d = hodge_numbers[(p, q)]
        eqs, unk, A = w_block(p, q)
        if len(eqs) != len(unk):
            raise IndexMismatch(f"block ({p},{q}) is not square")
        mats[(p, q)] = (eqs, unk, A)
        order.extend((p, q, b) for b in unk)
        if not eqs:
            continue
        dets[(p, q)] = A.det()
        sols = []
        for c in range(d):
            rhs = [g_components.get((p, q, b), (ZERO,) * d)[c] for b in eqs]
            sols.append(A.solve(rhs))
        for i, b in enumerate(unk):
            w[(p, q, b)] = tuple(sols[c][i] for c in range(d))
    return WSolution(w, dets, order, mats)


def forward_w(hodge_numbers, w_components):
    g = {}
    for (p, q), d in hodge_numbers.items():
        eqs, unk, A = w_block(p, q)
        for i, b in enumerate(eqs):
            v = (ZERO,) * d
            for j, bp in enumerate(unk):
                wv = w_components.get((p, q, bp))
                if wv is None or A[i, j].is_zero():
                    continue
                v = vadd(v, vscale(A[i, j], wv))
            g[(p, q, b)] = v
    return g
