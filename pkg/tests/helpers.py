"""Shared builders and seeded random data for the test suites."""

import random
from fractions import Fraction

from hodge_neron.exact import Matrix, Subspace, Scalar, S, ONE, ZERO, W, WB, I, vec, unit
from hodge_neron.filtrations import Filtration
from hodge_neron.hodge import PureHodgeData, ExtensionData
from hodge_neron.orbit import orbit_from_splitting
from hodge_neron.scenario import load_scenario

S_T = Matrix([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])
J2 = Matrix([[0, -1], [1, 0]])
N_EX2 = Matrix.elementary(4, 1, 3) + Matrix.elementary(4, 2, 4)


def ex2(om=None):
    """Example 2 with formal omega (om=None) or omega pinned to om."""
    if om is None:
        w, wb = W, WB
    else:
        w, wb = om, om.conj()
    pieces = {(1, -1): [vec((0, 0, 1, w))], (-1, 1): [vec((0, 0, 1, wb))],
              (0, -2): [vec((1, w, 0, 0))], (-2, 0): [vec((1, wb, 0, 0))]}
    return orbit_from_splitting(S_T, [N_EX2, N_EX2], pieces, omega=om, name="example2")


def scenario(name, **kw):
    return load_scenario(name, **kw)


def rng(seed):
    return random.Random(seed)


def rand_frac(r, lo=-5, hi=5, den=4):
    return Fraction(r.randint(lo, hi), r.randint(1, den))


def rand_gauss(r, lo=-4, hi=4, den=3):
    return S(rand_frac(r, lo, hi, den), rand_frac(r, lo, hi, den))


def rand_unimodular(r, n, steps=None):
    """Product of elementary integer matrices (det 1)."""
    M = Matrix.identity(n)
    for _ in range(steps or 3 * n):
        i, j = r.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            continue
        E = Matrix.identity(n) + Matrix.elementary(n, i + 1, j + 1, r.choice([-2, -1, 1, 2]))
        M = M @ E
    return M


def rand_partition(r, n):
    parts = []
    left = n
    while left:
        k = r.randint(1, left)
        parts.append(k)
        left -= k
    return sorted(parts, reverse=True)


def jordan_nilpotent(parts):
    n = sum(parts)
    rows = [[ZERO] * n for _ in range(n)]
    pos = 0
    for L in parts:
        for k in range(L - 1):
            rows[pos + k][pos + k + 1] = ONE
        pos += L
    return Matrix(rows, n)


def rand_nilpotent(r, n):
    parts = rand_partition(r, n)
    P = rand_unimodular(r, n)
    return P @ jordan_nilpotent(parts) @ P.inverse(), parts


def perturb_filtration(W, r):
    """A filtration differing from W in exactly one step, or None if W has no room."""
    n = W.n
    ks = [k for k in W.indices(0) if 0 < W[k].dim and W[k - 1].dim < W[k].dim < W[k + 1].dim]
    if not ks:
        return None
    k = r.choice(ks)
    lower, cur, upper = W[k - 1], W[k], W[k + 1]
    comp = [v for v in cur.basis if not lower.contains(v)]
    new = next(v for v in upper.basis if not cur.contains(v))
    # keep dimension: drop one complement vector of W_{k-1} in W_k and add `new`
    keep = []
    acc = lower
    for v in cur.basis:
        if acc.contains(v):
            continue
        keep.append(v)
        acc = acc + Subspace([v], n)
    keep = keep[1:]
    Wk = lower + Subspace(keep + [new], n)
    steps = {j: W[j] for j in W.indices(1)}
    steps[k] = Wk
    return Filtration(n, steps, "increasing")


# ---------------------------------------------------------------- extensions for Abel-Jacobi

def siegel_point(r, g):
    """Symmetric Z = X + iY with Y positive definite (diagonally dominant)."""
    rows = [[None] * g for _ in range(g)]
    for i in range(g):
        for j in range(i, g):
            x = rand_frac(r, -3, 3, 3)
            y = Fraction(r.randint(4, 8), 1) if i == j else rand_frac(r, -1, 1, 3)
            rows[i][j] = rows[j][i] = S(x, y)
    return Matrix(rows, g)


def abelian_hodge(r, g):
    """Weight -1 polarized H of rank 2g: F^0 = columns of [Z; I], Q = [[0,-I],[I,0]]."""
    n = 2 * g
    Z = siegel_point(r, g)
    cols = []
    for j in range(g):
        cols.append(tuple(list(Z.column(j)) + [ONE if i == j else ZERO for i in range(g)]))
    Q = Matrix([[0] * g + [-1 if i == j else 0 for j in range(g)] for i in range(g)]
               + [[1 if i == j else 0 for j in range(g)] + [0] * g for i in range(g)], n)
    F = Filtration(n, {-1: Subspace.full(n), 0: Subspace(cols, n), 1: Subspace.zero(n)}, "decreasing")
    return PureHodgeData(n, Q, F)


def random_extension(r, g):
    """Extension 0 -> H -> V -> Z -> 0 with F^0 V = F^0 H + C v_F, v_F = (x, 1), x complex random."""
    H = abelian_hodge(r, g)
    n = H.rank
    x = [rand_gauss(r) for _ in range(n)]
    vF = tuple(x) + (ONE,)
    F0V = Subspace([tuple(v) + (ZERO,) for v in H.F[0].basis] + [vF], n + 1)
    return ExtensionData(H, F0V, omega=S(1, 1)), vF
