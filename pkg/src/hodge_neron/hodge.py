"""
Pure and mixed Hodge data: polarization checks, Deligne splittings,
delta-splitting verification, Abel-Jacobi points and generalized Jacobians.
"""

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (Matrix, Subspace, Scalar, ONE, ZERO, I, S, DEFAULT_OMEGA, dot, vconj,
                    vscale, vadd, vsub, zero_vec, unit, nilpotent_exp, vinstantiate)
from .filtrations import Filtration, filtration_from_grading
from .errors import NotMHS, NoIntegralLift, NoSolution, NotNilpotent
from .report import Report


def qform(Q, x, y):
    """Q(x, y) = x^T Q y."""
    return dot(x, Q @ tuple(y))


def ipow(k):
    return [ONE, I, S(-1), S(0, -1)][k % 4]


@dataclass
class PureHodgeData:
    rank: int
    Q: Matrix
    F: Filtration
    weight: int = -1

    def hodge_components(self):
        """H^{p,q} = F^p cap conj F^q, p + q = weight."""
        lo, hi = self.F.range
        out = {}
        for p in range(lo - 1, hi + 2):
            q = self.weight - p
            U = self.F[p].intersect(self.F[q].conj())
            if U.dim:
                out[(p, q)] = U
        return out

    def instantiate(self, omega):
        return PureHodgeData(self.rank, self.Q.instantiate(omega), self.F.instantiate(omega), self.weight)


@dataclass
class MixedHodgeData:
    n: int
    W: Filtration
    F: Filtration
    splitting: dict = None
    delta: Matrix = None

    def instantiate(self, omega):
        sp = None
        if self.splitting is not None:
            sp = {k: U.instantiate(omega) for k, U in self.splitting.items()}
        d = self.delta.instantiate(omega) if self.delta is not None else None
        return MixedHodgeData(self.n, self.W.instantiate(omega), self.F.instantiate(omega), sp, d)


def mhs_from_splitting(n, pieces):
    """pieces: (p,q) -> list of vectors (or Subspace).  Builds W, F and the splitting."""
    split = {}
    for pq, vs in pieces.items():
        U = vs if isinstance(vs, Subspace) else Subspace(vs, n)
        if U.dim:
            split[tuple(pq)] = U
    wp, fp = {}, {}
    for (p, q), U in split.items():
        wp.setdefault(p + q, []).extend(U.basis)
        fp.setdefault(p, []).extend(U.basis)
    W = filtration_from_grading(n, wp, "increasing")
    F = filtration_from_grading(n, fp, "decreasing")
    total = Subspace([v for U in split.values() for v in U.basis], n)
    if total.dim != n or sum(U.dim for U in split.values()) != n:
        raise NotMHS("splitting pieces do not form a direct sum decomposition")
    return MixedHodgeData(n, W, F, split)


# ---------------------------------------------------------------- polarization

def _hermitian_pd(G):
    """Exact positive-definiteness of a Hermitian matrix over Q(i) by leading minors."""
    n = G.nrows
    for k in range(1, n + 1):
        sub = Matrix([r[:k] for r in G.rows[:k]], k)
        d = sub.det()
        re, im = d.gaussian()
        if im != 0 or re <= 0:
            return False
    return True


def check_polarization(H, samples=4, omega=None, seed=0):
    rep = Report("polarization")
    Q = H.Q
    n = H.rank
    rep.add("alternating", (Q.T + Q).is_zero() and all(Q[i, i].is_zero() for i in range(n)))
    d = Q.det()
    rep.add("nondegenerate", not d.is_zero(), f"det = {d}")
    rep.data["det"] = str(d)
    iso = True
    lo, hi = H.F.range
    for p in range(lo - 1, hi + 2):
        q = H.weight - p + 1
        for x in H.F[p].basis:
            for y in H.F[q].basis:
                if not qform(Q, x, y).is_zero():
                    iso = False
    rep.add("isotropy", iso, "Q(F^p, F^{w-p+1}) = 0")
    Hc = H
    if any(a.is_formal() for U in [H.F[k] for k in H.F.indices()] for v in U.basis for a in v) or Q.is_formal():
        Hc = H.instantiate(omega or DEFAULT_OMEGA)
    comps = Hc.hodge_components()
    direct = sum(U.dim for U in comps.values()) == n and \
        Subspace([v for U in comps.values() for v in U.basis], n).dim == n
    rep.add("hodge decomposition", direct)
    pos = direct
    rng = random.Random(seed)
    if direct:
        for (p, q), U in sorted(comps.items()):
            c = ipow(p - q)
            B = U.basis
            G = Matrix([[c * qform(Hc.Q, a, vconj(b)) for b in B] for a in B], len(B))
            if not _hermitian_pd(G):
                pos = False
            for _ in range(samples):
                coeffs = [S(rng.randint(-3, 3), rng.randint(-3, 3)) for _ in B]
                if all(x.is_zero() for x in coeffs):
                    continue
                h = zero_vec(n)
                for a, b in zip(coeffs, B):
                    h = vadd(h, vscale(a, b))
                val = c * qform(Hc.Q, h, vconj(h))
                re, im = val.gaussian()
                if im != 0 or re <= 0:
                    pos = False
    rep.add("positivity", pos, "i^{p-q} Q(h, conj h) > 0 on each H^{p,q}")
    return rep


# ---------------------------------------------------------------- Deligne splitting

def deligne_splitting(M):
    """
    I^{p,q} = F^p cap W_{p+q} cap (conj F^q cap W_{p+q} + sum_{j>=1} conj F^{q-j} cap W_{p+q-j-1}).
    Returns (splitting dict, rsplit flag).
    """
    n = M.n
    W, F = M.W, M.F
    Fb = F.conj()
    flo, fhi = F.range
    wlo, whi = W.range
    depth = (whi - wlo) + 3
    split = {}
    for p in range(flo - 1, fhi + 2):
        for q in range(flo - 1, fhi + 2):
            k = p + q
            if W.gr_dim(k) == 0:
                continue
            inner = Fb[q].intersect(W[k])
            for j in range(1, depth + 1):
                inner = inner + Fb[q - j].intersect(W[k - j - 1])
            U = F[p].intersect(W[k]).intersect(inner)
            if U.dim:
                split[(p, q)] = U
    for k in W.jumps():
        tot = sum(U.dim for (p, q), U in split.items() if p + q == k)
        if tot != W.gr_dim(k):
            raise NotMHS(f"dim Gr^W_{k} = {W.gr_dim(k)} but the I^(p,q) with p+q={k} have total {tot}")
    allv = [v for U in split.values() for v in U.basis]
    if len(allv) != n or Subspace(allv, n).dim != n:
        raise NotMHS("I^(p,q) do not form a direct sum")
    rsplit = all(U.conj() == split.get((q, p), Subspace.zero(n)) for (p, q), U in split.items())
    return split, rsplit


def splitting_basis(split):
    """Concatenated basis and the (p,q) label of each column, in sorted (p,q) order."""
    cols, labels = [], []
    for pq in sorted(split):
        for v in split[pq].basis:
            cols.append(v)
            labels.append(pq)
    return cols, labels


def components(split, v):
    """Decompose v into its I^{p,q} components."""
    cols, labels = splitting_basis(split)
    n = len(v)
    c = Matrix.from_columns(cols, n).solve(v)
    out = {}
    for a, col, pq in zip(c, cols, labels):
        if a.is_zero():
            continue
        out[pq] = vadd(out.get(pq, zero_vec(n)), vscale(a, col))
    return out


def lowers_bidegree(A, split, dp=1, dq=1):
    """True iff A I^{p,q} lies in the sum of I^{a,b} with a <= p-dp and b <= q-dq."""
    for (p, q), U in split.items():
        for v in U.basis:
            for (a, b), comp in components(split, A @ v).items():
                if a > p - dp or b > q - dq:
                    return False
    return True


def lowers_first_index(A, split):
    """A maps I^{p,q} into the sum of I^{a,b} with a < p (the subalgebra q)."""
    for (p, q), U in split.items():
        for v in U.basis:
            for (a, b) in components(split, A @ v):
                if a >= p:
                    return False
    return True


def check_delta(M, delta):
    if delta is None:
        delta = Matrix.zeros(M.n)
    if not delta.is_real():
        return False
    try:
        E = nilpotent_exp(delta.scale(S(0, -1)))
    except NotNilpotent:
        return False
    Fp = M.F.apply(E)
    try:
        split, rsplit = deligne_splitting(MixedHodgeData(M.n, M.W, Fp))
    except NotMHS:
        return False
    if not rsplit:
        return False
    return lowers_bidegree(delta, split)


def hodge_classes(W, F, p):
    """Complex basis of the conj-stable space of real Hodge classes of type (p,p)."""
    U = W[2 * p].intersect(F[p])
    return U.intersect(U.conj())


# ---------------------------------------------------------------- Abel-Jacobi

@dataclass
class ExtensionData:
    """V = H + Z with H the first `rank` coordinates; F0V the Hodge filtration F^0 V."""
    H: PureHodgeData
    F0V: Subspace
    vZ: tuple = None
    gr0: tuple = None          # projection V_Z -> Gr_0 as an integer row; default last coordinate
    omega: Scalar = None

    @property
    def rank(self):
        return self.H.rank


def integral_lift(E):
    r = E.rank
    proj = E.gr0 or tuple([0] * r + [1])
    if any(proj[:r]):
        raise NoIntegralLift("H must be the kernel of the last-coordinate projection")
    c = proj[r]
    if abs(c) != 1:
        raise NoIntegralLift(f"Gr_0 lattice image is {abs(c)}Z; no lattice point maps to 1")
    if E.vZ is not None:
        if E.vZ[r] * c != 1:
            raise NoIntegralLift("supplied v_Z does not map to 1")
        return tuple(S(x) if not isinstance(x, Scalar) else x for x in E.vZ)
    return tuple([ZERO] * r + [S(c)])


def f_lift(E, extra=None):
    """Some v_F in F^0 V mapping to 1, optionally shifted by extra in F^0 V cap H."""
    r = E.rank
    A = Matrix([[v[r] for v in E.F0V.basis]], E.F0V.dim)
    c = A.solve((ONE,))
    v = zero_vec(r + 1)
    for a, b in zip(c, E.F0V.basis):
        v = vadd(v, vscale(a, b))
    if extra is not None:
        v = vadd(v, extra)
    return v


def lattice_coordinates(f, lattice):
    """Real coordinates c with f = sum c_j lattice_j (f, lattice_j complex vectors)."""
    rows = []
    rhs = []
    d = len(f)
    for k in range(d):
        rows.append([l[k] for l in lattice])
        rhs.append(f[k])
    for k in range(d):
        rows.append([l[k].conj() for l in lattice])
        rhs.append(f[k].conj())
    A = Matrix(rows, len(lattice))
    return A.solve(rhs)


def reduce_mod_one(coords):
    out = []
    for c in coords:
        re, im = c.gaussian()
        if im != 0:
            raise ValueError("lattice coordinates must be real")
        out.append(re - (re.numerator // re.denominator))
    return tuple(out)


def aj_points(E, vF=None):
    """
    Returns (J1, J2, agree).  Points are torus coordinates in [0,1)^{rank}
    with respect to the lattice image h -> Q(h, -) restricted to F^0 H.
    """
    H = E.H
    r = H.rank
    omega = E.omega or DEFAULT_OMEGA
    Q = H.Q.instantiate(omega)
    F0H = H.F[0].instantiate(omega)
    F0V = E.F0V.instantiate(omega)
    E2 = ExtensionData(H, F0V, E.vZ, E.gr0, omega)
    vZ = integral_lift(E2)
    if vF is None:
        vF = f_lift(E2)
    vF = vinstantiate(vF, omega)
    x = vsub(vF, vZ)[:r]
    basis = F0H.basis
    # J1: v_F - v_Z mapped through h -> Q(., h) on F^0 H
    f1 = tuple(qform(Q, x, h) for h in basis)
    # J2: phi_h extends Q(h, .) from H to V and kills F^0 V; evaluate at v_Z
    f2 = []
    for h in basis:
        rows = []
        rhs = []
        for j in range(r):
            row = [ZERO] * (r + 1)
            row[j] = ONE
            rows.append(row)
            rhs.append(qform(Q, h, unit(r, j)))
        for f in F0V.basis:
            rows.append(list(f))
            rhs.append(ZERO)
        phi = Matrix(rows, r + 1).solve(rhs)
        f2.append(dot(phi, vZ))
    f2 = tuple(f2)
    lattice = [tuple(qform(Q, unit(r, j), h) for h in basis) for j in range(r)]
    c1 = reduce_mod_one(lattice_coordinates(f1, lattice))
    c2 = reduce_mod_one(lattice_coordinates(f2, lattice))
    return c1, c2, c1 == c2


# ---------------------------------------------------------------- generalized Jacobian

def jacobian_map(H):
    """Matrix of H_Z -> (F_0 P)^dual, m -> (phi_i(m)) with phi_i spanning the annihilator of F^0 H."""
    n = H.n
    F0 = H.F[0]
    if F0.dim:
        ann = Matrix([list(v) for v in F0.basis], n).kernel()
    else:
        ann = [unit(n, k) for k in range(n)]
    return Matrix([list(a) for a in ann], n) if ann else Matrix([], n)


def generalized_jacobian_shape(H):
    """(torus_rank, vector_dim, compact) of (F_0 P)^dual / H_Z."""
    if H.n == 0:
        return 0, 0, True
    Phi = jacobian_map(H)
    d = Phi.nrows
    if d == 0:
        return 0, 0, True
    u = Phi.rank()
    real = Matrix(list(Phi.rows) + [[a.conj() for a in r] for r in Phi.rows], H.n)
    t = real.rank()
    return t, d - u, t == 2 * u


def jacobian_lattice_kernel(H):
    """Kernel of H_Z -> (F_0 P)^dual, i.e. real vectors in F^0 H."""
    Phi = jacobian_map(H)
    if Phi.nrows == 0:
        return Subspace.full(H.n)
    real = Matrix(list(Phi.rows) + [[a.conj() for a in r] for r in Phi.rows], H.n)
    return Subspace(real.kernel(), H.n)
