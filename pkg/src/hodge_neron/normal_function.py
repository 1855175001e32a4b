"""
Admissible normal functions as mixed nilpotent orbits on V = H + Z: validation,
the lift v0, the singularity class, closure conditions on candidate classes and
the fibers of the closure of the graph.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import (Matrix, Subspace, Scalar, ZERO, ONE, I, S, z_sym, s_sym, nilpotent_exp, vadd, vsub,
                    vscale, vconj, zero_vec, unit, maxnorm)
from .filtrations import Filtration, relative_weight_filtration, is_relative_weight_filtration, cone_constancy
from .hodge import mhs_from_splitting, deligne_splitting, components, lowers_bidegree, hodge_classes, MixedHodgeData
from .orbit import NilpotentOrbitData, sigma, gamma_matrix, plateau, first_plateau_level
from .neron import f0m_presentation, analyze_limits, sample_s, sample_z, _eval_row
from .lattice import (rational_solution, lattice_index_of, rational_kernel, positive_kernel_vector, clear_denominators)
from .errors import NotExists, NotMHS, NoLift, NoSolution, PreconditionViolated, NotNilpotent
from .report import Report


@dataclass
class MixedOrbitData:
    base: NilpotentOrbitData
    Nprime: list                  # N'_j on V = H + Z, last coordinate distinguished
    split: dict                   # I^{p,q}(M, F') as Subspaces of V
    v: tuple = None               # candidate class in V_{Z,1}
    lam: Scalar = None
    deltaprime: Matrix = None
    gammaprime: dict = field(default_factory=dict)
    name: str = ""

    @property
    def n(self):
        return self.base.n + 1

    @property
    def nvars(self):
        return self.base.nvars

    @property
    def W(self):
        m = self.base.n
        return Filtration(self.n, {-2: Subspace.zero(self.n),
                                   -1: Subspace([unit(self.n, k) for k in range(m)], self.n),
                                   0: Subspace.full(self.n)}, "increasing")

    @property
    def mhs(self):
        return mhs_from_splitting(self.n, self.split)

    @property
    def M(self):
        return self.mhs.W

    @property
    def F(self):
        return self.mhs.F

    def N_sum(self, y):
        out = Matrix.zeros(self.n)
        for c, N in zip(y, self.Nprime):
            out = out + N.scale(c)
        return out

    def to_H(self, x):
        return tuple(x[:self.base.n])


def mixed_orbit(base, Nprime, pieces, v=None, lam=None, deltaprime=None, gammaprime=None, name=""):
    n = base.n + 1
    split = mhs_from_splitting(n, pieces).splitting
    return MixedOrbitData(base, list(Nprime), split, tuple(v) if v is not None else unit(n, n - 1), lam,
                          deltaprime, dict(gammaprime or {}), name)


# ---------------------------------------------------------------- validation

def validate_mixed_orbit(X):
    rep = Report("mixed orbit")
    m = X.base.n
    ok = len(X.Nprime) == X.base.nvars
    for Np, N in zip(X.Nprime, X.base.N_list):
        top = Matrix([r[:m] for r in Np.rows[:m]], m)
        ok = ok and top == N and all(a.is_zero() for a in Np.rows[m]) and Np.is_real()
    rep.add("restriction", ok, "N'_j|H = N_j and N'_j(V) in H")
    comm = all((A.commutator(B)).is_zero() for A, B in itertools.combinations(X.Nprime, 2))
    rep.add("commuting", comm)
    W = X.W
    try:
        Mrel = relative_weight_filtration(X.N_sum([1] * X.nvars), W)
        exists = True
    except (NotExists, PreconditionViolated, NotNilpotent):
        Mrel, exists = None, False
    const = exists and cone_constancy(X.Nprime, W=W)
    rep.add("relative filtration", exists and const, "exists and constant on the open cone")
    match = exists and Mrel == X.M
    rep.add("M matches splitting", match, "relative filtration equals the weights of I^{p,q}(M,F')")
    try:
        split, rsplit = deligne_splitting(MixedHodgeData(X.n, X.M, X.F))
        mhs = all(split.get(k) == U for k, U in X.split.items()) and len(split) == len(X.split)
    except NotMHS:
        mhs = False
    rep.add("(M,F') is MHS", mhs)
    F = X.F
    lo, hi = F.range
    trans = all(F[p - 1].contains(Np @ u) for Np in X.Nprime for p in range(lo, hi + 1) for u in F[p].basis)
    rep.add("transversality", trans, "N'_j F'^p in F'^{p-1}")
    hor = True
    if X.deltaprime is not None and not X.deltaprime.is_zero():
        hor = X.deltaprime.is_real() and lowers_bidegree(X.deltaprime, X.split)
    for alpha, G in X.gammaprime.items():
        hor = hor and all(F[p - 1].contains(G @ u) for p in range(lo, hi + 1) for u in F[p].basis)
    rep.add("horizontality", hor, "delta' lowers bidegrees, Gamma' preserves transversality")
    return rep


# ---------------------------------------------------------------- pairing against F_0 M

def mixed_period(X):
    n = X.n
    zs = [z_sym(j + 1) for j in range(X.nvars)]
    E = nilpotent_exp(X.N_sum(zs))
    if X.gammaprime:
        G = Matrix.zeros(n)
        for alpha, A in X.gammaprime.items():
            c = ONE
            for j, e in enumerate(alpha, start=1):
                if e:
                    c = c * s_sym(j) ** e
            G = G + A.scale(c)
        E = E @ nilpotent_exp(G)
    if X.deltaprime is not None and not X.deltaprime.is_zero():
        E = nilpotent_exp(X.deltaprime.scale(I)) @ E
    return E


def f0_lift(X):
    """An element of F'^0(z) with last coordinate 1 (exact, symbolic in z)."""
    E = mixed_period(X)
    basis = [E @ u for u in X.F[0].basis]
    k = next((i for i, u in enumerate(basis) if not u[-1].is_zero()), None)
    if k is None:
        raise NoLift("F'^0 lies in H")
    u = basis[k]
    return vscale(ONE / u[-1], u)


def q_prime_rows(X, with_derivatives=True):
    """
    For each generator sigma_g of F_0 M: the affine row r with
    Q'(x, sigma_g) = r[:-1] . x_H + r[-1] for x = (x_H, 1).
    Q'(x, u) = Q(u, x_H - f_H), f the lift of 1 to F'^0(z).
    """
    D = X.base
    f = f0_lift(X)
    fH = X.to_H(f)
    if with_derivatives:
        P = f0m_presentation(D)
        fam = [(g.I, g.v, g.label) for g in P.generators]
    else:
        fam = [((), v, f"f{k}") for k, v in enumerate(D.F[0].basis)]
    rows, labels = [], []
    for Iset, v, lab in fam:
        sv = sigma(D, Iset, v)
        r = list(D.Q.T @ sv)
        c = -sum((a * b for a, b in zip(r, fH)), ZERO)
        rows.append(r + [c])
        labels.append(lab)
    return rows, labels


# ---------------------------------------------------------------- v0

def _real(v):
    return tuple((a + a.conj()) * Fraction(1, 2) for a in v)


def v0_lift(X, y):
    """Unique v0 in M_0 cap F'^0 cap V_{R,1} with (sum y_j N'_j) v0 = 0, y exact positive."""
    y = [Scalar.coerce(Fraction(t)) if not isinstance(t, Scalar) else t for t in y]
    n, m = X.n, X.base.n
    I00 = X.split.get((0, 0))
    if I00 is None:
        raise NoLift("I^{0,0}(M,F') is zero")
    k = next((i for i, u in enumerate(I00.basis) if not u[-1].is_zero()), None)
    if k is None:
        raise NoLift("I^{0,0}(M,F') lies in H")
    v = I00.basis[k]
    v = _real(vscale(ONE / v[-1], v))
    Np = X.N_sum(y)
    N = X.base.N_sum(y)
    target = X.to_H(Np @ v)
    IH = X.base.split.get((0, 0))
    if IH is None:
        if any(not a.is_zero() for a in target):
            raise NoLift("N'v != 0 and I^{0,0}(H) is zero")
        h = zero_vec(m)
    else:
        A = Matrix.from_columns([N @ b for b in IH.basis], m)
        try:
            c = A.solve(target)
        except NoSolution:
            raise NoLift("N h = N' v has no solution in I^{0,0}(H)") from None
        h = zero_vec(m)
        for a, b in zip(c, IH.basis):
            h = vadd(h, vscale(a, b))
        h = _real(h)
    v0 = vsub(v, tuple(h) + (ZERO,))
    if any(not a.is_zero() for a in Np @ v0):
        raise NoLift("correction does not kill N'v")
    if not X.M[0].contains(v0) or not X.F[0].contains(v0) or not v0[-1].is_one():
        raise NoLift("v0 fails M_0 / F^0 / last coordinate")
    return v0


def v0_unique(X, y):
    """Differences of two solutions lie in F'^0 cap ker N' cap M_0 cap H_R; exact check that it is 0."""
    y = [Scalar.coerce(Fraction(t)) for t in y]
    Np = X.N_sum(y)
    n, m = X.n, X.base.n
    K = Subspace(Np.kernel(), n)
    Hs = Subspace([unit(n, k) for k in range(m)], n)
    U = K.intersect(X.F[0]).intersect(X.M[0]).intersect(Hs)
    return U.intersect(U.conj()).dim == 0


def v0_plateau(X, exps=(1, 2, 3, 4, 5, 6, 7, 8), factor=1.1):
    """max-norm of v0 over the grid y = (2^k, 2^j), grouped by level max(k, j)."""
    by_level = {}
    nv = X.nvars
    for ks in itertools.product(exps, repeat=nv):
        y = [Fraction(2) ** k for k in ks]
        v0 = v0_lift(X, y)
        val = max(abs(complex(*[float(t) for t in a.gaussian()])) for a in v0)
        lev = max(ks)
        by_level[lev] = max(by_level.get(lev, 0.0), val)
    levels = sorted(by_level)
    return {"levels": {int(k): by_level[k] for k in levels}, "bounded": plateau(by_level, factor),
            "C": max(by_level.values()), "alpha": first_plateau_level(by_level, factor)}


# ---------------------------------------------------------------- singularity

@dataclass
class Singularity:
    kind: str                   # zero | torsion | nontorsion
    order: int = None
    certificate: object = None

    def __str__(self):
        if self.kind == "torsion":
            return f"torsion({self.order})"
        return self.kind


def _qrows(M):
    out = []
    for r in M.rows:
        row = []
        for a in r:
            re, im = a.gaussian()
            if im != 0:
                raise PreconditionViolated("monodromy is not rational")
            row.append(re)
        out.append(row)
    return out


def singularity_class(X, v=None):
    """Class of (N'_1 v, ..., N'_n v) modulo the image of H_Z under (N_1, ..., N_n)."""
    v = tuple(v) if v is not None else X.v
    m = X.base.n
    A, b = [], []
    for N, Np in zip(X.base.N_list, X.Nprime):
        A.extend(_qrows(N))
        b.extend(Scalar.coerce(a).gaussian()[0] for a in X.to_H(Np @ v))
    if all(x == 0 for x in b):
        return Singularity("zero", 1, [0] * m)
    sol = rational_solution(A, b, m)
    if sol is None:
        At = [[A[i][j] for i in range(len(A))] for j in range(m)]
        for phi in rational_kernel(At, len(A)):
            if sum(p * x for p, x in zip(phi, b)) != 0:
                return Singularity("nontorsion", None, [str(p) for p in phi])
        raise PreconditionViolated("no rational solution but no obstruction functional")
    order = lattice_index_of(A, b, m)
    if order == 1:
        return Singularity("zero", 1, [str(x) for x in sol])
    return Singularity("torsion", order, [str(x) for x in sol])


# ---------------------------------------------------------------- closure conditions

def candidates(X, height):
    m = X.base.n
    rng = range(-height, height + 1)
    for h in itertools.product(rng, repeat=m):
        yield tuple(S(x) for x in h) + (ONE,)


def vrone_check(X, v):
    nv = X.nvars
    vecs = [X.to_H(Np @ v) for Np in X.Nprime]
    rows = []
    for k in range(X.base.n):
        for part in (0, 1):
            rows.append([Scalar.coerce(vecs[j][k]).gaussian()[part] for j in range(nv)])
    theta = positive_kernel_vector(rows, nv)
    Im11 = X.base.split.get((-1, -1), Subspace.zero(X.base.n))
    hodge = all(Im11.contains(u) for u in vecs)
    return {"v": [str(a) for a in v], "positive_relation": theta, "ii": theta is not None,
            "iv": hodge, "candidate": theta is not None and hodge}


def vrone_conditions(X, height_bound=3):
    rep = Report("closure conditions")
    rows = [vrone_check(X, v) for v in candidates(X, height_bound)]
    good = [r for r in rows if r["candidate"]]
    rep.data["candidates"] = good
    rep.data["tested"] = len(rows)
    rep.data["height"] = height_bound
    rep.add("closure candidate", bool(good), f"{len(good)} of {len(rows)} classes pass (ii) and (iv)")
    return rep


# ---------------------------------------------------------------- closure of the graph

def graph_closure_fiber(X, stratum=None, height_bound=10, with_derivatives=True):
    """Bounded-limit analysis of Q'(x, sigma_g) over x in V_{Z,1} as z_J -> i infinity."""
    J = tuple(sorted(stratum)) if stratum is not None else tuple(range(1, X.nvars + 1))
    rows, labels = q_prime_rows(X, with_derivatives)
    la = analyze_limits(rows, J, X.nvars, X.base.n + 1, labels, True, X.base.omega_value(), height_bound,
                        with_derivatives=True)
    out = {"stratum": list(J), "height": height_bound, "labels": labels, "empty": la.empty}
    if la.particular is not None:
        out["forced"] = list(la.particular)
        out["free_directions"] = [list(v) for v in la.lattice]
        out["limit"] = [str(la.limit_value(g, la.particular)) for g in range(len(labels))]
        # forced classes give isolated limits; free lattice directions only translate them discretely
        out["shape"] = "discrete"
        out["translates"] = "none" if not la.lattice or _lattice_const_zero(la) else "lattice"
    else:
        out["forced"] = None
    fams = []
    for h, theta in la.extra:
        vals = []
        for g in range(len(labels)):
            val = la.limit_value(g, h)
            for j in J:
                r = la.linear_rows.get((g, j))
                if r is None:
                    continue
                c = sum((r[k] * h[k] for k in range(len(h)) if h[k]), ZERO) + r[-1]
                val = val + c * z_sym(j)
            vals.append(str(val))
        fams.append({"x": list(h), "relation": list(theta), "value": vals})
    out["line_families"] = len(fams)
    out["line_samples"] = fams[:3]
    if fams:
        # sum theta_j c_j = 0 leaves a free complex combination of the z_j: the limits fill a line
        out["shape"] = "line"
    elif la.particular is None:
        out["shape"] = "empty"
    return out


def _lattice_const_zero(la):
    """The free directions do not move the limit (then the fiber is a single point per forced class)."""
    return all(all(a.is_zero() for a in (la.limit_value(g, l) - la.limit_value(g, [0] * len(l))
                                         for g in range(len(la.labels)))) for l in la.lattice)


# ---------------------------------------------------------------- Hodge classes and delta

def mhs_hodge_property(M, delta):
    """delta v = 0 for every real Hodge class v of type (p,p)."""
    if delta is None or delta.is_zero():
        return True
    lo, hi = M.F.range
    bad = []
    for p in range(lo - 1, hi + 2):
        U = hodge_classes(M.W, M.F, p)
        for v in U.basis:
            w = delta @ v
            if any(not a.is_zero() for a in w):
                bad.append(p)
    return not bad
