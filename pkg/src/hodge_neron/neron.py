"""
Presentations of F_0 M by the sections sigma_{I,v}, fibers and singular locus of
T(F_0 M), limit points of the integral classes, quotient fiber shapes and the
quasi-unipotent monodromy analysis.
"""

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .exact import (Matrix, Subspace, Scalar, ZERO, ONE, S, NAMES, CTX, MAXVARS, z_sym, s_sym,
                    span, to_sympy, unit, vscale, vadd)
from .errors import UnsupportedShape, NotQuasiUnipotent
from .orbit import n_product, sigma, index_sets, period_operator
from .lattice import (integer_solutions, linear_form_rows, positive_kernel_vector, gaussian_rows,
                      rational_rank, integer_kernel)
from .report import Report


# ---------------------------------------------------------------- presentation

@dataclass
class Generator:
    I: tuple
    v: tuple            # vector in F^{|I|}
    u: tuple            # frame coordinates N_I v
    label: str = ""


@dataclass
class Relation:
    degree: tuple       # multidegree d in {-1,0}^n
    coeffs: list        # Scalars in s, one per generator


@dataclass
class Presentation:
    nvars: int
    generators: list
    relations: list
    exact: bool = True
    note: str = ""

    def matrix(self):
        """Relations as columns: #generators x #relations."""
        g = len(self.generators)
        return Matrix([[r.coeffs[i] for r in self.relations] for i in range(g)], len(self.relations))


def _degree_ok(Iset, D):
    return set(D) <= set(Iset)


def f0m_presentation(D, depth=None):
    n = D.nvars
    depth = n if depth is None else depth
    cands = {}
    for Iset in index_sets(D, True):
        if len(Iset) > depth:
            continue
        NI = n_product(D, Iset)
        cands[Iset] = [(v, NI @ v) for v in D.F[len(Iset)].basis]
    # minimal generators, largest index sets first
    gens = []
    for Iset in sorted(cands, key=lambda I: (-len(I), I)):
        lower = [g.u for g in gens if set(g.I) > set(Iset)]
        cur = span(lower, D.n)
        for v, u in cands[Iset]:
            if all(a.is_zero() for a in u):
                continue
            new = span(list(cur) + [u], D.n)
            if len(new) > len(cur):
                gens.append(Generator(Iset, tuple(v), tuple(u)))
                cur = new
    gens.sort(key=lambda g: (len(g.I), g.I))
    for k, g in enumerate(gens):
        g.label = f"e{k}"
    # homogeneous syzygies in degrees d in {-1,0}^n, most negative first
    rels = []
    found = {}
    for k in range(n, -1, -1):
        for Dset in itertools.combinations(range(1, n + 1), k):
            inv = [i for i, g in enumerate(gens) if _degree_ok(g.I, Dset)]
            if len(inv) < 2:
                continue
            A = Matrix.from_columns([gens[i].u for i in inv], D.n)
            ker = A.kernel()
            # relations induced from more negative degrees
            induced = []
            for D2, vecs in found.items():
                if set(D2) >= set(Dset):
                    induced.extend(vecs)
            base = span(induced, len(gens)) if induced else ()
            mine = []
            for kv in ker:
                full = [ZERO] * len(gens)
                for i, a in zip(inv, kv):
                    full[i] = a
                full = tuple(full)
                cur = span(list(base) + mine, len(gens)) if (base or mine) else ()
                if len(span(list(cur) + [full], len(gens))) > len(cur):
                    mine.append(full)
            if mine:
                found[Dset] = mine
                for a in mine:
                    coeffs = []
                    for i, g in enumerate(gens):
                        c = a[i]
                        if not c.is_zero():
                            for j in g.I:
                                if j not in Dset:
                                    c = c * s_sym(j)
                        coeffs.append(c)
                    deg = tuple(-1 if j in Dset else 0 for j in range(1, n + 1))
                    rels.append(Relation(deg, coeffs))
    exact = (not D.gamma) and (D.delta is None or D.delta.is_zero())
    if exact:
        F2 = D.F[2]
        for N in D.N_list:
            if any(not all(a.is_zero() for a in (N @ (N @ v))) for v in F2.basis):
                exact = False
    note = "exact" if exact else "containment-only"
    return Presentation(n, gens, rels, exact, note)


def relation_vector_check(D, P):
    """Each relation kills the sections identically in z (exact, symbolic)."""
    for r in P.relations:
        tot = (ZERO,) * D.n
        for c, g in zip(r.coeffs, P.generators):
            if c.is_zero():
                continue
            tot = vadd(tot, vscale(c, sigma(D, g.I, g.v)))
        if not all(a.is_zero() for a in tot):
            return False
    return True


# ---------------------------------------------------------------- fibers

def sample_s(j):
    return S(Fraction(1, j + 2), Fraction(1, j + 3))


def sample_z(j):
    return S(Fraction(1, j + 3), Fraction(j + 1, 1))


def point_values(nvars, point=None, stratum=None):
    """Exact s-values: explicit point, or stratum J (s_j = 0 for j in J, sample otherwise)."""
    if point is not None:
        return {j: Scalar.coerce(point[j - 1]) if not isinstance(point[j - 1], Scalar) else point[j - 1]
                for j in range(1, nvars + 1)}
    J = set(stratum or ())
    return {j: (ZERO if j in J else sample_s(j)) for j in range(1, nvars + 1)}


def stratum_of(vals):
    return tuple(j for j, v in sorted(vals.items()) if v.is_zero())


@dataclass
class FiberDescription:
    label: str
    vector_dim: int
    generic_rank: int
    singular: bool
    torus_rank: int = None


def fiber(P, point=None, stratum=None):
    vals = point_values(P.nvars, point, stratum)
    g = len(P.generators)
    if P.relations:
        R = P.matrix().subs(**{f"s{j}": v for j, v in vals.items()})
        r = R.rank()
        Rg = P.matrix().subs(**{f"s{j}": sample_s(j) for j in vals}).rank()
    else:
        r = Rg = 0
    J = stratum_of(vals)
    label = "stratum " + ("{" + ",".join(map(str, J)) + "}" if J else "generic")
    return FiberDescription(label, g - r, g - Rg, r < Rg)


def _sym(name):
    return sympy.Symbol(name)


def singular_locus(P):
    """
    Components of Sing T(F_0 M), T = {(s, v) : sum_g v_g R_{g,r}(s) = 0 for all r}.
    Each component: dict with fixed coordinates and the list of free coordinates.
    """
    if not P.relations:
        return []
    g = len(P.generators)
    n = P.nvars
    R = P.matrix()
    k = len(P.relations)
    gen_rank = R.subs(**{f"s{j}": sample_s(j) for j in range(1, n + 1)}).rank()
    if gen_rank != k:
        raise UnsupportedShape("relations are not generically independent (not a complete intersection)")
    svars = [_sym(f"s{j}") for j in range(1, n + 1)]
    vvars = [_sym(f"v{i}") for i in range(g)]
    eqs = []
    for c in range(k):
        e = sum(vvars[i] * to_sympy(R[i, c]) for i in range(g))
        eqs.append(sympy.expand(e))
    allv = svars + vvars
    Jac = sympy.Matrix([[sympy.diff(e, x) for x in allv] for e in eqs])
    minors = []
    for rows in itertools.combinations(range(k), k):
        for cols in itertools.combinations(range(len(allv)), k):
            m = sympy.expand(Jac.extract(list(rows), list(cols)).det())
            if m != 0:
                minors.append(m)
    system = list(dict.fromkeys(eqs + minors))
    sols = sympy.solve(system, allv, dict=True)
    comps = []
    for sol in sols:
        fixed = {str(x): str(v) for x, v in sol.items()}
        free = [str(x) for x in allv if x not in sol]
        comps.append({"fixed": dict(sorted(fixed.items())), "free": free})
    comps.sort(key=lambda c: (len(c["free"]), sorted(c["fixed"].items())))
    return comps


# ---------------------------------------------------------------- Laurent classification

_ZI = [NAMES.index(f"z{j}") for j in range(1, MAXVARS + 1)]
_SI = [NAMES.index(f"s{j}") for j in range(1, MAXVARS + 1)]
_WI = [NAMES.index("w"), NAMES.index("wb")]


def laurent_terms(x):
    """x = sum coeff * z^a s^b with b possibly negative; coeff depends on w only."""
    x = Scalar.coerce(x)
    if x.is_zero():
        return {}
    dmon = x.den.monoms()
    zs = {tuple(m[i] for i in _ZI + _SI) for m in dmon}
    if len(zs) != 1:
        raise UnsupportedShape(f"denominator of {x} is not a monomial in s times a constant")
    zsd = next(iter(zs))
    if any(zsd[:MAXVARS]):
        raise UnsupportedShape(f"denominator of {x} involves z")
    sd = zsd[MAXVARS:]
    qd = {}
    for m, c in zip(dmon, x.den.coeffs()):
        mm = [0] * len(NAMES)
        for i in _WI:
            mm[i] = m[i]
        qd[tuple(mm)] = c
    q = CTX.from_dict(qd)
    parts = {}
    for which, poly in (("re", x.re), ("im", x.im)):
        for m, c in zip(poly.monoms(), poly.coeffs()):
            za = tuple(int(m[i]) for i in _ZI)
            sb = tuple(int(m[i]) - int(d) for i, d in zip(_SI, sd))
            mm = [0] * len(NAMES)
            for i in _WI:
                mm[i] = m[i]
            d = parts.setdefault((za, sb), {"re": {}, "im": {}})
            d[which][tuple(mm)] = c
    out = {}
    for key, d in parts.items():
        re = CTX.from_dict(d["re"]) if d["re"] else CTX.from_dict({})
        im = CTX.from_dict(d["im"]) if d["im"] else CTX.from_dict({})
        out[key] = Scalar(re, im, q)
    return out


def _monomial(za, sb, skip=()):
    """Scalar z^a s^b over the variables not in skip."""
    out = ONE
    for j, e in enumerate(za, start=1):
        if e and j not in skip:
            out = out * z_sym(j) ** e
    for j, e in enumerate(sb, start=1):
        if e and j not in skip:
            out = out * (s_sym(j) ** e if e > 0 else ONE / s_sym(j) ** (-e))
    return out


@dataclass
class CoordinateTerms:
    """Per coordinate g: exponential rows, linear rows per j, constant row (as Scalars over h-columns)."""
    exponential: list = field(default_factory=list)   # rows (lists of Scalars) that must vanish
    decaying: list = field(default_factory=list)
    quadratic: list = field(default_factory=list)
    linear: dict = field(default_factory=dict)        # j -> row (Scalars, may involve non-J variables)
    constant: tuple = None                            # row (Scalars in non-J variables)


def classify_rows(rows, J, ncols):
    """
    rows[g][k]: Scalar coefficient of column k in coordinate g.  Sort the Laurent terms
    into exponential (some s_j^{-e}, j in J), decaying, quadratic-or-higher in z_J,
    linear in z_J and constant, with the other variables kept symbolically.
    """
    J = set(J)
    out = []
    for row in rows:
        ct = CoordinateTerms()
        buckets = {}
        for k, a in enumerate(row):
            for (za, sb), c in laurent_terms(a).items():
                negJ = any(sb[j - 1] < 0 for j in J)
                posJ = any(sb[j - 1] > 0 for j in J)
                degJ = sum(za[j - 1] for j in J)
                if negJ and posJ:
                    raise UnsupportedShape("mixed-sign s-monomial along the stratum")
                if negJ:
                    kind = ("exp", za, sb)
                elif posJ:
                    kind = ("dec", za, sb)
                elif degJ >= 2:
                    kind = ("quad", za, sb)
                elif degJ == 1:
                    j = next(j for j in J if za[j - 1] == 1)
                    kind = ("lin", j)
                else:
                    kind = ("const",)
                # keep the dependence on the remaining variables inside the coefficient
                if kind[0] in ("lin", "const"):
                    c = c * _monomial(za, sb, skip=J)
                b = buckets.setdefault(kind, [ZERO] * ncols)
                b[k] = b[k] + c
        for kind, r in sorted(buckets.items(), key=lambda t: repr(t[0])):
            if kind[0] == "exp":
                ct.exponential.append(r)
            elif kind[0] == "dec":
                ct.decaying.append(r)
            elif kind[0] == "quad":
                ct.quadratic.append(r)
            elif kind[0] == "lin":
                ct.linear[kind[1]] = r
            else:
                ct.constant = tuple(r)
        if ct.constant is None:
            ct.constant = tuple([ZERO] * ncols)
        out.append(ct)
    return out


def _eval_row(row, zvals, svals, omega):
    out = []
    for a in row:
        b = a.subs(**{f"z{j}": v for j, v in zvals.items()}, **{f"s{j}": v for j, v in svals.items()})
        if b.is_formal():
            b = b.instantiate(omega)
        out.append(b)
    return out


@dataclass
class LimitAnalysis:
    stratum: tuple
    with_derivatives: bool
    labels: list
    ncols: int
    affine: bool
    particular: list           # particular solution (affine case) or zeros
    lattice: list              # Z-basis of the admissible lattice (homogeneous part)
    exp_lattice: list          # Z-basis after the exponential conditions only
    extra: list                # [(h, theta)] bounded classes outside the lattice, with positive relations
    constant_rows: list        # per coordinate, Scalars over columns (symbolic in non-J variables)
    linear_rows: dict          # (g, j) -> row
    empty: bool = False
    zucker: dict = None
    height: int = 10
    notes: list = field(default_factory=list)

    def limit_value(self, g, h):
        """Limit coordinate g for an admissible class h (tuple of ints, affine: without the last 1)."""
        row = self.constant_rows[g]
        tot = row[-1] if self.affine else ZERO
        for k, x in enumerate(h):
            if x:
                tot = tot + row[k] * x
        return tot


def _rows_to_conditions(rows_scalar, ncols, affine):
    """Scalar rows (over columns incl. constant column if affine) -> rational (A, b) with A h = b."""
    A, b = [], []
    for r in rows_scalar:
        for rr in linear_form_rows(r):
            if affine:
                A.append(rr[:-1])
                b.append(-rr[-1])
            else:
                A.append(rr)
                b.append(Fraction(0))
    return A, b


def analyze_limits(rows, J, nvars, ncols, labels, affine=False, omega=None, height=10, zvals=None, svals=None,
                   with_derivatives=True):
    """
    Bounded-limit analysis of coordinates sum_k h_k rows[g][k] (+ rows[g][-1] when affine)
    as z_j -> i infinity for j in J, other coordinates fixed at sample values.
    """
    J = tuple(sorted(J))
    hc = ncols - 1 if affine else ncols
    terms = classify_rows(rows, J, ncols)
    omega = omega or S(1, 1)
    others = [j for j in range(1, nvars + 1) if j not in J]
    zvals = zvals or {j: sample_z(j) for j in others}
    svals = svals or {j: sample_s(j) for j in others}
    # exponential terms must vanish identically
    exp_rows = [r for ct in terms for r in ct.exponential]
    A, b = _rows_to_conditions(exp_rows, ncols, affine)
    p1, L1 = integer_solutions(A, b, hc)
    res = LimitAnalysis(J, with_derivatives, labels, ncols, affine, None, [], L1 or [], [],
                        [ct.constant for ct in terms], {}, height=height)
    for g, ct in enumerate(terms):
        for j, r in ct.linear.items():
            res.linear_rows[(g, j)] = r
    if p1 is None:
        res.empty = True
        return res
    # linear terms, evaluated at the sample point of the other coordinates
    lin_eval = {}
    for (g, j), r in res.linear_rows.items():
        lin_eval[(g, j)] = _eval_row(r, zvals, svals, omega)
    lin_conditions = []
    for (g, j), r in sorted(lin_eval.items()):
        lin_conditions.append(r)
    quad_rows = [r for ct in terms for r in ct.quadratic]
    A2, b2 = _rows_to_conditions(lin_conditions + quad_rows, ncols, affine)
    A2 = A2 + A
    b2 = b2 + b
    p2, L2 = integer_solutions(A2, b2, hc)
    res.particular = p2 if p2 is not None else None
    res.lattice = L2 or []
    # classes bounded through a positive relation among the z_j-coefficients
    Jlist = list(J)
    free_dirs = _complement_directions(L1, res.lattice, hc)
    if Jlist and free_dirs:
        rng = range(-height, height + 1)
        box = itertools.product(rng, repeat=len(free_dirs)) if len(free_dirs) <= 2 else \
            itertools.product(range(-2, 3), repeat=len(free_dirs))
        for t in box:
            h = list(p1)
            for c, d in zip(t, free_dirs):
                h = [x + c * y for x, y in zip(h, d)]
            cvecs = []
            for j in Jlist:
                col = []
                for g in range(len(terms)):
                    r = lin_eval.get((g, j))
                    val = ZERO
                    if r is not None:
                        val = sum((r[k] * h[k] for k in range(hc) if h[k]), ZERO)
                        if affine:
                            val = val + r[-1]
                    col.append(val)
                cvecs.append(col)
            if all(a.is_zero() for col in cvecs for a in col):
                continue
            if any(any(not a.is_zero() for a in r) for r in _quad_eval(terms, h, affine, zvals, svals, omega, hc)):
                continue
            real_rows = _real_rows_of_columns(cvecs)
            theta = positive_kernel_vector(real_rows, len(Jlist))
            if theta is not None:
                res.extra.append((tuple(h), tuple(theta)))
    if not with_derivatives:
        res.zucker = zucker_family(res, terms, lin_eval, Jlist, hc, affine, zvals, svals, omega, free_dirs, p1)
    if p2 is None and not res.extra:
        res.empty = True
    return res


def _quad_eval(terms, h, affine, zvals, svals, omega, hc):
    out = []
    for ct in terms:
        for r in ct.quadratic:
            rr = _eval_row(r, zvals, svals, omega)
            val = sum((rr[k] * h[k] for k in range(hc) if h[k]), ZERO)
            if affine:
                val = val + rr[-1]
            out.append([val])
    return out


def _real_rows_of_columns(cols):
    """Rows of the real-linear map theta -> sum theta_j col_j (cols complex Gaussian)."""
    m = len(cols[0]) if cols else 0
    rows = []
    for g in range(m):
        re = [Scalar.coerce(c[g]).gaussian()[0] for c in cols]
        im = [Scalar.coerce(c[g]).gaussian()[1] for c in cols]
        rows.append(re)
        rows.append(im)
    return rows


def _complement_directions(L1, L2, n):
    """Integer vectors completing a basis of L2 to one of L1 (up to finite index)."""
    if not L1:
        return []
    basis = [list(v) for v in L2]
    out = []
    r = rational_rank(basis) if basis else 0
    for v in L1:
        cand = basis + out + [list(v)]
        rr = rational_rank(cand)
        if rr > r + len(out):
            out.append(list(v))
    return out


def zucker_family(res, terms, lin_eval, Jlist, hc, affine, zvals, svals, omega, free_dirs, p1):
    """
    Continuous limit families through moving classes h0 + l, l in the admissible
    lattice, with z_j = zeta for all j in J and Im zeta -> infinity.
    """
    if not Jlist or not free_dirs:
        return {"exists": False, "families": []}
    fams = []
    for d in free_dirs:
        h0 = [x + y for x, y in zip(p1, d)]
        C = []
        for g in range(len(terms)):
            tot = ZERO
            for j in Jlist:
                r = lin_eval.get((g, j))
                if r is None:
                    continue
                tot = tot + sum((r[k] * h0[k] for k in range(hc) if h0[k]), ZERO)
                if affine:
                    tot = tot + r[-1]
            C.append(tot)
        if all(a.is_zero() for a in C):
            continue
        const = [_eval_row(res.constant_rows[g], zvals, svals, omega) for g in range(len(terms))]
        # sublattice of l with const(l) on the complex line through C
        piv = next(g for g, a in enumerate(C) if not a.is_zero())
        kappa = []
        conds = []
        for l in res.lattice:
            vec_l = [sum((const[g][k] * l[k] for k in range(hc) if l[k]), ZERO) for g in range(len(terms))]
            ratio = vec_l[piv] / C[piv]
            kappa.append(ratio)
            conds.append([vec_l[g] - ratio * C[g] for g in range(len(terms))])
        # keep lattice directions whose image is proportional to C
        good = [k for k, c in enumerate(conds) if all(a.is_zero() for a in c)]
        kap = [kappa[k] for k in good]
        rr = rational_rank(gaussian_rows([[k] for k in kap])) if kap else 0
        c0 = sum((const[piv][k] * h0[k] for k in range(hc) if h0[k]), ZERO)
        fams.append({"h0": tuple(h0), "direction": [str(a) for a in C], "pivot": res.labels[piv],
                     "pivot_index": piv, "base": str(c0),
                     "lattice": [tuple(res.lattice[k]) for k in good], "kappa": [str(k) for k in kap],
                     "real_rank": rr, "continuous": rr == 2})
    return {"exists": any(f["continuous"] for f in fams), "families": fams}


def zucker_witness(fam, target, steps=6, height=10):
    """
    Explicit moving sequence (h_m, zeta_m) with Re zeta_m in [0,1], Im zeta_m increasing,
    and pivot coordinate exactly equal to the target for every m.
    Returns list of (h, zeta) pairs; empty if none found in the height box.
    """
    C0 = _parse(target) if isinstance(target, str) else Scalar.coerce(target)
    out = []
    lat = fam["lattice"]
    kap = [_parse(k) for k in fam["kappa"]]
    Cp = _parse(fam["direction"][fam["pivot_index"]])
    base = _parse(fam["base"])
    for t in itertools.product(range(-height, height + 1), repeat=len(lat)):
        kk = sum((k * c for k, c in zip(kap, t)), ZERO)
        zeta = (C0 - base) / Cp - kk
        re, im = zeta.gaussian()
        if 0 <= re <= 1 and im > 0:
            h = list(fam["h0"])
            for c, l in zip(t, lat):
                h = [x + c * y for x, y in zip(h, l)]
            out.append((tuple(h), zeta))
    out.sort(key=lambda p: p[1].gaussian()[1])
    return out[-steps:]


def _parse(text):
    from .exact import parse_scalar
    return parse_scalar(text)


# ---------------------------------------------------------------- integral points of T

def coordinate_rows(D, P=None, with_derivatives=True):
    """Rows of Q(sigma_g(z), h) over h for the coordinates of T (or the Zucker coordinates)."""
    if with_derivatives:
        P = P or f0m_presentation(D)
        fam = [(g.I, g.v, g.label) for g in P.generators]
    else:
        fam = [((), v, f"f{k}") for k, v in enumerate(D.F[0].basis)]
    rows = []
    for Iset, v, lab in fam:
        sv = sigma(D, Iset, v)
        rows.append(list(D.Q.T @ sv))
    return rows, [lab for _, _, lab in fam]


def tz_limit_points(D, stratum=None, with_derivatives=True, height_bound=10, P=None):
    J = tuple(sorted(stratum)) if stratum is not None else tuple(range(1, D.nvars + 1))
    rows, labels = coordinate_rows(D, P, with_derivatives)
    return analyze_limits(rows, J, D.nvars, D.n, labels, False, D.omega_value(), height_bound,
                          with_derivatives=with_derivatives)


def quotient_fiber(D, point=None, stratum=None, height_bound=10, P=None):
    """(torus_rank, vector_dim) of T/T_Z over a point or stratum."""
    P = P or f0m_presentation(D)
    vals = point_values(D.nvars, point, stratum)
    J = stratum_of(vals)
    fd = fiber(P, point, stratum)
    la = tz_limit_points(D, J, True, height_bound, P)
    others = [j for j in range(1, D.nvars + 1) if j not in J]
    zvals = {j: sample_z(j) for j in others}
    svals = {j: vals[j] for j in others}
    om = D.omega_value()
    const = [_eval_row(r, zvals, svals, om) for r in la.constant_rows]
    images = []
    for l in la.lattice:
        images.append([sum((const[g][k] * l[k] for k in range(D.n) if l[k]), ZERO) for g in range(len(const))])
    if images:
        cplx = Matrix([list(v) for v in images], len(const)).rank()
        real = rational_rank(gaussian_rows(images))
    else:
        cplx = real = 0
    out = {"torus_rank": real, "vector_dim": fd.vector_dim - cplx, "fiber_dim": fd.vector_dim,
           "lattice_rank": len(la.lattice), "span_dim": cplx, "injective": real == len(la.lattice),
           "compact": real == 2 * cplx, "stratum": list(J)}
    return out


# ---------------------------------------------------------------- monodromy

def monodromy_analysis(T, F0_rank=None):
    rep = Report("monodromy")
    n = T.nrows
    M = sympy.Matrix([[to_sympy(T[i, j]) for j in range(n)] for i in range(n)])
    x = sympy.Symbol("x")
    cp = M.charpoly(x).as_expr()
    factors = sympy.factor_list(cp, x)[1]
    orders = []
    roots = []
    for f, e in factors:
        deg = sympy.degree(f, x)
        k = None
        for m in range(1, 4 * deg * deg + 3):
            if sympy.totient(m) == deg and sympy.rem(sympy.cyclotomic_poly(m, x), f, x) == 0 and \
                    sympy.Poly(sympy.cyclotomic_poly(m, x), x).monic() == sympy.Poly(f, x).monic():
                k = m
                break
        if k is None:
            raise NotQuasiUnipotent(f"factor {f} of the characteristic polynomial is not cyclotomic")
        orders.append(k)
        for a in range(k):
            if math.gcd(a, k) == 1:
                roots.extend([Fraction(a, k)] * e)
    order = 1
    for k in orders:
        order = order * k // math.gcd(order, k)
    rep.data["charpoly"] = str(sympy.expand(cp))
    rep.data["order"] = order
    rep.data["eigenvalues"] = [f"exp(2 pi i * {r})" for r in sorted(roots)]
    # residues in (-1, 0]: eigenvalue exp(2 pi i a) -> residue -a mod 1 chosen in (-1, 0]
    res = []
    for r in sorted(roots):
        a = -r
        while a <= -1:
            a += 1
        while a > 0:
            a -= 1
        res.append(a)
    rep.data["residues"] = [str(a) for a in res]
    Id = Matrix.identity(n)
    TI = T - Id
    inv_rows = [[Fraction(*TI[i, j].gaussian()[0].as_integer_ratio()) for j in range(n)] for i in range(n)]
    inv = integer_kernel(inv_rows, n)
    rep.data["invariant_lattice"] = inv
    det = TI.det()
    rep.data["det(T-id)"] = str(det)
    unip = order == 1
    rep.data["unipotent"] = unip
    g = F0_rank if F0_rank is not None else n // 2
    if not inv:
        rep.data["fiber"] = f"C^{g}"
    else:
        rep.data["fiber"] = "contains a torus from the invariant lattice"
    rep.add("quasi-unipotent", True, f"order {order}")
    rep.add("invariants", True, f"rank {len(inv)}")
    return rep
