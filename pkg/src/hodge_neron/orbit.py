"""
Nilpotent orbits in normal form  Phi(z) = e^{i delta} e^{sum z_j N_j} e^{Gamma(s)} F,
the sections sigma_{I,v}, the quantities Z(y,h) and B(z,h), and numerical scans.

Exact mode keeps z_j and s_j as independent symbols.  Scan mode is floating
with omega instantiated; large factors 1/s^I are carried in log space.
"""

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.linalg import null_space

from .exact import (Matrix, Subspace, Scalar, ZERO, ONE, I, S, DEFAULT_OMEGA, z_sym, s_sym,
                    nilpotent_exp, vscale, vadd, zero_vec, unit, to_numpy, maxnorm,
                    numeric_exp_nilpotent, dot)
from .filtrations import Filtration, filtration_from_grading, weight_filtration
from .hodge import PureHodgeData, qform, ipow, lowers_first_index, mhs_from_splitting, components
from .sl2 import grading_Y, complete_sl2, triple_from_splitting, primitive_decompose, Sl2Triple
from .errors import PreconditionViolated, NoTriple, InconsistentTriple
from .report import Report


@dataclass
class NilpotentOrbitData:
    H: PureHodgeData
    N_list: list
    split: dict
    delta: Matrix = None
    gamma: dict = field(default_factory=dict)     # multi-index tuple -> Matrix coefficient of s^alpha
    omega: Scalar = None                          # pinned omega, None = formal
    name: str = ""

    @property
    def n(self):
        return self.H.rank

    @property
    def nvars(self):
        return len(self.N_list)

    @property
    def Q(self):
        return self.H.Q

    @property
    def F(self):
        return self.H.F

    def omega_value(self):
        return self.omega if self.omega is not None else DEFAULT_OMEGA

    def omega_complex(self):
        a, b = self.omega_value().gaussian()
        return complex(float(a), float(b))

    def is_formal(self):
        mats = [self.Q] + list(self.N_list) + list(self.gamma.values())
        if self.delta is not None:
            mats.append(self.delta)
        if any(M.is_formal() for M in mats):
            return True
        return any(a.is_formal() for U in self.split.values() for v in U.basis for a in v)

    def instantiate(self, omega=None):
        om = omega or self.omega_value()
        sp = {k: U.instantiate(om) for k, U in self.split.items()}
        return NilpotentOrbitData(self.H.instantiate(om), [N.instantiate(om) for N in self.N_list], sp,
                                  self.delta.instantiate(om) if self.delta is not None else None,
                                  {a: G.instantiate(om) for a, G in self.gamma.items()}, om, self.name)

    def N_sum(self, y):
        out = Matrix.zeros(self.n)
        for c, N in zip(y, self.N_list):
            out = out + N.scale(c)
        return out


def orbit_from_splitting(Q, N_list, pieces, delta=None, gamma=None, omega=None, name=""):
    n = Q.nrows
    M = mhs_from_splitting(n, pieces)
    H = PureHodgeData(n, Q, M.F, -1)
    return NilpotentOrbitData(H, list(N_list), M.splitting, delta, dict(gamma or {}), omega, name)


# ---------------------------------------------------------------- exact period map

def gamma_matrix(D, s=None):
    """Gamma(s) with symbolic s (s=None) or exact values s = {j: Scalar}."""
    out = Matrix.zeros(D.n)
    for alpha, G in D.gamma.items():
        c = ONE
        for j, e in enumerate(alpha, start=1):
            if e:
                c = c * ((s[j] if s is not None else s_sym(j)) ** e)
        out = out + G.scale(c)
    return out


def period_operator(D, z=None):
    """e^{i delta} e^{sum z_j N_j} e^{Gamma(s)} with z_j, s_j symbolic (or z given exactly)."""
    n = D.n
    zs = [z[j] if z is not None else z_sym(j + 1) for j in range(D.nvars)]
    X = D.N_sum(zs)
    E = nilpotent_exp(X)
    if D.gamma:
        E = E @ nilpotent_exp(gamma_matrix(D))
    if D.delta is not None and not D.delta.is_zero():
        E = nilpotent_exp(D.delta.scale(I)) @ E
    return E


def eval_period(D, z=None):
    """The filtration Phi(z) = e^{X(z)} F (exact; z symbolic by default)."""
    return D.F.apply(period_operator(D, z))


def n_product(D, Iset):
    out = Matrix.identity(D.n)
    for j in sorted(Iset):
        out = D.N_list[j - 1] @ out
    return out


def sigma(D, Iset, v, z=None):
    """sigma_{I,v}(z) = e^{X(z)} prod_{j in I} (N_j/s_j) v, exact and symbolic in s."""
    Iset = tuple(sorted(Iset))
    if not D.F[len(Iset)].contains(v):
        raise PreconditionViolated(f"v is not in F^{len(Iset)}")
    u = n_product(D, Iset) @ tuple(v)
    c = ONE
    for j in Iset:
        c = c / s_sym(j)
    return vscale(c, period_operator(D, z) @ u)


def pairing_row(D, Iset, v, z=None):
    """Row vector r with Q(sigma_{I,v}(z), h) = r . h."""
    sv = sigma(D, Iset, v, z)
    return tuple(D.Q.T @ sv)


def index_sets(D, with_derivatives=True):
    out = [()]
    if with_derivatives:
        for k in range(1, D.nvars + 1):
            out.extend(itertools.combinations(range(1, D.nvars + 1), k))
    return out


def section_family(D, with_derivatives=True):
    """All (I, v) with v in the pinned basis of F^{|I|} and N_I v != 0."""
    fam = []
    for Iset in index_sets(D, with_derivatives):
        NI = n_product(D, Iset)
        for v in D.F[len(Iset)].basis:
            if not all(a.is_zero() for a in NI @ v):
                fam.append((Iset, v))
    return fam


# ---------------------------------------------------------------- validation

def _numeric_hodge_check(D, z, tol=1e-9):
    """Hodge decomposition and positivity of Phi(z) in floating arithmetic."""
    om = D.omega_complex()
    E = numeric_period(D, z)
    G = to_numpy(D.Q, om)
    lo, hi = D.F.range
    n = D.n
    comps = {}
    for p in range(lo - 1, hi + 2):
        q = -1 - p
        A = E @ to_numpy(Matrix.from_columns(D.F[p].basis, n), om) if D.F[p].dim else np.zeros((n, 0))
        B = E @ to_numpy(Matrix.from_columns(D.F[q].basis, n), om) if D.F[q].dim else np.zeros((n, 0))
        if A.shape[1] == 0 or B.shape[1] == 0:
            continue
        K = null_space(np.hstack([A, -B.conj()]), rcond=tol)
        if K.shape[1]:
            comps[(p, q)] = A @ K[:A.shape[1], :]
    total = sum(U.shape[1] for U in comps.values())
    if total != n:
        return False, f"Hodge components of dimension {total} != {n}"
    allv = np.hstack(list(comps.values()))
    if np.linalg.matrix_rank(allv, tol=1e-8) != n:
        return False, "Hodge components are not a direct sum"
    for (p, q), U in comps.items():
        c = 1j ** ((p - q) % 4)
        K = c * (U.T @ G @ U.conj())
        # u^H K u with u = conj(coefficients); K is Hermitian for a polarization
        if np.max(np.abs(K - K.conj().T)) > 1e-7 * max(1.0, np.max(np.abs(K))):
            return False, f"Hodge form on H^({p},{q}) is not Hermitian"
        ev = np.linalg.eigvalsh((K + K.conj().T) / 2)
        if ev.min() <= 0:
            return False, f"Hodge form on H^({p},{q}) has eigenvalue {ev.min():.3g}"
    return True, ""


def validate_orbit(D, ys=(2, 4, 8), xs=(Fraction(0), Fraction(1, 3)), tol=1e-9):
    rep = Report(f"validate {D.name}".strip())
    n = D.n
    Q = D.Q
    rep.add("alternating", (Q.T + Q).is_zero())
    rep.add("nondegenerate", not Q.det().is_zero(), f"det = {Q.det()}")
    Ns = D.N_list
    rep.add("commuting", all((A @ B - B @ A).is_zero() for A in Ns for B in Ns))
    rep.add("infinitesimal isotropy", all((N.T @ Q + Q @ N).is_zero() for N in Ns),
            "Q(Nx,y) + Q(x,Ny) = 0")
    lo, hi = D.F.range
    trans = all(D.F[p - 1].contains_space(D.F[p].image(N)) for N in Ns for p in range(lo, hi + 2))
    rep.add("transversality", trans, "N_j F^p in F^{p-1}")
    rep.add("gamma in q", all(lowers_first_index(G, D.split) for G in D.gamma.values()),
            f"{len(D.gamma)} coefficient(s)")
    rep.add("horizontality residue", horizontality_residue(D), "[N_j, e^Gamma] = 0 along s_j = 0")
    ok, why = True, ""
    for y in ys:
        for x in xs:
            z = np.array([complex(float(x), float(y))] * D.nvars)
            good, msg = _numeric_hodge_check(D, z, tol)
            if not good:
                ok, why = False, f"z = {x}+{y}i: {msg}"
                break
        if not ok:
            break
    rep.add("positivity", ok, why or f"Hodge form positive at Im z in {list(ys)}")
    return rep


def horizontality_residue(D):
    if not D.gamma:
        return True
    Eg = nilpotent_exp(gamma_matrix(D))
    for j, N in enumerate(D.N_list, start=1):
        C = N @ Eg - Eg @ N
        C0 = C.subs(**{f"s{j}": ZERO})
        if not C0.is_zero():
            return False
    return True


# ---------------------------------------------------------------- numerics

def numeric_gamma(D, s):
    om = D.omega_complex()
    out = np.zeros((D.n, D.n), dtype=complex)
    for alpha, G in D.gamma.items():
        c = 1.0 + 0j
        for j, e in enumerate(alpha):
            c *= s[j] ** e
        out = out + c * to_numpy(G, om)
    return out


def numeric_period(D, z):
    """Floating e^{i delta} e^{sum z_j N_j} e^{Gamma(s)}, s_j = e^{2 pi i z_j}."""
    om = D.omega_complex()
    z = np.asarray(z, dtype=complex)
    X = sum((zj * to_numpy(N, om) for zj, N in zip(z, D.N_list)), np.zeros((D.n, D.n), dtype=complex))
    E = numeric_exp_nilpotent(X)
    if D.gamma:
        s = np.exp(2j * np.pi * z)
        E = E @ numeric_exp_nilpotent(numeric_gamma(D, s))
    if D.delta is not None and not D.delta.is_zero():
        E = numeric_exp_nilpotent(1j * to_numpy(D.delta, om)) @ E
    return E


def z_norm(D, y, h):
    """Z(y,h) = max_k ||(sum y_j N_j)^k h|| in the max-modulus norm."""
    om = D.omega_complex()
    N = sum((float(c) * to_numpy(M, om) for c, M in zip(y, D.N_list)), np.zeros((D.n, D.n), dtype=complex))
    v = np.asarray(to_numpy(tuple(h), om) if not isinstance(h, np.ndarray) else h, dtype=complex)
    best = maxnorm(v)
    for _ in range(D.n):
        v = N @ v
        best = max(best, maxnorm(v))
    return best


def log_b_norm(D, z, h, with_derivatives=True, family=None):
    """log B(z,h); |1/s_j| = e^{2 pi y_j} is kept in log space."""
    om = D.omega_complex()
    z = np.asarray(z, dtype=complex)
    E = numeric_period(D, z)
    G = to_numpy(D.Q, om)
    hv = np.asarray(to_numpy(tuple(h), om) if not isinstance(h, np.ndarray) else h, dtype=complex)
    Gh = G @ hv
    best = -math.inf
    for Iset, v in (family or section_family(D, with_derivatives)):
        u = to_numpy(n_product(D, Iset) @ v, om)
        val = abs((E @ u) @ Gh)
        if val == 0.0:
            continue
        lg = math.log(val) + 2 * math.pi * sum(z[j - 1].imag for j in Iset)
        best = max(best, lg)
    return best


def b_norm(D, z, h, with_derivatives=True):
    lg = log_b_norm(D, z, h, with_derivatives)
    if lg == -math.inf:
        return 0.0
    return math.exp(lg) if lg < 700 else math.inf


def _level_points(level, nvars, spreads=(1, 2)):
    pts = set()
    for mult in itertools.product(spreads, repeat=nvars):
        if min(mult) != 1:
            continue
        pts.add(tuple(level * m for m in mult))
    return sorted(pts)


def plateau(values_by_level, factor=1.1):
    levels = sorted(values_by_level)
    if len(levels) < 2:
        return True
    top, mid = values_by_level[levels[-1]], values_by_level[levels[-2]]
    return top <= factor * mid + 1e-12


def first_plateau_level(values_by_level, factor=1.1):
    levels = sorted(values_by_level)
    for i in range(1, len(levels)):
        if all(values_by_level[levels[k]] <= factor * values_by_level[levels[k - 1]] + 1e-12
               for k in range(i, len(levels))):
            return levels[i - 1]
    return None


def estimate_scan(D, h_set=None, y_levels=(10, 20, 40, 80), x_samples=(0, Fraction(1, 3), Fraction(2, 3)),
                  with_derivatives=True, factor=1.1):
    """Z(y,h)/B(z,h) over the grid; bounded if the top-level max is within factor of the mid level."""
    rep = Report(f"estimate-scan {D.name}".strip())
    if h_set is None:
        h_set = [unit(D.n, k) for k in range(D.n)]
    fam = section_family(D, with_derivatives)
    rows = []
    by_level = {}
    for lev in y_levels:
        worst = 0.0
        for y in _level_points(lev, D.nvars):
            for xs in itertools.product(x_samples, repeat=D.nvars):
                z = np.array([complex(float(x), float(yy)) for x, yy in zip(xs, y)])
                for k, h in enumerate(h_set):
                    Zv = z_norm(D, y, h)
                    lb = log_b_norm(D, z, h, with_derivatives, fam)
                    r = 0.0 if Zv == 0 else (math.inf if lb == -math.inf else math.exp(math.log(Zv) - lb))
                    worst = max(worst, r)
        by_level[lev] = worst
        rows.append({"y": lev, "max_ratio": worst})
    bounded = plateau(by_level, factor) and all(math.isfinite(v) for v in by_level.values())
    rep.data.update({"levels": rows, "x_samples": [str(x) for x in x_samples],
                     "with_derivatives": with_derivatives, "factor": factor,
                     "C": max(by_level.values()) if by_level else 0.0,
                     "alpha": first_plateau_level(by_level, factor)})
    rep.add("bounded", bounded, f"top/mid = {_ratio(by_level)} (<= {factor})")
    return rep


def _ratio(by_level):
    levels = sorted(by_level)
    if len(levels) < 2 or by_level[levels[-2]] == 0:
        return "n/a"
    return f"{by_level[levels[-1]] / by_level[levels[-2]]:.6f}"


def opnorm(A):
    """Operator norm induced by the max-modulus norm (max absolute row sum)."""
    A = np.asarray(A)
    return float(np.max(np.sum(np.abs(A), axis=1))) if A.size else 0.0


def limit_triple(D, y):
    """(N(y), Y, N+(y)) for rational y, exact."""
    Dn = D if not D.is_formal() else D.instantiate()
    Y = grading_Y(Dn.split, -1)
    N = Dn.N_sum([S(Fraction(c)) for c in y])
    return Sl2Triple(N, Y, complete_sl2(N, Y))


def nplus_decay(D, y_levels=(10, 20, 40, 80), spreads=(1, 2, 4), factor=1.1):
    """||N+(y)|| * y_n over the grid."""
    rep = Report(f"nplus-decay {D.name}".strip())
    om = D.omega_complex()
    by_level = {}
    rows = []
    for lev in y_levels:
        worst = 0.0
        for y in _level_points(lev, D.nvars, spreads):
            T = limit_triple(D, y)
            val = opnorm(to_numpy(T.Nplus, om)) * min(y)
            worst = max(worst, val)
        by_level[lev] = worst
        rows.append({"y": lev, "max_product": worst})
    rep.data.update({"levels": rows, "spreads": list(spreads), "factor": factor})
    rep.add("bounded", plateau(by_level, factor), f"top/mid = {_ratio(by_level)} (<= {factor})")
    return rep


def adn_decay(D, y_levels=(1, 2, 4, 8), x=0.0, m=None):
    """max_k ||(ad N)^k e^{Gamma(s)}|| / sum_j y_j^m e^{-2 pi y_j} on a grid with y_1 >= ... >= y_n."""
    rep = Report(f"adN-decay {D.name}".strip())
    om = D.omega_complex()
    n = D.n
    m = D.n if m is None else m
    Ns = [to_numpy(N, om) for N in D.N_list]
    by_level = {}
    for lev in y_levels:
        worst = 0.0
        for y in _level_points(lev, D.nvars):
            y = tuple(sorted(y, reverse=True))
            z = np.array([complex(x, yy) for yy in y])
            s = np.exp(2j * np.pi * z)
            Eg = numeric_exp_nilpotent(numeric_gamma(D, s))
            N = sum(yy * M for yy, M in zip(y, Ns))
            A = Eg
            bound = sum(yy ** m * math.exp(-2 * math.pi * yy) for yy in y)
            for _ in range(2 * n):
                A = N @ A - A @ N
                worst = max(worst, opnorm(A) / bound)
        by_level[lev] = worst
    rep.data.update({"levels": [{"y": k, "max_ratio": v} for k, v in sorted(by_level.items())], "m": m})
    rep.add("bounded", max(by_level.values()) < math.inf and plateau(by_level), "")
    return rep


def primitive_bound_scan(D, h_set=None, y_levels=(1, 2, 4, 8, 16), spreads=(1, 2), dmax=None):
    """
    Fit max||h^{p,q}(b)|| <= C ||N+||^d Z(N,h): choose the least d for which the
    ratio is stable between the two largest levels, report C.
    """
    rep = Report(f"primitive-bound {D.name}".strip())
    Dn = D if not D.is_formal() else D.instantiate()
    om = Dn.omega_complex()
    if h_set is None:
        h_set = [unit(Dn.n, k) for k in range(Dn.n)]
    dmax = Dn.n if dmax is None else dmax
    samples = []
    for lev in y_levels:
        for y in _level_points(lev, Dn.nvars, spreads):
            T = limit_triple(Dn, y)
            npn = opnorm(to_numpy(T.Nplus, om))
            for h in h_set:
                dec = primitive_decompose(h, T, Dn.split, -1)
                hmax = max((maxnorm(to_numpy(v, om)) for v in dec.components.values()), default=0.0)
                Zv = z_norm(Dn, y, h)
                samples.append((lev, hmax, npn, Zv))
    best = None
    for d in range(0, dmax + 1):
        by_level = {}
        for lev, hmax, npn, Zv in samples:
            den = (npn ** d) * Zv
            r = hmax / den if den > 0 else (0.0 if hmax == 0 else math.inf)
            by_level[lev] = max(by_level.get(lev, 0.0), r)
        if all(math.isfinite(v) for v in by_level.values()) and plateau(by_level):
            best = (d, max(by_level.values()))
            break
    rep.data.update({"d": best[0] if best else None, "C": best[1] if best else None})
    rep.add("stable fit", best is not None, f"d = {best[0]}, C = {best[1]:.6g}" if best else "no d works")
    return rep
