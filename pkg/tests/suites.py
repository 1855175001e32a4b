"""Property suites shared by the module tests and the acceptance tests.  Each returns a list of failures."""

import itertools

from hodge_neron.exact import Matrix, Subspace, S, ONE, ZERO, unit, vis_zero
from hodge_neron.orbit import limit_triple
from hodge_neron.sl2 import (r_const, C_const, primitive_decompose, solve_w_system, forward_w, w_block)
from helpers import rng, rand_gauss, scenario

GOLDEN_ORBITS = ("example2", "example3", "torsion")


def r_recursions(lmax=12):
    bad = []
    for l in range(lmax + 1):
        for b in range(l + 1):
            for a in range(b + 1):
                if r_const(a + 1, b, l) != r_const(a, b, l) * r_const(1, b - a, l):
                    bad.append(("a-step", a, b, l))
            if b < l and r_const(1, b + 1, l) != r_const(1, b, l) + (l - 2 * b):
                bad.append(("b-step", b, l))
    return bad


def golden_strings():
    """(name, N, N+, v, l) for primitive v of Y-weight -l in every golden orbit."""
    out = []
    for name in GOLDEN_ORBITS:
        D = scenario(name).orbit
        T = limit_triple(D, [1] * D.nvars)
        n = D.n
        for l in range(0, n + 1):
            E = Subspace((T.Y - Matrix.identity(n).scale(S(-l))).kernel(), n)
            P = E.intersect(Subspace(T.N.kernel(), n))
            for v in P.basis:
                out.append((name, T, v, l))
    return out


def r_string_identity():
    bad = []
    strings = golden_strings()
    for name, T, v, l in strings:
        for b in range(l + 1):
            for a in range(b + 1):
                lhs = T.N.power(a) @ (T.Nplus.power(b) @ v)
                rhs = T.Nplus.power(b - a) @ v
                c = r_const(a, b, l)
                if lhs != tuple(x * c for x in rhs):
                    bad.append((name, a, b, l))
    return bad, len(strings)


def recomposition():
    bad = []
    for name in GOLDEN_ORBITS:
        D = scenario(name).orbit
        T = limit_triple(D, [1] * D.nvars)
        for k in range(D.n):
            h = unit(D.n, k)
            try:
                dec = primitive_decompose(h, T, D.split, -1)
            except Exception as exc:        # InconsistentTriple
                bad.append((name, k, str(exc)))
                continue
            if dec.recompose(T.Nplus) != h:
                bad.append((name, k, "recompose"))
    return bad


def c_normalization(pmin=-3, pmax=1):
    bad = []
    for p in range(pmin, pmax + 1):
        for q in range(pmin, pmax + 1):
            l = -1 - p - q
            for b in range(0, max(l, -1) + 1):
                if C_const(p, q, b, 0) * r_const(b, b, l) != 1:
                    bad.append((p, q, b))
    return bad


def square_blocks(pmin=-3, pmax=1):
    out = []
    for p in range(pmin, pmax + 1):
        for q in range(pmin, pmax + 1):
            if p + q > -1:
                continue
            eqs, unk, A = w_block(p, q)
            if len(eqs) == len(unk):
                out.append((p, q))
    return out


def random_w_instance(seed):
    r = rng(seed)
    blocks = square_blocks()
    chosen = r.sample(blocks, r.randint(1, 4))
    hn = {pq: r.randint(1, 2) for pq in chosen}
    g = {}
    for (p, q), d in hn.items():
        eqs, unk, A = w_block(p, q)
        for b in eqs:
            g[(p, q, b)] = tuple(rand_gauss(r) for _ in range(d))
    return hn, g


def w_roundtrip(count=100):
    """(roundtrip failures, determinant-modulus failures)."""
    bad_rt, bad_det = [], []
    for seed in range(count):
        hn, g = random_w_instance(seed)
        sol = solve_w_system(hn, g)
        back = forward_w(hn, sol.w)
        for key, v in g.items():
            if back.get(key) != v:
                bad_rt.append((seed, key))
        for pq, d in sol.determinants.items():
            if d * d.conj() != ONE:
                bad_det.append((seed, pq, str(d)))
    return bad_rt, bad_det
