"""
Increasing/decreasing filtrations, monodromy weight filtrations and
relative weight filtrations, with exact axiom checkers.
"""

import random
from fractions import Fraction

from .exact import Matrix, Subspace, ONE, ZERO, lin_comb, vadd, vscale, zero_vec, unit
from .errors import NotNilpotent, NotExists, PreconditionViolated, NoSolution


class Filtration:
    """
    Filtration of K^n.  `steps` maps index -> Subspace on a contiguous range.
    Increasing: W_k = 0 below the range, full above it.
    Decreasing: F^p = full below the range, 0 above it.
    """

    def __init__(self, n, steps, direction="increasing"):
        if direction not in ("increasing", "decreasing"):
            raise ValueError(direction)
        self.n = n
        self.direction = direction
        steps = {k: v for k, v in steps.items()}
        if steps:
            lo, hi = min(steps), max(steps)
            filled = {}
            last = None
            rng = range(lo, hi + 1) if direction == "increasing" else range(hi, lo - 1, -1)
            for k in rng:
                if k in steps:
                    last = steps[k]
                filled[k] = last
            steps = filled
        self._steps = _trim(steps, n, direction)
        self._check_nested()

    def _check_nested(self):
        ks = sorted(self._steps)
        for a, b in zip(ks, ks[1:]):
            small, big = (self._steps[a], self._steps[b]) if self.direction == "increasing" else (
                self._steps[b], self._steps[a])
            if not big.contains_space(small):
                raise ValueError(f"filtration not nested at {a},{b}")

    @property
    def range(self):
        if not self._steps:
            return (0, -1)
        return (min(self._steps), max(self._steps))

    def __getitem__(self, k):
        if k in self._steps:
            return self._steps[k]
        lo, hi = self.range
        if self.direction == "increasing":
            if not self._steps:
                return Subspace.full(self.n)
            return Subspace.zero(self.n) if k < lo else Subspace.full(self.n)
        if not self._steps:
            return Subspace.full(self.n)
        return Subspace.full(self.n) if k < lo else Subspace.zero(self.n)

    def indices(self, pad=1):
        lo, hi = self.range
        return range(lo - pad, hi + pad + 1)

    def gr_dim(self, k):
        if self.direction == "increasing":
            return self[k].dim - self[k - 1].dim
        return self[k].dim - self[k + 1].dim

    def jumps(self):
        return [k for k in self.indices() if self.gr_dim(k)]

    def shift(self, s):
        """Shift convention: increasing W[s]_k = W_{k-s}; decreasing F[s]^p = F^{p+s}."""
        if self.direction == "increasing":
            return Filtration(self.n, {k + s: v for k, v in self._steps.items()}, self.direction)
        return Filtration(self.n, {k - s: v for k, v in self._steps.items()}, self.direction)

    def __eq__(self, other):
        if not isinstance(other, Filtration) or other.n != self.n or other.direction != self.direction:
            return False
        lo = min(self.range[0], other.range[0]) - 1
        hi = max(self.range[1], other.range[1]) + 1
        return all(self[k] == other[k] for k in range(lo, hi + 1))

    def map(self, fn):
        return Filtration(self.n, {k: fn(v) for k, v in self._steps.items()}, self.direction)

    def apply(self, A):
        return self.map(lambda U: U.image(A))

    def conj(self):
        return self.map(lambda U: U.conj())

    def instantiate(self, omega):
        return self.map(lambda U: U.instantiate(omega))

    def restrict(self, U):
        return self.map(lambda V: V.intersect(U))

    def as_dims(self):
        return {k: self[k].dim for k in self.indices(0)}

    def __repr__(self):
        sym = "W" if self.direction == "increasing" else "F"
        parts = [f"{sym}{k}:{self[k].dim}" for k in self.indices(0)]
        return f"Filtration({self.direction}; " + ", ".join(parts) + ")"


def _trim(steps, n, direction):
    if not steps:
        return {}
    ks = sorted(steps)
    if direction == "increasing":
        while len(ks) > 1 and steps[ks[0]].dim == 0 and steps[ks[1]].dim == 0:
            ks.pop(0)
        while len(ks) > 1 and steps[ks[-1]].dim == n and steps[ks[-2]].dim == n:
            ks.pop()
        if steps[ks[-1]].dim != n:
            raise ValueError("increasing filtration must end at the full space")
    else:
        while len(ks) > 1 and steps[ks[-1]].dim == 0 and steps[ks[-2]].dim == 0:
            ks.pop()
        while len(ks) > 1 and steps[ks[0]].dim == n and steps[ks[1]].dim == n:
            ks.pop(0)
        if steps[ks[0]].dim != n:
            raise ValueError("decreasing filtration must start at the full space")
    return {k: steps[k] for k in ks}


def filtration_from_grading(n, pieces, direction="increasing"):
    """pieces: dict weight -> list of vectors.  W_k = sum of pieces with weight <= k."""
    if not pieces:
        return Filtration(n, {0: Subspace.full(n)}, direction)
    ks = sorted(pieces)
    lo, hi = ks[0], ks[-1]
    steps = {}
    if direction == "increasing":
        acc = []
        steps[lo - 1] = Subspace.zero(n)
        for k in range(lo, hi + 1):
            acc = acc + list(pieces.get(k, []))
            steps[k] = Subspace(acc, n)
    else:
        acc = []
        steps[hi + 1] = Subspace.zero(n)
        for k in range(hi, lo - 1, -1):
            acc = acc + list(pieces.get(k, []))
            steps[k] = Subspace(acc, n)
    return Filtration(n, steps, direction)


# ---------------------------------------------------------------- Jordan strings

def jordan_chains(N):
    """
    Jordan strings of a nilpotent N as a list of (top, length), longest first.
    Tops of length-L strings complement K_{L-1} + N(K_{L+1}) in K_L, where
    K_j = ker N^j; candidates are taken greedily from the canonical basis of K_L.
    """
    idx = N.nilpotency_index()
    if idx is None:
        raise NotNilpotent("operator is not nilpotent")
    n = N.nrows
    if idx == 1:
        return [(unit(n, k), 1) for k in range(n)]
    powers = [Matrix.identity(n)]
    for _ in range(idx + 1):
        powers.append(powers[-1] @ N)
    K = [Subspace(powers[j].kernel(), n) for j in range(idx + 2)]
    chains = []
    for L in range(idx, 0, -1):
        base = K[L - 1] + K[L + 1].image(N)
        cur = base
        for v in K[L].basis:
            if not cur.contains(v):
                chains.append((v, L))
                cur = cur + Subspace([v], n)
    return chains


def weight_filtration(N, center=0):
    n = N.nrows
    pieces = {}
    for top, L in jordan_chains(N):
        v = top
        for i in range(L):
            pieces.setdefault(center + L - 1 - 2 * i, []).append(v)
            v = N @ v
    return filtration_from_grading(n, pieces)


def is_weight_filtration(N, W, center=0):
    n = N.nrows
    lo, hi = W.range
    lo, hi = lo - 2, hi + 2
    for k in range(lo, hi + 1):
        if not W[k - 2].contains_space(W[k].image(N)):
            return False
    Nk = Matrix.identity(n)
    for k in range(1, n + 1):
        Nk = Nk @ N
        if W.gr_dim(center + k) != W.gr_dim(center - k):
            return False
        target = W[center - k]
        got = W[center + k].image(Nk) + W[center - k - 1]
        if not got.contains_space(target):
            return False
    return W[lo].dim == 0 and W[hi].dim == n


# ---------------------------------------------------------------- relative filtration

def preserves(N, W):
    lo, hi = W.range
    return all(W[k].contains_space(W[k].image(N)) for k in range(lo, hi + 1))


def _complement(U, sub):
    """Greedy complement of `sub` inside U from U's canonical basis."""
    cur = sub
    out = []
    for v in U.basis:
        if not cur.contains(v):
            out.append(v)
            cur = cur + Subspace([v], U.n)
    return out


def relative_weight_filtration(N, W):
    """
    Relative monodromy weight filtration M(N; W), built one W-graded piece at a
    time: strings of Gr^W_k N are lifted so that N^L of the lifted top lands in
    the already-built M on W_{k-1}.  The result is re-verified before returning.
    """
    n = N.nrows
    if N.nilpotency_index() is None:
        raise NotNilpotent("N is not nilpotent")
    if not preserves(N, W):
        raise PreconditionViolated("N does not preserve W")
    jumps = W.jumps()
    Mprev = {}          # weight -> Subspace of V (inside W_{k-1})
    prev = Subspace.zero(n)
    span_lo, span_hi = min(jumps) - n - 1, max(jumps) + n + 1

    def Mget(d, j):
        if j in d:
            return d[j]
        keys = [k for k in d if k <= j]
        return d[max(keys)] if keys else Subspace.zero(n)

    for k in jumps:
        U = W[k]
        C = _complement(U, prev)
        m = len(C)
        basis = C + list(prev.basis)
        B = Matrix.from_columns(basis, n)
        # induced operator on Gr_k in C-coordinates
        cols = []
        for c in C:
            coords = B.solve(N @ c)
            cols.append(coords[:m])
        Ngr = Matrix.from_columns(cols, m)
        pieces = {}
        for top, L in jordan_chains(Ngr):
            u0 = zero_vec(n)
            for a, c in zip(top, C):
                if not a.is_zero():
                    u0 = vadd(u0, vscale(a, c))
            NL = N.power(L)
            target = NL @ u0
            low = Mget(Mprev, k - L - 1)
            # find x in prev with N^L x - y = N^L u0, y in low
            xs = list(prev.basis)
            ys = list(low.basis)
            colsys = [NL @ x for x in xs] + [vscale(-1, y) for y in ys]
            if colsys:
                try:
                    sol = Matrix.from_columns(colsys, n).solve(target)
                except NoSolution:
                    raise NotExists(f"no admissible lift on Gr^W_{k}") from None
            else:
                if any(not t.is_zero() for t in target):
                    raise NotExists(f"no admissible lift on Gr^W_{k}")
                sol = ()
            u = u0
            for a, x in zip(sol[:len(xs)], xs):
                if not a.is_zero():
                    u = vadd(u, vscale(-a, x))
            v = u
            for i in range(L):
                pieces.setdefault(k + L - 1 - 2 * i, []).append(v)
                v = N @ v
        newM = {}
        for j in range(span_lo, span_hi + 1):
            extra = [v for wt, vs in pieces.items() if wt <= j for v in vs]
            newM[j] = Mget(Mprev, j) + Subspace(extra, n)
        Mprev = newM
        prev = U
    steps = {j: Mprev[j] for j in range(span_lo, span_hi + 1)}
    steps[span_hi + 1] = Subspace.full(n)
    M = Filtration(n, steps)
    if not is_relative_weight_filtration(N, W, M):
        raise NotExists("constructed filtration fails the relative axioms")
    return M


def is_relative_weight_filtration(N, W, M):
    n = N.nrows
    lo, hi = M.range
    for j in range(lo - 2, hi + 3):
        if not M[j - 2].contains_space(M[j].image(N)):
            return False
    if M[lo - 1].dim != 0 or M[hi + 1].dim != n:
        return False
    for k in W.jumps():
        Wk, Wk1 = W[k], W[k - 1]

        def grdim(j):
            top = M[j].intersect(Wk)
            bot = M[j - 1].intersect(Wk) + M[j].intersect(Wk1)
            return top.dim - bot.dim

        Nr = Matrix.identity(n)
        for r in range(1, n + 1):
            Nr = Nr @ N
            if grdim(k + r) != grdim(k - r):
                return False
            target = M[k - r].intersect(Wk)
            got = M[k + r].intersect(Wk).image(Nr) + M[k - r - 1].intersect(Wk) + M[k - r].intersect(Wk1)
            if not got.contains_space(target):
                return False
    return True


# ---------------------------------------------------------------- cone constancy

def random_positive(rng, n):
    return [Fraction(rng.randint(1, 9), rng.randint(1, 5)) for _ in range(n)]


def cone_constancy(N_list, trials=8, W=None, seed=0):
    """True iff the (relative) weight filtration agrees across random positive combinations."""
    rng = random.Random(seed)
    if any(N.nilpotency_index() is None for N in N_list):
        return False

    def filt(coeffs):
        Nc = lin_comb(coeffs, N_list)
        if W is None:
            return weight_filtration(Nc, 0)
        try:
            return relative_weight_filtration(Nc, W)
        except (NotExists, PreconditionViolated, NotNilpotent):
            return None

    ref = filt([1] * len(N_list))
    if ref is None:
        return False
    for _ in range(trials):
        f = filt(random_positive(rng, len(N_list)))
        if f is None or f != ref:
            return False
    return True
