"""
Exact scalars and linear algebra over Q(i)(w, wb), plus a small floating backend.

A scalar is (re + i*im) / den with re, im, den rational polynomials in the
generators w, wb (the parameter omega and its conjugate, kept as independent
formal symbols), z1..z4 and s1..s4 (the s_j are treated as independent
symbols; s_j = exp(2 pi i z_j) is only used when evaluating numerically).
The denominator is kept real, so dividing by a scalar multiplies through by
its i-conjugate.  After gcd normalization and making den monic the triple is
canonical, so equality is structural.
"""

from fractions import Fraction
from functools import lru_cache
import cmath
import math

import flint
import numpy as np

from .errors import NotNilpotent, NoSolution

MAXVARS = 4
NAMES = ("w", "wb") + tuple(f"z{j}" for j in range(1, MAXVARS + 1)) + tuple(
    f"s{j}" for j in range(1, MAXVARS + 1))
CTX = flint.fmpq_mpoly_ctx.get(NAMES, "lex")
_GENS = CTX.gens()
_ZERO = CTX.from_dict({})
_ONE = CTX.from_dict({(0,) * len(NAMES): 1})
NV = len(NAMES)


def _swap_w(p):
    # w <-> wb
    return p.compose(_GENS[1], _GENS[0], *_GENS[2:])


def _is_const(p):
    return p.is_constant()


def _const_value(p):
    if p.is_zero():
        return Fraction(0)
    c = p.coeffs()[0]
    return Fraction(int(c.p), int(c.q))


def _fq(x):
    x = Fraction(x)
    return flint.fmpq(x.numerator, x.denominator)


class Scalar:
    """Element of Q(i)(w, wb, z, s), immutable."""

    __slots__ = ("re", "im", "den", "_h")

    def __init__(self, re, im=None, den=None, normalize=True):
        if im is None:
            im = _ZERO
        if den is None:
            den = _ONE
        if normalize:
            re, im, den = _normalize(re, im, den)
        self.re = re
        self.im = im
        self.den = den
        self._h = None

    # construction helpers
    @staticmethod
    def from_gaussian(a, b=0):
        a, b = Fraction(a), Fraction(b)
        if b.denominator == 1 and a.denominator == 1:
            return Scalar(_ONE * int(a), _ONE * int(b), _ONE, normalize=False)
        d = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return Scalar(_ONE * int(a * d), _ONE * int(b * d), _ONE * d)

    @staticmethod
    def coerce(x):
        if isinstance(x, Scalar):
            return x
        if isinstance(x, complex):
            raise TypeError("floating complex values are not exact scalars")
        if isinstance(x, (int, Fraction)):
            return Scalar.from_gaussian(x)
        raise TypeError(f"cannot coerce {type(x)} to Scalar")

    # arithmetic
    def __add__(self, other):
        o = coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return Scalar(self.re + o.re, self.im + o.im, self.den)
        return Scalar(self.re * o.den + o.re * self.den,
                      self.im * o.den + o.im * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.re, -self.im, self.den, normalize=False)

    def __sub__(self, other):
        o = coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return coerce(other) + (-self)

    def __mul__(self, other):
        o = coerce(other)
        if o is NotImplemented:
            return o
        re = self.re * o.re - self.im * o.im
        im = self.re * o.im + self.im * o.re
        if self.den.is_one() and o.den.is_one():
            return Scalar(re, im, _ONE, normalize=False)
        return Scalar(re, im, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero scalar")
        nrm = self.re * self.re + self.im * self.im
        return Scalar(self.re * self.den, -self.im * self.den, nrm)

    def __truediv__(self, other):
        o = coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return coerce(other) * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise TypeError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        out = ONE
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparisons
    def __eq__(self, other):
        o = coerce(other)
        if o is NotImplemented:
            return False
        if self.den == o.den:
            return self.re == o.re and self.im == o.im
        return self.re * o.den == o.re * self.den and self.im * o.den == o.im * self.den

    def __hash__(self):
        if self._h is None:
            self._h = hash((tuple(sorted(self.re.to_dict().items())),
                            tuple(sorted(self.im.to_dict().items())),
                            tuple(sorted(self.den.to_dict().items()))))
        return self._h

    def is_zero(self):
        return self.re.is_zero() and self.im.is_zero()

    def is_one(self):
        return self.re.is_one() and self.im.is_zero() and self.den.is_one()

    # structure
    def variables(self):
        """Names of generators that actually occur."""
        used = set()
        for p in (self.re, self.im, self.den):
            for m in p.monoms():
                for k, e in enumerate(m):
                    if e:
                        used.add(NAMES[k])
        return used

    def is_formal(self):
        return bool(self.variables() & {"w", "wb"})

    def is_gaussian(self):
        return not self.variables()

    def conj(self):
        """Complex conjugation: i -> -i, w <-> wb.  Only for z/s-free scalars."""
        if self.variables() - {"w", "wb"}:
            raise ValueError("conjugation is only defined on z/s-free scalars")
        return Scalar(_swap_w(self.re), -_swap_w(self.im), _swap_w(self.den))

    def iconj(self):
        """Conjugate the Q(i) coefficients only (symbols untouched)."""
        return Scalar(self.re, -self.im, self.den, normalize=False)

    def real_part(self):
        return (self + self.conj()) / 2

    def imag_part(self):
        return (self - self.conj()) / Scalar.from_gaussian(0, 2)

    def is_real(self):
        return self == self.conj()

    def gaussian(self):
        """(re, im) as Fractions; requires a constant scalar."""
        if not self.is_gaussian():
            raise ValueError(f"scalar {self} is not a Gaussian rational")
        d = _const_value(self.den)
        return _const_value(self.re) / d, _const_value(self.im) / d

    def instantiate(self, omega):
        """Substitute w = omega, wb = conj(omega) for a Gaussian rational omega."""
        if not self.is_formal():
            return self
        a, b = omega.gaussian() if isinstance(omega, Scalar) else omega
        rr, ri = _inst_poly(self.re, a, b)
        ir, ii = _inst_poly(self.im, a, b)
        dr, di = _inst_poly(self.den, a, b)
        nr, ni = rr - ii, ri + ir
        # (nr + i ni) / (dr + i di) with real denominator dr^2 + di^2
        return Scalar(nr * dr + ni * di, ni * dr - nr * di, dr * dr + di * di)

    def subs(self, **vals):
        """Substitute exact scalars for generators (e.g. z1=..., s2=0)."""
        out = self
        for name, val in vals.items():
            out = _subs_one(out, name, coerce(val))
        return out

    def to_complex(self, omega=None, z=None, s=None):
        """Floating evaluation.  omega is a Python complex; z, s map index -> complex."""
        env = {}
        if omega is not None:
            env[0] = complex(omega)
            env[1] = complex(omega).conjugate()
        for j, v in (z or {}).items():
            env[1 + j] = complex(v)
        for j, v in (s or {}).items():
            env[1 + MAXVARS + j] = complex(v)
        n = _eval_poly(self.re, env) + 1j * _eval_poly(self.im, env)
        return n / _eval_poly(self.den, env)

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return format_scalar(self)


def coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.from_gaussian(x)
    return NotImplemented


def _normalize(re, im, den):
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if re.is_zero() and im.is_zero():
        return _ZERO, _ZERO, _ONE
    if den.is_constant():
        c = den.coeffs()[0]
        if c != 1:
            inv = 1 / c
            re, im = re * inv, im * inv
        return re, im, _ONE
    g = den.gcd(re)
    if not g.is_one():
        g = g.gcd(im)
    if not g.is_constant():
        re, im, den = re / g, im / g, den / g
    lc = den.leading_coefficient()
    if lc != 1:
        inv = 1 / lc
        re, im, den = re * inv, im * inv, den * inv
    return re, im, den


def _eval_poly(p, env):
    total = 0j
    for c, m in zip(p.coeffs(), p.monoms()):
        t = complex(float(c.p) / float(c.q))
        for k, e in enumerate(m):
            if e:
                if k not in env:
                    raise ValueError(f"no value supplied for {NAMES[k]}")
                t *= env[k] ** e
        total += t
    return total


@lru_cache(maxsize=4096)
def _gauss_pow(a, b, e1, e2):
    # (a+bi)^e1 (a-bi)^e2 as a pair of Fractions
    re, im = Fraction(1), Fraction(0)
    for _ in range(e1):
        re, im = re * a - im * b, re * b + im * a
    for _ in range(e2):
        re, im = re * a + im * b, im * a - re * b
    return re, im


def _inst_poly(p, a, b):
    a, b = Fraction(a), Fraction(b)
    re_d, im_d = {}, {}
    for c, m in zip(p.coeffs(), p.monoms()):
        gr, gi = _gauss_pow(a, b, m[0], m[1])
        key = (0, 0) + tuple(m[2:])
        cf = Fraction(int(c.p), int(c.q))
        if gr:
            re_d[key] = re_d.get(key, 0) + cf * gr
        if gi:
            im_d[key] = im_d.get(key, 0) + cf * gi
    return (CTX.from_dict({k: _fq(v) for k, v in re_d.items() if v}),
            CTX.from_dict({k: _fq(v) for k, v in im_d.items() if v}))


def _subs_poly(p, idx, val_re, val_im):
    """Substitute a Gaussian-rational value into generator idx; returns (re, im)."""
    re_d, im_d = {}, {}
    for c, m in zip(p.coeffs(), p.monoms()):
        e = m[idx]
        gr, gi = _gauss_pow(val_re, val_im, e, 0)
        key = tuple(0 if k == idx else x for k, x in enumerate(m))
        cf = Fraction(int(c.p), int(c.q))
        if gr:
            re_d[key] = re_d.get(key, 0) + cf * gr
        if gi:
            im_d[key] = im_d.get(key, 0) + cf * gi
    return (CTX.from_dict({k: _fq(v) for k, v in re_d.items() if v}),
            CTX.from_dict({k: _fq(v) for k, v in im_d.items() if v}))


def _subs_one(x, name, val):
    idx = NAMES.index(name)
    if name in ("w", "wb"):
        raise ValueError("use instantiate() for omega")
    if val.is_gaussian():
        a, b = val.gaussian()
        rr, ri = _subs_poly(x.re, idx, a, b)
        ir, ii = _subs_poly(x.im, idx, a, b)
        dr, di = _subs_poly(x.den, idx, a, b)
        nr, ni = rr - ii, ri + ir
        return Scalar(nr * dr + ni * di, ni * dr - nr * di, dr * dr + di * di)
    # symbolic value: go through a polynomial composition on each part
    gens = list(_GENS)
    # only real-coefficient, denominator-free symbolic values are supported here
    if not (val.im.is_zero() and val.den.is_one()):
        raise ValueError("symbolic substitution needs a real polynomial value")
    gens[idx] = val.re
    return Scalar(x.re.compose(*gens), x.im.compose(*gens), x.den.compose(*gens))


# ---------------------------------------------------------------- constants

ZERO = Scalar(_ZERO, _ZERO, _ONE, normalize=False)
ONE = Scalar(_ONE, _ZERO, _ONE, normalize=False)
I = Scalar(_ZERO, _ONE, _ONE, normalize=False)
W = Scalar(_GENS[0])
WB = Scalar(_GENS[1])


def z_sym(j):
    """The symbol z_j (1-based)."""
    return Scalar(_GENS[1 + j])


def s_sym(j):
    return Scalar(_GENS[1 + MAXVARS + j])


def S(x, y=0):
    """Shorthand Gaussian rational x + y i."""
    return Scalar.from_gaussian(x, y)


DEFAULT_OMEGA = S(1, 1)


# ---------------------------------------------------------------- printing

def _fmt_frac(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_gauss(a, b):
    if b == 0:
        return _fmt_frac(a)
    if a == 0:
        if b == 1:
            return "i"
        if b == -1:
            return "-i"
        return f"{_fmt_frac(b)}*i"
    sb = "+" if b > 0 else "-"
    bb = abs(b)
    tail = "i" if bb == 1 else f"{_fmt_frac(bb)}*i"
    return f"{_fmt_frac(a)}{sb}{tail}"


def _fmt_monom(m):
    parts = []
    for k, e in enumerate(m):
        if e == 1:
            parts.append(NAMES[k])
        elif e:
            parts.append(f"{NAMES[k]}^{e}")
    return "*".join(parts)


def _fmt_complex_poly(re, im):
    terms = {}
    for c, m in zip(re.coeffs(), re.monoms()):
        terms.setdefault(m, [Fraction(0), Fraction(0)])[0] = Fraction(int(c.p), int(c.q))
    for c, m in zip(im.coeffs(), im.monoms()):
        terms.setdefault(m, [Fraction(0), Fraction(0)])[1] = Fraction(int(c.p), int(c.q))
    if not terms:
        return "0"
    out = []
    for m in sorted(terms, reverse=True):
        a, b = terms[m]
        mon = _fmt_monom(m)
        if not mon:
            t = _fmt_gauss(a, b)
            if b != 0 and a != 0:
                t = f"({t})"
        else:
            if b == 0 and a == 1:
                t = mon
            elif b == 0 and a == -1:
                t = f"-{mon}"
            elif b == 0 or a == 0:
                t = f"{_fmt_gauss(a, b)}*{mon}"
            else:
                t = f"({_fmt_gauss(a, b)})*{mon}"
        out.append(t)
    s = out[0]
    for t in out[1:]:
        s += f" - {t[1:]}" if t.startswith("-") else f" + {t}"
    return s


def format_scalar(x):
    num = _fmt_complex_poly(x.re, x.im)
    if x.den.is_one():
        return num
    den = _fmt_complex_poly(x.den, _ZERO)
    if len(x.re.coeffs()) + len(x.im.coeffs()) > 1:
        num = f"({num})"
    if len(x.den.coeffs()) > 1:
        den = f"({den})"
    return f"{num}/{den}"


# ---------------------------------------------------------------- parsing

def parse_scalar(text):
    """Parse "a/b+c/d*i" style strings with w, wb, z1.., s1.. symbols.  No floats."""
    import sympy
    if isinstance(text, int):
        return S(text)
    if not isinstance(text, str):
        raise TypeError(f"scalar entries must be strings or ints, got {text!r}")
    loc = {n: sympy.Symbol(n) for n in NAMES}
    loc["i"] = sympy.I
    loc["I"] = sympy.I
    try:
        expr = sympy.sympify(text, locals=loc, rational=False)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise ValueError(f"cannot parse scalar {text!r}: {exc}") from None
    return from_sympy(expr)


def from_sympy(expr):
    import sympy
    if expr.has(sympy.Float):
        raise ValueError(f"floating literal in exact scalar: {expr}")
    if expr is sympy.I:
        return I
    if isinstance(expr, sympy.Rational):
        return S(Fraction(int(expr.p), int(expr.q)))
    if isinstance(expr, sympy.Symbol):
        name = str(expr)
        if name not in NAMES:
            raise ValueError(f"unknown symbol {name}")
        return Scalar(_GENS[NAMES.index(name)])
    if isinstance(expr, sympy.Add):
        out = ZERO
        for a in expr.args:
            out = out + from_sympy(a)
        return out
    if isinstance(expr, sympy.Mul):
        out = ONE
        for a in expr.args:
            out = out * from_sympy(a)
        return out
    if isinstance(expr, sympy.Pow) and expr.exp.is_Integer:
        return from_sympy(expr.base) ** int(expr.exp)
    raise ValueError(f"unsupported scalar expression {expr}")


def to_sympy(x):
    import sympy
    syms = [sympy.Symbol(n) for n in NAMES]

    def conv(p):
        out = sympy.Integer(0)
        for c, m in zip(p.coeffs(), p.monoms()):
            t = sympy.Rational(int(c.p), int(c.q))
            for k, e in enumerate(m):
                if e:
                    t *= syms[k] ** e
            out += t
        return out
    return (conv(x.re) + sympy.I * conv(x.im)) / conv(x.den)


# ---------------------------------------------------------------- vectors

def vec(entries):
    return tuple(Scalar.coerce(e) if not isinstance(e, Scalar) else e for e in entries)


def unit(n, k):
    return tuple(ONE if j == k else ZERO for j in range(n))


def zero_vec(n):
    return (ZERO,) * n


def vadd(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vsub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vscale(c, v):
    c = Scalar.coerce(c)
    return tuple(c * a for a in v)


def vconj(v):
    return tuple(a.conj() for a in v)


def vis_zero(v):
    return all(a.is_zero() for a in v)


def dot(u, v):
    out = ZERO
    for a, b in zip(u, v):
        if not a.is_zero() and not b.is_zero():
            out = out + a * b
    return out


def vinstantiate(v, omega):
    return tuple(a.instantiate(omega) for a in v)


def vsubs(v, **vals):
    return tuple(a.subs(**vals) for a in v)


def vstr(v):
    return "(" + ", ".join(str(a) for a in v) + ")"


# ---------------------------------------------------------------- matrices

class Matrix:
    """Immutable dense matrix of Scalars.  Acts on column vectors."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows, ncols=None):
        rows = tuple(tuple(Scalar.coerce(x) for x in r) for r in rows)
        self.rows = rows
        self.nrows = len(rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        self.ncols = ncols
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix")

    @staticmethod
    def zeros(m, n=None):
        n = m if n is None else n
        return Matrix([[ZERO] * n for _ in range(m)], n)

    @staticmethod
    def identity(n):
        return Matrix([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_columns(cols, nrows=None):
        cols = list(cols)
        if not cols:
            return Matrix([[] for _ in range(nrows or 0)], 0)
        return Matrix([[c[i] for c in cols] for i in range(len(cols[0]))], len(cols))

    @staticmethod
    def elementary(n, i, j, c=1):
        """c * E_{ij} (1-based indices): sends e_j to c e_i."""
        rows = [[ZERO] * n for _ in range(n)]
        rows[i - 1][j - 1] = Scalar.coerce(c)
        return Matrix(rows, n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return tuple(r[j] for r in self.rows)

    def columns(self):
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __add__(self, o):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)], self.ncols)

    def __sub__(self, o):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, o.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, c):
        c = Scalar.coerce(c)
        return Matrix([[c * a for a in r] for r in self.rows], self.ncols)

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, o):
        if isinstance(o, Matrix):
            if self.ncols != o.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {o.shape}")
            cols = o.columns()
            return Matrix([[dot(r, c) for c in cols] for r in self.rows], o.ncols)
        # column vector
        return tuple(dot(r, o) for r in self.rows)

    def apply(self, v):
        return self @ tuple(v)

    @property
    def T(self):
        return Matrix([list(self.column(j)) for j in range(self.ncols)], self.nrows)

    def conj(self):
        return Matrix([[a.conj() for a in r] for r in self.rows], self.ncols)

    def instantiate(self, omega):
        return Matrix([[a.instantiate(omega) for a in r] for r in self.rows], self.ncols)

    def subs(self, **vals):
        return Matrix([[a.subs(**vals) for a in r] for r in self.rows], self.ncols)

    def is_zero(self):
        return all(a.is_zero() for r in self.rows for a in r)

    def is_real(self):
        return all(a.is_real() for r in self.rows for a in r)

    def is_formal(self):
        return any(a.is_formal() for r in self.rows for a in r)

    def power(self, k):
        out = Matrix.identity(self.nrows)
        for _ in range(k):
            out = out @ self
        return out

    def commutator(self, o):
        return self @ o - o @ self

    def hstack(self, o):
        return Matrix([r + s for r, s in zip(self.rows, o.rows)], self.ncols + o.ncols)

    def vstack(self, o):
        return Matrix(self.rows + o.rows, self.ncols)

    # elimination
    def rref(self):
        """Reduced row echelon form and pivot columns (first nonzero column wins)."""
        return _rref(self.rows, self.ncols)

    def rank(self):
        return len(self.rref()[1])

    def kernel(self):
        """Canonical kernel basis: one vector per free column, reduced against pivots."""
        R, piv = self.rref()
        free = [j for j in range(self.ncols) if j not in piv]
        basis = []
        for f in free:
            v = [ZERO] * self.ncols
            v[f] = ONE
            for r, p in enumerate(piv):
                v[p] = -R[r][f]
            basis.append(tuple(v))
        return basis

    def image(self):
        """Column-space basis in canonical (reduced echelon row-space) form."""
        return span(self.columns(), self.nrows)

    def solve(self, b):
        """Particular solution with free variables zero; raises NoSolution."""
        b = tuple(b)
        aug = [r + (x,) for r, x in zip(self.rows, b)]
        R, piv = _rref(aug, self.ncols + 1)
        if self.ncols in piv:
            raise NoSolution("right-hand side not in the image")
        x = [ZERO] * self.ncols
        for r, p in enumerate(piv):
            x[p] = R[r][self.ncols]
        return tuple(x)

    def det(self):
        if self.nrows != self.ncols:
            raise ValueError("determinant of non-square matrix")
        rows = [list(r) for r in self.rows]
        n = self.nrows
        d = ONE
        for c in range(n):
            p = next((r for r in range(c, n) if not rows[r][c].is_zero()), None)
            if p is None:
                return ZERO
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                d = -d
            piv = rows[c][c]
            d = d * piv
            inv = piv.inverse()
            for r in range(c + 1, n):
                f = rows[r][c]
                if f.is_zero():
                    continue
                f = f * inv
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[c])]
        return d

    def inverse(self):
        n = self.nrows
        R, piv = (self.hstack(Matrix.identity(n))).rref()
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise NoSolution("matrix is singular")
        return Matrix([r[n:] for r in R], n)

    def nilpotency_index(self):
        """Smallest k with A^k = 0, or None if A is not nilpotent."""
        if self.nrows != self.ncols:
            raise ValueError("square matrix expected")
        P = Matrix.identity(self.nrows)
        for k in range(1, self.nrows + 2):
            P = P @ self
            if P.is_zero():
                return k
        return None

    def __repr__(self):
        return "Matrix([" + ", ".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows) + "])"


def _rref(rows, ncols):
    rows = [list(r) for r in rows]
    m = len(rows)
    piv = []
    r = 0
    for c in range(ncols):
        if r >= m:
            break
        p = next((k for k in range(r, m) if not rows[k][c].is_zero()), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        pv = rows[r][c]
        if not pv.is_one():
            inv = pv.inverse()
            rows[r] = [a * inv if not a.is_zero() else a for a in rows[r]]
        for k in range(m):
            if k != r:
                f = rows[k][c]
                if not f.is_zero():
                    rows[k] = [a - f * b if not b.is_zero() else a for a, b in zip(rows[k], rows[r])]
        piv.append(c)
        r += 1
    return [tuple(x) for x in rows[:len(piv)]], piv


def kernel(A):
    return A.kernel()


def solve(A, b):
    return A.solve(b)


def nilpotent_exp(A):
    """exp(A) = sum A^k/k! for nilpotent A."""
    idx = A.nilpotency_index()
    if idx is None:
        raise NotNilpotent("no power up to the dimension vanishes")
    n = A.nrows
    out = Matrix.identity(n)
    P = Matrix.identity(n)
    for k in range(1, idx):
        P = (P @ A).scale(Fraction(1, k))
        out = out + P
    return out


def lin_comb(coeffs, mats):
    out = None
    for c, M in zip(coeffs, mats):
        t = M.scale(c)
        out = t if out is None else out + t
    return out


# ---------------------------------------------------------------- subspaces

def span(vectors, n):
    """Canonical basis (nonzero RREF rows) of the span of the given vectors in K^n."""
    vectors = [tuple(v) for v in vectors]
    if not vectors:
        return ()
    R, piv = _rref(vectors, n)
    return tuple(R)


class Subspace:
    """Subspace of K^n held by its canonical (RREF) basis."""

    __slots__ = ("basis", "n")

    def __init__(self, vectors, n, canonical=False):
        self.n = n
        self.basis = tuple(tuple(v) for v in vectors) if canonical else span(vectors, n)

    @staticmethod
    def full(n):
        return Subspace([unit(n, k) for k in range(n)], n, canonical=True)

    @staticmethod
    def zero(n):
        return Subspace((), n, canonical=True)

    @property
    def dim(self):
        return len(self.basis)

    def __eq__(self, o):
        return isinstance(o, Subspace) and self.n == o.n and self.basis == o.basis

    def __hash__(self):
        return hash(self.basis)

    def __add__(self, o):
        return Subspace(self.basis + o.basis, self.n)

    def contains(self, v):
        v = tuple(v)
        if vis_zero(v):
            return True
        if not self.basis:
            return False
        return len(span(self.basis + (v,), self.n)) == self.dim

    def contains_space(self, o):
        return all(self.contains(v) for v in o.basis)

    def intersect(self, o):
        if not self.basis or not o.basis:
            return Subspace.zero(self.n)
        # solve a.B1 = b.B2 ; columns are basis vectors
        A = Matrix.from_columns(list(self.basis) + [vscale(-1, v) for v in o.basis])
        ker = A.kernel()
        k = self.dim
        out = []
        for c in ker:
            v = zero_vec(self.n)
            for a, b in zip(c[:k], self.basis):
                if not a.is_zero():
                    v = vadd(v, vscale(a, b))
            out.append(v)
        return Subspace(out, self.n)

    def conj(self):
        return Subspace([vconj(v) for v in self.basis], self.n)

    def image(self, A):
        return Subspace([A @ v for v in self.basis], A.nrows)

    def instantiate(self, omega):
        return Subspace([vinstantiate(v, omega) for v in self.basis], self.n)

    def coordinates(self, v):
        """Coefficients of v in the canonical basis."""
        A = Matrix.from_columns(self.basis, self.n)
        return A.solve(v)

    def __repr__(self):
        return "Subspace<" + ", ".join(vstr(v) for v in self.basis) + ">"


def preimage(A, U):
    """{x : A x in U}."""
    n = A.ncols
    m = A.nrows
    if U.dim == m:
        return Subspace.full(n)
    # x with A x = sum c_k u_k
    cols = A.columns() + [vscale(-1, u) for u in U.basis]
    ker = Matrix.from_columns(cols, m).kernel() if cols else []
    return Subspace([c[:n] for c in ker], n)


def kernel_space(A):
    return Subspace(A.kernel(), A.ncols)


# ---------------------------------------------------------------- floating layer

class ApproxVector:
    """Complex floating vector with the max-modulus norm."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = np.asarray(entries, dtype=complex)

    def norm(self):
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def __repr__(self):
        return f"ApproxVector({self.entries})"


def to_numpy(obj, omega=None):
    """Exact matrix/vector/scalar -> numpy complex, with w instantiated first."""
    if omega is None:
        omega = DEFAULT_OMEGA
    oc = complex(*[float(t) for t in omega.gaussian()]) if isinstance(omega, Scalar) else complex(omega)
    if isinstance(obj, Matrix):
        return np.array([[a.to_complex(oc) for a in r] for r in obj.rows], dtype=complex).reshape(obj.nrows, obj.ncols)
    if isinstance(obj, Scalar):
        return obj.to_complex(oc)
    return np.array([a.to_complex(oc) for a in obj], dtype=complex)


def approx(v, omega=None):
    return ApproxVector(to_numpy(tuple(v), omega))


def maxnorm(x):
    x = np.asarray(x)
    return float(np.max(np.abs(x))) if x.size else 0.0


def numeric_exp_nilpotent(A, tol=0.0):
    """exp of a (numerically) nilpotent complex matrix by the finite series."""
    n = A.shape[0]
    out = np.eye(n, dtype=complex)
    P = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        P = P @ A / k
        out = out + P
    return out


def cexp2pi(z):
    return cmath.exp(2j * math.pi * z)
