"""
Scenario files: JSON with matrices as row lists and exact scalar strings
("a/b+c/d*i", "w" and "wb" for omega and its conjugate).  Loading parses,
checks the structural invariants and builds the orbit objects.
"""

import itertools
import json
import os
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import Matrix, Subspace, Scalar, S, I, parse_scalar, vec
from .errors import ParseError, ValidationError, NotMHS
from .orbit import orbit_from_splitting
from .normal_function import mixed_orbit

SCENARIO_DIR = os.path.join(os.path.dirname(__file__), "scenarios")
BUNDLED = ("example1", "example2", "example3", "torsion")


@dataclass
class Scenario:
    name: str
    path: str
    raw: dict
    omega: Scalar = None                  # pinned value, None = formal
    Q: Matrix = None
    orbit: object = None                  # instantiated when omega is pinned
    formal_orbit: object = None
    mixed: object = None
    T: Matrix = None
    F0_rank: int = None
    y_levels: tuple = (10, 20, 40, 80)
    x_samples: tuple = (Fraction(0), Fraction(1, 3), Fraction(2, 3))
    height: int = 10
    lam: Scalar = None
    errors: list = field(default_factory=list)


def resolve_path(path):
    """Accept a file path or the name of a bundled scenario."""
    if os.path.exists(path):
        return path
    base = os.path.basename(path)
    stem = base[:-5] if base.endswith(".json") else base
    cand = os.path.join(SCENARIO_DIR, stem + ".json")
    if os.path.exists(cand):
        return cand
    raise ParseError(f"scenario file not found: {path}", location=path)


def _scalar(x, where, lam=None):
    if isinstance(x, bool) or isinstance(x, float):
        raise ParseError(f"{where}: floats are not allowed ({x!r})", location=where)
    if isinstance(x, str) and lam is not None:
        x = re.sub(r"\blambda\b", f"({lam})", x)
    try:
        return parse_scalar(x)
    except (ValueError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}", location=where) from None


def _matrix(rows, where, n=None, lam=None):
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError(f"{where}: matrix must be a non-empty list of rows", location=where)
    out = [[_scalar(x, f"{where}[{i}][{j}]", lam) for j, x in enumerate(r)] for i, r in enumerate(rows)]
    m = len(out[0])
    if any(len(r) != m for r in out):
        raise ParseError(f"{where}: ragged matrix", location=where)
    if n is not None and (len(out) != n or m != n):
        raise ParseError(f"{where}: expected {n}x{n}, got {len(out)}x{m}", location=where)
    return Matrix(out, m)


def _pieces(d, where, n, lam=None):
    if not isinstance(d, dict):
        raise ParseError(f"{where}: splitting must map \"p,q\" to vector lists", location=where)
    out = {}
    for key, vs in d.items():
        try:
            p, q = (int(t) for t in key.split(","))
        except ValueError:
            raise ParseError(f"{where}: bad bidegree key {key!r}", location=where) from None
        vecs = []
        for k, v in enumerate(vs):
            if len(v) != n:
                raise ParseError(f"{where}[{key}][{k}]: expected length {n}", location=where)
            vecs.append(tuple(_scalar(x, f"{where}[{key}][{k}]", lam) for x in v))
        out[(p, q)] = vecs
    return out


def _gamma(d, where, n, nvars):
    out = {}
    for key, rows in (d or {}).items():
        try:
            alpha = tuple(int(t) for t in key.split(","))
        except ValueError:
            raise ParseError(f"{where}: bad multi-index {key!r}", location=where) from None
        if len(alpha) != nvars or min(alpha) < 0 or sum(alpha) == 0:
            raise ParseError(f"{where}: multi-index {key!r} must have {nvars} nonnegative entries, not all 0",
                             location=where)
        out[alpha] = _matrix(rows, f"{where}[{key}]", n)
    return out


def parse_omega(text):
    if text in (None, "formal"):
        return None
    return _scalar(text, "omega")


def load_scenario(path, formal=False, lam=None):
    """Parse and validate a scenario.  Raises ParseError or ValidationError (with .errors)."""
    path = resolve_path(path)
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}", location=path) from None
    if not isinstance(raw, dict):
        raise ParseError(f"{path}: top level must be an object", location=path)
    for key in ("name", "rank", "Q"):
        if key not in raw:
            raise ParseError(f"{path}: missing field {key!r}", location=key)
    n = raw["rank"]
    if not isinstance(n, int) or n < 1:
        raise ParseError("rank must be a positive integer", location="rank")
    sc = Scenario(raw["name"], path, raw)
    sc.omega = parse_omega(raw.get("omega"))
    sc.Q = _matrix(raw["Q"], "Q", n)
    errors = []
    if sc.Q.det().is_zero():
        errors.append(("nondegenerate", "Q", "Q is degenerate"))
    if not (sc.Q + sc.Q.T).is_zero():
        errors.append(("alternating", "Q", "Q is not alternating"))
    scan = raw.get("scan") or {}
    if "y_levels" in scan:
        sc.y_levels = tuple(int(t) for t in scan["y_levels"])
    if "x_samples" in scan:
        sc.x_samples = tuple(Fraction(t) for t in scan["x_samples"])
    sc.height = int(raw.get("height", 10))
    if "monodromy" in raw:
        sc.T = _matrix(raw["monodromy"]["T"], "monodromy.T", n)
        sc.F0_rank = raw["monodromy"].get("F0_rank")
        if not sc.T.det().is_one() and not (-sc.T.det()).is_one():
            errors.append(("invertible", "monodromy.T", "T is not invertible over Z"))
    if "N" in raw:
        N_list = [_matrix(N, f"N[{k}]", n) for k, N in enumerate(raw["N"])]
        for k, N in enumerate(N_list):
            if N.nilpotency_index() is None:
                errors.append(("nilpotent", f"N[{k}]", "N is not nilpotent"))
            if not N.is_real():
                errors.append(("rational", f"N[{k}]", "N is not rational"))
        for a, b in itertools.combinations(range(len(N_list)), 2):
            if not N_list[a].commutator(N_list[b]).is_zero():
                errors.append(("commuting", f"N[{a}],N[{b}]", "N_j do not commute"))
        if "splitting" not in raw:
            raise ParseError("orbit data needs a splitting", location="splitting")
        pieces = _pieces(raw["splitting"], "splitting", n)
        delta = _matrix(raw["delta"], "delta", n) if raw.get("delta") else None
        gamma = _gamma(raw.get("gamma"), "gamma", n, len(N_list))
        if errors:
            raise ValidationError("; ".join(e[0] for e in errors), errors=errors)
        try:
            sc.formal_orbit = orbit_from_splitting(sc.Q, N_list, pieces, delta, gamma, None, sc.name)
        except NotMHS as exc:
            raise ValidationError(str(exc), errors=[("splitting", "splitting", str(exc))]) from None
        sc.orbit = sc.formal_orbit if (formal or sc.omega is None) else sc.formal_orbit.instantiate(sc.omega)
        if not formal and sc.omega is not None:
            sc.orbit.omega = sc.omega
        if "mixed" in raw:
            mx = raw["mixed"]
            sc.lam = _scalar(lam if lam is not None else mx.get("lambda", "0"), "mixed.lambda")
            lamtxt = str(sc.lam)
            Np = [_matrix(M, f"mixed.Nprime[{k}]", n + 1) for k, M in enumerate(mx["Nprime"])]
            mp = _pieces(mx["splitting"], "mixed.splitting", n + 1, lamtxt)
            v = tuple(_scalar(x, "mixed.v") for x in mx.get("v", ["0"] * n + ["1"]))
            dp = _matrix(mx["deltaprime"], "mixed.deltaprime", n + 1) if mx.get("deltaprime") else None
            gp = _gamma(mx.get("gammaprime"), "mixed.gammaprime", n + 1, len(N_list))
            if len(Np) != len(N_list):
                errors.append(("restriction", "mixed.Nprime", "wrong number of N'_j"))
            if not v[-1].is_one():
                errors.append(("last-coordinate", "mixed.v", "candidate v must map to 1"))
            if errors:
                raise ValidationError("; ".join(e[0] for e in errors), errors=errors)
            try:
                sc.mixed = mixed_orbit(sc.orbit, Np, mp, v, sc.lam, dp, gp, sc.name)
            except NotMHS as exc:
                raise ValidationError(str(exc), errors=[("splitting", "mixed.splitting", str(exc))]) from None
    if errors:
        raise ValidationError("; ".join(e[0] for e in errors), errors=errors)
    return sc
