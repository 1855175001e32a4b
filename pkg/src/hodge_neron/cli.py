"""
Command line runner: hodge-neron <command> <scenario> [options].

Exit codes: 0 ok, 2 validation failure, 3 flagged property failure.
"""

import argparse
import itertools
import json
import sys
from fractions import Fraction

from . import __version__
from .exact import Matrix, Scalar, S, unit, vstr
from .errors import HodgeNeronError, ParseError, ValidationError, UnknownCommand, UnsupportedShape, NotQuasiUnipotent
from .filtrations import weight_filtration, is_weight_filtration, relative_weight_filtration
from .hodge import (deligne_splitting, check_delta, check_polarization, mhs_from_splitting, MixedHodgeData,
                    PureHodgeData)
from .orbit import validate_orbit, estimate_scan, nplus_decay, eval_period
from .sl2 import triple_from_splitting, primitive_decompose, w_block
from .neron import (f0m_presentation, relation_vector_check, fiber, singular_locus, tz_limit_points,
                    zucker_witness, quotient_fiber, monodromy_analysis)
from .normal_function import (validate_mixed_orbit, q_prime_rows, v0_lift, v0_unique, v0_plateau,
                              singularity_class, vrone_conditions, graph_closure_fiber)
from .scenario import load_scenario, _scalar

COMMANDS = ("validate", "wfilt", "splitting", "sl2", "estimate-scan", "presentation", "fiber", "tz-closure",
            "quotient-fiber", "monodromy", "nf-validate", "nf-v0", "nf-singularity", "nf-closure")
ALL = COMMANDS + ("report-all",)
SEED = 0
WITNESS_TARGET = "1/3+1/7*i"


class NotApplicable(Exception):
    pass


class Outcome:
    def __init__(self, command, scenario, inputs=None):
        self.command = command
        self.scenario = scenario
        self.inputs = inputs or {}
        self.results = {}
        self.flags = {}
        self.validation_failed = False

    def flag(self, name, ok):
        self.flags[name] = bool(ok)
        return ok

    @property
    def exit_code(self):
        if self.validation_failed:
            return 2
        if not all(self.flags.values()):
            return 3
        return 0

    def to_dict(self, opts):
        return {"command": self.command, "scenario": self.scenario, "inputs": self.inputs,
                "results": self.results, "flags": self.flags,
                "provenance": {"version": __version__, "seed": SEED, "height": opts.height_used,
                               "grid": opts.grid_used}}


# ---------------------------------------------------------------- formatting

def clean(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        return float(f"{obj:.6g}")
    if isinstance(obj, (Fraction, Scalar)):
        return str(obj)
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if hasattr(obj, "item"):
        return clean(obj.item())
    return str(obj)


def _inline(v):
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(x)}" for k, x in v.items()) + "}"
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "none"
    return str(v)


def _simple(v):
    if isinstance(v, dict):
        return False
    if isinstance(v, list):
        return all(_simple(x) and not isinstance(x, list) or (isinstance(x, list) and all(not isinstance(y, (list, dict)) for y in x))
                   for x in v)
    return True


def render_text(obj, indent=0):
    pad = "  " * indent
    lines = []
    for k, v in obj.items():
        if isinstance(v, dict) and v:
            lines.append(f"{pad}{k}:")
            lines.extend(render_text(v, indent + 1))
        elif isinstance(v, list) and v and not _simple(v):
            lines.append(f"{pad}{k}:")
            for x in v:
                if isinstance(x, dict):
                    items = list(x.items())
                    first = True
                    for kk, vv in items:
                        lead = "- " if first else "  "
                        lines.append(f"{pad}  {lead}{kk}: {_inline(vv)}")
                        first = False
                else:
                    lines.append(f"{pad}  - {_inline(x)}")
        else:
            lines.append(f"{pad}{k}: {_inline(v)}")
    return lines


def emit(out, opts):
    d = clean(out.to_dict(opts))
    if opts.format == "json":
        return json.dumps(d, indent=2, sort_keys=False) + "\n"
    lines = [f"== {out.command} {out.scenario} =="]
    body = {k: d[k] for k in ("inputs", "results", "flags", "provenance") if d[k] != {}}
    lines.extend(render_text(body))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- helpers

def _need_orbit(sc):
    if sc.orbit is None:
        raise NotApplicable("scenario has no nilpotent orbit data")
    return sc.orbit


def _need_mixed(sc):
    if sc.mixed is None:
        raise NotApplicable("scenario has no mixed block")
    return sc.mixed


def _parse_point(text, nvars):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != nvars:
        raise ParseError(f"--point needs {nvars} coordinates", location="--point")
    return [_scalar(p, "--point") for p in parts]


def _parse_stratum(text):
    text = text.strip()
    if text in ("", "none", "generic"):
        return ()
    return tuple(sorted(int(t) for t in text.split(",")))


def _strata(nvars):
    out = []
    for k in range(nvars, -1, -1):
        out.extend(itertools.combinations(range(1, nvars + 1), k))
    return out


def _strata_from(opts, nvars):
    if opts.stratum is not None:
        return [_parse_stratum(opts.stratum)]
    return _strata(nvars)


def _filt_dims(F):
    return {str(k): F[k].dim for k in F.indices(0)}


def _basis(U):
    return [vstr(v) for v in U.basis]


def _checks(rep):
    return [{"check": c.name, "ok": c.ok, "detail": c.detail} if c.detail else {"check": c.name, "ok": c.ok}
            for c in rep.checks]


# ---------------------------------------------------------------- commands

def cmd_validate(sc, opts, out):
    D = _need_orbit(sc)
    rep = validate_orbit(D)
    # the limit filtration is not polarized; test the orbit at z_j = 2i
    Hz = PureHodgeData(D.n, D.Q, eval_period(D, [S(0, 2)] * D.nvars), D.H.weight)
    pol = check_polarization(Hz)
    out.results["orbit"] = _checks(rep)
    out.results["polarization at z = 2i"] = _checks(pol)
    if not (rep.ok and pol.ok):
        out.validation_failed = True


def cmd_wfilt(sc, opts, out):
    D = _need_orbit(sc)
    N = D.N_sum([1] * D.nvars)
    W = weight_filtration(N, -1)
    out.results["W(N)[-1] dims"] = _filt_dims(W)
    out.results["W(N)[-1]"] = {str(k): _basis(W[k]) for k in W.indices(0)}
    out.flag("weight axioms", is_weight_filtration(N, W, -1))
    per = []
    for j, Nj in enumerate(D.N_list, start=1):
        per.append({"j": j, "dims": _filt_dims(weight_filtration(Nj, -1))})
    out.results["per N_j"] = per
    out.flag("limit W equals W(N)[-1]", mhs_from_splitting(D.n, D.split).W == W)
    if sc.mixed is not None:
        X = sc.mixed
        M = relative_weight_filtration(X.N_sum([1] * X.nvars), X.W)
        out.results["relative M dims"] = _filt_dims(M)
        out.results["relative M"] = {str(k): _basis(M[k]) for k in M.indices(0)}
        out.flag("relative M equals M of splitting'", M == X.M)


def cmd_splitting(sc, opts, out):
    D = _need_orbit(sc)
    M = mhs_from_splitting(D.n, D.split)
    split, rsplit = deligne_splitting(M)
    out.results["I^{p,q}"] = {f"{p},{q}": _basis(U) for (p, q), U in sorted(split.items())}
    out.results["hodge numbers"] = {f"{p},{q}": U.dim for (p, q), U in sorted(split.items())}
    out.flag("splitting reproduces input", all(split.get(k) == U for k, U in D.split.items()))
    out.flag("R-split", rsplit)
    out.flag("delta check", check_delta(M, D.delta))
    if sc.mixed is not None:
        X = sc.mixed
        sp2, rs2 = deligne_splitting(MixedHodgeData(X.n, X.M, X.F))
        out.results["I^{p,q}(M,F')"] = {f"{p},{q}": _basis(U) for (p, q), U in sorted(sp2.items())}
        out.flag("mixed R-split", rs2)


def cmd_sl2(sc, opts, out):
    D = _need_orbit(sc)
    N = D.N_sum([1] * D.nvars)
    T = triple_from_splitting(N, D.split, -1)
    out.results["Y"] = [[str(a) for a in r] for r in T.Y.rows]
    out.results["N+"] = [[str(a) for a in r] for r in T.Nplus.rows]
    out.flag("triple relations", T.check())
    decs = []
    for k in range(D.n):
        dec = primitive_decompose(unit(D.n, k), T, D.split, -1)
        decs.append({"h": f"e{k + 1}",
                     "components": {f"{p},{q},{b}": vstr(v) for (p, q, b), v in sorted(dec.components.items())}})
    out.results["primitive decompositions"] = decs
    blocks = []
    for (p, q) in sorted(D.split):
        if p + q > -1:
            continue
        eqs, unk, A = w_block(p, q)
        if not eqs:
            continue
        blocks.append({"p,q": f"{p},{q}", "equations b": eqs, "unknowns b": unk,
                       "det": str(A.det()) if len(eqs) == len(unk) else "non-square"})
    out.results["w-system blocks"] = blocks


def cmd_estimate_scan(sc, opts, out):
    D = _need_orbit(sc)
    levels = tuple(opts.grid) if opts.grid else sc.y_levels
    opts.grid_used = list(levels)
    rep = estimate_scan(D, None, levels, sc.x_samples, with_derivatives=not opts.no_derivative_sections)
    out.results["Z/B scan"] = rep.data
    out.flag("Z/B bounded", rep.ok)
    npl = nplus_decay(D, levels)
    out.results["N+ decay"] = npl.data
    out.flag("|N+| y_n bounded", npl.ok)


def cmd_presentation(sc, opts, out):
    D = _need_orbit(sc)
    P = f0m_presentation(D)
    out.results["generators"] = [{"label": g.label, "I": list(g.I), "v": vstr(g.v), "N_I v": vstr(g.u)}
                                 for g in P.generators]
    out.results["relations"] = [{"degree": list(r.degree), "column": [str(c) for c in r.coeffs]}
                                for r in P.relations]
    out.results["status"] = P.note
    out.flag("relations vanish identically", relation_vector_check(D, P))


def cmd_fiber(sc, opts, out):
    D = _need_orbit(sc)
    P = f0m_presentation(D)
    rows = []
    if opts.point is not None:
        pts = [("point", _parse_point(opts.point, D.nvars), None)]
    else:
        pts = [("stratum", None, J) for J in _strata_from(opts, D.nvars)]
    for kind, pt, J in pts:
        fd = fiber(P, pt, J)
        rows.append({"where": fd.label if pt is None else "(" + ", ".join(str(a) for a in pt) + ")",
                     "vector_dim": fd.vector_dim, "generic_rank": fd.generic_rank, "singular": fd.singular})
        out.flag(f"vector_dim >= generic rank at {rows[-1]['where']}", fd.vector_dim >= fd.generic_rank)
    out.results["fibers"] = rows
    try:
        loc = singular_locus(P)
        out.results["singular locus"] = loc if loc else "empty"
    except UnsupportedShape as exc:
        out.results["singular locus"] = f"unsupported: {exc}"
    out.results["hodge bundle rank"] = D.F[0].dim
    gen = fiber(P, None, ())
    out.flag("generic fiber = rank F^0", gen.vector_dim == D.F[0].dim)


def cmd_tz_closure(sc, opts, out):
    D = _need_orbit(sc)
    wd = not opts.no_derivative_sections
    out.inputs["with_derivatives"] = wd
    J = _parse_stratum(opts.stratum) if opts.stratum is not None else tuple(range(1, D.nvars + 1))
    out.inputs["stratum"] = list(J)
    la = tz_limit_points(D, J, wd, opts.height_used)
    out.results["admissible lattice"] = la.lattice
    out.results["after exponential terms"] = la.exp_lattice
    out.results["limit rows"] = {lab: [str(a) for a in la.constant_rows[g]] for g, lab in enumerate(la.labels)}
    out.results["limits of basis"] = [{"h": l, "limit": [str(la.limit_value(g, l)) for g in range(len(la.labels))]}
                                      for l in la.lattice]
    out.results["bounded through positive relations"] = [{"h": list(h), "relation": list(t)} for h, t in la.extra]
    # invariance: the admissible lattice lies in the common kernel of the N_j
    inv = all(all(a.is_zero() for a in N @ tuple(S(x) for x in l)) for l in la.lattice for N in D.N_list)
    out.flag("admissible lattice in common kernel of N_j", inv)
    if not wd:
        z = la.zucker
        fams = []
        for f in z["families"]:
            wit = zucker_witness(f, _scalar(WITNESS_TARGET, "target"), steps=3, height=opts.height_used)
            fams.append({"h0": list(f["h0"]), "pivot": f["pivot"], "direction": f["direction"],
                         "kappa": f["kappa"], "real rank": f["real_rank"], "continuous": f["continuous"],
                         "witness": [{"h": list(h), "zeta": str(zz)} for h, zz in wit]})
        out.results["extra continuous limits"] = z["exists"]
        out.results["target"] = WITNESS_TARGET
        out.results["families"] = fams
        wdl = tz_limit_points(D, J, True, opts.height_used)
        ok = all(_in_lattice(l, la.lattice) for l in wdl.lattice)
        out.flag("with-derivative lattice contained", ok)


def _in_lattice(v, basis):
    from .lattice import integer_solutions
    if not basis:
        return not any(v)
    rows = [[b[i] for b in basis] for i in range(len(v))]
    x, _ = integer_solutions(rows, list(v), len(basis))
    return x is not None


def cmd_quotient_fiber(sc, opts, out):
    D = _need_orbit(sc)
    rows = []
    if opts.point is not None:
        q = quotient_fiber(D, _parse_point(opts.point, D.nvars), None, opts.height_used)
        q["where"] = opts.point
        rows.append(q)
    else:
        for J in _strata_from(opts, D.nvars):
            q = quotient_fiber(D, None, J, opts.height_used)
            q["where"] = "stratum {" + ",".join(map(str, J)) + "}" if J else "generic"
            rows.append(q)
    for q in rows:
        out.flag(f"lattice injective at {q['where']}", q["injective"])
    out.results["quotient fibers"] = [{"where": q["where"], "torus_rank": q["torus_rank"],
                                       "vector_dim": q["vector_dim"], "fiber_dim": q["fiber_dim"],
                                       "lattice_rank": q["lattice_rank"], "compact": q["compact"]} for q in rows]


def cmd_monodromy(sc, opts, out):
    if sc.T is None:
        raise NotApplicable("scenario has no monodromy matrix")
    try:
        rep = monodromy_analysis(sc.T, sc.F0_rank)
    except NotQuasiUnipotent as exc:
        out.results["error"] = f"{exc.code}: {exc}"
        out.flag("quasi-unipotent", False)
        return
    out.results.update(rep.data)
    out.flag("quasi-unipotent", True)


def cmd_nf_validate(sc, opts, out):
    X = _need_mixed(sc)
    rep = validate_mixed_orbit(X)
    out.results["checks"] = _checks(rep)
    if not rep.ok:
        out.validation_failed = True


def cmd_nf_v0(sc, opts, out):
    X = _need_mixed(sc)
    samples = []
    ok = True
    for k in range(3):
        y = tuple(k + 1 if j == 0 else 3 - k if j == 1 else 1 for j in range(X.nvars))
        v0 = v0_lift(X, y)
        uniq = v0_unique(X, y)
        ok = ok and uniq
        samples.append({"y": list(y), "v0": vstr(v0), "unique": uniq})
    out.results["v0"] = samples
    out.flag("v0 unique", ok)
    exps = tuple(range(1, 9))
    opts.grid_used = [f"2^{k}" for k in exps]
    pl = v0_plateau(X, exps)
    out.results["plateau"] = pl
    out.flag("v0 bounded", pl["bounded"])


def cmd_nf_singularity(sc, opts, out):
    X = _need_mixed(sc)
    cl = singularity_class(X)
    out.results["class"] = str(cl)
    out.results["certificate"] = cl.certificate
    out.results["N'_j v"] = [vstr(X.to_H(Np @ X.v)) for Np in X.Nprime]
    same = True
    for h in itertools.product((-1, 0, 2), repeat=X.base.n):
        v2 = tuple(a + b for a, b in zip(X.v, tuple(S(t) for t in h) + (S(0),)))
        c2 = singularity_class(X, v2)
        same = same and (c2.kind, c2.order) == (cl.kind, cl.order)
    out.flag("class invariant under v -> v + h", same)


def cmd_nf_closure(sc, opts, out):
    X = _need_mixed(sc)
    fibs = []
    for J in _strata_from(opts, X.nvars):
        g = graph_closure_fiber(X, J, opts.height_used)
        fibs.append(g)
    out.results["graph closure"] = fibs
    vr = vrone_conditions(X, min(opts.height_used, 3))
    out.results["closure conditions"] = {"tested": vr.data["tested"], "height": vr.data["height"],
                                         "candidates": vr.data["candidates"]}
    cl = singularity_class(X)
    if cl.kind == "torsion":
        deep = graph_closure_fiber(X, tuple(range(1, X.nvars + 1)), opts.height_used)
        out.flag("torsion singularity => empty closure over the origin", deep["empty"])


HANDLERS = {
    "validate": cmd_validate, "wfilt": cmd_wfilt, "splitting": cmd_splitting, "sl2": cmd_sl2,
    "estimate-scan": cmd_estimate_scan, "presentation": cmd_presentation, "fiber": cmd_fiber,
    "tz-closure": cmd_tz_closure, "quotient-fiber": cmd_quotient_fiber, "monodromy": cmd_monodromy,
    "nf-validate": cmd_nf_validate, "nf-v0": cmd_nf_v0, "nf-singularity": cmd_nf_singularity,
    "nf-closure": cmd_nf_closure,
}


def run(command, sc, opts):
    if command not in HANDLERS:
        raise UnknownCommand(f"unknown command {command!r}")
    out = Outcome(command, sc.name)
    if opts.point is not None:
        out.inputs["point"] = opts.point
    if opts.stratum is not None and command not in ("tz-closure",):
        out.inputs["stratum"] = opts.stratum
    if sc.lam is not None and command.startswith("nf-"):
        out.inputs["lambda"] = str(sc.lam)
    opts.grid_used = list(sc.y_levels) if command == "estimate-scan" else None
    HANDLERS[command](sc, opts, out)
    return out


def build_parser():
    ap = argparse.ArgumentParser(prog="hodge-neron", description=__doc__.strip().splitlines()[0])
    ap.add_argument("command")
    ap.add_argument("scenario")
    ap.add_argument("--point")
    ap.add_argument("--stratum")
    ap.add_argument("--grid", type=lambda t: [int(x) for x in t.split(",")])
    ap.add_argument("--height", type=int)
    ap.add_argument("--lambda", dest="lam")
    ap.add_argument("--no-derivative-sections", action="store_true")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--out")
    return ap


def execute(argv):
    """Returns (exit code, text written to stdout)."""
    opts = build_parser().parse_args(argv)
    try:
        if opts.command not in ALL:
            raise UnknownCommand(f"unknown command {opts.command!r}")
        sc = load_scenario(opts.scenario, lam=opts.lam)
    except ValidationError as exc:
        errs = [{"code": c, "location": loc, "message": m} for c, loc, m in exc.errors]
        msg = json.dumps({"error": exc.code, "errors": errs}, indent=2) if opts.format == "json" else \
            "validation failed:\n" + "\n".join(f"  [{e['code']}] {e['location']}: {e['message']}" for e in errs)
        return 2, msg + "\n"
    except HodgeNeronError as exc:
        msg = f"{exc.code}: {exc}"
        return 2, (json.dumps({"error": exc.code, "message": str(exc)}) if opts.format == "json" else msg) + "\n"
    opts.height_used = opts.height if opts.height is not None else sc.height
    cmds = COMMANDS if opts.command == "report-all" else (opts.command,)
    texts, codes, blobs = [], [], []
    for c in cmds:
        try:
            out = run(c, sc, opts)
        except NotApplicable as exc:
            if opts.command != "report-all":
                return 2, f"n/a: {exc}\n"
            texts.append(f"== {c} {sc.name} ==\nn/a: {exc}\n")
            blobs.append({"command": c, "scenario": sc.name, "n/a": str(exc)})
            continue
        except HodgeNeronError as exc:
            texts.append(f"== {c} {sc.name} ==\nerror: {exc.code}: {exc}\n")
            blobs.append({"command": c, "scenario": sc.name, "error": exc.code, "message": str(exc)})
            codes.append(2)
            continue
        texts.append(emit(out, opts))
        blobs.append(clean(out.to_dict(opts)))
        codes.append(out.exit_code)
        for name, ok in out.flags.items():
            if not ok:
                texts[-1] += f"flagged: {name}\n"
    if opts.format == "json" and opts.command == "report-all":
        text = json.dumps(blobs, indent=2) + "\n"
    else:
        text = "\n".join(texts) if opts.format == "text" else "".join(texts)
    if opts.out:
        with open(opts.out, "w") as fh:
            json.dump(blobs if opts.command == "report-all" else blobs[0], fh, indent=2)
            fh.write("\n")
    code = max(codes) if codes else 0
    return code, text


def main(argv=None):
    code, text = execute(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
