"""Command-line front end.

Every command takes its parameters either from flags or from a JSON problem spec
({"command": ..., "params": {...}}) given with --spec (a path, or - for stdin).
Reports go to stdout as sorted-key JSON or CSV.

Exit codes: 0 success, 1 a FAIL verdict, 2 malformed input, 3 a violated precondition.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional

from . import orbit as ob
from .errors import JRError
from .padic import LocalFieldCtx, QuadExtElem, parse_elem, parse_rat, rat_str

COMMANDS = ("orb-gl", "orb-u", "fl-check", "fl-sweep", "reduce", "weil-check", "arch", "tate-fe")

EXIT_OK, EXIT_FAIL, EXIT_SCHEMA, EXIT_PRECONDITION = 0, 1, 2, 3


class SchemaError(Exception):
    pass


# -- parameter helpers -----------------------------------------------------------------


def _req(params: dict, key: str):
    if key not in params:
        raise SchemaError(f"missing parameter {key!r}")
    return params[key]


def _int(params: dict, key: str, default=None) -> int:
    v = params.get(key, default)
    if v is None:
        raise SchemaError(f"missing parameter {key!r}")
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise SchemaError(f"{key} must be an integer")
    try:
        return int(v)
    except ValueError as exc:
        raise SchemaError(f"{key} must be an integer") from exc


def _rat(v, what: str) -> Fraction:
    try:
        return parse_rat(v)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"{what}: {exc}") from exc


def _elem(v, d: int, what: str) -> QuadExtElem:
    try:
        return parse_elem(v, d)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise SchemaError(f"{what}: {exc}") from exc


def _matrix(v, d: int, what: str) -> list:
    if not isinstance(v, list) or not v or not all(isinstance(r, list) and len(r) == len(v) for r in v):
        raise SchemaError(f"{what} must be a square list of rows")
    return [[_elem(x, d, what) for x in r] for r in v]


def _vector(v, d: Optional[int], what: str) -> list:
    if not isinstance(v, list) or not v:
        raise SchemaError(f"{what} must be a nonempty list")
    return [_elem(x, d, what) if d is not None else _rat(x, what) for x in v]


def _ctx(params: dict) -> LocalFieldCtx:
    p = _int(params, "p", 3)
    d = params.get("d")
    if d is None:
        return LocalFieldCtx.default(p, imaginary=True)
    return LocalFieldCtx(p, _int(params, "d"))


def _enc(x):
    if isinstance(x, QuadExtElem):
        return x.to_json()
    if isinstance(x, Fraction):
        return rat_str(x)
    if isinstance(x, list):
        return [_enc(t) for t in x]
    return x


# -- commands ---------------------------------------------------------------------------


def cmd_orb_gl(params: dict, opts) -> dict:
    from .orbital import OrbStats, orb_gl, special_values

    ctx = _ctx(params)
    gamma = _matrix(_req(params, "gamma"), ctx.d, "gamma")
    u1 = _vector(_req(params, "u1"), None, "u1")
    u2 = _vector(_req(params, "u2"), None, "u2")
    x = ob.SemiLiePair(gamma, u1, u2, ctx.d)
    st = OrbStats()
    P = orb_gl(x, ctx, st)
    omega = ob.transfer_factor(x, ctx)
    sv = special_values(P, omega)
    return {
        "orbGL": P.to_json(),
        "omega": omega,
        "value0": rat_str(sv.value0),
        "dvalue0": rat_str(sv.dvalue0),
        "quotientLength": st.quotient_length,
        "candidates": st.candidates,
        "contributing": st.contributing,
    }


def cmd_orb_u(params: dict, opts) -> dict:
    from .orbital import OrbStats, orb_u

    ctx = _ctx(params)
    gram = _matrix(_req(params, "gram"), ctx.d, "gram")
    g = _matrix(_req(params, "g"), ctx.d, "g")
    u = _vector(_req(params, "u"), ctx.d, "u")
    x = ob.UnitaryPair(gram, g, u, ctx.d)
    st = OrbStats()
    n = orb_u(x, ctx, st)
    return {"orbU": n, "quotientLength": st.quotient_length, "candidates": st.candidates}


def _iv_from(params: dict, ctx) -> ob.InvariantVector:
    cp = _vector(_req(params, "charpoly"), ctx.d, "charpoly")
    mo = _vector(_req(params, "moments"), ctx.d, "moments")
    m = params.get("m")
    if m is not None and _int(params, "m") != len(cp) - 1:
        raise SchemaError("m does not match the charpoly degree")
    if len(mo) != len(cp) - 1:
        raise SchemaError("need exactly m moments")
    if cp[-1] != 1:
        raise SchemaError("charpoly must be monic (coefficients low to high)")
    return ob.InvariantVector(cp, mo)


def cmd_fl_check(params: dict, opts) -> dict:
    from .orbital import fl_verify

    ctx = _ctx(params)
    rep = fl_verify(_iv_from(params, ctx), ctx)
    return rep.to_json()


def _sweep_rank1(p: int, d: Optional[int], max_v: int) -> List[dict]:
    from .orbital import fl_verify
    from .series import _norm_one_integral

    ctx = LocalFieldCtx(p, d) if d is not None else LocalFieldCtx.default(p, imaginary=True)
    rows = []
    units = [u for u in range(1, 3 * p) if u % p][:4]
    for g in _norm_one_integral(ctx, 3):
        for v in range(max_v + 1):
            for u in units:
                xi = Fraction(u * p ** v)
                rep = fl_verify(ob.InvariantVector([-g, 1], [xi]), ctx)
                rows.append(_sweep_row(p, ctx.d, 1, rep, g.to_json(), rat_str(xi)))
    return rows


def _sweep_row(p, d, m, rep, gamma_key, xi_key) -> dict:
    return {
        "p": p,
        "d": d,
        "m": m,
        "gamma": json.dumps(gamma_key, sort_keys=True) if not isinstance(gamma_key, str) else gamma_key,
        "moments": xi_key,
        "side": rep.side,
        "value0": rat_str(rep.gl.value0),
        "orbU": rep.orb_u,
        "maximalOrder": rep.maximal_order,
        "verdict": rep.verdict,
    }


def _sweep_rank2_one(args) -> dict:
    from .orbital import fl_verify

    p, d, seed = args
    ctx = LocalFieldCtx(p, d) if d is not None else LocalFieldCtx.default(p, imaginary=True)
    rng = random.Random(seed)
    while True:
        s = ob.random_semilie_rank2(rng, ctx)
        if ob.is_strongly_rs(s):
            break
    iv = ob.invariants(s)
    rep = fl_verify(iv, ctx)
    return _sweep_row(p, ctx.d, 2, rep, iv.to_json()["charpoly"], json.dumps(iv.to_json()["moments"], sort_keys=True))


def _jobs(opts) -> int:
    env = os.environ.get("JR_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError as exc:
            raise SchemaError("JR_JOBS must be an integer") from exc
    return max(1, int(getattr(opts, "jobs", 1) or 1))


def cmd_fl_sweep(params: dict, opts) -> dict:
    ps = params.get("p", [3, 5])
    ps = ps if isinstance(ps, list) else [ps]
    ms = params.get("m", [1, 2])
    ms = ms if isinstance(ms, list) else [ms]
    d = params.get("d")
    max_v = _int(params, "max_valuation", 4)
    count = _int(params, "count", 10)
    seed = _int(params, "seed", 0)
    rows: List[dict] = []
    for p in ps:
        p = int(p)
        if 1 in ms:
            rows.extend(_sweep_rank1(p, d, max_v))
        if 2 in ms:
            tasks = [(p, d, seed * 100003 + 7919 * p + k) for k in range(count)]
            jobs = _jobs(opts)
            if jobs > 1:
                with ProcessPoolExecutor(max_workers=jobs) as pool:
                    rows.extend(pool.map(_sweep_rank2_one, tasks))
            else:
                rows.extend(map(_sweep_rank2_one, tasks))
    fails = sum(1 for r in rows if r["verdict"] != "PASS")
    return {"seed": seed, "instances": len(rows), "failures": fails, "rows": rows, "verdict": "PASS" if not fails else "FAIL"}


def cmd_reduce(params: dict, opts) -> dict:
    from .orbital import orb_reduction_check

    ctx = _ctx(params)
    variant = params.get("variant", "r")
    if variant not in ("r", "r_natural"):
        raise SchemaError("variant must be 'r' or 'r_natural'")
    xi = _elem(params.get("xi", "1"), ctx.d, "xi")
    side = params.get("side", "symmetric")
    G = _matrix(_req(params, "gprime"), ctx.d, "gprime")
    if side == "symmetric":
        R = ob.reduce_symmetric(G, ctx, variant, xi)
        out = {
            "side": side,
            "variant": variant,
            "gamma": _enc(R.gamma),
            "u1": _enc(R.u1),
            "u2": _enc(R.u2),
            "e": _enc(R.e),
            "identities": R.identities(R.twisted),
        }
        if params.get("orbital", False):
            chk = orb_reduction_check(None, G, xi, ctx)
            out["orbital"] = {k: (v.to_json() if hasattr(v, "to_json") else v) for k, v in chk.items()}
        ok = all(out["identities"].values()) and out.get("orbital", {}).get("equal", True)
        out["verdict"] = "PASS" if ok else "FAIL"
        return out
    if side == "unitary":
        H = _matrix(_req(params, "gram"), ctx.d, "gram")
        R = ob.reduce_unitary(G, H, ctx, variant, xi)
        ids = R.identities(R.twisted, H)
        return {
            "verdict": "PASS" if all(ids.values()) else "FAIL",
            "side": side,
            "variant": variant,
            "g": _enc(R.g),
            "u": _enc(R.u),
            "e": _enc(R.e),
            "identities": ids,
        }
    raise SchemaError("side must be 'symmetric' or 'unitary'")


def cmd_weil_check(params: dict, opts) -> dict:
    from . import weil as wl
    from .lattice import Lattice

    ctx = _ctx(params)
    gram = _matrix(params.get("gram", [["1"]]), ctx.d, "gram")
    rng = random.Random(_int(params, "seed", 0))
    samples = _int(params, "samples", 5)
    space = wl.hermitian_to_quadratic(gram, ctx.p, ctx.d)
    gamma = wl.weil_constant(gram, ctx)
    gauss = wl.weil_index_gauss(space)
    involution = []
    for _ in range(samples):
        f = wl.random_coset_function(space, rng)
        involution.append(wl.schwartz_equal(wl.fourier(wl.fourier(f)), f.reflect()))
    L = Lattice.standard(space.dim, ctx.p)
    braid = {}
    for a in (Fraction(ctx.p), Fraction(2) if ctx.p != 2 else Fraction(3)):
        f = wl.Schwartz.indicator(space, L)
        braid[rat_str(a)] = wl.schwartz_equal(wl.act_m(f, a), wl.weil_act(wl.m_word(a), f, gamma))
    ok = all(involution) and gamma == gauss and gamma * gamma == space.chi(-1) and all(braid.values())
    return {
        "dimension": space.dim,
        "chiMinusOne": space.chi(-1),
        "weilConstant": wl.coef_json(gamma),
        "gaussSumIndex": wl.coef_json(gauss),
        "constantsAgree": gamma == gauss,
        "gammaSquaredIsChi": gamma * gamma == space.chi(-1),
        "involution": involution,
        "braid": braid,
        "verdict": "PASS" if ok else "FAIL",
    }


def cmd_arch(params: dict, opts) -> dict:
    from . import arch

    xi = params.get("xi")
    if xi is None:
        raise SchemaError("missing parameter 'xi'")
    try:
        xi = float(xi)
        s = float(params.get("s", 0))
        a = float(params.get("a", 1))
        b = float(params.get("b", 0))
        theta = float(params.get("theta", 0))
    except (TypeError, ValueError) as exc:
        raise SchemaError(f"bad numeric parameter: {exc}") from exc
    if xi == 0:
        raise SchemaError("xi must be nonzero")
    deriv = bool(params.get("deriv", False))
    h = arch.Iwasawa(a, b, theta)
    v = arch.orb_arch(xi, s, deriv=deriv, h=h)
    if s == 0 and h.is_identity:
        if not deriv:
            formula = "exp(-pi xi)" if xi > 0 else "0"
        else:
            formula = "-(1/2) log(xi) exp(-pi xi)" if xi > 0 else "(1/2) exp(-pi xi) Ei(-2 pi |xi|)"
    else:
        formula = "2^(-1/2)|xi|^((1-s)/2)(K_((1-s)/2)(pi|xi|) + sgn(xi) K_((1+s)/2)(pi|xi|)), twisted by h"
    out = {"xi": xi, "s": s, "deriv": deriv, "formula": formula}
    out.update(v.to_json())
    return out


def cmd_tate_fe(params: dict, opts) -> dict:
    from .series import FIELDS, tate_fe_check

    field = params.get("field", "Q(i)")
    if field not in FIELDS:
        raise SchemaError(f"field must be one of {sorted(FIELDS)}")
    try:
        s = float(params.get("s", 0))
    except (TypeError, ValueError) as exc:
        raise SchemaError("s must be a number") from exc
    X = _int(params, "X", 50)
    tol = float(params.get("tolerance", getattr(opts, "tolerance", None) or 1e-6))
    return tate_fe_check(field, s, X, tol).to_json()


HANDLERS: Dict[str, Callable[[dict, Any], dict]] = {
    "orb-gl": cmd_orb_gl,
    "orb-u": cmd_orb_u,
    "fl-check": cmd_fl_check,
    "fl-sweep": cmd_fl_sweep,
    "reduce": cmd_reduce,
    "weil-check": cmd_weil_check,
    "arch": cmd_arch,
    "tate-fe": cmd_tate_fe,
}


# -- driver -----------------------------------------------------------------------------


def run(spec: dict, opts=None) -> tuple:
    """Validate and dispatch a problem spec; returns (exit code, report dict)."""
    opts = opts or argparse.Namespace(jobs=1, tolerance=None)
    if not isinstance(spec, dict):
        return EXIT_SCHEMA, {"error": "schema", "message": "spec must be a JSON object"}
    cmd = spec.get("command")
    params = spec.get("params", {})
    if cmd not in HANDLERS:
        return EXIT_SCHEMA, {"error": "schema", "message": f"unknown command {cmd!r}"}
    if not isinstance(params, dict):
        return EXIT_SCHEMA, {"error": "schema", "message": "params must be an object"}
    try:
        report = HANDLERS[cmd](params, opts)
    except SchemaError as exc:
        return EXIT_SCHEMA, {"error": "schema", "message": str(exc)}
    except JRError as exc:
        return EXIT_PRECONDITION, {"error": exc.code, "message": str(exc)}
    report = {"command": cmd, **report}
    code = EXIT_FAIL if report.get("verdict") == "FAIL" else EXIT_OK
    return code, report


def _to_csv(report: dict) -> str:
    buf = io.StringIO()
    rows = report.get("rows")
    if rows:
        keys = sorted({k for r in rows for k in r})
        w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({k: r.get(k) for k in keys})
        return buf.getvalue()
    flat = {k: (json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v) for k, v in report.items()}
    keys = sorted(flat)
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    w.writerow(flat)
    return buf.getvalue()


def _flag_params(args) -> dict:
    params: Dict[str, Any] = {}
    for key in ("p", "d", "m", "seed"):
        v = getattr(args, key, None)
        if v is not None:
            params[key] = v
    if getattr(args, "max_valuation", None) is not None:
        params["max_valuation"] = args.max_valuation
    if getattr(args, "tolerance", None) is not None:
        params["tolerance"] = args.tolerance
    return params


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="jrorbit", description="Exact orbital integrals, Weil representation checks and archimedean special values.")
    ap.add_argument("command", choices=COMMANDS + ("run",))
    ap.add_argument("--spec", help="JSON problem spec file, or - for stdin")
    ap.add_argument("--params", help="inline JSON object of command parameters")
    ap.add_argument("--p", type=int)
    ap.add_argument("--d", type=int)
    ap.add_argument("--m", type=int)
    ap.add_argument("--max-valuation", dest="max_valuation", type=int)
    ap.add_argument("--tolerance", type=float)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--xi", type=float)
    ap.add_argument("--s", type=float)
    ap.add_argument("--deriv", action="store_true")
    ap.add_argument("--field")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_SCHEMA if exc.code else EXIT_OK
    spec: Dict[str, Any]
    try:
        if args.spec:
            text = sys.stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
            spec = json.loads(text)
            if args.command != "run" and isinstance(spec, dict):
                spec.setdefault("command", args.command)
        else:
            if args.command == "run":
                raise SchemaError("run needs --spec")
            params = json.loads(args.params) if args.params else {}
            if not isinstance(params, dict):
                raise SchemaError("--params must be a JSON object")
            spec = {"command": args.command, "params": {**_flag_params(args), **params}}
            extra = spec["params"]
            if args.xi is not None:
                extra.setdefault("xi", args.xi)
            if args.s is not None:
                extra.setdefault("s", args.s)
            if args.deriv:
                extra.setdefault("deriv", True)
            if args.field:
                extra.setdefault("field", args.field)
    except (json.JSONDecodeError, SchemaError, OSError) as exc:
        print(json.dumps({"error": "schema", "message": str(exc)}, sort_keys=True))
        return EXIT_SCHEMA
    code, report = run(spec, args)
    if args.format == "csv" and "error" not in report:
        sys.stdout.write(_to_csv(report))
    else:
        print(json.dumps(report, sort_keys=True, indent=1))
    return code


if __name__ == "__main__":
    sys.exit(main())
