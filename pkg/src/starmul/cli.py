"""Command-line front end: ``starmul <command> [options]``.

Every command prints a JSON report on stdout (or plain text with
``--format text``) and a one-line summary on stderr.  Exit codes: 0 when the
verdict is true, 1 when it is false, 2 on errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from starmul import catalog, dsl, series
from starmul.finder import find_A, verify_family
from starmul.muring import MonicZ, MuPoly, SolutionVec, reduce, star_mul, star_pow
from starmul.system import admissibility, grid_verify, residuals, verify_solution

SCHEMA_VERSION = 1
COMMANDS = ("check", "mul", "pow", "verify", "series", "find", "catalog")


class CliError(Exception):
    pass


# -- input helpers ----------------------------------------------------------


def load_system_arg(arg: str):
    """(SystemSpec or None, Fixture or None, canonical text) from a path or fixture name."""
    path = Path(arg)
    if path.is_file():
        text = path.read_text()
        return dsl.parse_system(text), None, text
    try:
        fx = catalog.load_fixture(arg, verify=False)
    except KeyError as e:
        raise CliError(f"no such file or fixture: {arg} ({e.args[0]})") from None
    text = dsl.format_system(fx.sys) if fx.sys is not None else f"numeric fixture {fx.name}"
    return fx.sys, fx, text


def _exact_system(args):
    sys_, fx, text = load_system_arg(args.system)
    if sys_ is None:
        raise CliError(f"fixture {args.system} has no exact form; only 'check' and 'catalog' accept it")
    return sys_, text


def parse_operand(text: str, sys_) -> MuPoly:
    """A vector ``(e0, ..., e_{m-1})`` or a mu-expression, reduced modulo Z."""
    s = text.strip()
    if s.startswith("(") and "," in s:
        try:
            v = dsl.parse_vector(s, sys_.coords)
        except dsl.DSLError:
            v = None
        if v is not None:
            if v.m != sys_.m:
                raise CliError(f"vector has {v.m} entries, expected {sys_.m}")
            return v.to_mupoly()
    return reduce(dsl.parse_mupoly(s, sys_.coords), sys_.z)


def _vec_text(p: MuPoly, m: int) -> str:
    return str(SolutionVec.from_mupoly(p, m))


def _series_spec(args) -> series.SeriesSpec:
    if args.kind == "explicit":
        if not args.coeffs:
            raise CliError("--coeffs is required for explicit series")
        return series.SeriesSpec("explicit", tuple(Fraction(c.strip()) for c in args.coeffs.split(",")))
    if args.kind == "geometric":
        return series.SeriesSpec("geometric", ratio=Fraction(args.ratio))
    return series.SeriesSpec(args.kind)


def _point(text: str, coords) -> tuple:
    pt = dsl.parse_point(text)
    missing = [c for c in coords if c not in pt]
    extra = [c for c in pt if c not in coords]
    if missing or extra:
        raise CliError(f"point must assign exactly {', '.join(coords)}")
    return tuple(pt[c] for c in coords)


def _floats(arr):
    out = []
    for v in arr:
        v = complex(v)
        out.append(v.real if v.imag == 0 else [v.real, v.imag])
    return out


# -- commands -----------------------------------------------------------------


def cmd_check(args):
    sys_, fx, text = load_system_arg(args.system)
    if sys_ is None:
        results = {}
        for label, fn in fx.numeric_solutions:
            rep = grid_verify(fx.numeric, fn, fx.sample_points, args.tolerance or 1e-9)
            results[label] = {"ok": rep.ok, "worst_residual": rep.worst_residual, "points": rep.points}
        verdict = all(r["ok"] for r in results.values())
        return verdict, {"kind": "numeric", "solutions": results}, text, f"{len(results)} numeric solutions checked"
    adm = admissibility(sys_)
    values = {"kind": "exact", "n": sys_.n, "m": sys_.m, "k": sys_.k}
    if not adm.verdict:
        i, j, e = adm.witness
        values["witness"] = {"row": i, "column": j, "entry": str(e)}
        summary = f"not admissible: residual entry ({i}, {j}) = {e}"
    else:
        summary = "admits the star product"
    return adm.verdict, values, text, summary


def cmd_mul(args):
    sys_, text = _exact_system(args)
    a, b = parse_operand(args.left, sys_), parse_operand(args.right, sys_)
    prod = star_mul(a, b, sys_.z, check=True)
    out = SolutionVec.from_mupoly(prod, sys_.m)
    ok = verify_solution(sys_, out)
    result = str(out)
    return ok, {"result": result, "is_solution": ok}, text + args.left + "|" + args.right, result


def cmd_pow(args):
    sys_, text = _exact_system(args)
    base = parse_operand(args.base, sys_)
    try:
        p = star_pow(base, args.exp, sys_.z, check=True)
    except (ValueError, ZeroDivisionError) as e:
        raise CliError(str(e)) from None
    out = SolutionVec.from_mupoly(p, sys_.m)
    ok = verify_solution(sys_, out)
    result = str(out)
    return ok, {"result": result, "is_solution": ok}, text + f"{args.base}^{args.exp}", result


def cmd_verify(args):
    sys_, text = _exact_system(args)
    v = SolutionVec.from_mupoly(parse_operand(args.vector, sys_), sys_.m)
    res = residuals(sys_, v)
    forms = [[str(e) for e in row] for row in res.b]
    ok = res.is_zero()
    summary = "solution" if ok else "not a solution: residual entry (%d, %d) = %s" % res.first_nonzero()
    return ok, {"vector": str(v), "residuals": forms}, text + args.vector, summary


def cmd_series(args):
    sys_, text = _exact_system(args)
    spec = _series_spec(args)
    points = [_point(p, sys_.coords) for p in args.point]
    if not points:
        raise CliError("at least one --point is required")
    tol = args.tolerance or series.FD_TOL
    rows, verdict = [], True
    for pt in points:
        spectrum = series.roots_at_point(sys_.z, pt)
        conv = series.convergence_report(spec, spectrum, args.epsilon, args.mode)
        row = {
            "point": dict(zip(sys_.coords, pt)),
            "roots": [{"value": _floats([lam])[0], "multiplicity": k} for lam, k in spectrum.eigenvalues],
            "converges": conv.ok,
            "regime": conv.regime,
        }
        if not conv.ok:
            row["reason"] = conv.reason
            verdict = False
            rows.append(row)
            continue
        val = series.series_eval_full(spec, sys_.z, pt, args.mode, args.epsilon)
        row["value"] = _floats(val.value)
        if val.route_gap is not None:
            row["route_gap"] = val.route_gap
        if args.residual:
            r = series.residual_at(spec, sys_, pt, args.mode)
            row["residual"] = r
            verdict = verdict and r < tol
        rows.append(row)
    digest = text + json.dumps([spec.kind, [str(c) for c in spec.coeffs], str(spec.ratio), points, args.mode])
    summary = "; ".join(str(r.get("value", r.get("reason"))) for r in rows)
    return verdict, {"kind": spec.kind, "mode": args.mode, "points": rows}, digest, summary


def cmd_find(args):
    if args.system:
        sys_, text = _exact_system(args)
        z, coords = sys_.z, sys_.coords
    else:
        if not (args.z and args.coords):
            raise CliError("give --system, or both --z and --coords")
        coords = tuple(c.strip() for c in args.coords.split(","))
        zp = dsl.parse_mupoly(args.z, coords)
        if zp.degree < 1 or zp.coeff(zp.degree) != 1:
            raise CliError("Z must be monic in mu")
        z = MonicZ.from_mupoly(zp)
        text = f"{args.z}|{args.coords}"
    k = args.k if args.k is not None else z.m - 1
    fam = find_A(z, len(coords), k, coords, leading_identity=args.leading_identity)
    if args.leading_identity:
        # an empty affine family comes back with a zero leading coefficient
        nonempty = not fam.particular.mats[-1][0][0].is_zero()
    else:
        nonempty = fam.dimension > 0
    ok = nonempty and verify_family(fam, [[1] * fam.dimension])
    values = {
        "dimension": fam.dimension,
        "particular": [dsl.format_matrix(m) for m in fam.particular.mats],
        "basis": [[dsl.format_matrix(m) for m in t.mats] for t in fam.basis],
        "slots": [list(s) for s in fam.slots],
    }
    return ok, values, text + f"|k={k}|{args.leading_identity}", f"family of dimension {fam.dimension}"


def cmd_catalog(args):
    if args.dump:
        fx = catalog.load_fixture(args.dump, verify=False)
        if fx.sys is None:
            raise CliError(f"fixture {args.dump} has no exact form")
        body = dsl.format_system(fx.sys)
        return True, {"name": fx.name, "document": body}, args.dump, body.rstrip()
    entries = []
    verdict = True
    for name in catalog.list_fixtures():
        fx = catalog.load_fixture(name, verify=False)
        e = {"name": name, "exact": fx.sys is not None}
        if fx.sys is not None:
            e.update(n=fx.sys.n, m=fx.sys.m, k=fx.sys.k, solutions=len(fx.known_solutions))
        else:
            e.update(n=len(fx.numeric.coords), m=fx.numeric.m, solutions=len(fx.numeric_solutions))
        e["identities"] = [label for label, _ in fx.identities]
        if args.check:
            try:
                fx.check()
                e["checked"] = True
            except AssertionError as err:
                e["checked"] = False
                e["failure"] = str(err)
                verdict = False
        if args.write and fx.sys is not None:
            out = Path(args.write)
            out.mkdir(parents=True, exist_ok=True)
            fname = name.replace(":", "_").replace("/", "_") + ".sys"
            (out / fname).write_text(dsl.format_system(fx.sys))
            e["file"] = str(out / fname)
        entries.append(e)
    return verdict, {"fixtures": entries}, "catalog", f"{len(entries)} fixtures"


HANDLERS = {
    "check": cmd_check,
    "mul": cmd_mul,
    "pow": cmd_pow,
    "verify": cmd_verify,
    "series": cmd_series,
    "find": cmd_find,
    "catalog": cmd_catalog,
}


# -- parser and driver --------------------------------------------------------


class _ArgParser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--tolerance", type=float, default=None)
    common.add_argument("--mode", choices=(series.STRICT, series.RELAXED), default=series.STRICT)

    p = _ArgParser(prog="starmul", description="Star products of solutions of mu-dependent linear PDE systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgParser)

    s = sub.add_parser("check", parents=[common], help="admissibility verdict")
    s.add_argument("--system", required=True, help="system file or fixture name")

    s = sub.add_parser("mul", parents=[common], help="star product of two operands")
    s.add_argument("--system", required=True)
    s.add_argument("--left", required=True)
    s.add_argument("--right", required=True)

    s = sub.add_parser("pow", parents=[common], help="star power")
    s.add_argument("--system", required=True)
    s.add_argument("--base", required=True)
    s.add_argument("--exp", required=True, type=int)

    s = sub.add_parser("verify", parents=[common], help="residual forms of a candidate solution")
    s.add_argument("--system", required=True)
    s.add_argument("--vector", required=True)

    s = sub.add_parser("series", parents=[common], help="evaluate a star power series at points")
    s.add_argument("--system", required=True)
    s.add_argument("--kind", choices=("exp", "sin", "cos", "geometric", "explicit"), required=True)
    s.add_argument("--coeffs", default=None, help="comma-separated coefficients for explicit series")
    s.add_argument("--ratio", default="1")
    s.add_argument("--point", action="append", default=[], help="x=0.2,y=0.9 (repeatable)")
    s.add_argument("--epsilon", type=float, default=0.0)
    s.add_argument("--residual", action="store_true", help="also report the finite-difference residual")

    s = sub.add_parser("find", parents=[common], help="admissible A tensors for a given Z")
    s.add_argument("--system", default=None)
    s.add_argument("--z", default=None)
    s.add_argument("--coords", default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--leading-identity", action="store_true")

    s = sub.add_parser("catalog", parents=[common], help="list or dump fixtures")
    s.add_argument("--dump", default=None, metavar="NAME")
    s.add_argument("--check", action="store_true")
    s.add_argument("--write", default=None, metavar="DIR")
    return p


def _error_object(err: Exception) -> dict:
    obj = {"type": type(err).__name__, "message": str(err)}
    if isinstance(err, dsl.DSLError):
        obj.update(message=err.msg, line=err.line, column=err.col)
    return obj


def run(argv) -> tuple[int, dict, str]:
    """(exit code, report, summary)."""
    t0 = time.perf_counter()
    command = argv[0] if argv else None
    fmt = "json"
    try:
        args = build_parser().parse_args(argv)
        command, fmt = args.command, args.format
        verdict, values, digest_src, summary = HANDLERS[command](args)
    except SystemExit as e:  # --help
        raise e
    except (CliError, dsl.DSLError, ValueError, ArithmeticError, KeyError, OSError) as err:
        report = {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "error": _error_object(err),
            "timings": {"total_s": time.perf_counter() - t0},
        }
        return 2, report, report["error"]["message"]
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": {"argv": list(argv), "sha256": hashlib.sha256(digest_src.encode()).hexdigest()},
        "verdict": bool(verdict),
        "values": values,
        "timings": {"total_s": time.perf_counter() - t0},
    }
    report["_format"] = fmt
    return (0 if verdict else 1), report, summary


def _paint(text: str, ok: bool) -> str:
    if os.environ.get("NO_COLOR") or not sys.stderr.isatty():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, report, summary = run(argv)
    fmt = report.pop("_format", "json")
    if fmt == "text" and code != 2:
        print(summary)
    else:
        print(json.dumps(report, indent=2, sort_keys=True))
    tag = {0: "true", 1: "false", 2: "error"}[code]
    print(_paint(f"[{report['command']}] {tag}: {summary}", code == 0), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
