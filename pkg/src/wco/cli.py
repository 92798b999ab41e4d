"""Command line front-end.  All output is JSON on stdout.

Exit codes: 0 when every requested check ran and no theorem was violated,
2 when a theorem-backed invariant was violated, 1 on input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import calculus, gallery, oracle, properties, verify
from ._numeric import to_json_number, tolerances
from .calculus import NotDenselyDefined
from .properties import PreconditionError, Status, Verdict
from .sampling import random_corpus
from .series import InconclusiveSeries
from .space import SpaceError, format_label, load_space

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2


class InputError(Exception):
    pass


def _number(text: str):
    try:
        return Fraction(text) if "/" in text else float(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _params(pairs) -> dict:
    out = {}
    for item in pairs or []:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputError(f"--param expects K=V, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _load_input(args):
    if getattr(args, "space", None):
        path = Path(args.space)
        try:
            text = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc}") from exc
        try:
            return load_space(text, exact=args.exact), {"space": str(path)}
        except SpaceError as exc:
            raise InputError(str(exc)) from exc
    if getattr(args, "gallery", None):
        try:
            family = gallery.build_family(args.gallery, _params(args.param), args.window)
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(str(exc.args[0] if exc.args else exc)) from exc
        return family, {"gallery": args.gallery, "params": _params(args.param),
                        "window": getattr(family, "window", None)}
    raise InputError("give --space FILE or --gallery NAME")


def _jsonable(v):
    if isinstance(v, dict):
        return {format_label(k) if isinstance(k, tuple) else str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, (Fraction, complex)) or v == float("inf"):
        return to_json_number(v)
    return v


def _emit(doc: dict, out: str | None) -> None:
    text = json.dumps(_jsonable(doc), indent=2)
    if out:
        Path(out).write_text(text + "\n")
    sys.stdout.write(text + "\n")


def _field(values) -> dict:
    return {format_label(k): to_json_number(v) for k, v in values.items()}


def _weight_field(values) -> dict:
    out = {}
    for k, v in values.items():
        v = complex(v) if isinstance(v, complex) else v
        out[format_label(k)] = [v.real, v.imag] if isinstance(v, complex) else [to_json_number(v), 0]
    return out


# -- report -------------------------------------------------------------------

def _serwis(space, p, alpha, q):
    verdicts = properties.serwis_conditions(space, alpha)
    chain = properties.serwis_chain_violations(verdicts)
    status = Status.FAILS if chain else Status.HOLDS
    witness = {"point": None, "violated": chain} if chain else None
    details = {k: v.to_json() for k, v in verdicts.items()}
    if chain:
        details["theorem_violation"] = True
    return Verdict(status, witness=witness, details=details)


def _perp(space, p, alpha, q):
    points = properties.aluthge_domain_perp(space, alpha)
    return Verdict(Status.HOLDS, details={"perp": [format_label(x) for x in points],
                                          "transform_densely_defined": not points})


def _fixed_point_agreement(space, p, alpha, q):
    fixed = properties.aluthge_fixed_point(space, alpha)
    quasi = properties.is_quasinormal(space)
    decided = Status.INCONCLUSIVE not in (fixed.status, quasi.status)
    details = {"fixed_point": fixed.status.value, "quasinormal": quasi.status.value}
    if decided and fixed.status != quasi.status:
        details["theorem_violation"] = True
        return Verdict(Status.FAILS, witness={"point": None, **details}, details=details)
    return Verdict(fixed.status, witness=fixed.witness, details=details)


def _certificates(space, p, alpha, q):
    results = space.verify_certificates() if hasattr(space, "verify_certificates") else []
    bad = [r["name"] for r in results if not r["ok"]]
    if bad:
        return Verdict(Status.FAILS, witness={"point": None, "certificates": bad},
                       details={"results": results})
    return Verdict(Status.HOLDS, details={"results": results})


CHECKS = {
    "densely-defined": lambda s, p, a, q: properties.is_densely_defined(s),
    "bounded": lambda s, p, a, q: properties.is_bounded(s),
    "p-hyponormal": lambda s, p, a, q: properties.is_p_hyponormal(s, p),
    "class-q": lambda s, p, a, q: properties.in_class_Q(s, p),
    "class-q-consequence": lambda s, p, a, q: properties.class_q_consequence(s, p),
    "quasinormal": lambda s, p, a, q: properties.is_quasinormal(s),
    "fixed-point": _fixed_point_agreement,
    "aluthge-closed": lambda s, p, a, q: properties.aluthge_closed_criterion(s, a),
    "serwis": _serwis,
    "perp": _perp,
    "improvement": lambda s, p, a, q: properties.improvement_report(s, p, a),
    "ups": lambda s, p, a, q: properties.ups_inequality(s, p, a),
    "pq": lambda s, p, a, q: properties.pq_monotonicity(s, p, q),
    "certificates": _certificates,
}
DEFAULT_CHECKS = ("densely-defined", "bounded", "p-hyponormal", "quasinormal")


def _run_check(name, space, p, alpha, q) -> dict:
    entry = {"check": name, "parameters": {"p": p, "alpha": alpha, "q": q}}
    if name not in CHECKS:
        entry.update(status="error", error=f"unknown check {name!r}", error_kind="input")
        return entry
    try:
        verdict = CHECKS[name](space, p, alpha, q)
    except PreconditionError as exc:
        entry.update(status="inconclusive", error=f"precondition: {exc}", error_kind="precondition")
        return entry
    except NotDenselyDefined as exc:
        entry.update(status="error", error=str(exc), error_kind="precondition")
        return entry
    except (InconclusiveSeries, ArithmeticError, ValueError) as exc:
        entry.update(status="error", error=str(exc), error_kind="input")
        return entry
    entry.update(verdict.to_json())
    return entry


def cmd_report(args) -> int:
    start = time.perf_counter()
    try:
        space, descriptor = _load_input(args)
    except InputError as exc:
        _emit({"error": str(exc)}, args.out)
        return EXIT_INPUT
    p = args.p
    alpha = args.alpha
    q = args.q if args.q is not None else p / 2
    checks = args.check or list(DEFAULT_CHECKS)
    entries = [_run_check(name, space, p, alpha, q) for name in checks]
    report = {"input": descriptor, "seed": args.seed, "checks": entries, "tolerances": tolerances()}
    if args.timing:
        report["timing_seconds"] = round(time.perf_counter() - start, 6)
    _emit(report, args.out)
    if any(e.get("details", {}).get("theorem_violation") for e in entries):
        return EXIT_VIOLATION
    if any(e.get("error_kind") == "input" for e in entries):
        return EXIT_INPUT
    return EXIT_OK


# -- aluthge ------------------------------------------------------------------

def cmd_aluthge(args) -> int:
    try:
        space, descriptor = _load_input(args)
    except InputError as exc:
        _emit({"error": str(exc)}, args.out)
        return EXIT_INPUT
    alpha = args.alpha
    try:
        weights = calculus.aluthge_weight(space, alpha)
        rn = calculus.aluthge_rn(space, alpha)
        perp = properties.aluthge_domain_perp(space, alpha)
        closed = properties.aluthge_closed_criterion(space, alpha)
    except (NotDenselyDefined, ValueError, InconclusiveSeries) as exc:
        _emit({"input": descriptor, "alpha": alpha, "error": str(exc)}, args.out)
        return EXIT_INPUT
    _emit({"input": descriptor, "alpha": alpha, "w_alpha": _weight_field(weights),
           "h_alpha": _field(rn), "perp": [format_label(x) for x in perp],
           "closed_criterion": closed.to_json()}, args.out)
    return EXIT_OK


# -- oracle -------------------------------------------------------------------

def _matrix_from_json(path: str) -> np.ndarray:
    try:
        rows = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read matrix {path}: {exc}") from exc
    try:
        return np.array([[complex(*entry) if isinstance(entry, list) else complex(entry) for entry in row]
                         for row in rows])
    except (TypeError, ValueError) as exc:
        raise InputError(f"matrix entries must be numbers or [re, im]: {exc}") from exc


def _suite_limits() -> dict:
    tol = tolerances()
    return {"aluthge": 10 * tol["oracle"], "partial_isometry": tol["oracle"], "modulus": tol["oracle"],
            "adjoint": tol["exact"], "adjoint_modulus": tol["oracle"], "projection": tol["oracle"]}


def _summarize(results: list[dict]) -> dict:
    flat: dict = {}
    disagreements = {"hyponormality": [], "fixed_point": []}
    for index, r in enumerate(results):
        for key, value in r.items():
            if key.endswith("_disagreements"):
                disagreements[key[: -len("_disagreements")]].extend({**d, "space": index} for d in value)
            elif isinstance(value, dict):
                for sub, v in value.items():
                    flat[f"{key}.{sub}"] = max(flat.get(f"{key}.{sub}", 0.0), v)
            else:
                flat[key] = max(flat.get(key, 0.0), value)
    return {"max_errors": flat, "disagreements": disagreements}


def _violations(summary: dict) -> list[str]:
    limits = _suite_limits()
    out = []
    for key, value in summary["max_errors"].items():
        head, _, sub = key.partition(".")
        limit = limits.get(sub, limits.get(head))
        if sub == "reconstruction":
            limit = tolerances()["oracle"]
        if limit is not None and value > limit:
            out.append(f"{key} = {value:.3e} exceeds {limit:.1e}")
    for kind, items in summary["disagreements"].items():
        if items:
            out.append(f"{len(items)} {kind} disagreements")
    return out


def cmd_oracle(args) -> int:
    alphas = tuple(args.alpha_list)
    powers = tuple(args.p_list)
    entries: list[dict] = []
    code = EXIT_OK
    rng = np.random.default_rng(args.seed)
    if args.matrix:
        try:
            mat = _matrix_from_json(args.matrix)
            eig = oracle.sym_eig(mat)
            entries.append({"name": "matrix", "eigenvalues": eig.eigenvalues.tolist()})
        except (InputError, oracle.NotHermitian) as exc:
            entries.append({"name": "matrix", "status": "error", "error": str(exc)})
            code = EXIT_INPUT
    spaces = []
    if args.space:
        try:
            space, _ = _load_input(args)
        except InputError as exc:
            _emit({"error": str(exc)}, args.out)
            return EXIT_INPUT
        if getattr(space, "is_lazy", False):
            space = space.truncate()
        spaces.append(("input", space))
    for i, space in enumerate(random_corpus(args.seed, args.random, max_dim=args.max_dim)):
        spaces.append((f"random[{i}]", space))
    results = []
    for label, space in spaces:
        try:
            results.append(verify.run_all(space, rng, alphas, powers))
        except (ValueError, ArithmeticError) as exc:
            entries.append({"name": label, "status": "error", "error": str(exc)})
            code = EXIT_INPUT
    summary = _summarize(results)
    problems = _violations(summary)
    if problems and code == EXIT_OK:
        code = EXIT_VIOLATION
    _emit({"seed": args.seed, "random": args.random, "max_dim": args.max_dim, "alphas": list(alphas),
           "powers": list(powers), "spaces": len(results), **summary, "limits": _suite_limits(),
           "violations": problems, "entries": entries}, args.out)
    return code


# -- gallery ------------------------------------------------------------------

def cmd_gallery(args) -> int:
    if args.gallery_command == "list":
        _emit({"families": gallery.list_families()}, args.out)
        return EXIT_OK
    try:
        family = gallery.build_family(args.name, _params(args.param), args.window)
    except (KeyError, ValueError, TypeError, InputError) as exc:
        _emit({"error": str(exc.args[0] if exc.args else exc)}, args.out)
        return EXIT_INPUT
    _emit(family.to_json(), args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_input(parser, required=True) -> None:
    src = parser.add_mutually_exclusive_group(required=required)
    src.add_argument("--space", help="JSON space document")
    src.add_argument("--gallery", help="gallery family name")
    parser.add_argument("--param", action="append", metavar="K=V", help="gallery parameter")
    parser.add_argument("--window", type=int, help="gallery window size")
    parser.add_argument("--exact", action="store_true", help="rational arithmetic for --space input")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wco", description="Weighted composition operator checks (JSON output).")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="also write the JSON output to this file")
    sub = parser.add_subparsers(dest="command", required=True)

    rep = sub.add_parser("report", parents=[common], help="run property checks")
    _add_input(rep)
    rep.add_argument("--check", action="append", help=f"one of: {', '.join(CHECKS)}")
    rep.add_argument("--p", type=_number, default=1.0)
    rep.add_argument("--alpha", type=_number, default=0.5)
    rep.add_argument("--q", type=_number)
    rep.add_argument("--seed", type=int, default=0, help="recorded for replay")
    rep.add_argument("--timing", action="store_true", help="include wall-clock timing")
    rep.set_defaults(func=cmd_report)

    alu = sub.add_parser("aluthge", parents=[common], help="transformed weight, its h, perp set and closedness")
    _add_input(alu)
    alu.add_argument("--alpha", type=_number, default=0.5)
    alu.set_defaults(func=cmd_aluthge)

    orc = sub.add_parser("oracle", parents=[common], help="formula/oracle agreement suites")
    _add_input(orc, required=False)
    orc.add_argument("--matrix", help="JSON matrix to validate and diagonalize")
    orc.add_argument("--alpha", dest="alpha_list", type=_number, nargs="+", default=[0.25, 0.5, 0.75, 1.0])
    orc.add_argument("--p", dest="p_list", type=_number, nargs="+", default=[0.25, 0.5, 1.0, 2.0])
    orc.add_argument("--seed", type=int, default=0)
    orc.add_argument("--random", type=int, default=0, help="number of random spaces")
    orc.add_argument("--max-dim", type=int, default=12)
    orc.set_defaults(func=cmd_oracle)

    gal = sub.add_parser("gallery", help="example families")
    gsub = gal.add_subparsers(dest="gallery_command", required=True)
    gsub.add_parser("list", parents=[common])
    build = gsub.add_parser("build", parents=[common])
    build.add_argument("name")
    build.add_argument("--param", action="append", metavar="K=V")
    build.add_argument("--window", type=int)
    gal.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        _emit({"error": str(exc)}, getattr(args, "out", None))
        return EXIT_INPUT
    except ValueError as exc:
        if "WCO_TOL" in str(exc):
            _emit({"error": str(exc)}, getattr(args, "out", None))
            return EXIT_INPUT
        raise


if __name__ == "__main__":
    sys.exit(main())
