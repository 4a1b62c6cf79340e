"""Command-line front end.

    opcalc solve [FILE]                       problem document -> solution document
    opcalc table --realization R [--nu V]     built-in transform pairs, one JSON row per line
    opcalc seq OP FILE...                     product | invert | shift on sequence files

Exit status: 0 on success, 2 on malformed or invalid input, 3 on solver
errors (the structured error name is printed to stderr).
"""
from __future__ import annotations

import argparse
import json
import sys

import jsonschema

from . import numerics
from .errors import OpCalcError
from .rational import Poly, RationalExpr, rational_to_sequence
from .scalar import parse_scalar, scalar_to_json
from .sequence import Sequence, cauchy_product, default_truncation, invert, shift_identity_rhs, shift_left, shift_right
from .solver import IVProblem, Solution, solve_ivp
from .transforms import NamedFunction, Realization, table

_NUMBER = {
    "oneOf": [
        {"type": "number"},
        {"type": "string", "pattern": r"^\s*[-+]?\d+(\s*/\s*\d+)?\s*$"},
        {"type": "array", "items": {"oneOf": [{"type": "number"}, {"type": "string"}]}, "minItems": 2, "maxItems": 2},
    ]
}

PROBLEM_SCHEMA = {
    "type": "object",
    "required": ["realization", "operator", "init"],
    "additionalProperties": False,
    "properties": {
        "realization": {
            "type": "object",
            "required": ["kind"],
            "additionalProperties": False,
            "properties": {
                "kind": {"enum": ["maclaurin", "bessel", "zbridge"]},
                "nu": {"oneOf": [{"type": "number", "minimum": 0}, {"type": "string"}]},
            },
            "if": {"properties": {"kind": {"const": "bessel"}}},
            "then": {"required": ["nu"]},
            "else": {"not": {"required": ["nu"]}},
        },
        "operator": {"type": "array", "items": _NUMBER, "minItems": 1},
        "rhs": {
            "oneOf": [
                {
                    "type": "object",
                    "required": ["kind"],
                    "additionalProperties": False,
                    "properties": {"kind": {"const": "zero"}},
                },
                {
                    "type": "object",
                    "required": ["kind", "num"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "rational"},
                        "num": {"type": "array", "items": _NUMBER},
                        "den": {"type": "array", "items": _NUMBER, "minItems": 1},
                        "var": {"enum": ["s", "z"]},
                    },
                },
                {
                    "type": "object",
                    "required": ["kind", "family"],
                    "additionalProperties": False,
                    "properties": {
                        "kind": {"const": "named"},
                        "family": {"type": "string"},
                        "params": {"type": "object"},
                        "prefactor": _NUMBER,
                    },
                },
            ]
        },
        "init": {"type": "array", "items": _NUMBER},
        "options": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "truncation": {"type": "integer", "minimum": 1},
                "mode": {"enum": ["exact", "float"]},
                "sample_points": {"type": "array", "items": {"type": "number"}},
            },
        },
    },
}


class ValidationFailure(Exception):
    pass


_INT_PARAMS = {"degree", "multiplicity"}


def _parse_named(doc, exact):
    params = {}
    for k, v in doc.get("params", {}).items():
        if k in _INT_PARAMS:
            params[k] = int(v)
        elif k == "kind":
            params[k] = v
        else:
            params[k] = parse_scalar(v, exact)
    pre = parse_scalar(doc.get("prefactor", 1), exact)
    return NamedFunction(doc["family"], params, pre)


def parse_problem(doc) -> tuple[IVProblem, dict]:
    """Validate a problem document and build the IVProblem plus options."""
    validator = jsonschema.Draft7Validator(PROBLEM_SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        e = errors[0]
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ValidationFailure(f"field {where}: {e.message}")
    opts = dict(doc.get("options", {}))
    exact = opts.get("mode", "exact") == "exact"
    rz = doc["realization"]
    try:
        nu = parse_scalar(rz["nu"], exact) if "nu" in rz else 0
        realization = Realization(rz["kind"], nu)
        op = [parse_scalar(c, exact) for c in doc["operator"]]
        init = [parse_scalar(v, exact) for v in doc["init"]]
        rhs_doc = doc.get("rhs", {"kind": "zero"})
        if rhs_doc["kind"] == "zero":
            rhs = None
        elif rhs_doc["kind"] == "rational":
            num = Poly([parse_scalar(c, exact) for c in rhs_doc["num"]])
            den = Poly([parse_scalar(c, exact) for c in rhs_doc.get("den", [1])])
            rhs = RationalExpr(num, den, var=rhs_doc.get("var", "s"))
        else:
            rhs = _parse_named(rhs_doc, exact)
        problem = IVProblem(realization, tuple(op), rhs, tuple(init))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationFailure(str(exc)) from exc
    except OpCalcError as exc:
        raise ValidationFailure(f"{exc.name}: {exc}") from exc
    if not exact:
        problem = problem.to_float()
    return problem, opts


def _default_samples(realization):
    if realization.kind == "zbridge":
        return [0, 1, 2, 3, 4]
    return [0.5, 1.0, 2.0]


def solution_doc(problem: IVProblem, sol: Solution, sample_points=None) -> dict:
    R = problem.realization
    j = scalar_to_json
    doc = {
        "realization": R.to_json(),
        "transform": {
            "num": [j(c) for c in sol.transform.num.coeffs],
            "den": [j(c) for c in sol.transform.full_den.coeffs],
        },
        "pole_terms": [],
        "poly_part": [],
        "named_terms": [nf.to_json() for nf in sol.named],
        "closed_form": sol.closed_form(),
        "coefficients": [j(c) for c in sol.coeff_seq],
        "samples": [],
        "diagnostics": dict(sol.diagnostics),
    }
    if sol.decomposition is not None:
        doc["pole_terms"] = [
            {"rate": j(t.rate), "multiplicity": t.multiplicity, "coeff": j(t.coeff)} for t in sol.decomposition.terms
        ]
        doc["poly_part"] = [j(c) for c in sol.decomposition.poly_part.coeffs]
    g = rational_to_sequence(problem.rhs_rational(), sol.N)
    nu = R.nu if R.kind == "bessel" else 0
    rhs_eval = numerics.SeriesEvaluator(g, R.kind, nu)
    y_eval = sol.evaluator()
    points = sample_points if sample_points is not None else _default_samples(R)
    for t in points:
        if R.kind == "zbridge":
            t = int(t)
            value = sol(t)
            lhs = sum(complex(c) * y_eval(t + k) for k, c in enumerate(problem.op_poly))
            res = abs(lhs - complex(rhs_eval(t))) if t + problem.order < sol.N else None
        else:
            value = sol(t)
            res = numerics.residual(problem, y_eval, t, rhs_eval)
        doc["samples"].append({"t": t, "value": j(complex(value)), "residual": res})
    return doc


def _dump(obj):
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def cmd_solve(args) -> int:
    try:
        text = sys.stdin.read() if args.file in (None, "-") else open(args.file, encoding="utf-8").read()
        doc = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: cannot read problem document: {exc}", file=sys.stderr)
        return 2
    try:
        problem, opts = parse_problem(doc)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        sol = solve_ivp(problem, opts.get("truncation") or default_truncation())
        out = solution_doc(problem, sol, opts.get("sample_points"))
    except OpCalcError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 3
    print(_dump(out))
    return 0


def cmd_table(args) -> int:
    try:
        nu = parse_scalar(args.nu) if args.nu is not None else 0
        if args.realization != "bessel" and args.nu is not None:
            raise ValueError("--nu applies only to the bessel realization")
        realization = Realization(args.realization, nu)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for entry in table(realization):
        print(_dump(entry.to_json(args.terms)))
    return 0


def _read_sequence(path):
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict):
        values, N = doc["coeffs"], doc.get("truncation")
    else:
        values, N = doc, None
    # a bare list is zero-padded to the default truncation
    return Sequence.from_values([parse_scalar(v) for v in values], N or max(len(values), default_truncation()))


def _seq_doc(seq: Sequence):
    return {"coeffs": [scalar_to_json(c) for c in seq], "truncation": seq.N, "degraded": seq.degraded}


def cmd_seq(args) -> int:
    try:
        seqs = [_read_sequence(p) for p in args.files]
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: cannot read sequence: {exc}", file=sys.stderr)
        return 2
    need = {"product": 2, "invert": 1, "shift": 1}[args.op]
    if len(seqs) != need:
        print(f"error: {args.op} takes {need} operand file(s)", file=sys.stderr)
        return 2
    try:
        if args.op == "product":
            out = cauchy_product(seqs[0], seqs[1], strict=args.strict)
        elif args.op == "invert":
            out = invert(seqs[0])
        else:
            fn = {"right": shift_right, "left": shift_left, "identity": shift_identity_rhs}[args.direction]
            out = fn(seqs[0], args.m)
    except OpCalcError as exc:
        print(f"{exc.name}: {exc}", file=sys.stderr)
        return 3
    print(_dump(_seq_doc(out)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opcalc", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser(
        "solve",
        help="solve a problem document",
        description="Solve a problem document and print the solution document. "
        "NOTE: for the bessel realization the init values are the operator limits "
        "Y_k = lim_{t->0} L^k y(t) / f_0(t), not derivatives at 0.",
    )
    p.add_argument("file", nargs="?", help="problem JSON (stdin when omitted or '-')")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("table", help="list built-in transform pairs")
    p.add_argument("--realization", required=True)
    p.add_argument("--nu", default=None)
    p.add_argument("--terms", type=int, default=8, help="sequence prefix length per row")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("seq", help="sequence algebra on JSON sequence files")
    p.add_argument("op", choices=["product", "invert", "shift"])
    p.add_argument("files", nargs="+")
    p.add_argument("--m", type=int, default=1, help="shift amount")
    p.add_argument("--direction", choices=["right", "left", "identity"], default="right")
    p.add_argument("--strict", action="store_true", help="reject mismatched truncations")
    p.set_defaults(func=cmd_seq)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
