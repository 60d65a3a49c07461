"""Command-line front end: ``classtwo <command> INPUT [...]``.

INPUT is a path, ``-`` for stdin, or inline JSON of the form
``{"p": 3, "m": [1, 1], "d": [1], "a": [[0, 0]], "b": [[1]], "lambda_order": "lex"}``
with a and b in embedded coordinates over Z/p^{d_r}.

Exit codes: 0 success, 1 invalid input, 2 parse error, 3 inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Any, Optional

from . import lifting, oracle
from .abelian import BudgetExceeded, GroupShape, validate_hom
from .actions import pullback_class, pushforward
from .arith import MAX_MODULUS, is_prime
from .cocycle import LAMBDA_ORDERS, CocyclePair, is_diamond, violations
from .extension import DEFAULT_CLOSURE_BUDGET

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_INCONCLUSIVE = 0, 1, 2, 3

INPUT_FIELDS = {"p", "m", "d", "a", "b", "lambda_order", "coordinates"}


class InputError(Exception):
    """Bad input; ``code`` is the exit status to use."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@dataclass
class JobConfig:
    command: str
    inputs: list[str]
    budget_cosets: int = lifting.DEFAULT_COSET_BUDGET
    budget_table: int = oracle.DEFAULT_TABLE_BUDGET
    budget_closure: int = DEFAULT_CLOSURE_BUDGET
    workers: int = 1
    lambda_order: Optional[str] = None
    fmt: str = "json"

    def __post_init__(self):
        for name in ("budget_cosets", "budget_table", "budget_closure", "workers"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name.replace('_', '-')} must be positive", EXIT_PARSE)


# --------------------------------------------------------------------------
# serialization


def pair_to_json(pair: CocyclePair) -> dict:
    return {
        "p": pair.p,
        "m": list(pair.G.exponents),
        "d": list(pair.A.exponents),
        "a": [list(row) for row in pair.a],
        "b": [list(row) for row in pair.b],
        "lambda_order": pair.lambda_order,
        "coordinates": "embedded",
    }


def _int_list(value, name) -> list[int]:
    if not isinstance(value, list) or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
        raise InputError(f"{name} must be a list of integers", EXIT_PARSE)
    return value


def _matrix(value, name) -> list[list[int]]:
    if not isinstance(value, list):
        raise InputError(f"{name} must be a list of rows", EXIT_PARSE)
    return [_int_list(row, f"{name} row") for row in value]


def pair_from_json(data: Any, lambda_order: Optional[str] = None) -> CocyclePair:
    """Parse and check one input document; raises InputError."""
    if not isinstance(data, dict):
        raise InputError("input must be a JSON object", EXIT_PARSE)
    unknown = set(data) - INPUT_FIELDS
    if unknown:
        raise InputError(f"unknown fields: {sorted(unknown)}", EXIT_PARSE)
    missing = {"p", "m", "d", "a", "b"} - set(data)
    if missing:
        raise InputError(f"missing fields: {sorted(missing)}", EXIT_PARSE)
    if data.get("coordinates", "embedded") != "embedded":
        raise InputError("only embedded coordinates are supported", EXIT_INVALID)
    p = data["p"]
    if not isinstance(p, int) or isinstance(p, bool):
        raise InputError("p must be an integer", EXIT_PARSE)
    m, d = _int_list(data["m"], "m"), _int_list(data["d"], "d")
    a, b = _matrix(data["a"], "a"), _matrix(data["b"], "b")
    order = lambda_order or data.get("lambda_order", "lex")
    if order not in LAMBDA_ORDERS:
        raise InputError(f"lambda_order must be one of {LAMBDA_ORDERS}", EXIT_INVALID)
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime", EXIT_INVALID)
    for name, exps in (("m", m), ("d", d)):
        if exps and p ** max(exps) > MAX_MODULUS:
            raise InputError(f"p^max({name}) exceeds {MAX_MODULUS}", EXIT_INVALID)
    try:
        pair = CocyclePair(GroupShape(p, tuple(m)), GroupShape(p, tuple(d)),
                           tuple(map(tuple, a)), tuple(map(tuple, b)), order)
    except ValueError as exc:
        raise InputError(str(exc), EXIT_INVALID) from exc
    if lambda_order and lambda_order != data.get("lambda_order", "lex"):
        pair = CocyclePair(pair.G, pair.A, pair.a, pair.b, data.get("lambda_order", "lex")).reorder(lambda_order)
    return pair


def load_document(source: str) -> Any:
    try:
        if source == "-":
            text = sys.stdin.read()
        elif source.lstrip().startswith(("{", "[")):
            text = source
        else:
            with open(source, encoding="utf-8") as fh:
                text = fh.read()
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {source}: {exc}", EXIT_PARSE) from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON: {exc}", EXIT_PARSE) from exc


def load_pair(source: str, lambda_order: Optional[str] = None) -> CocyclePair:
    return pair_from_json(load_document(source), lambda_order)


def load_matrix(source: str, name: str) -> list[list[int]]:
    return _matrix(load_document(source), name)


def dumps(report: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True, indent=2)
    lines = []
    for key in sorted(report):
        value = report[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        lines.append(f"{key}: {value}")
    return "\n".join(lines)


# --------------------------------------------------------------------------
# commands; each returns (exit code, report)


def cmd_validate(cfg: JobConfig) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    bad = violations(pair)
    diamond = is_diamond(pair)
    m = pair.G.exponents
    report = {
        "valid": not bad,
        "violations": [{"matrix": k, "row": u, "col": c} for k, u, c in bad],
        "diamond": diamond,
        "dr_le_m_n_minus_1": pair.n >= 2 and pair.A.top <= m[-2] if pair.r else True,
        "coordinates": "embedded",
    }
    if not diamond:
        report["warning"] = "b does not generate A; E(alpha) does not have commutator subgroup A"
    return (EXIT_OK if not bad else EXIT_INVALID), report


def _liftable(pair: CocyclePair):
    try:
        lifting.require_liftable(pair)
    except lifting.LiftingError as exc:
        raise InputError(str(exc), EXIT_INVALID) from exc


def cmd_aut(cfg: JobConfig) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    _liftable(pair)
    try:
        report = lifting.aut_order(pair, cfg.budget_cosets, cfg.workers).to_json()
    except BudgetExceeded as exc:
        return EXIT_INCONCLUSIVE, {"status": "inconclusive", "reason": str(exc), "count": exc.count}
    report["coordinates"] = "embedded"
    return EXIT_OK, report


def cmd_iso(cfg: JobConfig) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    other = load_pair(cfg.inputs[1], cfg.lambda_order)
    if (pair.G, pair.A) != (other.G, other.A):
        raise InputError("the two inputs have different (p, m, d)", EXIT_INVALID)
    _liftable(pair)
    _liftable(other)
    result = lifting.iso_test(pair, other, cfg.budget_cosets)
    report = result.to_json()
    report["coordinates"] = "embedded"
    return (EXIT_INCONCLUSIVE if result.status == "inconclusive" else EXIT_OK), report


def cmd_oracle(cfg: JobConfig) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    try:
        table = oracle.build_table(pair, cfg.budget_table)
        count = oracle.brute_aut_count(table, cfg.budget_table)
    except BudgetExceeded as exc:
        return EXIT_INCONCLUSIVE, {"status": "inconclusive", "reason": str(exc)}
    report = {"order": table.order, "aut_count": count,
              "order_census": {str(k): v for k, v in table.order_census().items()}}
    try:
        lifting.require_liftable(pair)
        formula = lifting.aut_order(pair, cfg.budget_cosets, cfg.workers).total_order
        report["formula_total"] = formula
        report["matches_formula"] = formula == count
    except (lifting.LiftingError, BudgetExceeded):
        report["formula_total"] = None
        report["matches_formula"] = None
    return EXIT_OK, report


def cmd_normalize(cfg: JobConfig) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    if violations(pair):
        raise InputError("pair violates the kernel bounds", EXIT_INVALID)
    new, y, x = lifting.normalize(pair, verify=True)
    return EXIT_OK, {"pair": pair_to_json(new), "y": y, "x": x, "coordinates": "embedded"}


def cmd_lift_check(cfg: JobConfig, x_src: str, target_src: Optional[str], iso: bool) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    target = load_pair(target_src, cfg.lambda_order) if target_src else pair
    x = load_matrix(x_src, "x")
    _liftable(pair)
    _liftable(target)
    if len(x) != pair.n or any(len(row) != pair.n for row in x) or not validate_hom(x, pair.G, pair.G):
        raise InputError("x is not an endomorphism matrix of G", EXIT_INVALID)
    try:
        inp = lifting.prepare(pair, target)
    except lifting.LiftingError as exc:
        raise InputError(str(exc), EXIT_INVALID) from exc
    ok = lifting.check_lift(x, inp, iso=iso)
    report = {"lifts": ok, "iso": iso, "x": x, "coordinates": "embedded"}
    if ok:
        y = lifting.find_compatible_y(x, inp, iso=iso)
        wit = lifting.build_lift(x, y, pair, inp.target, verify=True)
        report["witness"] = wit.to_json()
    return EXIT_OK, report


def cmd_transform(cfg: JobConfig, kind: str, x_src: Optional[str], y_src: Optional[str]) -> tuple[int, dict]:
    pair = load_pair(cfg.inputs[0], cfg.lambda_order)
    x = load_matrix(x_src, "x") if x_src else None
    y = load_matrix(y_src, "y") if y_src else None
    try:
        if kind == "pullback":
            if x is None:
                raise InputError("--x is required", EXIT_PARSE)
            new = pullback_class(x, pair)
        elif kind == "pushforward":
            if y is None:
                raise InputError("--y is required", EXIT_PARSE)
            new = pushforward(y, pair)
        else:
            if x is None or y is None:
                raise InputError("--x and --y are required", EXIT_PARSE)
            new = lifting.transform(pair, y, x)
    except ValueError as exc:
        raise InputError(str(exc), EXIT_INVALID) from exc
    return EXIT_OK, {"pair": pair_to_json(new), "kind": kind, "coordinates": "embedded"}


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-cosets", type=int, default=lifting.DEFAULT_COSET_BUDGET,
                        help="max automorphisms of G to enumerate")
    common.add_argument("--budget-table", type=int, default=oracle.DEFAULT_TABLE_BUDGET,
                        help="max group order for Cayley tables")
    common.add_argument("--budget-closure", type=int, default=DEFAULT_CLOSURE_BUDGET,
                        help="max elements in closure computations")
    common.add_argument("--workers", type=int, default=1, help="processes for coset filtering")
    common.add_argument("--lambda-order", choices=LAMBDA_ORDERS, default=None,
                        help="renumber the pairs (i, j) before computing")
    common.add_argument("--format", choices=("json", "text"), default="json", dest="fmt")

    parser = argparse.ArgumentParser(prog="classtwo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("validate", "check the kernel bounds and the generation condition"),
                        ("aut", "order of Aut(E) from the lifting criterion"),
                        ("oracle", "brute-force automorphism count from the Cayley table"),
                        ("normalize", "simplify a by automorphisms of A and G")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input")
    p = sub.add_parser("iso", parents=[common], help="decide E(first) = E(second)")
    p.add_argument("input")
    p.add_argument("other")
    p = sub.add_parser("lift-check", parents=[common], help="does a given x lift?")
    p.add_argument("input")
    p.add_argument("--x", required=True, help="matrix of x as JSON or a path")
    p.add_argument("--target", help="target pair (defaults to the input)")
    p.add_argument("--iso", action="store_true", help="require an isomorphism")
    p = sub.add_parser("transform", parents=[common], help="move a pair along x and/or y")
    p.add_argument("input")
    p.add_argument("--kind", choices=("pullback", "pushforward", "iso"), default="iso")
    p.add_argument("--x")
    p.add_argument("--y")
    return parser


def run(argv: Optional[list[str]] = None) -> tuple[int, str]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_OK if exc.code == 0 else EXIT_PARSE), ""
    fmt = args.fmt
    try:
        inputs = [args.input] + ([args.other] if args.command == "iso" else [])
        cfg = JobConfig(args.command, inputs, args.budget_cosets, args.budget_table, args.budget_closure,
                        args.workers, args.lambda_order, fmt)
        if args.command == "lift-check":
            code, report = cmd_lift_check(cfg, args.x, args.target, args.iso)
        elif args.command == "transform":
            code, report = cmd_transform(cfg, args.kind, args.x, args.y)
        else:
            code, report = COMMANDS[args.command](cfg)
    except InputError as exc:
        code, report = exc.code, {"error": str(exc)}
    return code, dumps(report, fmt)


COMMANDS = {
    "validate": cmd_validate,
    "aut": cmd_aut,
    "iso": cmd_iso,
    "oracle": cmd_oracle,
    "normalize": cmd_normalize,
}


def main(argv: Optional[list[str]] = None) -> int:
    code, text = run(argv)
    if text:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
