"""Command-line driver: ``fmseries {taylor,padic-demo,verify}``.

Exit codes: 0 success, 2 usage or parse error, 3 domain or precision error,
4 a property check failed.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import sys
from dataclasses import dataclass

import numpy as np

from .calculus import basis, fd_ladder, from_expr, padic_mixed_quotients
from .errors import DomainError, FmseriesError, MinSmoothnessError, UsageError
from .expr import deriv1, max_variable, parse_expr, partial_derivative, taylor_at
from .padic import DEFAULT_PRECISION, format_literal
from .scalars import Field, field_from_name
from .taylor import to_derivatives
from .verify import DEFAULT_SEED, SUITES, run_suite

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_FAILED = 0, 2, 3, 4
FORMATS = ("json", "csv", "pretty")


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    field: Field
    order: int
    precision: int
    steps: tuple
    fmt: str
    seed: int

    def __post_init__(self):
        if self.order < 0:
            raise UsageError("order must be >= 0")


def _parse_steps(text):
    try:
        steps = tuple(float(s) for s in text.split(",") if s.strip())
    except ValueError as exc:
        raise UsageError(f"bad step ladder {text!r}") from exc
    if not steps or any(s <= 0 for s in steps):
        raise UsageError("steps must be positive")
    return steps


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default="rational",
                        help="rational | real | padic:p (default: rational)")
    common.add_argument("--order", type=int, default=4, help="truncation order N")
    common.add_argument("--precision", type=int, default=None,
                        help=f"p-adic digits (default {DEFAULT_PRECISION})")
    common.add_argument("--steps", default=None,
                        help="comma separated step ladder for finite differences")
    common.add_argument("--format", dest="fmt", choices=FORMATS, default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--output", default=None, metavar="FILE")

    parser = argparse.ArgumentParser(prog="fmseries", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("taylor", parents=[common], help="series and derivatives of an expression")
    p.add_argument("expr", help='e.g. "x1*x2 + exp(x1)"')
    p.add_argument("point", nargs="?", default=None,
                   help="comma separated base point (default: origin)")

    p = sub.add_parser("padic-demo", parents=[common],
                       help="mixed quotients of the p-adic counterexample")
    p.add_argument("--prime", "-p", type=int, default=None)
    p.add_argument("-a", type=int, default=1, help="first step exponent")
    p.add_argument("-b", type=int, default=3, help="second step exponent")

    p = sub.add_parser("verify", parents=[common], help="run a property suite")
    p.add_argument("suite", help=" | ".join(SUITES))
    p.add_argument("--cases", action="store_true", help="emit one JSON line per case")
    return parser


def _config(args) -> RunConfig:
    field = field_from_name(args.field, args.precision)
    precision = args.precision if args.precision is not None else \
        getattr(field, "precision", DEFAULT_PRECISION)
    steps = _parse_steps(args.steps) if args.steps else ()
    return RunConfig(args.command, field, args.order, precision, steps, args.fmt, args.seed)


# -- subcommands ---------------------------------------------------------------

def cmd_taylor(text: str, point, order: int, field: Field, steps=()) -> dict:
    e = parse_expr(text)
    if point is None:
        d = max(max_variable(e), 1)
        x = [field.zero()] * d
    else:
        x = [field.parse(c) for c in point.split(",")]
    s = taylor_at(e, x, order, field)
    seq = to_derivatives(s)
    d = s.in_dim
    table = []
    for n in range(order + 1):
        for alpha in _multi_indices(d, n):
            val = partial_derivative(seq, alpha)
            table.append({"alpha": list(alpha), "value": field.format(val)})
    out = {
        "expr": str(e),
        "series": s.to_json(),
        "derivatives": seq.to_json(),
        "partials": table,
    }
    if d == 1:
        out["deriv1"] = [field.format(deriv1(seq, n)) for n in range(order + 1)]
    if steps and order >= 1:
        if not field.archimedean:
            raise UsageError("step ladders need an archimedean field")
        f = from_expr(e, d, field)
        J = s.jacobian()
        out["ladders"] = [fd_ladder(f, x, basis(field, d, j), J[:, j], steps)
                          for j in range(d)]
    return out


def _multi_indices(d: int, n: int):
    """Multi-indices of total degree ``n`` in lexicographically decreasing order."""
    for combo in itertools.combinations_with_replacement(range(d), n):
        yield tuple(combo.count(i) for i in range(d))


def cmd_padic_demo(p: int, a: int, b: int, precision: int) -> dict:
    q_xy, q_yx = padic_mixed_quotients(p, a, b, precision)
    expected = [int(a < b), int(b < a)]
    got = [q_xy, q_yx]
    passed = all(q == e for q, e in zip(got, expected))
    return {
        "prime": p, "a": a, "b": b, "precision": precision,
        "steps": [f"{p}^{a}", f"{p}^{b}"],
        "quotients": [_as_number(q.to_fraction()) for q in got],
        "literals": [format_literal(q) for q in got],
        "expected": expected,
        "passed": passed,
    }


def _as_number(q):
    return q.numerator if q.denominator == 1 else str(q)


def cmd_verify(name: str, seed: int) -> dict:
    return run_suite(name, seed)


# -- rendering -----------------------------------------------------------------

def _default(o):
    if isinstance(o, np.generic):
        return o.item()
    return str(o)


def render(command: str, result: dict, fmt: str, per_case: bool = False) -> str:
    if fmt == "json":
        if command == "verify" and per_case:
            lines = [json.dumps(c, sort_keys=True, default=_default) for c in result["cases"]]
            summary = {k: v for k, v in result.items() if k != "cases"}
            return "\n".join(lines + [json.dumps(summary, sort_keys=True)]) + "\n"
        if command == "verify":
            result = {k: v for k, v in result.items() if k != "cases"}
        return json.dumps(result, indent=2, sort_keys=True, default=_default) + "\n"
    if fmt == "csv":
        return _render_csv(command, result)
    return _render_pretty(command, result)


def _render_csv(command, result):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if command == "taylor":
        if "ladders" in result:
            w.writerow(["direction", "step", "error_norm", "quotient", "reference"])
            for j, lad in enumerate(result["ladders"]):
                for r in lad["rows"]:
                    w.writerow([j, r["step"], r["error_norm"], " ".join(r["quotient"]),
                                " ".join(r["reference"])])
        else:
            w.writerow(["alpha", "value"])
            for row in result["partials"]:
                w.writerow([" ".join(map(str, row["alpha"])), row["value"]])
    elif command == "padic-demo":
        w.writerow(["prime", "a", "b", "precision", "q_xy", "q_yx", "passed"])
        w.writerow([result["prime"], result["a"], result["b"], result["precision"],
                    *result["quotients"], result["passed"]])
    else:
        keys = sorted({k for c in result["cases"] for k in c})
        w.writerow(keys)
        for c in result["cases"]:
            w.writerow([c.get(k, "") for k in keys])
    return buf.getvalue()


def _render_pretty(command, result):
    lines = []
    if command == "taylor":
        lines.append(f"f = {result['expr']}  at {result['series']['base_point']}")
        for n, t in enumerate(result["series"]["terms"]):
            lines.append(f"  p_{n}: {' '.join(t['coeffs'])}")
        lines.append("partial derivatives:")
        for row in result["partials"]:
            lines.append(f"  {tuple(row['alpha'])}: {row['value']}")
        for j, lad in enumerate(result.get("ladders", [])):
            lines.append(f"ladder e_{j + 1}: order {lad['order']:.3f}")
            for r in lad["rows"]:
                lines.append(f"  t={r['step']:<8g} error {r['error_norm']:.3e}")
    elif command == "padic-demo":
        r = result
        lines.append(f"p={r['prime']} steps (p^{r['a']}, p^{r['b']}) precision {r['precision']}")
        lines.append(f"  d/dy then d/dx: {r['quotients'][0]}  (expected {r['expected'][0]})")
        lines.append(f"  d/dx then d/dy: {r['quotients'][1]}  (expected {r['expected'][1]})")
        lines.append("  ok" if r["passed"] else "  MISMATCH")
    else:
        lines.append(f"suite {result['suite']} seed {result['seed']}: "
                     f"{result['passed']}/{result['total']} passed")
        for c in result["cases"]:
            if not c["passed"]:
                lines.append(f"  FAIL case {c['case']}")
    return "\n".join(lines) + "\n"


# -- entry point -------------------------------------------------------------------

def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = _config(args)
        if cfg.subcommand == "taylor":
            result = cmd_taylor(args.expr, args.point, cfg.order, cfg.field, cfg.steps)
            status = EXIT_OK
        elif cfg.subcommand == "padic-demo":
            prime = args.prime if args.prime is not None else getattr(cfg.field, "prime", 5)
            precision = args.precision if args.precision is not None else 16
            result = cmd_padic_demo(prime, args.a, args.b, precision)
            status = EXIT_OK if result["passed"] else EXIT_FAILED
        else:
            result = cmd_verify(args.suite, cfg.seed)
            status = EXIT_OK if result["failed"] == 0 else EXIT_FAILED
        text = render(cfg.subcommand, result, cfg.fmt, getattr(args, "cases", False))
    except UsageError as exc:
        print(f"fmseries: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, MinSmoothnessError) as exc:
        print(f"fmseries: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ZeroDivisionError as exc:
        print(f"fmseries: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except FmseriesError as exc:
        print(f"fmseries: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
