"""Command-line interface.

Subcommands:
  local     symbolic heat-invariant densities a_1..a_J
  alpha     regularized-trace densities alpha_1..alpha_J for a decay rate
  coeffs    numeric a_j and scattering-phase b_j for a concrete potential
  regtrace  numeric alpha_j and trace-distribution beta_j
  verify    numerical verification suites (routes | fk | trace | taylor)

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numeric
failure.  The decay rate epsilon is accepted only as an exact rational
string such as "1/3", so the subtraction depth N = floor(n/epsilon) is
unambiguous.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .invariants import (alpha_density, alpha_density_tail_sum, alpha_regime,
                         heat_invariant_binomial, heat_invariant_operator_sum,
                         regularization_depth)
from .numeric import (QuadratureConfig, QuadratureError, b_from_a,
                      beta_from_alpha, coefficient_table, evaluate_density,
                      integrate_density)
from .oracles import (BridgeSampler, TraceGrid, discretized_schrodinger_1d,
                      fit_expansion, fk_diagonal, nc_taylor_matrix_check,
                      relative_heat_trace_1d,
                      taylor_family_matches_operator_family)
from .potentials import (PotentialEvalError, PotentialSyntaxError,
                         parse_potential)

MAX_ORDER = 6  # closed-form densities beyond this blow up combinatorially

EXIT_OK = 0
EXIT_VERIFY_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(Exception):
    pass


def _parse_epsilon(text: str) -> Fraction:
    if "." in text:
        raise UsageError(
            f"epsilon must be an exact rational such as 1/3, got {text!r}")
    try:
        eps = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad epsilon {text!r}: {exc}") from exc
    if not 0 < eps <= 1:
        raise UsageError(f"epsilon must lie in (0, 1], got {eps}")
    return eps


def _check_order(order: int):
    if order < 1:
        raise UsageError(f"order must be >= 1, got {order}")
    if order > MAX_ORDER:
        raise UsageError(
            f"order {order} exceeds the supported maximum {MAX_ORDER}"
            " (symbolic densities blow up combinatorially)")


def _emit(args, payload: dict, csv: str, text: str):
    if args.format == "json":
        out = json.dumps(payload, indent=2)
    elif args.format == "csv":
        out = csv
    else:
        out = text
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(out + "\n")
    else:
        print(out)


# ---------------------------------------------------------------------------
# Symbolic commands
# ---------------------------------------------------------------------------


def cmd_local(args) -> int:
    _check_order(args.order)
    rows = []
    for j in range(1, args.order + 1):
        binomial_route = heat_invariant_binomial(j, args.dim)
        operator_route = heat_invariant_operator_sum(j, args.dim)
        rows.append({
            "j": j,
            "density": binomial_route.density.to_text(),
            "routes_agree": binomial_route.density == operator_route.density,
        })
    csv = "\n".join(["j,density,routes_agree"]
                    + [f'{r["j"]},"{r["density"]}",{r["routes_agree"]}' for r in rows])
    text = "\n".join(f'a_{r["j"]}: {r["density"]}'
                     + ("" if r["routes_agree"] else "   [ROUTE MISMATCH]")
                     for r in rows)
    _emit(args, {"dim": args.dim, "rows": rows}, csv, text)
    return EXIT_OK if all(r["routes_agree"] for r in rows) else EXIT_VERIFY_FAIL


def cmd_alpha(args) -> int:
    _check_order(args.order)
    eps = _parse_epsilon(args.epsilon)
    depth = regularization_depth(args.dim, eps)
    rows = []
    for j in range(1, args.order + 1):
        inv = alpha_density(j, args.dim, eps)
        rows.append({"j": j, "regime": alpha_regime(j, args.dim, eps),
                     "density": inv.density.to_text()})
    csv = "\n".join(["j,regime,density"]
                    + [f'{r["j"]},{r["regime"]},"{r["density"]}"' for r in rows])
    text = "\n".join([f"N = {depth}"]
                     + [f'alpha_{r["j"]} [{r["regime"]}]: {r["density"]}' for r in rows])
    _emit(args, {"dim": args.dim, "epsilon": str(eps), "N": depth,
                 "rows": rows}, csv, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Numeric commands
# ---------------------------------------------------------------------------


def _quad_config(args) -> QuadratureConfig:
    config = QuadratureConfig()
    if args.box is not None:
        config.half_width = args.box
    return config


def cmd_coeffs(args) -> int:
    _check_order(args.order)
    potential = parse_potential(args.potential, args.dim)
    invariants = [heat_invariant_binomial(j, args.dim)
                  for j in range(1, args.order + 1)]
    table = coefficient_table(invariants, potential, args.dim, derived="b",
                              config=_quad_config(args))
    _emit(args, table.to_json_dict(), table.to_csv(), table.to_text())
    return EXIT_OK


def cmd_regtrace(args) -> int:
    _check_order(args.order)
    eps = _parse_epsilon(args.epsilon)
    potential = parse_potential(args.potential, args.dim)
    invariants = [alpha_density(j, args.dim, eps)
                  for j in range(1, args.order + 1)]
    table = coefficient_table(invariants, potential, args.dim, derived="beta",
                              config=_quad_config(args))
    _emit(args, table.to_json_dict(), table.to_csv(), table.to_text())
    return EXIT_OK


# ---------------------------------------------------------------------------
# Verification suites
# ---------------------------------------------------------------------------


def _report(args, checks: list[dict]) -> int:
    ok = all(c["pass"] for c in checks)
    payload = {"suite": args.suite, "pass": ok, "checks": checks}
    csv = "\n".join(
        ["name,target,observed,tolerance,pass"]
        + [f'{c["name"]},{c.get("target", "")},{c.get("observed", "")},'
           f'{c.get("tolerance", "")},{c["pass"]}' for c in checks])
    text = "\n".join(
        f'[{"PASS" if c["pass"] else "FAIL"}] {c["name"]}: '
        f'observed={c.get("observed")} target={c.get("target")} '
        f'tol={c.get("tolerance")}' for c in checks)
    _emit(args, payload, csv, text)
    return EXIT_OK if ok else EXIT_VERIFY_FAIL


def verify_routes(args) -> int:
    _check_order(args.order)
    checks = []
    for j in range(1, args.order + 1):
        agree = (heat_invariant_binomial(j, args.dim).density
                 == heat_invariant_operator_sum(j, args.dim).density)
        checks.append({"name": f"density_routes_j{j}_n{args.dim}",
                       "target": "equal", "observed": "equal" if agree else "different",
                       "tolerance": "exact", "pass": agree})
    if args.epsilon:
        eps = _parse_epsilon(args.epsilon)
        for j in range(1, args.order + 1):
            if alpha_regime(j, args.dim, eps) != "middle":
                continue
            agree = (alpha_density(j, args.dim, eps).density
                     == alpha_density_tail_sum(j, args.dim, eps).density)
            checks.append({"name": f"alpha_routes_j{j}_n{args.dim}_eps{eps}",
                           "target": "equal",
                           "observed": "equal" if agree else "different",
                           "tolerance": "exact", "pass": agree})
    return _report(args, checks)


def verify_fk(args) -> int:
    potential = parse_potential(args.potential, args.dim)
    sampler = BridgeSampler(seed=args.seed, steps=args.steps,
                            paths=args.paths, dim=args.dim)
    x = (0.0,) * args.dim
    estimate, stderr = fk_diagonal(potential, x, args.t, sampler)
    terms = 1.0
    for j in (1, 2, 3):
        aj = evaluate_density(heat_invariant_binomial(j, args.dim).density,
                              potential, x)
        terms += aj * args.t ** j
    target = (4 * math.pi * args.t) ** (-args.dim / 2) * terms
    tolerance = 3 * stderr
    ok = abs(estimate - target) <= tolerance
    return _report(args, [{
        "name": "fk_vs_3term_expansion", "target": target,
        "observed": estimate, "tolerance": tolerance, "pass": bool(ok)}])


def verify_trace(args) -> int:
    potential = parse_potential(args.potential, 1)
    ts = np.geomspace(0.02, 0.2, 12)
    samples = [(float(t), relative_heat_trace_1d(potential, float(t), TraceGrid()))
               for t in ts]
    report = fit_expansion(samples, 1, 4)
    a1, _ = integrate_density(heat_invariant_binomial(1, 1).density, potential, 1)
    a2, _ = integrate_density(heat_invariant_binomial(2, 1).density, potential, 1)
    checks = []
    for j, target, tol in ((1, a1, 0.02), (2, a2, 0.10)):
        observed = report.coefficient(j)
        ok = abs(observed - target) <= tol * abs(target)
        checks.append({"name": f"trace_fit_c{j}", "target": target,
                       "observed": observed, "tolerance": f"{tol:.0%} relative",
                       "pass": bool(ok)})
    return _report(args, checks)


def verify_taylor(args) -> int:
    checks = []
    for seed in (args.seed, args.seed + 1, args.seed + 2):
        report = nc_taylor_matrix_check(args.matrix_dim, args.order, seed)
        lo, hi = args.order + 0.8, args.order + 1.3
        ok = lo <= report.slope <= hi
        checks.append({"name": f"taylor_slope_N{args.order}_seed{seed}",
                       "target": f"[{lo}, {hi}]", "observed": report.slope,
                       "tolerance": "slope window", "pass": bool(ok)})
    rng = np.random.default_rng(args.seed)
    grid = np.linspace(-3.0, 3.0, args.matrix_dim)
    h0_mat, h_mat = discretized_schrodinger_1d(np.exp(-grid ** 2), 1.0)
    for m in range(args.order + 1):
        deviation = taylor_family_matches_operator_family(h0_mat, h_mat, m)
        checks.append({"name": f"taylor_family_equals_operator_family_m{m}",
                       "target": 0.0, "observed": deviation,
                       "tolerance": 1e-12, "pass": bool(deviation <= 1e-12)})
    return _report(args, checks)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

POTENTIAL_HELP = (
    "potential expression in x1..xn; grammar: + - * / ^ (integer exponents), "
    "parentheses, pi, exp, sin, cos, tanh, sqrt, and powr(base, p, q) for "
    "rational powers with positive base")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatinv",
        description="Heat invariants and regularized-trace coefficients of"
                    " -Laplacian + V, exactly and numerically.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv", "text"),
                       default="text")
        p.add_argument("--output", help="write output to a file instead of stdout")

    p = sub.add_parser("local", help="symbolic heat-invariant densities")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--order", type=int, required=True, help=f"max j (<= {MAX_ORDER})")
    common(p)
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("alpha", help="regularized-trace densities")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epsilon", required=True,
                   help='decay rate as an exact rational, e.g. "1/3"')
    p.add_argument("--order", type=int, required=True)
    common(p)
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("coeffs", help="numeric heat invariants and b_j")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--potential", required=True, help=POTENTIAL_HELP)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--box", type=float, help="quadrature box half-width")
    common(p)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("regtrace", help="numeric alpha_j and beta_j")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--potential", required=True, help=POTENTIAL_HELP)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--box", type=float)
    common(p)
    p.set_defaults(func=cmd_regtrace)

    p = sub.add_parser("verify", help="numerical verification suites")
    p.add_argument("suite", choices=("routes", "fk", "trace", "taylor"))
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--epsilon")
    p.add_argument("--potential", default="exp(-x1^2)", help=POTENTIAL_HELP)
    p.add_argument("--t", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--paths", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=256)
    p.add_argument("--matrix-dim", type=int, default=6)
    common(p)
    p.set_defaults(func=None)
    return parser


_VERIFY = {"routes": verify_routes, "fk": verify_fk, "trace": verify_trace,
           "taylor": verify_taylor}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify":
        args.func = _VERIFY[args.suite]
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PotentialSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (QuadratureError, PotentialEvalError, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
