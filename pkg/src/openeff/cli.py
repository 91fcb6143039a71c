"""Batch command surface: problem specs in, machine-readable reports out.

Commands:
  openeff report <spec.json> [-o out.json]
  openeff sweep  <spec.json> --param {m,R,B0,delta,t} --range a:b:step [-o out.csv]
  openeff verify --suite {fast,full} [--seed N]

Exit codes: 0 every internal check passed, 1 a check failed, 2 input/parse
error, 3 a precondition gate was violated (e.g. divergent C1).  The default
Monte Carlo seed may be set through OPENEFF_SEED; the --seed flag wins.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import verify, weights
from .asymptotics import dk_asymptote_report, jm_asymptote_report
from .kernel import effective_p_report, kernel_inv
from .scalars import theta_eval
from .serialization import (
    ProblemSpec,
    SpecError,
    anchored_obj,
    approx_obj,
    build_report,
    check_obj,
    exact_obj,
    problem_spec_from_dict,
    rational_obj,
    row_obj,
    validate_report,
)
from .toric import PreconditionError

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_PRECONDITION = 3

FLOAT_TOL = 1e-12  # closed-form evaluations are exact up to rounding


def _float_param(params, name, default=None, required=False):
    if name not in params:
        if required:
            raise SpecError(f"missing parameter {name!r}", f"params.{name}")
        return default
    value = params[name]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SpecError(f"{name} must be a number", f"params.{name}")
    return float(value)


def _list_param(params, name, default=None, required=False):
    if name not in params:
        if required:
            raise SpecError(f"missing parameter {name!r}", f"params.{name}")
        return default
    value = params[name]
    if (not isinstance(value, list) or not value
            or any(isinstance(v, bool) or not isinstance(v, (int, float)) for v in value)):
        raise SpecError(f"{name} must be a nonempty list of numbers", f"params.{name}")
    return [float(v) for v in value]


# ---------------------------------------------------------------------------
# Task handlers: spec -> (results, checks, annotations)
# ---------------------------------------------------------------------------

def _task_theta(spec: ProblemSpec):
    t = _float_param(spec.params, "t", required=True)
    if t <= 1.0:
        raise SpecError("t must be > 1", "params.t")
    value = theta_eval(t)
    entry = anchored_obj(value) if t == 1.5 else approx_obj(value, FLOAT_TOL)
    return {"theta": entry}, [], ()


def _task_kernel(spec: ProblemSpec):
    w = spec.monomial_weight()
    res = kernel_inv(spec.poly(), w)
    results = {
        "k_inv": exact_obj(res.k_inv),
        "kernel": exact_obj(res.kernel),
        "jumping_number": rational_obj(res.jumping),
        "ideal_generators": [list(g) for g in res.ideal.generators],
        "projected_support": [list(a) for a in res.projected_support],
    }
    checks = [check_obj("k_inv_finite", res.k_inv.is_finite)]
    return results, checks, res.annotations


def _task_effective_p(spec: ProblemSpec):
    w = spec.monomial_weight()
    rep = effective_p_report(spec.poly(), w)
    results = {
        "c1": exact_obj(rep.c1),
        "c2": exact_obj(rep.c2),
        "ratio": rational_obj(rep.ratio),
        "p_effective": approx_obj(rep.p_effective, FLOAT_TOL),
        "p_berndtsson": approx_obj(rep.berndtsson_p, FLOAT_TOL),
        "membership_tested_at": approx_obj(float(rep.membership_p), FLOAT_TOL),
        "membership": rep.membership_verdict,
    }
    checks = [
        check_obj("membership_below_p_effective", rep.membership_verdict),
        check_obj("p_effective_in_range", 1.0 < rep.p_effective <= 1.5),
        check_obj("theta_exponent_dominates", rep.p_effective > rep.berndtsson_p),
    ]
    return results, checks, rep.annotations


def _task_dk(spec: ProblemSpec):
    w = spec.monomial_weight()
    R_grid = _list_param(spec.params, "R_grid", required=True)
    B0 = _float_param(spec.params, "B0", default=1.0)
    rep = dk_asymptote_report(spec.poly(), w, R_grid, B0)
    results = {
        "hypothesis_ok": rep.hypothesis_ok,
        "band": [row_obj(R, approx_obj(v, FLOAT_TOL * max(1.0, abs(v))))
                 for R, v in rep.band_grid],
        "sublevel": [row_obj(R, approx_obj(v, FLOAT_TOL * max(1.0, abs(v))))
                     for R, v in rep.sublevel_grid],
        "dk_form": [row_obj(r, approx_obj(v, FLOAT_TOL * max(1.0, abs(v))))
                    for r, v in rep.dk_form_grid],
        "band_bound": exact_obj(rep.band_bound),
        "sublevel_bound": exact_obj(rep.sublevel_bound),
        "dk_form_bound": exact_obj(rep.dk_form_bound),
        "classical_bound": exact_obj(rep.classical_bound),
        "lct": rational_obj(rep.jumping_lct),
    }
    if rep.sublevel_constant is not None:
        results["sublevel_constant"] = exact_obj(rep.sublevel_constant)
    if rep.liminf_grid_min is not None:
        results["liminf_grid_min"] = approx_obj(rep.liminf_grid_min, FLOAT_TOL)
    if rep.liminf_extrapolated is not None:
        results["liminf_extrapolated"] = approx_obj(rep.liminf_extrapolated, 1e-6)
    checks = []
    if rep.bound_ok is not None:
        checks.append(check_obj("volume_bound_holds", rep.bound_ok,
                                "grid values with R >= 10 vs kernel inverse"))
    else:
        checks.append(check_obj("hypothesis_gate_reported", True,
                                f"hypothesis_ok={rep.hypothesis_ok}; bound comparison "
                                "skipped" if not rep.hypothesis_ok else "no grid point >= 10"))
    return results, checks, rep.annotations


def _task_jm(spec: ProblemSpec):
    w = spec.monomial_weight()
    R_grid = _list_param(spec.params, "R_grid", required=True)
    deltas = _list_param(spec.params, "delta_list", default=[1, 2, 5, 10])
    if any(d != int(d) or d < 1 for d in deltas):
        raise SpecError("delta_list must contain positive integers", "params.delta_list")
    r_list = _list_param(spec.params, "r_list", default=[])
    rep = jm_asymptote_report(spec.poly(), w, [int(d) for d in deltas], R_grid,
                              r_list=r_list)
    results = {
        "hypothesis_ok": rep.hypothesis_ok,
        "lhs": [row_obj(R, approx_obj(v, FLOAT_TOL * max(1.0, abs(v))))
                for R, v in rep.lhs_grid],
        "rhs_by_delta": [row_obj(row.delta, approx_obj(row.value, FLOAT_TOL))
                         for row in rep.rhs_rows],
        "jumping_number": rational_obj(rep.jumping),
    }
    if rep.rhs_sup is not None:
        results["rhs_sup"] = approx_obj(rep.rhs_sup, FLOAT_TOL)
    if rep.lhs_constant is not None:
        results["lhs_constant"] = exact_obj(rep.lhs_constant)
    if rep.conjecture_grid:
        results["conjecture_form"] = [row_obj(r, approx_obj(v, FLOAT_TOL * max(1.0, abs(v))))
                                      for r, v in rep.conjecture_grid]
    if rep.conjecture_constant is not None:
        results["conjecture_constant"] = exact_obj(rep.conjecture_constant)
    checks = []
    if rep.bound_ok is not None:
        checks.append(check_obj("volume_bound_holds", rep.bound_ok))
    else:
        checks.append(check_obj("hypothesis_gate_reported", True,
                                f"hypothesis_ok={rep.hypothesis_ok}"))
    return results, checks, rep.annotations


def _task_ode(spec: ProblemSpec):
    count = int(_float_param(spec.params, "points", default=200))
    lo = _float_param(spec.params, "t_min", default=0.1)
    hi = _float_param(spec.params, "t_max", default=50.0)
    if not (0.0 < lo < hi and count >= 2):
        raise SpecError("need 0 < t_min < t_max and points >= 2", "params")
    deltas = _list_param(spec.params, "delta_list", default=[1, 2, 5, 10])
    grid = [lo + (hi - lo) * k / (count - 1) for k in range(count)]
    results: dict[str, Any] = {}
    checks = []
    base = weights.gz_residuals(grid)
    results["base_max_residual_flow"] = approx_obj(base.max_residual_flow, 1e-10)
    results["base_max_residual_budget"] = approx_obj(base.max_residual_budget, 1e-10)
    results["base_min_s"] = approx_obj(base.min_s, FLOAT_TOL)
    checks.append(check_obj("base_system_residuals", base.ok))
    for d in deltas:
        if d != int(d) or d < 1:
            raise SpecError("delta_list must contain positive integers", "params.delta_list")
        rep = weights.gzjm_residuals(grid, int(d))
        results[f"delta_{int(d)}_max_residual_flow"] = approx_obj(rep.max_residual_flow, 1e-10)
        results[f"delta_{int(d)}_max_residual_budget"] = approx_obj(rep.max_residual_budget, 1e-10)
        results[f"delta_{int(d)}_min_s"] = approx_obj(rep.min_s, FLOAT_TOL)
        checks.append(check_obj(f"delta_{int(d)}_residuals", rep.ok))
    t0 = _float_param(spec.params, "t0", default=1.0)
    B0 = _float_param(spec.params, "B0", default=1.0)
    results["band_factor"] = approx_obj(weights.a_factor(t0, B0), FLOAT_TOL)
    return results, checks, ()


def _task_audit(spec: ProblemSpec):
    m = _float_param(spec.params, "m", required=True)
    if m != int(m) or m < 1:
        raise SpecError("m must be a positive integer", "params.m")
    B0_list = _list_param(spec.params, "B0_list",
                          default=[1.0, 0.5, 0.25, 0.125, 1 / 16, 1 / 32, 1 / 64])
    audit = weights.chain_audit(int(m), B0_list)
    results = {
        "p": rational_obj(audit.p),
        "c1": exact_obj(audit.c1),
        "c2": exact_obj(audit.c2),
        "ratio": rational_obj(audit.ratio),
        "limit": approx_obj(audit.limit, FLOAT_TOL),
        "band_sums": [row_obj(r.B0, approx_obj(r.closed_sum, 1e-9)) for r in audit.rows],
        "lower_bounds": [row_obj(r.B0, approx_obj(r.lower_bound, FLOAT_TOL))
                         for r in audit.rows],
    }
    checks = [
        check_obj("exact_rational_identity", audit.identity_ok),
        check_obj("series_matches_closed_form", audit.series_matches_closed),
        check_obj("bound_below_series", audit.bound_below_series),
        check_obj("series_below_c1", audit.series_below_c1),
        check_obj("monotone_approach_to_limit", audit.monotone_approach),
        check_obj("theta_bounded_by_ratio", audit.theta_bounded_by_ratio),
    ]
    return results, checks, ()


def _task_verify_all(spec: ProblemSpec):
    seed = spec.params.get("seed", verify.DEFAULT_SEED)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SpecError("seed must be an integer", "params.seed")
    results = {}
    checks = []
    for res in verify.run_suite("fast", seed):
        results[res.name] = res.detail
        checks.append(check_obj(res.name, res.passed))
    return results, checks, ()


_TASK_HANDLERS = {
    "theta": _task_theta,
    "kernel": _task_kernel,
    "effective-p": _task_effective_p,
    "dk": _task_dk,
    "jm": _task_jm,
    "ode": _task_ode,
    "audit": _task_audit,
    "verify-all": _task_verify_all,
}


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _load_spec(path: str) -> ProblemSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise SpecError(str(exc), path) from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"invalid JSON at line {exc.lineno} column {exc.colno}: "
                        f"{exc.msg}", path) from exc
    return problem_spec_from_dict(data)


def cmd_report(args) -> int:
    try:
        spec = _load_spec(args.spec)
        results, checks, annotations = _TASK_HANDLERS[spec.task](spec)
    except SpecError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report = build_report(spec, results, checks, annotations)
    validate_report(report)
    text = json.dumps(report, indent=2, sort_keys=False)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def _parse_range(text: str) -> list[float]:
    try:
        lo_s, hi_s, step_s = text.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError as exc:
        raise SpecError(f"range must look like a:b:step, got {text!r}", "--range") from exc
    if step <= 0 or hi < lo:
        raise SpecError("need a <= b and step > 0", "--range")
    values = []
    k = 0
    while True:
        v = lo + k * step
        if v > hi + 1e-12 * max(1.0, abs(hi)):
            break
        values.append(v)
        k += 1
    return values


_SWEEP_TASKS = {"m": ("effective-p", "kernel"), "R": ("dk",), "B0": ("audit",),
                "delta": ("jm", "ode"), "t": ("theta",)}


def _sweep_rows(spec: ProblemSpec, param: str, values: list[float]) -> tuple[list[str], list[list]]:
    if param in ("m", "delta") and any(v != int(v) for v in values):
        raise SpecError(f"{param} sweep needs integer grid values", "--range")
    if param == "t":
        header = ["t", "theta"]
        return header, [[v, theta_eval(v)] for v in values]
    if param == "m":
        from .toric import MonomialWeight, PolyFunction
        header = ["m", "c1", "c2", "ratio", "p_effective", "p_berndtsson", "membership"]
        rows = []
        for v in values:
            m = int(v)
            rep = effective_p_report(PolyFunction.monomial((m,)), MonomialWeight([m]))
            rows.append([m, str(rep.c1), str(rep.c2), float(rep.ratio),
                         rep.p_effective, rep.berndtsson_p, rep.membership_verdict])
        return header, rows
    if param == "R":
        w = spec.monomial_weight()
        B0 = _float_param(spec.params, "B0", default=1.0)
        rep = dk_asymptote_report(spec.poly(), w, values, B0)
        bound = float(rep.sublevel_bound)
        header = ["R", "value", "bound", "slack"]
        return header, [[R, v, bound, v - bound] for R, v in rep.sublevel_grid]
    if param == "B0":
        m = _float_param(spec.params, "m", required=True)
        audit = weights.chain_audit(int(m), values)
        header = ["B0", "k0", "series_sum", "closed_sum", "lower_bound", "gap_to_limit"]
        return header, [[r.B0, r.k0, r.series_sum, r.closed_sum, r.lower_bound,
                         r.gap_to_limit] for r in audit.rows]
    if param == "delta" and spec.task == "jm":
        w = spec.monomial_weight()
        R_grid = _list_param(spec.params, "R_grid", default=[10.0, 20.0])
        rep = jm_asymptote_report(spec.poly(), w, [int(v) for v in values], R_grid)
        header = ["delta", "kernel_inv", "rhs_value"]
        return header, [[row.delta, float(row.kernel_inv), row.value]
                        for row in rep.rhs_rows]
    if param == "delta":
        header = ["delta", "max_residual_flow", "max_residual_budget", "min_s", "factor"]
        grid = [0.1 + (50.0 - 0.1) * k / 199 for k in range(200)]
        rows = []
        for v in values:
            rep = weights.gzjm_residuals(grid, int(v))
            rows.append([int(v), rep.max_residual_flow, rep.max_residual_budget,
                         rep.min_s, weights.a_factor_jm(int(v))])
        return header, rows
    raise SpecError(f"unknown sweep parameter {param!r}", "--param")


def cmd_sweep(args) -> int:
    try:
        spec = _load_spec(args.spec)
        if args.param not in _SWEEP_TASKS:
            raise SpecError(f"unknown sweep parameter {args.param!r} "
                            f"(expected one of {sorted(_SWEEP_TASKS)})", "--param")
        if spec.task not in _SWEEP_TASKS[args.param]:
            raise SpecError(f"parameter {args.param!r} sweeps tasks "
                            f"{_SWEEP_TASKS[args.param]}, spec has {spec.task!r}", "--param")
        values = _parse_range(args.range)
        header, rows = _sweep_rows(spec, args.param, values)
    except SpecError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except ValueError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = open(args.output, "w", newline="", encoding="utf-8") if args.output else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\r\n")  # RFC 4180 line endings
        writer.writerow(header)
        writer.writerows(rows)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("OPENEFF_SEED")
        seed = int(env) if env else verify.DEFAULT_SEED
    results = verify.run_suite(args.suite, seed)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed"
          + (f" ({len(failed)} FAILED)" if failed else ""))
    return EXIT_OK if not failed else EXIT_CHECK_FAILED


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="openeff",
        description="exact and numerical audits of openness-effectiveness bounds")
    sub = parser.add_subparsers(dest="command", required=True)

    p_report = sub.add_parser("report", help="run one task from a JSON problem spec")
    p_report.add_argument("spec", help="path to the problem-spec JSON file")
    p_report.add_argument("-o", "--output", help="write the JSON report here (default stdout)")
    p_report.set_defaults(func=cmd_report)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter, emit CSV")
    p_sweep.add_argument("spec", help="path to the base problem-spec JSON file")
    p_sweep.add_argument("--param", required=True, choices=sorted(_SWEEP_TASKS))
    p_sweep.add_argument("--range", required=True, help="a:b:step, inclusive")
    p_sweep.add_argument("-o", "--output", help="write CSV here (default stdout)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the acceptance-criteria suite")
    p_verify.add_argument("--suite", choices=("fast", "full"), default="fast")
    p_verify.add_argument("--seed", type=int, default=None,
                          help="Monte Carlo master seed (default OPENEFF_SEED or built-in)")
    p_verify.set_defaults(func=cmd_verify)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
