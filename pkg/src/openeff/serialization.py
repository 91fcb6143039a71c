"""Problem-spec parsing and report construction.

The file contract of the batch surface:

* problem specs are UTF-8 JSON with rationals as strings ("3/4", "2") so
  every input parses exactly;
* reports carry every exact value as {"coeff": "p/q", "pi_power": k} and
  every float together with a tolerance (or a standard error for Monte
  Carlo entries) -- exact values never appear as floats;
* reports validate against the schema shipped at schema/report.schema.json.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Mapping

from .montecarlo import McEstimate
from .toric import INFINITE_JUMP, MonomialWeight, PiScaled, PolyFunction

TASKS = ("theta", "kernel", "effective-p", "dk", "jm", "ode", "audit", "verify-all")


class SpecError(ValueError):
    """Problem-spec validation failure, carrying the offending field path."""

    def __init__(self, message: str, spec_field: str):
        super().__init__(f"{spec_field}: {message}")
        self.spec_field = spec_field


def parse_rational(text: Any, spec_field: str) -> Fraction:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise SpecError(f"expected a rational string, got {text!r}", spec_field)
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"malformed rational {text!r} ({exc})", spec_field) from exc


def fraction_str(value: Fraction) -> str:
    return str(value)


@dataclass(frozen=True)
class ProblemSpec:
    """One batch problem: a weight vector, an optional polynomial, a task
    name, and task parameters (R grids, B0, delta lists, MC seed/samples)."""

    task: str
    weight: tuple[Fraction, ...] | None = None
    f: PolyFunction | None = None
    params: Mapping[str, Any] = field(default_factory=dict)

    def monomial_weight(self) -> MonomialWeight:
        if self.weight is None:
            raise SpecError("this task needs a weight vector", "weight")
        return MonomialWeight(self.weight)

    def poly(self) -> PolyFunction:
        """F, defaulting to the constant 1 in the weight's dimension."""
        if self.f is not None:
            return self.f
        if self.weight is None:
            raise SpecError("need either f or a weight to infer the dimension", "f")
        return PolyFunction.one(len(self.weight))


def problem_spec_from_dict(data: Mapping[str, Any]) -> ProblemSpec:
    if not isinstance(data, Mapping):
        raise SpecError("spec must be a JSON object", "$")
    task = data.get("task")
    if task not in TASKS:
        raise SpecError(f"unknown task {task!r}; expected one of {TASKS}", "task")

    weight = None
    if data.get("weight") is not None:
        raw = data["weight"]
        if not isinstance(raw, list) or not raw:
            raise SpecError("weight must be a nonempty list of rational strings", "weight")
        weight = tuple(parse_rational(v, f"weight[{i}]") for i, v in enumerate(raw))
        if any(w < 0 for w in weight):
            raise SpecError("weight entries must be nonnegative", "weight")

    f_poly = None
    if data.get("f") is not None:
        raw = data["f"]
        if not isinstance(raw, list) or not raw:
            raise SpecError("f must be a nonempty list of terms", "f")
        terms: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {}
        for i, term in enumerate(raw):
            where = f"f[{i}]"
            if not isinstance(term, Mapping) or "alpha" not in term:
                raise SpecError("term must be an object with alpha/re/im", where)
            alpha = term["alpha"]
            if (not isinstance(alpha, list) or not alpha
                    or any(not isinstance(e, int) or isinstance(e, bool) or e < 0
                           for e in alpha)):
                raise SpecError("alpha must be a list of nonnegative integers",
                                f"{where}.alpha")
            re = parse_rational(term.get("re", "0"), f"{where}.re")
            im = parse_rational(term.get("im", "0"), f"{where}.im")
            key = tuple(alpha)
            if key in terms:
                raise SpecError(f"duplicate exponent {key}", f"{where}.alpha")
            terms[key] = (re, im)
        if weight is not None and any(len(k) != len(weight) for k in terms):
            raise SpecError("alpha dimensions must match the weight", "f")
        f_poly = PolyFunction(terms)
        if f_poly.is_zero:
            raise SpecError("f must not be identically zero", "f")

    params = data.get("params", {})
    if not isinstance(params, Mapping):
        raise SpecError("params must be an object", "params")
    return ProblemSpec(task=task, weight=weight, f=f_poly, params=dict(params))


def problem_spec_to_dict(spec: ProblemSpec) -> dict[str, Any]:
    out: dict[str, Any] = {"task": spec.task}
    if spec.weight is not None:
        out["weight"] = [fraction_str(w) for w in spec.weight]
    if spec.f is not None:
        out["f"] = [{"alpha": list(alpha),
                     "re": fraction_str(re),
                     "im": fraction_str(im)}
                    for alpha, (re, im) in spec.f.terms]
    out["params"] = dict(spec.params)
    return out


# ---------------------------------------------------------------------------
# Report entries
# ---------------------------------------------------------------------------

def exact_obj(value: PiScaled) -> dict[str, Any]:
    coeff = "inf" if value.coefficient is None else fraction_str(value.coefficient)
    return {"coeff": coeff, "pi_power": value.pi_power if value.coefficient is not None else 0}


def rational_obj(value) -> dict[str, Any]:
    """Exact rational (or +inf jumping number) as a pi_power-0 exact entry."""
    if value == INFINITE_JUMP:
        return {"coeff": "inf", "pi_power": 0}
    return {"coeff": fraction_str(Fraction(value)), "pi_power": 0}


def approx_obj(value: float, tolerance: float) -> dict[str, Any]:
    return {"value": float(value), "tolerance": float(tolerance)}


def anchored_obj(value: float) -> dict[str, Any]:
    return {"value": float(value), "exact": True}


def estimate_obj(est: McEstimate) -> dict[str, Any]:
    return {"value": est.mean, "std_error": est.std_error,
            "samples": est.samples, "divergent": est.divergent}


def row_obj(at: float, value: dict[str, Any]) -> dict[str, Any]:
    return {"at": float(at), "value": value}


def check_obj(name: str, passed: bool, detail: str = "") -> dict[str, Any]:
    out: dict[str, Any] = {"name": name, "passed": bool(passed)}
    if detail:
        out["detail"] = detail
    return out


def build_report(spec: ProblemSpec, results: Mapping[str, Any],
                 checks: list[dict[str, Any]],
                 annotations: tuple[str, ...] = ()) -> dict[str, Any]:
    return {
        "task": spec.task,
        "inputs": problem_spec_to_dict(spec),
        "results": dict(results),
        "checks": checks,
        "annotations": list(annotations),
        "passed": all(c["passed"] for c in checks),
    }


_SCHEMA_CACHE: dict[str, Any] | None = None


def load_schema() -> dict[str, Any]:
    global _SCHEMA_CACHE
    if _SCHEMA_CACHE is None:
        text = resources.files("openeff").joinpath("schema/report.schema.json").read_text()
        _SCHEMA_CACHE = json.loads(text)
    return _SCHEMA_CACHE


def validate_report(report: Mapping[str, Any]) -> None:
    import jsonschema

    jsonschema.validate(instance=report, schema=load_schema())
