"""Threshold function theta, its inversion, and the scalar inequality layer.

theta(t) = ((t-1)(2t-1))^(-1/t) on (1, +inf).  An openness exponent p > 1 is
admissible for a pair with norm bound C1 and kernel-inverse bound C2 exactly
when theta(p) > C1/C2, so inverting theta on (1, 3/2] (where it decreases
from +inf to 1) turns the pair of constants into an effective exponent.

The companion function Q(x) = 2x log x + (1-x) log(1-x) - x log(2-x)
satisfies exp(Q(1/t)) = theta(t) (t-1)/t; its minimum over (0,1) therefore
controls the linear-in-t/(t-1) lower bounds on theta.  Q'' > 0 on (0,1), so
the minimizer is the unique root of Q' and bracketed bisection is exact.

All routines are double precision; tests recompute the anchor constants with
a 50-digit oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

#: sharper proven lower bound for min exp(Q) (and hence for theta(t)(t-1)/t)
REFINED_EXPQ_BOUND = 0.2876

#: the softer closed-form bound 1/(sqrt(3) e^(2/e)) ~ 0.2766326
SQRT3_EXPQ_BOUND = 1.0 / (math.sqrt(3.0) * math.exp(2.0 / math.e))


def theta_eval(t: float) -> float:
    """theta(t) = ((t-1)(2t-1))^(-1/t); > 1 left of 3/2, = 1 at 3/2, < 1 right of it."""
    if t <= 1.0:
        raise ValueError("theta is defined for t > 1")
    x = (t - 1.0) * (2.0 * t - 1.0)
    return x ** (-1.0 / t)


def theta_invert(ratio: float) -> float:
    """Unique p in (1, 3/2] with theta(p) = ratio, for ratio >= 1.

    Every p in (1, p*) then satisfies the strict hypothesis theta(p) > ratio.
    Bisection runs in the variable log(p-1): theta is steep near t = 1
    (theta(1+eps) ~ 1/eps), and the log substitution keeps the achievable
    accuracy relative in p - 1, giving ~1e-13 relative agreement in theta
    even for ratios around 1e6.
    """
    if not ratio >= 1.0:
        raise ValueError("ratio must be >= 1 (C1 >= C2 always holds)")
    if ratio == 1.0:
        return 1.5
    w_hi = math.log(0.5)  # p = 3/2, theta = 1 <= ratio
    w_lo = math.log(1e-3)
    while theta_eval(1.0 + math.exp(w_lo)) <= ratio:
        w_lo -= 5.0
        if w_lo < -700.0:
            raise ValueError(f"ratio {ratio} out of invertible range")
    for _ in range(200):
        w_mid = 0.5 * (w_lo + w_hi)
        if theta_eval(1.0 + math.exp(w_mid)) > ratio:
            w_lo = w_mid
        else:
            w_hi = w_mid
    p = 1.0 + math.exp(0.5 * (w_lo + w_hi))
    # theta is steep near t = 1 (one ulp of p moves theta by ~2e-16/(p-1)
    # relatively), so pick the representable point with the least residual
    candidates = {p}
    up = dn = p
    for _ in range(3):
        up = math.nextafter(up, 2.0)
        dn = math.nextafter(dn, 1.0)
        candidates.update((up, dn))
    return min((c for c in candidates if 1.0 < c <= 1.5),
               key=lambda c: abs(theta_eval(c) - ratio))


@dataclass(frozen=True)
class ThetaBoundReport:
    """Minimum slack of each lower bound on theta over a t-grid.

    Inequalities checked at every grid point (all strict):
      chain_200_6 : 1/(200(t-1)) < 1/(6(t-1))
      chain_6_t6  : 1/(6(t-1))   < t/(6(t-1))
      chain_t6    : t/(6(t-1))   < theta(t)
      sqrt3_exp   : t/(t-1) / (sqrt(3) e^(2/e)) < theta(t)
      refined     : 0.2876 t/(t-1) < theta(t)
    """

    min_slack: dict[str, float]
    argmin_t: dict[str, float]
    violations: tuple[tuple[str, float], ...]

    @property
    def ok(self) -> bool:
        return not self.violations and all(s > 0.0 for s in self.min_slack.values())


def theta_bound_check(t_grid: Sequence[float]) -> ThetaBoundReport:
    if any(t <= 1.0 for t in t_grid):
        raise ValueError("all grid points must satisfy t > 1")
    names = ("chain_200_6", "chain_6_t6", "chain_t6", "sqrt3_exp", "refined")
    min_slack = {name: math.inf for name in names}
    argmin = {name: math.nan for name in names}
    violations: list[tuple[str, float]] = []
    for t in t_grid:
        th = theta_eval(t)
        onem = 1.0 / (t - 1.0)
        slacks = {
            "chain_200_6": onem / 6.0 - onem / 200.0,
            "chain_6_t6": t * onem / 6.0 - onem / 6.0,
            "chain_t6": th - t * onem / 6.0,
            "sqrt3_exp": th - SQRT3_EXPQ_BOUND * t * onem,
            "refined": th - REFINED_EXPQ_BOUND * t * onem,
        }
        for name, s in slacks.items():
            if s < min_slack[name]:
                min_slack[name] = s
                argmin[name] = t
            if s <= 0.0:
                violations.append((name, t))
    return ThetaBoundReport(min_slack, argmin, tuple(violations))


# ---------------------------------------------------------------------------
# Q(x) = P(1/x): the convex companion of theta
# ---------------------------------------------------------------------------

def q_eval(x: float) -> float:
    """Q(x) = 2x log x + (1-x) log(1-x) - x log(2-x) on (0, 1)."""
    if not 0.0 < x < 1.0:
        raise ValueError("Q is defined on the open interval (0, 1)")
    return 2.0 * x * math.log(x) + (1.0 - x) * math.log1p(-x) - x * math.log(2.0 - x)


def q_prime(x: float) -> float:
    if not 0.0 < x < 1.0:
        raise ValueError("Q' is defined on the open interval (0, 1)")
    return 2.0 * math.log(x) - math.log1p(-x) + 2.0 / (2.0 - x) - math.log(2.0 - x)


def q_second(x: float) -> float:
    if not 0.0 < x < 1.0:
        raise ValueError("Q'' is defined on the open interval (0, 1)")
    return 2.0 / x + 1.0 / (1.0 - x) + 2.0 / (2.0 - x) ** 2 + 1.0 / (2.0 - x)


def p_eval(t: float) -> float:
    """P(t) = Q(1/t) = log(theta(t) (t-1)/t) for t > 1."""
    if t <= 1.0:
        raise ValueError("P is defined for t > 1")
    return q_eval(1.0 / t)


@dataclass(frozen=True)
class QPoint:
    x: float
    q: float
    q1: float
    q2: float


def q_point(x: float) -> QPoint:
    return QPoint(x, q_eval(x), q_prime(x), q_second(x))


@dataclass(frozen=True)
class QAnalysis:
    x_min: float
    q_min: float
    exp_q_min: float
    above_refined: bool      # exp_q_min > 0.2876
    above_sqrt3_bound: bool  # exp_q_min > 1/(sqrt(3) e^(2/e))


def q_analysis(tolerance: float) -> QAnalysis:
    """Locate the unique minimizer of Q on (0, 1) by bisection on Q'.

    Q'' > 0 everywhere, Q' -> -inf at 0+, and Q'(1/2) > 0, so Q' has exactly
    one root and it lies in (0, 1/2); the bracket never needs widening.
    """
    if not tolerance > 0.0:
        raise ValueError("tolerance must be positive")
    lo, hi = 1e-12, 0.5
    if not (q_prime(lo) < 0.0 < q_prime(hi)):
        raise RuntimeError("bisection bracket for Q' lost; check the formulas")
    goal = min(tolerance, 1e-12)
    while hi - lo > goal:
        mid = 0.5 * (lo + hi)
        if q_prime(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    x_min = 0.5 * (lo + hi)
    q_min = q_eval(x_min)
    exp_q_min = math.exp(q_min)
    result = QAnalysis(
        x_min=x_min,
        q_min=q_min,
        exp_q_min=exp_q_min,
        above_refined=exp_q_min > REFINED_EXPQ_BOUND,
        above_sqrt3_bound=exp_q_min > SQRT3_EXPQ_BOUND,
    )
    if not (result.above_refined and result.above_sqrt3_bound):
        raise RuntimeError(f"computed min exp(Q) = {exp_q_min} violates its proven bounds")
    return result


# ---------------------------------------------------------------------------
# Comparison with the ball-domain effectiveness exponent
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BerndtssonComparison:
    p_berndtsson: float
    p_theta: float

    @property
    def theta_dominates(self) -> bool:
        return self.p_theta > self.p_berndtsson


def berndtsson_compare(c1: float, c2: float) -> BerndtssonComparison:
    """Effective exponents from the same (C1, C2) data, two ways.

    The ball-domain route takes eps0 = C2/100 (the 1/100-of-kernel-inverse
    convention) and admits p with 1/(p-1) >= C1 * 2/eps0, i.e. up to
    p = 1 + C2/(200 C1).  The threshold route inverts theta at C1/C2.  The
    chain 1/(200(t-1)) < theta(t) makes the threshold exponent strictly
    larger for every ratio.
    """
    if not (c2 > 0.0 and c1 >= c2):
        raise ValueError("need c1 >= c2 > 0")
    p_b = 1.0 + c2 / (200.0 * c1)
    p_t = theta_invert(c1 / c2)
    return BerndtssonComparison(p_berndtsson=p_b, p_theta=p_t)


def geometric_grid(lo: float, hi: float, count: int) -> list[float]:
    """count points geometric in (lo-1) from lo to hi, all > 1; includes hi."""
    if not (1.0 < lo < hi):
        raise ValueError("need 1 < lo < hi")
    wlo, whi = math.log(lo - 1.0), math.log(hi - 1.0)
    return [1.0 + math.exp(wlo + (whi - wlo) * k / (count - 1)) for k in range(count)]
