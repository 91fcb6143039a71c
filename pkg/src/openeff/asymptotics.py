"""Sublevel-set volumes and the optimal volume-growth reports.

In log-radial coordinates t_j = -log|z_j|^2 the polydisc carries pi^n times
a product of unit exponentials, so for a monomial weight phi = sum a_j
log|z_j|^2 the sublevel volume mu({phi < -R}) equals pi^n P(sum a_j T_j > R)
with independent unit exponentials T_j.  For n <= 2 these tails are exact
two-term exponential polynomials in R, represented symbolically so that
expressions like e^R mu({phi < -R}) cancel exactly in the equality cases.

The Jonsson-Mustata side needs kernels of piecewise-monomial weights
psi + delta*max{psi, log|F|^2}.  For monomial F the positive quadrant splits
into at most two simplicial cones on which the weight is linear; jumping
numbers and multiplier ideals then reduce to finitely many extreme-ray
inequalities, and norm integrals to exact per-cone formulas.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .montecarlo import (
    McConfig,
    McEstimate,
    mc_line_weighted_norm,
    mc_sublevel,
    monomial_weight_evaluator,
    rotated_line_weight,
)
from .toric import (
    MonomialIdeal,
    MonomialWeight,
    PiScaled,
    PolyFunction,
    as_fraction,
    jumping_number,
    monomial_norm_sq,
    weighted_norm_sq,
)

__all__ = [
    "ExpTailForm",
    "linear_form_tail",
    "sublevel_tail_form",
    "sublevel_volume",
    "band_volume",
    "DkReport",
    "dk_asymptote_report",
    "ToricCone",
    "split_quadrant",
    "piecewise_jumping",
    "piecewise_multiplier_ideal",
    "piecewise_norm_integral",
    "JmReport",
    "jm_asymptote_report",
    "mc_sublevel",
    "monomial_weight_evaluator",
    "rotated_line_weight",
    "mc_line_weighted_norm",
    "McConfig",
    "McEstimate",
]

#: grid points at or above this threshold stand in for the R -> inf liminf
LIMINF_THRESHOLD = 10.0

REMARK_JM_EQUALITY_NOTE = (
    "discrepancy: the printed reference value of this liminf is 1/pi, but the "
    "exact volume gives (1/r^2) mu({log|z| < log r}) = pi for every r; the "
    "kernel-inverse chain also yields pi (K(0) = 1/pi on the unit disc, so "
    "1/K(0) = pi -- the printed figure conflates K with K^{-1}); reporting pi"
)
BAND_FACTOR_NOTE = "band values use the factor exp(R+B0)/B0 at threshold R"


# ---------------------------------------------------------------------------
# Exact exponential-polynomial tails
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpTailForm:
    """pi^pi_power * sum_i coeff_i * R^k_i * exp(-rate_i * R), exact coefficients.

    Multiplying by exp(s*R) only shifts the rates, so equality cases like
    e^R mu({phi < -R}) = pi reduce to a form with all rates zero, detected by
    constant_value().
    """

    pi_power: int
    terms: tuple[tuple[Fraction, int, Fraction], ...]  # (coeff, R-power, rate)

    def value(self, R: float) -> float:
        acc = 0.0
        for coeff, k, rate in self.terms:
            acc += float(coeff) * R ** k * math.exp(-float(rate) * R)
        return acc * math.pi ** self.pi_power

    def scaled_by_exp(self, shift) -> "ExpTailForm":
        """Multiply by exp(shift * R), exactly."""
        shift = as_fraction(shift)
        return ExpTailForm(self.pi_power,
                           tuple((c, k, rate - shift) for c, k, rate in self.terms))

    def constant_value(self) -> PiScaled | None:
        """The exact constant if the form does not depend on R, else None."""
        if all(rate == 0 and k == 0 for _, k, rate in self.terms):
            return PiScaled.of(sum(c for c, _, _ in self.terms), self.pi_power)
        return None


def linear_form_tail(coeffs: Sequence[Fraction], pi_power: int = 0) -> ExpTailForm:
    """P(sum_j c_j T_j > R) for independent unit exponentials T_j, R >= 0.

    Zero coefficients drop out; at most two nonzero coefficients are
    supported (at least one must be positive).  Negative coefficients
    appear for differences like psi - log|F|^2.
    """
    nz = [as_fraction(c) for c in coeffs if c != 0]
    pos = [c for c in nz if c > 0]
    neg = [c for c in nz if c < 0]
    if not pos:
        # the form is <= 0 almost surely, so every positive threshold is
        # exceeded on a null set: the tail is identically zero
        return ExpTailForm(pi_power, ())
    if len(nz) > 2:
        raise ValueError("closed-form tails are implemented for <= 2 nonzero coefficients")
    if len(nz) == 1:
        (c1,) = nz
        return ExpTailForm(pi_power, ((Fraction(1), 0, 1 / c1),))
    if len(pos) == 1:
        # P(c1 T1 > R + |c2| T2) = (c1/(c1-c2)) e^{-R/c1} with c2 < 0
        c1, c2 = pos[0], neg[0]
        return ExpTailForm(pi_power, ((c1 / (c1 - c2), 0, 1 / c1),))
    c1, c2 = pos
    if c1 == c2:
        # Gamma(2) tail: (1 + R/c) e^{-R/c}
        return ExpTailForm(pi_power, ((Fraction(1), 0, 1 / c1),
                                      (1 / c1, 1, 1 / c1)))
    return ExpTailForm(pi_power, ((c1 / (c1 - c2), 0, 1 / c1),
                                  (-c2 / (c1 - c2), 0, 1 / c2)))


def sublevel_tail_form(weight: MonomialWeight) -> ExpTailForm:
    """mu({phi < -R} cap Delta^n) as an exact form in R, for n <= 2."""
    if weight.is_trivial:
        raise ValueError("the sublevel set of the zero weight is empty for R > 0")
    if weight.dim > 2:
        raise ValueError("closed forms cover n <= 2; use mc_sublevel for n >= 3")
    return linear_form_tail(weight.a, pi_power=weight.dim)


def sublevel_volume(weight: MonomialWeight, R: float,
                    config: McConfig | None = None) -> PiScaled | float:
    """mu({phi < -R} cap Delta^n): exact pi^n at R = 0, closed form for
    n <= 2, Monte Carlo for n >= 3 (pass a config for reproducibility)."""
    if weight.is_trivial:
        raise ValueError("the sublevel set of the zero weight is empty for R > 0")
    if R < 0:
        raise ValueError("R must be nonnegative")
    if R == 0:
        return PiScaled.of(1, weight.dim)
    if weight.dim <= 2:
        return sublevel_tail_form(weight).value(R)
    estimate = mc_sublevel(monomial_weight_evaluator(weight), R, weight.dim, config)
    return estimate.mean


def band_volume(weight: MonomialWeight, R: float, B0: float) -> float:
    """mu({-(R+B0) < phi < -R}); nonnegative since sublevel volume decreases."""
    if not 0.0 < B0 <= 1.0:
        raise ValueError("B0 must lie in (0, 1]")
    if R < 0:
        raise ValueError("R must be nonnegative")
    form = sublevel_tail_form(weight)
    return max(form.value(R) - form.value(R + B0), 0.0)


# ---------------------------------------------------------------------------
# Demailly-Kollar report
# ---------------------------------------------------------------------------

def _per_term_band_tail(alpha: Sequence[int], weight: MonomialWeight) -> ExpTailForm:
    """P(R < sum_j a_j S_j < R+B0) needs the tail of sum a_j S_j with
    S_j ~ Exp(alpha_j + 1): exponential tilting of int |z^alpha|^2 over the band."""
    coeffs = [aj / (e + 1) for e, aj in zip(alpha, weight.a)]
    return linear_form_tail(coeffs)


def _aitken_limit(series: Sequence[float]) -> float | None:
    if len(series) < 3:
        return series[-1] if series else None
    v1, v2, v3 = series[-3:]
    den = v3 - 2.0 * v2 + v1
    if abs(den) < 1e-12 * max(1.0, abs(v3)):
        return v3
    return v3 - (v3 - v2) ** 2 / den


@dataclass(frozen=True)
class DkReport:
    """Volume-growth lower-bound audit for one monomial pair (F, phi).

    band_grid     : (R, exp(R+B0)/B0 * int_band |F|^2), bounded below by
                    K^{-1}_{phi,F} in the liminf;
    sublevel_grid : (R, e^R mu({phi < -R})), bounded below by K^{-1}_{phi,1};
    dk_form_grid  : (r, r^{-2 c} mu({phi < log r})) with c the log canonical
                    threshold, bounded below by K^{-1}(0) = pi^n.
    Bound checks use grid points with R >= LIMINF_THRESHOLD as the liminf
    stand-in; small R may legitimately dip below the bound.
    """

    hypothesis_ok: bool
    B0: float
    band_grid: tuple[tuple[float, float], ...]
    sublevel_grid: tuple[tuple[float, float], ...]
    dk_form_grid: tuple[tuple[float, float], ...]
    sublevel_constant: PiScaled | None
    dk_form_constant: PiScaled | None
    band_bound: PiScaled
    sublevel_bound: PiScaled
    dk_form_bound: PiScaled
    classical_bound: PiScaled
    jumping_lct: object
    liminf_grid_min: float | None
    liminf_extrapolated: float | None
    bound_ok: bool | None
    annotations: tuple[str, ...] = ()

    @property
    def grid(self) -> tuple[tuple[float, float], ...]:
        return self.sublevel_grid

    @property
    def lower_bound(self) -> PiScaled:
        return self.sublevel_bound

    @property
    def liminf_estimate(self) -> float | None:
        return self.liminf_grid_min


def dk_asymptote_report(F: PolyFunction, weight: MonomialWeight,
                        R_grid: Sequence[float], B0: float) -> DkReport:
    """Audit the optimal sublevel-volume lower bounds on an R grid.

    Hypothesis gate (exact, never sampled): |F|^2 e^{-phi} fails to be
    integrable, i.e. weighted_norm_sq(F, phi, 1) = +inf.  When the gate
    fails the grids are still reported but no bound comparison is made.
    """
    from .kernel import kernel_inv  # deferred: kernel depends on toric only

    if not R_grid:
        raise ValueError("R grid must be nonempty")
    if any(R < 0 for R in R_grid):
        raise ValueError("R grid must be nonnegative")
    if not 0.0 < B0 <= 1.0:
        raise ValueError("B0 must lie in (0, 1]")
    if weight.is_trivial:
        raise ValueError("the weight must be nontrivial")
    Rs = sorted(float(R) for R in R_grid)
    n = weight.dim
    one = PolyFunction.one(n)

    hypothesis_ok = not weighted_norm_sq(F, weight, 1).is_finite

    # band series for F
    term_tails = [(sq, monomial_norm_sq(alpha), _per_term_band_tail(alpha, weight))
                  for alpha, sq in F.support_sq().items()]
    band_grid = []
    for R in Rs:
        band = sum(float(sq) * float(norm) * (tail.value(R) - tail.value(R + B0))
                   for sq, norm, tail in term_tails)
        band_grid.append((R, math.exp(R + B0) / B0 * band))

    # sublevel and conjecture-form series for F = 1
    mu_form = sublevel_tail_form(weight)
    sub_form = mu_form.scaled_by_exp(1)
    sublevel_grid = [(R, sub_form.value(R)) for R in Rs]
    c_lct = jumping_number(one, weight)
    dk_form = mu_form.scaled_by_exp(2 * c_lct)
    dk_form_grid = [(math.exp(-R), dk_form.value(R)) for R in Rs]

    band_bound = kernel_inv(F, weight).k_inv
    sublevel_bound = kernel_inv(one, weight).k_inv
    dk_form_bound = kernel_inv(one, weight.scaled(2 * c_lct)).k_inv
    classical = PiScaled.of(1, n)  # K^{-1}(0) on the unit polydisc

    tail_values = [v for R, v in sublevel_grid if R >= LIMINF_THRESHOLD]
    liminf_min = min(tail_values) if tail_values else None
    liminf_fit = _aitken_limit([v for _, v in sublevel_grid])

    bound_ok: bool | None = None
    if hypothesis_ok and tail_values:
        floor = float(sublevel_bound) - 1e-9
        band_tail = [v for R, v in band_grid if R >= LIMINF_THRESHOLD]
        bound_ok = (all(v >= floor for v in tail_values)
                    and all(v >= float(band_bound) - 1e-9 for v in band_tail))

    return DkReport(
        hypothesis_ok=hypothesis_ok,
        B0=B0,
        band_grid=tuple(band_grid),
        sublevel_grid=tuple(sublevel_grid),
        dk_form_grid=tuple(dk_form_grid),
        sublevel_constant=sub_form.constant_value(),
        dk_form_constant=dk_form.constant_value(),
        band_bound=band_bound,
        sublevel_bound=sublevel_bound,
        dk_form_bound=dk_form_bound,
        classical_bound=classical,
        jumping_lct=c_lct,
        liminf_grid_min=liminf_min,
        liminf_extrapolated=liminf_fit,
        bound_ok=bound_ok,
        annotations=(BAND_FACTOR_NOTE,),
    )


# ---------------------------------------------------------------------------
# Piecewise-monomial weights: cone decomposition of the positive quadrant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToricCone:
    """A simplicial cone in the positive quadrant together with the linear
    exponent form of the weight on it: w(t) = sum_j form_j t_j (so the weight
    is -w(t) in t-coordinates, nonpositive)."""

    rays: tuple[tuple[Fraction, ...], ...]
    form: tuple[Fraction, ...]

    def form_at(self, ray: Sequence[Fraction]) -> Fraction:
        return sum(f * r for f, r in zip(self.form, ray))


def split_quadrant(weight: MonomialWeight, beta: Sequence[int],
                   delta: int) -> tuple[ToricCone, ...]:
    """Cones of linearity of psi + delta*max{psi, log|z^beta|^2} in t-coordinates.

    With c = a - beta, the weight exponent form is a + delta*beta on
    {c.t >= 0} and (1+delta)*a on {c.t <= 0}; the splitting ray for mixed
    signs (n = 2) is orthogonal to c inside the quadrant.
    """
    avec = weight.a
    n = weight.dim
    beta = tuple(int(b) for b in beta)
    if len(beta) != n:
        raise ValueError("dimension mismatch between weight and exponent")
    if n > 2:
        raise ValueError("cone decomposition implemented for n <= 2")
    form_low = tuple(aj + delta * bj for aj, bj in zip(avec, beta))   # on {c.t >= 0}
    form_high = tuple((1 + delta) * aj for aj in avec)                # on {c.t <= 0}
    c = [as_fraction(aj) - bj for aj, bj in zip(avec, beta)]
    if n == 1:
        e1 = (Fraction(1),)
        return (ToricCone((e1,), form_low if c[0] >= 0 else form_high),)
    e1 = (Fraction(1), Fraction(0))
    e2 = (Fraction(0), Fraction(1))
    if c[0] >= 0 and c[1] >= 0:
        return (ToricCone((e1, e2), form_low),)
    if c[0] <= 0 and c[1] <= 0:
        return (ToricCone((e1, e2), form_high),)
    rstar = (abs(c[1]), abs(c[0]))  # on the hyperplane c.t = 0, inside the quadrant
    if c[0] > 0:
        return (ToricCone((e1, rstar), form_low), ToricCone((rstar, e2), form_high))
    return (ToricCone((e2, rstar), form_low), ToricCone((rstar, e1), form_high))


def piecewise_jumping(alpha: Sequence[int], cones: Sequence[ToricCone]) -> Fraction:
    """Jumping number of z^alpha for the piecewise weight: the linear exponent
    -sum(alpha_j+1) t_j + 2c w(t) must be negative on every extreme ray, so
    the sup is the minimum of ray ratios over rays where the weight is active."""
    alpha = tuple(int(e) for e in alpha)
    best: Fraction | None = None
    for cone in cones:
        for ray in cone.rays:
            w = cone.form_at(ray)
            if w > 0:
                num = sum((e + 1) * r for e, r in zip(alpha, ray))
                cand = num / (2 * w)
                if best is None or cand < best:
                    best = cand
    if best is None:
        raise ValueError("weight vanishes on the whole quadrant")
    return best


def piecewise_multiplier_ideal(cones: Sequence[ToricCone], two_c: Fraction) -> MonomialIdeal:
    """Monomial multiplier ideal of the scaled piecewise weight 2c*w: a
    monomial z^gamma is a member iff sum (gamma_j+1) ray_j > 2c w(ray) on
    every extreme ray (strictness on a ray forces divergence along it)."""
    two_c = as_fraction(two_c)
    n = len(cones[0].form)
    ray_conditions = []
    for cone in cones:
        for ray in cone.rays:
            ray_conditions.append((ray, two_c * cone.form_at(ray)))

    def member(gamma: Sequence[int]) -> bool:
        return all(sum((g + 1) * r for g, r in zip(gamma, ray)) > bound
                   for ray, bound in ray_conditions)

    caps = []
    for j in range(n):
        cap = 0
        for ray, bound in ray_conditions:
            if ray[j] > 0:
                cap = max(cap, math.ceil(bound / ray[j]) + 1)
        caps.append(cap)
    if n == 1:
        box = [(g,) for g in range(caps[0] + 1)]
    else:
        box = [(g1, g2) for g1 in range(caps[0] + 1) for g2 in range(caps[1] + 1)]
    gens = [g for g in box if member(g)]
    if not gens:
        # all boxed candidates fail; the corner past the caps is always a member
        gens = [tuple(cap + 1 for cap in caps)]
    return MonomialIdeal(gens)


def piecewise_norm_integral(alpha: Sequence[int], cones: Sequence[ToricCone],
                            two_c: Fraction) -> PiScaled:
    """Exact int |z^alpha|^2 exp(-2c*w) over the polydisc via per-cone formulas.

    On a simplicial cone with rays v1, v2 the integrand is exp(-<q, t>) with
    q_j = alpha_j + 1 - 2c*form_j; the integral is |det(v1,v2)| / (<q,v1><q,v2>)
    (1/<q,v> in dimension one), finite iff <q, v> > 0 on all rays.
    Independent of the projection route: used to cross-check jumping numbers
    and ideal membership.
    """
    two_c = as_fraction(two_c)
    alpha = tuple(int(e) for e in alpha)
    n = len(alpha)
    total = Fraction(0)
    for cone in cones:
        q = tuple(e + 1 - two_c * f for e, f in zip(alpha, cone.form))
        pairings = [sum(qj * rj for qj, rj in zip(q, ray)) for ray in cone.rays]
        if any(pair <= 0 for pair in pairings):
            return PiScaled.infinite()
        if n == 1:
            total += 1 / (pairings[0] / cone.rays[0][0])
        else:
            v1, v2 = cone.rays
            det = abs(v1[0] * v2[1] - v1[1] * v2[0])
            total += det / (pairings[0] * pairings[1])
    return PiScaled.of(total, n)


# ---------------------------------------------------------------------------
# Jonsson-Mustata report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JmDeltaRow:
    delta: int
    kernel_inv: PiScaled | None
    sup_factor: float
    value: float  # C_{psi,F,delta} / (1 + 1/delta)


@dataclass(frozen=True)
class JmReport:
    hypothesis_ok: bool
    lhs_grid: tuple[tuple[float, float], ...]        # (R, e^R mu({psi - log|F|^2 < -R}))
    lhs_constant: PiScaled | None
    rhs_rows: tuple[JmDeltaRow, ...]
    rhs_sup: float | None
    liminf_grid_min: float | None
    liminf_extrapolated: float | None
    bound_ok: bool | None
    conjecture_grid: tuple[tuple[float, float], ...]  # (r, r^{-2} mu({c psi - log|F| < log r}))
    conjecture_constant: PiScaled | None
    jumping: object
    annotations: tuple[str, ...]

    @property
    def grid(self) -> tuple[tuple[float, float], ...]:
        return self.lhs_grid

    @property
    def liminf_estimate(self) -> float | None:
        return self.liminf_grid_min


def _monomial_data(F: PolyFunction) -> tuple[int, ...]:
    """Exponent of a single-term F with |coefficient| = 1 (exact path gate)."""
    if len(F.terms) != 1:
        raise ValueError("exact path needs monomial F (or F = 1); "
                         "pass mc_fallback=True for a sampled estimate")
    (alpha, coeff), = F.terms
    if (coeff[0] ** 2 + coeff[1] ** 2) != 1:
        raise ValueError("exact path needs |coefficient| = 1")
    return alpha


def jm_asymptote_report(F: PolyFunction, weight: MonomialWeight,
                        delta_list: Sequence[int], R_grid: Sequence[float],
                        r_list: Sequence[float] = (),
                        mc_fallback: bool = False,
                        config: McConfig | None = None) -> JmReport:
    """Audit e^R mu({psi - log|F|^2 < -R}) against sup_delta C_{psi,F,delta}/(1+1/delta).

    C_{psi,F,delta} is the kernel inverse of F^{1+delta} for the piecewise
    weight psi + delta*max{psi, log|F|^2}, divided by sup_D exp((1+delta)
    max{psi, 2log|F|}); on the unit polydisc with |F| a unit-coefficient
    monomial that sup is exp(0) = 1.  Hypothesis gate: |F|^2 e^{-psi} not
    integrable, i.e. beta_j + 1 <= a_j for some j (exact).

    With r_list the conjectured normalization is also evaluated:
    r^{-2} mu({c psi - log|F| < log r}) at the jumping number c, which equals
    the LHS series for the rescaled weight 2c psi under R = -2 log r.
    """
    if not R_grid:
        raise ValueError("R grid must be nonempty")
    if any(d < 1 for d in delta_list):
        raise ValueError("delta values must be positive integers")
    n = weight.dim
    Rs = sorted(float(R) for R in R_grid)
    annotations: list[str] = []

    try:
        beta = _monomial_data(F)
    except ValueError:
        if not mc_fallback:
            raise
        warnings.warn("non-monomial F: falling back to Monte Carlo for the "
                      "volume series; no kernel bound is computed", stacklevel=2)
        evaluator = _difference_evaluator(F, weight)
        lhs = tuple((R, math.exp(R) * mc_sublevel(evaluator, R, n, config).mean)
                    for R in Rs)
        return JmReport(hypothesis_ok=not weighted_norm_sq(F, weight, 1).is_finite,
                        lhs_grid=lhs, lhs_constant=None, rhs_rows=(), rhs_sup=None,
                        liminf_grid_min=None, liminf_extrapolated=None,
                        bound_ok=None, conjecture_grid=(), conjecture_constant=None,
                        jumping=jumping_number(F, weight),
                        annotations=("monte-carlo fallback",))

    if n > 2:
        raise ValueError("exact path covers n <= 2")
    hypothesis_ok = any(b + 1 <= aj for b, aj in zip(beta, weight.a))

    cvec = [as_fraction(aj) - b for aj, b in zip(weight.a, beta)]
    lhs_form = linear_form_tail(cvec, pi_power=n).scaled_by_exp(1)
    lhs_grid = tuple((R, lhs_form.value(R)) for R in Rs)

    rows = []
    for delta in sorted(set(int(d) for d in delta_list)):
        cones = split_quadrant(weight, beta, delta)
        alpha = tuple((1 + delta) * b for b in beta)
        c_star = piecewise_jumping(alpha, cones)
        ideal = piecewise_multiplier_ideal(cones, 2 * c_star)
        if ideal.contains(alpha):
            raise RuntimeError("F^{1+delta} fell inside its jumping-number ideal; "
                               "the ray arithmetic is inconsistent")
        k_inv = monomial_norm_sq(alpha)
        rows.append(JmDeltaRow(delta=delta, kernel_inv=k_inv, sup_factor=1.0,
                               value=float(k_inv) / (1.0 + 1.0 / delta)))
    rhs_sup = max((row.value for row in rows), default=None)

    tail_values = [v for R, v in lhs_grid if R >= LIMINF_THRESHOLD]
    if lhs_form.constant_value() is not None:
        tail_values = [v for _, v in lhs_grid]
    liminf_min = min(tail_values) if tail_values else None
    liminf_fit = _aitken_limit([v for _, v in lhs_grid])
    bound_ok = None
    if hypothesis_ok and rhs_sup is not None and liminf_min is not None:
        bound_ok = liminf_min >= rhs_sup - 1e-9

    conj_grid: tuple[tuple[float, float], ...] = ()
    conj_constant = None
    c_jump = jumping_number(F, weight)
    if r_list:
        scaled = [2 * c_jump * aj - b for aj, b in zip(weight.a, beta)]
        conj_form = linear_form_tail(scaled, pi_power=n).scaled_by_exp(1)
        conj_grid = tuple((float(r), conj_form.value(-2.0 * math.log(float(r))))
                          for r in r_list)
        conj_constant = conj_form.constant_value()
        if (n == 1 and beta == (0,) and scaled == [Fraction(1)]):
            annotations.append(REMARK_JM_EQUALITY_NOTE)

    return JmReport(
        hypothesis_ok=hypothesis_ok,
        lhs_grid=lhs_grid,
        lhs_constant=lhs_form.constant_value(),
        rhs_rows=tuple(rows),
        rhs_sup=rhs_sup,
        liminf_grid_min=liminf_min,
        liminf_extrapolated=liminf_fit,
        bound_ok=bound_ok,
        conjecture_grid=conj_grid,
        conjecture_constant=conj_constant,
        jumping=c_jump,
        annotations=tuple(annotations),
    )


def _difference_evaluator(F: PolyFunction, weight: MonomialWeight):
    """Evaluator for Psi = psi - log|F|^2 (used only by the MC fallback)."""
    import numpy as np

    phi = monomial_weight_evaluator(weight)
    terms = F.terms

    def psi_minus_logf(z):
        vals = np.zeros(z.shape[0], dtype=np.complex128)
        for alpha, (re, im) in terms:
            term = np.full(z.shape[0], complex(float(re), float(im)))
            for j, e in enumerate(alpha):
                if e:
                    term = term * z[:, j] ** e
            vals += term
        return phi(z) - 2.0 * np.log(np.abs(vals))

    return psi_minus_logf
