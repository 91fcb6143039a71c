"""Exact rational arithmetic for monomial weights on the unit polydisc.

A monomial (toric) weight is phi = sum_j a_j log|z_j|^2 with rational
a_j >= 0.  Every integral that appears downstream -- weighted L2 norms,
jumping numbers, multiplier-ideal membership -- reduces by monomial
orthogonality to per-coordinate one-dimensional integrals

    int_Delta |z|^(2k) |z|^(-2b) dlambda = pi / (k - b + 1)   if k - b > -1,

and is therefore an exact rational multiple of a power of pi.  This module
is the ground-truth oracle the kernel and asymptotics layers consume.

Conventions: jumping numbers use the exp(-2*c*phi) normalization, weighted
norms the exp(-p*phi) one; the two are related by p = 2c.  Divergent
integrals are a value (PiScaled.infinite()), not an error, because the
volume-growth propositions branch on non-integrability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

RationalLike = Union[Fraction, int, str]

#: marker returned by jumping_number when the weight vanishes identically
INFINITE_JUMP = math.inf


class PreconditionError(ValueError):
    """A documented precondition of an operation is violated.

    Distinct from plain ValueError so the CLI can map it to its own exit
    code (3) instead of the input-error code (2).
    """


def as_fraction(x: RationalLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    return Fraction(x)


def _as_fraction_vector(values: Iterable[RationalLike]) -> tuple[Fraction, ...]:
    return tuple(as_fraction(v) for v in values)


# ---------------------------------------------------------------------------
# PiScaled: exact rational multiples of powers of pi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PiScaled:
    """Exact value coefficient * pi**pi_power; coefficient None encodes +inf.

    pi_power may be negative (e.g. the classical Bergman kernel at the
    center of the unit polydisc is 1/pi**n).
    """

    coefficient: Fraction | None
    pi_power: int = 0

    @classmethod
    def of(cls, coefficient: RationalLike, pi_power: int = 0) -> "PiScaled":
        return cls(as_fraction(coefficient), pi_power)

    @classmethod
    def infinite(cls) -> "PiScaled":
        return cls(None, 0)

    @property
    def is_finite(self) -> bool:
        return self.coefficient is not None

    @property
    def is_zero(self) -> bool:
        return self.coefficient == 0

    def __float__(self) -> float:
        if self.coefficient is None:
            return math.inf
        return float(self.coefficient) * math.pi ** self.pi_power

    def __add__(self, other: "PiScaled") -> "PiScaled":
        if not isinstance(other, PiScaled):
            return NotImplemented
        if self.coefficient is None or other.coefficient is None:
            return PiScaled.infinite()
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        if self.pi_power != other.pi_power:
            raise ValueError(
                f"cannot add exact values with pi powers {self.pi_power} != {other.pi_power}"
            )
        return PiScaled(self.coefficient + other.coefficient, self.pi_power)

    def __mul__(self, other: "PiScaled | RationalLike") -> "PiScaled":
        if isinstance(other, PiScaled):
            if self.coefficient is None or other.coefficient is None:
                return PiScaled.infinite()
            return PiScaled(self.coefficient * other.coefficient,
                            self.pi_power + other.pi_power)
        return PiScaled(None if self.coefficient is None
                        else self.coefficient * as_fraction(other), self.pi_power)

    __rmul__ = __mul__

    def reciprocal(self) -> "PiScaled":
        if self.coefficient is None:
            return PiScaled.of(0)
        if self.coefficient == 0:
            return PiScaled.infinite()
        return PiScaled(1 / self.coefficient, -self.pi_power)

    def ratio(self, other: "PiScaled") -> Fraction:
        """Exact quotient self/other; requires equal pi powers and finiteness."""
        if self.coefficient is None or other.coefficient is None:
            raise ValueError("ratio of non-finite exact values")
        if self.pi_power != other.pi_power:
            raise ValueError("ratio requires matching pi powers")
        if other.coefficient == 0:
            raise ZeroDivisionError("ratio with zero denominator")
        return self.coefficient / other.coefficient

    def _cmp_key(self, other: "PiScaled"):
        if not isinstance(other, PiScaled):
            return NotImplemented
        a = math.inf if self.coefficient is None else None
        b = math.inf if other.coefficient is None else None
        if a is not None or b is not None:
            return (float(self), float(other))
        if self.pi_power == other.pi_power:
            return (self.coefficient, other.coefficient)
        if self.is_zero or other.is_zero:
            return (self.coefficient, other.coefficient)
        raise ValueError("ordering of exact values with different pi powers")

    def __le__(self, other: "PiScaled") -> bool:
        a, b = self._cmp_key(other)
        return a <= b

    def __lt__(self, other: "PiScaled") -> bool:
        a, b = self._cmp_key(other)
        return a < b

    def __str__(self) -> str:
        if self.coefficient is None:
            return "inf"
        if self.pi_power == 0:
            return str(self.coefficient)
        return f"{self.coefficient}*pi^{self.pi_power}"


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialWeight:
    """Weight phi = sum_j a_j log|z_j|^2 on the unit polydisc, a_j >= 0 rational."""

    a: tuple[Fraction, ...]

    def __init__(self, a: Iterable[RationalLike]):
        vec = _as_fraction_vector(a)
        if not vec:
            raise ValueError("weight needs at least one coordinate")
        if any(aj < 0 for aj in vec):
            raise ValueError("weight exponents must be nonnegative")
        object.__setattr__(self, "a", vec)

    @property
    def dim(self) -> int:
        return len(self.a)

    @property
    def is_trivial(self) -> bool:
        return all(aj == 0 for aj in self.a)

    def scaled(self, factor: RationalLike) -> "MonomialWeight":
        lam = as_fraction(factor)
        if lam < 0:
            raise ValueError("scaling factor must be nonnegative")
        return MonomialWeight([lam * aj for aj in self.a])


Coefficient = tuple[Fraction, Fraction]  # (real, imaginary), both exact


def coeff_abs_sq(coeff: Coefficient) -> Fraction:
    re, im = coeff
    return re * re + im * im


@dataclass(frozen=True)
class PolyFunction:
    """Finite-support polynomial sum_alpha c_alpha z^alpha with Gaussian-rational
    coefficients, stored as a sorted tuple of (exponent, (re, im)) pairs.

    Zero coefficients are dropped on construction, so F != 0 iff terms is
    nonempty.
    """

    terms: tuple[tuple[tuple[int, ...], Coefficient], ...]

    def __init__(self, terms: Mapping[Sequence[int], object]):
        cleaned: dict[tuple[int, ...], Coefficient] = {}
        dim = None
        for alpha, coeff in terms.items():
            key = tuple(int(e) for e in alpha)
            if any(e < 0 for e in key):
                raise ValueError(f"negative exponent in {key}")
            if dim is None:
                dim = len(key)
            elif len(key) != dim:
                raise ValueError("inconsistent exponent dimensions")
            if isinstance(coeff, tuple):
                re, im = as_fraction(coeff[0]), as_fraction(coeff[1])
            else:
                re, im = as_fraction(coeff), Fraction(0)
            if re == 0 and im == 0:
                continue
            cleaned[key] = (re, im)
        object.__setattr__(self, "terms", tuple(sorted(cleaned.items())))

    @classmethod
    def monomial(cls, alpha: Sequence[int], coeff: object = 1) -> "PolyFunction":
        return cls({tuple(alpha): coeff})

    @classmethod
    def one(cls, dim: int) -> "PolyFunction":
        return cls.monomial((0,) * dim)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def dim(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no dimension")
        return len(self.terms[0][0])

    @property
    def support(self) -> tuple[tuple[int, ...], ...]:
        return tuple(alpha for alpha, _ in self.terms)

    def support_sq(self) -> dict[tuple[int, ...], Fraction]:
        """Map alpha -> |c_alpha|^2, exact."""
        return {alpha: coeff_abs_sq(c) for alpha, c in self.terms}


@dataclass(frozen=True)
class MonomialIdeal:
    """Monomial ideal given by its minimal generating antichain.

    Membership of a monomial: alpha is in the ideal iff alpha dominates
    some generator componentwise.  A holomorphic germ lies in a monomial
    ideal iff every monomial of its Taylor expansion does, so this is also
    the germ-membership test used by the kernel layer.
    """

    generators: tuple[tuple[int, ...], ...]

    def __init__(self, generators: Iterable[Sequence[int]]):
        gens = {tuple(int(e) for e in g) for g in generators}
        if not gens:
            raise ValueError("an ideal needs at least one generator (use the unit ideal)")
        minimal = tuple(sorted(
            g for g in gens
            if not any(h != g and all(hj <= gj for hj, gj in zip(h, g)) for h in gens)
        ))
        dims = {len(g) for g in minimal}
        if len(dims) != 1:
            raise ValueError("generators have inconsistent dimensions")
        object.__setattr__(self, "generators", minimal)

    @classmethod
    def principal(cls, gamma: Sequence[int]) -> "MonomialIdeal":
        return cls([gamma])

    @classmethod
    def unit(cls, dim: int) -> "MonomialIdeal":
        return cls([(0,) * dim])

    @classmethod
    def point_vanishing(cls, dim: int) -> "MonomialIdeal":
        """The maximal ideal (z_1, ..., z_n): germs vanishing at the center."""
        gens = []
        for j in range(dim):
            e = [0] * dim
            e[j] = 1
            gens.append(tuple(e))
        return cls(gens)

    @property
    def dim(self) -> int:
        return len(self.generators[0])

    @property
    def is_unit(self) -> bool:
        return self.generators == ((0,) * self.dim,)

    def contains(self, alpha: Sequence[int]) -> bool:
        alpha = tuple(alpha)
        return any(all(aj >= gj for aj, gj in zip(alpha, g)) for g in self.generators)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def monomial_norm_sq(alpha: Sequence[int]) -> PiScaled:
    """Exact squared L2 norm of z^alpha on the unit polydisc: pi^n / prod(alpha_j+1)."""
    alpha = tuple(int(e) for e in alpha)
    if any(e < 0 for e in alpha):
        raise ValueError("exponents must be nonnegative")
    denom = math.prod(e + 1 for e in alpha)
    return PiScaled.of(Fraction(1, denom), len(alpha))


def weighted_norm_sq(F: PolyFunction, weight: MonomialWeight,
                     p: RationalLike) -> PiScaled:
    """Exact int_{Delta^n} |F|^2 exp(-p*phi) dlambda, or +inf on divergence.

    By per-coordinate rotation invariance the cross terms integrate to zero,
    so the integral is sum_alpha |c_alpha|^2 prod_j pi/(alpha_j - p a_j + 1),
    finite exactly when alpha_j - p a_j > -1 for every j and every alpha in
    the support.
    """
    p = as_fraction(p)
    if p < 0:
        raise ValueError("weight multiplier p must be nonnegative")
    if F.is_zero:
        return PiScaled.of(0, weight.dim)
    if F.dim != weight.dim:
        raise ValueError("dimension mismatch between F and the weight")
    total = Fraction(0)
    for alpha, coeff in F.terms:
        term = coeff_abs_sq(coeff)
        for e, aj in zip(alpha, weight.a):
            shifted = e - p * aj + 1
            if shifted <= 0:
                return PiScaled.infinite()
            term /= shifted
        total += term
    return PiScaled.of(total, weight.dim)


def jumping_number_of_support(support: Iterable[Sequence[int]],
                              weight: MonomialWeight) -> Fraction | float:
    """sup{c >= 0 : |F|^2 exp(-2c*phi) integrable near 0}, from the support alone.

    Monomial orthogonality turns the local integrability of each |c_alpha
    z^alpha|^2 prod |z_j|^(-4 c a_j) into alpha_j + 1 > 2 c a_j, so the sup is
    min over alpha and over j with a_j > 0 of (alpha_j + 1) / (2 a_j); it is
    +inf when the weight is identically zero.
    """
    support = [tuple(alpha) for alpha in support]
    if not support:
        raise ValueError("jumping number of the zero function is undefined")
    if weight.is_trivial:
        return INFINITE_JUMP
    best: Fraction | None = None
    for alpha in support:
        for e, aj in zip(alpha, weight.a):
            if aj > 0:
                cand = Fraction(e + 1) / (2 * aj)
                if best is None or cand < best:
                    best = cand
    assert best is not None
    return best


def jumping_number(F: PolyFunction, weight: MonomialWeight) -> Fraction | float:
    if F.is_zero:
        raise ValueError("jumping number of the zero function is undefined")
    if F.dim != weight.dim:
        raise ValueError("dimension mismatch between F and the weight")
    return jumping_number_of_support(F.support, weight)


def multiplier_ideal(b: Sequence[RationalLike], plus: bool = False) -> MonomialIdeal:
    """Multiplier ideal of psi = sum_j b_j log|z_j|^2 at the origin.

    A monomial z^gamma is a member iff gamma_j + 1 > b_j for all j, i.e.
    gamma_j is at least the smallest nonnegative integer strictly greater
    than b_j - 1; the ideal is principal on z^gamma with that minimal gamma.
    For monomial weights the same strict inequalities define the union over
    eps > 0 of the (1+eps)-scaled ideals, so the plus flag only records
    which variant was requested.
    """
    bvec = _as_fraction_vector(b)
    if any(bj < 0 for bj in bvec):
        raise ValueError("weight exponents must be nonnegative")
    gamma = []
    for bj in bvec:
        least = math.floor(bj - 1) + 1  # smallest integer strictly above b_j - 1
        gamma.append(max(0, least))
    ideal = MonomialIdeal.principal(gamma)
    del plus  # recorded for the caller's bookkeeping only; see docstring
    return ideal


def membership(F: PolyFunction, weight: MonomialWeight, p: RationalLike) -> bool:
    """Germ membership (F, 0) in I(p*phi): alpha_j + 1 > p a_j for all alpha, j.

    Deliberately coded from the germ inequality rather than by calling
    weighted_norm_sq, so the two finiteness criteria stay independent.
    """
    p = as_fraction(p)
    if p < 0:
        raise ValueError("weight multiplier p must be nonnegative")
    if F.is_zero:
        return True
    if F.dim != weight.dim:
        raise ValueError("dimension mismatch between F and the weight")
    for alpha in F.support:
        for e, aj in zip(alpha, weight.a):
            if e + 1 <= p * aj:
                return False
    return True


# ---------------------------------------------------------------------------
# Lower semicontinuity checker for parametric toric families
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SemicontinuityReport:
    """Result of checking the jumping-number semicontinuity statement on a
    finite toric family against its limit pair.

    status is one of:
      "ok"                   hypothesis and conclusion both hold;
      "hypothesis-violation" no uniform positive kernel-inverse bound is
                             evident (some member is 0, or the sequence
                             decays monotonically below 1% of its first
                             value), so the statement is not applicable;
      "conclusion-violation" hypothesis holds but some tail jumping number
                             drops below the limit -- escalate, never patch.
    """

    member_kernel_inv: tuple[float, ...]
    member_jumps: tuple[object, ...]
    limit_jump: object
    inf_kernel_inv: float
    kernel_inv_vanishing: bool
    hypothesis_ok: bool
    conclusion_ok: bool
    first_good_index: int | None
    status: str


def _jump_ge(c_member, c_limit) -> bool:
    if c_limit == INFINITE_JUMP:
        return c_member == INFINITE_JUMP
    if c_member == INFINITE_JUMP:
        return True
    return c_member >= c_limit


def semicontinuity_check(family: Sequence[tuple[PolyFunction, MonomialWeight]],
                         limit: tuple[PolyFunction, MonomialWeight]) -> SemicontinuityReport:
    """Check c_0^{F_m}(phi_m) >= c_0^F(phi) for tail members, under the
    uniform positive lower bound hypothesis on the kernel inverses."""
    from .kernel import kernel_inv  # local import: kernel builds on this module

    if not family:
        raise ValueError("family must be nonempty")
    kinvs = tuple(float(kernel_inv(F, w).k_inv) for F, w in family)
    jumps = tuple(jumping_number(F, w) for F, w in family)
    limit_jump = jumping_number(limit[0], limit[1])

    inf_kinv = min(kinvs)
    decreasing = all(x >= y for x, y in zip(kinvs, kinvs[1:]))
    vanishing = (inf_kinv == 0.0 or
                 (len(kinvs) >= 3 and decreasing and kinvs[-1] < 0.01 * kinvs[0]))
    hypothesis_ok = inf_kinv > 0.0 and not vanishing

    first_good: int | None = None
    for start in range(len(jumps)):
        if all(_jump_ge(c, limit_jump) for c in jumps[start:]):
            first_good = start
            break
    conclusion_ok = first_good is not None

    if not hypothesis_ok:
        status = "hypothesis-violation"
    elif not conclusion_ok:
        status = "conclusion-violation"
    else:
        status = "ok"
    return SemicontinuityReport(
        member_kernel_inv=kinvs,
        member_jumps=jumps,
        limit_jump=limit_jump,
        inf_kernel_inv=inf_kinv,
        kernel_inv_vanishing=vanishing,
        hypothesis_ok=hypothesis_ok,
        conclusion_ok=conclusion_ok,
        first_good_index=first_good,
        status=status,
    )
