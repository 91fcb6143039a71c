"""Exact toric oracle: norms, jumping numbers, ideals, membership."""
import math
import random
from fractions import Fraction as Fr

import numpy as np
import pytest

from openeff.toric import (
    INFINITE_JUMP,
    MonomialIdeal,
    MonomialWeight,
    PiScaled,
    PolyFunction,
    jumping_number,
    membership,
    monomial_norm_sq,
    multiplier_ideal,
    semicontinuity_check,
    weighted_norm_sq,
)


def midpoint_polydisc_integral(alpha, points=4000):
    """2n-dimensional midpoint rule for int |z^alpha|^2 over the polydisc in
    polar coordinates (r_j, theta_j).  The integrand is a product over
    coordinates, so the tensor midpoint sum factors into per-coordinate
    midpoint sums; this is the same sum a full 2n-dimensional loop computes.
    """
    total = 1.0
    for a in alpha:
        r = (np.arange(points) + 0.5) / points
        radial = np.sum(r ** (2 * a + 1)) / points
        thetas = 2.0 * math.pi * (np.arange(8) + 0.5) / 8
        angular = np.sum(np.ones_like(thetas)) * (2.0 * math.pi / 8)
        total *= radial * angular
    return total


class TestPiScaled:
    def test_float_and_str(self):
        v = PiScaled.of(Fr(1, 3), 2)
        assert float(v) == pytest.approx(math.pi ** 2 / 3, rel=1e-15)
        assert str(v) == "1/3*pi^2"
        assert float(PiScaled.infinite()) == math.inf

    def test_add_same_power(self):
        assert PiScaled.of(Fr(1, 2), 1) + PiScaled.of(Fr(1, 3), 1) == PiScaled.of(Fr(5, 6), 1)

    def test_add_mismatched_power_raises(self):
        with pytest.raises(ValueError):
            PiScaled.of(1, 1) + PiScaled.of(1, 2)

    def test_add_zero_any_power(self):
        assert PiScaled.of(0, 2) + PiScaled.of(Fr(1, 4), 1) == PiScaled.of(Fr(1, 4), 1)

    def test_infinite_absorbs(self):
        assert not (PiScaled.infinite() + PiScaled.of(1, 1)).is_finite
        assert not (PiScaled.infinite() * PiScaled.of(1, 1)).is_finite

    def test_ratio_and_reciprocal(self):
        c1 = PiScaled.of(1, 1)
        c2 = PiScaled.of(Fr(1, 4), 1)
        assert c1.ratio(c2) == 4
        assert c2.reciprocal() == PiScaled.of(4, -1)

    def test_ordering(self):
        assert PiScaled.of(Fr(1, 4), 1) < PiScaled.of(1, 1)
        assert PiScaled.of(1, 1) < PiScaled.infinite()


class TestMonomialNorm:
    @pytest.mark.parametrize("m", range(0, 8))
    def test_single_variable(self, m):
        assert monomial_norm_sq((m,)) == PiScaled.of(Fr(1, m + 1), 1)

    def test_unit_volume(self):
        assert monomial_norm_sq((0, 0, 0)) == PiScaled.of(1, 3)

    def test_bidisc_example(self):
        assert monomial_norm_sq((0, 2)) == PiScaled.of(Fr(1, 3), 2)

    @pytest.mark.parametrize("alpha", [(0,), (3,), (6,), (1, 2), (0, 6), (3, 3)])
    def test_against_midpoint_rule(self, alpha):
        exact = float(monomial_norm_sq(alpha))
        numeric = midpoint_polydisc_integral(alpha)
        assert numeric == pytest.approx(exact, rel=1e-6)

    def test_negative_exponent_rejected(self):
        with pytest.raises(ValueError):
            monomial_norm_sq((-1,))


class TestWeightedNorm:
    @pytest.mark.parametrize("m", [1, 2, 5, 9])
    def test_power_family_is_pi(self, m):
        F = PolyFunction.monomial((m,))
        assert weighted_norm_sq(F, MonomialWeight([m]), 1) == PiScaled.of(1, 1)

    def test_unweighted_volume(self):
        F = PolyFunction.one(2)
        assert weighted_norm_sq(F, MonomialWeight([Fr(1, 2), 3]), 0) == PiScaled.of(1, 2)

    def test_divergent_mixed_support(self):
        F = PolyFunction({(1, 0): 1, (0, 2): 1})
        assert not weighted_norm_sq(F, MonomialWeight([1, 0]), 1).is_finite

    def test_gaussian_rational_coefficients(self):
        F = PolyFunction({(1,): (Fr(1, 2), Fr(1, 2))})  # |c|^2 = 1/2
        assert weighted_norm_sq(F, MonomialWeight([0]), 0) == PiScaled.of(Fr(1, 4), 1)

    def test_monotone_in_p(self):
        F = PolyFunction({(2, 1): 1, (0, 3): (Fr(1, 2), Fr(1, 3))})
        w = MonomialWeight([Fr(1, 2), Fr(3, 4)])
        values = [weighted_norm_sq(F, w, p) for p in (0, Fr(1, 2), 1, Fr(3, 2), 2, 3)]
        for lo, hi in zip(values, values[1:]):
            assert lo <= hi

    def test_negative_p_rejected(self):
        with pytest.raises(ValueError):
            weighted_norm_sq(PolyFunction.one(1), MonomialWeight([1]), -1)


class TestJumpingNumber:
    @pytest.mark.parametrize("m", [1, 2, 3, 7])
    def test_power_family(self, m):
        c = jumping_number(PolyFunction.monomial((m,)), MonomialWeight([m]))
        assert c == Fr(m + 1, 2 * m)

    def test_two_variable_example(self):
        F = PolyFunction({(1, 0): 1, (0, 2): 1})
        assert jumping_number(F, MonomialWeight([1, 0])) == Fr(1, 2)

    def test_lct_scaling_example(self):
        c = jumping_number(PolyFunction.one(2), MonomialWeight([Fr(1, 8), 0]))
        assert c == Fr(4)  # 1/(2 delta) with delta = 1/8

    def test_trivial_weight_is_infinite(self):
        assert jumping_number(PolyFunction.one(2), MonomialWeight([0, 0])) == INFINITE_JUMP

    def test_zero_function_rejected(self):
        with pytest.raises(ValueError):
            jumping_number(PolyFunction({}), MonomialWeight([1]))

    def test_scaling_covariance(self):
        rng = random.Random(11)
        for _ in range(50):
            n = rng.choice((1, 2, 3))
            F = PolyFunction({tuple(rng.randint(0, 4) for _ in range(n)): 1
                              for _ in range(rng.randint(1, 3))})
            w = MonomialWeight([Fr(rng.randint(1, 6), rng.randint(1, 4)) for _ in range(n)])
            lam = Fr(rng.randint(1, 9), rng.randint(1, 9))
            assert jumping_number(F, w.scaled(lam)) == jumping_number(F, w) / lam


class TestMultiplierIdeal:
    def test_power_family_ideal(self):
        for m in (1, 2, 5):
            ideal = multiplier_ideal([m + 1])
            assert ideal.generators == ((m + 1,),)

    def test_axis_ideal(self):
        assert multiplier_ideal([1, 0]).generators == ((1, 0),)

    def test_unit_ideal_below_threshold(self):
        ideal = multiplier_ideal([Fr(1, 2), Fr(1, 2)])
        assert ideal.is_unit

    def test_plus_variant_identical(self):
        for b in ([Fr(7, 3), Fr(1, 2)], [2, 0], [Fr(5, 2)]):
            assert multiplier_ideal(b, plus=True) == multiplier_ideal(b, plus=False)

    def test_integer_threshold_is_strict(self):
        # b = 1: z^0 has 0 + 1 = 1 which is not > 1 - wait, membership needs
        # gamma + 1 > b, so gamma = 0 fails at b = 1 and the generator is z.
        assert multiplier_ideal([1]).generators == ((1,),)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            multiplier_ideal([Fr(-1, 2)])

    def test_antichain_minimization(self):
        ideal = MonomialIdeal([(2, 0), (2, 1), (0, 3), (1, 3)])
        assert ideal.generators == ((0, 3), (2, 0))
        assert ideal.contains((2, 5)) and not ideal.contains((1, 2))


class TestMembership:
    def test_power_family_boundary(self):
        for m in (1, 2, 4, 9):
            F = PolyFunction.monomial((m,))
            w = MonomialWeight([m])
            assert membership(F, w, 1 + Fr(1, m) - Fr(1, 10 * m))
            assert not membership(F, w, 1 + Fr(1, m))

    def test_trivial_weight_always_member(self):
        assert membership(PolyFunction.one(2), MonomialWeight([0, 0]), 100)

    def test_matches_norm_divergence_example(self):
        F = PolyFunction({(1, 0): 1, (0, 2): 1})
        assert not membership(F, MonomialWeight([1, 0]), 1)

    def test_agrees_with_norm_finiteness_randomized(self):
        rng = random.Random(500)
        for _ in range(500):
            n = rng.choice((1, 2, 3))
            F = PolyFunction({tuple(rng.randint(0, 5) for _ in range(n)):
                              (Fr(rng.randint(1, 4)), Fr(rng.randint(0, 3)))
                              for _ in range(rng.randint(1, 4))})
            w = MonomialWeight([Fr(rng.randint(0, 8), rng.randint(1, 4)) for _ in range(n)])
            p = Fr(rng.randint(0, 12), rng.randint(1, 6))
            assert membership(F, w, p) == weighted_norm_sq(F, w, p).is_finite


class TestSemicontinuity:
    def test_increasing_family_holds(self):
        family = [(PolyFunction.monomial((1,)), MonomialWeight([1 - Fr(1, m)]))
                  for m in range(2, 9)]
        limit = (PolyFunction.monomial((1,)), MonomialWeight([1]))
        report = semicontinuity_check(family, limit)
        assert report.status == "ok"
        assert report.hypothesis_ok and report.conclusion_ok

    def test_constant_family_equality(self):
        pair = (PolyFunction.monomial((2,)), MonomialWeight([2]))
        report = semicontinuity_check([pair] * 5, pair)
        assert report.status == "ok" and report.first_good_index == 0

    def test_rotating_line_surrogate_flagged_as_hypothesis_violation(self):
        # the kernel inverses are sin^2-like factors pi^2/(2 m^2) -> 0, so no
        # uniform positive bound exists: the failing conclusion is reported as
        # a hypothesis violation, not as a counterexample
        family = [(PolyFunction({(1, 0): 1, (0, 1): Fr(1, m)}),
                   MonomialWeight([Fr(1, m), 0]))
                  for m in range(1, 13)]
        limit = (PolyFunction.monomial((1, 0)), MonomialWeight([0, 0]))
        report = semicontinuity_check(family, limit)
        assert report.kernel_inv_vanishing
        assert not report.hypothesis_ok
        assert not report.conclusion_ok
        assert report.status == "hypothesis-violation"

    def test_empty_family_rejected(self):
        with pytest.raises(ValueError):
            semicontinuity_check([], (PolyFunction.one(1), MonomialWeight([1])))
