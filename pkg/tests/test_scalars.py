"""Threshold function, Q analysis, and the scalar inequality chain.

The anchor constants are recomputed once with a 50-digit oracle (mpmath) and
the double-precision implementations are required to agree to ~1e-12.
"""
import math

import mpmath
import pytest

from openeff import scalars

mpmath.mp.dps = 50


def theta_mp(t):
    t = mpmath.mpf(t)
    return ((t - 1) * (2 * t - 1)) ** (-1 / t)


def q_mp(x):
    x = mpmath.mpf(x)
    return 2 * x * mpmath.log(x) + (1 - x) * mpmath.log(1 - x) - x * mpmath.log(2 - x)


class TestThetaEval:
    def test_anchor_three_halves(self):
        assert abs(scalars.theta_eval(1.5) - 1.0) <= 1e-12

    def test_anchor_two(self):
        assert abs(scalars.theta_eval(2.0) - 1.0 / math.sqrt(3.0)) <= 1e-12

    def test_oracle_values(self):
        for t in (1.1, 1.25, 2.0, 3.0, 100.0):
            assert scalars.theta_eval(t) == pytest.approx(float(theta_mp(t)), rel=1e-13)

    def test_sign_pattern_around_three_halves(self):
        assert scalars.theta_eval(1.3) > 1.0
        assert scalars.theta_eval(1.5) == 1.0
        assert scalars.theta_eval(1.7) < 1.0

    def test_strictly_decreasing_on_inversion_interval(self):
        grid = scalars.geometric_grid(1.0 + 1e-6, 1.5, 10_000)
        values = [scalars.theta_eval(t) for t in grid]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_domain_error(self):
        with pytest.raises(ValueError):
            scalars.theta_eval(1.0)


class TestThetaInvert:
    def test_ratio_one_gives_three_halves(self):
        assert scalars.theta_invert(1.0) == 1.5

    def test_known_root(self):
        # 50-digit root of theta(p) = 2
        assert scalars.theta_invert(2.0) == pytest.approx(1.2695181809130330, rel=1e-13)

    def test_below_power_family_threshold(self):
        p = scalars.theta_invert(4.0)  # m = 3 family has ratio m+1 = 4
        assert p < 1 + 1 / 3

    @pytest.mark.parametrize("ratio", [1.0, 1.5, 2.0, 10.0, 1e3, 1e6])
    def test_round_trip(self, ratio):
        p = scalars.theta_invert(ratio)
        assert abs(scalars.theta_eval(p) - ratio) <= 1e-10 * ratio
        assert 1.0 < p <= 1.5

    def test_inconsistent_ratio_rejected(self):
        with pytest.raises(ValueError):
            scalars.theta_invert(0.5)


class TestBoundChain:
    def test_slack_at_two(self):
        report = scalars.theta_bound_check([2.0])
        # theta(2) - 2/6 = 0.5773... - 0.3333... ~ 0.244
        assert report.min_slack["chain_t6"] == pytest.approx(0.24402, abs=1e-4)

    def test_near_one_ratio_check(self):
        t = 1.0001
        assert scalars.theta_eval(t) * 6.0 * (t - 1.0) / t > 1.0

    def test_at_hundred(self):
        th = scalars.theta_eval(100.0)
        assert th == pytest.approx(0.9058475567551161, rel=1e-13)
        assert 0.2876 * 100.0 / 99.0 < th

    def test_full_grid(self):
        report = scalars.theta_bound_check(scalars.geometric_grid(1 + 1e-6, 1e3, 10_000))
        assert report.ok
        assert min(report.min_slack.values()) > 0.0

    def test_grid_validation(self):
        with pytest.raises(ValueError):
            scalars.theta_bound_check([0.5, 2.0])


class TestQ:
    def test_value_at_half(self):
        expected = 1.5 * math.log(0.5) - 0.5 * math.log(1.5)
        assert scalars.q_eval(0.5) == pytest.approx(expected, rel=1e-15)
        assert math.exp(scalars.q_eval(0.5)) == pytest.approx(1.0 / (2.0 * math.sqrt(3.0)),
                                                              rel=1e-14)

    def test_endpoint_limits_vanish(self):
        assert abs(scalars.q_eval(1e-9)) < 5e-8
        assert abs(scalars.q_eval(1.0 - 1e-9)) < 5e-8

    def test_second_derivative_positive(self):
        for k in range(1, 1000):
            x = 1e-6 + (1.0 - 2e-6) * k / 1000.0
            assert scalars.q_second(x) > 0.0

    def test_derivatives_match_oracle(self):
        for x in (0.05, 0.3, 0.469, 0.8):
            dq = mpmath.diff(q_mp, mpmath.mpf(x))
            d2q = mpmath.diff(q_mp, mpmath.mpf(x), 2)
            assert scalars.q_prime(x) == pytest.approx(float(dq), rel=1e-11)
            assert scalars.q_second(x) == pytest.approx(float(d2q), rel=1e-9)

    def test_p_is_log_of_normalized_theta(self):
        for t in (1.2, 1.5, 2.0, 5.0):
            lhs = math.exp(scalars.p_eval(t))
            rhs = scalars.theta_eval(t) * (t - 1.0) / t
            assert lhs == pytest.approx(rhs, rel=1e-13)


class TestQAnalysis:
    def test_minimum_location_and_value(self):
        qa = scalars.q_analysis(1e-12)
        # 50-digit oracle: root of Q' and the minimum of exp(Q)
        x_oracle = mpmath.findroot(
            lambda x: 2 * mpmath.log(x) - mpmath.log(1 - x) + 2 / (2 - x) - mpmath.log(2 - x),
            mpmath.mpf("0.45"))
        assert qa.x_min == pytest.approx(float(x_oracle), abs=1e-11)
        assert qa.exp_q_min == pytest.approx(float(mpmath.e ** q_mp(x_oracle)), rel=1e-12)
        assert qa.exp_q_min == pytest.approx(0.2876285089265452, rel=1e-12)

    def test_bounds(self):
        qa = scalars.q_analysis(1e-10)
        assert 0.2876 < qa.exp_q_min <= math.exp(scalars.q_eval(0.5))
        assert qa.exp_q_min > scalars.SQRT3_EXPQ_BOUND
        assert abs(scalars.q_prime(qa.x_min)) < 1e-10

    def test_sqrt3_constant(self):
        oracle = 1 / (mpmath.sqrt(3) * mpmath.e ** (2 / mpmath.e))
        assert scalars.SQRT3_EXPQ_BOUND == pytest.approx(float(oracle), rel=1e-15)

    def test_tolerance_validation(self):
        with pytest.raises(ValueError):
            scalars.q_analysis(0.0)


class TestBerndtsson:
    def test_equal_constants(self):
        cmp = scalars.berndtsson_compare(1.0, 1.0)
        assert cmp.p_berndtsson == pytest.approx(1.005, rel=1e-15)
        assert cmp.p_theta == 1.5
        assert cmp.theta_dominates

    def test_ratio_two(self):
        cmp = scalars.berndtsson_compare(2.0, 1.0)
        assert cmp.p_berndtsson == pytest.approx(1.0025, rel=1e-15)
        assert cmp.p_theta > cmp.p_berndtsson

    def test_power_family_instance(self):
        cmp = scalars.berndtsson_compare(math.pi, math.pi / 4.0)
        assert cmp.p_berndtsson == pytest.approx(1.0 + 1.0 / 800.0, rel=1e-12)
        assert cmp.p_theta < 4.0 / 3.0

    def test_inconsistent_input(self):
        with pytest.raises(ValueError):
            scalars.berndtsson_compare(1.0, 2.0)
