"""Generalized Bergman kernels and the effectiveness pipeline."""
import math
from fractions import Fraction as Fr

import pytest

from openeff.kernel import (
    McConfig,
    c_fp,
    classical_bergman,
    effective_p_report,
    kernel_inv,
    kernel_inv_from_sq,
    mc_weighted_norm,
    weighted_norm_growth,
)
from openeff.toric import (
    MonomialWeight,
    PiScaled,
    PolyFunction,
    PreconditionError,
    membership,
    weighted_norm_sq,
)
from openeff.scalars import theta_eval


class TestKernelWorkedExamples:
    @pytest.mark.parametrize("m", range(1, 11))
    def test_power_family(self, m):
        res = kernel_inv(PolyFunction.monomial((m,)), MonomialWeight([m]))
        assert res.k_inv == PiScaled.of(Fr(1, m + 1), 1)
        assert res.kernel == PiScaled.of(m + 1, -1)
        assert res.jumping == Fr(m + 1, 2 * m)
        assert res.ideal.generators == ((m + 1,),)

    @pytest.mark.parametrize("sin_sq", [Fr(1, 4), Fr(1, 2), Fr(9, 25)])
    def test_rotated_line(self, sin_sq):
        # K = 2/(pi^2 sin^2), independent of the weight scale delta
        for delta in (Fr(1, 2), 1, 3):
            res = kernel_inv_from_sq({(1, 0): 1 - sin_sq, (0, 1): sin_sq},
                                     MonomialWeight([delta, 0]))
            assert res.k_inv == PiScaled.of(sin_sq / 2, 2)

    def test_third_example_reports_oracle_with_discrepancy_note(self):
        res = kernel_inv(PolyFunction({(1, 0): 1, (0, 2): 1}), MonomialWeight([1, 0]))
        assert res.k_inv == PiScaled.of(Fr(1, 3), 2)      # from int |z2|^4 = pi^2/3
        assert res.kernel == PiScaled.of(3, -2)
        assert any("4/pi^2" in note for note in res.annotations)
        assert any("3/pi^2" in note for note in res.annotations)

    def test_trivial_weight_degenerates_to_point_evaluation(self):
        res = kernel_inv(PolyFunction.one(2), MonomialWeight([0, 0]))
        assert res.k_inv == PiScaled.of(1, 2)
        assert res.ideal.generators == ((0, 1), (1, 0))

    def test_zero_function_rejected(self):
        with pytest.raises(ValueError):
            kernel_inv(PolyFunction({}), MonomialWeight([1]))


class TestCfp:
    @pytest.mark.parametrize("m", [1, 2, 5])
    def test_at_family_threshold(self, m):
        F = PolyFunction.monomial((m,))
        w = MonomialWeight([m])
        assert c_fp(F, w, 1 + Fr(1, m)) == PiScaled.of(Fr(1, m + 1), 1)

    def test_below_threshold_vanishes(self):
        F = PolyFunction.monomial((3,))
        assert c_fp(F, MonomialWeight([3]), Fr(5, 4)).is_zero

    def test_two_variable_projection(self):
        F = PolyFunction({(1, 0): 1, (0, 2): 1})
        assert c_fp(F, MonomialWeight([1, 0]), 1) == PiScaled.of(Fr(1, 3), 2)

    def test_matches_kernel_at_jumping_ideal(self):
        for F, w in [
            (PolyFunction.monomial((4,)), MonomialWeight([4])),
            (PolyFunction({(1, 0): 1, (0, 2): 1}), MonomialWeight([1, 0])),
            (PolyFunction({(2, 1): (Fr(1, 2), Fr(1, 3)), (0, 3): 1}),
             MonomialWeight([Fr(3, 2), Fr(2, 3)])),
        ]:
            res = kernel_inv(F, w)
            p = 2 * res.jumping
            assert c_fp(F, w, p) == res.k_inv


class TestClassicalBergman:
    def test_values(self):
        assert classical_bergman(1) == PiScaled.of(1, -1)
        assert classical_bergman(2) == PiScaled.of(1, -2)

    def test_generalized_at_most_classical(self):
        # K_{phi,1}(0) <= K(0) for a = (1): both equal 1/pi here
        res = kernel_inv(PolyFunction.one(1), MonomialWeight([1]))
        assert float(res.kernel) <= float(classical_bergman(1)) + 1e-15

    def test_off_center_rejected(self):
        with pytest.raises(ValueError):
            classical_bergman(2, z0=(0.5, 0.0))


class TestEffectiveP:
    def test_power_family_full_pipeline(self):
        for m in (1, 3, 10, 50):
            rep = effective_p_report(PolyFunction.monomial((m,)), MonomialWeight([m]))
            assert rep.c1 == PiScaled.of(1, 1)
            assert rep.c2 == PiScaled.of(Fr(1, m + 1), 1)
            assert rep.ratio == m + 1
            assert rep.p_effective < 1 + 1 / m
            assert rep.membership_verdict
            assert rep.p_effective > rep.berndtsson_p

    def test_half_weight_example(self):
        rep = effective_p_report(PolyFunction.one(1), MonomialWeight([Fr(1, 2)]))
        assert rep.c1 == PiScaled.of(2, 1)
        assert rep.c2 == PiScaled.of(1, 1)
        assert rep.ratio == 2
        # membership here needs p < 2; p_effective <= 3/2 always
        assert rep.p_effective <= 1.5 and rep.membership_verdict

    def test_trivial_weight(self):
        rep = effective_p_report(PolyFunction.one(2), MonomialWeight([0, 0]))
        assert rep.c1 == rep.c2 == PiScaled.of(1, 2)
        assert rep.ratio == 1 and rep.p_effective == 1.5
        assert rep.membership_verdict

    def test_divergent_c1_is_precondition_error(self):
        with pytest.raises(PreconditionError, match="jumping"):
            effective_p_report(PolyFunction.one(1), MonomialWeight([1]))

    def test_sandwich_invariant(self):
        # C2 <= ||F||_0^2 <= C1 (the weight only increases the norm)
        cases = [
            (PolyFunction.monomial((3,)), MonomialWeight([3])),
            (PolyFunction({(1, 0): 1, (0, 1): (0, Fr(1, 2))}), MonomialWeight([Fr(1, 2), Fr(1, 4)])),
        ]
        for F, w in cases:
            rep = effective_p_report(F, w)
            mid = weighted_norm_sq(F, w, 0)
            assert float(rep.c2) <= float(mid) + 1e-15
            assert float(mid) <= float(rep.c1) + 1e-15

    def test_enlarging_weight_shrinks_p(self):
        for m in (1, 2, 5):
            F = PolyFunction.monomial((m,))
            small = effective_p_report(F, MonomialWeight([m]))
            large = effective_p_report(F, MonomialWeight([m + Fr(1, 2)]))
            assert large.p_effective <= small.p_effective

    def test_proposition_audit_over_family(self):
        # at p = 1 + 1/m the constrained infimum gives theta(p) <= C1/c_fp = m+1
        for m in range(1, 101):
            F = PolyFunction.monomial((m,))
            w = MonomialWeight([m])
            p = 1 + Fr(1, m)
            cfp = c_fp(F, w, p)
            ratio = weighted_norm_sq(F, w, 1).ratio(cfp)
            assert theta_eval(float(p)) <= float(ratio) + 1e-12
            assert not membership(F, w, p)


class TestMonteCarloCrossChecks:
    CFG = McConfig(samples=100_000, seed=24601, streams=8)

    def test_power_family_norm(self):
        est = mc_weighted_norm(PolyFunction.monomial((2,)), MonomialWeight([2]), 1, self.CFG)
        assert est.within_sigmas(math.pi, 3.0)
        assert not est.divergent

    def test_unweighted_volume(self):
        est = mc_weighted_norm(PolyFunction.one(2), MonomialWeight([0, 0]), 0, self.CFG)
        assert est.within_sigmas(math.pi ** 2, 3.0)

    def test_multi_term_against_exact(self):
        F = PolyFunction({(1, 0): 1, (0, 2): (Fr(1, 2), Fr(1, 2))})
        w = MonomialWeight([Fr(1, 2), Fr(1, 4)])
        exact = float(weighted_norm_sq(F, w, 1))
        est = mc_weighted_norm(F, w, 1, self.CFG)
        assert est.within_sigmas(exact, 4.0)

    def test_divergent_flag_and_growth(self):
        F = PolyFunction({(1, 0): 1, (0, 2): 1})
        w = MonomialWeight([1, 0])
        est = mc_weighted_norm(F, w, 1, self.CFG)
        assert est.divergent
        profile = weighted_norm_growth(F, w, 1, [5.0, 10.0, 20.0, 40.0], self.CFG)
        means = [e.mean for _, e in profile]
        assert all(b > a for a, b in zip(means, means[1:]))

    def test_bit_reproducible(self):
        a = mc_weighted_norm(PolyFunction.monomial((1, 1)), MonomialWeight([1, Fr(1, 2)]),
                             Fr(1, 2), self.CFG)
        b = mc_weighted_norm(PolyFunction.monomial((1, 1)), MonomialWeight([1, Fr(1, 2)]),
                             Fr(1, 2), self.CFG)
        assert (a.mean, a.std_error) == (b.mean, b.std_error)
