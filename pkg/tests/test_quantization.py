import random
from fractions import Fraction

import pytest

from quadfock import (
    DomainError,
    FockConfig,
    IntervalSet,
    NonInjectiveError,
    PiecewiseAffineMap,
    QuadOperator,
    StepFunction,
    adjoint_operator,
    apply_operator,
    check_contraction_gram,
    check_homomorphism_powers,
    check_l2_contraction,
    check_selfadjoint_numeric,
    check_selfadjoint_structure,
    counterexample_report,
    dilation_operator,
    gamma2_matrix_element,
    inner,
    lemma4_derivative_check,
    window_radius,
)
from quadfock.families import (
    random_family,
    random_injective_operator,
    reflection_operator,
)
from quadfock.scalars import ExactComplex

CFG = FockConfig()
CFG_EXACT = FockConfig(c=Fraction(1))


def chi(l, r, v=1.0 + 0j):
    return StepFunction.indicator(l, r, v)


def identity_operator(l, r, one=1.0 + 0j):
    e = IntervalSet.from_intervals([(l, r)])
    return QuadOperator(e, e.indicator(one), PiecewiseAffineMap.identity(e))


class TestApply:
    def test_dilation_halves_support(self):
        T = dilation_operator(10, 2, 1.0 + 0j)
        assert apply_operator(T, chi(0, 1)) == chi(0, Fraction(1, 2))

    def test_zero_weight_kills_everything(self):
        e = IntervalSet.from_intervals([(0, 1)])
        T = QuadOperator(e, StepFunction.zero(), PiecewiseAffineMap.identity(e))
        assert apply_operator(T, chi(0, 1, 3 + 1j)).is_zero()

    def test_reflection_fixes_constants(self):
        T = reflection_operator(1.0)
        f = chi(0, 1, 0.3 + 0.1j)
        assert apply_operator(T, f) == f

    def test_sup_norm_contracts_with_bounded_weight(self):
        T = reflection_operator(0.9)
        f = chi(0, 1, 0.4 + 0j)
        assert apply_operator(T, f).sup_norm() <= 0.9 * f.sup_norm() + 1e-15

    def test_construction_validates_support(self):
        e = IntervalSet.from_intervals([(0, 1)])
        with pytest.raises(ValueError):
            QuadOperator(e, chi(0, 2), PiecewiseAffineMap.identity(e))


class TestAdjoint:
    def test_dilation_adjoint_formula(self):
        # T: f -> f(2.)  has  T*: g -> (1/2) g(./2)
        T = dilation_operator(2, 2, 1.0 + 0j)
        T_star = adjoint_operator(T)
        g = chi(0, 1)
        assert apply_operator(T_star, g) == chi(0, 2, 0.5 + 0j)

    def test_reflection_is_pairing_symmetric(self):
        T = reflection_operator(Fraction(9, 10), exact=True)
        f = chi(0, 1, ExactComplex(Fraction(1, 3), Fraction(1, 5)))
        g = chi(0, 1, ExactComplex(Fraction(-1, 4), Fraction(1, 7)))
        assert inner(apply_operator(T, f), g) == inner(f, apply_operator(T, g))
        # and the computed adjoint acts identically
        T_star = adjoint_operator(T)
        assert apply_operator(T_star, f) == apply_operator(T, f)

    def test_identity_restriction_is_selfadjoint(self):
        T = identity_operator(0, 1)
        T_star = adjoint_operator(T)
        f = chi(-1, 2, 0.5 + 0.5j)
        assert apply_operator(T_star, f) == apply_operator(T, f) == chi(0, 1, 0.5 + 0.5j)

    @pytest.mark.parametrize("seed", range(20))
    def test_pairing_identity_exact(self, seed):
        rng = random.Random(seed)
        T = random_injective_operator(rng, exact=True)
        T_star = adjoint_operator(T)
        f = random_family(rng, 1, exact=True, span=6)[0]
        g = random_family(rng, 1, exact=True, span=6)[0]
        assert inner(apply_operator(T, f), g) == inner(f, apply_operator(T_star, g))

    @pytest.mark.parametrize("seed", range(10))
    def test_double_adjoint_acts_like_original(self, seed):
        rng = random.Random(100 + seed)
        T = random_injective_operator(rng, exact=True)
        T2 = adjoint_operator(adjoint_operator(T))
        from quadfock import restrict
        for _ in range(3):
            f = random_family(rng, 1, exact=True, span=6)[0]
            assert apply_operator(T2, f) == apply_operator(T, f)

    def test_noninjective_rejected(self):
        e = IntervalSet.from_intervals([(0, 2)])
        phi = PiecewiseAffineMap.from_pieces([(0, 1, 1, 0), (1, 2, -1, 2)])
        T = QuadOperator(e, e.indicator(1.0 + 0j), phi)
        with pytest.raises(NonInjectiveError):
            adjoint_operator(T)


class TestHomomorphismPowers:
    def test_dilation_is_power_homomorphism(self):
        T = dilation_operator(8, 2, 1.0 + 0j)
        f = StepFunction.from_segments([(0, 1, 0.25 + 0j), (1, 2, -0.25 + 0j)])
        rep = check_homomorphism_powers(T, f, 3)
        assert all(rep.operator_equal.values())
        # but the adjoint carries the weight 1/2, so powers disagree
        assert not any(rep.adjoint_equal.values())

    def test_adjoint_square_witness_ratio(self):
        T = dilation_operator(2, 2, 1.0 + 0j)
        T_star = adjoint_operator(T)
        g = chi(0, 1)
        lhs = apply_operator(T_star, g ** 2)   # (1/2) g^2(./2)
        rhs = apply_operator(T_star, g) ** 2   # (1/4) g^2(./2)
        assert lhs == rhs.scale(2)

    def test_identity_operator_powers_agree(self):
        T = identity_operator(0, 3)
        f = StepFunction.from_segments([(0, 1, 1j), (2, 3, 2 + 0j)])
        rep = check_homomorphism_powers(T, f, 4)
        assert all(rep.operator_equal.values())
        assert all(rep.adjoint_equal.values())


class TestGamma2:
    def test_identity_window_reduces_to_plain_inner(self):
        from quadfock import exp_inner_closed
        T = identity_operator(-4, 4)
        f = chi(0, 1, 0.25 + 0j)
        g = chi(0, 2, 0.1 - 0.2j)
        assert gamma2_matrix_element(T, f, g, CFG) == exp_inner_closed(f, g, CFG)

    def test_dilation_closed_form(self):
        f = chi(0, 1, 0.25 + 0j)
        T = dilation_operator(window_radius(f), 2, 1.0 + 0j)
        assert gamma2_matrix_element(T, f, f, CFG) == pytest.approx(0.75 ** -0.25)

    def test_adjoint_dilation_closed_form(self):
        f = chi(0, 1, 0.25 + 0j)
        T_star = adjoint_operator(dilation_operator(window_radius(f), 2, 1.0 + 0j))
        got = gamma2_matrix_element(T_star, f, f, CFG).conjugate()
        assert got == pytest.approx((7 / 8) ** -0.5)

    def test_inadmissible_input_rejected(self):
        T = identity_operator(-4, 4)
        with pytest.raises(DomainError):
            gamma2_matrix_element(T, chi(0, 1, 0.6 + 0j), chi(0, 1, 0.1 + 0j), CFG)


class TestSelfAdjointStructure:
    def test_reflection_class_passes(self):
        rep = check_selfadjoint_structure(reflection_operator(0.9))
        assert rep.verdict
        assert rep.to_dict()["verdict"] is True

    def test_dilation_fails_involutivity_and_image(self):
        T = dilation_operator(1, 2, 1.0 + 0j)
        rep = check_selfadjoint_structure(T)
        assert not rep.involutive
        assert not rep.maps_into
        assert not rep.verdict

    def test_overweight_fails_bound(self):
        e = IntervalSet.from_intervals([(0, 1)])
        T = QuadOperator(e, chi(0, 1, 1.2 + 0j), PiecewiseAffineMap.identity(e))
        rep = check_selfadjoint_structure(T)
        assert not rep.weight_bounded
        assert rep.involutive and rep.maps_into

    def test_complex_weight_needs_symmetry(self):
        # constant complex weight with identity map: conj(h) != h o phi
        e = IntervalSet.from_intervals([(0, 1)])
        T = QuadOperator(e, chi(0, 1, 0.5j), PiecewiseAffineMap.identity(e))
        rep = check_selfadjoint_structure(T)
        assert not rep.weight_symmetric

    def test_complex_weight_symmetric_under_reflection(self):
        # h and conj(h) swapped by the reflection: h(x) = i on [0,1/2), -i on [1/2,1)
        e = IntervalSet.from_intervals([(0, 1)])
        h = StepFunction.from_segments([(0, Fraction(1, 2), 0.5j),
                                        (Fraction(1, 2), 1, -0.5j)])
        phi = PiecewiseAffineMap.from_pieces([(0, 1, -1, 1)])
        rep = check_selfadjoint_structure(QuadOperator(e, h, phi))
        assert rep.verdict


class TestSelfAdjointNumeric:
    def test_reflection_exact_defects_vanish(self):
        T = reflection_operator(Fraction(9, 10), exact=True)
        fam = random_family(random.Random(42), 4, exact=True)
        rep = check_selfadjoint_numeric(T, fam, CFG_EXACT, depth=8)
        assert rep.moment_defect == 0.0
        assert rep.exact_zero
        assert rep.defect < 1e-12

    def test_dilation_default_pair_gap(self):
        f = chi(0, 1, 0.25 + 0j)
        T = dilation_operator(window_radius(f), 2, 1.0 + 0j)
        rep = check_selfadjoint_numeric(T, [f], CFG)
        assert rep.defect >= abs(0.75 ** -0.25 - (7 / 8) ** -0.5) - 1e-12
        assert rep.defect > 5e-3

    def test_zero_operator_trivial(self):
        e = IntervalSet.from_intervals([(0, 1)])
        T = QuadOperator(e, StepFunction.zero(), PiecewiseAffineMap.identity(e))
        rep = check_selfadjoint_numeric(T, [chi(0, 1, 0.25 + 0j)], CFG)
        assert rep.moment_defect == 0.0


class TestDerivativeCheck:
    def test_single_function_hand_value(self):
        # q(t) = (1 - t/4)^(-1/2), q'(0) = 1/8 = 2 c ||f||^2
        f = chi(0, 1, 0.25 + 0j)
        rep = lemma4_derivative_check([f], [1.0], CFG)
        assert rep.derivative == pytest.approx(0.125, rel=1e-9)
        assert rep.rel_error < 1e-6
        assert rep.ratio_to_stated == pytest.approx(2.0, rel=1e-6)

    def test_zero_coefficients(self):
        f = chi(0, 1, 0.25 + 0j)
        rep = lemma4_derivative_check([f], [0.0], CFG)
        assert rep.derivative == pytest.approx(0.0, abs=1e-12)

    def test_cancelling_combination(self):
        f = chi(0, 1, 0.25 + 0j)
        rep = lemma4_derivative_check([f, f.scale(-1)], [1.0, 1.0], CFG)
        assert rep.expected == 0.0
        assert rep.derivative == pytest.approx(0.0, abs=1e-9)


class TestContraction:
    def test_identity_gives_zero_difference(self):
        T = identity_operator(-4, 4)
        fam = random_family(random.Random(1), 3)
        rep = check_contraction_gram(T, fam, CFG)
        assert rep.psd
        assert rep.min_eig == pytest.approx(0.0, abs=1e-12)

    def test_dilation_dominates(self):
        fam = random_family(random.Random(3), 3)
        T = dilation_operator(window_radius(*fam), 2, 1.0 + 0j)
        rep = check_contraction_gram(T, fam, CFG)
        assert rep.psd and rep.min_eig >= -1e-10

    def test_dilation_l2_ratio(self):
        fam = random_family(random.Random(4), 5)
        T = dilation_operator(window_radius(*fam), 2, 1.0 + 0j)
        rep = check_l2_contraction(T, fam)
        for r in rep.ratios:
            assert r == pytest.approx(2 ** -0.5, abs=1e-12)

    def test_strict_restriction_loses_mass(self):
        T = identity_operator(0, 1)
        f = chi(0, 2, 0.3 + 0j)
        rep = check_l2_contraction(T, [f])
        assert rep.max_ratio < 1


class TestCounterexample:
    def test_default_values(self):
        rep = counterexample_report(CFG)
        assert rep.lhs == pytest.approx(0.75 ** -0.25)
        assert rep.rhs == pytest.approx((7 / 8) ** -0.5)
        assert rep.gap == pytest.approx(5.52496e-3, rel=1e-4)

    def test_series_cross_check(self):
        rep = counterexample_report(CFG)
        assert abs(rep.lhs - rep.lhs_series) < 1e-10
        assert abs(rep.rhs - rep.rhs_series) < 1e-10

    def test_zero_input_no_gap(self):
        z = StepFunction.zero()
        rep = counterexample_report(CFG, z, z)
        assert rep.lhs == rep.rhs == 1
        assert rep.gap == 0

    def test_c_scaling(self):
        rep = counterexample_report(FockConfig(c=2.0))
        assert rep.lhs == pytest.approx(0.75 ** -0.5)
        assert rep.rhs == pytest.approx((7 / 8) ** -1)
        assert rep.gap == pytest.approx(abs(0.75 ** -0.5 - (7 / 8) ** -1), rel=1e-9)

    def test_power_witness(self):
        rep = counterexample_report(CFG)
        assert rep.adjoint_power_witness["equal"] is False


class TestOperatorJson:
    def test_round_trip(self):
        T = reflection_operator(0.9)
        assert QuadOperator.from_json(T.to_json()) == T
