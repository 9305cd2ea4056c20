"""Function families, Jensen, power-sum gaps and the coupled inequality."""

import math

import numpy as np
import pytest

import oracle
from bonnesen import (
    AngleVector,
    CaseId,
    Convexity,
    Direction,
    PolygonKind,
    PolygonModel,
    builtin_families,
    convexity_matches_second_derivative,
    coupled_gradient_slack,
    errors,
    family,
    jensen_slack,
    make_angle_vector,
    measure,
    ode_residual_max,
    power_gap_reverse_slack,
    power_gap_slack,
    regular_angles,
    sample_simplex_batch,
)

PI = math.pi


def probe_triangle():
    return make_angle_vector([0.4 * PI, 0.3 * PI, 0.3 * PI], PI)


MU_CASES = {
    "sin": (1.0, CaseId.I1, Direction.GE),
    "cos": (1.0, CaseId.I2, Direction.LE),
    "sinh": (1.0, CaseId.II1, Direction.LE),
    "shifted_cosh": (-1.0, CaseId.II2, Direction.GE),
}


class TestBuiltinFamilies:
    def test_expected_names(self):
        names = {f.name for f in builtin_families()}
        assert names == {"tan", "sec", "csc", "square", "sin", "cos",
                         "sinh", "shifted_cosh"}

    @pytest.mark.parametrize("fam", builtin_families(), ids=lambda f: f.name)
    def test_convexity_class_matches_second_derivative(self, fam):
        assert convexity_matches_second_derivative(fam, points=1000)

    @pytest.mark.parametrize("fam", builtin_families(), ids=lambda f: f.name)
    def test_positivity_on_grid(self, fam):
        assert (np.asarray(fam.f(fam.grid(1000))) > 0.0).all() == fam.positivity

    @pytest.mark.parametrize("name", sorted(MU_CASES))
    def test_mu_residual(self, name):
        assert ode_residual_max(family(name), points=1000) <= 1e-10

    @pytest.mark.parametrize("name", sorted(MU_CASES))
    def test_case_assignment(self, name):
        fam = family(name)
        mu, case, direction = MU_CASES[name]
        assert fam.mu == mu
        assert fam.ode_case.case_id == case
        assert fam.ode_case.direction == direction
        grid = fam.grid(200)
        assert (np.sign(fam.f_double_prime(grid)) == fam.ode_case.sign_fpp).all()
        assert (np.sign(fam.f_prime(grid)) == fam.ode_case.sign_fp).all()

    def test_tan_has_no_mu(self):
        assert family("tan").mu is None

    def test_shifted_cosh_shift_below_bound_rejected(self):
        with pytest.raises(errors.ParamOutOfDomain):
            builtin_families(bound=1.0, cosh_shift=0.5)


class TestJensen:
    def test_regular_point_is_tight(self):
        assert jensen_slack(family("tan"), regular_angles(3, PI)) == pytest.approx(0.0, abs=1e-14)

    def test_tan_probe_value(self):
        assert jensen_slack(family("tan"), probe_triangle()) == pytest.approx(
            oracle.JENSEN_TAN, rel=1e-11)

    def test_sin_probe_value_is_nonpositive(self):
        val = jensen_slack(family("sin"), probe_triangle())
        assert val == pytest.approx(oracle.JENSEN_SIN, rel=1e-11)
        assert val < 0.0

    def test_out_of_domain(self):
        with pytest.raises(errors.OutOfDomain):
            jensen_slack(family("square"), AngleVector((1.2, 0.9, 0.9), 3.0))

    @pytest.mark.parametrize("name", ["tan", "sec", "csc"])
    def test_convex_families_strictly_positive_off_center(self, name):
        pts = sample_simplex_batch(5, PI, 1e-4, 100, seed=31)
        for row in pts:
            av = AngleVector(tuple(row), PI)
            if av.max_deviation() > 1e-3:
                assert jensen_slack(family(name), av) > 0.0


class TestPowerGap:
    def test_regular_point_zero(self):
        rec = power_gap_slack(family("tan"), regular_angles(3, PI), 1)
        assert rec.lhs == pytest.approx(0.0, abs=1e-12)
        assert rec.rhs == pytest.approx(0.0, abs=1e-12)
        assert rec.equality

    def test_probe_values(self):
        rec = power_gap_slack(family("tan"), probe_triangle(), 1)
        assert rec.lhs == pytest.approx(oracle.POWER_GAP_TAN_LHS, rel=1e-11)
        assert rec.rhs == pytest.approx(oracle.POWER_GAP_TAN_RHS, rel=1e-11)
        assert rec.slack == pytest.approx(oracle.POWER_GAP_TAN_SLACK, rel=1e-11)
        assert not rec.equality

    def test_sec_regular_alpha2(self):
        rec = power_gap_slack(family("sec"), regular_angles(4, PI), 2)
        assert rec.slack == pytest.approx(0.0, abs=1e-10)
        assert rec.equality

    def test_square_family_unit_total(self):
        av = make_angle_vector([0.4, 0.3, 0.2, 0.1], 1.0, bound=1.0)
        rec = power_gap_slack(family("square"), av, 1)
        assert rec.lhs == pytest.approx(0.015, rel=1e-12)
        assert rec.rhs == pytest.approx(0.003125, rel=1e-12)
        assert rec.slack == pytest.approx(0.011875, rel=1e-12)

    def test_concave_family_rejected(self):
        with pytest.raises(errors.WrongConvexityClass):
            power_gap_slack(family("sin"), probe_triangle(), 1)

    def test_bad_alpha(self):
        with pytest.raises(errors.ParamOutOfDomain):
            power_gap_slack(family("tan"), probe_triangle(), 0)


class TestReverseGap:
    def test_regular_point_zero(self):
        for alpha, k in [(1, 2), (2, 3), (3, 2)]:
            rec = power_gap_reverse_slack(family("tan"), regular_angles(3, PI), alpha, k)
            assert rec.equality
            assert abs(rec.slack) <= 1e-10 * rec.scale

    def test_probe_values_k3(self):
        rec = power_gap_reverse_slack(family("tan"), probe_triangle(), 1, 3)
        assert rec.lhs == pytest.approx(oracle.POWER_GAP_TAN_LHS, rel=1e-11)
        assert rec.rhs == pytest.approx(oracle.REVERSE_GAP_TAN_K3_RHS, rel=1e-11)
        assert rec.slack == pytest.approx(oracle.REVERSE_GAP_TAN_K3_SLACK, rel=1e-11)

    def test_csc_probe_positive(self):
        rec = power_gap_reverse_slack(family("csc"), probe_triangle(), 1, 3)
        ref = oracle.reverse_gap_values("csc", oracle.probe_angles(), PI, 1, 3)
        assert rec.slack == pytest.approx(float(ref["slack"]), rel=1e-12)
        assert rec.slack > 0.0

    @pytest.mark.parametrize("bad_k", [1, 0, -2, 2.5])
    def test_bad_k(self, bad_k):
        with pytest.raises(errors.BadK):
            power_gap_reverse_slack(family("tan"), probe_triangle(), 1, bad_k)


class TestGapSoundnessSampled:
    # The lower bound holds for every convex positive family. The reverse
    # (upper) bound additionally needs n*f(sigma) >= 1: its gradient factor
    # 2a P^(2a-1) - ... - ka P^(ka-1) only stays negative when P > 1, which
    # the trig families guarantee on the pi grid but x^2 on (0,1) does not.
    FAMS_LOWER = [("tan", PI), ("sec", PI), ("csc", PI), ("square", 1.0)]
    FAMS_REVERSE = [("tan", PI), ("sec", PI), ("csc", PI)]

    @pytest.mark.parametrize("name,total", FAMS_LOWER, ids=lambda p: str(p))
    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_power_gap_nonnegative(self, name, total, alpha):
        fam = family(name)
        for n in (3, 5, 8):
            pts = sample_simplex_batch(n, total, 1e-4, 200,
                                       seed=[7, n, alpha], bound=fam.domain[1])
            for row in pts:
                rec = power_gap_slack(fam, AngleVector(tuple(row), total), alpha)
                assert rec.slack >= -1e-10 * max(1.0, abs(rec.lhs))

    @pytest.mark.parametrize("name,total", FAMS_REVERSE, ids=lambda p: str(p))
    @pytest.mark.parametrize("alpha,k", [(1, 2), (2, 3), (3, 2)])
    def test_reverse_gap_nonnegative(self, name, total, alpha, k):
        fam = family(name)
        for n in (3, 5, 8):
            pts = sample_simplex_batch(n, total, 1e-4, 200,
                                       seed=[8, n, alpha, k], bound=fam.domain[1])
            for row in pts:
                rec = power_gap_reverse_slack(fam, AngleVector(tuple(row), total), alpha, k)
                assert rec.slack >= -1e-10 * max(1.0, abs(rec.rhs))

    def test_reverse_gap_fails_for_small_power_sums(self):
        # Regression pin: with P = sum x_i^2 < 1 the reverse bound is not
        # generally true. The ratio of the two sides' growth near the center is
        # k (n s)^((k-2)a) < 1 for n s = 1/3, k = 3, a = 2, so slack must
        # go negative close to the regular point.
        fam = family("square")
        av = make_angle_vector([1 / 3 + 0.02, 1 / 3 - 0.01, 1 / 3 - 0.01], 1.0, bound=1.0)
        rec = power_gap_reverse_slack(fam, av, 2, 3)
        assert rec.slack < 0.0

    def test_strictness_away_from_center(self):
        fam = family("tan")
        pts = sample_simplex_batch(4, PI, 1e-4, 300, seed=77)
        for row in pts:
            av = AngleVector(tuple(row), PI)
            if av.max_deviation() <= 1e-3:
                continue
            assert power_gap_slack(fam, av, 2).slack > 1e-10
            assert power_gap_reverse_slack(fam, av, 2, 3).slack > 1e-10


class TestCoupledGap:
    def test_equality_when_arguments_match(self):
        av = probe_triangle()
        rec = coupled_gradient_slack(family("sin"), av, av)
        assert rec.slack == pytest.approx(0.0, abs=1e-14)
        assert rec.equality

    def test_sin_probe_against_center(self):
        rec = coupled_gradient_slack(family("sin"), probe_triangle(), regular_angles(3, PI))
        assert rec.slack == pytest.approx(oracle.COUPLED_SIN_SLACK, rel=1e-11)
        assert not rec.equality

    def test_cos_probe_against_center(self):
        rec = coupled_gradient_slack(family("cos"), probe_triangle(), regular_angles(3, PI))
        assert rec.slack == pytest.approx(oracle.COUPLED_COS_SLACK, rel=1e-11)
        assert rec.slack > 0.0

    def test_totals_must_match(self):
        with pytest.raises(errors.TotalsDiffer):
            coupled_gradient_slack(
                family("sinh"),
                make_angle_vector([0.3, 0.3, 0.3], 0.9, bound=1.0),
                make_angle_vector([0.2, 0.3, 0.3], 0.8, bound=1.0),
            )

    def test_family_without_mu_rejected(self):
        av = probe_triangle()
        with pytest.raises(errors.MissingMu):
            coupled_gradient_slack(family("tan"), av, regular_angles(3, PI))

    @pytest.mark.parametrize("name", sorted(MU_CASES))
    def test_four_cases_nonnegative_sampled(self, name):
        fam = family(name)
        hi = fam.domain[1]
        total = PI if hi > 1.5 else 0.5 * 4 * hi / 2  # keep sigma interior
        n = 4
        th = sample_simplex_batch(n, total, 1e-3, 150, seed=[5, 1], bound=hi)
        ps = sample_simplex_batch(n, total, 1e-3, 150, seed=[5, 2], bound=hi)
        for a, b in zip(th, ps):
            rec = coupled_gradient_slack(
                fam, AngleVector(tuple(a), total), AngleVector(tuple(b), total))
            assert rec.slack >= -1e-10 * rec.scale

    def test_reduction_identity_to_inscribed_measure(self):
        # Coupled slack of sin against the center equals the negated
        # inscribed-polygon bound A - L cos(sigma) + d_n cos^2(sigma) at R = 1.
        for n in (3, 4, 6):
            pts = sample_simplex_batch(n, PI, 1e-4, 50, seed=[13, n])
            center = regular_angles(n, PI)
            cs = math.cos(PI / n)
            for row in pts:
                av = AngleVector(tuple(row), PI)
                rec = coupled_gradient_slack(family("sin"), av, center)
                m = measure(PolygonModel(PolygonKind.CYCLIC, 1.0, av))
                bound_value = m.area - m.perimeter * cs + m.dn * cs * cs
                assert rec.slack == pytest.approx(-bound_value, abs=1e-12)
