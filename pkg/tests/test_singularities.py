import math

import numpy as np
import pytest

from cscforge import (
    INFINITY,
    AnnulusContainsSingularity,
    MetricField,
    NonConicalSingularityPresent,
    build_third_kind,
    classify_singular_points,
    estimate_cone_angle,
    football_metric,
    gauss_bonnet_check,
    phi_field_from_a0,
    predicted_divisor,
    solve_phi_closed,
    total_metric_area,
)

TWO_PI = 2.0 * math.pi


def pair_form():
    return build_third_kind([(1j, 1.0), (-1j, 1.0)])


class TestPredictedDivisor:
    def test_two_equal_cones(self):
        form = build_third_kind([(0j, 2.5)])
        d = predicted_divisor(form, 1)
        assert abs(d.weight_at(0j) - 1.5) < 1e-12
        assert abs(d.weight_at(INFINITY) - 1.5) < 1e-12
        assert len(d) == 2

    def test_smooth_poles_omitted(self):
        d = predicted_divisor(pair_form(), 1)
        assert d.weight_at(0j) == 1.0
        assert d.weight_at(INFINITY) == 1.0
        assert len(d) == 2  # the unit-residue poles are smooth points

    def test_flat_negative_residue_excluded(self):
        form = build_third_kind([(0j, -3.0)])
        d = predicted_divisor(form, 0)
        assert d.weight_at(0j) == 0
        assert abs(d.weight_at(INFINITY) - 2.0) < 1e-12
        flagged = [i for i in classify_singular_points(form, 0)
                   if isinstance(i.location, complex)]
        assert len(flagged) == 1
        assert flagged[0].predicted_angle is None
        assert not flagged[0].conical_expected

    def test_spherical_keeps_negative_residue(self):
        form = build_third_kind([(0j, -3.0)])
        d = predicted_divisor(form, 1)
        assert abs(d.weight_at(0j) - 2.0) < 1e-12


class TestConeAngles:
    def test_half_cone(self):
        fm = football_metric(0.5)
        rep = estimate_cone_angle(fm, 0j)
        assert abs(rep.fitted_angle - math.pi) <= 0.01 * math.pi
        assert rep.conical
        assert rep.regression_r2 >= 0.999

    def test_order_one_zero(self):
        m = MetricField(phi_field_from_a0(pair_form(), 0.0), K=1)
        rep = estimate_cone_angle(m, 0j)
        assert abs(rep.fitted_angle - 4 * math.pi) <= 0.01 * 4 * math.pi
        assert rep.predicted_angle == pytest.approx(4 * math.pi)

    def test_smooth_pole_measures_full_turn(self):
        m = MetricField(phi_field_from_a0(pair_form(), 0.0), K=1)
        rep = estimate_cone_angle(m, 1j)
        assert abs(rep.fitted_angle - TWO_PI) <= 0.01 * TWO_PI
        assert not rep.conical

    def test_infinity_chart(self):
        fm = football_metric(2.5)
        rep = estimate_cone_angle(fm, INFINITY)
        assert abs(rep.fitted_angle - 5 * math.pi) <= 0.01 * 5 * math.pi

    def test_flat_negative_residue_not_conical(self):
        form = build_third_kind([(0j, -3.0)])
        m = MetricField(phi_field_from_a0(form, 0.0), K=0)
        rep = estimate_cone_angle(m, 0j)
        assert not rep.conical
        assert rep.fitted_angle < 0  # divergent end, no cone angle
        # density blows up along the approach
        assert m.density(1e-4 + 0j) > 1e6 * m.density(1e-2 + 0j)

    def test_annulus_guard(self):
        m = MetricField(phi_field_from_a0(pair_form(), 0.0), K=1)
        with pytest.raises(AnnulusContainsSingularity):
            estimate_cone_angle(m, 0j, radii=np.geomspace(1e-3, 0.8, 8))

    def test_hyperbolic_degenerate_zero(self):
        # at a0 = 0 the field value at the zero z = 0 is exactly 2
        m = MetricField(phi_field_from_a0(pair_form(), 0.0), K=-1)
        rep = estimate_cone_angle(m, 0j)
        assert rep.note.startswith("degenerate")
        assert not rep.conical

    def test_integer_family_cone(self):
        fm = football_metric(2.0, "integer", 1.0)
        rep = estimate_cone_angle(fm, 0j)
        assert abs(rep.fitted_angle - 4 * math.pi) <= 0.01 * 4 * math.pi

    def test_hyperbolic_angles(self):
        # K = -1: pole angle 2 pi |residue|; zero angle 2 pi (order + 1)
        # provided the field value there is not 2
        form = build_third_kind([(0j, 2.5)])
        m = MetricField(phi_field_from_a0(form, 0.4), K=-1)
        rep = estimate_cone_angle(m, 0j)
        assert abs(rep.fitted_angle - 5 * math.pi) <= 0.01 * 5 * math.pi
        m2 = MetricField(phi_field_from_a0(pair_form(), 0.8), K=-1)
        rep2 = estimate_cone_angle(m2, 0j)
        assert rep2.note == ""
        assert abs(rep2.fitted_angle - 4 * math.pi) <= 0.01 * 4 * math.pi

    def test_flat_positive_residue_angle(self):
        # K = 0 with positive residue: a genuine cone of angle 2 pi residue
        form = build_third_kind([(0j, 1.5)])
        m = MetricField(phi_field_from_a0(form, 0.2), K=0)
        rep = estimate_cone_angle(m, 0j)
        assert abs(rep.fitted_angle - 3 * math.pi) <= 0.01 * 3 * math.pi
        assert rep.conical


class TestGaussBonnet:
    def test_round_sphere(self):
        form = build_third_kind([(0j, 1.0)])
        m = MetricField(phi_field_from_a0(form, 0.0), K=1)
        rep = gauss_bonnet_check(m)
        assert rep.deg_d == 0
        assert abs(rep.total_area - 4 * math.pi) < 0.01 * 4 * math.pi

    def test_doubled_cone(self):
        form = build_third_kind([(0j, 2.0)])
        m = MetricField(phi_field_from_a0(form, 0.0), K=1)
        rep = gauss_bonnet_check(m)
        assert abs(rep.total_area - 8 * math.pi) < 0.01 * 8 * math.pi

    def test_half_cone(self):
        form = build_third_kind([(0j, 0.5)])
        m = MetricField(phi_field_from_a0(form, 0.0), K=1)
        rep = gauss_bonnet_check(m)
        assert abs(rep.total_area - 2 * math.pi) < 0.01 * 2 * math.pi

    def test_only_spherical_allowed(self):
        form = build_third_kind([(0j, 2.0)])
        for K in (0, -1):
            m = MetricField(phi_field_from_a0(form, 0.0), K=K)
            with pytest.raises(NonConicalSingularityPresent):
                gauss_bonnet_check(m)

    def test_restated_on_generic_form(self, random_forms):
        form = random_forms[0]
        m = MetricField(solve_phi_closed(form, None, 2.0), K=1)
        rep = gauss_bonnet_check(m)
        assert rep.residual < 0.01 * rep.expected_area

    def test_family_area_helper(self):
        fm = football_metric(1.5)
        area = total_metric_area(fm)
        assert abs(area - 6 * math.pi) < 0.01 * 6 * math.pi
