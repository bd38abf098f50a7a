import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cscforge import (
    INFINITY,
    BadInitialValue,
    BasePointIsPole,
    ComplexPolynomial,
    HypothesesFailed,
    PathTooCloseToPole,
    StepUnderflow,
    build_third_kind,
    integrate_phi_along_path,
    phi_field_from_a0,
    phi_limit_at_pole,
    solve_phi_closed,
)


def power_form(alpha):
    return build_third_kind([(0j, complex(alpha))])


class TestClosedForm:
    def test_unit_modulus_base_point_gives_zero_constant(self):
        field = solve_phi_closed(power_form(2.5), np.exp(0.4j), 2.0)
        assert abs(field.a0) < 1e-12
        # Phi = 4 |z|^(2 alpha) / (1 + |z|^(2 alpha))
        for z in (0.5 + 0.1j, 2.0 - 1.0j, -0.3 + 0.8j):
            t = abs(z) ** 5.0
            assert abs(field.value(z) - 4 * t / (1 + t)) < 1e-12

    def test_symmetry_on_unit_circle(self):
        field = solve_phi_closed(power_form(1.7), 1.0 + 0j, 2.0)
        assert abs(field.value(np.exp(2.1j)) - 2.0) < 1e-12

    def test_worked_value(self):
        field = solve_phi_closed(power_form(1.0), 1.0 + 0j, 2.0)
        assert abs(field.value(2.0 + 0j) - 16.0 / 5.0) < 1e-13

    def test_initial_condition_reproduced(self, test_forms):
        for form in test_forms:
            field = solve_phi_closed(form, None, 1.3)
            assert abs(field.value(field.p0) - 1.3) < 1e-12
            recon = math.log(field.phi0 / (4 - field.phi0)) - form.potential(field.p0)
            assert abs(field.a0 - recon) < 1e-12

    def test_bad_initial_value(self):
        for bad in (0.0, 4.0, -1.0, 5.0):
            with pytest.raises(BadInitialValue):
                solve_phi_closed(power_form(1.0), 1.0 + 0j, bad)

    def test_base_point_is_pole(self):
        with pytest.raises(BasePointIsPole):
            solve_phi_closed(power_form(1.0), 0j, 2.0)

    def test_hypotheses_gate(self):
        with pytest.raises(HypothesesFailed):
            solve_phi_closed(build_third_kind([(0j, 1j)]), 1.0 + 0j, 2.0)
        with pytest.raises(HypothesesFailed):
            solve_phi_closed(
                build_third_kind([], ComplexPolynomial([0.0, 1.0])), 1.0 + 0j, 2.0
            )

    def test_from_a0(self):
        form = power_form(2.0)
        field = phi_field_from_a0(form, 0.7, 1.0 + 0j)
        assert abs(field.a0 - 0.7) < 1e-15
        assert abs(field.value(field.p0) - field.phi0) < 1e-12


class TestPoleLimits:
    def test_positive_residue(self):
        field = solve_phi_closed(power_form(3.0), 1.0 + 0j, 2.0)
        assert phi_limit_at_pole(field, 0) == 0.0
        assert phi_limit_at_pole(field, 0j) == 0.0

    def test_negative_residue(self):
        field = solve_phi_closed(power_form(-3.0), 1.0 + 0j, 2.0)
        assert phi_limit_at_pole(field, 0) == 4.0

    def test_infinity(self):
        form = build_third_kind([(1j, 1.0), (-1j, 1.0)])
        field = solve_phi_closed(form, 1.0 + 0j, 2.0)
        assert phi_limit_at_pole(field, INFINITY) == 4.0
        # numerical confirmation far out
        assert abs(field.value(1e4 + 0j) - 4.0) < 1e-6

    def test_not_a_pole(self):
        field = solve_phi_closed(power_form(1.0), 1.0 + 0j, 2.0)
        with pytest.raises(ValueError):
            phi_limit_at_pole(field, 5.0 + 0j)


class TestPathOracle:
    def test_zero_length(self):
        form = power_form(1.0)
        assert integrate_phi_along_path(form, [1.0 + 0j], 2.0) == 2.0
        assert integrate_phi_along_path(form, [1.0 + 0j, 1.0 + 0j], 2.0) == 2.0

    def test_closed_loop_returns(self):
        form = power_form(1.0)
        theta = np.linspace(0.0, 2 * np.pi, 1001)
        loop = np.exp(1j * theta)
        out = integrate_phi_along_path(form, loop, 2.0)
        assert abs(out - 2.0) < 1e-8

    def test_matches_closed_form(self):
        form = power_form(1.0)
        field = solve_phi_closed(form, 1.0 + 0j, 2.0)
        out = integrate_phi_along_path(form, [1.0 + 0j, 2.0 + 0j], 2.0)
        assert abs(out - field.value(2.0 + 0j)) < 1e-6
        assert abs(out - 16.0 / 5.0) < 1e-6

    def test_path_independence(self):
        form = build_third_kind([(1j, 1.0), (-1j, 1.0)])
        start, end = 0.5 + 0j, 2.0 + 0.5j
        direct = integrate_phi_along_path(form, [start, end], 1.5)
        dogleg = integrate_phi_along_path(
            form, [start, 0.5 - 2.0j, 2.5 - 2.0j, end], 1.5
        )
        assert abs(direct - dogleg) < 1e-6

    def test_too_close_to_pole(self):
        form = build_third_kind([(1j, 1.0), (-1j, 1.0)])
        with pytest.raises(PathTooCloseToPole):
            integrate_phi_along_path(form, [0j, 2j], 2.0)

    def test_step_agreement_guard(self):
        form = power_form(1.0)
        with pytest.raises(StepUnderflow):
            integrate_phi_along_path(
                form, [1.0 + 0j, 2.0 + 0j], 2.0, step=0.25, agreement_tol=1e-16
            )

    def test_bad_start(self):
        with pytest.raises(BadInitialValue):
            integrate_phi_along_path(power_form(1.0), [1.0 + 0j, 2.0 + 0j], 4.0)


class TestProperties:
    def test_open_range(self, test_forms):
        rng = np.random.default_rng(99)
        for form in test_forms:
            field = solve_phi_closed(form, None, 2.0)
            count = 0
            while count < 40:
                z = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
                if form.min_pole_distance(z) <= 0.1:
                    continue
                count += 1
                v = field.value(z)
                assert 0.0 < v < 4.0

    @given(st.floats(0.1, 3.9), st.floats(0.1, 3.9))
    @settings(max_examples=40, deadline=None)
    def test_monotone_in_constant(self, phi0a, phi0b):
        form = build_third_kind([(1j, 1.0), (-1j, 1.0)])
        fa = solve_phi_closed(form, 1.0 + 0j, phi0a)
        fb = solve_phi_closed(form, 1.0 + 0j, phi0b)
        z = 0.7 - 0.4j
        if fa.a0 < fb.a0:
            assert fa.value(z) < fb.value(z)
        elif fa.a0 > fb.a0:
            assert fa.value(z) > fb.value(z)

    def test_closed_form_satisfies_equation(self):
        # 4 dPhi/dt along a path equals Phi (4 - Phi) * 2 Re(eta gamma')
        form = build_third_kind([(1j, 1.0), (-1j, 1.0)])
        field = solve_phi_closed(form, 1.0 + 0j, 2.0)
        z0, z1 = 0.4 + 0.1j, 1.8 - 0.6j
        dz = z1 - z0
        h = 1e-5
        for t in (0.2, 0.5, 0.8):
            z = z0 + t * dz
            dphi = (field.value(z0 + (t + h) * dz) - field.value(z0 + (t - h) * dz)) / (2 * h)
            phi = field.value(z)
            rhs = phi * (4.0 - phi) * 2.0 * (form.eta_at(z) * dz).real
            assert abs(4.0 * dphi - rhs) < 1e-5 * max(1.0, abs(rhs))
