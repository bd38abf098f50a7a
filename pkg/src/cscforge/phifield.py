"""Closed-form solution of the separable field equation, plus a path oracle.

The equation ``4 dPhi / (Phi (4 - Phi)) = omega + conj(omega)`` separates:
with ``f`` the real potential of the form, the solution through
``Phi(p0) = Phi0`` is the logistic

    Phi(z) = 4 e^(f(z) + a0) / (1 + e^(f(z) + a0)),
    a0 = log(Phi0 / (4 - Phi0)) - f(p0).

The closed form is what the rest of the package evaluates; an independent
fixed-step RK4 integrator along polylines serves as its oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from .algebra import Point, is_infinity
from .errors import (
    BadInitialValue,
    BasePointIsPole,
    HypothesesFailed,
    PathTooCloseToPole,
    StepUnderflow,
)
from .forms import MeromorphicOneForm, check_hypotheses

__all__ = [
    "PhiField",
    "solve_phi_closed",
    "phi_field_from_a0",
    "phi_limit_at_pole",
    "integrate_phi_along_path",
    "DEFAULT_BASE_POINTS",
]

DEFAULT_BASE_POINTS = (1 + 0j, 2 + 0j, 1 + 1j)


def _logistic4(x: float) -> float:
    # 4 * sigmoid(x), stable on both tails
    if x >= 0.0:
        return 4.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return 4.0 * e / (1.0 + e)


def _logistic4_many(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 4.0 / (1.0 + np.exp(-x[pos]))
    e = np.exp(x[~pos])
    out[~pos] = 4.0 * e / (1.0 + e)
    return out


@dataclass(frozen=True, eq=False)
class PhiField:
    """The solved field: a validated form plus its initial data.

    ``a0`` is the integration constant of the separated equation, and every
    evaluation goes through the stable logistic form, so 0 < value < 4 at
    every non-pole point.
    """

    form: MeromorphicOneForm
    p0: complex
    phi0: float
    a0: float

    def offset_potential(self, z: complex) -> float:
        return self.form.potential(z) + self.a0

    def offset_potential_many(self, zs: np.ndarray) -> np.ndarray:
        return self.form.potential_many(zs) + self.a0

    def value(self, z: complex) -> float:
        return _logistic4(self.offset_potential(z))

    def value_many(self, zs: np.ndarray) -> np.ndarray:
        return _logistic4_many(self.offset_potential_many(zs))

    def __repr__(self) -> str:
        return f"PhiField(p0={self.p0!r}, phi0={self.phi0!r}, a0={self.a0!r})"


def _default_base_point(form: MeromorphicOneForm) -> complex:
    for cand in DEFAULT_BASE_POINTS:
        if form.min_pole_distance(cand) > 1e-9:
            return cand
    raise BasePointIsPole("all default base points are poles of the form")


def solve_phi_closed(
    form: MeromorphicOneForm,
    p0: complex | None = None,
    phi0: float = 2.0,
) -> PhiField:
    """Solve the field equation in closed form.

    Raises :class:`HypothesesFailed` when the form is not third-kind with
    real nonzero residues, :class:`BasePointIsPole` when the base point sits
    on a pole, and :class:`BadInitialValue` when ``phi0`` is outside (0, 4).
    """
    report = check_hypotheses(form)
    if not report.ok:
        raise HypothesesFailed("; ".join(report.diagnostics) or "hypotheses failed")
    if p0 is None:
        p0 = _default_base_point(form)
    p0 = complex(p0)
    if form.min_pole_distance(p0) <= 1e-9 * max(1.0, abs(p0)):
        raise BasePointIsPole(f"base point {p0!r} is a pole")
    phi0 = float(phi0)
    if not (0.0 < phi0 < 4.0):
        raise BadInitialValue(f"initial value {phi0} outside (0, 4)")
    a0 = math.log(phi0 / (4.0 - phi0)) - form.potential(p0)
    return PhiField(form, p0, phi0, a0)


def phi_field_from_a0(
    form: MeromorphicOneForm,
    a0: float,
    p0: complex | None = None,
) -> PhiField:
    """Build a field directly from its integration constant."""
    report = check_hypotheses(form)
    if not report.ok:
        raise HypothesesFailed("; ".join(report.diagnostics) or "hypotheses failed")
    if p0 is None:
        p0 = _default_base_point(form)
    p0 = complex(p0)
    if form.min_pole_distance(p0) <= 1e-9 * max(1.0, abs(p0)):
        raise BasePointIsPole(f"base point {p0!r} is a pole")
    phi0 = _logistic4(form.potential(p0) + float(a0))
    if not (0.0 < phi0 < 4.0):
        raise BadInitialValue("constant so extreme the initial value saturates")
    return PhiField(form, p0, phi0, float(a0))


def phi_limit_at_pole(field: PhiField, pole: Union[int, complex, Point]) -> float:
    """Continuous extension value of the field at a pole: 0 for positive
    residue, 4 for negative.  ``pole`` may be an index into the form's pole
    list, a pole location, or :data:`INFINITY`."""
    form = field.form
    if is_infinity(pole):
        if form.infinity_pole_order() != 1:
            raise ValueError("INFINITY is not a simple pole of this form")
        lam = form.residue_at_infinity().real
    elif isinstance(pole, int) and not isinstance(pole, bool):
        lam = form.poles[pole][1].real
    else:
        pole = complex(pole)
        for a, l in form.poles:
            if abs(a - pole) <= 1e-9 * max(1.0, abs(a), abs(pole)):
                lam = l.real
                break
        else:
            raise ValueError(f"{pole!r} is not a pole of the form")
    if lam == 0:
        raise ValueError("pole with zero residue")
    return 0.0 if lam > 0 else 4.0


def _segment_point_distance(z0: complex, z1: complex, a: complex) -> float:
    d = z1 - z0
    L2 = d.real * d.real + d.imag * d.imag
    if L2 == 0.0:
        return abs(a - z0)
    t = ((a - z0).real * d.real + (a - z0).imag * d.imag) / L2
    t = min(1.0, max(0.0, t))
    return abs(a - (z0 + t * d))


def integrate_phi_along_path(
    form: MeromorphicOneForm,
    path: Sequence[complex],
    phi_start: float,
    step: float = 1e-4,
    agreement_tol: float = 1e-6,
    min_pole_distance: float = 1e-3,
) -> float:
    """Integrate the field equation along a polyline with fixed-step RK4.

    The polyline is parametrized at constant speed over [0, 1]; the step is
    in that path parameter.  The result is cross-checked against a half-step
    run and rejected (:class:`StepUnderflow`) if the two disagree by more
    than ``agreement_tol``.  Serves as the independent oracle for the closed
    form and must not use it.
    """
    phi_start = float(phi_start)
    if not (0.0 < phi_start < 4.0):
        raise BadInitialValue(f"start value {phi_start} outside (0, 4)")
    pts = [complex(p) for p in path]
    segments: list[Tuple[complex, complex, float]] = []
    for z0, z1 in zip(pts, pts[1:]):
        if z0 == z1:
            continue
        for a, _ in form.poles:
            if _segment_point_distance(z0, z1, a) < min_pole_distance:
                raise PathTooCloseToPole(
                    f"segment {z0!r} -> {z1!r} passes within "
                    f"{min_pole_distance} of pole {a!r}"
                )
        segments.append((z0, z1 - z0, abs(z1 - z0)))
    if not segments:
        return phi_start
    total = sum(L for _, _, L in segments)

    pole_data = tuple(form.poles)
    dh = form.exact_part.derivative()
    dh_coeffs = tuple(complex(c) for c in dh.coeffs)

    def run(refine: int) -> float:
        phi = phi_start
        for z0, dz, L in segments:
            span = L / total
            n = max(1, math.ceil(span / step)) * refine
            h = 1.0 / n
            # rhs(s, phi) = phi (4 - phi) / 4 * 2 Re(eta(z(s)) dz)
            def drive(zv: complex) -> float:
                acc = 0j
                for a, lam in pole_data:
                    acc += lam / (zv - a)
                if dh_coeffs:
                    p = dh_coeffs[-1]
                    for c in reversed(dh_coeffs[:-1]):
                        p = p * zv + c
                    acc += p
                return 0.5 * (acc * dz).real

            w_right = drive(z0)
            for i in range(n):
                s = i * h
                w0 = w_right
                wm = drive(z0 + (s + 0.5 * h) * dz)
                w_right = drive(z0 + (s + h) * dz)
                k1 = phi * (4.0 - phi) * w0
                p2 = phi + 0.5 * h * k1
                k2 = p2 * (4.0 - p2) * wm
                p3 = phi + 0.5 * h * k2
                k3 = p3 * (4.0 - p3) * wm
                p4 = phi + h * k3
                k4 = p4 * (4.0 - p4) * w_right
                phi += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0
        return phi

    coarse = run(1)
    fine = run(2)
    if abs(coarse - fine) > agreement_tol:
        raise StepUnderflow(
            f"half-step disagreement {abs(coarse - fine):.3e} exceeds "
            f"{agreement_tol:.1e}"
        )
    return fine
