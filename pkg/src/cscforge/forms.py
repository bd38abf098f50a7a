"""Differentials of the third kind on the sphere and their real potentials.

A form is stored by its simple-pole data ``(a_i, lambda_i)`` plus a polynomial
exact part H, so ``omega = sum lambda_i/(z - a_i) dz + dH``.  The hypotheses
of the construction (all poles simple including infinity, all residues real
and nonzero) are statements about this data, which keeps their validation
structural.  The rational coefficient ``eta`` with ``omega = eta dz`` is
built once and cached.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .algebra import (
    ComplexPolynomial,
    RationalFunction,
    Divisor,
    one_form_divisor,
    residue_at_infinity,
)
from .errors import DuplicatePole, EvalAtPole, HypothesesFailed, ZeroResidue

__all__ = [
    "MeromorphicOneForm",
    "ExactnessReport",
    "build_third_kind",
    "check_hypotheses",
    "potential_f",
    "divisor_of_form",
    "form_to_json",
    "form_from_json",
]

_RESIDUE_IMAG_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MeromorphicOneForm:
    """A meromorphic 1-form ``sum lambda_i/(z - a_i) dz + dH`` on the sphere."""

    poles: Tuple[Tuple[complex, complex], ...]
    exact_part: ComplexPolynomial
    eta: RationalFunction

    def __post_init__(self):
        dh = self.exact_part.derivative().to_float()
        object.__setattr__(self, "_dh", dh)
        locs = np.array([a for a, _ in self.poles], dtype=complex)
        res = np.array([l for _, l in self.poles], dtype=complex)
        object.__setattr__(self, "_locs", locs)
        object.__setattr__(self, "_res", res)

    # -- evaluation --------------------------------------------------------

    def eta_at(self, z: complex) -> complex:
        z = complex(z)
        acc = 0j
        for (a, lam) in self.poles:
            acc += lam / (z - a)
        dh = self._dh
        if not dh.is_zero:
            acc += dh(z)
        return acc

    def eta_many(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        acc = np.zeros_like(zs)
        for (a, lam) in self.poles:
            acc += lam / (zs - a)
        if not self._dh.is_zero:
            acc += self._dh.eval_many(zs)
        return acc

    def potential(self, z: complex) -> float:
        """Real potential f with df = omega + conj(omega), constant fixed to 0."""
        z = complex(z)
        self._guard_pole(z)
        f = 0.0
        for (a, lam) in self.poles:
            d = z - a
            f += lam.real * math.log(d.real * d.real + d.imag * d.imag)
        if not self.exact_part.is_zero:
            f += 2.0 * self.exact_part(z).real
        return f

    def potential_many(self, zs: np.ndarray) -> np.ndarray:
        zs = np.asarray(zs, dtype=complex)
        f = np.zeros(zs.shape, dtype=float)
        with np.errstate(divide="ignore"):
            for (a, lam) in self.poles:
                d = zs - a
                f += lam.real * np.log(d.real * d.real + d.imag * d.imag)
        if not self.exact_part.is_zero:
            f += 2.0 * self.exact_part.eval_many(zs).real
        return f

    # -- structure ---------------------------------------------------------

    @property
    def pole_locations(self) -> np.ndarray:
        return self._locs

    @property
    def residues_real(self) -> bool:
        return all(
            abs(lam.imag) <= _RESIDUE_IMAG_TOL * max(1.0, abs(lam))
            for _, lam in self.poles
        )

    def min_pole_distance(self, z: complex) -> float:
        if not self.poles:
            return math.inf
        return float(np.min(np.abs(self._locs - complex(z))))

    def _guard_pole(self, z: complex):
        for (a, _) in self.poles:
            if abs(z - a) <= 1e-13 * max(1.0, abs(a), abs(z)):
                raise EvalAtPole(f"evaluation at pole {a!r}")

    def residue_at_infinity(self) -> complex:
        return complex(residue_at_infinity(self.eta))

    def infinity_pole_order(self) -> int:
        """Order of the pole of the form at infinity (<= 0 means no pole)."""
        return self.eta.num.degree - self.eta.den.degree + 2

    def divisor(self) -> Divisor:
        return one_form_divisor(self.eta)

    def negated(self) -> "MeromorphicOneForm":
        return build_third_kind(
            [(a, -lam) for a, lam in self.poles],
            ComplexPolynomial([-complex(c) for c in self.exact_part.coeffs]),
        )

    def __repr__(self) -> str:
        return f"MeromorphicOneForm(poles={self.poles!r}, H={self.exact_part!r})"


def build_third_kind(
    poles: Iterable[Tuple[complex, complex]],
    exact_part: ComplexPolynomial | Sequence | None = None,
) -> MeromorphicOneForm:
    """Build a validated form from pole/residue data and a polynomial part.

    Raises :class:`DuplicatePole` if two locations collide and
    :class:`ZeroResidue` if any residue is zero.  The cached rational
    coefficient is self-checked against the pole sum at sample points.
    """
    pole_list = [(complex(a), complex(lam)) for a, lam in poles]
    for i, (a, _) in enumerate(pole_list):
        for b, _ in pole_list[i + 1:]:
            if abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b)):
                raise DuplicatePole(f"poles at {a!r} and {b!r} coincide")
    for a, lam in pole_list:
        if lam == 0:
            raise ZeroResidue(f"pole at {a!r} has zero residue")
    if exact_part is None:
        h = ComplexPolynomial.zero()
    elif isinstance(exact_part, ComplexPolynomial):
        h = exact_part.to_float()
    else:
        h = ComplexPolynomial([complex(c) for c in exact_part])
    dh = h.derivative()
    if not pole_list and dh.is_zero:
        raise ValueError("the form is identically zero")

    locs = [a for a, _ in pole_list]
    den = ComplexPolynomial.from_roots(locs)
    num = ComplexPolynomial.zero()
    for i, (a, lam) in enumerate(pole_list):
        others = locs[:i] + locs[i + 1:]
        num = num + ComplexPolynomial.from_roots(others, leading=lam)
    if not dh.is_zero:
        num = num + dh * den
    # residue sums that telescope leave ~eps junk in the top coefficients;
    # strip it so the order at infinity comes out right
    if not num.is_zero:
        scale = max(abs(c) for c in num.coeffs)
        coeffs = list(num.coeffs)
        while coeffs and abs(coeffs[-1]) <= 1e-12 * scale:
            coeffs.pop()
        num = ComplexPolynomial(coeffs)
    # poles are distinct with nonzero residues, so num and den share no root
    eta = RationalFunction(num, den, reduce=False)

    form = MeromorphicOneForm(tuple(pole_list), h, eta)
    for k in range(5):
        z = complex(1.37 + 0.61 * k, 0.83 - 0.29 * k)
        if form.min_pole_distance(z) < 1e-3:
            continue
        direct = sum(lam / (z - a) for a, lam in pole_list) + (
            dh(z) if not dh.is_zero else 0j
        )
        if abs(eta(z) - direct) > 1e-10 * (1.0 + abs(direct)):
            raise AssertionError("cached rational coefficient is inconsistent")
    return form


@dataclass(frozen=True)
class ExactnessReport:
    """Validation flags for the construction hypotheses."""

    is_third_kind: bool
    residues_all_real_nonzero: bool
    real_part_exact: bool
    diagnostics: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.is_third_kind and self.residues_all_real_nonzero


def check_hypotheses(form: MeromorphicOneForm) -> ExactnessReport:
    """Check that the form is third-kind with real nonzero residues.

    On the sphere the loop integrals around poles generate every cycle, so
    the real part of the form is exact exactly when every residue (the one
    at infinity included) is real.
    """
    notes: List[str] = []
    real_ok = True
    nonzero_ok = True
    for a, lam in form.poles:
        if abs(lam.imag) > _RESIDUE_IMAG_TOL * max(1.0, abs(lam)):
            real_ok = False
            notes.append(f"pole at {a!r}: residue {lam!r} is not real")
        if lam == 0:
            nonzero_ok = False
            notes.append(f"pole at {a!r}: residue vanishes")
    inf_order = form.infinity_pole_order()
    third_kind = inf_order <= 1
    if not third_kind:
        notes.append(f"pole of order {inf_order} at INFINITY (not simple)")
    if inf_order == 1:
        res_inf = form.residue_at_infinity()
        if abs(res_inf.imag) > _RESIDUE_IMAG_TOL * max(1.0, abs(res_inf)):
            real_ok = False
            notes.append(f"residue {res_inf!r} at INFINITY is not real")
    return ExactnessReport(
        is_third_kind=third_kind,
        residues_all_real_nonzero=real_ok and nonzero_ok,
        real_part_exact=real_ok,
        diagnostics=tuple(notes),
    )


def potential_f(form: MeromorphicOneForm, z: complex) -> float:
    """The real potential at ``z``; requires the hypotheses to hold."""
    if not form.residues_real:
        raise HypothesesFailed("potential needs real residues")
    return form.potential(z)


def divisor_of_form(form: MeromorphicOneForm) -> Divisor:
    """Full zero/pole divisor of the form on the sphere, infinity included."""
    return form.divisor()


# ---------------------------------------------------------------------------
# JSON form schema:
#   {"poles": [{"a": [re, im], "lambda": [re, im]}, ...],
#    "exact_part": [[re, im], ...]}       (coefficients ascending)
# ---------------------------------------------------------------------------


def form_to_json(form: MeromorphicOneForm) -> dict:
    return {
        "poles": [
            {"a": [a.real, a.imag], "lambda": [lam.real, lam.imag]}
            for a, lam in form.poles
        ],
        "exact_part": [
            [complex(c).real, complex(c).imag] for c in form.exact_part.coeffs
        ],
    }


def form_from_json(data: dict | str) -> MeromorphicOneForm:
    if isinstance(data, str):
        data = json.loads(data)
    if not isinstance(data, dict):
        raise ValueError("form document must be a JSON object")
    poles = []
    for entry in data.get("poles", []):
        a = entry["a"]
        lam = entry["lambda"]
        poles.append((complex(a[0], a[1]), complex(lam[0], lam[1])))
    coeffs = [complex(c[0], c[1]) for c in data.get("exact_part", [])]
    return build_third_kind(poles, ComplexPolynomial(coeffs))
