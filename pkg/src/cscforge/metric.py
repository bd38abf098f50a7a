"""Metric densities for the three curvature signs, and their verification.

The density of ``g = rho |dz|^2`` is

    rho = 4 Phi (4 - Phi) / (4 + (K - 1) Phi)^2 * |eta|^2,

evaluated in log space throughout: with ``x`` the offset potential and
``sp`` the softplus, ``log Phi = log 4 - sp(-x)`` and
``log(4 - Phi) = log 4 - sp(x)``, which stays accurate however hard the
field saturates near poles.  Gauss curvature is verified with the five-point
Laplacian of ``log rho``:  ``K_est = -lap(log rho) / (2 rho)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from .algebra import INFINITY, Point, _clustered_roots, is_infinity
from .errors import DegenerateHyperbolicPoint, GridTouchesSingularity
from .forms import MeromorphicOneForm
from .phifield import PhiField, solve_phi_closed

__all__ = [
    "GridSpec",
    "MetricField",
    "CurvatureReport",
    "gauss_curvature_fd",
    "negation_invariance_check",
    "suggest_grid",
    "write_density_grid",
    "sample_points_avoiding",
]

_LOG4 = math.log(4.0)


def _softplus(x: np.ndarray) -> np.ndarray:
    return np.logaddexp(0.0, x)


@dataclass(frozen=True)
class GridSpec:
    """Square n-by-n evaluation grid: center, half-width and point count."""

    center: complex
    half_width: float
    n: int

    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        xs = self.center.real + np.linspace(-self.half_width, self.half_width, self.n)
        ys = self.center.imag + np.linspace(-self.half_width, self.half_width, self.n)
        return xs, ys

    def points(self) -> np.ndarray:
        """Grid points flattened row-major (y outer, x inner)."""
        xs, ys = self.axes()
        X, Y = np.meshgrid(xs, ys)
        return (X + 1j * Y).ravel()

    def describe(self) -> str:
        return (
            f"center=({self.center.real:g},{self.center.imag:g}) "
            f"half_width={self.half_width:g} n={self.n}"
        )


@dataclass(frozen=True, eq=False)
class MetricField:
    """Density evaluator of the constant-curvature metric for one K."""

    phi: PhiField
    K: int

    def __post_init__(self):
        if self.K not in (-1, 0, 1):
            raise ValueError("curvature sign must be one of -1, 0, 1")
        eta = self.phi.form.eta
        zeros = tuple(z for z, _ in _clustered_roots(eta.num.to_float()))
        object.__setattr__(self, "_zeros", zeros)

    @property
    def form(self) -> MeromorphicOneForm:
        return self.phi.form

    @property
    def zeros(self) -> Tuple[complex, ...]:
        return self._zeros

    # -- evaluation --------------------------------------------------------

    def _chart_z(self, pts: np.ndarray, chart: str) -> Tuple[np.ndarray, np.ndarray]:
        pts = np.asarray(pts, dtype=complex)
        if chart == "z":
            return pts, np.zeros(pts.shape, dtype=float)
        if chart == "w":
            with np.errstate(divide="ignore"):
                extra = -4.0 * np.log(np.abs(pts))
            return 1.0 / pts, extra
        raise ValueError("chart must be 'z' or 'w'")

    def phi_many(self, pts: np.ndarray, chart: str = "z") -> np.ndarray:
        zs, _ = self._chart_z(pts, chart)
        return self.phi.value_many(zs)

    def log_density_many(self, pts: np.ndarray, chart: str = "z") -> np.ndarray:
        """log(rho) at an array of points, in the z chart or the w = 1/z chart
        (the w chart carries the conformal factor |dz/dw|^2 = 1/|w|^4)."""
        zs, extra = self._chart_z(pts, chart)
        x = self.phi.offset_potential_many(zs)
        with np.errstate(divide="ignore"):
            log_abs_eta = np.log(np.abs(self.form.eta_many(zs)))
        log_numer = _LOG4 + (_LOG4 - _softplus(-x)) + (_LOG4 - _softplus(x))
        if self.K == 1:
            log_denom2 = 2.0 * _LOG4
        elif self.K == 0:
            log_denom2 = 2.0 * (_LOG4 - _softplus(x))
        else:
            with np.errstate(divide="ignore"):
                log_denom2 = 2.0 * (_LOG4 + np.log(np.abs(np.tanh(0.5 * x))))
        return log_numer - log_denom2 + 2.0 * log_abs_eta + extra

    def density(self, z: complex) -> float:
        """rho at a single point; 0 exactly at zeros of the form.

        Raises :class:`EvalAtPole` on top of a pole and, for K = -1,
        :class:`DegenerateHyperbolicPoint` where the field value is 2.
        """
        z = complex(z)
        self.form._guard_pole(z)
        if self.K == -1:
            if abs(self.phi.value(z) - 2.0) <= 1e-9:
                raise DegenerateHyperbolicPoint(
                    f"field value is 2 at {z!r}; the K=-1 density degenerates"
                )
        val = self.log_density_many(np.array([z]))[0]
        return float(np.exp(val))

    def density_many(self, pts: np.ndarray, chart: str = "z") -> np.ndarray:
        return np.exp(self.log_density_many(pts, chart))

    # -- singular-point bookkeeping -----------------------------------------

    def exclusion_points(self) -> Tuple[complex, ...]:
        """All finite zeros and poles of the form."""
        return self._zeros + tuple(a for a, _ in self.form.poles)

    def admissible_mask(
        self,
        pts: np.ndarray,
        exclusion_radius: float = 0.05,
        phi_gap: float = 0.05,
    ) -> np.ndarray:
        pts = np.asarray(pts, dtype=complex)
        mask = np.ones(pts.shape, dtype=bool)
        for p in self.exclusion_points():
            mask &= np.abs(pts - p) > exclusion_radius
        if self.K == -1 and phi_gap > 0:
            mask &= np.abs(self.phi.value_many(pts) - 2.0) >= phi_gap
        return mask

    def area_singular_exponents(self) -> List[Tuple[Point, float]]:
        """Genuinely conical points with the local exponent a (density like
        r^(2(a-1))): zeros give a = order + 1, poles a = |residue|; points
        with |residue| = 1 are smooth and omitted."""
        out: List[Tuple[Point, float]] = []
        res_by_loc = {a: lam for a, lam in self.form.poles}
        for p, w in self.form.divisor():
            if is_infinity(p):
                if w > 0:
                    out.append((INFINITY, w + 1.0))
                elif w == -1:
                    lam = abs(self.form.residue_at_infinity().real)
                    if abs(lam - 1.0) > 1e-9:
                        out.append((INFINITY, lam))
                continue
            if w > 0:
                out.append((p, w + 1.0))
            else:
                lam = None
                for a, l in res_by_loc.items():
                    if abs(a - p) <= 1e-9 * max(1.0, abs(a)):
                        lam = abs(l.real)
                        break
                if lam is None:
                    lam = 1.0
                if abs(lam - 1.0) > 1e-9:
                    out.append((p, lam))
        return out


@dataclass(frozen=True)
class CurvatureReport:
    """Residuals of the finite-difference curvature against the target K."""

    description: str
    h: float
    exclusion_radius: float
    expected_curvature: float
    points: np.ndarray
    estimates: np.ndarray
    n_total: int
    n_excluded: int

    @property
    def residuals(self) -> np.ndarray:
        return self.estimates - self.expected_curvature

    @property
    def max_abs_residual(self) -> float:
        return float(np.max(np.abs(self.residuals)))


def gauss_curvature_fd(
    field,
    grid,
    h: float = 1e-3,
    exclusion_radius: float = 0.05,
    phi_gap: float = 0.05,
) -> CurvatureReport:
    """Estimate the Gauss curvature on a grid by finite differences.

    ``grid`` is a :class:`GridSpec` or any array of complex points.  Points
    within ``exclusion_radius`` of a zero or pole (or, for K = -1, where the
    field is within ``phi_gap`` of 2) are excluded; the report covers the
    admissible points only.  Raises :class:`GridTouchesSingularity` when no
    admissible point remains.
    """
    if hasattr(grid, "points"):
        pts = grid.points()
        desc = grid.describe()
    else:
        pts = np.asarray(grid, dtype=complex).ravel()
        desc = f"{pts.size} explicit points"
    mask = field.admissible_mask(pts, exclusion_radius, phi_gap)
    admissible = pts[mask]
    if admissible.size == 0:
        raise GridTouchesSingularity("no admissible grid points remain")
    center = field.log_density_many(admissible)
    lap = -4.0 * center
    for off in (h, -h, 1j * h, -1j * h):
        lap += field.log_density_many(admissible + off)
    lap /= h * h
    rho = np.exp(center)
    k_est = -lap / (2.0 * rho)
    return CurvatureReport(
        description=desc,
        h=h,
        exclusion_radius=exclusion_radius,
        expected_curvature=float(field.K),
        points=admissible,
        estimates=k_est,
        n_total=int(pts.size),
        n_excluded=int(pts.size - admissible.size),
    )


def sample_points_avoiding(
    excluded: Sequence[complex],
    n: int,
    seed: int,
    box: float = 2.2,
    min_distance: float = 0.1,
) -> np.ndarray:
    """Deterministic sample of points in a centered box keeping a minimum
    distance from the excluded locations."""
    rng = np.random.default_rng(seed)
    out: List[complex] = []
    guard = 0
    while len(out) < n:
        guard += 1
        if guard > 200 * n:
            raise RuntimeError("sampling starved; exclusion set too dense")
        z = complex(rng.uniform(-box, box), rng.uniform(-box, box))
        if all(abs(z - p) >= min_distance for p in excluded):
            out.append(z)
    return np.array(out, dtype=complex)


def negation_invariance_check(
    form: MeromorphicOneForm,
    p0: complex | None = None,
    phi0: float = 1.5,
    n_points: int = 100,
    seed: int = 20201,
) -> float:
    """Largest pointwise K = 1 density discrepancy between the field of
    ``(form, phi0)`` and that of ``(-form, 4 - phi0)`` with the same base
    point.  The two describe the same metric, so this should vanish."""
    field_a = MetricField(solve_phi_closed(form, p0, phi0), K=1)
    neg = form.negated()
    field_b = MetricField(solve_phi_closed(neg, field_a.phi.p0, 4.0 - phi0), K=1)
    pts = sample_points_avoiding(
        [a for a, _ in form.poles] + list(field_a.zeros), n_points, seed
    )
    rho_a = field_a.density_many(pts)
    rho_b = field_b.density_many(pts)
    return float(np.max(np.abs(rho_a - rho_b)))


def suggest_grid(
    field,
    half_width: float = 0.1,
    n: int = 21,
    margin: float = 0.3,
    phi_margin: float = 0.25,
) -> GridSpec:
    """Pick a grid patch well clear of singular points (and of the K = -1
    degeneracy locus), preferring patches where the density is moderate."""
    exclusions = field.exclusion_points()
    candidates: List[complex] = []
    for xr in np.arange(-2.0, 2.01, 0.25):
        for yi in np.arange(-2.0, 2.01, 0.25):
            candidates.append(complex(xr, yi))
    for p in exclusions:
        for k in range(12):
            candidates.append(p + 0.55 * np.exp(2j * math.pi * k / 12))
    reach = half_width * math.sqrt(2.0)
    best = None
    best_score = -math.inf
    for c in candidates:
        dist = min((abs(c - p) for p in exclusions), default=math.inf) - reach
        if dist < margin:
            continue
        probe = c + (np.linspace(-half_width, half_width, 5)[:, None]
                     + 1j * np.linspace(-half_width, half_width, 5)[None, :]).ravel()
        if hasattr(field, "phi") and getattr(field, "K", 1) == -1:
            gap = float(np.min(np.abs(field.phi.value_many(probe) - 2.0)))
            if gap < phi_margin:
                continue
        logrho = field.log_density_many(probe)
        level = float(np.median(np.abs(logrho)))
        score = min(dist, 1.0) - 0.05 * level
        if score > best_score + 1e-12:
            best_score = score
            best = c
    if best is None:
        raise GridTouchesSingularity("no admissible grid patch found")
    return GridSpec(center=best, half_width=half_width, n=n)


def write_density_grid(field, grid: GridSpec, h: float, stream) -> float:
    """Write ``x,y,rho,phi,K_est`` rows (17 significant digits) and return the
    max curvature residual over the admissible points."""
    pts = grid.points()
    logrho = field.log_density_many(pts)
    rho = np.exp(logrho)
    phi = field.phi_many(pts) if hasattr(field, "phi_many") else np.full(pts.shape, np.nan)
    lap = -4.0 * logrho
    for off in (h, -h, 1j * h, -1j * h):
        lap += field.log_density_many(pts + off)
    lap /= h * h
    k_est = -lap / (2.0 * rho)
    stream.write("x,y,rho,phi,K_est\n")
    for z, r, p, k in zip(pts, rho, phi, k_est):
        stream.write(
            f"{z.real:.17g},{z.imag:.17g},{r:.17g},{p:.17g},{k:.17g}\n"
        )
    mask = field.admissible_mask(pts)
    if not np.any(mask):
        return math.nan
    return float(np.max(np.abs(k_est[mask] - field.K)))
