"""Closed-form bound-state eigenfunctions of the double delta well.

For decay parameter ``xi`` and half-separation ``L`` the half-axis solution is
``cosh(xi x / L)`` (even) or ``sinh(xi x / L)`` (odd) between the origin and the
delta, and ``exp(-xi (x/L - 1))`` outside it; the full-axis function is the
even or odd extension. Internally every function is parametrized by its value
``phi_L`` at ``x = L`` and evaluated in ``exp(-xi)``-scaled form, so large
``xi`` (weak-coupling limit ``a -> 0``) does not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .model import BoundState, Parity
from .quadrature import DEFAULT_QUAD, QuadratureSpec, integrate
from .quantize import residual

ON_SHELL_TOL = 1e-10


def _sinh_minus_x_scaled(u: float) -> float:
    """``(sinh(u) - u) * exp(-u)`` for ``u >= 0``, free of cancellation and overflow."""
    if u < 0.1:
        u2 = u * u
        series = u * u2 / 6.0 * (1.0 + u2 / 20.0 * (1.0 + u2 / 42.0 * (1.0 + u2 / 72.0)))
        return series * math.exp(-u)
    return -0.5 * math.expm1(-2.0 * u) - u * math.exp(-u)


@dataclass(frozen=True)
class MatchReport:
    """Residuals of the matching and consistency relations.

    ``c1_err`` (value at the origin) only applies to even states and
    ``c2_err`` (slope at the origin) only to odd ones; the other is 0.
    ``edge_err`` checks ``phi(L)`` against the interior formula.
    """

    continuity_err: float
    jump_err: float
    c1_err: float
    c2_err: float
    edge_err: float

    def max(self) -> float:
        return max(self.continuity_err, self.jump_err, self.c1_err, self.c2_err, self.edge_err)


@dataclass(frozen=True)
class PiecewiseWaveFn:
    state: BoundState
    phi_L: float
    halfsep: float = 1.0

    @property
    def parity(self) -> Parity:
        return self.state.parity

    @property
    def xi(self) -> float:
        return self.state.xi

    @property
    def a(self) -> float:
        return self.state.a

    @property
    def amp(self) -> float:
        """``phi(0)`` for even states, ``phi'(0)`` for odd ones."""
        xi, L = self.xi, self.halfsep
        e2 = math.exp(-2.0 * xi)
        if self.parity is Parity.EVEN:
            # phi_L / cosh(xi)
            return self.phi_L * 2.0 * math.exp(-xi) / (1.0 + e2)
        # phi_L * xi / (L sinh(xi))
        return self.phi_L * xi / L * 2.0 * math.exp(-xi) / (-math.expm1(-2.0 * xi))

    @property
    def phi0(self) -> float:
        return self.amp if self.parity is Parity.EVEN else 0.0

    @property
    def dphi0(self) -> float:
        return 0.0 if self.parity is Parity.EVEN else self.amp

    def scaled(self, factor: float) -> "PiecewiseWaveFn":
        return replace(self, phi_L=self.phi_L * factor)

    # -- evaluation ---------------------------------------------------------

    def _interior(self, x):
        xi, L = self.xi, self.halfsep
        up = np.exp(xi * (x / L - 1.0))
        down = np.exp(-xi * (x / L + 1.0))
        if self.parity is Parity.EVEN:
            return self.phi_L * (up + down) / (1.0 + math.exp(-2.0 * xi))
        # up - down written without cancellation (xi -> 0 near threshold)
        ax = np.abs(x)
        diff = np.exp(xi * (ax / L - 1.0)) * -np.expm1(-2.0 * xi * ax / L)
        return self.phi_L * np.sign(x) * diff / (-math.expm1(-2.0 * xi))

    def _interior_deriv(self, x):
        xi, L = self.xi, self.halfsep
        up = np.exp(xi * (x / L - 1.0))
        down = np.exp(-xi * (x / L + 1.0))
        if self.parity is Parity.EVEN:
            return self.phi_L * xi / L * (up - down) / (1.0 + math.exp(-2.0 * xi))
        return self.phi_L * xi / L * (up + down) / (-math.expm1(-2.0 * xi))

    def _tail(self, x):
        # value for |x| >= L, including the parity sign
        ax = np.abs(x)
        sgn = np.where(x < 0, self.parity.sign, 1)
        return sgn * self.phi_L * np.exp(-self.xi * (ax / self.halfsep - 1.0))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        # |x| = L goes to the tail branch, which returns phi_L bit for bit
        inside = np.abs(x) < self.halfsep
        outside = np.where(inside, self.halfsep, x)
        out = np.where(inside, self._interior(np.clip(x, -self.halfsep, self.halfsep)),
                       self._tail(outside))
        return out if out.ndim else float(out)

    def derivative(self, x):
        """Analytic ``phi'(x)``; at ``|x| = L`` this is the interior (one-sided) value."""
        x = np.asarray(x, dtype=float)
        inside = np.abs(x) <= self.halfsep
        outside = np.where(inside, self.halfsep, x)
        tail = -self.xi / self.halfsep * np.sign(outside) * self._tail(outside)
        out = np.where(inside, self._interior_deriv(np.clip(x, -self.halfsep, self.halfsep)), tail)
        return out if out.ndim else float(out)

    def second_derivative(self, x):
        """``phi''(x)`` away from the deltas, where it equals ``(xi/L)**2 phi``."""
        return (self.xi / self.halfsep) ** 2 * np.asarray(self(x))

    def one_sided_derivatives(self) -> tuple[float, float]:
        """``(phi'(L-), phi'(L+))`` from the region formulas."""
        left = float(self._interior_deriv(np.float64(self.halfsep)))
        right = -self.xi / self.halfsep * self.phi_L
        return left, right

    # -- norms --------------------------------------------------------------

    def half_norm_sq(self) -> float:
        """Closed-form ``integral_0^inf |phi|^2 dx``."""
        xi, L = self.xi, self.halfsep
        e2 = math.exp(-2.0 * xi)
        tail = L / (2.0 * xi)
        if self.parity is Parity.EVEN:
            # L (sinh cosh + xi) / (2 xi cosh^2)
            inner = L / (2.0 * xi) * ((1.0 - e2) / (1.0 + e2) + 4.0 * xi * e2 / (1.0 + e2) ** 2)
        else:
            # L (sinh cosh - xi) / (2 xi sinh^2), with sinh cosh - xi = (sinh 2xi - 2xi)/2
            s = -math.expm1(-2.0 * xi) / 2.0
            inner = L / (2.0 * xi) * 0.5 * _sinh_minus_x_scaled(2.0 * xi) / (s * s)
        return self.phi_L**2 * (inner + tail)

    def norm_sq(self) -> float:
        return 2.0 * self.half_norm_sq()

    def x_max(self, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
        """Abscissa past which ``|phi|`` is below ``exp(-tail_decay) |phi(L)|``."""
        return self.halfsep * (1.0 + spec.tail_decay / self.xi)


def build_wavefn(state: BoundState, halfsep: float = 1.0, validate: bool = True) -> PiecewiseWaveFn:
    """Unit-norm eigenfunction for ``state`` with ``amp > 0``.

    Raises ``ValueError`` if ``validate`` and ``xi`` misses its quantization
    condition by more than ``1e-10``; off-shell functions cannot satisfy the
    matching conditions.
    """
    if halfsep <= 0:
        raise ValueError("halfsep must be positive")
    if validate:
        r = residual(state.parity, state.xi, state.a)
        if not abs(r) <= ON_SHELL_TOL:
            raise ValueError(
                f"state is off-shell: quantization residual {r:.3e} exceeds {ON_SHELL_TOL:g}"
            )
    unit = PiecewiseWaveFn(state, 1.0, halfsep)
    return unit.scaled(1.0 / math.sqrt(unit.norm_sq()))


def match_report(w: PiecewiseWaveFn) -> MatchReport:
    xi, L, a = w.xi, w.halfsep, w.a
    phi_L = w.phi_L
    inner_L = float(w._interior(np.float64(L)))
    continuity = abs(float(w._tail(np.float64(L))) - inner_L)
    left, right = w.one_sided_derivatives()
    jump = abs((right - left) + phi_L / (a * L))
    c1 = c2 = 0.0
    if w.parity is Parity.EVEN:
        c1 = abs(w.phi0 - phi_L * math.exp(-xi) / (a * xi))
        edge = abs(phi_L - w.phi0 * math.cosh(xi)) if xi < 700 else abs(phi_L - inner_L)
    else:
        c2 = abs(w.dphi0 - phi_L * math.exp(-xi) / (a * L))
        edge = abs(phi_L - L / xi * w.dphi0 * math.sinh(xi)) if xi < 700 else abs(phi_L - inner_L)
    return MatchReport(continuity, jump, c1, c2, edge)


def _axis_points(w: PiecewiseWaveFn, spec: QuadratureSpec) -> tuple[float, list[float]]:
    X = w.x_max(spec)
    return X, [-w.halfsep, 0.0, w.halfsep]


def norm_check(w: PiecewiseWaveFn, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``|integral |phi|^2 dx - 1|`` over the full axis by quadrature."""
    X, pts = _axis_points(w, spec)
    value, _ = integrate(lambda x: w(x) ** 2, -X, X, spec, pts)
    return abs(value - 1.0)


def overlap(w1: PiecewiseWaveFn, w2: PiecewiseWaveFn, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Full-axis ``integral phi1 phi2 dx`` by quadrature."""
    X = max(w1.x_max(spec), w2.x_max(spec))
    pts = sorted({-w1.halfsep, w1.halfsep, -w2.halfsep, w2.halfsep, 0.0})
    value, _ = integrate(lambda x: w1(x) * w2(x), -X, X, spec, pts)
    return value
