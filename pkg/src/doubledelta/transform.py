"""Fourier sine and cosine transforms on the half line.

Conventions::

    F_S{f}(k) = sqrt(2/pi) * integral_0^inf f(x) sin(k x) dx
    F_C{f}(k) = sqrt(2/pi) * integral_0^inf f(x) cos(k x) dx

with the same kernels for the inverses. Odd eigenfunctions pair with the sine
transform and even ones with the cosine transform; for a bound state both
reduce to ``P * trig(k L) / (k**2 + (xi/L)**2)`` with
``P = sqrt(2/pi) * phi(L) / (a L)``.

Inverting that transform needs the four tabulated integrals

    A1: integral_0^inf sin(kc) sin(kx) / (k^2 + d^2) dk
    A2: integral_0^inf cos(kc) cos(kx) / (k^2 + d^2) dk
    A3: PV integral_0^inf sin(kc) sin(kx) / (k^2 - d^2) dk
    A4: PV integral_0^inf cos(kc) cos(kx) / (k^2 - d^2) dk

which are provided here both in closed form and by quadrature.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial

from .eigen import PiecewiseWaveFn, build_wavefn
from .model import Coupling, Parity
from .quadrature import (
    DEFAULT_QUAD,
    QuadratureError,
    QuadratureSpec,
    fourier_integral,
    integrate,
)
from .quantize import solve_even

SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)


class TransformKind(enum.Enum):
    SINE = "sine"
    COSINE = "cosine"

    @property
    def trig(self):
        return np.sin if self is TransformKind.SINE else np.cos

    @classmethod
    def for_parity(cls, parity: Parity) -> "TransformKind":
        return cls.SINE if parity is Parity.ODD else cls.COSINE


# -- analytic transforms of the eigenfunctions -------------------------------


@dataclass(frozen=True)
class AnalyticTransform:
    """``Phi(k) = prefactor * trig(k L) / (k**2 + (xi/L)**2)``."""

    kind: TransformKind
    prefactor: float
    xi: float
    halfsep: float = 1.0

    @property
    def decay(self) -> float:
        """``xi / L``, i.e. ``|kappa|`` for ``kappa = i xi / L``."""
        return self.xi / self.halfsep

    def __call__(self, k):
        k = np.asarray(k, dtype=float)
        out = self.prefactor * self.kind.trig(k * self.halfsep) / (k * k + self.decay**2)
        return out if out.ndim else float(out)

    def scaled(self, factor: float) -> "AnalyticTransform":
        return replace(self, prefactor=self.prefactor * factor)


def analytic_transform(w: PiecewiseWaveFn) -> AnalyticTransform:
    pref = SQRT_2_OVER_PI * w.phi_L / (w.a * w.halfsep)
    return AnalyticTransform(TransformKind.for_parity(w.parity), pref, w.xi, w.halfsep)


# -- numerical forward transforms ------------------------------------------


def _half_period_points(k: float, lo: float, hi: float, limit: int = 4000) -> list[float]:
    if k <= 0:
        return []
    step = math.pi / k
    n = int((hi - lo) / step)
    if n < 2 or n > limit:
        return []
    return list(lo + step * np.arange(1, n + 1))


def _transform(
    f: Callable, k: float, kind: TransformKind, spec: QuadratureSpec,
    points: Sequence[float], x_max: Optional[float],
) -> float:
    k = float(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    if kind is TransformKind.SINE and k == 0.0:
        return 0.0
    trig = kind.trig
    if x_max is not None:
        pts = sorted(set(points) | set(_half_period_points(k, 0.0, x_max)))
        val, _ = integrate(lambda x: f(x) * trig(k * x), 0.0, x_max, spec, pts)
    else:
        head_end = max(points) if len(points) else 0.0
        val, _ = fourier_integral(
            f, k, "sin" if kind is TransformKind.SINE else "cos", 0.0, spec,
            head_end=head_end, points=points,
        )
    return SQRT_2_OVER_PI * val


def sine_transform(
    f: Callable, k: float, spec: QuadratureSpec = DEFAULT_QUAD,
    points: Sequence[float] = (), x_max: Optional[float] = None,
) -> float:
    """Numerical ``F_S{f}(k)``.

    ``f`` must be vectorized and absolutely integrable on ``[0, inf)``,
    decaying exponentially or faster. ``points`` lists kinks of ``f``. When
    ``x_max`` is given the integral is truncated there (the caller guarantees
    the envelope is negligible beyond it); otherwise the oscillatory tail past
    the last kink is summed panel by panel and extrapolated.
    """
    return _transform(f, k, TransformKind.SINE, spec, points, x_max)


def cosine_transform(
    f: Callable, k: float, spec: QuadratureSpec = DEFAULT_QUAD,
    points: Sequence[float] = (), x_max: Optional[float] = None,
) -> float:
    """Numerical ``F_C{f}(k)``; see :func:`sine_transform`."""
    return _transform(f, k, TransformKind.COSINE, spec, points, x_max)


def numeric_transform(w: PiecewiseWaveFn, k, spec: QuadratureSpec = DEFAULT_QUAD) -> np.ndarray:
    """Parity-appropriate transform of an eigenfunction on a grid of ``k``."""
    kind = TransformKind.for_parity(w.parity)
    ks = np.atleast_1d(np.asarray(k, dtype=float))
    X = w.x_max(spec)
    out = np.array([_transform(w, kk, kind, spec, [w.halfsep], X) for kk in ks])
    return out if np.ndim(k) else float(out[0])


# -- tabulated integrals ------------------------------------------------------


class Tabulated(enum.Enum):
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"

    @property
    def kind(self) -> TransformKind:
        return TransformKind.SINE if self in (Tabulated.A1, Tabulated.A3) else TransformKind.COSINE

    @property
    def principal_value(self) -> bool:
        return self in (Tabulated.A3, Tabulated.A4)


@dataclass(frozen=True)
class TabulatedCase:
    which: Tabulated
    c: float
    d: float
    x: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "which", Tabulated(self.which))
        if not (self.c > 0 and self.d > 0 and self.x > 0):
            raise ValueError("c, d and x must be positive")
        if self.x == self.c:
            raise ValueError("x = c is excluded (branch point of the closed forms)")


def closed_form(case: TabulatedCase) -> float:
    c, d, x = case.c, case.d, case.x
    lower = x < c
    pref = math.pi / (2.0 * d)
    w = case.which
    if w is Tabulated.A1:
        # sinh(dx) exp(-cd) written as a difference of decaying exponentials
        if lower:
            return pref * 0.5 * (math.exp(-d * (c - x)) - math.exp(-d * (c + x)))
        return pref * 0.5 * (math.exp(-d * (x - c)) - math.exp(-d * (x + c)))
    if w is Tabulated.A2:
        if lower:
            return pref * 0.5 * (math.exp(-d * (c - x)) + math.exp(-d * (c + x)))
        return pref * 0.5 * (math.exp(-d * (x - c)) + math.exp(-d * (x + c)))
    if w is Tabulated.A3:
        return pref * (math.cos(c * d) * math.sin(d * x) if lower else math.sin(c * d) * math.cos(d * x))
    return -pref * (math.sin(c * d) * math.cos(d * x) if lower else math.cos(c * d) * math.sin(d * x))


def _numerator(case_kind: TransformKind, c: float, x: float):
    trig = case_kind.trig
    return lambda k: trig(k * c) * trig(k * x)


def _components(kind: TransformKind, c: float, x: float):
    """``trig(kc) trig(kx)`` as ``sum(weight * cos(omega k))``."""
    s = -1.0 if kind is TransformKind.SINE else 1.0
    return [(0.5, abs(x - c)), (0.5 * s, x + c)]


def _fourier_sum(g, kind, c, x, a, spec, head_end=None, points=()):
    total, err = 0.0, 0.0
    for weight, omega in _components(kind, c, x):
        v, e = fourier_integral(g, omega, "cos", a, spec, head_end=head_end, points=points)
        total += weight * v
        err += abs(weight) * e
    return total, err


def _regular_numeric(case: TabulatedCase, spec: QuadratureSpec) -> float:
    d = case.d
    g = lambda k: 1.0 / (k * k + d * d)
    val, _ = _fourier_sum(g, case.which.kind, case.c, case.x, 0.0, spec)
    return val


def pv_subtract(case: TabulatedCase, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Principal value by singularity subtraction on ``[0, 2d]``.

    ``N(d) / (k^2 - d^2)`` is removed and integrated in closed form
    (``PV integral_0^{2d} dk / (k^2 - d^2) = -ln 3 / (2d)``); the rest is
    regular. The tail past ``2d`` is an ordinary oscillatory integral.
    """
    c, d, x = case.c, case.d, case.x
    num = _numerator(case.which.kind, c, x)
    nd = float(num(np.float64(d)))

    def regular(k):
        return (num(k) - nd) / ((k - d) * (k + d))

    head, _ = integrate(regular, 0.0, 2.0 * d, spec, [d])
    head += nd * (-math.log(3.0) / (2.0 * d))
    tail, _ = _fourier_sum(lambda k: 1.0 / ((k - d) * (k + d)), case.which.kind, c, x, 2.0 * d, spec)
    return head + tail


def _pv_fold_once(case: TabulatedCase, h: float, spec: QuadratureSpec) -> float:
    c, d, x = case.c, case.d, case.x
    num = _numerator(case.which.kind, c, x)
    inv = lambda k: num(k) / ((k - d) * (k + d))
    left, _ = integrate(inv, 0.0, d - h, spec)

    # the excised window folded onto [0, h]: odd part of the pole cancels
    def folded(t):
        return (num(d + t) / (2.0 * d + t) - num(d - t) / (2.0 * d - t)) / t

    window, _ = integrate(folded, 0.0, h, spec)
    right, _ = _fourier_sum(lambda k: 1.0 / ((k - d) * (k + d)), case.which.kind, c, x, d + h, spec)
    return left + window + right


def pv_fold(
    case: TabulatedCase, spec: QuadratureSpec = DEFAULT_QUAD, tol: float = 1e-9, max_halvings: int = 8
) -> float:
    """Principal value by symmetric excision of ``[d - h, d + h]``.

    The excised window is folded so the ``1/(k - d)`` pole cancels between
    ``d + t`` and ``d - t``; ``h`` is halved until the result stops moving.
    """
    h = 0.5 * case.d
    prev = _pv_fold_once(case, h, spec)
    for _ in range(max_halvings):
        h *= 0.5
        cur = _pv_fold_once(case, h, spec)
        if abs(cur - prev) <= max(tol, spec.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise QuadratureError("principal value did not settle under excision halving", cur, abs(cur - prev))


def numeric_integral(
    case: TabulatedCase, spec: QuadratureSpec = DEFAULT_QUAD, method: str = "subtract"
) -> float:
    if not case.which.principal_value:
        return _regular_numeric(case, spec)
    if method == "subtract":
        return pv_subtract(case, spec)
    if method == "fold":
        return pv_fold(case, spec)
    raise ValueError(f"unknown principal-value method {method!r}")


def tabulated_integral(
    case: TabulatedCase, spec: QuadratureSpec = DEFAULT_QUAD
) -> tuple[float, float]:
    """``(quadrature value, closed form)`` for one tabulated integral."""
    return numeric_integral(case, spec), closed_form(case)


# -- inversion and Parseval ---------------------------------------------------


def inverse_reconstruct(t: AnalyticTransform, x, spec: QuadratureSpec = DEFAULT_QUAD):
    """Numerical inverse transform of ``t`` at ``x > 0``.

    ``sqrt(2/pi) * integral_0^inf Phi(k) trig(k x) dk`` is an A1 (sine) or A2
    (cosine) integral with ``c = L`` and ``d = xi/L``; it is evaluated by
    quadrature, never through the closed form.
    """
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    d = t.decay
    g = lambda k: 1.0 / (k * k + d * d)
    out = np.empty_like(xs)
    for i, xv in enumerate(xs):
        if xv < 0:
            raise ValueError("inverse transform is defined for x >= 0")
        if xv == 0.0 and t.kind is TransformKind.SINE:
            out[i] = 0.0
            continue
        val, _ = _fourier_sum(g, t.kind, t.halfsep, xv, 0.0, spec)
        out[i] = SQRT_2_OVER_PI * t.prefactor * val
    return out if np.ndim(x) else float(out[0])


def transform_norm_sq(t: AnalyticTransform, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """``integral_0^inf |Phi(k)|^2 dk`` by quadrature.

    ``trig^2(kL) = (1 +/- cos(2kL)) / 2`` splits the integrand into a smooth
    part and one oscillatory part.
    """
    d = t.decay
    g = lambda k: 1.0 / (k * k + d * d) ** 2
    smooth, _ = fourier_integral(g, 0.0, "cos", 0.0, spec)
    osc, _ = fourier_integral(g, 2.0 * t.halfsep, "cos", 0.0, spec)
    s = -1.0 if t.kind is TransformKind.SINE else 1.0
    return t.prefactor**2 * 0.5 * (smooth + s * osc)


def parseval_residual(
    w: PiecewiseWaveFn, t: Optional[AnalyticTransform] = None, spec: QuadratureSpec = DEFAULT_QUAD
) -> float:
    """Relative mismatch between the x-space and k-space half-axis norms."""
    t = analytic_transform(w) if t is None else t
    x_side = w.half_norm_sq()
    return abs(x_side - transform_norm_sq(t, spec)) / x_side


# -- positive-energy diagnostic ------------------------------------------------


@dataclass(frozen=True)
class NonexistenceDiagnostic:
    """Windowed tail amplitudes of PV-reconstructed functions for real ``kappa``.

    ``sine_amplitudes``/``cosine_amplitudes`` are the largest ``|f|`` sampled in
    each window ``[X, 2X]`` for the odd and even trial reconstructions;
    ``bound_amplitudes`` are the same windows for the bound state of the same
    coupling (``None`` when the coupling is repulsive).
    """

    a: float
    kappa: float
    windows: tuple[tuple[float, float], ...]
    sine_amplitudes: tuple[float, ...]
    cosine_amplitudes: tuple[float, ...]
    bound_xi: Optional[float] = None
    bound_amplitudes: Optional[tuple[float, ...]] = None
    halfsep: float = 1.0

    @property
    def amplitudes(self) -> tuple[float, ...]:
        return tuple(max(s, c) for s, c in zip(self.sine_amplitudes, self.cosine_amplitudes))

    def non_decaying(self, floor: float = 0.5) -> bool:
        """True when no window falls below ``floor`` times the first one."""
        amps = self.amplitudes
        return amps[0] > 0 and min(amps) >= floor * amps[0]

    def bound_decay_ratios(self) -> tuple[float, ...]:
        if self.bound_amplitudes is None:
            return ()
        b = self.bound_amplitudes
        return tuple(b[i + 1] / b[i] for i in range(len(b) - 1))

    def bound_decay_bounds(self) -> tuple[float, ...]:
        """``exp(-xi * dX / L)`` for each window step ``dX``."""
        if self.bound_xi is None:
            return ()
        w = self.windows
        return tuple(
            math.exp(-self.bound_xi * (w[i + 1][0] - w[i][0]) / self.halfsep)
            for i in range(len(w) - 1)
        )


def pv_reconstruct(
    kind: TransformKind, a: float, kappa: float, x, halfsep: float = 1.0,
    spec: QuadratureSpec = DEFAULT_QUAD,
):
    """PV inverse of ``P trig(kL) / (k^2 - kappa^2)`` with ``phi(L) = 1``.

    This is what the transform equations would give for a positive energy
    ``kappa**2``; it is an A3 (sine) or A4 (cosine) integral.
    """
    pref = SQRT_2_OVER_PI / (a * halfsep)
    which = Tabulated.A3 if kind is TransformKind.SINE else Tabulated.A4
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.array([
        SQRT_2_OVER_PI * pref * pv_subtract(TabulatedCase(which, halfsep, kappa, xv), spec)
        for xv in xs
    ])
    return out if np.ndim(x) else float(out[0])


def positive_energy_nonexistence(
    a, kappa: float, halfsep: float = 1.0, n_doublings: int = 4,
    x_start: Optional[float] = None, samples_per_period: int = 8, min_samples: int = 16,
    spec: QuadratureSpec = DEFAULT_QUAD,
) -> NonexistenceDiagnostic:
    """Show that real ``kappa`` gives no normalizable inverse transform.

    The windows ``[X, 2X]`` start at ``max(2L, 2 pi / kappa)`` so every window
    holds at least one full oscillation, and double ``n_doublings`` times.
    For contrast the bound state of the same coupling is reconstructed from
    its A1/A2 closed forms on the same windows.
    """
    a = a.a if isinstance(a, Coupling) else float(a)
    if not kappa > 0:
        raise ValueError("kappa must be positive (real, E > 0)")
    L = halfsep
    X = x_start if x_start is not None else max(2.0 * L, 2.0 * math.pi / kappa)
    windows = []
    for _ in range(n_doublings + 1):
        windows.append((X, 2.0 * X))
        X *= 2.0
    sine_amp, cos_amp = [], []
    for lo, hi in windows:
        n = max(min_samples, int(math.ceil(samples_per_period * kappa * (hi - lo) / (2 * math.pi))) + 1)
        xs = np.linspace(lo, hi, n)
        sine_amp.append(float(np.max(np.abs(pv_reconstruct(TransformKind.SINE, a, kappa, xs, L, spec)))))
        cos_amp.append(float(np.max(np.abs(pv_reconstruct(TransformKind.COSINE, a, kappa, xs, L, spec)))))

    bound_xi = bound_amps = None
    if a > 0:
        bound_xi = solve_even(a)
        d = bound_xi / L
        pref = SQRT_2_OVER_PI / (a * L)
        bound_amps = []
        for lo, hi in windows:
            xs = np.linspace(lo, hi, min_samples)
            vals = [SQRT_2_OVER_PI * pref * closed_form(TabulatedCase(Tabulated.A2, L, d, xv)) for xv in xs]
            bound_amps.append(max(abs(v) for v in vals))
        bound_amps = tuple(bound_amps)
    return NonexistenceDiagnostic(
        a, kappa, tuple(windows), tuple(sine_amp), tuple(cos_amp), bound_xi, bound_amps, L
    )


# -- differentiation identities ---------------------------------------------


DIFF_CORPUS_VERSION = "1"


@dataclass(frozen=True)
class TestFunction:
    """``p(x) * exp(-s x^2 / 2)`` with analytic first and second derivatives."""

    __test__ = False  # not a pytest class

    name: str
    coeffs: tuple[float, ...]
    s: float = 1.0
    poly: Polynomial = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "poly", Polynomial(self.coeffs))

    def _gauss(self, x):
        return np.exp(-0.5 * self.s * x * x)

    def f(self, x):
        return self.poly(x) * self._gauss(x)

    def df(self, x):
        p = self.poly
        return (p.deriv()(x) - self.s * x * p(x)) * self._gauss(x)

    def d2f(self, x):
        p, s = self.poly, self.s
        return (p.deriv(2)(x) - 2 * s * x * p.deriv()(x) + (s * s * x * x - s) * p(x)) * self._gauss(x)

    @property
    def x_max(self) -> float:
        # exp(-s x^2 / 2) < 1e-30 well before this point for these low-degree polynomials
        return math.sqrt(2.0 * 80.0 / self.s)


DIFF_CORPUS: tuple[TestFunction, ...] = (
    TestFunction("gauss", (1.0,)),
    TestFunction("x_gauss", (0.0, 1.0)),
    TestFunction("neumann_quartic", (1.0, 0.0, 0.5, 0.0, -0.25), 2.0),
    TestFunction("dirichlet_cubic", (0.0, 1.5, 0.0, -1.0), 1.5),
    TestFunction("mixed", (0.5, -1.0, 2.0), 0.5),
)


def differentiation_residuals(
    fn: TestFunction, ks: Sequence[float], spec: QuadratureSpec = DEFAULT_QUAD
) -> tuple[np.ndarray, np.ndarray]:
    """Residuals of the second-derivative rules on a grid of ``k``.

    Sine: ``F_S{f''} + k^2 F_S{f} - sqrt(2/pi) k f(0)``.
    Cosine: ``F_C{f''} + k^2 F_C{f} + sqrt(2/pi) f'(0)``.
    """
    f0 = float(fn.f(np.float64(0.0)))
    df0 = float(fn.df(np.float64(0.0)))
    X = fn.x_max
    rs, rc = [], []
    for k in ks:
        fs = sine_transform(fn.f, k, spec, x_max=X)
        fs2 = sine_transform(fn.d2f, k, spec, x_max=X)
        fc = cosine_transform(fn.f, k, spec, x_max=X)
        fc2 = cosine_transform(fn.d2f, k, spec, x_max=X)
        rs.append(fs2 + k * k * fs - SQRT_2_OVER_PI * k * f0)
        rc.append(fc2 + k * k * fc + SQRT_2_OVER_PI * df0)
    return np.array(rs), np.array(rc)


def wavefn_for(parity: Parity, a: float) -> PiecewiseWaveFn:
    """Convenience: normalized eigenfunction of the given parity, if it exists."""
    from .quantize import spectrum

    for s in spectrum(a).states:
        if s.parity is parity:
            return build_wavefn(s)
    raise ValueError(f"no {parity.value} bound state for a = {a!r}")
