"""Quantization conditions ``2 a xi = 1 +/- exp(-2 xi)`` and the spectrum they fix.

The even branch always has exactly one positive root for ``a > 0``. The odd
branch has a positive root only for ``0 < a < 1``; at ``a = 1`` the line
``2 a xi`` only touches ``1 - exp(-2 xi)`` at the origin, which is not a bound
state, so the state is reported as absent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .lambertw import lambertw
from .model import CANONICAL, BoundState, Coupling, EnergyScale, Parity, make_state

ODD_BRACKET_START = 1e-9


class BracketError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolverSpec:
    abs_tol: float = 1e-12
    max_iter: int = 200
    polish: bool = True

    def __post_init__(self) -> None:
        if not self.abs_tol > 0:
            raise ValueError("abs_tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DEFAULT_SOLVER = SolverSpec()


@dataclass(frozen=True)
class Spectrum:
    coupling: Coupling
    states: tuple[BoundState, ...] = field(default_factory=tuple)

    @property
    def count(self) -> int:
        return len(self.states)

    @property
    def ground(self) -> Optional[BoundState]:
        return self.states[0] if self.states else None


def _as_a(a) -> float:
    return a.a if isinstance(a, Coupling) else Coupling(a).a


def f_even(xi, a: float):
    return 2.0 * a * xi - 1.0 - np.exp(-2.0 * xi)


def f_odd(xi, a: float):
    # expm1 keeps the small-xi behaviour (f ~ 2 (a - 1) xi) accurate
    return 2.0 * a * xi + np.expm1(-2.0 * xi)


def residual(parity: Parity, xi: float, a: float) -> float:
    f = f_even if parity is Parity.EVEN else f_odd
    return float(f(xi, a))


def _bisect(f, lo: float, hi: float, spec: SolverSpec) -> float:
    flo, fhi = f(lo), f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0:
        raise BracketError(f"no sign change on [{lo!r}, {hi!r}]")
    mid = 0.5 * (lo + hi)
    for _ in range(spec.max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0.0 or hi - lo <= 4.0 * math.ulp(mid):
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return mid


def _newton_polish(f, df, x: float, lo: float, hi: float, steps: int = 3) -> float:
    best, fbest = x, abs(f(x))
    for _ in range(steps):
        d = df(x)
        if d == 0.0:
            break
        x_new = x - f(x) / d
        if not lo <= x_new <= hi:
            break
        x = x_new
        fx = abs(f(x))
        if fx < fbest:
            best, fbest = x, fx
    return best


def solve_even(a, spec: SolverSpec = DEFAULT_SOLVER) -> float:
    """Unique positive root of ``2 a xi = 1 + exp(-2 xi)``.

    The bracket ``[eps, 1/a + 1]`` is always valid: the function is ``-2`` at
    the origin and at least ``2a`` at the right end.
    """
    a = _as_a(a)
    if a <= 0:
        raise ValueError("no even bound state for a <= 0 (repulsive potential)")
    lo, hi = ODD_BRACKET_START, 1.0 / a + 1.0
    f = lambda x: float(f_even(x, a))
    xi = _bisect(f, lo, hi, spec)
    if spec.polish:
        xi = _newton_polish(f, lambda x: 2.0 * a + 2.0 * math.exp(-2.0 * x), xi, lo, hi)
    return xi


def solve_odd(a, spec: SolverSpec = DEFAULT_SOLVER) -> Optional[float]:
    """Positive root of ``2 a xi = 1 - exp(-2 xi)``, or ``None`` when ``a >= 1``.

    For ``a < 1`` the function ``2 a xi - 1 + exp(-2 xi)`` starts out negative
    (slope ``2a - 2`` at the origin), so starting the bracket just above zero
    skips the trivial root ``xi = 0``.
    """
    a = _as_a(a)
    if a <= 0:
        raise ValueError("no odd bound state for a <= 0 (repulsive potential)")
    if a >= 1.0:
        return None
    f = lambda x: float(f_odd(x, a))
    # the root is below 1/(2a), but for small a only by exp(-1/a)/(2a), which
    # rounding can swallow; one unit further f_odd >= 2a > 0 for certain
    hi = 1.0 / (2.0 * a) + 1.0
    lo = ODD_BRACKET_START
    # very close to threshold the root can sit below the default start
    while f(lo) >= 0.0:
        lo *= 1e-3
        if lo < 1e-300:
            return None
    xi = _bisect(f, lo, hi, spec)
    if spec.polish:
        xi = _newton_polish(f, lambda x: 2.0 * a - 2.0 * math.exp(-2.0 * x), xi, lo, hi)
    return xi


def solve(parity: Parity, a, spec: SolverSpec = DEFAULT_SOLVER) -> Optional[float]:
    return solve_even(a, spec) if parity is Parity.EVEN else solve_odd(a, spec)


def spectrum(
    a, scale: EnergyScale = CANONICAL, spec: SolverSpec = DEFAULT_SOLVER
) -> Spectrum:
    """All bound states for coupling ``a``, ground state first."""
    c = a if isinstance(a, Coupling) else Coupling(a)
    if c.a <= 0:
        return Spectrum(c, ())
    states = [make_state(Parity.EVEN, solve_even(c, spec), c, scale)]
    xi_odd = solve_odd(c, spec)
    if xi_odd is not None:
        states.append(make_state(Parity.ODD, xi_odd, c, scale))
    states.sort(key=lambda s: s.energy)
    return Spectrum(c, tuple(states))


def quantization_curves(
    xi_max: float, n: int, a_values: Sequence[float] = ()
) -> dict[str, np.ndarray]:
    """Sampled columns of both sides of the quantization conditions.

    Keys: ``xi``, ``even_rhs`` (1 + e^{-2 xi}), ``odd_rhs`` (1 - e^{-2 xi}) and
    one ``line_a=<a>`` column ``2 a xi`` per requested coupling.
    """
    if not xi_max > 0:
        raise ValueError("xi_max must be positive")
    if n < 2:
        raise ValueError("n must be >= 2")
    xi = np.linspace(0.0, xi_max, n)
    table = {
        "xi": xi,
        "even_rhs": 1.0 + np.exp(-2.0 * xi),
        "odd_rhs": -np.expm1(-2.0 * xi),
    }
    for a in a_values:
        table[f"line_a={float(a)!r}"] = 2.0 * float(a) * xi
    return table


# Closed-form oracles -------------------------------------------------------


def xi_even_lambert(a: float) -> float:
    """Even root as ``(1/a + W0(exp(-1/a) / a)) / 2``."""
    return 0.5 * (1.0 / a + lambertw(math.exp(-1.0 / a) / a, 0))


def xi_odd_lambert(a: float) -> Optional[float]:
    """Odd root as ``(1/a + W(-exp(-1/a) / a)) / 2`` on the nontrivial branch.

    The two real branches give the trivial root ``xi = 0`` (``W = -1/a``) and
    the other one. For ``a < 1`` the trivial root lies on W-1, so the bound
    state comes from W0; for ``a >= 1`` the remaining branch gives ``xi <= 0``.
    """
    if a >= 1.0:
        return None
    z = -math.exp(-1.0 / a) / a
    return 0.5 * (1.0 / a + lambertw(z, 0))


def level_splitting(a: float, spec: SolverSpec = DEFAULT_SOLVER) -> float:
    """``xi_even - xi_odd`` computed without cancellation.

    Subtracting the two conditions gives
    ``2 a (xi_e - xi_o) = exp(-2 xi_e) + exp(-2 xi_o)``.
    """
    xe, xo = solve_even(a, spec), solve_odd(a, spec)
    if xo is None:
        raise ValueError("odd state absent for a >= 1")
    return (math.exp(-2.0 * xe) + math.exp(-2.0 * xo)) / (2.0 * a)


def log_level_splitting(a: float, spec: SolverSpec = DEFAULT_SOLVER) -> float:
    """Natural log of :func:`level_splitting`, safe where the splitting underflows."""
    xe, xo = solve_even(a, spec), solve_odd(a, spec)
    if xo is None:
        raise ValueError("odd state absent for a >= 1")
    return -2.0 * xo + math.log1p(math.exp(-2.0 * (xe - xo))) - math.log(2.0 * a)
