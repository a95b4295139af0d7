"""Independent numerical backends for the double delta spectrum.

Both solvers work in canonical units (hbar^2 / 2m = 1), where the delta
strength is ``alpha = 1 / (a L)`` and a bound state has ``E = -(xi / L)**2``.

* :func:`square_well_spectrum` -- the symmetric double square well (two wells
  of width ``theta`` and depth ``v0`` centred on ``+-L``), solved exactly by
  2x2 transfer matrices on the half axis.
* :func:`grid_eigensolve` -- three-point finite differences in a Dirichlet
  box with each delta smeared over a few grid cells, diagonalized by Sturm
  bisection plus inverse iteration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .model import Coupling, Parity
from .quantize import solve

# -- double square well ---------------------------------------------------------


@dataclass(frozen=True)
class WellConfig:
    """Two wells of width ``theta`` and depth ``v0`` centred on ``x = +-halfsep``."""

    theta: float
    v0: float
    halfsep: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and self.theta > 0):
            raise ValueError("theta must be positive")
        if not (math.isfinite(self.halfsep) and self.halfsep > 0):
            raise ValueError("halfsep must be positive")
        if not self.theta < 2.0 * self.halfsep:
            raise ValueError("theta must be < 2 L so the wells do not overlap")
        if not math.isfinite(self.v0):
            raise ValueError("v0 must be finite")

    @property
    def alpha(self) -> float:
        return self.theta * self.v0

    @property
    def coupling(self) -> float:
        return 1.0 / (self.alpha * self.halfsep)

    @classmethod
    def from_coupling(cls, a: float, theta: float, halfsep: float = 1.0) -> "WellConfig":
        alpha = 1.0 / (a * halfsep)
        return cls(theta, alpha / theta, halfsep)


@dataclass(frozen=True)
class WellState:
    parity: Parity
    energy: float
    bracket: tuple[float, float]
    bracket_values: tuple[float, float]
    residual: float


def _propagate(phi: float, dphi: float, length: float, q2: float) -> tuple[float, float]:
    """Carry ``(phi, phi')`` across a region where ``phi'' = q2 * phi``."""
    if length == 0.0:
        return phi, dphi
    if q2 > 0:
        q = math.sqrt(q2)
        ch, sh = math.cosh(q * length), math.sinh(q * length)
        return phi * ch + dphi * sh / q, phi * q * sh + dphi * ch
    if q2 < 0:
        k = math.sqrt(-q2)
        c, s = math.cos(k * length), math.sin(k * length)
        return phi * c + dphi * s / k, -phi * k * s + dphi * c
    return phi + dphi * length, dphi


def well_mismatch(cfg: WellConfig, parity: Parity, energy: float) -> tuple[float, float]:
    """Decaying-tail mismatch ``phi'(b) + q phi(b)`` at the outer well edge.

    Returns ``(mismatch, scale)`` where ``scale = |phi'(b)| + q |phi(b)|`` so
    ``mismatch / scale`` is a dimensionless residual.
    """
    L, th = cfg.halfsep, cfg.theta
    phi, dphi = (1.0, 0.0) if parity is Parity.EVEN else (0.0, 1.0)
    q2_free = -energy
    phi, dphi = _propagate(phi, dphi, L - 0.5 * th, q2_free)
    phi, dphi = _propagate(phi, dphi, th, -cfg.v0 - energy)
    q = math.sqrt(max(q2_free, 0.0))
    return dphi + q * phi, abs(dphi) + q * abs(phi)


def square_well_spectrum(
    cfg: WellConfig, n_scan: int = 200, tol: float = 1e-10, max_iter: int = 200
) -> list[WellState]:
    """Bound states (``-v0 < E < 0``) of the double square well, lowest first.

    Each parity is scanned on ``n_scan`` energies, and every sign change of the
    tail mismatch is bisected. The bracketing energies and mismatch values are
    kept on each state as a certificate.
    """
    if cfg.v0 <= 0:
        return []
    energies = -cfg.v0 + cfg.v0 * (np.arange(n_scan) + 0.5) / n_scan
    states: list[WellState] = []
    for parity in (Parity.EVEN, Parity.ODD):
        f = lambda e: well_mismatch(cfg, parity, e)[0]
        vals = [f(e) for e in energies]
        for i in range(n_scan - 1):
            lo, hi = float(energies[i]), float(energies[i + 1])
            flo, fhi = vals[i], vals[i + 1]
            if flo == 0.0:
                hi = lo
            elif flo * fhi > 0:
                continue
            bracket, bvals = (lo, hi), (flo, fhi)
            for _ in range(max_iter):
                if hi - lo <= 4 * math.ulp(abs(lo)) + 1e-300:
                    break
                mid = 0.5 * (lo + hi)
                fm = f(mid)
                if fm == 0.0:
                    lo = hi = mid
                    break
                if (fm < 0) == (flo < 0):
                    lo, flo = mid, fm
                else:
                    hi = mid
            e = 0.5 * (lo + hi)
            mis, scale = well_mismatch(cfg, parity, e)
            res = abs(mis) / scale if scale > 0 else abs(mis)
            if res > tol:
                raise RuntimeError(f"well root at E={e!r} has residual {res:.2e}")
            states.append(WellState(parity, e, bracket, bvals, res))
    states.sort(key=lambda s: s.energy)
    return states


def delta_energy(a: float, parity: Parity, halfsep: float = 1.0) -> Optional[float]:
    xi = solve(parity, a) if a > 0 else None
    return None if xi is None else -(xi / halfsep) ** 2


@dataclass(frozen=True)
class LimitRow:
    theta: float
    v0: float
    parity: Parity
    e_well: Optional[float]
    e_delta: Optional[float]

    @property
    def gap(self) -> Optional[float]:
        if self.e_well is None or self.e_delta is None:
            return None
        return abs(self.e_well - self.e_delta)


@dataclass(frozen=True)
class LimitStudy:
    alpha: float
    halfsep: float
    thetas: tuple[float, ...]
    rows: tuple[LimitRow, ...] = field(default_factory=tuple)

    @property
    def a(self) -> float:
        return 1.0 / (self.alpha * self.halfsep)

    def column(self, parity: Parity) -> list[LimitRow]:
        return [r for r in self.rows if r.parity is parity]

    def gaps(self, parity: Parity) -> list[Optional[float]]:
        return [r.gap for r in self.column(parity)]

    def monotone(self, parity: Parity, noise: float = 0.05) -> bool:
        """Gaps shrink along the theta list, allowing ``noise`` relative wobble."""
        g = self.gaps(parity)
        if not g or any(v is None for v in g):
            return False
        return all(g[i + 1] <= g[i] * (1.0 + noise) for i in range(len(g) - 1))

    def converged(self, parity: Parity, factor: float = 4.0) -> bool:
        g = self.gaps(parity)
        if not g or any(v is None for v in g):
            return False
        return g[-1] < g[0] / factor

    def tracked(self) -> list[Parity]:
        """Parities with a delta-limit state (those the postconditions apply to)."""
        return [p for p in Parity if self.column(p) and self.column(p)[0].e_delta is not None]

    def ok(self) -> bool:
        return all(self.monotone(p) and self.converged(p) for p in self.tracked())


def delta_limit_study(
    alpha: float, halfsep: float, thetas: Sequence[float], n_scan: int = 200
) -> LimitStudy:
    """Shrink the wells at fixed ``alpha = theta * v0`` and compare with the delta limit."""
    thetas = tuple(float(t) for t in thetas)
    if any(thetas[i + 1] >= thetas[i] for i in range(len(thetas) - 1)):
        raise ValueError("thetas must be strictly decreasing")
    if any(t >= 2 * halfsep or t <= 0 for t in thetas):
        raise ValueError("every theta must lie in (0, 2L)")
    a = 1.0 / (alpha * halfsep)
    rows = []
    for th in thetas:
        cfg = WellConfig(th, alpha / th, halfsep)
        states = square_well_spectrum(cfg, n_scan)
        for parity in Parity:
            found = [s.energy for s in states if s.parity is parity]
            rows.append(LimitRow(th, cfg.v0, parity, found[0] if found else None,
                                 delta_energy(a, parity, halfsep)))
    return LimitStudy(alpha, halfsep, thetas, tuple(rows))


# -- finite-difference grid ---------------------------------------------------


class EigenSolveError(RuntimeError):
    pass


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[-x_max, x_max]`` with ``n`` points (ends are Dirichlet).

    Each delta becomes a box of width ``delta_width`` and depth
    ``alpha / delta_width``, weighted by the trapezoid rule so the discrete
    strength is exactly ``alpha``.
    """

    x_max: float = 20.0
    n: int = 8001
    delta_width: float = 0.02

    def __post_init__(self) -> None:
        if self.n < 3:
            raise ValueError("n must be >= 3")
        if not self.x_max > 1.0:
            raise ValueError("x_max must exceed the delta position L = 1")
        if self.delta_width < 2 * self.spacing * (1 - 1e-9):
            raise ValueError("delta_width must cover at least 2 grid spacings")

    @property
    def spacing(self) -> float:
        return 2.0 * self.x_max / (self.n - 1)

    def x(self) -> np.ndarray:
        return np.linspace(-self.x_max, self.x_max, self.n)


@dataclass(frozen=True)
class GridState:
    parity: Parity
    energy: float
    vector: np.ndarray = field(repr=False, compare=False)


def regularized_potential(x: np.ndarray, alpha: float, width: float, h: float, halfsep: float = 1.0):
    """Two boxes of total strength ``-alpha`` each, trapezoid-weighted on the grid."""
    v = np.zeros_like(x)
    half = 0.5 * width
    for centre in (-halfsep, halfsep):
        r = np.abs(x - centre)
        inside = r < half - 1e-9 * h
        edge = np.abs(r - half) <= 1e-9 * h
        w = inside.astype(float) + 0.5 * edge
        # renormalize so h * sum(weights) * depth == alpha on any grid alignment
        depth = alpha / (h * w.sum()) if w.sum() > 0 else 0.0
        v -= depth * w
    return v


def _sturm_counts(diag: np.ndarray, off2: np.ndarray, shifts: np.ndarray) -> np.ndarray:
    """Number of eigenvalues below each shift (LDL^T inertia)."""
    shifts = np.asarray(shifts, dtype=float)
    count = np.zeros(shifts.shape, dtype=int)
    tiny = np.finfo(float).tiny
    d = diag[0] - shifts
    d = np.where(d == 0.0, -tiny, d)
    count += d < 0
    for i in range(1, len(diag)):
        d = (diag[i] - shifts) - off2[i - 1] / d
        d = np.where(d == 0.0, -tiny, d)
        count += d < 0
    return count


def _inverse_iteration(diag, off, shift, max_iter=50, tol=1e-12):
    n = len(diag)
    hnorm = float(np.max(np.abs(diag)) + 2.0 * np.max(np.abs(off)))
    ab = np.zeros((3, n))
    ab[0, 1:] = off
    ab[2, :-1] = off
    rng = np.random.default_rng(12345)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    lam = shift
    for _ in range(max_iter):
        ab[1] = diag - shift
        y = solve_banded((1, 1), ab, v)
        v_new = y / np.linalg.norm(y)
        hv = diag * v_new
        hv[:-1] += off * v_new[1:]
        hv[1:] += off * v_new[:-1]
        lam_new = float(v_new @ hv)
        resid = float(np.linalg.norm(hv - lam_new * v_new))
        if np.dot(v_new, v) < 0:
            v_new = -v_new
        v, lam = v_new, lam_new
        if resid <= tol * hnorm:
            return lam, v
    raise EigenSolveError(f"inverse iteration did not converge near {shift!r} (residual {resid:.2e})")


def grid_eigensolve(a, g: GridSpec = GridSpec(), n_sections: int = 48, sturm_tol: float = 1e-6) -> list[GridState]:
    """Negative eigenvalues of the finite-difference Hamiltonian, lowest first.

    Eigenvalues are isolated by multisection with Sturm counts, then refined
    and paired with eigenvectors by shifted inverse iteration. Parity comes
    from the overlap of each eigenvector with its mirror image.
    """
    a = a.a if isinstance(a, Coupling) else float(a)
    alpha = 1.0 / a
    h = g.spacing
    x = g.x()[1:-1]
    v = regularized_potential(x, alpha, g.delta_width, h)
    diag = 2.0 / (h * h) + v
    off = np.full(len(x) - 1, -1.0 / (h * h))
    off2 = off * off

    n_neg = int(_sturm_counts(diag, off2, np.array([0.0]))[0])
    if n_neg == 0:
        return []
    lower = float(np.min(v)) - 1e-9
    # isolate each eigenvalue in its own interval
    intervals = [(lower, 0.0, 0, n_neg)]
    isolated = []
    while intervals:
        lo, hi, c_lo, c_hi = intervals.pop()
        if c_hi - c_lo == 0:
            continue
        if c_hi - c_lo == 1 and hi - lo <= sturm_tol * max(1.0, abs(lo)):
            isolated.append((lo, hi))
            continue
        if hi - lo <= 1e-14 * max(1.0, abs(lo)):
            raise EigenSolveError("degenerate eigenvalues cannot be separated")
        pts = np.linspace(lo, hi, n_sections + 1)
        counts = _sturm_counts(diag, off2, pts[1:-1])
        cs = np.concatenate([[c_lo], counts, [c_hi]])
        for j in range(n_sections):
            if cs[j + 1] > cs[j]:
                intervals.append((float(pts[j]), float(pts[j + 1]), int(cs[j]), int(cs[j + 1])))
    isolated.sort()

    out = []
    for lo, hi in isolated:
        lam, vec = _inverse_iteration(diag, off, 0.5 * (lo + hi))
        if not (lo - 1e-8 * max(1.0, abs(lo)) <= lam <= hi + 1e-8 * max(1.0, abs(hi))):
            raise EigenSolveError(f"inverse iteration left its Sturm interval at {lam!r}")
        mirror = float(np.dot(vec, vec[::-1]))
        parity = Parity.EVEN if mirror > 0 else Parity.ODD
        out.append(GridState(parity, lam, vec))
    return out


@dataclass(frozen=True)
class ExtrapolatedGrid:
    """Grid energies at successively halved ``delta_width`` and their extrapolation."""

    widths: tuple[float, ...]
    levels: tuple[tuple[GridState, ...], ...]
    parities: tuple[Parity, ...]
    energies: tuple[float, ...]


def grid_extrapolated(a, g: GridSpec = GridSpec(20.0, 4001, 0.04), levels: int = 3) -> ExtrapolatedGrid:
    """Repeated Richardson extrapolation of :func:`grid_eigensolve` in the delta width.

    Smearing a delta over a width ``w`` shifts each level by ``O(w)`` (the
    eigenfunction has a kink there). Each level halves both ``w`` and the grid
    spacing, so the cells per delta stay fixed, and the Richardson table
    removes the ``w`` and ``w**2`` terms. The default grid resolves every
    level of ``a`` in [1/4, 3/2] to about 1e-4.
    """
    specs = []
    n, w = g.n, g.delta_width
    for _ in range(levels):
        specs.append(GridSpec(g.x_max, n, w))
        n, w = 2 * n - 1, 0.5 * w
    runs = [tuple(grid_eigensolve(a, s)) for s in specs]
    counts = {len(r) for r in runs}
    if len(counts) != 1:
        raise EigenSolveError(f"bound-state count changes with resolution: {sorted(counts)}")
    parities = tuple(s.parity for s in runs[-1])
    if any(tuple(s.parity for s in r) != parities for r in runs):
        raise EigenSolveError("parity ordering changes with resolution")
    table = [np.array([s.energy for s in r]) for r in runs]
    for order in range(1, levels):
        factor = 2.0**order
        table = [(factor * table[i + 1] - table[i]) / (factor - 1.0) for i in range(len(table) - 1)]
    return ExtrapolatedGrid(
        tuple(s.delta_width for s in specs), tuple(runs), parities, tuple(float(e) for e in table[0])
    )
