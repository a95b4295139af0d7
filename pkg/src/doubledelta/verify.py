"""Seeded invariant suite behind ``doubledelta verify``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .eigen import build_wavefn, match_report, norm_check, overlap
from .model import Parity
from .oracle import (
    WellConfig,
    delta_energy,
    delta_limit_study,
    grid_extrapolated,
    square_well_spectrum,
)
from .quadrature import DEFAULT_QUAD, QuadratureSpec
from .quantize import (
    log_level_splitting,
    residual,
    solve_even,
    solve_odd,
    spectrum,
    xi_even_lambert,
    xi_odd_lambert,
)
from .transform import (
    DIFF_CORPUS,
    Tabulated,
    TabulatedCase,
    analytic_transform,
    differentiation_residuals,
    inverse_reconstruct,
    numeric_transform,
    parseval_residual,
    positive_energy_nonexistence,
    pv_fold,
    pv_subtract,
    tabulated_integral,
)


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool

    @property
    def status(self) -> str:
        return "pass" if self.passed else "FAIL"


def _le(name: str, value: float, tol: float) -> CheckResult:
    return CheckResult(name, float(value), tol, bool(value <= tol))


def _flag(name: str, ok: bool) -> CheckResult:
    return CheckResult(name, 0.0 if ok else 1.0, 0.0, bool(ok))


def _states(rng: np.random.Generator, n: int):
    out = []
    for a in 10 ** rng.uniform(-1.3, 0.7, n):
        out.extend(spectrum(a).states)
    return out


def check_counting() -> list[CheckResult]:
    sweep = np.linspace(0.5, 1.5, 50)
    threshold_ok = all((solve_odd(a) is not None) == (a < 1.0) for a in sweep)
    return [
        _flag("quantize.count_a=3/2", spectrum(1.5).count == 1 and spectrum(1.5).states[0].parity is Parity.EVEN),
        _flag("quantize.count_a=1/4", [s.parity for s in spectrum(0.25).states] == [Parity.EVEN, Parity.ODD]),
        _flag("quantize.count_a<=0", spectrum(-1.0).count == 0),
        _flag("quantize.threshold_sweep", threshold_ok),
        _flag("quantize.odd_absent_at_a=1", solve_odd(1.0) is None),
    ]


def check_roots(rng: np.random.Generator) -> list[CheckResult]:
    worst_res, worst_w = 0.0, 0.0
    for a in 10 ** rng.uniform(-2, 2, 100):
        xe = solve_even(a)
        worst_res = max(worst_res, abs(residual(Parity.EVEN, xe, a)))
        worst_w = max(worst_w, abs(xe - xi_even_lambert(a)))
        xo = solve_odd(a)
        if xo is not None:
            worst_res = max(worst_res, abs(residual(Parity.ODD, xo, a)))
            worst_w = max(worst_w, abs(xo - xi_odd_lambert(a)))
    grid = np.linspace(0.05, 0.95, 40)
    mono = all(np.all(np.diff([f(a) for a in grid]) < 0) for f in (solve_even, solve_odd))
    order = all(solve_odd(a) < solve_even(a) for a in grid)
    return [
        _le("quantize.residual_certificate", worst_res, 1e-11),
        _le("quantize.lambert_w_agreement", worst_w, 1e-10),
        _flag("quantize.monotone_in_a", mono),
        _flag("quantize.odd_below_even", order),
        _flag("quantize.degeneracy_limit", log_level_splitting(1e-3) < log_level_splitting(1e-2)),
    ]


def check_eigen(rng: np.random.Generator, quad: QuadratureSpec) -> list[CheckResult]:
    worst = 0.0
    worst_norm = 0.0
    worst_parity = 0.0
    for s in _states(rng, 10):
        w = build_wavefn(s)
        worst = max(worst, match_report(w).max())
        worst_norm = max(worst_norm, norm_check(w, quad))
        x = rng.uniform(-6, 6, 200)
        worst_parity = max(worst_parity, float(np.max(np.abs(w(-x) - s.parity.sign * w(x)))))
    spec = spectrum(0.25).states
    ortho = abs(overlap(build_wavefn(spec[0]), build_wavefn(spec[1]), quad))
    return [
        _le("eigen.matching_residuals", worst, 1e-10),
        _le("eigen.norm_quadrature", worst_norm, 1e-8),
        _le("eigen.parity_exact", worst_parity, 0.0),
        _le("eigen.orthogonality", ortho, 1e-10),
    ]


def check_transforms(quad: QuadratureSpec) -> list[CheckResult]:
    fwd = inv = pars = 0.0
    ks = np.linspace(0.0, 20.0, 50)
    xs = np.linspace(0.05, 5.0, 50)
    for a in (0.25, 0.5, 1.5):
        for s in spectrum(a).states:
            w = build_wavefn(s)
            t = analytic_transform(w)
            fwd = max(fwd, float(np.max(np.abs(numeric_transform(w, ks, quad) - t(ks)))))
            inv = max(inv, float(np.max(np.abs(inverse_reconstruct(t, xs, quad) - w(xs)))))
            pars = max(pars, parseval_residual(w, t, quad))
    return [
        _le("transform.forward_vs_analytic", fwd, 1e-8),
        _le("transform.inverse_reconstruction", inv, 1e-7),
        _le("transform.parseval", pars, 1e-8),
    ]


def check_integrals(rng: np.random.Generator, quad: QuadratureSpec, per_branch: int = 5) -> list[CheckResult]:
    reg = pv = pv_methods = 0.0
    for which in Tabulated:
        for lower in (True, False):
            for _ in range(per_branch):
                c, d = rng.uniform(0.2, 3.0, 2)
                x = rng.uniform(0.05, c * 0.95) if lower else rng.uniform(c * 1.05, 3 * c + 1)
                case = TabulatedCase(which, c, d, x)
                num, cf = tabulated_integral(case, quad)
                if which.principal_value:
                    pv = max(pv, abs(num - cf))
                    pv_methods = max(pv_methods, abs(pv_fold(case, quad) - pv_subtract(case, quad)))
                else:
                    reg = max(reg, abs(num - cf))
    return [
        _le("transform.A1_A2_closed_forms", reg, 1e-7),
        _le("transform.A3_A4_closed_forms", pv, 1e-5),
        _le("transform.pv_methods_agree", pv_methods, 1e-6),
    ]


def check_nonexistence(quad: QuadratureSpec) -> list[CheckResult]:
    dg = positive_energy_nonexistence(1.0, 1.0, spec=quad)
    bound_ok = all(r <= b * (1 + 1e-9) for r, b in zip(dg.bound_decay_ratios(), dg.bound_decay_bounds()))
    return [
        _flag("transform.real_kappa_tail_does_not_decay", dg.non_decaying()),
        _flag("transform.bound_state_tail_decays", bound_ok),
    ]


def check_differentiation(quad: QuadratureSpec) -> list[CheckResult]:
    ks = np.linspace(0.0, 10.0, 21)
    worst = 0.0
    for fn in DIFF_CORPUS:
        rs, rc = differentiation_residuals(fn, ks, quad)
        worst = max(worst, float(np.max(np.abs(rs))), float(np.max(np.abs(rc))))
    return [_le("transform.differentiation_identities", worst, 1e-7)]


def check_oracles() -> list[CheckResult]:
    out = []
    for a in (0.25, 0.5):
        study = delta_limit_study(1.0 / a, 1.0, [0.4, 0.2, 0.1, 0.05, 0.025])
        out.append(_flag(f"oracle.limit_study_a={a}", study.ok()))
    worst = 0.0
    for a in (0.25, 0.5, 0.75):
        ext = grid_extrapolated(a)
        for p, e in zip(ext.parities, ext.energies):
            worst = max(worst, abs(e - delta_energy(a, p)))
    out.append(_le("oracle.grid_vs_analytic", worst, 1e-3))
    counts = [len(square_well_spectrum(WellConfig.from_coupling(a, 0.025))) for a in (0.25, 1.5)]
    out.append(_flag("oracle.well_state_counts", counts == [2, 1]))
    return out


def run_suite(seed: int = 0, quad: QuadratureSpec = DEFAULT_QUAD) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    results += check_counting()
    results += check_roots(rng)
    results += check_eigen(rng, quad)
    results += check_transforms(quad)
    results += check_integrals(rng, quad)
    results += check_nonexistence(quad)
    results += check_differentiation(quad)
    results += check_oracles()
    return results
