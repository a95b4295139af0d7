import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad as sp_quad

from doubledelta.eigen import (
    _sinh_minus_x_scaled,
    build_wavefn,
    match_report,
    norm_check,
    overlap,
)
from doubledelta.model import Coupling, Parity, make_state
from doubledelta.quantize import solve_even, spectrum


def _states(a_values):
    return [s for a in a_values for s in spectrum(a).states]


# -- symbolic derivation of the quantization conditions ----------------------


@pytest.mark.parametrize("parity", list(Parity))
def test_matching_conditions_reduce_to_quantization_condition(parity):
    x, xi, a, L, A = sp.symbols("x xi a L A", positive=True)
    inner = A * (sp.cosh(xi * x / L) if parity is Parity.EVEN else sp.sinh(xi * x / L))
    phi_L = inner.subs(x, L)
    outer = phi_L * sp.exp(-xi * (x / L - 1))
    jump = sp.diff(outer, x).subs(x, L) - sp.diff(inner, x).subs(x, L)
    # phi'(L+) - phi'(L-) = -phi(L) / (a L) with alpha = 1 / (a L)
    condition = sp.simplify((jump + phi_L / (a * L)) * L / A)
    sign = 1 if parity is Parity.EVEN else -1
    (a_sol,) = sp.solve(condition, a)
    expected = (1 + sign * sp.exp(-2 * xi)) / (2 * xi)
    assert sp.simplify((a_sol - expected).rewrite(sp.exp)) == 0


@pytest.mark.parametrize("parity", list(Parity))
def test_symbolic_norm_matches_closed_form(parity):
    state = [s for s in spectrum(0.4).states if s.parity is parity][0]
    w = build_wavefn(state)
    X = sp.symbols("X", positive=True)
    z = sp.Float(state.xi, 30)
    inner = sp.cosh(z * X) if parity is Parity.EVEN else sp.sinh(z * X)
    edge = inner.subs(X, 1)
    n2 = 2 * (sp.integrate(inner**2, (X, 0, 1)) + edge**2 / (2 * z))
    amp = w.phi_L / float(edge)
    assert float(n2) * amp**2 == pytest.approx(1.0, rel=1e-13)


# -- numerical properties -----------------------------------------------------


@given(st.floats(min_value=0.05, max_value=5.0))
@settings(max_examples=60, deadline=None)
def test_matching_residuals(a):
    for s in spectrum(a).states:
        w = build_wavefn(s)
        r = match_report(w)
        assert r.continuity_err == 0.0 or r.continuity_err <= 1e-15
        assert r.max() <= 1e-10
        left, right = w.one_sided_derivatives()
        assert right - left == pytest.approx(-w.phi_L / a, abs=1e-10)


def test_continuity_exact_at_L():
    for s in _states([0.25, 0.5, 1.5]):
        w = build_wavefn(s)
        assert w(1.0) == w.phi_L
        assert abs(w(np.nextafter(1.0, 2.0)) - w.phi_L) <= 1e-15
        assert abs(w(np.nextafter(1.0, 0.0)) - w.phi_L) <= 1e-15


@pytest.mark.parametrize("a", [0.25, 0.5, 0.9, 1.5, 4.0])
def test_norm_against_scipy_quad(a):
    for s in spectrum(a).states:
        w = build_wavefn(s)
        X = w.x_max()
        total = sum(sp_quad(lambda x: w(x) ** 2, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
                    for lo, hi in [(0, 1), (1, X)])
        assert 2 * total == pytest.approx(1.0, abs=1e-10)
        assert norm_check(w) <= 1e-8


def test_norm_no_overflow_in_weak_coupling_limit():
    for s in _states([0.01, 2e-3]):
        w = build_wavefn(s)
        assert math.isfinite(w.phi_L) and w.phi_L > 0
        with np.errstate(all="raise"):
            vals = w(np.linspace(-3, 3, 101))
        assert np.all(np.isfinite(vals))
        assert norm_check(w) <= 1e-8


def test_sinh_minus_x_scaled_branches():
    for u in [1e-8, 0.05, 0.0999, 0.1, 0.5, 3.0, 50.0]:
        ref = float(sp.N((sp.sinh(sp.Float(u, 40)) - sp.Float(u, 40)) * sp.exp(-sp.Float(u, 40)), 30))
        assert _sinh_minus_x_scaled(u) == pytest.approx(ref, rel=1e-13)


def test_parity_exact_and_signs():
    rng = np.random.default_rng(7)
    for s in _states([0.3, 0.7, 2.0]):
        w = build_wavefn(s)
        x = rng.uniform(-5, 5, 500)
        assert np.array_equal(w(-x), s.parity.sign * w(x))
        assert w.amp > 0
        if s.parity is Parity.EVEN:
            assert w.dphi0 == 0.0 and w(0.0) == pytest.approx(w.phi0)
        else:
            assert w.phi0 == 0.0 and w(0.0) == 0.0


def test_derivative_and_second_derivative_by_finite_differences():
    for s in _states([0.4]):
        w = build_wavefn(s)
        h = 1e-5
        for x in [0.3, -0.6, 1.7, -2.5]:
            fd = (w(x + h) - w(x - h)) / (2 * h)
            assert w.derivative(x) == pytest.approx(fd, rel=1e-8, abs=1e-10)
            fd2 = (w(x + h) - 2 * w(x) + w(x - h)) / h**2
            assert w.second_derivative(x) == pytest.approx(fd2, rel=1e-4)


def test_orthogonality():
    e, o = spectrum(0.25).states
    assert abs(overlap(build_wavefn(e), build_wavefn(o))) <= 1e-10
    assert overlap(build_wavefn(e), build_wavefn(e)) == pytest.approx(1.0, abs=1e-10)


def test_off_shell_state_rejected():
    # negative control: a perturbed xi cannot satisfy the matching conditions
    xi = solve_even(0.5) * (1 + 1e-6)
    bad = make_state(Parity.EVEN, xi, Coupling(0.5))
    with pytest.raises(ValueError, match="off-shell"):
        build_wavefn(bad)
    w = build_wavefn(bad, validate=False)
    assert match_report(w).jump_err > 1e-8


def test_halfsep_scaling():
    s = spectrum(0.5).states[0]
    w1, w2 = build_wavefn(s), build_wavefn(s, halfsep=2.0)
    assert w2(2.0 * 0.7) == pytest.approx(w1(0.7) / math.sqrt(2.0), rel=1e-14)
    with pytest.raises(ValueError):
        build_wavefn(s, halfsep=0.0)


@pytest.mark.parametrize("a", [0.25, 0.5, 1.5])
def test_perturbed_xi_shows_in_jump_residual(a):
    for s in spectrum(a).states:
        bad = make_state(s.parity, s.xi * (1 + 1e-3), Coupling(a))
        assert match_report(build_wavefn(bad, validate=False)).jump_err > 1e-4


def test_wide_coupling_range_converges():
    for a in np.geomspace(1e-3, 1e3, 200):
        s = spectrum(a)
        assert s.count == (2 if a < 1 else 1)
