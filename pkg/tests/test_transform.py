import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad as sp_quad

from doubledelta.eigen import build_wavefn
from doubledelta.model import Parity
from doubledelta.quantize import spectrum
from doubledelta.transform import (
    DIFF_CORPUS,
    DIFF_CORPUS_VERSION,
    SQRT_2_OVER_PI,
    Tabulated,
    TabulatedCase,
    TestFunction,
    TransformKind,
    analytic_transform,
    closed_form,
    cosine_transform,
    differentiation_residuals,
    inverse_reconstruct,
    numeric_integral,
    numeric_transform,
    parseval_residual,
    positive_energy_nonexistence,
    pv_fold,
    pv_reconstruct,
    pv_subtract,
    sine_transform,
    tabulated_integral,
    transform_norm_sq,
    wavefn_for,
)

KS = np.linspace(0.0, 20.0, 50)


def _wavefns():
    return [build_wavefn(s) for a in (0.25, 0.5, 1.5) for s in spectrum(a).states]


def test_kind_follows_parity():
    assert TransformKind.for_parity(Parity.EVEN) is TransformKind.COSINE
    assert TransformKind.for_parity(Parity.ODD) is TransformKind.SINE


@pytest.mark.parametrize("w", _wavefns(), ids=lambda w: f"{w.parity.value}-a{w.a}")
def test_numeric_forward_matches_analytic(w):
    t = analytic_transform(w)
    assert np.max(np.abs(numeric_transform(w, KS) - t(KS))) <= 1e-8


def test_forward_against_scipy_weighted_quad():
    w = wavefn_for(Parity.ODD, 0.5)
    t = analytic_transform(w)
    for k in (0.7, 3.1, 11.0):
        head = sp_quad(lambda x: w(x), 0, 1, weight="sin", wvar=k, epsabs=1e-14)[0]
        tail = sp_quad(lambda x: w(x), 1, np.inf, weight="sin", wvar=k)[0]
        assert SQRT_2_OVER_PI * (head + tail) == pytest.approx(t(k), abs=1e-10)


def test_untruncated_transform_path_agrees():
    w = wavefn_for(Parity.EVEN, 0.25)
    t = analytic_transform(w)
    for k in (0.0, 1.5, 7.0):
        assert cosine_transform(w, k, points=[1.0]) == pytest.approx(t(k), abs=1e-9)
    assert sine_transform(w, 0.0) == 0.0
    with pytest.raises(ValueError):
        sine_transform(w, -1.0)


def test_wrong_kind_is_not_a_match():
    # negative control: the cosine transform of an odd state is not its Phi
    w = wavefn_for(Parity.ODD, 0.5)
    t = analytic_transform(w)
    wrong = np.array([cosine_transform(w, k, x_max=w.x_max()) for k in KS[1:10]])
    assert np.max(np.abs(wrong - t(KS[1:10]))) > 1e-3


@pytest.mark.parametrize("w", _wavefns(), ids=lambda w: f"{w.parity.value}-a{w.a}")
def test_inverse_reconstruction(w):
    xs = np.linspace(0.05, 5.0, 50)
    assert np.max(np.abs(inverse_reconstruct(analytic_transform(w), xs) - w(xs))) <= 1e-7


@pytest.mark.parametrize("w", _wavefns(), ids=lambda w: f"{w.parity.value}-a{w.a}")
def test_parseval(w):
    assert parseval_residual(w) <= 1e-8
    assert transform_norm_sq(analytic_transform(w)) == pytest.approx(0.5, rel=1e-8)


def test_parseval_negative_control():
    w = wavefn_for(Parity.EVEN, 0.5)
    assert parseval_residual(w, analytic_transform(w).scaled(1.01)) > 1e-3


# -- tabulated integrals -------------------------------------------------------

# mpmath.quadosc at 25 digits
FROZEN = [
    (TabulatedCase(Tabulated.A1, 1.0, 1.0, 0.5), 0.301122048203389684),
    (TabulatedCase(Tabulated.A2, 1.0, 1.0, 2.0), 0.328034509504793965),
]


@pytest.mark.parametrize("case,ref", FROZEN)
def test_frozen_tabulated_values(case, ref):
    num, cf = tabulated_integral(case)
    assert cf == pytest.approx(ref, rel=1e-15)
    assert num == pytest.approx(ref, abs=1e-12)


positive = st.floats(min_value=0.2, max_value=3.0)


@given(st.sampled_from(list(Tabulated)), positive, positive, st.floats(min_value=0.05, max_value=8.0))
@settings(max_examples=60, deadline=None)
def test_closed_forms_property(which, c, d, x):
    if abs(x - c) < 0.05 * c:
        return
    case = TabulatedCase(which, c, d, x)
    num, cf = tabulated_integral(case)
    tol = 1e-5 if which.principal_value else 1e-7
    assert abs(num - cf) <= tol


def _scipy_pv(case):
    """PV with scipy's Cauchy weight on [0, 2d] plus a QAWF tail."""
    c, d, x = case.c, case.d, case.x
    trig_c = np.sin if case.which.kind is TransformKind.SINE else np.cos
    g = lambda k: trig_c(k * c) * trig_c(k * x) / (k + d)
    head = sp_quad(g, 0.0, 2 * d, weight="cauchy", wvar=d, epsabs=1e-13)[0]
    # product-to-sum for the tail
    s = 1.0 if case.which.kind is TransformKind.COSINE else -1.0
    h = lambda k: 1.0 / (k * k - d * d)
    tail = 0.5 * (sp_quad(h, 2 * d, np.inf, weight="cos", wvar=abs(c - x))[0]
                  + s * sp_quad(h, 2 * d, np.inf, weight="cos", wvar=c + x)[0])
    return head + tail


@pytest.mark.parametrize("which", [Tabulated.A3, Tabulated.A4])
@pytest.mark.parametrize("c,d,x", [(1.0, 1.0, 0.5), (1.0, 1.0, 2.0), (2.0, 0.7, 1.1), (0.5, 2.0, 3.0)])
def test_pv_against_scipy_cauchy(which, c, d, x):
    case = TabulatedCase(which, c, d, x)
    ref = _scipy_pv(case)
    assert pv_subtract(case) == pytest.approx(ref, abs=1e-7)
    assert pv_fold(case) == pytest.approx(ref, abs=1e-7)
    assert closed_form(case) == pytest.approx(ref, abs=1e-7)


def test_pv_methods_agree():
    rng = np.random.default_rng(3)
    for _ in range(10):
        c, d = rng.uniform(0.2, 3.0, 2)
        x = rng.uniform(1.05 * c, 3 * c + 1)
        for which in (Tabulated.A3, Tabulated.A4):
            case = TabulatedCase(which, c, d, x)
            assert abs(pv_fold(case) - pv_subtract(case)) <= 1e-6


def test_case_validation_and_method_names():
    with pytest.raises(ValueError):
        TabulatedCase(Tabulated.A1, 1.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        TabulatedCase(Tabulated.A1, -1.0, 1.0, 0.5)
    with pytest.raises(ValueError):
        numeric_integral(TabulatedCase(Tabulated.A3, 1.0, 1.0, 0.5), method="simpson")
    assert Tabulated.A3.principal_value and not Tabulated.A2.principal_value


def test_closed_form_branches_differ():
    # negative control: using the wrong side of x = c changes the value
    lo = TabulatedCase(Tabulated.A3, 1.0, 1.3, 0.9)
    assert closed_form(lo) != pytest.approx(
        math.pi / (2 * 1.3) * math.sin(1.3) * math.cos(1.3 * 0.9), abs=1e-3)


# -- positive-energy diagnostic --------------------------------------------------


def test_real_kappa_reconstruction_does_not_decay():
    dg = positive_energy_nonexistence(1.0, 1.0)
    assert len(dg.windows) == 5
    assert all(w[1] == 2 * w[0] for w in dg.windows)
    assert dg.non_decaying()
    for r, b in zip(dg.bound_decay_ratios(), dg.bound_decay_bounds()):
        assert r <= b * (1 + 1e-9)


@pytest.mark.parametrize("a,kappa", [(0.25, 0.5), (0.5, 3.0), (-1.0, 1.0)])
def test_nonexistence_other_couplings(a, kappa):
    dg = positive_energy_nonexistence(a, kappa)
    assert dg.non_decaying()
    if a < 0:
        assert dg.bound_amplitudes is None and dg.bound_decay_ratios() == ()


def test_pv_reconstruction_is_a_standing_wave():
    # away from the deltas the PV inverse solves f'' = -kappa^2 f
    kappa, h = 1.3, 1e-3
    f = lambda x: pv_reconstruct(TransformKind.COSINE, 1.0, kappa, x)
    x = 4.0
    fd2 = (f(x + h) - 2 * f(x) + f(x - h)) / h**2
    assert fd2 == pytest.approx(-kappa**2 * f(x), rel=1e-3, abs=1e-4)


def test_nonexistence_rejects_imaginary_kappa():
    with pytest.raises(ValueError):
        positive_energy_nonexistence(1.0, 0.0)


# -- differentiation identities ---------------------------------------------------


def test_corpus_is_frozen():
    assert DIFF_CORPUS_VERSION == "1"
    assert [f.name for f in DIFF_CORPUS] == ["gauss", "x_gauss", "neumann_quartic", "dirichlet_cubic", "mixed"]


@pytest.mark.parametrize("fn", DIFF_CORPUS, ids=lambda f: f.name)
def test_differentiation_identities(fn):
    rs, rc = differentiation_residuals(fn, np.linspace(0.0, 10.0, 21))
    assert np.max(np.abs(rs)) <= 1e-7
    assert np.max(np.abs(rc)) <= 1e-7


def test_differentiation_negative_control():
    # a wrong second derivative must show up in the residual
    fn = TestFunction("gauss", (1.0,))
    broken = TestFunction("gauss", (1.0,))
    object.__setattr__(broken, "d2f", lambda x: fn.d2f(x) * 1.001)
    rs, rc = differentiation_residuals(broken, [1.0, 2.0])
    assert max(np.max(np.abs(rs)), np.max(np.abs(rc))) > 1e-5


def test_test_function_derivatives():
    fn = DIFF_CORPUS[2]
    h = 1e-5
    for x in (0.2, 1.1):
        assert fn.df(x) == pytest.approx((fn.f(x + h) - fn.f(x - h)) / (2 * h), rel=1e-8)
        assert fn.d2f(x) == pytest.approx((fn.df(x + h) - fn.df(x - h)) / (2 * h), rel=1e-7)


def test_wavefn_for_missing_state():
    with pytest.raises(ValueError):
        wavefn_for(Parity.ODD, 1.5)
