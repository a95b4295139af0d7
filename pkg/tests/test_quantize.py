import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import brentq

from doubledelta.model import Coupling, Parity
from doubledelta.quantize import (
    BracketError,
    SolverSpec,
    f_even,
    f_odd,
    level_splitting,
    log_level_splitting,
    quantization_curves,
    residual,
    solve_even,
    solve_odd,
    spectrum,
    xi_even_lambert,
    xi_odd_lambert,
)

# 30-digit roots from mpmath.findroot, rounded to double
FROZEN = {
    0.25: (2.0342088620714974317, 1.9603451974364431718),
    0.5: (1.1088575528785450554, 0.79681213002002004616),
    0.75: (0.8009963890900004361, 0.30292998895950017009),
    1.5: (0.46488222063100823795, None),
}

couplings = st.floats(min_value=1e-2, max_value=1e2)


@pytest.mark.parametrize("a", sorted(FROZEN))
def test_frozen_roots(a):
    even, odd = FROZEN[a]
    assert solve_even(a) == pytest.approx(even, rel=4e-16)
    if odd is None:
        assert solve_odd(a) is None
    else:
        assert solve_odd(a) == pytest.approx(odd, rel=4e-16)


def test_counts():
    assert [s.parity for s in spectrum(1.5).states] == [Parity.EVEN]
    assert [s.parity for s in spectrum(0.25).states] == [Parity.EVEN, Parity.ODD]
    assert spectrum(-1.0).count == 0
    assert spectrum(-1e-3).ground is None


def test_threshold_is_strict():
    assert solve_odd(1.0) is None
    assert solve_odd(np.nextafter(1.0, 0.0)) is not None
    assert solve_odd(1.0 + 1e-12) is None


def test_odd_root_near_threshold_is_small_but_positive():
    # near a = 1 the root behaves like 1 - a; reference from mpmath.findroot
    a = 1.0 - 1e-6
    xi = solve_odd(a)
    assert 0 < xi < 1e-5
    assert xi == pytest.approx(1.000000666667222e-06, rel=1e-9)


def test_repulsive_solvers_raise():
    with pytest.raises(ValueError):
        solve_even(-1.0)
    with pytest.raises(ValueError):
        solve_odd(-1.0)
    with pytest.raises(ValueError):
        solve_even(0.0)


def test_accepts_coupling_objects():
    assert solve_even(Coupling(0.5)) == solve_even(0.5)


@given(couplings)
@settings(max_examples=200, deadline=None)
def test_residual_certificate(a):
    xe = solve_even(a)
    assert abs(residual(Parity.EVEN, xe, a)) <= 1e-11
    xo = solve_odd(a)
    if a < 1:
        assert abs(residual(Parity.ODD, xo, a)) <= 1e-11
        # in the degenerate limit the two roots coincide to double precision
        assert 0 < xo <= xe
    else:
        assert xo is None


@given(couplings)
@settings(max_examples=200, deadline=None)
def test_matches_lambert_w(a):
    assert solve_even(a) == pytest.approx(xi_even_lambert(a), abs=1e-10)
    if a < 1:
        assert solve_odd(a) == pytest.approx(xi_odd_lambert(a), abs=1e-10)
    else:
        assert xi_odd_lambert(a) is None


@pytest.mark.parametrize("a", [0.02, 0.1, 0.3, 0.9, 2.0, 50.0])
def test_matches_scipy_brentq(a):
    ref = brentq(lambda x: f_even(x, a), 1e-12, 1 / a + 1, xtol=1e-15)
    assert solve_even(a) == pytest.approx(ref, abs=1e-12)
    if a < 1:
        ref = brentq(lambda x: f_odd(x, a), 1e-9, 1 / (2 * a) + 1, xtol=1e-15)
        assert solve_odd(a) == pytest.approx(ref, abs=1e-12)


def test_small_a_odd_root_where_endpoint_rounds():
    # for a ~ 1e-2 the root is within an ulp of 1/(2a)
    a = 0.012980324238513395
    xi = solve_odd(a)
    assert xi == pytest.approx(1 / (2 * a), rel=1e-15)


def test_monotone_in_a():
    grid = np.linspace(0.05, 0.95, 30)
    assert np.all(np.diff([solve_even(a) for a in grid]) < 0)
    assert np.all(np.diff([solve_odd(a) for a in grid]) < 0)


def test_level_splitting_identity_and_limit():
    a = 0.5
    assert level_splitting(a) == pytest.approx(solve_even(a) - solve_odd(a), rel=1e-9)
    assert math.log(level_splitting(0.3)) == pytest.approx(log_level_splitting(0.3), rel=1e-12)
    assert log_level_splitting(1e-3) < log_level_splitting(1e-2) < log_level_splitting(0.1)
    with pytest.raises(ValueError):
        level_splitting(1.5)


def test_raw_difference_underflows_where_log_form_does_not():
    # negative control: the naive difference is not usable in the degenerate limit
    assert solve_even(1e-2) - solve_odd(1e-2) == 0.0
    assert math.isfinite(log_level_splitting(1e-2))


def test_bisection_detects_bad_bracket():
    from doubledelta.quantize import _bisect

    with pytest.raises(BracketError):
        _bisect(lambda x: x * x + 1, -1.0, 1.0, SolverSpec())


def test_solver_spec_validation():
    with pytest.raises(ValueError):
        SolverSpec(abs_tol=0)
    with pytest.raises(ValueError):
        SolverSpec(max_iter=0)


def test_unpolished_still_accurate():
    spec = SolverSpec(polish=False)
    assert solve_even(0.5, spec) == pytest.approx(FROZEN[0.5][0], abs=1e-14)


def test_quantization_curves_columns():
    t = quantization_curves(4.0, 401, [1.5, 0.25])
    assert list(t) == ["xi", "even_rhs", "odd_rhs", "line_a=1.5", "line_a=0.25"]
    assert t["xi"][-1] == 4.0 and len(t["xi"]) == 401
    assert np.allclose(t["even_rhs"] + t["odd_rhs"], 2.0)
    # the a = 3/2 line crosses only the even curve
    d_even = t["line_a=1.5"] - t["even_rhs"]
    d_odd = t["line_a=1.5"][1:] - t["odd_rhs"][1:]
    assert np.count_nonzero(np.diff(np.sign(d_even))) == 1
    assert np.all(d_odd > 0)
    with pytest.raises(ValueError):
        quantization_curves(0.0, 10)
    with pytest.raises(ValueError):
        quantization_curves(1.0, 1)
