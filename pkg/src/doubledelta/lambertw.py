"""Real Lambert W (branches 0 and -1) by Halley iteration on ``w * exp(w) = z``.

Used only as an independent closed-form oracle for the quantization roots,
never as the primary solver.
"""

from __future__ import annotations

import math

_INV_E = math.exp(-1.0)


def _branch_point_series(z: float, sign: int) -> float:
    # Series around z = -1/e in p = sqrt(2 (e z + 1)); sign=+1 for W0, -1 for W-1.
    p = sign * math.sqrt(max(2.0 * (math.e * z + 1.0), 0.0))
    return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p**3


def _halley(z: float, w: float, max_iter: int = 100) -> float:
    for _ in range(max_iter):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            return w
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 4e-16 * (1.0 + abs(w)):
            break
    return w


def lambertw(z: float, branch: int = 0) -> float:
    """Real value of ``W_branch(z)`` for ``branch`` in {0, -1}.

    W0 is real for ``z >= -1/e``; W-1 for ``-1/e <= z < 0``.
    """
    z = float(z)
    if branch not in (0, -1):
        raise ValueError("only branches 0 and -1 are real")
    if z < -_INV_E:
        # tolerate rounding right at the branch point
        if z < -_INV_E * (1.0 + 1e-15):
            raise ValueError(f"W is not real for z < -1/e (z={z!r})")
        return -1.0
    if branch == -1 and z >= 0.0:
        raise ValueError("W_{-1} is real only for -1/e <= z < 0")
    if z == 0.0:
        return 0.0

    if branch == 0:
        if z < -0.25:
            w = _branch_point_series(z, +1)
        elif z < 3.0:
            w = math.log1p(z)
        else:
            lz = math.log(z)
            w = lz - math.log(lz)
    else:
        if z < -0.25:
            w = _branch_point_series(z, -1)
        else:
            lz = math.log(-z)
            w = lz - math.log(-lz)
    return _halley(z, w)
