"""Bound states of the symmetric double Dirac delta well.

The closed-form route (quantization conditions, piecewise eigenfunctions and
their sine/cosine transforms) lives in :mod:`quantize`, :mod:`eigen` and
:mod:`transform`; :mod:`oracle` holds the independent numerical checks.
"""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    CANONICAL,
    BoundState,
    Coupling,
    EnergyScale,
    Parity,
    PhysicalParams,
    coupling_from_physical,
    scale_from_physical,
)
from .quantize import Spectrum, solve_even, solve_odd, spectrum  # noqa: E402
from .eigen import build_wavefn  # noqa: E402
from .transform import analytic_transform  # noqa: E402

__all__ = [
    "CANONICAL",
    "BoundState",
    "Coupling",
    "EnergyScale",
    "Parity",
    "PhysicalParams",
    "Spectrum",
    "analytic_transform",
    "build_wavefn",
    "coupling_from_physical",
    "scale_from_physical",
    "solve_even",
    "solve_odd",
    "spectrum",
]
