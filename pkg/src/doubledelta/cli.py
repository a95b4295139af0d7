"""Command-line front end: ``doubledelta <command> [options]``.

Every command writes one table. CSV output starts with a ``#`` line naming
the schema, then a header row; numbers are written as their shortest
round-trip decimal (``repr``), missing values as empty fields. JSON output
carries the same schema tag, columns and rows.

Exit status is 0 on success, 1 when a requested check fails and 2 on invalid
input. Default quadrature tolerances can be overridden with the
``DOUBLEDELTA_REL_TOL`` / ``DOUBLEDELTA_ABS_TOL`` environment variables or the
``--rel-tol`` / ``--abs-tol`` flags (flags win).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .eigen import build_wavefn
from .model import Coupling, PhysicalParams, coupling_from_physical, scale_from_physical, CANONICAL
from .oracle import delta_limit_study
from .quadrature import DEFAULT_QUAD, QuadratureSpec
from .quantize import quantization_curves, residual, spectrum
from .transform import Tabulated, TabulatedCase, closed_form, numeric_integral
from .verify import run_suite

SCHEMA_VERSION = 1
COMMANDS = ("spectrum", "wavefn", "curves", "verify", "limit-study", "integrals")
ENV_REL_TOL = "DOUBLEDELTA_REL_TOL"
ENV_ABS_TOL = "DOUBLEDELTA_ABS_TOL"

# tolerances for the integrals command, matching the regression suite
REGULAR_TOL = 1e-7
PV_TOL = 1e-5


class UsageError(ValueError):
    """Invalid input; maps to exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    a: tuple[float, ...] = ()
    physical: Optional[PhysicalParams] = None
    fmt: str = "csv"
    output: Optional[str] = None
    seed: int = 0
    quad: QuadratureSpec = DEFAULT_QUAD
    # command-specific knobs
    xi_max: float = 3.0
    n: int = 301
    x_max: float = 4.0
    thetas: tuple[float, ...] = (0.4, 0.2, 0.1, 0.05, 0.025)
    per_branch: int = 5
    cases: tuple[TabulatedCase, ...] = field(default_factory=tuple)


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    ok: bool = True
    failures: list[str] = field(default_factory=list)


# -- parsing -------------------------------------------------------------------


def _env_float(name: str, default: float) -> float:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return default
    try:
        return float(raw)
    except ValueError:
        raise UsageError(f"{name}={raw!r} is not a number") from None


def _common(p: argparse.ArgumentParser, multi_a: bool = False) -> None:
    g = p.add_argument_group("coupling (give --a or the physical parameters, not both)")
    if multi_a:
        g.add_argument("--a", type=float, action="append", default=None,
                       help="dimensionless coupling; repeat to overlay several lines")
    else:
        g.add_argument("--a", type=float, default=None, help="dimensionless coupling a = 1/(alpha L)")
    g.add_argument("--alpha", type=float, help="delta strength (physical units)")
    g.add_argument("--hbar", type=float, help="Planck constant (default 1)")
    g.add_argument("--mass", type=float, help="particle mass (default 1/2)")
    g.add_argument("--halfsep", type=float, help="half-separation L (default 1)")


def _output(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.add_argument("--rel-tol", type=float, default=None, help="quadrature relative tolerance")
    p.add_argument("--abs-tol", type=float, default=None, help="quadrature absolute tolerance")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="doubledelta",
        description="Bound states of the symmetric double delta well.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("spectrum", help="bound-state energies")
    _common(p)
    _output(p)

    p = sub.add_parser("wavefn", help="sampled normalized eigenfunctions")
    _common(p)
    _output(p)
    p.add_argument("--x-max", type=float, default=4.0, help="sample on [-x_max, x_max] (units of L)")
    p.add_argument("--n", type=int, default=201)

    p = sub.add_parser("curves", help="both sides of the quantization conditions")
    _common(p, multi_a=True)
    _output(p)
    p.add_argument("--xi-max", type=float, default=3.0)
    p.add_argument("--n", type=int, default=301)

    p = sub.add_parser("verify", help="run the seeded invariant suite")
    _output(p)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("limit-study", help="finite wells shrinking to the delta limit")
    _common(p)
    _output(p)
    p.add_argument("--theta", type=float, action="append", default=None,
                   help="well width in units of L, strictly decreasing; repeatable")

    p = sub.add_parser("integrals", help="tabulated integrals, quadrature vs closed form")
    _output(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--per-branch", type=int, default=5,
                   help="random cases per integral and per side of x = c")
    p.add_argument("--case", nargs=4, action="append", metavar=("NAME", "C", "D", "X"),
                   help="explicit case, e.g. --case A1 1 1 0.5; replaces the random draw")
    return parser


def _physical(ns: argparse.Namespace) -> Optional[PhysicalParams]:
    given = {k: getattr(ns, k, None) for k in ("alpha", "hbar", "mass", "halfsep")}
    if all(v is None for v in given.values()):
        return None
    if given["alpha"] is None:
        raise UsageError("physical parameters need --alpha")
    return PhysicalParams(
        hbar=1.0 if given["hbar"] is None else given["hbar"],
        mass=0.5 if given["mass"] is None else given["mass"],
        alpha=given["alpha"],
        halfsep=1.0 if given["halfsep"] is None else given["halfsep"],
    )


def _parse_case(raw: Sequence[str]) -> TabulatedCase:
    name, *nums = raw
    try:
        which = Tabulated[name.upper()]
    except KeyError:
        raise UsageError(f"unknown integral {name!r}; choose from A1, A2, A3, A4") from None
    try:
        c, d, x = (float(v) for v in nums)
    except ValueError:
        raise UsageError(f"case {' '.join(raw)!r}: C, D, X must be numbers") from None
    return TabulatedCase(which, c, d, x)


def _config(ns: argparse.Namespace) -> RunConfig:
    phys = _physical(ns) if hasattr(ns, "alpha") else None
    a_raw = getattr(ns, "a", None)
    a = tuple(a_raw) if isinstance(a_raw, list) else (() if a_raw is None else (a_raw,))
    if a and phys is not None:
        raise UsageError("--a and the physical parameters (--alpha/--hbar/--mass/--halfsep) are mutually exclusive")
    if phys is not None:
        a = (coupling_from_physical(phys).a,)
    for v in a:
        Coupling(v)
    if ns.command in ("spectrum", "wavefn", "limit-study") and not a:
        raise UsageError(f"{ns.command} needs --a or --alpha")

    rel = ns.rel_tol if ns.rel_tol is not None else _env_float(ENV_REL_TOL, DEFAULT_QUAD.rel_tol)
    abs_ = ns.abs_tol if ns.abs_tol is not None else _env_float(ENV_ABS_TOL, DEFAULT_QUAD.abs_tol)
    cfg = RunConfig(
        command=ns.command,
        a=a,
        physical=phys,
        fmt=ns.fmt,
        output=ns.output,
        seed=getattr(ns, "seed", 0),
        quad=replace(DEFAULT_QUAD, rel_tol=rel, abs_tol=abs_),
    )
    if ns.command == "curves":
        if not ns.xi_max > 0 or ns.n < 2:
            raise UsageError("curves needs --xi-max > 0 and --n >= 2")
        cfg = replace(cfg, xi_max=ns.xi_max, n=ns.n)
    elif ns.command == "wavefn":
        if not ns.x_max > 0 or ns.n < 2:
            raise UsageError("wavefn needs --x-max > 0 and --n >= 2")
        cfg = replace(cfg, x_max=ns.x_max, n=ns.n)
    elif ns.command == "limit-study":
        if ns.theta:
            cfg = replace(cfg, thetas=tuple(ns.theta))
    elif ns.command == "integrals":
        if ns.per_branch < 1:
            raise UsageError("--per-branch must be >= 1")
        cases = tuple(_parse_case(c) for c in ns.case or ())
        cfg = replace(cfg, per_branch=ns.per_branch, cases=cases)
    return cfg


def parse_flags(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Parse ``argv`` into a :class:`RunConfig`.

    argparse problems exit with status 2 directly; semantic problems raise
    :class:`UsageError` (or ``ValueError`` from the parameter types).
    """
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.command is None:
        parser.print_usage(sys.stderr)
        parser.exit(2, "doubledelta: error: a command is required\n")
    return _config(ns)


# -- commands ------------------------------------------------------------------


def _spectrum(cfg: RunConfig) -> Table:
    scale = scale_from_physical(cfg.physical) if cfg.physical else CANONICAL
    spec = spectrum(cfg.a[0], scale)
    t = Table("spectrum", ["parity", "xi", "energy_over_e0", "residual"])
    for s in spec.states:
        t.rows.append([s.parity.value, s.xi, -s.xi * s.xi, residual(s.parity, s.xi, s.a)])
    return t


def _wavefn(cfg: RunConfig) -> Table:
    xs = np.linspace(-cfg.x_max, cfg.x_max, cfg.n)
    t = Table("wavefn", ["parity", "x_over_L", "phi"])
    for s in spectrum(cfg.a[0]).states:
        w = build_wavefn(s)
        for x, v in zip(xs, w(xs)):
            t.rows.append([s.parity.value, float(x), float(v)])
    return t


def _curves(cfg: RunConfig) -> Table:
    table = quantization_curves(cfg.xi_max, cfg.n, cfg.a)
    cols = list(table)
    t = Table("curves", cols)
    for i in range(cfg.n):
        t.rows.append([float(table[c][i]) for c in cols])
    return t


def _verify(cfg: RunConfig) -> Table:
    t = Table("verify", ["check", "value", "tolerance", "status"])
    for r in run_suite(cfg.seed, cfg.quad):
        t.rows.append([r.name, r.value, r.tolerance, r.status])
        if not r.passed:
            t.failures.append(f"{r.name}: {r.value!r} exceeds {r.tolerance!r}")
    t.ok = not t.failures
    return t


def _limit_study(cfg: RunConfig) -> Table:
    a = cfg.a[0]
    if a <= 0:
        raise UsageError("limit-study needs an attractive coupling (a > 0)")
    study = delta_limit_study(1.0 / a, 1.0, cfg.thetas)
    t = Table("limit-study", ["theta", "v0", "parity", "e_well", "e_delta", "gap"])
    for r in study.rows:
        t.rows.append([r.theta, r.v0, r.parity.value, r.e_well, r.e_delta, r.gap])
    for p in study.tracked():
        if not study.monotone(p):
            t.failures.append(f"{p.value} gap to the delta limit is not monotone in theta")
        if not study.converged(p):
            t.failures.append(f"{p.value} gap did not shrink below 1/4 of its first value")
    t.ok = not t.failures
    return t


def _random_cases(cfg: RunConfig) -> list[TabulatedCase]:
    rng = np.random.default_rng(cfg.seed)
    out = []
    for which in Tabulated:
        for lower in (True, False):
            for _ in range(cfg.per_branch):
                c, d = rng.uniform(0.2, 3.0, 2)
                x = rng.uniform(0.05, 0.95 * c) if lower else rng.uniform(1.05 * c, 3 * c + 1)
                out.append(TabulatedCase(which, float(c), float(d), float(x)))
    return out


def _integrals(cfg: RunConfig) -> Table:
    t = Table("integrals", ["case", "c", "d", "x", "numeric", "closed_form", "abs_diff"])
    for case in cfg.cases or _random_cases(cfg):
        num = numeric_integral(case, cfg.quad)
        cf = closed_form(case)
        diff = abs(num - cf)
        t.rows.append([case.which.name, case.c, case.d, case.x, num, cf, diff])
        tol = PV_TOL if case.which.principal_value else REGULAR_TOL
        if not diff <= tol:
            t.failures.append(f"{case.which.name}(c={case.c!r}, d={case.d!r}, x={case.x!r}): "
                              f"|numeric - closed form| = {diff!r} > {tol!r}")
    t.ok = not t.failures
    return t


_RUNNERS = {
    "spectrum": _spectrum,
    "wavefn": _wavefn,
    "curves": _curves,
    "verify": _verify,
    "limit-study": _limit_study,
    "integrals": _integrals,
}


# -- output --------------------------------------------------------------------


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    return v


def render(t: Table, fmt: str) -> str:
    tag = f"doubledelta/{t.name}/v{SCHEMA_VERSION}"
    if fmt == "json":
        doc = {"schema": tag, "columns": t.columns,
               "rows": [[_json_value(v) for v in row] for row in t.rows]}
        return json.dumps(doc, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(f"# schema={tag}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(t.columns)
    for row in t.rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def run(cfg: RunConfig) -> int:
    """Execute ``cfg`` and write its table; returns the exit status."""
    t = _RUNNERS[cfg.command](cfg)
    text = render(t, cfg.fmt)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in t.failures:
        print(f"doubledelta: check failed: {msg}", file=sys.stderr)
    return 0 if t.ok else 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_flags(argv)
        return run(cfg)
    except (UsageError, ValueError) as exc:
        print(f"doubledelta: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
