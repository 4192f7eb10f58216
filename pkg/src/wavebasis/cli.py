"""Command-line front end.

Every command writes one table (CSV or JSON) to ``--out`` or stdout.  CSV
files start with a ``# wavebasis <version>`` line followed by one header line
naming columns and units.  Divergent values are written as ``inf``/``-inf``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure (including
a failing acceptance check in ``compare``).
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConfigError, DomainError, ForbiddenRegionError, NoTurningPointError, NumericalError, PreconditionError
from .profiles import (
    HardWall,
    Harmonic,
    KsqProfile,
    PowerLaw,
    SingularPowerLaw,
    load_potential,
    turning_point,
)

log = logging.getLogger("wavebasis")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3
_CONFIG_ERRORS = (ConfigError, DomainError, PreconditionError, NoTurningPointError, ForbiddenRegionError)
ENERGY = "energy"
LENGTH = "length"


@dataclass
class Table:
    columns: list
    units: list
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunConfig:
    """Validated options shared by all commands."""

    command: str
    profile: KsqProfile | None
    n_max: int
    grid_points: int | None
    x_max: float | None
    segments: int
    out: str | None
    fmt: str

    @classmethod
    def from_args(cls, args) -> "RunConfig":
        profile = _profile_from_args(args)
        n_max = getattr(args, "n_max", 0)
        if n_max < 0:
            raise ConfigError("--n-max must be non-negative")
        grid_points = getattr(args, "grid_points", None)
        if grid_points is not None and grid_points < 64:
            raise ConfigError("--grid-points must be at least 64")
        x_max = getattr(args, "x_max", None)
        if x_max is not None and not x_max > 0:
            raise ConfigError("--x-max must be positive")
        segments = getattr(args, "segments", 1024)
        if segments < 1:
            raise ConfigError("--segments must be at least 1")
        return cls(args.command, profile, n_max, grid_points, x_max, segments, args.out, args.format)


# --------------------------------------------------------------------------
# formatting


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        if math.isnan(v):
            return "nan"
        return v
    if isinstance(v, dict):
        return {k: _json_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple, np.ndarray)):
        return [_json_value(x) for x in v]
    return v


def render(table: Table, fmt: str) -> str:
    if fmt == "json":
        doc = {
            "version": __version__,
            "columns": [{"name": c, "unit": u} for c, u in zip(table.columns, table.units)],
            "rows": [[_json_value(v) for v in row] for row in table.rows],
        }
        if table.meta:
            doc["meta"] = _json_value(table.meta)
        return json.dumps(doc, indent=2) + "\n"
    lines = [f"# wavebasis {__version__}"]
    lines.append(",".join(f"{c} [{u}]" for c, u in zip(table.columns, table.units)))
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# profile construction


def _profile_from_args(args) -> KsqProfile | None:
    kind = getattr(args, "potential", None)
    spec = getattr(args, "spec", None)
    if spec is not None and kind is not None:
        raise ConfigError("give either --potential or --spec, not both")
    if spec is not None:
        return load_potential(spec)
    if kind is None:
        return None
    if kind == "power_law":
        return KsqProfile(PowerLaw(args.U, args.alpha))
    if kind == "quarkonium":
        return KsqProfile(PowerLaw(args.U, 1.0))
    if kind == "singular":
        return KsqProfile(SingularPowerLaw(args.U, args.beta))
    if kind == "harmonic":
        return KsqProfile(Harmonic(args.omega))
    if kind == "hard_wall":
        return KsqProfile(HardWall(args.half_width))
    raise ConfigError(f"unknown potential {kind!r}")


def _require_profile(cfg: RunConfig) -> KsqProfile:
    if cfg.profile is None:
        raise ConfigError(f"{cfg.command} needs --potential or --spec")
    return cfg.profile


def _oracle_kwargs(cfg: RunConfig) -> dict:
    from .oracle import Grid

    if cfg.x_max is not None:
        return {"grid": Grid(0.0, cfg.x_max, cfg.grid_points or 20000)}
    if cfg.grid_points is not None:
        return {"points_per_xi": cfg.grid_points}
    return {}


def _closed_form(profile: KsqProfile, n: int) -> float:
    from .spectra import infinite_well_energy, power_law_energy, singular_energy

    pot, sc = profile.potential, profile.scales
    if isinstance(pot, PowerLaw):
        return power_law_energy(pot.U, pot.alpha, n, sc)
    if isinstance(pot, SingularPowerLaw):
        return singular_energy(pot.U, pot.beta, n, sc)
    if isinstance(pot, HardWall):
        return infinite_well_energy(n, sc, pot.half_width)
    return math.nan


# --------------------------------------------------------------------------
# commands


def cmd_spectrum(cfg: RunConfig, args) -> Table:
    from .oracle import numerov_eigensolve
    from .spectra import QuantizationRule, RuleKind, solve_quantization

    profile = _require_profile(cfg)
    hard = isinstance(profile.potential, HardWall)
    ns = range(1, cfg.n_max + 1) if hard else range(0, cfg.n_max + 1)
    shift = 0 if hard else None
    primary = QuantizationRule(RuleKind(args.rule), shift)
    wkb = QuantizationRule(RuleKind.WKB, shift)
    table = Table(
        ["n", "E_closed_form", "E_quantization_root", "E_wkb_rule", "E_oracle", "rel_err_vs_oracle", "ratio_vs_oracle"],
        ["1", ENERGY, ENERGY, ENERGY, ENERGY, "1", "1"],
    )
    okw = _oracle_kwargs(cfg)
    for n in ns:
        closed = _closed_form(profile, n)
        root = solve_quantization(profile, primary, n).E
        e_wkb = solve_quantization(profile, wkb, n).E
        e_or = numerov_eigensolve(profile, n=n - 1 if hard else n, **okw).E
        ref = closed if math.isfinite(closed) else root
        table.rows.append([n, closed, root, e_wkb, e_or, abs(ref - e_or) / abs(e_or), ref / e_or])
    return table


def _sentinel_mask(x, xi):
    return np.abs(np.abs(x) - xi) < 1e-8 * max(1.0, xi)


def cmd_wavefunction(cfg: RunConfig, args) -> Table:
    from .bases import AiryImproved, BasisKind, eval_basis, solution_from_ic
    from .oracle import numerov_eigensolve

    profile = _require_profile(cfg)
    n = args.n
    if n < 0:
        raise ConfigError("--n must be non-negative")
    res = numerov_eigensolve(profile, n=n, **_oracle_kwargs(cfg))
    if args.energy == "oracle":
        E = res.E
    else:
        E = _closed_form(profile, n)
        if not math.isfinite(E):
            raise ConfigError("no closed-form energy for this potential; use --energy oracle")
    xi = turning_point(profile, E).xi
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    x = np.linspace(-xi, xi, args.samples)
    u0, up0 = (1.0, 0.0) if n % 2 == 0 else (0.0, 1.0)
    kinds = args.basis or ["new", "simple-wkb", "wkb"]
    names = {"new": "u_new_bases", "simple-wkb": "u_simple_wkb", "wkb": "u_improved_wkb"}
    cols = [("x", LENGTH, x), ("u_oracle", "1", res.trace(x))]
    for name in kinds:
        if name == "airy":
            # Airy pair anchored at the nearer turning point of the even profile
            ev = eval_basis(AiryImproved(xi), profile, E, np.abs(x))
            cols.append(("airy_ai", "1", np.asarray(ev.C, dtype=float)))
            cols.append(("airy_bi", "1", np.asarray(ev.S, dtype=float)))
            continue
        kind = BasisKind(name)
        u = np.asarray(solution_from_ic(kind, profile, E, u0, up0, x), dtype=float)
        if kind is BasisKind.WKB:
            u = np.where(_sentinel_mask(x, xi), np.copysign(np.inf, np.where(u == 0, 1.0, u)), u)
        cols.append((names[name], "1", u))
    table = Table([c[0] for c in cols], [c[1] for c in cols])
    table.rows = [list(r) for r in zip(*(c[2] for c in cols))]
    return table


def _dispersion_cell(cfg: RunConfig, args):
    from .bloch import PeriodicProfile

    if cfg.profile is not None:
        return PeriodicProfile(cfg.profile, E=args.energy)
    return PeriodicProfile.two_layer(args.k1, args.a, args.k2, args.b)


def cmd_dispersion(cfg: RunConfig, args) -> Table:
    from .bloch import kappa_exact, kappa_new, kappa_wkb

    cell = _dispersion_cell(cfg, args)
    if args.drive_points < 1 or not (0 < args.drive_min <= args.drive_max):
        raise ConfigError("need 0 < --drive-min <= --drive-max and --drive-points >= 1")
    drives = np.linspace(args.drive_min, args.drive_max, args.drive_points)
    table = Table(["drive", "kappa_re", "kappa_im", "method"], ["1", f"1/{LENGTH}", f"1/{LENGTH}", "-"])
    for d in drives:
        p = cell.with_drive(float(d))
        points = [kappa_new(p)]
        try:
            points.append(kappa_wkb(p))
        except ForbiddenRegionError:
            log.warning("k^2 < 0 in the cell at drive %g; WKB dispersion skipped", d)
        points.append(kappa_exact(p, cfg.segments))
        for pt in points:
            table.rows.append([pt.drive, pt.kappa_re, pt.kappa_im, pt.method])
    return table


def cmd_dtmm_propagate(cfg: RunConfig, args) -> Table:
    from .dtmm import ComplexCoefficient, StateVector4, piecewise_propagate, propagate

    if cfg.profile is not None:
        f = ComplexCoefficient.from_profile(cfg.profile, args.energy)
    else:
        f = ComplexCoefficient.constant(complex(args.f_re, args.f_im))
    if not args.b > args.a:
        raise ConfigError("need --b > --a")
    if args.samples < 2:
        raise ConfigError("--samples must be at least 2")
    x = np.linspace(args.a, args.b, args.samples)
    state = StateVector4(args.u0, args.v0, args.du0, args.dv0)
    per = max(1, cfg.segments // (args.samples - 1))
    table = Table(["x", "u", "v", "du", "dv"], [LENGTH, "1", "1", f"1/{LENGTH}", f"1/{LENGTH}"])
    table.rows.append([x[0], state.u, state.v, state.du, state.dv])
    for lo, hi in zip(x[:-1], x[1:]):
        state = propagate(piecewise_propagate(f, float(lo), float(hi), per), state)
        table.rows.append([hi, state.u, state.v, state.du, state.dv])
    return table


def cmd_compare(cfg: RunConfig, args) -> tuple:
    from .acceptance import run_suite

    results = run_suite()
    for r in results:
        log.info(r.line())
    doc = {
        "version": __version__,
        "suite": args.suite,
        "passed": all(r.passed for r in results),
        "criteria": [r.to_dict() for r in results],
    }
    return json.dumps(_json_value(doc), indent=2) + "\n", doc["passed"]


# --------------------------------------------------------------------------
# argument parsing


def _add_potential(p):
    g = p.add_argument_group("potential")
    g.add_argument(
        "--potential",
        choices=["power_law", "quarkonium", "singular", "harmonic", "hard_wall"],
        help="built-in potential family",
    )
    g.add_argument("--spec", metavar="JSON", help="potential description file (alternative to --potential)")
    g.add_argument("--U", type=float, default=1.0, help="strength U (default: 1)")
    g.add_argument("--alpha", type=float, default=2.0, help="power-law exponent (default: 2)")
    g.add_argument("--beta", type=float, default=0.5, help="singular exponent, 0 < beta < 1 (default: 0.5)")
    g.add_argument("--omega", type=float, default=1.0, help="harmonic frequency (default: 1)")
    g.add_argument("--half-width", type=float, default=1.0, help="hard-wall half width (default: 1)")


def _add_grid(p):
    g = p.add_argument_group("oracle grid")
    g.add_argument(
        "--grid-points",
        type=int,
        help="oracle points per turning-point distance, or total points with --x-max (default: 2000 per xi)",
    )
    g.add_argument("--x-max", type=float, help="fixed oracle truncation (default: 3 xi, doubled until decayed)")


def _add_output(p):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["csv", "json"], default="csv", help="output format (default: csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wavebasis",
        description="Turning-point-safe bases, transfer matrices, spectra and Bloch dispersion for u'' + k^2 u = 0. "
        "Units: hbar = 1, m = 1/2 unless a --spec file sets scales.",
    )
    parser.add_argument("--version", action="version", version=f"wavebasis {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="closed-form, quantization-root, WKB-rule and oracle energies")
    _add_potential(p)
    _add_grid(p)
    p.add_argument("--n-max", type=int, default=3, help="highest state index (default: 3)")
    p.add_argument("--rule", choices=["new", "wkb"], default="new", help="rule for E_quantization_root (default: new)")
    _add_output(p)

    p = sub.add_parser("wavefunction", help="basis traces against the oracle on [-xi, xi]")
    _add_potential(p)
    _add_grid(p)
    p.add_argument("--n", type=int, default=0, help="state index (default: 0)")
    p.add_argument("--energy", choices=["oracle", "closed"], default="oracle", help="energy used by the bases")
    p.add_argument("--samples", type=int, default=201, help="number of x samples (default: 201)")
    p.add_argument(
        "--basis",
        action="append",
        choices=["new", "wkb", "simple-wkb", "airy"],
        help="basis column to emit; repeatable (default: new, simple-wkb, wkb)",
    )
    _add_output(p)

    p = sub.add_parser("dispersion", help="Bloch dispersion of a periodic cell")
    _add_potential(p)
    p.add_argument("--k1", type=float, default=1.0, help="two-layer cell: first-layer wavenumber (default: 1)")
    p.add_argument("--a", type=float, default=1.0, help="two-layer cell: first-layer thickness (default: 1)")
    p.add_argument("--k2", type=float, default=3.0, help="two-layer cell: second-layer wavenumber (default: 3)")
    p.add_argument("--b", type=float, default=1.0, help="two-layer cell: second-layer thickness (default: 1)")
    p.add_argument("--energy", type=float, default=0.0, help="energy for --spec cells (default: 0)")
    p.add_argument("--drive-min", type=float, default=0.01, help="smallest drive (default: 0.01)")
    p.add_argument("--drive-max", type=float, default=1.0, help="largest drive (default: 1)")
    p.add_argument("--drive-points", type=int, default=100, help="number of drives (default: 100)")
    p.add_argument("--segments", type=int, default=1024, help="segments per period (default: 1024)")
    _add_output(p)

    p = sub.add_parser("dtmm-propagate", help="propagate (u, v, u', v') with the transfer matrix")
    _add_potential(p)
    p.add_argument("--energy", type=float, default=0.0, help="energy when f = k^2 of a potential (default: 0)")
    p.add_argument("--f-re", type=float, default=0.0, help="constant Re f without a potential (default: 0)")
    p.add_argument("--f-im", type=float, default=0.0, help="constant Im f without a potential (default: 0)")
    p.add_argument("--a", type=float, default=0.0, help="start (default: 0)")
    p.add_argument("--b", type=float, default=1.0, help="end (default: 1)")
    p.add_argument("--samples", type=int, default=11, help="output points (default: 11)")
    p.add_argument("--segments", type=int, default=1024, help="total transfer-matrix segments (default: 1024)")
    for name, default in (("u0", 1.0), ("v0", 0.0), ("du0", 0.0), ("dv0", 0.0)):
        p.add_argument(f"--{name}", type=float, default=default, help=f"initial {name[:-1]} (default: {default:g})")
    _add_output(p)

    p = sub.add_parser("compare", help="run the acceptance suite and emit one JSON report")
    p.add_argument("--suite", choices=["paper"], default="paper", help="check suite (default: paper)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.set_defaults(format="json")
    return parser


_COMMANDS = {
    "spectrum": cmd_spectrum,
    "wavefunction": cmd_wavefunction,
    "dispersion": cmd_dispersion,
    "dtmm-propagate": cmd_dtmm_propagate,
}


def _configure_logging():
    level = os.environ.get("WAVEBASIS_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def _fail(exc: Exception, code: int) -> int:
    sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc), "exit_code": code}) + "\n")
    return code


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.from_args(args)
        if args.command == "compare":
            text, passed = cmd_compare(cfg, args)
            _emit(text, cfg.out)
            return EXIT_OK if passed else EXIT_NUMERICAL
        table = _COMMANDS[args.command](cfg, args)
        _emit(render(table, cfg.fmt), cfg.out)
    except _CONFIG_ERRORS as exc:
        return _fail(exc, EXIT_CONFIG)
    except NumericalError as exc:
        return _fail(exc, EXIT_NUMERICAL)
    except OSError as exc:
        return _fail(exc, EXIT_CONFIG)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
