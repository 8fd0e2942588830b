"""Command-line front end.

Config files are flat ``key = value`` text; command-line flags override
file values.  Every mode writes CSV (to ``--out`` or stdout) with ``#``
header lines recording the resolved configuration, and prints a summary to
stderr.

Exit codes::

    0  success
    2  usage error (argparse)
    3  missing required key
    4  invalid value
    5  unknown mode
    6  solver did not converge / cross-check failed
    7  I/O error
"""
from __future__ import annotations

import argparse
import configparser
import csv
import io
import math
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import gpe, radial_bvp, zero_energy
from .params import PhysicalParams, trap_length
from .quadrature import QuadratureError
from .zero_energy import ZeroEnergyConfig

EXIT_OK = 0
EXIT_MISSING_KEY = 3
EXIT_INVALID_VALUE = 4
EXIT_UNKNOWN_MODE = 5
EXIT_NOT_CONVERGED = 6
EXIT_IO = 7

MODES = ("analytic", "bvp", "energy", "gpe", "sweep")
SWEEP_EPS = (0.0005, 0.001, 0.005, 0.01)
SWEEP_PI = 0.01
SWEEP_R_INNER = 0.1
SWEEP_R_OUTER = 1.0
DEFAULT_GRID_POINTS = 2001
DEFAULT_TOL = {"energy": 1e-10, "gpe": 1e-8}
# numeric-vs-closed-form bound: |gap| <= C h^2 (eps R^2 + |Pi|)
CROSS_CHECK_CONSTANT = 10.0

_KEYS = (
    "mode", "r_inner", "r_outer", "eps", "pi", "grid_points", "tol", "cross_check",
    "out", "g", "omega", "n_atoms", "box_half_width", "max_iters",
)


class ConfigError(Exception):
    def __init__(self, message: str, exit_code: int):
        super().__init__(message)
        self.exit_code = exit_code


@dataclass(frozen=True)
class GpeSettings:
    coupling: float
    particle_number: float
    trap_frequency: float = 1.0
    half_width: Optional[float] = None
    max_iters: int = 100_000


@dataclass(frozen=True)
class RunConfig:
    mode: str
    zero_energy: Optional[ZeroEnergyConfig] = None
    gpe: Optional[GpeSettings] = None
    grid_points: int = DEFAULT_GRID_POINTS
    output_path: Optional[str] = None
    tolerance: float = 1e-10
    eps_values: tuple[float, ...] = ()
    cross_check: bool = False
    defaulted: tuple[str, ...] = field(default=())
    resolved: dict = field(default_factory=dict, compare=False)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zerogpe",
        description="Zero-energy radial solutions, curvature energy audit and 1D GPE ground states.",
    )
    ap.add_argument("--mode", help="one of: " + ", ".join(MODES))
    ap.add_argument("--config", help="flat key = value config file")
    ap.add_argument("--r-inner", dest="r_inner")
    ap.add_argument("--r-outer", dest="r_outer")
    ap.add_argument("--eps", action="append", help="source strength; repeat for several")
    ap.add_argument("--pi", help="outer boundary amplitude")
    ap.add_argument("--grid-points", dest="grid_points")
    ap.add_argument("--tol")
    ap.add_argument("--cross-check", dest="cross_check", action="store_const", const="true")
    ap.add_argument("--out", help="output CSV path (default: stdout)")
    ap.add_argument("--g", help="1D coupling constant")
    ap.add_argument("--omega", help="trap angular frequency")
    ap.add_argument("--n-atoms", dest="n_atoms")
    ap.add_argument("--box-half-width", dest="box_half_width")
    ap.add_argument("--max-iters", dest="max_iters")
    return ap


def read_config_file(path: str) -> dict[str, str]:
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}", EXIT_IO) from exc
    try:
        parser.read_string("[run]\n" + text, source=path)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}", EXIT_INVALID_VALUE) from exc
    raw = {k.replace("-", "_"): v.strip().strip('"').strip("'") for k, v in parser["run"].items()}
    unknown = sorted(set(raw) - set(_KEYS))
    if unknown:
        raise ConfigError(f"unknown config key '{unknown[0]}'", EXIT_INVALID_VALUE)
    return raw


def _float(raw: dict, key: str, positive: bool = False, nonnegative: bool = False) -> float:
    try:
        value = float(raw[key])
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': {raw[key]!r}", EXIT_INVALID_VALUE) from None
    if not math.isfinite(value):
        raise ConfigError(f"invalid value for '{key}': must be finite", EXIT_INVALID_VALUE)
    if positive and not value > 0:
        raise ConfigError(f"invalid value for '{key}': must be > 0", EXIT_INVALID_VALUE)
    if nonnegative and value < 0:
        raise ConfigError(f"invalid value for '{key}': must be >= 0", EXIT_INVALID_VALUE)
    return value


def _int(raw: dict, key: str, minimum: int) -> int:
    try:
        value = int(raw[key])
    except ValueError:
        raise ConfigError(f"invalid value for '{key}': {raw[key]!r}", EXIT_INVALID_VALUE) from None
    if value < minimum:
        raise ConfigError(f"invalid value for '{key}': must be >= {minimum}", EXIT_INVALID_VALUE)
    return value


def _eps_list(text: str) -> tuple[float, ...]:
    out = []
    for item in text.replace(";", ",").split(","):
        item = item.strip()
        if not item:
            continue
        try:
            out.append(float(item))
        except ValueError:
            raise ConfigError(f"invalid value for 'eps': {item!r}", EXIT_INVALID_VALUE) from None
    if not out:
        raise ConfigError("invalid value for 'eps': empty list", EXIT_INVALID_VALUE)
    for v in out:
        if not (math.isfinite(v) and v >= 0):
            raise ConfigError(f"invalid value for 'eps': {v} must be >= 0", EXIT_INVALID_VALUE)
    return tuple(out)


def _require(raw: dict, key: str, mode: str) -> None:
    if key not in raw:
        raise ConfigError(f"missing required key '{key}' for mode '{mode}'", EXIT_MISSING_KEY)


def parse_config(argv: Optional[Sequence[str]] = None) -> RunConfig:
    """Merge config file and flags into a validated :class:`RunConfig`.

    Raises :class:`ConfigError` whose ``exit_code`` distinguishes missing
    keys, invalid values and unknown modes.
    """
    args = build_parser().parse_args(argv)
    raw: dict[str, str] = {}
    if args.config:
        raw.update(read_config_file(args.config))
    for key in _KEYS:
        value = getattr(args, key, None)
        if value is None:
            continue
        raw[key] = ",".join(value) if key == "eps" else value

    if "mode" not in raw:
        raise ConfigError("missing required key 'mode'", EXIT_MISSING_KEY)
    mode = raw["mode"].strip().lower()
    if mode not in MODES:
        raise ConfigError(f"unknown mode '{raw['mode']}' (expected one of {', '.join(MODES)})", EXIT_UNKNOWN_MODE)

    defaulted = []
    if mode == "sweep":
        for key, value in (
            ("r_inner", SWEEP_R_INNER),
            ("r_outer", SWEEP_R_OUTER),
            ("pi", SWEEP_PI),
            ("eps", ",".join(repr(e) for e in SWEEP_EPS)),
        ):
            if key not in raw:
                raw[key] = str(value)
                defaulted.append(key)
    if "grid_points" not in raw:
        raw["grid_points"] = str(DEFAULT_GRID_POINTS)
        defaulted.append("grid_points")
    if "tol" not in raw:
        raw["tol"] = repr(DEFAULT_TOL.get(mode, 1e-10))
        defaulted.append("tol")

    grid_points = _int(raw, "grid_points", 3)
    tolerance = _float(raw, "tol", positive=True)
    cross_check = raw.get("cross_check", "false").strip().lower() in ("1", "true", "yes", "on")

    zcfg = None
    eps_values: tuple[float, ...] = ()
    gset = None
    if mode in ("analytic", "bvp", "energy", "sweep"):
        for key in ("r_inner", "r_outer", "pi", "eps"):
            _require(raw, key, mode)
        r_inner = _float(raw, "r_inner", positive=True)
        r_outer = _float(raw, "r_outer", positive=True)
        if not r_inner < r_outer:
            raise ConfigError(
                f"invalid value for 'r_inner': must be < r_outer ({r_inner} >= {r_outer})",
                EXIT_INVALID_VALUE,
            )
        amp = _float(raw, "pi")
        eps_values = _eps_list(raw["eps"])
        zcfg = ZeroEnergyConfig(r_inner, r_outer, eps_values[0], amp)
    else:
        for key in ("g", "n_atoms"):
            _require(raw, key, mode)
        if "omega" not in raw:
            raw["omega"] = "1.0"
            defaulted.append("omega")
        if "max_iters" not in raw:
            raw["max_iters"] = "100000"
            defaulted.append("max_iters")
        gset = GpeSettings(
            coupling=_float(raw, "g", nonnegative=True),
            particle_number=_float(raw, "n_atoms", positive=True),
            trap_frequency=_float(raw, "omega", positive=True),
            half_width=_float(raw, "box_half_width", positive=True) if "box_half_width" in raw else None,
            max_iters=_int(raw, "max_iters", 1),
        )

    return RunConfig(
        mode=mode,
        zero_energy=zcfg,
        gpe=gset,
        grid_points=grid_points,
        output_path=raw.get("out"),
        tolerance=tolerance,
        eps_values=eps_values,
        cross_check=cross_check,
        defaulted=tuple(defaulted),
        resolved=dict(sorted(raw.items())),
    )


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _with_eps(cfg: RunConfig, eps: float) -> ZeroEnergyConfig:
    z = cfg.zero_energy
    return ZeroEnergyConfig(z.inner_radius, z.outer_radius, eps, z.boundary_amplitude)


def cross_check_bound(z: ZeroEnergyConfig, points: int) -> float:
    h = (z.outer_radius - z.inner_radius) / (points - 1)
    return CROSS_CHECK_CONSTANT * h * h * (z.source * z.outer_radius**2 + abs(z.boundary_amplitude))


@dataclass
class Table:
    """CSV payload: header comments, column names and rows."""

    comments: list[str]
    columns: list[str]
    rows: list[list[float]]
    ok: bool = True

    def render(self) -> str:
        buf = io.StringIO()
        for line in self.comments:
            buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([fmt(v) for v in row])
        return buf.getvalue()


def _header(cfg: RunConfig) -> list[str]:
    lines = [f"zerogpe mode={cfg.mode}"]
    lines += [f"{k} = {v}" for k, v in cfg.resolved.items() if k != "out"]
    if cfg.defaulted:
        lines.append("defaulted (artifact choices): " + ", ".join(cfg.defaulted))
    return lines


def _bvp_columns(cfg: RunConfig, columns: list[str], data: list[np.ndarray], log) -> bool:
    ok = True
    for eps in cfg.eps_values:
        z = _with_eps(cfg, eps)
        wf = radial_bvp.solve_bvp(z, cfg.grid_points)
        gap = radial_bvp.max_error(z, wf)
        bound = cross_check_bound(z, cfg.grid_points)
        passed = gap <= bound
        ok = ok and passed
        log(f"cross-check eps={eps:g}: max|bvp - analytic| = {gap:.3e}, bound = {bound:.3e} "
            f"{'ok' if passed else 'FAILED'}")
        columns.append(f"bvp_eps={eps!r}")
        data.append(wf.values)
    return ok


def _profiles(cfg: RunConfig, log, r_name: str) -> Table:
    z = cfg.zero_energy
    r = radial_bvp.RadialGrid(z.inner_radius, z.outer_radius, cfg.grid_points).nodes
    columns = [r_name] + [f"psi_eps={eps!r}" for eps in cfg.eps_values]
    data = [r] + [zero_energy.psi(_with_eps(cfg, eps), r) for eps in cfg.eps_values]
    ok = True
    if cfg.cross_check:
        ok = _bvp_columns(cfg, columns, data, log)
    return Table(_header(cfg), columns, np.column_stack(data).tolist(), ok)


def run_sweep(cfg: RunConfig, log=lambda msg: None) -> Table:
    """Profiles psi(r) for each eps on the grid; radii are in trap-length units."""
    return _profiles(cfg, log, "r_over_lt")


def run_analytic(cfg: RunConfig, log=lambda msg: None) -> Table:
    return _profiles(cfg, log, "r")


def run_bvp(cfg: RunConfig, log=lambda msg: None) -> Table:
    """Numerical profiles, with the closed form and the pointwise error alongside."""
    z = cfg.zero_energy
    r = radial_bvp.RadialGrid(z.inner_radius, z.outer_radius, cfg.grid_points).nodes
    columns = ["r"]
    data = [r]
    for eps in cfg.eps_values:
        zc = _with_eps(cfg, eps)
        num = radial_bvp.solve_bvp(zc, cfg.grid_points).values
        exact = zero_energy.psi(zc, r)
        columns += [f"bvp_eps={eps!r}", f"analytic_eps={eps!r}", f"error_eps={eps!r}"]
        data += [num, exact, num - exact]
        log(f"bvp eps={eps:g}: max error {np.max(np.abs(num - exact)):.3e} "
            f"(h = {(z.outer_radius - z.inner_radius) / (cfg.grid_points - 1):.3e})")
    return Table(_header(cfg), columns, np.column_stack(data).tolist())


def run_energy(cfg: RunConfig, log=lambda msg: None) -> Table:
    """One audit row per eps: quadrature, derived closed form, printed formula, gaps."""
    p = PhysicalParams()
    columns = [
        "r_inner", "r_outer", "eps", "pi", "quadrature", "derived_closed_form",
        "paper_eq8", "gap_quadrature_vs_derived", "gap_quadrature_vs_paper",
    ]
    rows = []
    for eps in cfg.eps_values:
        z = _with_eps(cfg, eps)
        b = zero_energy.energy_audit(z, p, cfg.tolerance)
        rows.append([
            z.inner_radius, z.outer_radius, z.source, z.boundary_amplitude,
            b.quadrature_value, b.derived_closed_form, b.paper_eq8_value,
            b.relative_gap_quadrature_vs_derived, b.relative_gap_quadrature_vs_paper,
        ])
        log(f"energy eps={eps:g} Pi={z.boundary_amplitude:g}: quadrature={b.quadrature_value:.12g} "
            f"derived={b.derived_closed_form:.12g} printed={b.paper_eq8_value:.12g} "
            f"gap(q,d)={b.relative_gap_quadrature_vs_derived:.2e} "
            f"gap(q,printed)={b.relative_gap_quadrature_vs_paper:.2e}")
    return Table(_header(cfg), columns, rows)


def run_gpe(cfg: RunConfig, log=lambda msg: None) -> Table:
    """Ground-state profile ``(x, psi, n)``; a failed solve still yields a table."""
    s = cfg.gpe
    prob = gpe.GpeProblem.harmonic(
        s.coupling, s.particle_number, s.trap_frequency, cfg.grid_points, s.half_width,
    )
    try:
        state = gpe.solve_ground_state(prob, cfg.tolerance, s.max_iters)
    except gpe.GroundStateNotConverged as exc:
        log(f"gpe: {exc}")
        state = exc.state
    rep = state.report
    summary = (
        f"mu={fmt(state.chemical_potential)} E={fmt(state.total_energy)} "
        f"iterations={rep.iterations} residual={rep.final_residual:.3e} "
        f"converged={'true' if rep.converged else 'false'}"
    )
    comments = _header(cfg) + [f"box_half_width = {fmt(prob.grid.r_max)}", summary]
    if s.coupling > 0:
        mu_tf = gpe.thomas_fermi_mu(prob)
        comments.append(f"mu_thomas_fermi={fmt(mu_tf)}")
        summary += f" mu_TF={mu_tf:.10g}"
    summary += f" trap_length={trap_length(prob.params):.10g}"
    log("gpe: " + summary)
    x = prob.x
    v = state.wavefunction.values
    rows = np.column_stack([x, v, v * v]).tolist()
    return Table(comments, ["x", "psi", "density"], rows, rep.converged)


RUNNERS = {
    "sweep": run_sweep,
    "analytic": run_analytic,
    "bvp": run_bvp,
    "energy": run_energy,
    "gpe": run_gpe,
}


def run(cfg: RunConfig, stdout=None, log=None) -> int:
    stdout = stdout if stdout is not None else sys.stdout
    if log is None:
        def log(msg: str) -> None:
            print(msg, file=sys.stderr)
    try:
        table = RUNNERS[cfg.mode](cfg, log)
    except QuadratureError as exc:
        log(f"error: {exc} (best estimate {exc.estimate!r}, error {exc.error!r})")
        return EXIT_NOT_CONVERGED
    except (radial_bvp.SingularSystemError, gpe.StepSizeError) as exc:
        log(f"error: {exc}")
        return EXIT_NOT_CONVERGED

    text = table.render()
    try:
        if cfg.output_path and cfg.output_path != "-":
            with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            stdout.write(text)
    except OSError as exc:
        log(f"error: cannot write output: {exc}")
        return EXIT_IO
    return EXIT_OK if table.ok else EXIT_NOT_CONVERGED


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        cfg = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_VALUE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
