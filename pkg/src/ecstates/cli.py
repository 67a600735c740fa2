"""Command-line interface.

Subcommands write CSV (default) or JSON to standard output or ``--out``.
Exit status: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from . import closed_form as cf
from . import moments as mo
from .closed_form import GridSpec
from .errors import ECSError
from .params import ECSParams, OscillatorConfig

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

COLUMNS_HELP = """\
CSV columns
  density       m, beta, alpha, t, eps, density, re_psi, im_psi[, density_m1]
  width         m, beta, alpha, t, delta_x, ratio_x, delta_p, product, mean_x
  squeeze-scan  m, beta, alpha, min_ratio, max_ratio, squeezed, margin
  verify        check_name, residual, tolerance, pass
Every file starts with a header row.  Numbers carry 15 significant digits.
"""


@dataclass
class RunConfig:
    subcommand: str
    m: int = 0
    betas: list = field(default_factory=list)
    phi: float = 0.0
    oscillator: OscillatorConfig = field(default_factory=OscillatorConfig)
    grid: GridSpec = field(default_factory=GridSpec)
    t_min: float = 0.0
    t_max: float | None = None
    t_steps: int = 1
    trunc_dim: int | None = None
    rel_tol: float = 1e-7
    output: str = "csv"
    out_path: str | None = None
    paper_literal: bool = False
    m_given: bool = False

    @property
    def beta(self) -> float:
        return self.betas[0]

    def params(self, beta=None) -> ECSParams:
        return ECSParams.from_beta(self.m, self.beta if beta is None else beta, self.phi)

    def times(self) -> np.ndarray:
        t_max = self.oscillator.period if self.t_max is None else self.t_max
        if self.t_steps == 1:
            return np.array([self.t_min])
        return np.linspace(self.t_min, t_max, self.t_steps)


@dataclass
class Table:
    columns: list
    rows: list
    meta: dict = field(default_factory=dict)


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    value = float(value)
    if value == 0:
        value = 0.0  # drop the sign of negative zero
    return format(value, ".15g")


def _param_cols(cfg, beta):
    return [cfg.m, beta, math.sqrt(beta)]


def cmd_density(cfg: RunConfig) -> Table:
    """Wave-function samples on the ``eps`` grid for each requested time."""
    p = cfg.params()
    osc = cfg.oscillator
    eps = cfg.grid.values()
    columns = ["m", "beta", "alpha", "t", "eps", "density", "re_psi", "im_psi"]
    with_m1 = p.m == 1
    if with_m1:
        columns.append("density_m1")
    rows = []
    for t in cfg.times():
        psi = cf.psi_ecs_t(p, eps, t, osc)
        dens = np.abs(psi) ** 2
        extra = cf.density_m1(p, eps, t, osc) if with_m1 else None
        for k, e in enumerate(eps):
            row = _param_cols(cfg, cfg.beta) + [t, e, dens[k], psi[k].real, psi[k].imag]
            if with_m1:
                row.append(extra[k])
            rows.append(row)
    return Table(columns, rows, _meta(cfg))


def _constants(cfg, beta):
    return mo.moment_constants(cfg.m, beta, paper_literal=cfg.paper_literal)


def cmd_width(cfg: RunConfig) -> Table:
    """Width, ratio to the ground-state width, momentum width and product over time."""
    p = cfg.params()
    osc = cfg.oscillator
    mc = _constants(cfg, p.beta)
    t = cfg.times()
    rep = mo.moment_report(p, osc, t, mc)
    rows = []
    for k in range(len(rep.times)):
        rows.append(_param_cols(cfg, cfg.beta) + [
            rep.times[k], rep.delta_x[k], rep.delta_x[k] / osc.x0,
            rep.delta_p[k], rep.product[k], rep.mean_x[k],
        ])
    columns = ["m", "beta", "alpha", "t", "delta_x", "ratio_x", "delta_p", "product", "mean_x"]
    return Table(columns, rows, _meta(cfg))


def cmd_squeeze_scan(cfg: RunConfig) -> Table:
    """Per-beta range of ``dx/dx0`` over one period and the squeezing flag."""
    if len(cfg.betas) < 2:
        raise UsageError("--beta/--alpha: squeeze-scan needs at least two values")
    rows = []
    for beta in cfg.betas:
        lo, hi = mo.ratio_range(_constants(cfg, beta))
        margin = 1.0 - lo
        if abs(margin) <= mo.SQUEEZE_TOL:
            margin = 0.0
        rows.append(_param_cols(cfg, beta) + [lo, hi, margin > 0, margin])
    columns = ["m", "beta", "alpha", "min_ratio", "max_ratio", "squeezed", "margin"]
    return Table(columns, rows, _meta(cfg))


def cmd_verify(cfg: RunConfig) -> tuple[dict, bool]:
    """Run the full cross-validation suite; returns ``(report, overall_pass)``."""
    opts = checks.VerifyOptions(
        trunc_dim=cfg.trunc_dim,
        paper_literal=cfg.paper_literal,
        rel_tol=cfg.rel_tol,
        config=cfg.oscillator,
    )
    if cfg.betas:
        opts.beta_values = tuple(cfg.betas)
    if cfg.m_given:
        opts.m_values = (cfg.m,)
    results = checks.run_all(opts)
    overall = all(c.passed for c in results)
    report = {
        "checks": [c.as_dict() for c in results],
        "overall": overall,
        "paper_literal_constants": cfg.paper_literal,
        "erratum_first_order_C2": checks.erratum_residuals(opts.beta_values),
    }
    return report, overall


def write_figures(out_dir: Path, osc: OscillatorConfig) -> list[Path]:
    """Data series for the density snapshots and the two width panels."""
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    snapshots = RunConfig("density", m=1, betas=[4.0], oscillator=osc,
                          grid=GridSpec(-6, 6, 241), t_min=0.0, t_max=osc.period / 2, t_steps=5)
    written.append(_write_table(cmd_density(snapshots), out_dir / "fig1_density.csv"))
    for name, betas in (("fig2_width.csv", [2.0, 4.0, 8.0]), ("fig3_width.csv", [0.25, 0.5, 1.0])):
        rows = []
        for beta in betas:
            tab = cmd_width(RunConfig("width", m=1, betas=[beta], oscillator=osc, t_steps=129))
            rows.extend(tab.rows)
        written.append(_write_table(Table(tab.columns, rows), out_dir / name))
    return written


def _meta(cfg):
    osc = cfg.oscillator
    return {
        "m": cfg.m,
        "beta": cfg.betas if len(cfg.betas) > 1 else cfg.betas[0],
        "alpha": [math.sqrt(b) for b in cfg.betas] if len(cfg.betas) > 1 else math.sqrt(cfg.betas[0]),
        "phi": cfg.phi,
        "mass": osc.mass,
        "omega": osc.omega,
        "hbar": osc.hbar,
        "paper_literal_constants": cfg.paper_literal,
    }


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    v = float(v)
    return v if math.isfinite(v) else None


def render_json(table: Table) -> str:
    rows = [{c: _jsonable(v) for c, v in zip(table.columns, row)} for row in table.rows]
    return json.dumps({"params": table.meta, "columns": table.columns, "rows": rows}, indent=1) + "\n"


def render_verify_csv(report: dict) -> str:
    cols = ["check_name", "residual", "tolerance", "pass"]
    rows = [[c["check_name"], "" if c["residual"] is None else fmt(c["residual"]),
             fmt(c["tolerance"]), fmt(c["pass"])] for c in report["checks"]]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    writer.writerows(rows)
    return buf.getvalue()


def _write_table(table, path):
    Path(path).write_text(render_csv(table), encoding="utf-8", newline="")
    return Path(path)


def _emit(text, out_path):
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8", newline="")
    else:
        sys.stdout.write(text)


class UsageError(Exception):
    pass


def _positive(flag):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number, got {s!r}")
        if not (v > 0 and math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"{flag} must be positive, got {s!r}")
        return v
    return conv


def _nonneg(flag):
    def conv(s):
        try:
            v = float(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects a number, got {s!r}")
        if not (v >= 0 and math.isfinite(v)):
            raise argparse.ArgumentTypeError(f"{flag} must be non-negative, got {s!r}")
        return v
    return conv


def _count(flag, minimum):
    def conv(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{flag} expects an integer, got {s!r}")
        if v < minimum:
            raise argparse.ArgumentTypeError(f"{flag} must be >= {minimum}, got {v}")
        return v
    return conv


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_count("--m", 0), default=None, help="excitation order (default 0)")
    amp = common.add_mutually_exclusive_group()
    amp.add_argument("--beta", type=_nonneg("--beta"), nargs="+", help="intensity |alpha|^2")
    amp.add_argument("--alpha", type=_nonneg("--alpha"), nargs="+", help="amplitude |alpha|")
    common.add_argument("--phi", type=float, default=0.0, help="phase of alpha in radians")
    common.add_argument("--omega", type=_positive("--omega"), default=1.0)
    common.add_argument("--mass", type=_positive("--mass"), default=1.0)
    common.add_argument("--hbar", type=_positive("--hbar"), default=1.0)
    common.add_argument("--eps-min", type=float, default=-6.0)
    common.add_argument("--eps-max", type=float, default=6.0)
    common.add_argument("--eps-points", type=_count("--eps-points", 2), default=241)
    common.add_argument("--t-min", type=float, default=0.0)
    common.add_argument("--t-max", type=float, default=None, help="default: one period 2 pi / omega")
    common.add_argument("--t-steps", type=_count("--t-steps", 1), default=None)
    common.add_argument("--trunc-dim", type=_count("--trunc-dim", 1), default=None,
                        help="override the Fock-space truncation")
    common.add_argument("--rel-tol", type=_positive("--rel-tol"), default=1e-7,
                        help="relative tolerance of the three-way moment check")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (directory for 'figures')")
    common.add_argument("--paper-literal-constants", action="store_true",
                        help="use the S3/S4 sums exactly as printed instead of the corrected ones")

    parser = argparse.ArgumentParser(
        prog="ecstates",
        description="Excited coherent states of the harmonic oscillator.",
        epilog=COLUMNS_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, text in (
        ("density", "probability density and wave function on an eps grid"),
        ("width", "dx, dx/dx0, dp and dx*dp over time"),
        ("squeeze-scan", "squeezing range for a list of beta values"),
        ("verify", "run the cross-validation suite (JSON report)"),
        ("figures", "write the density and width figure data as CSV files"),
    ):
        sub.add_parser(name, parents=[common], help=text, epilog=COLUMNS_HELP,
                       formatter_class=argparse.RawDescriptionHelpFormatter)
    return parser


def parse_config(argv=None) -> tuple[RunConfig, argparse.ArgumentParser]:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if ns.beta is not None:
        betas = list(ns.beta)
    elif ns.alpha is not None:
        betas = [a * a for a in ns.alpha]
    else:
        betas = []
    if ns.subcommand in ("density", "width", "squeeze-scan") and not betas:
        parser.error("one of --beta/--alpha is required")
    if ns.subcommand in ("density", "width") and len(betas) > 1:
        parser.error(f"--beta/--alpha: {ns.subcommand} takes a single value")
    if not ns.eps_min < ns.eps_max:
        parser.error("--eps-min must be smaller than --eps-max")
    try:
        osc = OscillatorConfig(ns.mass, ns.omega, ns.hbar)
    except ValueError as exc:
        parser.error(str(exc))
    default_steps = {"density": 1, "width": 65}.get(ns.subcommand, 1)
    cfg = RunConfig(
        subcommand=ns.subcommand,
        m=0 if ns.m is None else ns.m,
        m_given=ns.m is not None,
        betas=betas,
        phi=ns.phi,
        oscillator=osc,
        grid=GridSpec(ns.eps_min, ns.eps_max, ns.eps_points),
        t_min=ns.t_min,
        t_max=ns.t_max,
        t_steps=ns.t_steps if ns.t_steps is not None else default_steps,
        trunc_dim=ns.trunc_dim,
        rel_tol=ns.rel_tol,
        output=ns.format or ("json" if ns.subcommand == "verify" else "csv"),
        out_path=ns.out,
        paper_literal=ns.paper_literal_constants,
    )
    return cfg, parser


def main(argv=None) -> int:
    cfg, parser = parse_config(argv)
    try:
        if cfg.subcommand == "verify":
            report, ok = cmd_verify(cfg)
            if cfg.output == "json":
                text = json.dumps(report, indent=1) + "\n"
            else:
                text = render_verify_csv(report)
            _emit(text, cfg.out_path)
            return EXIT_OK if ok else EXIT_FAIL
        if cfg.subcommand == "figures":
            if not cfg.out_path:
                parser.error("--out: figures needs an output directory")
            for path in write_figures(Path(cfg.out_path), cfg.oscillator):
                print(path)
            return EXIT_OK
        handler = {"density": cmd_density, "width": cmd_width, "squeeze-scan": cmd_squeeze_scan}
        table = handler[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.error(str(exc))
    except ECSError as exc:
        print(f"ecstates: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(render_json(table) if cfg.output == "json" else render_csv(table), cfg.out_path)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
