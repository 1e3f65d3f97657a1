"""Command-line front end.

Subcommands: verify-example, volumes, stokes, flux-bound, bernstein.
Exit codes: 0 success, 1 usage/config error, 2 tolerance failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .calibration import (
    DEFAULT_STOKES_ORDER,
    CylinderExperiment,
    bernstein_chain,
    flux_bound,
    stokes_convergence,
)
from .errors import ChainViolation, NotFMaximalError
from .graph import certify_gradient_bound
from .quadrature import (
    DEFAULT_TRUNCATION,
    MAX_DIM,
    default_order,
    gaussian_volume,
    hermite_tensor,
    truncated_ball,
    vol_f_hyperbolic,
)
from .report import ExperimentReport, to_csv, to_json
from .solutions import bernstein_family_scan, example_graph, translation_member

EXIT_OK, EXIT_USAGE, EXIT_TOLERANCE = 0, 1, 2

DEFAULT_R_GRID = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 100.0]
DEFAULT_V0_GRID = [0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0]

# per-command defaults for the shared flags
COMMAND_DEFAULTS = {
    "verify-example": {"dim": 1, "tol": 1e-6},
    "volumes": {"dim": 2, "tol": 1e-10, "radius": DEFAULT_TRUNCATION},
    "stokes": {"dim": 1, "tol": 1e-5, "radius": 4.0, "order": DEFAULT_STOKES_ORDER},
    "flux-bound": {"dim": 2, "tol": 1e-6},
    "bernstein": {"dim": 1, "tol": 1e-6},
}


_SHARED = ["command", "dim", "order", "radius", "tol", "format", "seed"]
COMMAND_FIELDS = {
    "verify-example": _SHARED + ["points", "half_width"],
    "volumes": _SHARED + ["r_grid", "limit_tol"],
    "stokes": _SHARED + ["v0", "r"],
    "flux-bound": _SHARED + ["K", "r", "R_grid"],
    "bernstein": _SHARED + ["v0_grid", "delta"],
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    dim: int = 1
    order: int | None = None
    radius: float | None = None
    tol: float = 1e-6
    format: str = "csv"
    out: str | None = None
    seed: int = 0
    # execution only: never written to output, results do not depend on it
    threads: int = 1
    points: int = 601
    half_width: float = 3.0
    r_grid: list[float] = field(default_factory=lambda: list(DEFAULT_R_GRID))
    limit_tol: float = 1e-3
    v0: float = 1.0
    r: float = 1.0
    K: float = 1.0
    R_grid: list[float] = field(default_factory=lambda: [3.0 + 0.5 * i for i in range(19)])
    v0_grid: list[float] = field(default_factory=lambda: list(DEFAULT_V0_GRID))
    delta: float = 0.01

    def validate(self) -> None:
        if self.command not in COMMAND_DEFAULTS:
            raise UsageError(f"unknown command {self.command!r}")
        if not (isinstance(self.dim, int) and 1 <= self.dim <= MAX_DIM):
            raise UsageError(f"--dim must be an integer in [1, {MAX_DIM}], got {self.dim!r}")
        if self.order is not None and not (isinstance(self.order, int) and 2 <= self.order <= 400):
            raise UsageError(f"--order must be an integer in [2, 400], got {self.order!r}")
        if self.radius is not None and not self.radius > 0:
            raise UsageError("--radius must be positive")
        if not self.tol > 0:
            raise UsageError("--tol must be positive")
        if self.format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.threads < 1:
            raise UsageError("--threads must be >= 1")
        if self.points < 2 or not self.half_width > 0:
            raise UsageError("--points must be >= 2 and --half-width positive")
        if not (self.r > 0 and self.K > 0):
            raise UsageError("--r and --K must be positive")
        if not 0 < self.delta < 1:
            raise UsageError("--delta must lie in (0, 1)")
        if not self.r_grid or any(not v > 0 for v in self.r_grid):
            raise UsageError("--r-grid needs positive values")
        if not self.R_grid or any(not v > 0 for v in self.R_grid):
            raise UsageError("--R-grid needs positive values")
        if not self.v0_grid:
            raise UsageError("--v0-grid must not be empty")

    def header(self) -> dict:
        d = asdict(self)
        return {k: d[k] for k in COMMAND_FIELDS[self.command]}


def _pmap(func, items, threads: int):
    items = list(items)
    if threads <= 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))


# -- commands -------------------------------------------------------------------

def cmd_verify_example(cfg: RunConfig) -> ExperimentReport:
    n = cfg.dim
    g = example_graph(n)
    x1 = np.linspace(-cfg.half_width, cfg.half_width, cfg.points)
    pts = np.zeros((cfg.points, n))
    pts[:, 0] = x1
    if n > 1:
        # H_f should not depend on the remaining coordinates
        pts[:, 1:] = np.random.default_rng(cfg.seed).standard_normal((cfg.points, n - 1))
    chunks = np.array_split(np.arange(cfg.points), max(1, cfg.threads))

    def evaluate(idx):
        p = pts[idx]
        return (g.field.gradient(p)[:, 0], g.field.spacelike_defect(p), g.mean_curvature(p),
                g.grad_f_dot_normal(p), g.f_mean_curvature(p), g.fmaximal_residual(p))

    parts = _pmap(evaluate, [c for c in chunks if len(c)], cfg.threads)
    up, defect, H, gfn, hf, res = (np.concatenate(col) for col in zip(*parts))
    expected = -x1 * np.exp(0.5 * x1 * x1) / n

    report = ExperimentReport(
        name="verify-example",
        columns=["x1", "u_prime", "one_minus_grad_sq", "H", "H_expected", "grad_f_dot_N",
                 "H_f", "residual"],
    )
    for i in range(cfg.points):
        report.add(x1=float(x1[i]), u_prime=float(up[i]), one_minus_grad_sq=float(defect[i]),
                   H=float(H[i]), H_expected=float(expected[i]), grad_f_dot_N=float(gfn[i]),
                   H_f=float(hf[i]), residual=float(res[i]))
    max_hf = float(np.max(np.abs(hf)))
    nz = expected != 0
    rel = float(np.max(np.abs(H[nz] - expected[nz]) / np.abs(expected[nz]))) if nz.any() else 0.0
    report.meta.update(max_abs_H_f=max_hf, max_abs_residual=float(np.max(np.abs(res))),
                       max_rel_H_error=rel)
    if not max_hf < cfg.tol:
        report.fail(f"max |H_f| = {max_hf:.3e} is not below tol = {cfg.tol:g}")
    if not rel < 1e-8:
        report.fail(f"H differs from the closed form by {rel:.3e} relative")
    return report


def cmd_volumes(cfg: RunConfig) -> ExperimentReport:
    n = cfg.dim
    order = cfg.order or default_order(n)
    R = cfg.radius
    report = ExperimentReport(
        name="volumes",
        columns=["surface", "r", "value", "error", "scheme"],
    )
    herm = gaussian_volume(n, hermite_tensor(n, order))
    ball = gaussian_volume(n, truncated_ball(n, R, order))
    report.add(surface="gauss", value=herm.value, error=herm.error, scheme=herm.scheme)
    report.add(surface="gauss", value=ball.value, error=ball.error, scheme=ball.scheme)
    if not abs(herm.value - 1.0) < cfg.tol:
        report.fail(f"Vol_f(G^{n}) = {herm.value!r} is not 1 within {cfg.tol:g}")
    if not abs(ball.value - herm.value) < max(1e-8, herm.error + ball.error):
        report.fail("truncated-ball normalisation disagrees with Hermite")

    r_grid = sorted(cfg.r_grid)
    vols = _pmap(lambda r: vol_f_hyperbolic(r, n, truncated_ball(n, R, order)), r_grid, cfg.threads)
    for r, v in zip(r_grid, vols):
        report.add(surface="hyperboloid", r=r, value=v.value, error=v.error, scheme=v.scheme)
        if r >= 100 and not abs(v.value - 1.0) < cfg.limit_tol:
            report.fail(f"Vol_f(H_{r:g}^+) = {v.value!r} is not within {cfg.limit_tol:g} of 1")
    values = [v.value for v in vols]
    if any(b <= a for a, b in zip(values, values[1:])):
        report.fail("hyperboloid volumes are not strictly increasing in r")
    return report


def cmd_stokes(cfg: RunConfig) -> ExperimentReport:
    g = translation_member(cfg.v0, cfg.dim)
    e = CylinderExperiment(g, cfg.r, cfg.radius, order=cfg.order, seed=cfg.seed)
    reports = stokes_convergence(e)
    report = ExperimentReport(
        name="stokes",
        columns=["order", "flux_sigma", "flux_hyperbolic", "flux_wall", "closure_defect",
                 "min_pairing", "K_measured", "wall_bound"],
        meta={"max_residual": e.max_residual,
              "orientation": "wall flux taken with the inward cylinder normal"},
    )
    for fr in reports:
        report.add(**fr.as_row())
    main = reports[1]
    if not abs(main.closure_defect) < cfg.tol:
        report.fail(f"closure defect {main.closure_defect:.3e} is not below tol = {cfg.tol:g}")
    half, fine = abs(reports[0].closure_defect), abs(reports[2].closure_defect)
    report.messages.append(
        f"defect at half order {half:.3e}, default {abs(main.closure_defect):.3e}, double {fine:.3e}"
    )
    if main.K_measured > 0 and abs(main.flux_wall) > main.wall_bound + 1e-9:
        report.fail("wall flux exceeds the decay bound")
    return report


def cmd_flux_bound(cfg: RunConfig) -> ExperimentReport:
    report = ExperimentReport(name="flux-bound", columns=["R", "bound"])
    R_grid = sorted(cfg.R_grid)
    bounds = [flux_bound(R, cfg.r, cfg.K, cfg.dim) for R in R_grid]
    for R, b in zip(R_grid, bounds):
        report.add(R=R, bound=b)
    tail = [b for R, b in zip(R_grid, bounds) if R >= 3]
    if any(b2 >= b1 for b1, b2 in zip(tail, tail[1:])):
        report.fail("bound is not strictly decreasing for R >= 3")
    if R_grid[-1] >= 8 and not bounds[-1] < cfg.tol:
        report.fail(f"bound at R = {R_grid[-1]:g} is {bounds[-1]:.3e}, not below {cfg.tol:g}")
    return report


def cmd_bernstein(cfg: RunConfig) -> ExperimentReport:
    scan = bernstein_family_scan(cfg.v0_grid, cfg.delta, n=cfg.dim)
    report = ExperimentReport(
        name="bernstein",
        columns=["v0", "sup_abs_uprime", "certified", "vol_sigma", "vol_hyperbolic_max_r",
                 "gradient_diagnostic", "chain_ok"],
        meta={"delta": cfg.delta, "scope": scan.meta["scope"]},
        ok=scan.ok,
        messages=list(scan.messages),
    )

    def chain(row):
        if not row["certified"]:
            return None
        g = translation_member(row["v0"], cfg.dim)
        try:
            bound = certify_gradient_bound(g, cfg.delta)
            return bernstein_chain(g, bound, tol=cfg.tol), None
        except (ChainViolation, NotFMaximalError) as exc:
            return None, str(exc)

    chains = _pmap(chain, scan.rows, cfg.threads)
    for row, res in zip(scan.rows, chains):
        out = dict(v0=row["v0"], sup_abs_uprime=row["sup_abs_uprime"], certified=row["certified"])
        if res is not None:
            chain_report, err = res
            if chain_report is None:
                out["chain_ok"] = False
                report.fail(f"v0={row['v0']:g}: {err}")
            else:
                vals = {}
                for r in chain_report.rows:
                    vals[r["quantity"]] = r["value"]
                out.update(vol_sigma=vals["vol_sigma"], vol_hyperbolic_max_r=vals["vol_hyperbolic"],
                           gradient_diagnostic=vals["gradient_diagnostic"], chain_ok=True)
        report.add(**out)
    return report


COMMANDS = {
    "verify-example": cmd_verify_example,
    "volumes": cmd_volumes,
    "stokes": cmd_stokes,
    "flux-bound": cmd_flux_bound,
    "bernstein": cmd_bernstein,
}


# -- argument handling ----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False, argument_default=argparse.SUPPRESS)
    common.add_argument("--dim", type=int, help="dimension n of the base space (1..4)")
    common.add_argument("--order", type=int, help="quadrature order")
    common.add_argument("--radius", type=float, help="truncation / cylinder radius R")
    common.add_argument("--tol", type=float, help="pass/fail tolerance")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--seed", type=int, help="seed for sampled quantities")
    common.add_argument("--threads", type=int, help="worker threads; output does not depend on it")
    common.add_argument("--config", help="JSON file of defaults, overridden by flags")

    parser = _Parser(prog="fmaximal", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify-example", parents=[common], argument_default=argparse.SUPPRESS,
                       help="curvatures of the non-planar example on an x1 grid")
    p.add_argument("--points", type=int)
    p.add_argument("--half-width", dest="half_width", type=float)

    p = sub.add_parser("volumes", parents=[common], argument_default=argparse.SUPPRESS,
                       help="Vol_f(G^n) and Vol_f(H_r^+) over an r grid")
    p.add_argument("--r-grid", dest="r_grid", type=_floats)
    p.add_argument("--limit-tol", dest="limit_tol", type=float)

    p = sub.add_parser("stokes", parents=[common], argument_default=argparse.SUPPRESS,
                       help="truncated-cylinder flux balance for a translation member")
    p.add_argument("--v0", type=float)
    p.add_argument("--r", type=float)

    p = sub.add_parser("flux-bound", parents=[common], argument_default=argparse.SUPPRESS,
                       help="the wall-flux decay bound over an R grid")
    p.add_argument("--K", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--R-grid", dest="R_grid", type=_floats)

    p = sub.add_parser("bernstein", parents=[common], argument_default=argparse.SUPPRESS,
                       help="rigidity witness over the translation family")
    p.add_argument("--v0-grid", dest="v0_grid", type=_floats)
    p.add_argument("--delta", type=float)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Defaults, then the JSON config file, then explicit flags."""
    given = vars(args).copy()
    command = given.pop("command")
    merged: dict = dict(COMMAND_DEFAULTS[command])
    path = given.pop("config", None)
    if path:
        try:
            with open(path) as fh:
                loaded = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise UsageError("config file must hold a JSON object")
        merged.update({k.replace("-", "_"): v for k, v in loaded.items()})
    merged.update(given)
    known = {f.name for f in fields(RunConfig)} - {"command"}
    unknown = set(merged) - known
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    cfg = RunConfig(command=command, **merged)
    cfg.validate()
    return cfg


def render(report: ExperimentReport, cfg: RunConfig) -> str:
    report.meta = {"tool": f"fmaximal {__version__}", "config": cfg.header(), "seed": cfg.seed,
                   **report.meta}
    return to_json(report) if cfg.format == "json" else to_csv(report)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except (UsageError, TypeError) as exc:
        print(f"fmaximal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        report = COMMANDS[cfg.command](cfg)
    except (NotFMaximalError, ChainViolation) as exc:
        print(f"fmaximal: {exc}", file=sys.stderr)
        return EXIT_TOLERANCE
    except ValueError as exc:
        print(f"fmaximal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(report, cfg)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for msg in report.messages:
        print(f"fmaximal: {msg}", file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
