"""Command-line front end: kernel evaluation, verification sweeps, self test.

Exit codes: 0 on success, 1 when a stability gate or a self-test invariant
fails, 2 on usage, domain and configuration errors.
"""
import argparse
import itertools
import logging
import os
import sys
from dataclasses import replace
from typing import List, Optional

import numpy as np
import pandas as pd

from laguerre_project import __version__
from laguerre_project.src.analysis.battery import (
    LEMMA_IDS,
    build_sweep_config,
    run_endpoint,
)
from laguerre_project.src.analysis.report import (
    LIMITATION,
    SweepReport,
    criterion_report,
    summary_json,
)
from laguerre_project.src.analysis.sweeps import SweepConfig, difference_spot_check, run_sweep
from laguerre_project.src.kernels.family import TAGS
from laguerre_project.src.kernels.heat import heat_dx, heat_kernel
from laguerre_project.src.kernels.poisson import poisson_deriv_kernel, poisson_kernel
from laguerre_project.src.kernels.singular import frac_kernel, multiplier_kernel, riesz_kernel
from laguerre_project.src.setting.quad import (
    RuleCache,
    gamma_alpha_rule,
    gauss_jacobi_rule,
    integrate,
)
from laguerre_project.src.setting.specfun import laguerre_table
from laguerre_project.src.utils.config import RunConfig
from laguerre_project.src.utils.errors import DomainError, NumericError
from laguerre_project.src.utils.registry import OPERATOR_NAMES, PHI_NAMES, load_phi

logger = logging.getLogger(__name__)

SUITES = ("c1", "c2", "lemmas", "atoms", "bmo", "all")
TIMED_TAGS = ("heat", "poisson", "poisson_deriv")
VERBOSITY = (logging.WARNING, logging.INFO, logging.DEBUG)


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI file with [run], [quad], [grid], [verify].")
    common.add_argument("--output", dest="output_dir", help="Directory of the reports.")
    common.add_argument("--threads", type=int, help="Worker threads of the sweeps.")
    common.add_argument("--alpha", type=float, help="Type parameter, alpha > -1/2.")
    common.add_argument("--seed", type=int, help="Seed of the random batteries.")
    common.add_argument("--cache-dir", dest="cache_dir", help="Quadrature rule cache.")
    common.add_argument("-v", "--verbose", action="count", default=0)
    return common


def build_parser() -> argparse.ArgumentParser:
    """Return the parser with the kernel-eval, verify and selftest commands."""
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="laguerre-endpoint",
        description="Laguerre-measure kernels, operators and endpoint-estimate sweeps.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    commands = parser.add_subparsers(dest="command", required=True)

    kernel = commands.add_parser(
        "kernel-eval", parents=[common], help="Evaluate a kernel on points or grids."
    )
    kernel.add_argument("--kernel", required=True, choices=TAGS)
    kernel.add_argument("--t", type=float, nargs="+", help="Times, t > 0.")
    kernel.add_argument("--r", type=float, help="Radius of heat_dx, 0 < r < 1.")
    kernel.add_argument("--x", type=float, nargs="+")
    kernel.add_argument("--y", type=float, nargs="+")
    kernel.add_argument(
        "--grid", nargs="+", default=[], help="Grids name=lo:hi:count, name in t, x, y."
    )
    kernel.add_argument("--n", type=int, default=0, help="Space derivative order.")
    kernel.add_argument("--k", type=int, default=0, help="Time derivative order.")
    kernel.add_argument("--omega", type=float, default=1.0)
    kernel.add_argument("--phi", choices=PHI_NAMES, default="cos")
    kernel.add_argument("--beta", type=float, default=0.5)
    kernel.add_argument("--out", help="CSV file; stdout when omitted.")
    kernel.set_defaults(handler=cmd_kernel_eval, parser=kernel)

    verify = commands.add_parser(
        "verify", parents=[common], help="Run verification sweeps and batteries."
    )
    verify.add_argument("--suite", choices=SUITES, default="all")
    verify.add_argument("--operator", choices=OPERATOR_NAMES)
    verify.add_argument("--n", type=int)
    verify.add_argument("--k", type=int)
    verify.add_argument("--omega", type=float)
    verify.add_argument("--rho", type=float)
    verify.add_argument("--beta", type=float)
    verify.add_argument("--phi", choices=PHI_NAMES)
    verify.add_argument("--lemma", choices=LEMMA_IDS + ("all",))
    verify.add_argument("--count", type=int, help="Atoms or test functions per battery.")
    verify.add_argument("--level", dest="family_level", type=int)
    verify.add_argument("--x-points", dest="x_points", type=int)
    verify.add_argument("--n-r", dest="n_r", type=int)
    verify.add_argument("--n-s", dest="n_s", type=int)
    verify.add_argument("--n-y", dest="n_y", type=int)
    verify.add_argument("--t-count", dest="t_count", type=int)
    verify.add_argument(
        "--stability-threshold", dest="stability_threshold", type=float
    )
    verify.add_argument(
        "--negative-control",
        action="store_true",
        help=(
            "Run the c1 sweep with W_t at the grid edge t_min in place of the "
            "d_x-kernel, on a fixed interval family; its gate must fail."
        ),
    )
    verify.set_defaults(handler=cmd_verify, parser=verify)

    selftest = commands.add_parser(
        "selftest", parents=[common], help="Check the library invariants."
    )
    selftest.set_defaults(handler=cmd_selftest, parser=selftest)
    return parser


CONFIG_ARGUMENTS = (
    "output_dir",
    "threads",
    "alpha",
    "seed",
    "cache_dir",
    "operator",
    "n",
    "k",
    "omega",
    "rho",
    "beta",
    "phi",
    "lemma",
    "count",
    "family_level",
    "x_points",
    "n_r",
    "n_s",
    "n_y",
    "t_count",
    "stability_threshold",
)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Return the RunConfig of the file (if any) with the flags applied."""
    overrides = {}
    if args.command == "verify":
        overrides = {name: getattr(args, name, None) for name in CONFIG_ARGUMENTS}
    else:
        for name in ("output_dir", "threads", "alpha", "seed", "cache_dir"):
            overrides[name] = getattr(args, name, None)
    if args.config:
        return RunConfig.from_file(args.config, **overrides)
    return RunConfig().with_overrides(**overrides)


def configure_logging(verbosity: int):
    logging.basicConfig(
        level=VERBOSITY[min(verbosity, len(VERBOSITY) - 1)],
        format="%(asctime)s %(name)s %(levelname)s: %(message)s",
        stream=sys.stderr,
    )


def _config_comments(cfg: RunConfig) -> List[str]:
    lines = [f"laguerre-endpoint {__version__}", f"config_hash = {cfg.config_hash()}"]
    lines.extend(line for line in cfg.to_ini().splitlines() if line)
    return lines


def _parse_grid(token: str, parser: argparse.ArgumentParser):
    name, _, spec = token.partition("=")
    parts = spec.split(":")
    if name not in ("t", "x", "y") or len(parts) != 3:
        parser.error(f"argument --grid: expected name=lo:hi:count, got {token!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        parser.error(f"argument --grid: expected name=lo:hi:count, got {token!r}")
    if count < 1:
        parser.error(f"argument --grid: expected a positive count, got {token!r}")
    return name, np.linspace(lo, hi, count)


def _kernel_axes(args: argparse.Namespace):
    parser = args.parser
    axes = {"t": args.t, "x": args.x, "y": args.y}
    for token in args.grid:
        name, values = _parse_grid(token, parser)
        axes[name] = values
    timed = args.kernel in TIMED_TAGS
    if timed and axes["t"] is None:
        parser.error(f"argument --t: required for kernel {args.kernel}")
    if not timed:
        axes["t"] = [np.nan]
    for name in ("x", "y"):
        if axes[name] is None:
            parser.error(f"argument --{name}: expected at least one point")
        if np.any(np.asarray(axes[name]) < 0):
            parser.error(f"argument --{name}: expected points >= 0, got {list(axes[name])}")
    if timed and np.any(np.asarray(axes["t"]) <= 0):
        parser.error(f"argument --t: expected times > 0, got {list(axes['t'])}")
    if args.kernel == "heat_dx" and not (args.r is not None and 0 < args.r < 1):
        parser.error(f"argument --r: expected a radius in (0, 1), got {args.r}")
    return [np.unique(np.asarray(axes[name], dtype=float)) for name in ("t", "x", "y")]


def evaluate_kernel(args: argparse.Namespace, cfg: RunConfig, t: float, x: float, y: float) -> float:
    """Return one kernel value for the kernel-eval command."""
    alpha = cfg.alpha_param()
    kernel = args.kernel
    if kernel == "heat":
        value = heat_kernel(t, x, y, alpha, cfg.n_s)
    elif kernel == "heat_dx":
        value = heat_dx(args.n, args.r, x, y, alpha, cfg.n_s)
    elif kernel == "poisson":
        value = poisson_kernel(t, x, y, alpha, cfg.n_r, cfg.n_s)
    elif kernel == "poisson_deriv":
        value = poisson_deriv_kernel(args.n, args.k, t, x, y, alpha, cfg.n_r, cfg.n_s)
    elif kernel == "riesz":
        value = riesz_kernel(args.n, x, y, alpha, n_r=cfg.n_r, n_s=cfg.n_s)
    elif kernel == "fractional":
        value = frac_kernel(args.omega, x, y, alpha, n_r=cfg.n_r, n_s=cfg.n_s)
    else:
        value = multiplier_kernel(load_phi(args.phi, args.beta), x, y, alpha, n_r=cfg.n_r)
    return float(value)


def cmd_kernel_eval(args: argparse.Namespace, cfg: RunConfig) -> int:
    """Write a (t, x, y, value) table, rows sorted by (t, x, y)."""
    times, xs, ys = _kernel_axes(args)
    rows = [
        {"t": t, "x": x, "y": y, "value": evaluate_kernel(args, cfg, t, x, y)}
        for t, x, y in itertools.product(times, xs, ys)
    ]
    table = pd.DataFrame(rows, columns=["t", "x", "y", "value"])
    comments = _config_comments(cfg) + [
        f"kernel = {args.kernel}",
        f"n = {args.n}",
        f"k = {args.k}",
        f"omega = {args.omega}",
        f"r = {args.r}",
        f"phi = {args.phi}",
    ]
    text = "".join(f"# {line}\n" for line in comments) + table.to_csv(
        index=False, float_format="%.17g"
    )
    if args.out:
        with open(args.out, "w", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _statepoint(cfg: RunConfig, **updates) -> dict:
    statepoint = {
        "alpha": cfg.alpha,
        "level": cfg.family_level,
        "operator": cfg.operator,
        "n": cfg.n,
        "k": cfg.k,
        "omega": cfg.omega,
        "rho": cfg.rho,
        "beta": cfg.beta,
        "phi": cfg.phi,
        "x_points": cfg.x_points,
        "n_y": cfg.n_y,
        "n_r": cfg.n_r,
        "n_s": cfg.n_s,
        "t_min": cfg.t_min,
        "t_max": cfg.t_max,
        "t_count": cfg.t_count,
        "seed": cfg.seed,
        "count": cfg.count,
        "threshold": cfg.stability_threshold,
    }
    statepoint.update(updates)
    return statepoint


def _sweep_config(cfg: RunConfig, condition: str, **updates) -> SweepConfig:
    statepoint = _statepoint(cfg, condition=condition, **updates)
    sweep_cfg = build_sweep_config(statepoint, cfg.provenance())
    return replace(sweep_cfg, threads=cfg.worker_count())


def _spot_check_report(sweep_cfg: SweepConfig, report: SweepReport) -> SweepReport:
    check = difference_spot_check(sweep_cfg, report)
    return SweepReport(
        report.name,
        "c1_difference",
        check.assign(value=check["difference"]),
        provenance=dict(report.provenance),
        passed=bool(check["passed"].all()),
        notes=[],
    )


def run_suite(suite: str, cfg: RunConfig, negative_control: bool = False) -> List[SweepReport]:
    """Run a verification suite and return its reports in run order."""
    reports = []
    if suite in ("c1", "all"):
        if negative_control:
            sweep_cfg = _sweep_config(cfg, "negative_control")
            reports.append(run_sweep(sweep_cfg, "negative_control"))
        else:
            sweep_cfg = _sweep_config(cfg, "c1")
            report = run_sweep(sweep_cfg, "c1")
            reports.extend([report, _spot_check_report(sweep_cfg, report)])
    if suite in ("c2", "all"):
        reports.append(run_sweep(_sweep_config(cfg, "c2"), "c2"))
    if suite in ("lemmas", "all"):
        lemmas = LEMMA_IDS if cfg.lemma == "all" else (cfg.lemma,)
        for lemma in lemmas:
            sweep_cfg = _sweep_config(cfg, "lemma", operator="lemma", lemma=lemma)
            reports.append(run_sweep(sweep_cfg, "lemma"))
    for name, condition in (("atoms", "h1_l1"), ("bmo", "linf_bmo")):
        if suite in (name, "all"):
            report = run_endpoint(_statepoint(cfg, condition=condition))
            report.provenance.update(cfg.provenance())
            reports.append(report)
    return reports


def write_reports(reports: List[SweepReport], cfg: RunConfig) -> pd.DataFrame:
    """Write one CSV per report, the criterion table and the JSON summary."""
    os.makedirs(cfg.output_dir, exist_ok=True)
    comments = _config_comments(cfg)
    for index, report in enumerate(reports):
        path = os.path.join(
            cfg.output_dir, f"{index:02d}_{report.name}_{report.condition}.csv"
        )
        report.to_csv(path, comments + [f"note = {note}" for note in report.notes])
    table = criterion_report(reports)
    with open(os.path.join(cfg.output_dir, "criterion_report.csv"), "w", newline="") as handle:
        for line in comments + [f"limitation = {LIMITATION}"]:
            handle.write(f"# {line}\n")
        table.to_csv(handle, index=False, float_format="%.12g")
    provenance = {**cfg.provenance(), "seed": cfg.seed}
    with open(os.path.join(cfg.output_dir, "summary.json"), "w") as handle:
        handle.write(summary_json(table, provenance))
        handle.write("\n")
    return table


def cmd_verify(args: argparse.Namespace, cfg: RunConfig) -> int:
    """Run the selected suite; exit 1 listing the rows that failed their gate."""
    reports = run_suite(args.suite, cfg, args.negative_control)
    table = write_reports(reports, cfg)
    failed = table[~table["passed"].fillna(False).astype(bool)]
    if failed.empty:
        logger.info("All %d gates passed.", len(table))
        return 0
    sys.stderr.write("Failing gates:\n")
    sys.stderr.write(failed.to_string(index=False) + "\n")
    return 1


def _orthonormality(cfg: RunConfig, cache: Optional[RuleCache]):
    worst = 0.0
    for alpha in (-0.25, 0.0, 0.5, 1.0, 2.5):
        rule = cache.get("gen_laguerre", alpha, 64) if cache else gamma_alpha_rule(alpha, 64)
        table = laguerre_table(20, alpha, rule.nodes)
        gram = (table * rule.weights) @ table.T
        worst = max(worst, float(np.max(np.abs(gram - np.eye(21)))))
    return worst < 1e-8, f"max |<L_j, L_k> - delta_jk)| = {worst:.3g}"


def _conservation(cfg: RunConfig, cache: Optional[RuleCache]):
    alpha = cfg.alpha_param()
    rule = cache.get("gen_laguerre", alpha, 128) if cache else gamma_alpha_rule(alpha, 128)
    mass = float(np.dot(rule.weights, heat_kernel(1.0, 1.0, rule.nodes, alpha)))
    return abs(mass - 1) < 1e-8, f"int W_1(1, y) dgamma(y) = {mass:.15g}"


def _eigen_identity(cfg: RunConfig, cache: Optional[RuleCache]):
    alpha = cfg.alpha_param()
    rule = cache.get("gen_laguerre", alpha, 128) if cache else gamma_alpha_rule(alpha, 128)
    table = laguerre_table(3, alpha, rule.nodes)
    applied = float(np.dot(rule.weights, heat_kernel(1.0, 1.0, rule.nodes, alpha) * table[3]))
    expected = float(np.exp(-3.0) * laguerre_table(3, alpha, 1.0)[3])
    error = abs(applied - expected)
    return error < 1e-7, f"|W_1 L_3(1) - e^-3 L_3(1)| = {error:.3g}"


def _quadrature_refinement(cfg: RunConfig, cache: Optional[RuleCache]):
    alpha = cfg.alpha_param()
    if cache:
        coarse, fine = cache.get("jacobi", alpha, 32), cache.get("jacobi", alpha, 64)
    else:
        coarse, fine = gauss_jacobi_rule(alpha, 32), gauss_jacobi_rule(alpha, 64)
    gap = abs(integrate(np.cos, coarse) - integrate(np.cos, fine))
    return gap < 1e-12, f"Gauss-Jacobi 32 vs 64 nodes on cos: {gap:.3g}"


SELFTESTS = (
    ("orthonormality", _orthonormality),
    ("conservation", _conservation),
    ("eigen_identity", _eigen_identity),
    ("quadrature_refinement", _quadrature_refinement),
)


def cmd_selftest(args: argparse.Namespace, cfg: RunConfig) -> int:
    """Check the library invariants; exit 1 naming the first failures."""
    cache = RuleCache(cfg.cache_dir) if cfg.cache_dir else None
    status = 0
    for name, check in SELFTESTS:
        try:
            passed, detail = check(cfg, cache)
        except NumericError as err:
            passed, detail = False, str(err)
        sys.stdout.write(f"{'PASS' if passed else 'FAIL'} {name}: {detail}\n")
        if not passed:
            status = 1
    return status


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line and return its exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.verbose)
        cfg = build_config(args)
        cfg.alpha_param()
        return args.handler(args, cfg)
    except SystemExit as err:
        return 0 if err.code is None else int(err.code)
    except (DomainError, ValueError) as err:
        # DomainError, ConfigError and CapacityError are all ValueErrors
        logger.error("%s", err)
        sys.stderr.write(f"error: {err}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
